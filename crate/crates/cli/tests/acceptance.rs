//! One PASS/FAIL line per acceptance criterion, each under its time budget.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use koszul_cli::{run, Command, Options, ReportFormat};
use koszul_core::bar::{ext_table, phi_chain_map, psi_chain_map, tor_table};
use koszul_core::corpus;
use koszul_core::graded::{build_algebra, build_coring, build_pair, check_prekoszul, GradedCoring, PreKoszulPair, QuadraticPresentation};
use koszul_core::koszul::{build_slice, koszul_verdict, ComplexFlavor, Verdict};
use koszul_core::twisting::{
    build_twisted_pair, check_family, check_siglamb, check_twist_axioms, extend_sigma, matrix_twisting_build,
    verify_factorization, BuiltTwist, FamilyRole, FamilyTarget, TwistingMatrixFamily,
};
use koszul_core::{Error, Field, Matrix, PrimeField, Rationals};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn standard<F: Field>(f: &F) -> Vec<(&'static str, QuadraticPresentation<F>)> {
    vec![
        ("k[x,y]", corpus::polynomial(f, 2)),
        ("k[x,y,z]", corpus::polynomial(f, 3)),
        ("Λ(x)", corpus::exterior(f, 1)),
        ("Λ(x,y)", corpus::exterior(f, 2)),
        ("free(x,y)", corpus::free(f, 2)),
    ]
}

/// `dim ∩_i V^{⊗i} ⊗ W ⊗ V^{⊗(n-i-2)}` as `g^n` minus the rank of the stacked annihilators.
fn brute_force_dual_dim<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> usize {
    let f = p.field();
    let g = p.n_gen();
    if n < 2 {
        return g.pow(n as u32);
    }
    let ann = p.relations().basis().transpose().kernel_vectors().transpose();
    let eqs: Vec<Matrix<F>> = (0..=n - 2)
        .map(|i| {
            Matrix::identity(f, g.pow(i as u32))
                .kronecker(&ann)
                .kronecker(&Matrix::identity(f, g.pow((n - i - 2) as u32)))
        })
        .collect();
    let refs: Vec<&Matrix<F>> = eqs.iter().collect();
    g.pow(n as u32) - Matrix::vstack(&refs).rank()
}

fn c1_duality_table() -> Outcome {
    let f = Rationals;
    let frozen: [&[usize]; 5] = [&[1, 2, 1, 0, 0], &[1, 3, 3, 1, 0], &[1, 1, 1, 1, 1], &[1, 2, 3, 4, 5], &[1, 2, 0, 0, 0]];
    for ((name, p), want) in standard(&f).into_iter().zip(frozen) {
        let c = build_coring(&p, 4).map_err(|e| format!("{name}: {e}"))?;
        let oracle: Vec<usize> = (0..=4).map(|n| brute_force_dual_dim(&p, n)).collect();
        ensure(oracle == want, || format!("{name}: oracle {oracle:?} vs frozen {want:?}"))?;
        ensure(c.dims() == want, || format!("{name}: {:?} vs {want:?}", c.dims()))?;
    }
    Ok("5 presentations, N = 4".into())
}

fn c2_koszulity_sweep() -> Outcome {
    let f = Rationals;
    for (name, p) in standard(&f) {
        let pair = build_pair(&p, 5).map_err(|e| e.to_string())?;
        let v = koszul_verdict(&pair, 5).map_err(|e| format!("{name}: {e}"))?;
        ensure(v.verdict == Verdict::KoszulUpTo(5), || format!("{name}: {:?}", v.verdict))?;
        ensure(v.table.iter().all(|r| r.iter().all(|&b| b)), || format!("{name}: inexact slice"))?;
    }
    Ok("5 presentations × 6 flavors × m ≤ 5".into())
}

fn c3_flavor_agreement() -> Outcome {
    let f = gf5();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut koszul = 0;
    for k in 0..50 {
        let n_gen = 2 + k % 2;
        let dim_w = 1 + (k / 2) % 2;
        let p = corpus::random_presentation(&f, &mut rng, n_gen, dim_w, corpus::uniform_residue(5));
        let pair = build_pair(&p, 4).map_err(|e| e.to_string())?;
        let v = koszul_verdict(&pair, 4).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(v.flavors_agree(), || format!("sample {k}: flavors disagree {:?}", v.table))?;
        koszul += v.is_koszul() as usize;
    }
    Ok(format!("50 samples agree ({koszul} Koszul up to 4)"))
}

fn c4_bar_cobar() -> Outcome {
    let f = Rationals;
    for (name, p) in standard(&f) {
        let a = build_algebra(&p, 4);
        let c = build_coring(&p, 4).map_err(|e| e.to_string())?;
        let tor = tor_table(&a, 4).map_err(|e| e.to_string())?;
        let ext = ext_table(&c, 4).map_err(|e| e.to_string())?;
        ensure(tor.diagonal() == c.dims(), || format!("{name}: tor {:?}", tor.diagonal()))?;
        ensure(ext.diagonal() == a.dims(), || format!("{name}: ext {:?}", ext.diagonal()))?;
        ensure(tor.off_diagonal_support().is_empty(), || format!("{name}: tor off-diagonal"))?;
        ensure(ext.off_diagonal_support().is_empty(), || format!("{name}: ext off-diagonal"))?;
    }
    Ok("diagonals match, off-diagonal zero".into())
}

fn c5_chain_maps() -> Outcome {
    let f = Rationals;
    for (name, p) in standard(&f) {
        let pair = build_pair(&p, 4).map_err(|e| e.to_string())?;
        let phi = phi_chain_map(&pair, 4).map_err(|e| e.to_string())?;
        let psi = psi_chain_map(&pair, 4).map_err(|e| e.to_string())?;
        ensure(phi.is_chain_map() && phi.all_isomorphisms(), || format!("{name}: phi {:?}", phi.first_violation()))?;
        ensure(psi.is_chain_map() && psi.all_isomorphisms(), || format!("{name}: psi {:?}", psi.first_violation()))?;
    }
    Ok("phi, psi: no violations, all isomorphisms".into())
}

fn quantum_case<F: Field>(f: &F, q: i64) -> Result<(), String> {
    let n = 4;
    let p = corpus::free(f, 1);
    let s11 = Matrix::from_fn(f, 1, 1, |_, _| f.from_i64(q));
    let s = extend_sigma(&p, &p, &s11, n).map_err(|e| format!("descent: {e}"))?;
    let k = build_pair(&p, n).map_err(|e| e.to_string())?;
    let fact = verify_factorization(&k, &k, &s).map_err(|e| e.to_string())?;
    ensure(fact.holds(), || format!("factorization fails at {:?}", fact.first_failure))?;
    let tp = build_twisted_pair(&k, &k, &s).map_err(|e| e.to_string())?;
    let v = koszul_verdict(&tp.pair, n).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::KoszulUpTo(n), || format!("{:?}", v.verdict))?;
    let tor = tor_table(&tp.pair.algebra, n).map_err(|e| e.to_string())?;
    ensure(tor.diagonal() == tp.pair.coring.dims(), || format!("tor {:?} vs {:?}", tor.diagonal(), tp.pair.coring.dims()))?;
    // the twisted algebra is the quantum plane yx = q·xy
    let qp = build_algebra(&corpus::quantum_plane(f, f.from_i64(q)), n);
    ensure(tp.pair.algebra.dims() == qp.dims(), || "twisted algebra dims differ from the quantum plane".into())?;
    // degree-one basis is [y, x]
    let m11 = tp.pair.algebra.m(1, 1);
    let e = |k: usize| Matrix::from_fn(f, 2, 1, |i, _| if i == k { f.one() } else { f.zero() });
    let (y, x) = (e(0), e(1));
    let yx = m11.mul(&y.kronecker(&x));
    let xy = m11.mul(&x.kronecker(&y));
    ensure(yx == xy.scale(&f.from_i64(q)), || "yx ≠ q·xy".into())
}

fn c6_quantum_plane() -> Outcome {
    for q in [2, 3] {
        quantum_case(&Rationals, q).map_err(|e| format!("q = {q} over Q: {e}"))?;
        quantum_case(&gf5(), q).map_err(|e| format!("q = {q} over GF(5): {e}"))?;
    }
    Ok("q ∈ {2, 3} over Q and GF(5), N = 4".into())
}

fn koszul_menu(f: &PrimeField, k: usize) -> QuadraticPresentation<PrimeField> {
    match k % 5 {
        0 => corpus::polynomial(f, 2),
        1 => corpus::exterior(f, 2),
        2 => corpus::free(f, 2),
        3 => corpus::free(f, 1),
        _ => corpus::exterior(f, 1),
    }
}

fn c7_twisted_prekoszul() -> Outcome {
    let f = gf5();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 3;
    for k in 0..20 {
        let (pa, pb) = (koszul_menu(&f, k), koszul_menu(&f, k / 5 + k));
        let s11 = corpus::random_diagonal_twist(&f, &mut rng, pa.n_gen(), pb.n_gen(), corpus::uniform_residue(5));
        let s = extend_sigma(&pa, &pb, &s11, n).map_err(|e| format!("sample {k}: {e}"))?;
        let (a, b) = (build_algebra(&pa, n), build_algebra(&pb, n));
        ensure(check_twist_axioms(&s, (&a, &b)), || format!("sample {k}: axioms"))?;
        let (ka, kb) = (build_pair(&pa, n).unwrap(), build_pair(&pb, n).unwrap());
        let tp = build_twisted_pair(&ka, &kb, &s).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(check_prekoszul(&tp.pair), || format!("sample {k}: not pre-Koszul"))?;
    }
    Ok("20 random σ over GF(5)".into())
}

fn scaling<F: Field>(f: &F, role: FamilyRole, dims: &[usize], s: &F::Elem) -> TwistingMatrixFamily<F> {
    TwistingMatrixFamily::diagonal_scaling(role, f, 1, dims, s)
}

fn matrix_case<F: Field>(f: &F, q: i64) -> Result<(), String> {
    let n = 4;
    let p = corpus::free(f, 1);
    let a = build_algebra(&p, n);
    let qe = f.from_i64(q);
    let sig = scaling(f, FamilyRole::Sigma, a.dims(), &qe);
    check_family(&sig, &FamilyTarget::Algebra(&a)).map_err(|e| e.to_string())?;
    let lam = scaling(f, FamilyRole::Lambda, a.dims(), &f.inv(&qe).unwrap());
    ensure(check_siglamb(&sig, &lam, 1), || "siglamb (q, 1/q)".into())?;
    let Ok(BuiltTwist::Twisting(built)) = matrix_twisting_build(&FamilyTarget::Algebra(&a), &sig, n) else {
        return Err("matrix_twisting_build".into());
    };
    let ext = extend_sigma(&p, &p, &Matrix::from_fn(f, 1, 1, |_, _| qe.clone()), n).map_err(|e| e.to_string())?;
    ensure(built.maps.components() == ext.maps.components(), || "assembled σ differs from extend_sigma".into())
}

fn c8_matrix_characterization() -> Outcome {
    matrix_case(&Rationals, 2).map_err(|e| format!("Q: {e}"))?;
    matrix_case(&gf5(), 3).map_err(|e| format!("GF(5): {e}"))?;
    Ok("q-scaling family, degrees ≤ 4".into())
}

fn sign_corrupted() -> PreKoszulPair<Rationals> {
    let f = Rationals;
    let pair = build_pair(&corpus::polynomial(&f, 3), 4).unwrap();
    let mut comult: BTreeMap<_, _> = pair.coring.comult().clone();
    let d11 = comult.get_mut(&(1, 1)).unwrap();
    for r in 0..d11.rows() {
        let v = d11.get(r, 0).clone();
        d11.set(r, 0, -v);
    }
    let c = GradedCoring::from_parts(&f, pair.coring.dims().to_vec(), comult).unwrap();
    pair.with_coring(c)
}

fn c9_negative_controls() -> Outcome {
    let f = Rationals;
    let pair = build_pair(&corpus::polynomial(&f, 2), 4).unwrap();
    let truncated = pair.with_coring(pair.coring.truncate_components(1));
    let v = koszul_verdict(&truncated, 4).map_err(|e| e.to_string())?;
    ensure(v.witness() == Some(2) && v.table[2] == [false; 6], || format!("truncated: {:?}", v.verdict))?;

    let bad = sign_corrupted();
    let mut refusals = 0;
    for fl in ComplexFlavor::ALL {
        for m in 0..=4 {
            match build_slice(&bad, fl, m, true) {
                Err(Error::NotAComplex { .. }) => refusals += 1,
                Err(e) => return Err(format!("unexpected error {e}")),
                Ok(_) => {}
            }
        }
    }
    ensure(refusals > 0, || "sign-corrupted Δ accepted".into())?;

    let a = build_algebra(&corpus::free(&gf5(), 1), 3);
    let mut fam = scaling(&gf5(), FamilyRole::Sigma, a.dims(), &gf5().from_i64(2));
    fam.entries[0][0][0] = Matrix::from_fn(&gf5(), 1, 1, |_, _| gf5().from_i64(3));
    match matrix_twisting_build(&FamilyTarget::Algebra(&a), &fam, 3) {
        Err(Error::Axiom { axiom, .. }) if axiom == "sigma2" => {}
        other => return Err(format!("sigma2 violation not rejected: {:?}", other.err())),
    }
    Ok(format!("witness 2 in all flavors; {refusals} slices refused; sigma2 rejected"))
}

fn fixtures() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

fn check_once(bytes: &[u8]) -> String {
    match run(Command::Check, Some(bytes), &Options::default()) {
        Ok(o) => format!("{}{}", o.exit_code, o.report.render(ReportFormat::Json)),
        Err(e) => format!("input error: {e}"),
    }
}

fn c10_determinism() -> Outcome {
    let files = fixtures();
    for path in &files {
        let bytes = std::fs::read(path).unwrap();
        ensure(check_once(&bytes) == check_once(&bytes), || format!("{} differs between runs", path.display()))?;
    }
    Ok(format!("{} fixtures byte-identical", files.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("quadratic duality table", Duration::from_secs(1), c1_duality_table),
        ("Koszulity sweep", Duration::from_secs(10), c2_koszulity_sweep),
        ("six-flavor equivalence", Duration::from_secs(60), c3_flavor_agreement),
        ("bar/cobar duality", Duration::from_secs(30), c4_bar_cobar),
        ("chain maps", Duration::from_secs(30), c5_chain_maps),
        ("twisted tensor product", Duration::from_secs(30), c6_quantum_plane),
        ("twisted pre-Koszul", Duration::from_secs(60), c7_twisted_prekoszul),
        ("matrix characterization", Duration::from_secs(5), c8_matrix_characterization),
        ("negative controls", Duration::from_secs(5), c9_negative_controls),
        ("determinism", Duration::from_secs(60), c10_determinism),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = check();
        let dt = t.elapsed();
        let (status, detail) = match (&out, dt <= *budget) {
            (Ok(msg), true) => ("PASS", msg.clone()),
            (Ok(msg), false) => ("FAIL", format!("{msg}; over budget {budget:?}")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name} [{dt:.2?} / {budget:?}]: {detail}", k + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
