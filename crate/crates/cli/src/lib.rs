//! Library side of the `koszul` command: every subcommand runs in-process and returns
//! an exit code with a [`Report`].

pub mod input;
pub mod report;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use koszul_core::bar::{ext_table, tor_table};
use koszul_core::graded::{build_algebra, build_coring, build_pair, check_prekoszul, PreKoszulPair, QuadraticPresentation};
use koszul_core::koszul::{koszul_verdict, ComplexFlavor, KoszulVerdict, Verdict};
use koszul_core::twisting::{
    build_twisted_pair, check_twist_axioms, extend_sigma, matrix_twisting_build, prekoszul_case_split,
    verify_factorization, BuiltTwist, FamilyRole, FamilyTarget, TwistingMap,
};
use koszul_core::{corpus, Error, Field, FieldSpec, PrimeField, Rationals};

pub use input::{InputError, InputFile};
pub use report::{Report, ReportFormat};

pub const DEFAULT_MAX_DEGREE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Check,
    Dual,
    Twist,
    Hilbert,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_degree: usize,
    pub field: Option<String>,
    pub seed: Option<u64>,
    pub coring_truncate: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_degree: DEFAULT_MAX_DEGREE, field: None, seed: None, coring_truncate: None }
    }
}

/// Exit code 0 (pass) or 1 (mathematical failure) with the report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Report,
}

/// Runs a subcommand on raw input bytes, or on a seeded random input when `bytes` is `None`.
pub fn run(cmd: Command, bytes: Option<&[u8]>, opts: &Options) -> Result<Outcome, InputError> {
    let owned;
    let bytes = match bytes {
        Some(b) => b,
        None => {
            let seed = opts
                .seed
                .ok_or_else(|| InputError("either --input or --seed is required".into()))?;
            owned = seeded_input(cmd, seed, opts)?;
            &owned[..]
        }
    };
    let file = input::parse_input(bytes)?;
    match input::resolve_field(&file, opts.field.as_deref())? {
        FieldSpec::Rational => run_typed(&Rationals, cmd, &file, bytes, opts),
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p).map_err(|e| InputError(e.to_string()))?;
            run_typed(&f, cmd, &file, bytes, opts)
        }
    }
}

fn run_typed<F: Field>(f: &F, cmd: Command, file: &InputFile, bytes: &[u8], opts: &Options) -> Result<Outcome, InputError> {
    let p = input::build_presentation(f, &file.generators, &file.relations, "presentation")?;
    let n = opts.max_degree;
    let mut report = Report::new(bytes);
    report.verdict("field", f.spec().to_string());
    report.verdict("max_degree", n);
    let exit_code = match cmd {
        Command::Check => cmd_check(&p, opts, &mut report),
        Command::Dual => cmd_dual(&p, n, &mut report),
        Command::Hilbert => cmd_hilbert(&p, opts, &mut report),
        Command::Twist => cmd_twist(f, &p, file, n, &mut report)?,
    };
    Ok(Outcome { exit_code, report })
}

fn pair_for<F: Field>(p: &QuadraticPresentation<F>, opts: &Options) -> Result<PreKoszulPair<F>, Error> {
    let pair = build_pair(p, opts.max_degree)?;
    Ok(match opts.coring_truncate {
        Some(d) => pair.with_coring(pair.coring.truncate_components(d)),
        None => pair,
    })
}

fn record_verdict(report: &mut Report, prefix: &str, v: &KoszulVerdict) {
    for fl in ComplexFlavor::ALL {
        let row: Vec<bool> = v.table.iter().map(|r| r[fl.index()]).collect();
        report.exactness_table.insert(format!("{prefix}{}", fl.key()), row);
    }
    let (up_to, witness) = match v.verdict {
        Verdict::KoszulUpTo(n) => (json!(n), Value::Null),
        Verdict::NotKoszul { witness_degree } => (Value::Null, json!(witness_degree)),
    };
    report.verdict(&format!("{prefix}koszul"), v.is_koszul());
    report.verdict(&format!("{prefix}koszul_up_to"), up_to);
    report.verdict(&format!("{prefix}witness_degree"), witness);
    report.verdict(&format!("{prefix}flavors_agree"), v.flavors_agree());
}

pub fn cmd_check<F: Field>(p: &QuadraticPresentation<F>, opts: &Options, report: &mut Report) -> i32 {
    let pair = match pair_for(p, opts) {
        Ok(pair) => pair,
        Err(e) => {
            report.verdict("error", e.to_string());
            return 1;
        }
    };
    report.dims("algebra", pair.algebra.dims());
    report.dims("coring", pair.coring.dims());
    report.verdict("prekoszul", check_prekoszul(&pair));
    match koszul_verdict(&pair, opts.max_degree) {
        Ok(v) => {
            record_verdict(report, "", &v);
            if v.is_koszul() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            report.verdict("koszul", false);
            report.verdict("error", e.to_string());
            1
        }
    }
}

pub fn cmd_dual<F: Field>(p: &QuadraticPresentation<F>, n: usize, report: &mut Report) -> i32 {
    let a = build_algebra(p, n);
    let c = match build_coring(p, n) {
        Ok(c) => c,
        Err(e) => {
            report.verdict("error", e.to_string());
            return 1;
        }
    };
    let (tor, ext) = match (tor_table(&a, n), ext_table(&c, n)) {
        (Ok(t), Ok(e)) => (t, e),
        (Err(e), _) | (_, Err(e)) => {
            report.verdict("error", e.to_string());
            return 1;
        }
    };
    report.dims("algebra", a.dims());
    report.dims("coring", c.dims());
    report.dims("tor_diagonal", &tor.diagonal());
    report.dims("ext_diagonal", &ext.diagonal());
    let tor_ok = tor.diagonal() == c.dims();
    let ext_ok = ext.diagonal() == a.dims();
    report.verdict("tor = C dims", tor_ok);
    report.verdict("ext = A dims", ext_ok);
    report.verdict("tor_off_diagonal", json!(tor.off_diagonal_support()));
    report.verdict("ext_off_diagonal", json!(ext.off_diagonal_support()));
    if tor_ok && ext_ok {
        0
    } else {
        1
    }
}

/// `Σ_k (-1)^k dim C^k · dim A^{n-k}` for `1 ≤ n ≤ N`.
pub fn convolution(a: &[usize], c: &[usize]) -> Vec<i64> {
    (1..a.len().min(c.len()))
        .map(|n| {
            (0..=n)
                .map(|k| {
                    let t = (c[k] * a[n - k]) as i64;
                    if k % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect()
}

pub fn cmd_hilbert<F: Field>(p: &QuadraticPresentation<F>, opts: &Options, report: &mut Report) -> i32 {
    let pair = match pair_for(p, opts) {
        Ok(pair) => pair,
        Err(e) => {
            report.verdict("error", e.to_string());
            return 1;
        }
    };
    let (a, c) = (pair.algebra.dims(), pair.coring.dims());
    report.dims("algebra", a);
    report.dims("coring", c);
    report.verdict("algebra_series", report::series(a));
    report.verdict("coring_series", report::series(c));
    let conv = convolution(a, c);
    let vanishes = conv.iter().all(|&x| x == 0);
    report.verdict("convolution", json!(conv));
    report.verdict("convolution_vanishes", vanishes);
    let koszul = koszul_verdict(&pair, opts.max_degree).map(|v| v.is_koszul()).unwrap_or(false);
    report.verdict("koszul", koszul);
    if koszul && !vanishes {
        1
    } else {
        0
    }
}

fn fail(report: &mut Report, gate: &str, e: impl ToString) -> i32 {
    report.verdict(gate, false);
    report.verdict("error", e.to_string());
    1
}

pub fn cmd_twist<F: Field>(
    f: &F,
    pa: &QuadraticPresentation<F>,
    file: &InputFile,
    n: usize,
    report: &mut Report,
) -> Result<i32, InputError> {
    let block = file
        .twist
        .as_ref()
        .ok_or_else(|| InputError("twist needs a `twist` block".into()))?;
    let (pb, sigma): (QuadraticPresentation<F>, TwistingMap<F>) = match (&block.family, &block.sigma) {
        (Some(_), Some(_)) => return Err(InputError("give either `sigma` or `family`, not both".into())),
        (Some(fam_block), None) => {
            if input::parse_role(&fam_block.role)? != FamilyRole::Sigma {
                return Err(InputError("twist families must have role `sigma`".into()));
            }
            let k = fam_block.entries.len();
            let names: Vec<String> = match &block.second {
                Some(s) if !s.relations.is_empty() => {
                    return Err(InputError("a family twists with a free algebra; drop the relations".into()))
                }
                Some(s) if s.generators.len() != k => {
                    return Err(InputError(format!("the free side needs {k} generators")));
                }
                Some(s) => s.generators.clone(),
                None => (1..=k).map(|i| format!("t{i}")).collect(),
            };
            let pb = input::build_presentation(f, &names, &[], "second presentation")?;
            let a = build_algebra(pa, n);
            let fam = input::build_family(f, fam_block, a.dims())?;
            match matrix_twisting_build(&FamilyTarget::Algebra(&a), &fam, n) {
                Ok(BuiltTwist::Twisting(s)) => {
                    report.verdict("family", true);
                    (pb, s)
                }
                Ok(BuiltTwist::Entwining(_)) => unreachable!("sigma role builds a twisting map"),
                Err(e) => return Ok(fail(report, "family", e)),
            }
        }
        (None, sigma_entries) => {
            let second = block
                .second
                .as_ref()
                .ok_or_else(|| InputError("twist block needs a `second` presentation".into()))?;
            let pb = input::build_presentation(f, &second.generators, &second.relations, "second presentation")?;
            let s11 = input::build_sigma(f, &file.generators, &second.generators, sigma_entries.as_deref().unwrap_or(&[]))?;
            match extend_sigma(pa, &pb, &s11, n) {
                Ok(s) => {
                    report.verdict("descent", true);
                    (pb, s)
                }
                Err(e) => return Ok(fail(report, "descent", e)),
            }
        }
    };
    let (a, b) = (build_algebra(pa, n), build_algebra(&pb, n));
    report.dims("first_algebra", a.dims());
    report.dims("second_algebra", b.dims());
    if !check_twist_axioms(&sigma, (&a, &b)) {
        return Ok(fail(report, "twist_axioms", "σ fails the twisting axioms"));
    }
    report.verdict("twist_axioms", true);
    let (ka, kb) = match (build_pair(pa, n), build_pair(&pb, n)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Ok(fail(report, "pairs", e)),
    };
    let tp = match build_twisted_pair(&ka, &kb, &sigma) {
        Ok(tp) => tp,
        Err(e) => return Ok(fail(report, "twisted_pair", e)),
    };
    report.verdict("twisted_pair", true);
    report.dims("twisted_algebra", tp.pair.algebra.dims());
    report.dims("twisted_coring", tp.pair.coring.dims());
    let prekoszul = check_prekoszul(&tp.pair);
    report.verdict("prekoszul", prekoszul);
    report.verdict(
        "prekoszul_case_split",
        json!(prekoszul_case_split(&tp, ka.coring.dims(), kb.coring.dims())),
    );
    let fact = match verify_factorization(&ka, &kb, &sigma) {
        Ok(r) => r,
        Err(e) => return Ok(fail(report, "factorization", e)),
    };
    report.verdict("factorization", fact.holds());
    report.verdict(
        "factorization_failure",
        match fact.first_failure {
            None => Value::Null,
            Some((hn, m, src, dst)) => json!({"n": hn, "m": m, "source": [src.0, src.1, src.2, src.3], "target": [dst.0, dst.1, dst.2, dst.3]}),
        },
    );
    let mut ok = prekoszul && fact.holds();
    match koszul_verdict(&tp.pair, n) {
        Ok(v) => {
            ok &= v.is_koszul();
            record_verdict(report, "", &v);
        }
        Err(e) => return Ok(fail(report, "koszul", e)),
    }
    match tor_table(&tp.pair.algebra, n) {
        Ok(t) => {
            let matches = t.diagonal() == tp.pair.coring.dims();
            report.dims("twisted_tor_diagonal", &t.diagonal());
            report.verdict("dual_matches_tor", matches);
            ok &= matches;
        }
        Err(e) => return Ok(fail(report, "dual_matches_tor", e)),
    }
    Ok(if ok { 0 } else { 1 })
}

/// A random input for `--seed`: a presentation over GF(5) (or the `--field` override),
/// and for `twist` a pair of standard Koszul presentations with a random diagonal σ.
pub fn seeded_input(cmd: Command, seed: u64, opts: &Options) -> Result<Vec<u8>, InputError> {
    let spec: FieldSpec = opts
        .field
        .as_deref()
        .unwrap_or("gf5")
        .parse()
        .map_err(|e: Error| InputError(e.to_string()))?;
    let file = match spec {
        FieldSpec::Rational => seeded_file(&Rationals, cmd, seed)?,
        FieldSpec::Prime(p) => seeded_file(&PrimeField::new(p).map_err(|e| InputError(e.to_string()))?, cmd, seed)?,
    };
    Ok(serde_json::to_vec_pretty(&file).expect("input serializes"))
}

fn seeded_file<F: Field>(f: &F, cmd: Command, seed: u64) -> Result<InputFile, InputError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |r: &mut ChaCha8Rng| f.from_i64(r.gen_range(-2..=2));
    if cmd != Command::Twist {
        let n_gen = rng.gen_range(2..=3);
        let dim_w = rng.gen_range(1..=2);
        let p = corpus::random_presentation(f, &mut rng, n_gen, dim_w, sample);
        return Ok(InputFile {
            schema_version: input::SCHEMA_VERSION,
            field: Some(f.spec().to_string()),
            generators: p.generator_names().to_vec(),
            relations: input::terms_of(&p),
            twist: None,
        });
    }
    let menu = |k: usize| match k {
        0 => corpus::polynomial(f, 2),
        1 => corpus::exterior(f, 2),
        2 => corpus::free(f, 1),
        _ => corpus::exterior(f, 1),
    };
    let pa = menu(rng.gen_range(0..4));
    let pb = menu(rng.gen_range(0..4));
    let s11 = corpus::random_diagonal_twist(f, &mut rng, pa.n_gen(), pb.n_gen(), sample);
    let b_names: Vec<String> = pb.generator_names().iter().map(|s| format!("{s}'")).collect();
    let a_names = pa.generator_names();
    let (ga, gb) = (pa.n_gen(), pb.n_gen());
    let mut sigma = Vec::new();
    for b in 0..gb {
        for a in 0..ga {
            let col = b * ga + a;
            let image = (0..ga * gb)
                .filter(|&r| !f.is_zero(s11.get(r, col)))
                .map(|r| input::Term {
                    coeff: f.format(s11.get(r, col)),
                    word: input::Word([a_names[r / gb].clone(), b_names[r % gb].clone()]),
                })
                .collect();
            sigma.push(input::SigmaEntry { source: input::Word([b_names[b].clone(), a_names[a].clone()]), image });
        }
    }
    let mut second_terms = input::terms_of(&pb);
    for rel in &mut second_terms {
        for t in rel.iter_mut() {
            t.word.0[0].push('\'');
            t.word.0[1].push('\'');
        }
    }
    Ok(InputFile {
        schema_version: input::SCHEMA_VERSION,
        field: Some(f.spec().to_string()),
        generators: a_names.to_vec(),
        relations: input::terms_of(&pa),
        twist: Some(input::TwistBlock {
            second: Some(input::SecondPresentation { generators: b_names, relations: second_terms }),
            sigma: Some(sigma),
            family: None,
        }),
    })
}
