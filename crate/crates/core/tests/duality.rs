//! Dimension tables, Koszulity, bar/cobar duality and the chain maps on the standard corpus.

use std::time::Instant;

use koszul_core::bar::{ext_table, phi_chain_map, psi_chain_map, tor_table};
use koszul_core::corpus;
use koszul_core::graded::{build_algebra, build_coring, build_pair, QuadraticPresentation};
use koszul_core::koszul::{koszul_verdict, Verdict};
use koszul_core::linalg::Subspace;
use koszul_core::{Field, Matrix, Rationals};

fn standard<F: Field>(f: &F) -> Vec<(&'static str, QuadraticPresentation<F>)> {
    vec![
        ("k[x,y]", corpus::polynomial(f, 2)),
        ("k[x,y,z]", corpus::polynomial(f, 3)),
        ("Λ(x)", corpus::exterior(f, 1)),
        ("Λ(x,y)", corpus::exterior(f, 2)),
        ("free(x,y)", corpus::free(f, 2)),
    ]
}

/// `dim ∩_i V^{⊗i} ⊗ W ⊗ V^{⊗(n-i-2)}`, from the rank of the stacked annihilator equations.
fn brute_force_dual_dim<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> usize {
    let f = p.field();
    let g = p.n_gen();
    if n < 2 {
        return g.pow(n as u32);
    }
    // W^⊥ equations: rows of a matrix whose kernel is W
    let w = p.relations().basis();
    let ann = w.transpose().kernel_vectors().transpose();
    let mut eqs: Vec<Matrix<F>> = Vec::new();
    for i in 0..=n - 2 {
        let left = Matrix::identity(f, g.pow(i as u32));
        let right = Matrix::identity(f, g.pow((n - i - 2) as u32));
        eqs.push(left.kronecker(&ann).kronecker(&right));
    }
    let refs: Vec<&Matrix<F>> = eqs.iter().collect();
    let stacked = Matrix::vstack(&refs);
    g.pow(n as u32) - stacked.rank()
}

#[test]
fn dual_dimensions_match_the_oracle_and_the_frozen_table() {
    let f = Rationals;
    let frozen: [&[usize]; 5] = [&[1, 2, 1, 0, 0], &[1, 3, 3, 1, 0], &[1, 1, 1, 1, 1], &[1, 2, 3, 4, 5], &[1, 2, 0, 0, 0]];
    let t = Instant::now();
    for ((name, p), want) in standard(&f).into_iter().zip(frozen) {
        let c = build_coring(&p, 4).unwrap();
        let oracle: Vec<usize> = (0..=4).map(|n| brute_force_dual_dim(&p, n)).collect();
        assert_eq!(c.dims(), &oracle[..], "{name}");
        assert_eq!(c.dims(), want, "{name}");
    }
    println!("dual dimensions: {:?}", t.elapsed());
}

#[test]
fn koszulity_sweep_over_the_rationals() {
    let f = Rationals;
    let t = Instant::now();
    for (name, p) in standard(&f) {
        let pair = build_pair(&p, 5).unwrap();
        let v = koszul_verdict(&pair, 5).unwrap();
        assert_eq!(v.verdict, Verdict::KoszulUpTo(5), "{name}");
        assert!(v.table.iter().all(|row| row.iter().all(|&b| b)), "{name}");
    }
    println!("koszulity sweep: {:?}", t.elapsed());
}

#[test]
fn tor_and_ext_diagonals() {
    let f = Rationals;
    for (name, p) in standard(&f) {
        let a = build_algebra(&p, 4);
        let c = build_coring(&p, 4).unwrap();
        let tor = tor_table(&a, 4).unwrap();
        let ext = ext_table(&c, 4).unwrap();
        assert_eq!(tor.diagonal(), c.dims(), "{name}");
        assert_eq!(ext.diagonal(), a.dims(), "{name}");
        assert!(tor.off_diagonal_support().is_empty(), "{name}");
        assert!(ext.off_diagonal_support().is_empty(), "{name}");
    }
}

#[test]
fn chain_maps_are_quasi_isomorphisms() {
    let f = Rationals;
    for (name, p) in standard(&f) {
        let pair = build_pair(&p, 4).unwrap();
        let phi = phi_chain_map(&pair, 4).unwrap();
        let psi = psi_chain_map(&pair, 4).unwrap();
        assert!(phi.is_chain_map() && phi.all_isomorphisms(), "{name}: {:?}", phi.first_violation());
        assert!(psi.is_chain_map() && psi.all_isomorphisms(), "{name}: {:?}", psi.first_violation());
    }
}

#[test]
fn exterior_dual_is_the_symmetric_coalgebra() {
    let f = Rationals;
    let c = build_coring(&corpus::exterior(&f, 2), 3).unwrap();
    // C³ is spanned by symmetric tensors of degree 3
    let sym = corpus::polynomial(&f, 2);
    let a = build_algebra(&sym, 3);
    assert_eq!(c.dims(), a.dims());
    let incl = c.inclusions().unwrap();
    let s3 = Subspace::from_span(&incl[3]);
    let swap01 = koszul_core::tensor::swap(&f, 2, 2).kronecker(&Matrix::identity(&f, 2));
    assert!(s3.contains(&swap01.mul(&incl[3])));
}
