//! Standard presentations and random generators for property runs.

use rand::Rng;

use crate::field::Field;
use crate::graded::QuadraticPresentation;
use crate::linalg::{Matrix, Subspace};

fn names(n: usize) -> Vec<String> {
    const LETTERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    (0..n)
        .map(|i| LETTERS.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string()))
        .collect()
}

fn from_vectors<F: Field>(f: &F, n: usize, rels: Vec<Vec<(i64, usize, usize)>>) -> QuadraticPresentation<F> {
    let mut cols = Matrix::zeros(f, n * n, rels.len());
    for (k, rel) in rels.iter().enumerate() {
        for &(c, i, j) in rel {
            cols.set(i * n + j, k, f.from_i64(c));
        }
    }
    QuadraticPresentation::new(f, names(n), Subspace::from_span(&cols)).expect("well-formed presentation")
}

/// `k[x_1, …, x_n]`: relations `x_i x_j - x_j x_i`.
pub fn polynomial<F: Field>(f: &F, n: usize) -> QuadraticPresentation<F> {
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(vec![(1, i, j), (-1, j, i)]);
        }
    }
    from_vectors(f, n, rels)
}

/// `Λ(x_1, …, x_n)`: relations `x_i x_i` and `x_i x_j + x_j x_i`.
pub fn exterior<F: Field>(f: &F, n: usize) -> QuadraticPresentation<F> {
    let mut rels = Vec::new();
    for i in 0..n {
        rels.push(vec![(1, i, i)]);
        for j in i + 1..n {
            rels.push(vec![(1, i, j), (1, j, i)]);
        }
    }
    from_vectors(f, n, rels)
}

/// The free algebra on `n` generators.
pub fn free<F: Field>(f: &F, n: usize) -> QuadraticPresentation<F> {
    from_vectors(f, n, Vec::new())
}

/// `k⟨x, y⟩ / (yx - q·xy)`.
pub fn quantum_plane<F: Field>(f: &F, q: F::Elem) -> QuadraticPresentation<F> {
    let mut cols = Matrix::zeros(f, 4, 1);
    cols.set(2, 0, f.one());
    cols.set(1, 0, f.neg(&q));
    QuadraticPresentation::new(f, names(2), Subspace::from_span(&cols)).expect("well-formed presentation")
}

/// A presentation with `n_gen` generators and a relation space of dimension `dim_w`
/// spanned by uniformly random vectors (resampled until independent).
pub fn random_presentation<F: Field, R: Rng>(
    f: &F,
    rng: &mut R,
    n_gen: usize,
    dim_w: usize,
    sample: impl Fn(&mut R) -> F::Elem,
) -> QuadraticPresentation<F> {
    let ambient = n_gen * n_gen;
    assert!(dim_w <= ambient, "relation space larger than V⊗V");
    loop {
        let m = Matrix::from_fn(f, ambient, dim_w, |_, _| sample(rng));
        let s = Subspace::from_span(&m);
        if s.dim() == dim_w {
            return QuadraticPresentation::new(f, names(n_gen), s).expect("well-formed presentation");
        }
    }
}

/// Uniform residue sampler for GF(p).
pub fn uniform_residue<R: Rng>(p: u32) -> impl Fn(&mut R) -> u32 {
    move |rng: &mut R| rng.gen_range(0..p)
}

/// A random invertible `n × n` matrix.
pub fn random_invertible<F: Field, R: Rng>(f: &F, rng: &mut R, n: usize, sample: &impl Fn(&mut R) -> F::Elem) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(f, n, n, |_, _| sample(rng));
        if n == 0 || m.inverse().is_some() {
            return m;
        }
    }
}

/// Degree-one data `s11: B¹ ⊗ A¹ → A¹ ⊗ B¹` of the form `b_i ⊗ a ↦ c_i·g^{k_i}(a) ⊗ b_i`,
/// with `g` invertible, `c_i ≠ 0` and `k_i ∈ {0, 1, 2}`. The automorphisms `c_i g^{k_i}`
/// commute, so this descends whenever `g ⊗ g` preserves the relations of `A` and the
/// relations of `B` are multihomogeneous.
pub fn random_diagonal_twist<F: Field, R: Rng>(
    f: &F,
    rng: &mut R,
    ga: usize,
    gb: usize,
    sample: impl Fn(&mut R) -> F::Elem,
) -> Matrix<F> {
    let g = random_invertible(f, rng, ga, &sample);
    let mut s = Matrix::zeros(f, ga * gb, ga * gb);
    for i in 0..gb {
        let c = loop {
            let c = sample(rng);
            if !f.is_zero(&c) {
                break c;
            }
        };
        let k = rng.gen_range(0..3);
        let mut phi = Matrix::identity(f, ga).scale(&c);
        for _ in 0..k {
            phi = phi.mul(&g);
        }
        for j in 0..ga {
            for a in 0..ga {
                s.set(a * gb + i, i * ga + j, phi.get(a, j).clone());
            }
        }
    }
    s
}
