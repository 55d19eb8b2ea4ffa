//! Twisting data given by an `n × n` matrix of graded endomorphisms, with `V` of
//! dimension `n` playing the role of the free side.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedAlgebra, GradedCoring};
use crate::linalg::Matrix;

use super::{EntwiningMap, SwapComponents, TwistKind, TwistingMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyRole {
    /// `σ: T(V) ⊗ A → A ⊗ T(V)`.
    Sigma,
    /// `τ: C ⊗ (R ⊕ V) → (R ⊕ V) ⊗ C`.
    Tau,
    /// `λ: C ⊗ T(V) → T(V) ⊗ C`.
    Lambda,
}

impl FamilyRole {
    pub fn name(self) -> &'static str {
        match self {
            FamilyRole::Sigma => "sigma",
            FamilyRole::Tau => "tau",
            FamilyRole::Lambda => "lambda",
        }
    }
}

/// `entries[i][j][d]` is the degree-`d` matrix of the endomorphism `x_{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistingMatrixFamily<F: Field> {
    pub role: FamilyRole,
    pub n: usize,
    pub entries: Vec<Vec<Vec<Matrix<F>>>>,
}

pub enum FamilyTarget<'a, F: Field> {
    Algebra(&'a GradedAlgebra<F>),
    Coring(&'a GradedCoring<F>),
}

impl<F: Field> FamilyTarget<'_, F> {
    fn dims(&self) -> &[usize] {
        match self {
            FamilyTarget::Algebra(a) => a.dims(),
            FamilyTarget::Coring(c) => c.dims(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BuiltTwist<F: Field> {
    Twisting(TwistingMap<F>),
    Entwining(EntwiningMap<F>),
}

impl<F: Field> TwistingMatrixFamily<F> {
    /// `x_{ij} = δ_{ij}·s^{deg}`.
    pub fn diagonal_scaling(role: FamilyRole, field: &F, n: usize, dims: &[usize], s: &F::Elem) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        dims.iter()
                            .enumerate()
                            .map(|(d, &dim)| {
                                if i == j {
                                    Matrix::identity(field, dim).scale(&field.pow(s, d as i64).unwrap_or_else(|| field.zero()))
                                } else {
                                    Matrix::zeros(field, dim, dim)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        TwistingMatrixFamily { role, n, entries }
    }

    pub fn identity(role: FamilyRole, field: &F, n: usize, dims: &[usize]) -> Self {
        Self::diagonal_scaling(role, field, n, dims, &field.one())
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .first()
            .and_then(|r| r.first())
            .map_or(0, |v| v.len().saturating_sub(1))
    }

    pub fn entry(&self, i: usize, j: usize, d: usize) -> &Matrix<F> {
        &self.entries[i][j][d]
    }

    fn block_matrix(&self, d: usize, transpose_blocks: bool) -> Matrix<F> {
        let dim = self.entries[0][0][d].rows();
        let f = self.entries[0][0][d].field().clone();
        let mut m = Matrix::zeros(&f, self.n * dim, self.n * dim);
        for i in 0..self.n {
            for j in 0..self.n {
                let (r, c) = if transpose_blocks { (j, i) } else { (i, j) };
                m.set_block(r * dim, c * dim, &self.entries[i][j][d]);
            }
        }
        m
    }

    /// The inverse family degree by degree: for `σ`, `Σ_j σ'_{ji}σ_{kj} = δ_{ik}`;
    /// for `τ`, `λ`, the inverse in `M_n` of the endomorphism algebra.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut entries: Vec<Vec<Vec<Matrix<F>>>> = vec![vec![Vec::new(); n]; n];
        for d in 0..=self.max_degree() {
            let dim = self.entries[0][0][d].rows();
            let sigma = self.role == FamilyRole::Sigma;
            let big = self.block_matrix(d, sigma);
            let inv = if big.rows() == 0 { big.clone() } else { big.inverse()? };
            for (i, row) in entries.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    let (r, c) = if sigma { (j, i) } else { (i, j) };
                    slot.push(inv.block(r * dim, c * dim, dim, dim));
                }
            }
        }
        Some(TwistingMatrixFamily { role: self.role, n, entries })
    }
}

fn violation(axiom: &str, i: usize, j: usize, d: usize) -> Error {
    Error::Axiom { axiom: axiom.into(), at: format!("(i, j, degree) = ({i}, {j}, {d})") }
}

/// Checks sigma1/sigma2 (algebra target) or tau2/tau3, lambda2/lambda3 (coring target).
pub fn check_family<F: Field>(fam: &TwistingMatrixFamily<F>, target: &FamilyTarget<'_, F>) -> Result<()> {
    let dims = target.dims();
    let n_deg = fam.max_degree().min(dims.len() - 1);
    if fam.entries.len() != fam.n || fam.entries.iter().any(|r| r.len() != fam.n) {
        return Err(Error::Axiom { axiom: "shape".into(), at: "family is not n × n".into() });
    }
    for i in 0..fam.n {
        for j in 0..fam.n {
            if fam.entries[i][j].len() <= n_deg {
                return Err(violation("shape", i, j, fam.entries[i][j].len()));
            }
            for (d, &dim) in dims.iter().enumerate().take(n_deg + 1) {
                if fam.entry(i, j, d).shape() != (dim, dim) {
                    return Err(violation("shape", i, j, d));
                }
            }
        }
    }
    let (mult_axiom, unit_axiom) = match fam.role {
        FamilyRole::Sigma => ("sigma1", "sigma2"),
        FamilyRole::Tau => ("tau2", "tau3"),
        FamilyRole::Lambda => ("lambda2", "lambda3"),
    };
    for i in 0..fam.n {
        for j in 0..fam.n {
            let e = fam.entry(i, j, 0);
            let want = if i == j { e.field().one() } else { e.field().zero() };
            if e.get(0, 0) != &want {
                return Err(violation(unit_axiom, i, j, 0));
            }
        }
    }
    match (fam.role, target) {
        (FamilyRole::Sigma, FamilyTarget::Algebra(a)) => {
            for d in 0..=n_deg {
                for p in 0..=d {
                    let m = a.m(p, d - p);
                    for i in 0..fam.n {
                        for j in 0..fam.n {
                            let lhs = fam.entry(i, j, d).mul(m);
                            let mut rhs = Matrix::zeros(m.field(), m.rows(), m.cols());
                            for k in 0..fam.n {
                                rhs = rhs.add(&m.mul(&fam.entry(i, k, p).kronecker(fam.entry(k, j, d - p))));
                            }
                            if lhs != rhs {
                                return Err(violation(mult_axiom, i, j, d));
                            }
                        }
                    }
                }
            }
        }
        (FamilyRole::Tau | FamilyRole::Lambda, FamilyTarget::Coring(c)) => {
            for d in 0..=n_deg {
                for p in 0..=d {
                    let delta = c.delta(p, d - p);
                    for i in 0..fam.n {
                        for j in 0..fam.n {
                            let lhs = delta.mul(fam.entry(i, j, d));
                            let mut rhs = Matrix::zeros(delta.field(), delta.rows(), delta.cols());
                            for k in 0..fam.n {
                                rhs = rhs.add(&fam.entry(i, k, p).kronecker(fam.entry(k, j, d - p)).mul(delta));
                            }
                            if lhs != rhs {
                                return Err(violation(mult_axiom, i, j, d));
                            }
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::Axiom {
                axiom: "role".into(),
                at: format!("{} family on the wrong kind of target", fam.role.name()),
            })
        }
    }
    Ok(())
}

/// Composites `x_{I,J}` for all words `I`, `J` of length `p`, indexed `I·n^p + J`.
/// `step(a, b, rest)` combines the first letters' entry with the composite of the rest.
fn word_composites<F: Field>(
    f: &F,
    n: usize,
    p: usize,
    dim: usize,
    first: impl Fn(usize, usize) -> Matrix<F>,
    step: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>,
) -> Vec<Matrix<F>> {
    let mut level = vec![Matrix::identity(f, dim)];
    for len in 1..=p {
        let prev = n.pow((len - 1) as u32);
        let cur = n.pow(len as u32);
        let mut next = Vec::with_capacity(cur * cur);
        for big_i in 0..cur {
            let (i1, ri) = (big_i / prev, big_i % prev);
            for big_j in 0..cur {
                let (j1, rj) = (big_j / prev, big_j % prev);
                next.push(step(&first(i1, j1), &level[ri * prev + rj]));
            }
        }
        level = next;
    }
    level
}

/// `L^p ⊗ R^q → R^q ⊗ L^p` from per-word blocks, where the free side has words of
/// length `free_len` and the target side has dimension `dim`.
/// `free_left` says whether the free side is the source's left factor.
fn assemble<F: Field>(
    f: &F,
    n: usize,
    free_len: usize,
    dim: usize,
    composites: &[Matrix<F>],
    free_left: bool,
) -> Matrix<F> {
    let w = n.pow(free_len as u32);
    let mut m = Matrix::zeros(f, w * dim, w * dim);
    for big_i in 0..w {
        for big_j in 0..w {
            let block = &composites[big_i * w + big_j];
            for c in 0..dim {
                for r in 0..dim {
                    let v = block.get(r, c);
                    if f.is_zero(v) {
                        continue;
                    }
                    // free on the left: e_I ⊗ a ↦ a' ⊗ e_J; otherwise a ⊗ e_I ↦ e_J ⊗ a'
                    let (row, col) = if free_left {
                        (r * w + big_j, big_i * dim + c)
                    } else {
                        (big_j * dim + r, c * w + big_i)
                    };
                    m.set(row, col, v.clone());
                }
            }
        }
    }
    m
}

/// Assembles the twisting (or entwining) map encoded by `fam` up to degree `n_deg`.
pub fn matrix_twisting_build<F: Field>(
    target: &FamilyTarget<'_, F>,
    fam: &TwistingMatrixFamily<F>,
    n_deg: usize,
) -> Result<BuiltTwist<F>> {
    check_family(fam, target)?;
    let dims = target.dims();
    let n_deg = n_deg.min(fam.max_degree()).min(dims.len() - 1);
    let n = fam.n;
    let f = fam.entries[0][0][0].field().clone();
    let free_dims: Vec<usize> = (0..=n_deg).map(|p| n.pow(p as u32)).collect();
    let inv = fam.inverse();
    match fam.role {
        FamilyRole::Sigma => {
            // σ^{p,q}(e_I ⊗ a) = Σ_J σ_{i1j1}⋯σ_{ipjp}(a) ⊗ e_J
            let build = |x: &TwistingMatrixFamily<F>, forward: bool, p: usize, q: usize| {
                let comps = word_composites(
                    &f,
                    n,
                    p,
                    dims[q],
                    |i, j| x.entry(i, j, q).clone(),
                    |a, rest| if forward { a.mul(rest) } else { rest.mul(a) },
                );
                assemble(&f, n, p, dims[q], &comps, forward)
            };
            let maps = SwapComponents::from_fn(&free_dims, dims, n_deg, |p, q| Ok(build(fam, true, p, q)))?;
            let maps = match &inv {
                Some(x) => {
                    let mut m = BTreeMap::new();
                    for p in 0..=n_deg {
                        for q in 0..=n_deg - p {
                            m.insert((p, q), build(x, false, p, q));
                        }
                    }
                    maps.with_inverses(m)
                }
                None => maps,
            };
            Ok(BuiltTwist::Twisting(TwistingMap { kind: TwistKind::Algebra, maps }))
        }
        FamilyRole::Tau => {
            // τ(c ⊗ e_i) = Σ_j e_j ⊗ τ_{ji}(c), read with words of length ≤ 1
            let d_dims: Vec<usize> = (0..=n_deg).map(|q| if q <= 1 { free_dims[q] } else { 0 }).collect();
            let build = |x: &TwistingMatrixFamily<F>, forward: bool, p: usize, q: usize| match q {
                0 => Matrix::identity(&f, dims[p]),
                1 => {
                    // entries indexed as (source letter, target letter)
                    let comps: Vec<Matrix<F>> = (0..n * n).map(|k| x.entry(k % n, k / n, p).clone()).collect();
                    assemble(&f, n, 1, dims[p], &comps, !forward)
                }
                _ => Matrix::zeros(&f, 0, 0),
            };
            let maps = SwapComponents::from_fn(dims, &d_dims, n_deg, |p, q| Ok(build(fam, true, p, q)))?;
            let maps = match &inv {
                Some(x) => {
                    let mut m = BTreeMap::new();
                    for p in 0..=n_deg {
                        for q in 0..=n_deg - p {
                            m.insert((p, q), build(x, false, p, q));
                        }
                    }
                    maps.with_inverses(m)
                }
                None => maps,
            };
            Ok(BuiltTwist::Twisting(TwistingMap { kind: TwistKind::Coring, maps }))
        }
        FamilyRole::Lambda => {
            // λ(c ⊗ e_I) = Σ_J e_J ⊗ λ_{jqiq}⋯λ_{j1i1}(c)
            let build = |x: &TwistingMatrixFamily<F>, forward: bool, p: usize, q: usize| {
                let comps = word_composites(
                    &f,
                    n,
                    q,
                    dims[p],
                    |i, j| x.entry(j, i, p).clone(),
                    |a, rest| if forward { rest.mul(a) } else { a.mul(rest) },
                );
                assemble(&f, n, q, dims[p], &comps, !forward)
            };
            let maps = SwapComponents::from_fn(dims, &free_dims, n_deg, |p, q| Ok(build(fam, true, p, q)))?;
            let maps = match &inv {
                Some(x) => {
                    let mut m = BTreeMap::new();
                    for p in 0..=n_deg {
                        for q in 0..=n_deg - p {
                            m.insert((p, q), build(x, false, p, q));
                        }
                    }
                    maps.with_inverses(m)
                }
                None => maps,
            };
            Ok(BuiltTwist::Entwining(EntwiningMap { maps }))
        }
    }
}

/// `Σ_j σ_{ji}λ_{jk} = Σ_j λ_{ij}σ_{kj} = δ_{ik}·Id` on the degree-one component.
pub fn check_siglamb<F: Field>(sig: &TwistingMatrixFamily<F>, lam: &TwistingMatrixFamily<F>, a1_dim: usize) -> bool {
    if sig.n != lam.n || sig.max_degree() < 1 || lam.max_degree() < 1 {
        return false;
    }
    let n = sig.n;
    let shape_ok = |x: &TwistingMatrixFamily<F>| {
        (0..n).all(|i| (0..n).all(|j| x.entry(i, j, 1).shape() == (a1_dim, a1_dim)))
    };
    if !shape_ok(sig) || !shape_ok(lam) {
        return false;
    }
    let f = sig.entry(0, 0, 1).field().clone();
    for i in 0..n {
        for k in 0..n {
            let mut first = Matrix::zeros(&f, a1_dim, a1_dim);
            let mut second = Matrix::zeros(&f, a1_dim, a1_dim);
            for j in 0..n {
                first = first.add(&sig.entry(j, i, 1).mul(lam.entry(j, k, 1)));
                second = second.add(&lam.entry(i, j, 1).mul(sig.entry(k, j, 1)));
            }
            let want = if i == k { Matrix::identity(&f, a1_dim) } else { Matrix::zeros(&f, a1_dim, a1_dim) };
            if first != want || second != want {
                return false;
            }
        }
    }
    true
}
