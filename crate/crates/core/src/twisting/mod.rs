//! Twisting maps between graded algebras and corings, entwining maps, twisted tensor
//! products and the factorization of the Koszul complex of a twisted pair.
//!
//! A component `(p, q)` always maps `L^p ⊗ R^q → R^q ⊗ L^p`, where `L` is the left
//! factor of the source: `σ: B ⊗ A → A ⊗ B`, `τ: C ⊗ D → D ⊗ C`, `λ: C ⊗ B → B ⊗ C`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{build_algebra, GradedAlgebra, GradedCoring, PreKoszulPair, QuadraticPresentation};
use crate::koszul::Corners;
use crate::linalg::{Matrix, Subspace};
use crate::tensor::{range_indices, sum_tensor_indices, BlockLayout};

pub mod family;

pub use family::{
    check_family, check_siglamb, matrix_twisting_build, BuiltTwist, FamilyRole, FamilyTarget,
    TwistingMatrixFamily,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    Algebra,
    Coring,
}

/// Graded swap components `X^{p,q}: L^p ⊗ R^q → R^q ⊗ L^p` for `p + q ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapComponents<F: Field> {
    max_degree: usize,
    left_dims: Vec<usize>,
    right_dims: Vec<usize>,
    components: BTreeMap<(usize, usize), Matrix<F>>,
    inverses: Option<BTreeMap<(usize, usize), Matrix<F>>>,
}

impl<F: Field> SwapComponents<F> {
    /// No validation: shape and normalization problems surface in the axiom checks.
    pub fn from_components(
        left_dims: Vec<usize>,
        right_dims: Vec<usize>,
        components: BTreeMap<(usize, usize), Matrix<F>>,
    ) -> Self {
        let max_degree = (left_dims.len().min(right_dims.len())).saturating_sub(1);
        SwapComponents { max_degree, left_dims, right_dims, components, inverses: None }
    }

    /// Builds every component from `f(p, q)`.
    pub fn from_fn(
        left_dims: &[usize],
        right_dims: &[usize],
        n: usize,
        mut f: impl FnMut(usize, usize) -> Result<Matrix<F>>,
    ) -> Result<Self> {
        let mut components = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n - p {
                components.insert((p, q), f(p, q)?);
            }
        }
        Ok(SwapComponents {
            max_degree: n,
            left_dims: left_dims[..=n].to_vec(),
            right_dims: right_dims[..=n].to_vec(),
            components,
            inverses: None,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
    pub fn left_dims(&self) -> &[usize] {
        &self.left_dims
    }
    pub fn right_dims(&self) -> &[usize] {
        &self.right_dims
    }

    pub fn component(&self, p: usize, q: usize) -> &Matrix<F> {
        self.components
            .get(&(p, q))
            .unwrap_or_else(|| panic!("component ({p},{q}) beyond truncation {}", self.max_degree))
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), Matrix<F>> {
        &self.components
    }

    pub fn inverse(&self, p: usize, q: usize) -> Option<&Matrix<F>> {
        self.inverses.as_ref().and_then(|m| m.get(&(p, q)))
    }

    pub fn has_inverses(&self) -> bool {
        self.inverses.is_some()
    }

    pub fn with_inverses(mut self, inverses: BTreeMap<(usize, usize), Matrix<F>>) -> Self {
        self.inverses = Some(inverses);
        self
    }

    /// Inverts every component; fails on the first singular one.
    pub fn invert(mut self) -> Result<Self> {
        let mut inv = BTreeMap::new();
        for (&(p, q), m) in &self.components {
            let i = if m.rows() == 0 && m.cols() == 0 {
                m.clone()
            } else {
                m.inverse().ok_or_else(|| Error::NotInvertible(format!("component ({p},{q})")))?
            };
            inv.insert((p, q), i);
        }
        self.inverses = Some(inv);
        Ok(self)
    }

    /// Every component has shape `(r_q·l_p) × (l_p·r_q)`.
    pub fn grading_ok(&self) -> bool {
        (0..=self.max_degree).all(|p| {
            (0..=self.max_degree - p).all(|q| {
                let d = self.left_dims[p] * self.right_dims[q];
                self.components.get(&(p, q)).is_some_and(|m| m.shape() == (d, d))
            })
        })
    }

    /// `X^{0,q}` and `X^{p,0}` are identities (the canonical flip with a trivial factor).
    pub fn units_ok(&self) -> bool {
        (0..=self.max_degree).all(|k| self.component(0, k).is_identity() && self.component(k, 0).is_identity())
    }

    /// Inverse components, when present, compose to identities on both sides.
    pub fn inverses_ok(&self) -> bool {
        let Some(inv) = &self.inverses else { return true };
        self.components.iter().all(|(k, m)| {
            inv.get(k).is_some_and(|i| {
                i.shape() == (m.cols(), m.rows())
                    && (m.rows() == 0 || (m.mul(i).is_identity() && i.mul(m).is_identity()))
            })
        })
    }

    pub fn restrict(&self, d: usize) -> Self {
        let d = d.min(self.max_degree);
        let keep = |k: &(usize, usize)| k.0 + k.1 <= d;
        SwapComponents {
            max_degree: d,
            left_dims: self.left_dims[..=d].to_vec(),
            right_dims: self.right_dims[..=d].to_vec(),
            components: self.components.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, v.clone())).collect(),
            inverses: self
                .inverses
                .as_ref()
                .map(|m| m.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, v.clone())).collect()),
        }
    }

    fn map_components(&self, mut f: impl FnMut(usize, usize, &Matrix<F>) -> Matrix<F>) -> Self {
        let mut out = self.clone();
        for (&(p, q), m) in out.components.iter_mut() {
            *m = f(p, q, m);
        }
        if let Some(inv) = out.inverses.as_mut() {
            for (&(p, q), m) in inv.iter_mut() {
                *m = f(p, q, m);
            }
        }
        out
    }
}

/// `σ: B ⊗ A → A ⊗ B` (algebra kind) or `τ: C ⊗ D → D ⊗ C` (coring kind).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistingMap<F: Field> {
    pub kind: TwistKind,
    pub maps: SwapComponents<F>,
}

impl<F: Field> TwistingMap<F> {
    pub fn component(&self, p: usize, q: usize) -> &Matrix<F> {
        self.maps.component(p, q)
    }
    pub fn max_degree(&self) -> usize {
        self.maps.max_degree()
    }
}

/// `λ: C ⊗ B → B ⊗ C`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntwiningMap<F: Field> {
    pub maps: SwapComponents<F>,
}

impl<F: Field> EntwiningMap<F> {
    pub fn component(&self, p: usize, q: usize) -> &Matrix<F> {
        self.maps.component(p, q)
    }
    pub fn max_degree(&self) -> usize {
        self.maps.max_degree()
    }
}

fn id<F: Field>(f: &F, n: usize) -> Matrix<F> {
    Matrix::identity(f, n)
}

/// Lifts `x: L ⊗ R → R ⊗ L` to `L ⊗ R^{⊗q} → R^{⊗q} ⊗ L`, moving past the leftmost `R` first.
pub fn ladder_right<F: Field>(x: &Matrix<F>, l: usize, r: usize, q: usize) -> Matrix<F> {
    let f = x.field();
    let mut acc = id(f, l * r.pow(q as u32));
    for i in 0..q {
        let step = id(f, r.pow(i as u32)).kronecker(x).kronecker(&id(f, r.pow((q - 1 - i) as u32)));
        acc = step.mul(&acc);
    }
    acc
}

/// Lifts `x: L ⊗ R → R ⊗ L` to `L^{⊗p} ⊗ R → R ⊗ L^{⊗p}`, moving the rightmost `L` first.
pub fn ladder_left<F: Field>(x: &Matrix<F>, l: usize, r: usize, p: usize) -> Matrix<F> {
    let f = x.field();
    let mut acc = id(f, l.pow(p as u32) * r);
    for k in 0..p {
        let step = id(f, l.pow((p - 1 - k) as u32)).kronecker(x).kronecker(&id(f, l.pow(k as u32)));
        acc = step.mul(&acc);
    }
    acc
}

/// The free-algebra lift `α^{p,q}: V_B^{⊗p} ⊗ V_A^{⊗q} → V_A^{⊗q} ⊗ V_B^{⊗p}`.
pub fn ladder<F: Field>(alpha: &Matrix<F>, gb: usize, ga: usize, p: usize, q: usize) -> Matrix<F> {
    let one_q = ladder_right(alpha, gb, ga, q);
    ladder_left(&one_q, gb, ga.pow(q as u32), p)
}

/// Extends `s11: B¹ ⊗ A¹ → A¹ ⊗ B¹` to a graded twisting map `B ⊗ A → A ⊗ B` up to degree `n`.
pub fn extend_sigma<F: Field>(
    pa: &QuadraticPresentation<F>,
    pb: &QuadraticPresentation<F>,
    s11: &Matrix<F>,
    n: usize,
) -> Result<TwistingMap<F>> {
    let f = pa.field();
    let (ga, gb) = (pa.n_gen(), pb.n_gen());
    if s11.shape() != (ga * gb, ga * gb) {
        return Err(Error::DimensionMismatch(s11.rows(), ga * gb));
    }
    let wa = pa.relations();
    let wb = pb.relations();
    if wa.dim() > 0 {
        let a12 = ladder(s11, gb, ga, 1, 2);
        let target = wa.tensor(&Subspace::full(f, gb));
        for b in 0..gb {
            for k in 0..wa.dim() {
                let rel = wa.basis().select_columns(&[k]);
                let e = Matrix::from_fn(f, gb, 1, |i, _| f.from_i64((i == b) as i64));
                if !target.contains(&a12.mul(&e.kronecker(&rel))) {
                    return Err(Error::Descent(format!(
                        "moving {} past the relation {} of the right factor leaves the relations",
                        pb.generator_names()[b],
                        pa.format_quadratic(&rel.column(0))
                    )));
                }
            }
        }
    }
    if wb.dim() > 0 {
        let a21 = ladder(s11, gb, ga, 2, 1);
        let target = Subspace::full(f, ga).tensor(wb);
        for k in 0..wb.dim() {
            let rel = wb.basis().select_columns(&[k]);
            for a in 0..ga {
                let e = Matrix::from_fn(f, ga, 1, |i, _| f.from_i64((i == a) as i64));
                if !target.contains(&a21.mul(&rel.kronecker(&e))) {
                    return Err(Error::Descent(format!(
                        "moving the relation {} of the left factor past {} leaves the relations",
                        pb.format_quadratic(&rel.column(0)),
                        pa.generator_names()[a]
                    )));
                }
            }
        }
    }
    let alg_a = build_algebra(pa, n);
    let alg_b = build_algebra(pb, n);
    let (pr_a, s_a) = (alg_a.projections().unwrap(), alg_a.sections().unwrap());
    let (pr_b, s_b) = (alg_b.projections().unwrap(), alg_b.sections().unwrap());
    let maps = SwapComponents::from_fn(alg_b.dims(), alg_a.dims(), n, |p, q| {
        let alpha = ladder(s11, gb, ga, p, q);
        Ok(pr_a[q].kronecker(&pr_b[p]).mul(&alpha).mul(&s_b[p].kronecker(&s_a[q])))
    })?;
    let maps = match maps.clone().invert() {
        Ok(m) => m,
        Err(_) => maps,
    };
    Ok(TwistingMap { kind: TwistKind::Algebra, maps })
}

fn degree_bound<F: Field>(x: &SwapComponents<F>, others: &[usize]) -> usize {
    others.iter().fold(x.max_degree(), |acc, &d| acc.min(d))
}

/// `X^{p,q+r}(Id ⊗ m^{q,r}) = (m^{q,r} ⊗ Id)(Id ⊗ X^{p,r})(X^{p,q} ⊗ Id)`, with `R` an algebra.
pub fn mult_compat_right<F: Field>(x: &SwapComponents<F>, r_alg: &GradedAlgebra<F>) -> Option<String> {
    let f = r_alg.field();
    let n = degree_bound(x, &[r_alg.max_degree()]);
    let (l, r) = (&x.left_dims, r_alg.dims());
    for p in 0..=n {
        for q in 0..=n - p {
            for s in 0..=n - p - q {
                let lhs = x.component(p, q + s).mul(&id(f, l[p]).kronecker(r_alg.m(q, s)));
                let rhs = Matrix::chain(&[
                    &r_alg.m(q, s).kronecker(&id(f, l[p])),
                    &id(f, r[q]).kronecker(x.component(p, s)),
                    &x.component(p, q).kronecker(&id(f, r[s])),
                ]);
                if lhs != rhs {
                    return Some(format!("({p},{q},{s})"));
                }
            }
        }
    }
    None
}

/// `X^{p+q,r}(m^{p,q} ⊗ Id) = (Id ⊗ m^{p,q})(X^{p,r} ⊗ Id)(Id ⊗ X^{q,r})`, with `L` an algebra.
pub fn mult_compat_left<F: Field>(x: &SwapComponents<F>, l_alg: &GradedAlgebra<F>) -> Option<String> {
    let f = l_alg.field();
    let n = degree_bound(x, &[l_alg.max_degree()]);
    let (l, r) = (l_alg.dims(), &x.right_dims);
    for p in 0..=n {
        for q in 0..=n - p {
            for s in 0..=n - p - q {
                let lhs = x.component(p + q, s).mul(&l_alg.m(p, q).kronecker(&id(f, r[s])));
                let rhs = Matrix::chain(&[
                    &id(f, r[s]).kronecker(l_alg.m(p, q)),
                    &x.component(p, s).kronecker(&id(f, l[q])),
                    &id(f, l[p]).kronecker(x.component(q, s)),
                ]);
                if lhs != rhs {
                    return Some(format!("({p},{q},{s})"));
                }
            }
        }
    }
    None
}

/// `(Δ^{q,r} ⊗ Id)X^{p,q+r} = (Id ⊗ X^{p,r})(X^{p,q} ⊗ Id)(Id ⊗ Δ^{q,r})`, with `R` a coring.
pub fn comult_compat_right<F: Field>(x: &SwapComponents<F>, r_cor: &GradedCoring<F>) -> Option<String> {
    let f = r_cor.field();
    let n = degree_bound(x, &[r_cor.max_degree()]);
    let (l, r) = (&x.left_dims, r_cor.dims());
    for p in 0..=n {
        for q in 0..=n - p {
            for s in 0..=n - p - q {
                let lhs = r_cor.delta(q, s).kronecker(&id(f, l[p])).mul(x.component(p, q + s));
                let rhs = Matrix::chain(&[
                    &id(f, r[q]).kronecker(x.component(p, s)),
                    &x.component(p, q).kronecker(&id(f, r[s])),
                    &id(f, l[p]).kronecker(r_cor.delta(q, s)),
                ]);
                if lhs != rhs {
                    return Some(format!("({p},{q},{s})"));
                }
            }
        }
    }
    None
}

/// `(Id ⊗ Δ^{p,q})X^{p+q,r} = (X^{p,r} ⊗ Id)(Id ⊗ X^{q,r})(Δ^{p,q} ⊗ Id)`, with `L` a coring.
pub fn comult_compat_left<F: Field>(x: &SwapComponents<F>, l_cor: &GradedCoring<F>) -> Option<String> {
    let f = l_cor.field();
    let n = degree_bound(x, &[l_cor.max_degree()]);
    let (l, r) = (l_cor.dims(), &x.right_dims);
    for p in 0..=n {
        for q in 0..=n - p {
            for s in 0..=n - p - q {
                let lhs = id(f, r[s]).kronecker(l_cor.delta(p, q)).mul(x.component(p + q, s));
                let rhs = Matrix::chain(&[
                    &x.component(p, s).kronecker(&id(f, l[q])),
                    &id(f, l[p]).kronecker(x.component(q, s)),
                    &l_cor.delta(p, q).kronecker(&id(f, r[s])),
                ]);
                if lhs != rhs {
                    return Some(format!("({p},{q},{s})"));
                }
            }
        }
    }
    None
}

fn structure_failure<F: Field>(x: &SwapComponents<F>, left: &[usize], right: &[usize]) -> Option<Error> {
    let n = x.max_degree();
    if left.len() <= n || right.len() <= n || x.left_dims[..=n] != left[..=n] || x.right_dims[..=n] != right[..=n] {
        return Some(Error::Axiom { axiom: "grading".into(), at: "component dimensions".into() });
    }
    if !x.grading_ok() {
        return Some(Error::Axiom { axiom: "grading".into(), at: "component shapes".into() });
    }
    if !x.units_ok() {
        return Some(Error::Axiom { axiom: "unit".into(), at: "degree 0".into() });
    }
    if !x.inverses_ok() {
        return Some(Error::Axiom { axiom: "inverse".into(), at: "stored inverse components".into() });
    }
    None
}

/// First failing axiom of `σ: B ⊗ A → A ⊗ B`.
pub fn twist_axiom_failure<F: Field>(s: &TwistingMap<F>, a: &GradedAlgebra<F>, b: &GradedAlgebra<F>) -> Option<Error> {
    if s.kind != TwistKind::Algebra {
        return Some(Error::Axiom { axiom: "kind".into(), at: "expected an algebra twisting map".into() });
    }
    if let Some(e) = structure_failure(&s.maps, b.dims(), a.dims()) {
        return Some(e);
    }
    if let Some(at) = mult_compat_right(&s.maps, a) {
        return Some(Error::Axiom { axiom: "twist1".into(), at });
    }
    mult_compat_left(&s.maps, b).map(|at| Error::Axiom { axiom: "twist2".into(), at })
}

/// `algebras = (A, B)` for `σ: B ⊗ A → A ⊗ B`.
pub fn check_twist_axioms<F: Field>(s: &TwistingMap<F>, algebras: (&GradedAlgebra<F>, &GradedAlgebra<F>)) -> bool {
    twist_axiom_failure(s, algebras.0, algebras.1).is_none()
}

/// First failing axiom of `τ: C ⊗ D → D ⊗ C`.
pub fn cotwist_axiom_failure<F: Field>(t: &TwistingMap<F>, c: &GradedCoring<F>, d: &GradedCoring<F>) -> Option<Error> {
    if t.kind != TwistKind::Coring {
        return Some(Error::Axiom { axiom: "kind".into(), at: "expected a coring twisting map".into() });
    }
    if let Some(e) = structure_failure(&t.maps, c.dims(), d.dims()) {
        return Some(e);
    }
    if let Some(at) = comult_compat_right(&t.maps, d) {
        return Some(Error::Axiom { axiom: "cotwist1".into(), at });
    }
    comult_compat_left(&t.maps, c).map(|at| Error::Axiom { axiom: "cotwist2".into(), at })
}

pub fn check_cotwist_axioms<F: Field>(t: &TwistingMap<F>, c: &GradedCoring<F>, d: &GradedCoring<F>) -> bool {
    cotwist_axiom_failure(t, c, d).is_none()
}

/// First failing axiom of `λ: C ⊗ B → B ⊗ C`.
pub fn entwining_axiom_failure<F: Field>(
    l: &EntwiningMap<F>,
    c: &GradedCoring<F>,
    b: &GradedAlgebra<F>,
) -> Option<Error> {
    if let Some(e) = structure_failure(&l.maps, c.dims(), b.dims()) {
        return Some(e);
    }
    if let Some(at) = mult_compat_right(&l.maps, b) {
        return Some(Error::Axiom { axiom: "entw1".into(), at });
    }
    comult_compat_left(&l.maps, c).map(|at| Error::Axiom { axiom: "entw2".into(), at })
}

pub fn check_entwining_axioms<F: Field>(l: &EntwiningMap<F>, c: &GradedCoring<F>, b: &GradedAlgebra<F>) -> bool {
    entwining_axiom_failure(l, c, b).is_none()
}

fn product_layout(x: &[usize], y: &[usize], n: usize) -> BlockLayout<(usize, usize)> {
    BlockLayout::new((0..=n).map(|i| ((i, n - i), x[i] * y[n - i])))
}

/// `A ⊗_σ B` with `(A ⊗_σ B)^n = ⊕_{i+j=n} A^i ⊗ B^j`, summands ordered by `i`.
pub fn twisted_algebra<F: Field>(a: &GradedAlgebra<F>, b: &GradedAlgebra<F>, s: &TwistingMap<F>) -> Result<GradedAlgebra<F>> {
    if let Some(e) = twist_axiom_failure(s, a, b) {
        return Err(e);
    }
    let f = a.field();
    let n = s.max_degree().min(a.max_degree()).min(b.max_degree());
    let (da, db) = (a.dims(), b.dims());
    let lays: Vec<_> = (0..=n).map(|k| product_layout(da, db, k)).collect();
    let dims: Vec<usize> = lays.iter().map(|l| l.total()).collect();
    let mut mult = BTreeMap::new();
    for n1 in 0..=n {
        for n2 in 0..=n - n1 {
            let mut m = Matrix::zeros(f, dims[n1 + n2], dims[n1] * dims[n2]);
            for i in 0..=n1 {
                let j = n1 - i;
                for k in 0..=n2 {
                    let l = n2 - k;
                    let block = a
                        .m(i, k)
                        .kronecker(b.m(j, l))
                        .mul(&id(f, da[i]).kronecker(s.component(j, k)).kronecker(&id(f, db[l])));
                    let cols = sum_tensor_indices(&lays[n1], &(i, j), &lays[n2], &(k, l));
                    let rows = range_indices(lays[n1 + n2].offset(&(i + k, j + l)), da[i + k] * db[j + l]);
                    m.add_scattered(&rows, &cols, &block);
                }
            }
            mult.insert((n1, n2), m);
        }
    }
    let out = GradedAlgebra::from_parts(f, dims, mult)?;
    if !out.check_associativity() {
        return Err(Error::Internal("twisted product is not associative".into()));
    }
    Ok(out)
}

/// `τ̂^{p,q} = (-1)^{pq} τ^{p,q}`.
pub fn hat_twist<F: Field>(t: &TwistingMap<F>) -> Result<TwistingMap<F>> {
    if t.kind != TwistKind::Coring {
        return Err(Error::Axiom { axiom: "kind".into(), at: "hat twist needs a coring twisting map".into() });
    }
    Ok(TwistingMap { kind: TwistKind::Coring, maps: t.maps.map_components(|p, q, m| m.signed((p * q) as i64)) })
}

/// `C ⊗_τ D` with `(C ⊗_τ D)^n = ⊕_{p+q=n} C^p ⊗ D^q`, summands ordered by `p`.
pub fn twisted_coring<F: Field>(c: &GradedCoring<F>, d: &GradedCoring<F>, t: &TwistingMap<F>) -> Result<GradedCoring<F>> {
    if let Some(e) = cotwist_axiom_failure(t, c, d) {
        return Err(e);
    }
    let f = c.field();
    let n = t.max_degree().min(c.max_degree()).min(d.max_degree());
    let (dc, dd) = (c.dims(), d.dims());
    let lays: Vec<_> = (0..=n).map(|k| product_layout(dc, dd, k)).collect();
    let dims: Vec<usize> = lays.iter().map(|l| l.total()).collect();
    let mut comult = BTreeMap::new();
    for n1 in 0..=n {
        for n2 in 0..=n - n1 {
            let mut m = Matrix::zeros(f, dims[n1] * dims[n2], dims[n1 + n2]);
            for p in 0..=n1 + n2 {
                let q = n1 + n2 - p;
                for r in 0..=p.min(n1) {
                    let u = n1 - r;
                    if u > q {
                        continue;
                    }
                    let block = id(f, dc[r])
                        .kronecker(t.component(p - r, u))
                        .kronecker(&id(f, dd[q - u]))
                        .mul(&c.delta(r, p - r).kronecker(d.delta(u, q - u)));
                    let rows = sum_tensor_indices(&lays[n1], &(r, u), &lays[n2], &(p - r, q - u));
                    let cols = range_indices(lays[n1 + n2].offset(&(p, q)), dc[p] * dd[q]);
                    m.add_scattered(&rows, &cols, &block);
                }
            }
            comult.insert((n1, n2), m);
        }
    }
    let out = GradedCoring::from_parts(f, dims, comult)?;
    if !out.check_coassociativity() || !out.check_counit() {
        return Err(Error::Internal("twisted coring is not coassociative".into()));
    }
    Ok(out)
}

fn inverse_of<F: Field>(s: &TwistingMap<F>, p: usize, q: usize) -> Result<Matrix<F>> {
    if let Some(i) = s.maps.inverse(p, q) {
        return Ok(i.clone());
    }
    s.component(p, q)
        .inverse()
        .ok_or_else(|| Error::NotInvertible(format!("σ^{{{p},{q}}}")))
}

/// Derives the coring twisting map `τ: C ⊗ D → D ⊗ C` and the entwining map
/// `λ: C ⊗ B → B ⊗ C` from an invertible `σ: B ⊗ A → A ⊗ B`.
pub fn derive_tau_lambda<F: Field>(
    pair_a: &PreKoszulPair<F>,
    pair_b: &PreKoszulPair<F>,
    s: &TwistingMap<F>,
) -> Result<(TwistingMap<F>, EntwiningMap<F>)> {
    let f = pair_a.field();
    let n = s.max_degree().min(pair_a.max_degree()).min(pair_b.max_degree());
    let (c, d) = (&pair_a.coring, &pair_b.coring);
    let b = &pair_b.algebra;
    if n == 0 {
        let one = |_, _| Ok(id(f, 1));
        let tau = SwapComponents::from_fn(c.dims(), d.dims(), 0, one)?.invert()?;
        let lam = SwapComponents::from_fn(c.dims(), b.dims(), 0, one)?.invert()?;
        return Ok((TwistingMap { kind: TwistKind::Coring, maps: tau }, EntwiningMap { maps: lam }));
    }
    let theta_c = &pair_a.theta;
    let theta_d = &pair_b.theta;
    let theta_c_inv = theta_c.inverse().ok_or_else(|| Error::NotInvertible("θ of the first pair".into()))?;
    let theta_d_inv = theta_d.inverse().ok_or_else(|| Error::NotInvertible("θ of the second pair".into()))?;
    let c1 = c.dim(1);
    let d1 = d.dim(1);
    let iota_c: Vec<Matrix<F>> = (0..=n).map(|k| c.cogeneration_map(k)).collect();
    let iota_d: Vec<Matrix<F>> = (0..=n).map(|k| d.cogeneration_map(k)).collect();
    for (k, m) in iota_c.iter().chain(&iota_d).enumerate() {
        if !m.is_injective() {
            return Err(Error::Restriction(format!("coring not cogenerated in degree one (degree {})", k % (n + 1))));
        }
    }
    let mut lam_1q = Vec::with_capacity(n);
    for q in 0..n {
        let si = inverse_of(s, q, 1)?;
        lam_1q.push(Matrix::chain(&[
            &id(f, b.dim(q)).kronecker(&theta_c_inv),
            &si,
            &theta_c.kronecker(&id(f, b.dim(q))),
        ]));
    }
    let lam = SwapComponents::from_fn(c.dims(), b.dims(), n, |p, q| {
        if p == 0 {
            return Ok(id(f, b.dim(q)));
        }
        let big = ladder_left(&lam_1q[q], c1, b.dim(q), p);
        let lhs = id(f, b.dim(q)).kronecker(&iota_c[p]);
        lhs.solve(&big.mul(&iota_c[p].kronecker(&id(f, b.dim(q)))))
            .ok_or_else(|| Error::Restriction(format!("λ^{{{p},{q}}} leaves C^{p}")))
    })?
    .invert()?;
    let tau = SwapComponents::from_fn(c.dims(), d.dims(), n, |p, q| {
        if q == 0 {
            return Ok(id(f, c.dim(p)));
        }
        let tp1 = Matrix::chain(&[
            &theta_d_inv.kronecker(&id(f, c.dim(p))),
            lam.component(p, 1),
            &id(f, c.dim(p)).kronecker(theta_d),
        ]);
        let big = ladder_right(&tp1, c.dim(p), d1, q);
        let lhs = iota_d[q].kronecker(&id(f, c.dim(p)));
        lhs.solve(&big.mul(&id(f, c.dim(p)).kronecker(&iota_d[q])))
            .ok_or_else(|| Error::Restriction(format!("τ^{{{p},{q}}} leaves D^{q}")))
    })?
    .invert()?;
    let tau = TwistingMap { kind: TwistKind::Coring, maps: tau };
    let lam = EntwiningMap { maps: lam };
    if let Some(e) = cotwist_axiom_failure(&tau, c, d) {
        return Err(e);
    }
    if let Some(e) = entwining_axiom_failure(&lam, c, b) {
        return Err(e);
    }
    let conditions = TwistConditions::evaluate(pair_a, pair_b, s, &tau, &lam)?;
    if let Some(e) = conditions.first_failure() {
        return Err(e);
    }
    Ok((tau, lam))
}

/// The three compatibilities tying `σ`, `τ`, `λ` and the two `θ`s together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistConditions {
    /// `σ^{1,1}(θ_D ⊗ θ_C)τ^{1,1} = θ_C ⊗ θ_D` on `C¹ ⊗ D¹`.
    pub cond1: bool,
    /// Degrees `p` where `λ^{p,1}(Id ⊗ θ_D) = (θ_D ⊗ Id)τ^{p,1}` fails.
    pub cond2_failures: Vec<usize>,
    /// Degrees `q` where `(σ^{q,1})^{-1}(θ_C ⊗ Id) = (Id ⊗ θ_C)λ^{1,q}` fails.
    pub cond3_failures: Vec<usize>,
}

impl TwistConditions {
    pub fn evaluate<F: Field>(
        pair_a: &PreKoszulPair<F>,
        pair_b: &PreKoszulPair<F>,
        s: &TwistingMap<F>,
        tau: &TwistingMap<F>,
        lam: &EntwiningMap<F>,
    ) -> Result<Self> {
        let f = pair_a.field();
        let n = tau.max_degree().min(lam.max_degree());
        let (tc, td) = (&pair_a.theta, &pair_b.theta);
        let c = &pair_a.coring;
        let b = &pair_b.algebra;
        let cond1 = n < 2
            || Matrix::chain(&[s.component(1, 1), &td.kronecker(tc), tau.component(1, 1)]) == tc.kronecker(td);
        let mut cond2_failures = Vec::new();
        for p in 0..n {
            let lhs = lam.component(p, 1).mul(&id(f, c.dim(p)).kronecker(td));
            let rhs = td.kronecker(&id(f, c.dim(p))).mul(tau.component(p, 1));
            if lhs != rhs {
                cond2_failures.push(p);
            }
        }
        let mut cond3_failures = Vec::new();
        for q in 0..n {
            let lhs = inverse_of(s, q, 1)?.mul(&tc.kronecker(&id(f, b.dim(q))));
            let rhs = id(f, b.dim(q)).kronecker(tc).mul(lam.component(1, q));
            if lhs != rhs {
                cond3_failures.push(q);
            }
        }
        Ok(TwistConditions { cond1, cond2_failures, cond3_failures })
    }

    pub fn all_hold(&self) -> bool {
        self.cond1 && self.cond2_failures.is_empty() && self.cond3_failures.is_empty()
    }

    fn first_failure(&self) -> Option<Error> {
        if !self.cond1 {
            return Some(Error::Axiom { axiom: "cond1".into(), at: "C¹⊗D¹".into() });
        }
        if let Some(p) = self.cond2_failures.first() {
            return Some(Error::Axiom { axiom: "cond2".into(), at: format!("p = {p}") });
        }
        self.cond3_failures
            .first()
            .map(|q| Error::Axiom { axiom: "cond3".into(), at: format!("q = {q}") })
    }
}

/// Everything assembled from two pre-Koszul pairs and `σ`.
#[derive(Clone, Debug)]
pub struct TwistedPair<F: Field> {
    pub pair: PreKoszulPair<F>,
    pub tau: TwistingMap<F>,
    pub lambda: EntwiningMap<F>,
}

/// `(A ⊗_σ B, C ⊗_τ̂ D)` with `θ = θ_D ⊕ θ_C` on `C⁰⊗D¹ ⊕ C¹⊗D⁰`.
pub fn build_twisted_pair<F: Field>(
    pair_a: &PreKoszulPair<F>,
    pair_b: &PreKoszulPair<F>,
    s: &TwistingMap<F>,
) -> Result<TwistedPair<F>> {
    for (name, p) in [("first", pair_a), ("second", pair_b)] {
        if !crate::graded::check_prekoszul(p) {
            return Err(Error::NotPreKoszul(format!("the {name} factor is not pre-Koszul")));
        }
    }
    let n = s.max_degree().min(pair_a.max_degree()).min(pair_b.max_degree());
    let a = pair_a.algebra.restrict(n);
    let b = pair_b.algebra.restrict(n);
    let s = TwistingMap { kind: s.kind, maps: s.maps.restrict(n) };
    let algebra = twisted_algebra(&a, &b, &s)?;
    let (tau, lambda) = derive_tau_lambda(pair_a, pair_b, &s)?;
    let coring = twisted_coring(&pair_a.coring.restrict(n), &pair_b.coring.restrict(n), &hat_twist(&tau)?)?;
    let f = pair_a.field();
    let theta = if n == 0 {
        Matrix::zeros(f, 0, 0)
    } else {
        let (td, tc) = (&pair_b.theta, &pair_a.theta);
        let mut t = Matrix::zeros(f, td.rows() + tc.rows(), td.cols() + tc.cols());
        t.set_block(0, 0, td);
        t.set_block(td.rows(), td.cols(), tc);
        t
    };
    let pair = PreKoszulPair::new(algebra, coring, theta)?;
    Ok(TwistedPair { pair, tau, lambda })
}

pub fn twisted_pair<F: Field>(
    pair_a: &PreKoszulPair<F>,
    pair_b: &PreKoszulPair<F>,
    s: &TwistingMap<F>,
) -> Result<PreKoszulPair<F>> {
    Ok(build_twisted_pair(pair_a, pair_b, s)?.pair)
}

/// `m^{1,1}(θ⊗θ)Δ^{1,1}` of a twisted pair vanishes on each of the summands
/// `D²`, `C¹⊗D¹`, `C²` of `(C ⊗ D)²`, in that order.
pub fn prekoszul_case_split<F: Field>(tp: &TwistedPair<F>, c_dims: &[usize], d_dims: &[usize]) -> [bool; 3] {
    if tp.pair.max_degree() < 2 {
        return [true; 3];
    }
    let composite = tp.pair.prekoszul_composite();
    let lay = product_layout(c_dims, d_dims, 2);
    let mut out = [true; 3];
    for (slot, p) in (0..=2).enumerate() {
        let (off, dim) = lay.get(&(p, 2 - p)).unwrap();
        out[slot] = composite.select_columns(&range_indices(off, dim)).is_zero();
    }
    out
}

/// Block of `A^i ⊗ B^j ⊗ C^p ⊗ D^q` inside the twisted `A_T^{i+j} ⊗ C_T^{p+q}`.
pub type FactorBlock = (usize, usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub blocks_checked: usize,
    /// `(homological degree n, internal degree m, source block, target block)`.
    pub first_failure: Option<(usize, usize, FactorBlock, FactorBlock)>,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks, for every internal degree `m ≤ N`, that conjugating the differential of
/// `K_•^l(A ⊗_σ B, C ⊗_τ̂ D)` by `Φ = Id_A ⊗ λ ⊗ Id_D` gives
/// `d_A ⊗ Id + (-1)^p Id ⊗ d_B` on `K_•^l(A, C) ⊗ K_•^l(B, D)`.
pub fn verify_factorization<F: Field>(
    pair_a: &PreKoszulPair<F>,
    pair_b: &PreKoszulPair<F>,
    s: &TwistingMap<F>,
) -> Result<FactorizationReport> {
    let tp = build_twisted_pair(pair_a, pair_b, s)?;
    let f = pair_a.field();
    let n_max = tp.pair.max_degree();
    let lam = &tp.lambda;
    let (da, db) = (pair_a.algebra.dims(), pair_b.algebra.dims());
    let (dc, dd) = (pair_a.coring.dims(), pair_b.coring.dims());
    let corners_t = Corners::new(&tp.pair);
    let corners_a = Corners::new(pair_a);
    let corners_b = Corners::new(pair_b);
    let lam_inv = |p: usize, j: usize| -> Result<Matrix<F>> {
        lam.maps
            .inverse(p, j)
            .cloned()
            .ok_or_else(|| Error::NotInvertible(format!("λ^{{{p},{j}}}")))
    };
    let mut checked = 0;
    for m in 1..=n_max {
        for n in 1..=m {
            let k = m - n;
            let (la_s, lc_s) = (product_layout(da, db, k), product_layout(dc, dd, n));
            let (la_t, lc_t) = (product_layout(da, db, k + 1), product_layout(dc, dd, n - 1));
            let del = corners_t.dr(k, n);
            for i in 0..=k {
                let j = k - i;
                for p in 0..=n {
                    let q = n - p;
                    if da[i] * db[j] * dc[p] * dd[q] == 0 {
                        continue;
                    }
                    let cols = sum_tensor_indices(&la_s, &(i, j), &lc_s, &(p, q));
                    let phi_s = id(f, da[i]).kronecker(lam.component(p, j)).kronecker(&id(f, dd[q]));
                    let d_cols = del.select_columns(&cols);
                    for i2 in 0..=k + 1 {
                        let j2 = k + 1 - i2;
                        for p2 in 0..n {
                            let q2 = n - 1 - p2;
                            let target_dim = da[i2] * db[j2] * dc[p2] * dd[q2];
                            if target_dim == 0 {
                                continue;
                            }
                            let rows = sum_tensor_indices(&la_t, &(i2, j2), &lc_t, &(p2, q2));
                            let phi_t_inv = id(f, da[i2]).kronecker(&lam_inv(p2, j2)?).kronecker(&id(f, dd[q2]));
                            let delta = Matrix::chain(&[&phi_t_inv, &d_cols.select_rows(&rows), &phi_s]);
                            let expected = if (i2, j2, p2, q2) == (i + 1, j, p.wrapping_sub(1), q) {
                                corners_a.dr(i, p).kronecker(&id(f, db[j] * dd[q]))
                            } else if (i2, j2, p2, q2) == (i, j + 1, p, q.wrapping_sub(1)) {
                                id(f, da[i] * dc[p]).kronecker(&corners_b.dr(j, q)).signed(p as i64)
                            } else {
                                Matrix::zeros(f, target_dim, cols.len())
                            };
                            checked += 1;
                            if delta != expected {
                                return Ok(FactorizationReport {
                                    blocks_checked: checked,
                                    first_failure: Some((n, m, (i, j, p, q), (i2, j2, p2, q2))),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(FactorizationReport { blocks_checked: checked, first_failure: None })
}

/// The flip `B ⊗ A → A ⊗ B` in degree one.
pub fn flip_generators<F: Field>(f: &F, gb: usize, ga: usize) -> Matrix<F> {
    crate::tensor::swap(f, gb, ga)
}
