//! Quadratic presentations, the algebra `A_W`, the coring `C_W` and pre-Koszul pairs.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};
use crate::tensor::{reversal, swap};

/// Generators `V` and a relation space `W ⊆ V ⊗ V`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticPresentation<F: Field> {
    field: F,
    generator_names: Vec<String>,
    relations: Subspace<F>,
}

impl<F: Field> QuadraticPresentation<F> {
    pub fn new(field: &F, generator_names: Vec<String>, relations: Subspace<F>) -> Result<Self> {
        let g = generator_names.len();
        let distinct: BTreeSet<&String> = generator_names.iter().collect();
        if distinct.len() != g {
            return Err(Error::Parse("generator names must be distinct".into()));
        }
        if relations.ambient_dim() != g * g {
            return Err(Error::DimensionMismatch(relations.ambient_dim(), g * g));
        }
        Ok(QuadraticPresentation { field: field.clone(), generator_names, relations })
    }

    /// Relations given as lists of `(coefficient, (left generator, right generator))`.
    pub fn from_terms(
        field: &F,
        generator_names: &[&str],
        relations: &[Vec<(F::Elem, (usize, usize))>],
    ) -> Result<Self> {
        let g = generator_names.len();
        let mut cols = Matrix::zeros(field, g * g, relations.len());
        for (k, rel) in relations.iter().enumerate() {
            for (c, (i, j)) in rel {
                if *i >= g || *j >= g {
                    return Err(Error::Parse(format!("generator index out of range in relation {k}")));
                }
                let idx = i * g + j;
                let v = field.add(cols.get(idx, k), c);
                cols.set(idx, k, v);
            }
        }
        Self::new(
            field,
            generator_names.iter().map(|s| s.to_string()).collect(),
            Subspace::from_span(&cols),
        )
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }
    pub fn n_gen(&self) -> usize {
        self.generator_names.len()
    }
    pub fn relations(&self) -> &Subspace<F> {
        &self.relations
    }

    /// `Σ_i V^{⊗i} ⊗ W ⊗ V^{⊗(n-i-2)}` inside `V^{⊗n}`.
    pub fn relation_span(&self, n: usize) -> Subspace<F> {
        let g = self.n_gen();
        let total = g.pow(n as u32);
        if n < 2 || self.relations.dim() == 0 {
            return Subspace::zero(&self.field, total);
        }
        let w = self.relations.basis();
        let parts: Vec<Matrix<F>> = (0..=n - 2)
            .map(|i| w.padded(g.pow(i as u32), g.pow((n - i - 2) as u32)))
            .collect();
        let refs: Vec<&Matrix<F>> = parts.iter().collect();
        Subspace::from_span(&Matrix::hstack(&refs))
    }

    /// Human-readable form of a vector of `V ⊗ V`.
    pub fn format_quadratic(&self, v: &[F::Elem]) -> String {
        let g = self.n_gen();
        let f = &self.field;
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(idx, c)| {
                let w = format!("{}⊗{}", self.generator_names[idx / g], self.generator_names[idx % g]);
                if f.is_one(c) {
                    w
                } else {
                    format!("({})·{}", f.format(c), w)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A connected graded algebra truncated at `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra<F: Field> {
    field: F,
    max_degree: usize,
    dims: Vec<usize>,
    projections: Option<Vec<Matrix<F>>>,
    sections: Option<Vec<Matrix<F>>>,
    mult: BTreeMap<(usize, usize), Matrix<F>>,
}

impl<F: Field> GradedAlgebra<F> {
    /// Algebra data from dimensions and `m^{p,q}` for `p + q ≤ N`; unit components may be omitted.
    pub fn from_parts(field: &F, dims: Vec<usize>, mut mult: BTreeMap<(usize, usize), Matrix<F>>) -> Result<Self> {
        let n = dims.len().checked_sub(1).ok_or_else(|| Error::Internal("empty dims".into()))?;
        if dims[0] != 1 {
            return Err(Error::Internal("algebra is not connected".into()));
        }
        for p in 0..=n {
            for q in 0..=n - p {
                let shape = (dims[p + q], dims[p] * dims[q]);
                let entry = mult.entry((p, q)).or_insert_with(|| {
                    if p == 0 || q == 0 {
                        Matrix::identity(field, dims[p + q])
                    } else {
                        Matrix::zeros(field, shape.0, shape.1)
                    }
                });
                if entry.shape() != shape {
                    return Err(Error::Internal(format!("m^{{{p},{q}}} has the wrong shape")));
                }
            }
        }
        Ok(GradedAlgebra { field: field.clone(), max_degree: n, dims, projections: None, sections: None, mult })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
    pub fn projections(&self) -> Option<&[Matrix<F>]> {
        self.projections.as_deref()
    }
    pub fn sections(&self) -> Option<&[Matrix<F>]> {
        self.sections.as_deref()
    }

    /// `m^{p,q}: A^p ⊗ A^q → A^{p+q}`.
    pub fn m(&self, p: usize, q: usize) -> &Matrix<F> {
        self.mult
            .get(&(p, q))
            .unwrap_or_else(|| panic!("m^{{{p},{q}}} beyond truncation {}", self.max_degree))
    }

    pub fn mult(&self) -> &BTreeMap<(usize, usize), Matrix<F>> {
        &self.mult
    }

    /// Iterated multiplication `μ_n: (A¹)^{⊗n} → A^n`.
    pub fn iterated_multiplication(&self, n: usize) -> Matrix<F> {
        let f = &self.field;
        match n {
            0 => Matrix::identity(f, 1),
            1 => Matrix::identity(f, self.dims[1]),
            _ => {
                let inner = Matrix::identity(f, self.dims[1]).kronecker(&self.iterated_multiplication(n - 1));
                self.m(1, n - 1).mul(&inner)
            }
        }
    }

    /// Same data with degrees above `d` removed from the bound.
    pub fn restrict(&self, d: usize) -> Self {
        let d = d.min(self.max_degree);
        let mult = self.mult.iter().filter(|((p, q), _)| p + q <= d).map(|(k, v)| (*k, v.clone())).collect();
        GradedAlgebra {
            field: self.field.clone(),
            max_degree: d,
            dims: self.dims[..=d].to_vec(),
            projections: self.projections.as_ref().map(|v| v[..=d].to_vec()),
            sections: self.sections.as_ref().map(|v| v[..=d].to_vec()),
            mult,
        }
    }

    /// `m^{p+q,r}(m^{p,q} ⊗ Id) = m^{p,q+r}(Id ⊗ m^{q,r})` for `p + q + r ≤ N`.
    pub fn check_associativity(&self) -> bool {
        let f = &self.field;
        let n = self.max_degree;
        for p in 0..=n {
            for q in 0..=n - p {
                for r in 0..=n - p - q {
                    let lhs = self.m(p + q, r).mul(&self.m(p, q).kronecker(&Matrix::identity(f, self.dims[r])));
                    let rhs = self.m(p, q + r).mul(&Matrix::identity(f, self.dims[p]).kronecker(self.m(q, r)));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `m^{p,q}(π^p ⊗ π^q) = π^{p+q}`; vacuous when no projections are stored.
    pub fn check_projection_compatibility(&self) -> bool {
        let Some(pi) = &self.projections else { return true };
        let n = self.max_degree;
        (0..=n).all(|p| (0..=n - p).all(|q| self.m(p, q).mul(&pi[p].kronecker(&pi[q])) == pi[p + q]))
    }
}

/// A connected graded coring truncated at `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedCoring<F: Field> {
    field: F,
    max_degree: usize,
    dims: Vec<usize>,
    inclusions: Option<Vec<Matrix<F>>>,
    comult: BTreeMap<(usize, usize), Matrix<F>>,
}

impl<F: Field> GradedCoring<F> {
    /// Coring data from dimensions and `Δ^{p,q}` for `p + q ≤ N`; counit components may be omitted.
    pub fn from_parts(field: &F, dims: Vec<usize>, mut comult: BTreeMap<(usize, usize), Matrix<F>>) -> Result<Self> {
        let n = dims.len().checked_sub(1).ok_or_else(|| Error::Internal("empty dims".into()))?;
        if dims[0] != 1 {
            return Err(Error::Internal("coring is not connected".into()));
        }
        for p in 0..=n {
            for q in 0..=n - p {
                let shape = (dims[p] * dims[q], dims[p + q]);
                let entry = comult.entry((p, q)).or_insert_with(|| {
                    if p == 0 || q == 0 {
                        Matrix::identity(field, dims[p + q])
                    } else {
                        Matrix::zeros(field, shape.0, shape.1)
                    }
                });
                if entry.shape() != shape {
                    return Err(Error::Internal(format!("Δ^{{{p},{q}}} has the wrong shape")));
                }
            }
        }
        Ok(GradedCoring { field: field.clone(), max_degree: n, dims, inclusions: None, comult })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
    pub fn inclusions(&self) -> Option<&[Matrix<F>]> {
        self.inclusions.as_deref()
    }

    /// `Δ^{p,q}: C^{p+q} → C^p ⊗ C^q`.
    pub fn delta(&self, p: usize, q: usize) -> &Matrix<F> {
        self.comult
            .get(&(p, q))
            .unwrap_or_else(|| panic!("Δ^{{{p},{q}}} beyond truncation {}", self.max_degree))
    }

    pub fn comult(&self) -> &BTreeMap<(usize, usize), Matrix<F>> {
        &self.comult
    }

    /// `Δ(n) = (Id_{C¹} ⊗ Δ(n-1)) ∘ Δ^{1,n-1}: C^n → (C¹)^{⊗n}`.
    pub fn cogeneration_map(&self, n: usize) -> Matrix<F> {
        let f = &self.field;
        match n {
            0 => Matrix::identity(f, 1),
            1 => Matrix::identity(f, self.dims[1]),
            _ => Matrix::identity(f, self.dims[1])
                .kronecker(&self.cogeneration_map(n - 1))
                .mul(self.delta(1, n - 1)),
        }
    }

    /// Same data with degrees above `d` removed from the bound.
    pub fn restrict(&self, d: usize) -> Self {
        let d = d.min(self.max_degree);
        let comult = self.comult.iter().filter(|((p, q), _)| p + q <= d).map(|(k, v)| (*k, v.clone())).collect();
        GradedCoring {
            field: self.field.clone(),
            max_degree: d,
            dims: self.dims[..=d].to_vec(),
            inclusions: self.inclusions.as_ref().map(|v| v[..=d].to_vec()),
            comult,
        }
    }

    /// Replaces every `C^n` with `n > d` by zero, keeping the truncation bound.
    pub fn truncate_components(&self, d: usize) -> Self {
        let f = &self.field;
        let dims: Vec<usize> = self.dims.iter().enumerate().map(|(n, &k)| if n > d { 0 } else { k }).collect();
        let comult = self
            .comult
            .iter()
            .map(|(&(p, q), m)| {
                let m = if p + q > d || p > d || q > d {
                    Matrix::zeros(f, dims[p] * dims[q], dims[p + q])
                } else {
                    m.clone()
                };
                ((p, q), m)
            })
            .collect();
        let inclusions = self.inclusions.as_ref().map(|v| {
            v.iter()
                .enumerate()
                .map(|(n, m)| if n > d { Matrix::zeros(f, m.rows(), 0) } else { m.clone() })
                .collect()
        });
        GradedCoring { field: f.clone(), max_degree: self.max_degree, dims, inclusions, comult }
    }

    /// `(Δ^{p,q} ⊗ Id)Δ^{p+q,r} = (Id ⊗ Δ^{q,r})Δ^{p,q+r}` for `p + q + r ≤ N`.
    pub fn check_coassociativity(&self) -> bool {
        let f = &self.field;
        let n = self.max_degree;
        for p in 0..=n {
            for q in 0..=n - p {
                for r in 0..=n - p - q {
                    let lhs = self.delta(p, q).kronecker(&Matrix::identity(f, self.dims[r])).mul(self.delta(p + q, r));
                    let rhs = Matrix::identity(f, self.dims[p]).kronecker(self.delta(q, r)).mul(self.delta(p, q + r));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn check_counit(&self) -> bool {
        (0..=self.max_degree).all(|n| self.delta(0, n).is_identity() && self.delta(n, 0).is_identity())
    }
}

/// `(A, C, θ: C¹ → A¹)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreKoszulPair<F: Field> {
    pub algebra: GradedAlgebra<F>,
    pub coring: GradedCoring<F>,
    pub theta: Matrix<F>,
}

impl<F: Field> PreKoszulPair<F> {
    pub fn new(algebra: GradedAlgebra<F>, coring: GradedCoring<F>, theta: Matrix<F>) -> Result<Self> {
        if algebra.max_degree() >= 1 && coring.max_degree() >= 1 {
            if theta.shape() != (algebra.dim(1), coring.dim(1)) {
                return Err(Error::NotPreKoszul("θ has the wrong shape".into()));
            }
            if theta.inverse().is_none() && theta.rows() > 0 {
                return Err(Error::NotPreKoszul("θ is not invertible".into()));
            }
        }
        Ok(PreKoszulPair { algebra, coring, theta })
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn max_degree(&self) -> usize {
        self.algebra.max_degree().min(self.coring.max_degree())
    }

    pub fn with_coring(&self, coring: GradedCoring<F>) -> Self {
        PreKoszulPair { algebra: self.algebra.clone(), coring, theta: self.theta.clone() }
    }

    /// `m^{1,1}(θ ⊗ θ)Δ^{1,1}`.
    pub fn prekoszul_composite(&self) -> Matrix<F> {
        self.algebra
            .m(1, 1)
            .mul(&self.theta.kronecker(&self.theta))
            .mul(self.coring.delta(1, 1))
    }
}

pub fn build_algebra<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> GradedAlgebra<F> {
    let f = p.field();
    let g = p.n_gen();
    let mut projections = Vec::with_capacity(n + 1);
    let mut sections = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let q = p.relation_span(d).quotient();
        projections.push(q.projection);
        sections.push(q.section);
    }
    let dims: Vec<usize> = projections.iter().map(|m| m.rows()).collect();
    let mut mult = BTreeMap::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let m = projections[a + b].mul(&sections[a].kronecker(&sections[b]));
            mult.insert((a, b), m);
        }
    }
    debug_assert!(dims.len() < 2 || dims[1] == g);
    GradedAlgebra {
        field: f.clone(),
        max_degree: n,
        dims,
        projections: Some(projections),
        sections: Some(sections),
        mult,
    }
}

/// Subspaces `C^n ⊆ V^{⊗n}` for `0 ≤ n ≤ N`.
pub fn coring_subspaces<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> Vec<Subspace<F>> {
    let f = p.field();
    let g = p.n_gen();
    let mut subs: Vec<Subspace<F>> = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let s = match d {
            0 => Subspace::full(f, 1),
            1 => Subspace::full(f, g),
            2 => p.relations().clone(),
            _ => {
                let prev = subs[d - 1].tensor(&Subspace::full(f, g));
                let tail = Subspace::full(f, g.pow(d as u32 - 2)).tensor(p.relations());
                prev.intersect(&tail).expect("same ambient")
            }
        };
        subs.push(s);
    }
    subs
}

pub fn build_coring<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> Result<GradedCoring<F>> {
    let f = p.field();
    let inclusions: Vec<Matrix<F>> = coring_subspaces(p, n).into_iter().map(|s| s.basis().clone()).collect();
    let dims: Vec<usize> = inclusions.iter().map(|m| m.cols()).collect();
    let mut comult = BTreeMap::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let tensor = inclusions[a].kronecker(&inclusions[b]);
            let d = tensor.solve(&inclusions[a + b]).ok_or_else(|| {
                Error::Internal(format!("C^{} does not factor through C^{a} ⊗ C^{b}", a + b))
            })?;
            comult.insert((a, b), d);
        }
    }
    Ok(GradedCoring { field: f.clone(), max_degree: n, dims, inclusions: Some(inclusions), comult })
}

pub fn build_pair<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> Result<PreKoszulPair<F>> {
    let a = build_algebra(p, n);
    let c = build_coring(p, n)?;
    let theta = Matrix::identity(p.field(), p.n_gen());
    Ok(PreKoszulPair { algebra: a, coring: c, theta })
}

pub fn check_prekoszul<F: Field>(pair: &PreKoszulPair<F>) -> bool {
    if pair.max_degree() < 2 {
        return true;
    }
    pair.prekoszul_composite().is_zero()
}

pub fn check_generated_degree_one<F: Field>(a: &GradedAlgebra<F>) -> bool {
    (2..=a.max_degree()).all(|n| a.iterated_multiplication(n).rank() == a.dim(n))
}

pub fn check_cogenerated_degree_one<F: Field>(c: &GradedCoring<F>) -> bool {
    (2..=c.max_degree()).all(|n| c.cogeneration_map(n).rank() == c.dim(n))
}

/// `(A^op, C^op)` with `m_op^{p,q} = m^{q,p}∘swap` and `Δ_op^{p,q} = swap∘Δ^{q,p}`.
pub fn opposite_pair<F: Field>(pair: &PreKoszulPair<F>) -> PreKoszulPair<F> {
    let a = &pair.algebra;
    let c = &pair.coring;
    let f = a.field();
    let mut mult = BTreeMap::new();
    for (&(p, q), _) in a.mult.iter() {
        mult.insert((p, q), a.m(q, p).mul(&swap(f, a.dim(p), a.dim(q))));
    }
    let mut comult = BTreeMap::new();
    for (&(p, q), _) in c.comult.iter() {
        comult.insert((p, q), swap(f, c.dim(q), c.dim(p)).mul(c.delta(q, p)));
    }
    let g = if a.max_degree() >= 1 { a.dim(1) } else { 0 };
    let projections = a.projections.as_ref().map(|v| {
        v.iter().enumerate().map(|(n, pi)| pi.mul(&reversal(f, g, n))).collect()
    });
    let sections = a.sections.as_ref().map(|v| {
        v.iter().enumerate().map(|(n, s)| reversal(f, g, n).mul(s)).collect()
    });
    let gc = if c.max_degree() >= 1 { c.dim(1) } else { 0 };
    let inclusions = c.inclusions.as_ref().map(|v| {
        v.iter().enumerate().map(|(n, i)| reversal(f, gc, n).mul(i)).collect()
    });
    PreKoszulPair {
        algebra: GradedAlgebra { mult, projections, sections, ..a.clone() },
        coring: GradedCoring { comult, inclusions, ..c.clone() },
        theta: pair.theta.clone(),
    }
}
