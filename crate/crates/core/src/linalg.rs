//! Dense exact matrices, echelon forms and subspaces.
//!
//! Tensor products use the lexicographic basis with the leftmost factor most
//! significant, so `kronecker(a, b)[(i1, i2), (j1, j2)] = a[i1, j1] * b[i2, j2]`
//! sits at row `i1 * rows(b) + i2`, column `j1 * cols(b) + j2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.field.format(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Builds from row vectors; every row must have `cols` entries.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix { field: field.clone(), rows: n, cols, data }
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vals = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, vals)
    }

    /// A single column vector.
    pub fn column_vector(field: &F, entries: Vec<F::Elem>) -> Self {
        let n = entries.len();
        Matrix { field: field.clone(), rows: n, cols: 1, data: entries }
    }

    /// Permutation matrix sending basis vector `j` to basis vector `perm[j]`.
    pub fn permutation(field: &F, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, field.one());
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(&self.field, self.rows)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !self.field.is_zero(x)).count()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "cannot compose {}x{} with {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                let src = &other.data[k * oc..(k + 1) * oc];
                for (d, b) in dst.iter_mut().zip(src) {
                    if !f.is_zero(b) {
                        f.add_mul_assign(d, a, b);
                    }
                }
            }
        }
        out
    }

    /// Composite `self ∘ rhs ∘ ...`: `chain(&[a, b, c]) = a * b * c`.
    pub fn chain(parts: &[&Self]) -> Self {
        let (first, rest) = parts.split_first().expect("empty chain");
        rest.iter().fold((*first).clone(), |acc, m| acc.mul(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Multiplies by ±1 according to the parity of `e`.
    pub fn signed(&self, e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let f = &self.field;
        let (rb, cb) = other.shape();
        let mut out = Self::zeros(f, self.rows * rb, self.cols * cb);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if f.is_zero(a) {
                    continue;
                }
                for i2 in 0..rb {
                    for j2 in 0..cb {
                        let b = other.get(i2, j2);
                        if !f.is_zero(b) {
                            out.set(i1 * rb + i2, j1 * cb + j2, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Checked Kronecker product: errors when the factors live over different fields.
    pub fn try_kronecker(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.kronecker(other))
    }

    /// `Id_left ⊗ self ⊗ Id_right`.
    pub fn padded(&self, left: usize, right: usize) -> Self {
        let f = &self.field;
        let inner = if right == 1 {
            self.clone()
        } else {
            self.kronecker(&Self::identity(f, right))
        };
        if left == 1 {
            inner
        } else {
            Self::identity(f, left).kronecker(&inner)
        }
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        let first = parts.first().expect("empty hstack");
        let rows = first.rows;
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(&first.field, rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Self]) -> Self {
        let first = parts.first().expect("empty vstack");
        let cols = first.cols;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(&first.field, rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        let f = self.field.clone();
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block.get(i, j);
                if !f.is_zero(b) {
                    let idx = (r0 + i) * self.cols + c0 + j;
                    self.data[idx] = f.add(&self.data[idx], b);
                }
            }
        }
    }

    /// Adds `block[a][b]` at `(rows[a], cols[b])`.
    pub fn add_scattered(&mut self, rows: &[usize], cols: &[usize], block: &Self) {
        assert_eq!((rows.len(), cols.len()), block.shape(), "scatter shape mismatch");
        let f = self.field.clone();
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                let v = block.get(a, b);
                if !f.is_zero(v) {
                    let idx = r * self.cols + c;
                    self.data[idx] = f.add(&self.data[idx], v);
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(&self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn rank(&self) -> usize {
        echelon(&self.field, self.to_rows(), self.cols, false).pivots.len()
    }

    pub fn rref(&self) -> Echelon<F> {
        echelon(&self.field, self.to_rows(), self.cols, true)
    }

    /// Columns spanning the null space, one per free column of the RREF.
    pub fn kernel_vectors(&self) -> Self {
        let f = &self.field;
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (r, &p) in e.pivots.iter().enumerate() {
                let v = &e.rows[r][fc];
                if !f.is_zero(v) {
                    out.set(p, k, f.neg(v));
                }
            }
        }
        out
    }

    /// Some `X` with `self · X = rhs`, or `None` if a column of `rhs` leaves the column span.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let f = &self.field;
        let aug = Self::hstack(&[self, rhs]);
        let e = aug.rref();
        if e.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (r, &p) in e.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, e.rows[r][self.cols + j].clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Self::identity(&self.field, self.rows))?;
        (self.mul(&x).is_identity()).then_some(x)
    }

    /// `X` with `self · X = Id`, for surjective `self`.
    pub fn right_inverse(&self) -> Option<Self> {
        self.solve(&Self::identity(&self.field, self.rows))
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Echelon form: `rows[k]` has its leading one in column `pivots[k]`.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub rows: Vec<Vec<F::Elem>>,
    pub pivots: Vec<usize>,
}

/// Gaussian elimination with the first nonzero entry (in row order, scanning columns
/// left to right) as pivot. With `reduced` the result is the RREF.
fn echelon<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>, cols: usize, reduced: bool) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let n = rows.len();
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(pr) = (r..n).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        if !f.is_one(&rows[r][c]) {
            for x in rows[r][c..].iter_mut() {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
        }
        let support: Vec<usize> = (c + 1..cols).filter(|&j| !f.is_zero(&rows[r][j])).collect();
        let pivot_row = std::mem::take(&mut rows[r]);
        let targets = if reduced { 0..n } else { r + 1..n };
        for i in targets {
            if i == r || f.is_zero(&rows[i][c]) {
                continue;
            }
            let factor = std::mem::replace(&mut rows[i][c], f.zero());
            let row = &mut rows[i];
            for &j in &support {
                f.sub_mul_assign(&mut row[j], &factor, &pivot_row[j]);
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len());
    Echelon { rows, pivots }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}

pub fn kronecker<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Matrix<F>> {
    a.try_kronecker(b)
}

pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::from_span(&m.kernel_vectors())
}

/// A subspace of `k^n`, stored through the canonical basis whose transpose is in RREF.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// The span of the columns of `m`.
    pub fn from_span(m: &Matrix<F>) -> Self {
        let f = m.field();
        let e = m.transpose().rref();
        let k = e.pivots.len();
        let basis = Matrix::from_rows(f, m.rows(), e.rows).transpose();
        debug_assert_eq!(basis.cols(), k);
        Subspace { ambient_dim: m.rows(), basis, pivots: e.pivots }
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Matrix::zeros(field, n, 0), pivots: Vec::new() }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Self::from_span(&Matrix::identity(field, n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
    /// Columns form the canonical basis.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn contains(&self, vectors: &Matrix<F>) -> bool {
        assert_eq!(vectors.rows(), self.ambient_dim);
        self.basis.solve(vectors).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.contains(&other.basis)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::from_span(&Matrix::hstack(&[&self.basis, &other.basis])))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let f = self.field();
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(f, self.ambient_dim));
        }
        let joint = Matrix::hstack(&[&self.basis, &other.basis]);
        let ker = joint.kernel_vectors();
        let coeffs = ker.block(0, 0, self.dim(), ker.cols());
        Ok(Self::from_span(&self.basis.mul(&coeffs)))
    }

    /// `self ⊗ other` inside `k^{n} ⊗ k^{n'}`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_span(&self.basis.kronecker(&other.basis))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    /// Quotient `k^n → k^n / self` together with the monomial section.
    ///
    /// The quotient basis is indexed by the non-pivot coordinates `n_j` of the canonical
    /// basis: `q e_{n_j} = e_j` and `q e_{p_k} = -Σ_j b_k[n_j] e_j`; the section sends
    /// `e_j` to `e_{n_j}`.
    pub fn quotient(&self) -> Quotient<F> {
        let f = self.field();
        let n = self.ambient_dim;
        let normal: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut q = Matrix::zeros(f, normal.len(), n);
        let mut s = Matrix::zeros(f, n, normal.len());
        for (j, &nj) in normal.iter().enumerate() {
            q.set(j, nj, f.one());
            s.set(nj, j, f.one());
            for (k, &pk) in self.pivots.iter().enumerate() {
                let v = self.basis.get(nj, k);
                if !f.is_zero(v) {
                    q.set(j, pk, f.neg(v));
                }
            }
        }
        Quotient { projection: q, section: s, normal_words: normal }
    }
}

#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    pub projection: Matrix<F>,
    pub section: Matrix<F>,
    /// Ambient coordinates whose images form the quotient basis.
    pub normal_words: Vec<usize>,
}

pub fn subspace_intersect<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>> {
    a.intersect(b)
}

pub fn quotient_map<F: Field>(ambient_dim: usize, sub: &Subspace<F>) -> Result<Matrix<F>> {
    if sub.ambient_dim() != ambient_dim {
        return Err(Error::DimensionMismatch(ambient_dim, sub.ambient_dim()));
    }
    Ok(sub.quotient().projection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_i64(&Rationals, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&Rationals, 2).rank(), 2);
        assert_eq!(Matrix::zeros(&Rationals, 3, 4).rank(), 0);
        assert_eq!(q(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&Matrix::identity(&Rationals, 2)).dim(), 0);
        let k = kernel_basis(&q(&[&[1, -1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(*k.basis(), q(&[&[1], &[1]]));
    }

    #[test]
    fn kernel_over_gf5_matches_exhaustive_search() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f, &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        let mut annihilated = 0;
        for a in 0..5u32 {
            for b in 0..5u32 {
                let v = Matrix::column_vector(&f, vec![a, b]);
                if m.mul(&v).is_zero() {
                    annihilated += 1;
                    assert!(k.contains(&v));
                }
            }
        }
        assert_eq!(annihilated, 5usize.pow(k.dim() as u32));
    }

    fn span(cols: &[&[i64]]) -> Subspace<Rationals> {
        Subspace::from_span(&q(cols).transpose())
    }

    #[test]
    fn intersections() {
        let a = span(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = span(&[&[1, 0, 0]]);
        assert_eq!(a.intersect(&b).unwrap(), b);
        assert_eq!(span(&[&[1, 0]]).intersect(&span(&[&[0, 1]])).unwrap().dim(), 0);
        let c = span(&[&[1, 1, 0, 0], &[0, 0, 1, 0]]);
        let d = span(&[&[1, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(c.intersect(&d).unwrap(), span(&[&[1, 1, 0, 0]]));
        assert!(matches!(
            a.intersect(&span(&[&[1, 0]])),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn quotients() {
        let f = Rationals;
        let qz = quotient_map(2, &Subspace::zero(&f, 2)).unwrap();
        assert_eq!(qz.shape(), (2, 2));
        assert_eq!(qz.rank(), 2);
        assert_eq!(quotient_map(2, &Subspace::full(&f, 2)).unwrap().shape(), (0, 2));
        let s = span(&[&[1, -1]]);
        let m = quotient_map(2, &s).unwrap();
        assert_eq!(m.shape(), (1, 2));
        assert!(m.mul(s.basis()).is_zero());
        assert_eq!(m.rank(), 1);
        let qt = s.quotient();
        assert!(qt.projection.mul(&qt.section).is_identity());
    }

    #[test]
    fn solve_and_inverse() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let b = q(&[&[1], &[0], &[0]]);
        assert!(b.solve(&q(&[&[0], &[1], &[0]])).is_none());
        assert_eq!(b.solve(&q(&[&[3], &[0], &[0]])).unwrap(), q(&[&[3]]));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kronecker_index_convention() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let b = q(&[&[0, 5], &[6, 7]]);
        let k = a.kronecker(&b);
        for (i1, i2, j1, j2) in [(1, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, 0)] {
            let expect = Rationals.mul(a.get(i1, j1), b.get(i2, j2));
            assert_eq!(*k.get(i1 * 2 + i2, j1 * 2 + j2), expect);
        }
        let id6 = Matrix::identity(&Rationals, 2).kronecker(&Matrix::identity(&Rationals, 3));
        assert!(id6.is_identity());
        assert!(a.kronecker(&Matrix::zeros(&Rationals, 2, 3)).is_zero());
    }
}
