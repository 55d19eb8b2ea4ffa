//! The six Koszul complexes of a pre-Koszul pair, sliced by internal degree.

use std::fmt;

use rayon::prelude::*;

use crate::complex::{Direction, FiniteComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{check_prekoszul, PreKoszulPair};
use crate::linalg::Matrix;
use crate::tensor::{BlockLayout, BlockMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComplexFlavor {
    /// `K_l^•`: `C^{m-n} ⊗ A^n`.
    LeftComodule,
    /// `K_r^•`: `A^n ⊗ C^{m-n}`.
    RightComodule,
    /// `K^•`: `⊕ C^i ⊗ A^n ⊗ C^k`.
    Bicomodule,
    /// `K_•^l`: `A^{m-n} ⊗ C^n`.
    LeftModule,
    /// `K_•^r`: `C^n ⊗ A^{m-n}`.
    RightModule,
    /// `K_•`: `⊕ A^i ⊗ C^n ⊗ A^k`.
    Bimodule,
}

impl ComplexFlavor {
    pub const ALL: [ComplexFlavor; 6] = [
        ComplexFlavor::LeftComodule,
        ComplexFlavor::RightComodule,
        ComplexFlavor::Bicomodule,
        ComplexFlavor::LeftModule,
        ComplexFlavor::RightModule,
        ComplexFlavor::Bimodule,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ComplexFlavor::LeftComodule => "left_comodule",
            ComplexFlavor::RightComodule => "right_comodule",
            ComplexFlavor::Bicomodule => "bicomodule",
            ComplexFlavor::LeftModule => "left_module",
            ComplexFlavor::RightModule => "right_module",
            ComplexFlavor::Bimodule => "bimodule",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&f| f == self).expect("listed")
    }
}

impl fmt::Display for ComplexFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComplexFlavor::LeftComodule => "K_l^•",
            ComplexFlavor::RightComodule => "K_r^•",
            ComplexFlavor::Bicomodule => "K^•",
            ComplexFlavor::LeftModule => "K_•^l",
            ComplexFlavor::RightModule => "K_•^r",
            ComplexFlavor::Bimodule => "K_•",
        };
        f.write_str(s)
    }
}

/// The corner maps every Koszul differential is assembled from.
pub struct Corners<'a, F: Field> {
    pair: &'a PreKoszulPair<F>,
}

impl<'a, F: Field> Corners<'a, F> {
    pub fn new(pair: &'a PreKoszulPair<F>) -> Self {
        Corners { pair }
    }

    fn id_c(&self, n: usize) -> Matrix<F> {
        Matrix::identity(self.pair.field(), self.pair.coring.dim(n))
    }

    fn id_a(&self, n: usize) -> Matrix<F> {
        Matrix::identity(self.pair.field(), self.pair.algebra.dim(n))
    }

    /// `c ⊗ a ↦ Σ c_(1) ⊗ θ(c_(2)) a` on `C^p ⊗ A^n → C^{p-1} ⊗ A^{n+1}`.
    pub fn dl(&self, p: usize, n: usize) -> Matrix<F> {
        let a = &self.pair.algebra;
        let c = &self.pair.coring;
        let split = self.id_c(p - 1).kronecker(&self.pair.theta).mul(c.delta(p - 1, 1));
        self.id_c(p - 1)
            .kronecker(a.m(1, n))
            .mul(&split.kronecker(&self.id_a(n)))
    }

    /// `a ⊗ c ↦ Σ a θ(c_(1)) ⊗ c_(2)` on `A^n ⊗ C^p → A^{n+1} ⊗ C^{p-1}`.
    pub fn dr(&self, n: usize, p: usize) -> Matrix<F> {
        let a = &self.pair.algebra;
        let c = &self.pair.coring;
        let split = self.pair.theta.kronecker(&self.id_c(p - 1)).mul(c.delta(1, p - 1));
        a.m(n, 1)
            .kronecker(&self.id_c(p - 1))
            .mul(&self.id_a(n).kronecker(&split))
    }
}

/// Internal-degree-`m` slice of one of the six complexes.
pub fn build_slice<F: Field>(
    pair: &PreKoszulPair<F>,
    flavor: ComplexFlavor,
    m: usize,
    augmented: bool,
) -> Result<FiniteComplex<F>> {
    if m > pair.max_degree() {
        return Err(Error::OutOfRange { requested: m, max: pair.max_degree() });
    }
    if !check_prekoszul(pair) {
        return Err(Error::NotPreKoszul(
            "m^{1,1}∘(θ⊗θ)∘Δ^{1,1} ≠ 0, so d∘d ≠ 0 at the quadratic corner".into(),
        ));
    }
    let cx = match flavor {
        ComplexFlavor::LeftComodule => one_sided(pair, m, augmented, Direction::Cochain, |k, n| {
            // cochain position n: C^{m-n} ⊗ A^n
            let (p, j) = (m - n, n);
            (k.pair.coring.dim(p) * k.pair.algebra.dim(j), (p > 0).then(|| k.dl(p, j)))
        }),
        ComplexFlavor::RightComodule => one_sided(pair, m, augmented, Direction::Cochain, |k, n| {
            let (j, p) = (n, m - n);
            (k.pair.algebra.dim(j) * k.pair.coring.dim(p), (p > 0).then(|| k.dr(j, p)))
        }),
        ComplexFlavor::RightModule => one_sided(pair, m, augmented, Direction::Chain, |k, n| {
            // chain position n: C^n ⊗ A^{m-n}
            let (p, j) = (n, m - n);
            (k.pair.coring.dim(p) * k.pair.algebra.dim(j), (p > 0).then(|| k.dl(p, j)))
        }),
        ComplexFlavor::LeftModule => one_sided(pair, m, augmented, Direction::Chain, |k, n| {
            let (j, p) = (m - n, n);
            (k.pair.algebra.dim(j) * k.pair.coring.dim(p), (p > 0).then(|| k.dr(j, p)))
        }),
        ComplexFlavor::Bicomodule => bicomodule(pair, m, augmented)?,
        ComplexFlavor::Bimodule => bimodule(pair, m, augmented)?,
    };
    let cx = cx.with_label(format!("{flavor} slice"));
    cx.check_square_zero(m)?;
    Ok(cx)
}

/// `component(n) = (dim, map from position n towards the next position)`; cochain slices
/// run over n = 0..=m, chain slices over n = m..=0.
fn one_sided<F: Field>(
    pair: &PreKoszulPair<F>,
    m: usize,
    augmented: bool,
    direction: Direction,
    component: impl Fn(&Corners<'_, F>, usize) -> (usize, Option<Matrix<F>>),
) -> FiniteComplex<F> {
    let f = pair.field();
    let k = Corners::new(pair);
    let order: Vec<usize> = match direction {
        Direction::Cochain => (0..=m).collect(),
        Direction::Chain => (0..=m).rev().collect(),
    };
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    let augment = augmented && m == 0;
    if augment && direction == Direction::Cochain {
        dims.push(1);
        diffs.push(Matrix::identity(f, 1));
    }
    for (idx, &n) in order.iter().enumerate() {
        let (d, map) = component(&k, n);
        dims.push(d);
        if idx + 1 < order.len() {
            diffs.push(map.expect("interior differential"));
        }
    }
    if augment && direction == Direction::Chain {
        dims.push(1);
        diffs.push(Matrix::identity(f, 1));
    }
    let first = match direction {
        Direction::Cochain if augment => -1,
        Direction::Cochain => 0,
        Direction::Chain => m as i64,
    };
    FiniteComplex::new(f, direction, first, dims, diffs).expect("consistent shapes")
}

/// Blocks `(i, k)` with `i + k = total`, `i` ascending.
fn pair_layout(total: usize, dim: impl Fn(usize, usize) -> usize) -> BlockLayout<(usize, usize)> {
    BlockLayout::new((0..=total).map(|i| ((i, total - i), dim(i, total - i))))
}

fn bicomodule<F: Field>(pair: &PreKoszulPair<F>, m: usize, augmented: bool) -> Result<FiniteComplex<F>> {
    let f = pair.field();
    let a = &pair.algebra;
    let c = &pair.coring;
    let k = Corners::new(pair);
    let layouts: Vec<_> = (0..=m)
        .map(|n| pair_layout(m - n, |i, kk| c.dim(i) * a.dim(n) * c.dim(kk)))
        .collect();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    if augmented {
        let src = BlockLayout::new([((0usize, 0usize), c.dim(m))]);
        let mut bm = BlockMatrix::new(f, &layouts[0], &src);
        for i in 0..=m {
            bm.add(&(i, m - i), &(0, 0), c.delta(i, m - i));
        }
        dims.push(c.dim(m));
        diffs.push(bm.finish());
    }
    for n in 0..=m {
        dims.push(layouts[n].total());
        if n == m {
            break;
        }
        let mut bm = BlockMatrix::new(f, &layouts[n + 1], &layouts[n]);
        for &((i, kk), _) in layouts[n].blocks() {
            if i > 0 {
                bm.add(&(i - 1, kk), &(i, kk), &k.dl(i, n).kronecker(&Matrix::identity(f, c.dim(kk))));
            }
            if kk > 0 {
                let t = Matrix::identity(f, c.dim(i)).kronecker(&k.dr(n, kk)).signed(n as i64 + 1);
                bm.add(&(i, kk - 1), &(i, kk), &t);
            }
        }
        diffs.push(bm.finish());
    }
    FiniteComplex::new(f, Direction::Cochain, if augmented { -1 } else { 0 }, dims, diffs)
}

fn bimodule<F: Field>(pair: &PreKoszulPair<F>, m: usize, augmented: bool) -> Result<FiniteComplex<F>> {
    let f = pair.field();
    let a = &pair.algebra;
    let c = &pair.coring;
    let k = Corners::new(pair);
    let layouts: Vec<_> = (0..=m)
        .map(|n| pair_layout(m - n, |i, kk| a.dim(i) * c.dim(n) * a.dim(kk)))
        .collect();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for n in (0..=m).rev() {
        dims.push(layouts[n].total());
        if n == 0 {
            break;
        }
        let mut bm = BlockMatrix::new(f, &layouts[n - 1], &layouts[n]);
        for &((i, kk), _) in layouts[n].blocks() {
            bm.add(&(i + 1, kk), &(i, kk), &k.dr(i, n).kronecker(&Matrix::identity(f, a.dim(kk))));
            let t = Matrix::identity(f, a.dim(i)).kronecker(&k.dl(n, kk)).signed(n as i64);
            bm.add(&(i, kk + 1), &(i, kk), &t);
        }
        diffs.push(bm.finish());
    }
    if augmented {
        let dst = BlockLayout::new([((0usize, 0usize), a.dim(m))]);
        let mut bm = BlockMatrix::new(f, &dst, &layouts[0]);
        for i in 0..=m {
            bm.add(&(0, 0), &(i, m - i), a.m(i, m - i));
        }
        dims.push(a.dim(m));
        diffs.push(bm.finish());
    }
    FiniteComplex::new(f, Direction::Chain, m as i64, dims, diffs)
}

/// Homology of one slice, keyed by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceHomology {
    pub flavor: ComplexFlavor,
    pub internal_degree: usize,
    pub positions: Vec<i64>,
    pub component_dims: Vec<usize>,
    pub homology: Vec<usize>,
}

impl SliceHomology {
    pub fn is_exact(&self) -> bool {
        self.homology.iter().all(|&h| h == 0)
    }
}

pub fn slice_homology<F: Field>(
    pair: &PreKoszulPair<F>,
    flavor: ComplexFlavor,
    m: usize,
    augmented: bool,
) -> Result<SliceHomology> {
    let cx = build_slice(pair, flavor, m, augmented)?;
    Ok(SliceHomology {
        flavor,
        internal_degree: m,
        positions: cx.positions(),
        component_dims: cx.component_dims().to_vec(),
        homology: cx.homology_from_ranks(&cx.ranks()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    KoszulUpTo(usize),
    NotKoszul { witness_degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulVerdict {
    pub max_internal_degree: usize,
    /// `table[m][flavor.index()]`: exactness of the augmented slice.
    pub table: Vec<[bool; 6]>,
    /// Homology of every non-exact slice.
    pub failures: Vec<SliceHomology>,
    pub verdict: Verdict,
}

impl KoszulVerdict {
    pub fn is_koszul(&self) -> bool {
        matches!(self.verdict, Verdict::KoszulUpTo(_))
    }

    pub fn witness(&self) -> Option<usize> {
        match self.verdict {
            Verdict::NotKoszul { witness_degree } => Some(witness_degree),
            Verdict::KoszulUpTo(_) => None,
        }
    }

    /// Whether the six flavors agree in every internal degree.
    pub fn flavors_agree(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(|&b| b == row[0]))
    }
}

/// Exactness of every augmented slice, all six flavors, `0 ≤ m ≤ N`.
pub fn koszul_verdict<F: Field>(pair: &PreKoszulPair<F>, n: usize) -> Result<KoszulVerdict> {
    if n > pair.max_degree() {
        return Err(Error::OutOfRange { requested: n, max: pair.max_degree() });
    }
    let jobs: Vec<(usize, ComplexFlavor)> = (0..=n)
        .flat_map(|m| ComplexFlavor::ALL.into_iter().map(move |fl| (m, fl)))
        .collect();
    let results: Vec<SliceHomology> = jobs
        .par_iter()
        .map(|&(m, fl)| slice_homology(pair, fl, m, true))
        .collect::<Result<_>>()?;
    let mut table = vec![[true; 6]; n + 1];
    let mut failures = Vec::new();
    for r in results {
        if !r.is_exact() {
            table[r.internal_degree][r.flavor.index()] = false;
            failures.push(r);
        }
    }
    let verdict = match table.iter().position(|row| row.iter().any(|&b| !b)) {
        Some(m) => Verdict::NotKoszul { witness_degree: m },
        None => Verdict::KoszulUpTo(n),
    };
    Ok(KoszulVerdict { max_internal_degree: n, table, failures, verdict })
}

/// Six-way agreement per internal degree, plus the reflection identity between the
/// unaugmented `K_l^•` and `K_•^r` slices.
pub fn theorem_equivalence_check<F: Field>(pair: &PreKoszulPair<F>, n: usize) -> Result<bool> {
    let v = koszul_verdict(pair, n)?;
    if !v.flavors_agree() {
        return Ok(false);
    }
    for m in 0..=n {
        if !reflection_identity(pair, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `H^p(K_l^•(m)) = H_{m-p}(K_•^r(m))` together with the component dimensions.
pub fn reflection_identity<F: Field>(pair: &PreKoszulPair<F>, m: usize) -> Result<bool> {
    let left = slice_homology(pair, ComplexFlavor::LeftComodule, m, false)?;
    let right = slice_homology(pair, ComplexFlavor::RightModule, m, false)?;
    for (idx, &p) in left.positions.iter().enumerate() {
        let target = m as i64 - p;
        let Some(j) = right.positions.iter().position(|&q| q == target) else {
            return Ok(false);
        };
        if left.component_dims[idx] != right.component_dims[j] || left.homology[idx] != right.homology[j] {
            return Ok(false);
        }
    }
    Ok(left.positions.len() == right.positions.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::is_exact;
    use crate::corpus;
    use crate::field::Rationals;
    use crate::graded::build_pair;

    #[test]
    fn polynomial_left_slice_at_two() {
        let f = Rationals;
        let pair = build_pair(&corpus::polynomial(&f, 2), 3).unwrap();
        let s = build_slice(&pair, ComplexFlavor::LeftComodule, 2, true).unwrap();
        assert_eq!(s.component_dims(), &[1, 4, 3]);
        assert_eq!(s.ranks(), vec![1, 3]);
        assert!(is_exact(&s).unwrap());
        let s3 = build_slice(&pair, ComplexFlavor::LeftComodule, 3, true).unwrap();
        assert!(is_exact(&s3).unwrap());
    }

    #[test]
    fn degree_zero_slices_are_r_to_r() {
        let f = Rationals;
        let pair = build_pair(&corpus::exterior(&f, 2), 2).unwrap();
        for fl in ComplexFlavor::ALL {
            let s = build_slice(&pair, fl, 0, true).unwrap();
            assert_eq!(s.component_dims(), &[1, 1], "{fl}");
            assert!(is_exact(&s).unwrap());
        }
    }

    #[test]
    fn non_prekoszul_pair_is_refused() {
        let f = Rationals;
        let good = build_pair(&corpus::polynomial(&f, 2), 2).unwrap();
        let mut comult = std::collections::BTreeMap::new();
        comult.insert((1, 1), Matrix::identity(&f, 4));
        let c = crate::graded::GradedCoring::from_parts(&f, vec![1, 2, 4], comult).unwrap();
        let bad = good.with_coring(c);
        assert!(matches!(
            build_slice(&bad, ComplexFlavor::LeftComodule, 2, true),
            Err(Error::NotPreKoszul(_))
        ));
    }

    #[test]
    fn polynomial_is_koszul_and_flavors_agree() {
        let f = Rationals;
        let pair = build_pair(&corpus::polynomial(&f, 2), 5).unwrap();
        let v = koszul_verdict(&pair, 5).unwrap();
        assert_eq!(v.verdict, Verdict::KoszulUpTo(5));
        assert!(theorem_equivalence_check(&pair, 5).unwrap());
    }

    #[test]
    fn truncated_coring_fails_at_two() {
        let f = Rationals;
        let pair = build_pair(&corpus::polynomial(&f, 2), 2).unwrap();
        let bad = pair.with_coring(pair.coring.truncate_components(1));
        let v = koszul_verdict(&bad, 2).unwrap();
        assert_eq!(v.witness(), Some(2));
        assert_eq!(v.table[2], [false; 6]);
        assert_eq!(v.table[1], [true; 6]);
        assert!(theorem_equivalence_check(&bad, 2).unwrap());
    }
}
