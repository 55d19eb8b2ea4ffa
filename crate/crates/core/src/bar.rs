//! Normalized bar and cobar complexes, Tor/Ext tables, and the comparison maps φ and ψ.

use std::collections::BTreeMap;

use crate::complex::{Direction, FiniteComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedAlgebra, GradedCoring, PreKoszulPair};
use crate::koszul::Corners;
use crate::linalg::Matrix;
use crate::tensor::{compositions, kron_all, BlockLayout, BlockMatrix};

/// Dimensions indexed by (homological degree, internal degree).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BidegreeTable {
    pub max_degree: usize,
    pub entries: BTreeMap<(usize, usize), usize>,
}

impl BidegreeTable {
    pub fn get(&self, n: usize, m: usize) -> usize {
        self.entries.get(&(n, m)).copied().unwrap_or(0)
    }

    pub fn diagonal(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|n| self.get(n, n)).collect()
    }

    /// Every `(n, m)` with `n ≠ m` and a nonzero entry.
    pub fn off_diagonal_support(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|(&(n, m), &d)| n != m && d != 0)
            .map(|(&k, _)| k)
            .collect()
    }
}

fn block_dim(dims: &[usize], key: &[usize]) -> usize {
    key.iter().map(|&d| dims[d]).product()
}

/// `Id ⊗ f ⊗ Id` where `f` acts on the legs `lo..hi` of `key`.
fn pad_legs<F: Field>(dims: &[usize], key: &[usize], lo: usize, hi: usize, f: &Matrix<F>) -> Matrix<F> {
    let left = block_dim(dims, &key[..lo]);
    let right = block_dim(dims, &key[hi..]);
    f.padded(left, right)
}

/// Layout of `⊕ A^{k_0} ⊗ … ⊗ A^{k_r}` over the given keys.
fn layout(dims: &[usize], keys: Vec<Vec<usize>>) -> BlockLayout<Vec<usize>> {
    BlockLayout::new(keys.into_iter().map(|k| {
        let d = block_dim(dims, &k);
        (k, d)
    }))
}

/// Keys of `Ā^{⊗n}` in internal degree `m`.
fn reduced_keys(m: usize, n: usize) -> Vec<Vec<usize>> {
    compositions(m, n)
}

/// Keys of `A ⊗ Ā^{⊗n}` in internal degree `m` (leading leg may have degree 0).
fn left_free_keys(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for j in 0..=m {
        for c in compositions(m - j, n) {
            let mut k = vec![j];
            k.extend(c);
            out.push(k);
        }
    }
    out
}

/// Keys of `C̄^{⊗n} ⊗ C` in internal degree `m` (trailing leg may have degree 0).
fn right_cofree_keys(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for j in (0..=m).rev() {
        for c in compositions(m - j, n) {
            let mut k = c;
            k.push(j);
            out.push(k);
        }
    }
    out.sort();
    out
}

/// `Σ_{i ∈ legs} sign(i) · (merge legs i, i+1)` between two layouts.
fn merge_map<F: Field>(
    a: &GradedAlgebra<F>,
    src: &BlockLayout<Vec<usize>>,
    dst: &BlockLayout<Vec<usize>>,
    legs: impl Fn(usize) -> std::ops::Range<usize>,
    sign: impl Fn(usize) -> i64,
) -> Matrix<F> {
    let f = a.field();
    let dims = a.dims();
    let mut bm = BlockMatrix::new(f, dst, src);
    for (key, _) in src.blocks() {
        for i in legs(key.len()) {
            let mut target = key.clone();
            let merged = target[i] + target[i + 1];
            target.splice(i..i + 2, [merged]);
            let block = pad_legs(dims, key, i, i + 2, a.m(key[i], key[i + 1])).signed(sign(i));
            bm.add(&target, key, &block);
        }
    }
    bm.finish()
}

/// `Σ_i sign(i) · (split leg i as p + q)` with `p ≥ 1` and `q ≥ min_right(i)`.
fn split_map<F: Field>(
    c: &GradedCoring<F>,
    src: &BlockLayout<Vec<usize>>,
    dst: &BlockLayout<Vec<usize>>,
    min_right: impl Fn(usize, usize) -> usize,
    sign: impl Fn(usize, usize) -> i64,
) -> Matrix<F> {
    let f = c.field();
    let dims = c.dims();
    let mut bm = BlockMatrix::new(f, dst, src);
    for (key, _) in src.blocks() {
        for i in 0..key.len() {
            let total = key[i];
            let lo = min_right(i, key.len());
            if total < 1 + lo {
                continue;
            }
            for p in 1..=total - lo {
                let q = total - p;
                let mut target = key.clone();
                target.splice(i..i + 1, [p, q]);
                let block = pad_legs(dims, key, i, i + 1, c.delta(p, q)).signed(sign(i, key.len()));
                bm.add(&target, key, &block);
            }
        }
    }
    bm.finish()
}

fn check_range(m: usize, max: usize) -> Result<()> {
    if m > max {
        return Err(Error::OutOfRange { requested: m, max });
    }
    Ok(())
}

/// Internal-degree-`m` slice of `Ω_•(A)`, positions `m, m-1, …, 1` (just `R` at `m = 0`).
pub fn bar_complex<F: Field>(a: &GradedAlgebra<F>, m: usize) -> Result<FiniteComplex<F>> {
    check_range(m, a.max_degree())?;
    let f = a.field();
    if m == 0 {
        return FiniteComplex::new(f, Direction::Chain, 0, vec![1], vec![]);
    }
    let layouts: Vec<_> = (0..=m).map(|n| layout(a.dims(), reduced_keys(m, n))).collect();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for n in (1..=m).rev() {
        dims.push(layouts[n].total());
        if n > 1 {
            // d̄_n = Σ_{i=1}^{n-1} (-1)^i Id ⊗ m ⊗ Id, legs indexed from 1
            diffs.push(merge_map(a, &layouts[n], &layouts[n - 1], |len| 0..len - 1, |i| i as i64 + 1));
        }
    }
    Ok(FiniteComplex::new(f, Direction::Chain, m as i64, dims, diffs)?.with_label("bar complex"))
}

/// Internal-degree-`m` slice of `Ω^•(C)`, positions `1, …, m` (just `R` at `m = 0`).
pub fn cobar_complex<F: Field>(c: &GradedCoring<F>, m: usize) -> Result<FiniteComplex<F>> {
    check_range(m, c.max_degree())?;
    let f = c.field();
    if m == 0 {
        return FiniteComplex::new(f, Direction::Cochain, 0, vec![1], vec![]);
    }
    let layouts: Vec<_> = (0..=m).map(|n| layout(c.dims(), reduced_keys(m, n))).collect();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for n in 1..=m {
        dims.push(layouts[n].total());
        if n < m {
            // d̄^n = Σ_{i=1}^{n} (-1)^{i-1} Id ⊗ Δ̄ ⊗ Id
            diffs.push(split_map(c, &layouts[n], &layouts[n + 1], |_, _| 1, |i, _| i as i64));
        }
    }
    Ok(FiniteComplex::new(f, Direction::Cochain, 1, dims, diffs)?.with_label("cobar complex"))
}

fn slice_homology_by_position<F: Field>(cx: &FiniteComplex<F>) -> Result<Vec<(i64, usize)>> {
    let h = crate::complex::homology_dims(cx)?;
    Ok(cx.positions().into_iter().zip(h).collect())
}

/// `(n, m) ↦ dim H_n(Ω_•(A))_m` for `n ≤ m ≤ N`.
pub fn tor_table<F: Field>(a: &GradedAlgebra<F>, n: usize) -> Result<BidegreeTable> {
    check_range(n, a.max_degree())?;
    let mut t = BidegreeTable { max_degree: n, entries: BTreeMap::new() };
    for m in 0..=n {
        t.entries.insert((0, m), (m == 0) as usize);
        if m == 0 {
            continue;
        }
        for (pos, h) in slice_homology_by_position(&bar_complex(a, m)?)? {
            t.entries.insert((pos as usize, m), h);
        }
    }
    Ok(t)
}

/// `(n, m) ↦ dim H^n(Ω^•(C))_m` for `n ≤ m ≤ N`.
pub fn ext_table<F: Field>(c: &GradedCoring<F>, n: usize) -> Result<BidegreeTable> {
    check_range(n, c.max_degree())?;
    let mut t = BidegreeTable { max_degree: n, entries: BTreeMap::new() };
    for m in 0..=n {
        t.entries.insert((0, m), (m == 0) as usize);
        if m == 0 {
            continue;
        }
        for (pos, h) in slice_homology_by_position(&cobar_complex(c, m)?)? {
            t.entries.insert((pos as usize, m), h);
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub homological_degree: usize,
    pub internal_degree: usize,
    pub isomorphism: bool,
}

/// Outcome of checking a comparison map slice by slice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMapReport {
    pub identities_checked: usize,
    /// `(n, m)` of every failed chain-map identity.
    pub violations: Vec<(usize, usize)>,
    pub induced: Vec<InducedMap>,
}

impl ChainMapReport {
    pub fn is_chain_map(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<(usize, usize)> {
        self.violations.first().copied()
    }

    pub fn all_isomorphisms(&self) -> bool {
        self.induced.iter().all(|i| i.isomorphism)
    }
}

/// `θ^{⊗n} ∘ Δ(n): C^n → (A¹)^{⊗n}`.
fn theta_power_delta<F: Field>(pair: &PreKoszulPair<F>, n: usize) -> Matrix<F> {
    let f = pair.field();
    let thetas: Vec<&Matrix<F>> = (0..n).map(|_| &pair.theta).collect();
    kron_all(f, &thetas).mul(&pair.coring.cogeneration_map(n))
}

/// `φ_n = Id_A ⊗ θ^{⊗n}Δ(n)` from `K_•^l` into the left normalized bar resolution.
pub fn phi_chain_map<F: Field>(pair: &PreKoszulPair<F>, n_max: usize) -> Result<ChainMapReport> {
    check_range(n_max, pair.max_degree())?;
    let f = pair.field();
    let a = &pair.algebra;
    let k = Corners::new(pair);
    let mut report = ChainMapReport::default();
    for m in 1..=n_max {
        let layouts: Vec<_> = (0..=m).map(|n| layout(a.dims(), left_free_keys(m, n))).collect();
        let phi = |n: usize| -> Matrix<F> {
            let src = BlockLayout::new([((), a.dim(m - n) * pair.coring.dim(n))]);
            let mut bm = BlockMatrix::new(f, &layouts[n], &src);
            let mut key = vec![m - n];
            key.extend(std::iter::repeat(1).take(n));
            let block = Matrix::identity(f, a.dim(m - n)).kronecker(&theta_power_delta(pair, n));
            bm.add(&key, &(), &block);
            bm.finish()
        };
        for n in 1..=m {
            // δ_n(a_0 ⊗ … ⊗ a_n) = Σ_{i=0}^{n-1} (-1)^i a_0 ⊗ … ⊗ a_i a_{i+1} ⊗ …
            let delta = merge_map(a, &layouts[n], &layouts[n - 1], |len| 0..len - 1, |i| i as i64);
            let lhs = delta.mul(&phi(n));
            let rhs = phi(n - 1).mul(&k.dr(m - n, n));
            report.identities_checked += 1;
            if lhs != rhs {
                report.violations.push((n, m));
            }
        }
    }
    let tor = tor_table(a, n_max)?;
    for n in 1..=n_max {
        for m in n..=n_max {
            let isomorphism = if m == n {
                let phibar = theta_power_delta(pair, n);
                let bar = bar_complex(a, n)?;
                let top_out = if n > 1 { bar.differentials()[0].rank() } else { 0 };
                let cycles = bar.component_dims()[0] - top_out;
                let lands_in_cycles = n == 1 || bar.differentials()[0].mul(&phibar).is_zero();
                lands_in_cycles && phibar.rank() == pair.coring.dim(n) && cycles == pair.coring.dim(n)
            } else {
                tor.get(n, m) == 0
            };
            report.induced.push(InducedMap { homological_degree: n, internal_degree: m, isomorphism });
        }
    }
    Ok(report)
}

/// `ψ^n` from the normalized cobar resolution `C̄^{⊗n} ⊗ C` to `(A^n ⊗ C, (-1)^n d_r)`,
/// nonzero only on `(C¹)^{⊗n} ⊗ C` where it is `μ_n θ^{⊗n} ⊗ Id`.
pub fn psi_chain_map<F: Field>(pair: &PreKoszulPair<F>, n_max: usize) -> Result<ChainMapReport> {
    check_range(n_max, pair.max_degree())?;
    let f = pair.field();
    let a = &pair.algebra;
    let c = &pair.coring;
    let k = Corners::new(pair);
    let mu_theta = |n: usize| -> Matrix<F> {
        let thetas: Vec<&Matrix<F>> = (0..n).map(|_| &pair.theta).collect();
        a.iterated_multiplication(n).mul(&kron_all(f, &thetas))
    };
    let mut report = ChainMapReport::default();
    for m in 1..=n_max {
        let layouts: Vec<_> = (0..=m).map(|n| layout(c.dims(), right_cofree_keys(m, n))).collect();
        let psi = |n: usize| -> Matrix<F> {
            let dst = BlockLayout::new([((), a.dim(n) * c.dim(m - n))]);
            let mut bm = BlockMatrix::new(f, &dst, &layouts[n]);
            let mut key = vec![1; n];
            key.push(m - n);
            bm.add(&(), &key, &mu_theta(n).kronecker(&Matrix::identity(f, c.dim(m - n))));
            bm.finish()
        };
        for n in 0..m {
            // Σ_{i=1}^n (-1)^{i-1} Δ̄ on leg i, then (-1)^n Δ̃ on the trailing leg
            let delta = split_map(
                c,
                &layouts[n],
                &layouts[n + 1],
                |i, len| if i + 1 == len { 0 } else { 1 },
                |i, len| if i + 1 == len { n as i64 } else { i as i64 },
            );
            let lhs = psi(n + 1).mul(&delta);
            let rhs = k.dr(n, m - n).mul(&psi(n)).signed(n as i64);
            report.identities_checked += 1;
            if lhs != rhs {
                report.violations.push((n, m));
            }
        }
    }
    let ext = ext_table(c, n_max)?;
    for n in 1..=n_max {
        for m in n..=n_max {
            let isomorphism = if m == n {
                let lambda = mu_theta(n);
                let cobar = cobar_complex(c, n)?;
                let d = cobar.differentials();
                let incoming = if n > 1 { Some(&d[n - 2]) } else { None };
                let kills_boundaries = incoming.is_none_or(|d| lambda.mul(d).is_zero());
                let boundary_rank = incoming.map_or(0, |d| d.rank());
                let r = lambda.rank();
                kills_boundaries && r == a.dim(n) && lambda.cols() - r == boundary_rank
            } else {
                ext.get(n, m) == 0
            };
            report.induced.push(InducedMap { homological_degree: n, internal_degree: m, isomorphism });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology_dims;
    use crate::corpus;
    use crate::field::Rationals;
    use crate::graded::{build_algebra, build_coring, build_pair};

    #[test]
    fn polynomial_bar_slice_two() {
        let f = Rationals;
        let a = build_algebra(&corpus::polynomial(&f, 2), 3);
        let s = bar_complex(&a, 2).unwrap();
        assert_eq!(s.component_dims(), &[4, 3]);
        assert_eq!(s.positions(), vec![2, 1]);
        assert_eq!(homology_dims(&s).unwrap(), vec![1, 0]);
    }

    #[test]
    fn free_bar_slice_two_is_an_isomorphism() {
        let f = Rationals;
        let a = build_algebra(&corpus::free(&f, 2), 2);
        let s = bar_complex(&a, 2).unwrap();
        assert_eq!(s.differentials()[0].rank(), 4);
    }

    #[test]
    fn exterior_dual_cobar_slice_two() {
        let f = Rationals;
        let c = build_coring(&corpus::polynomial(&f, 2), 3).unwrap();
        let s = cobar_complex(&c, 2).unwrap();
        assert_eq!(s.component_dims(), &[1, 4]);
        assert_eq!(homology_dims(&s).unwrap(), vec![0, 3]);
    }

    #[test]
    fn tables_for_polynomial() {
        let f = Rationals;
        let pair = build_pair(&corpus::polynomial(&f, 2), 3).unwrap();
        let t = tor_table(&pair.algebra, 3).unwrap();
        assert_eq!(t.diagonal(), vec![1, 2, 1, 0]);
        assert!(t.off_diagonal_support().is_empty());
        let e = ext_table(&pair.coring, 3).unwrap();
        assert_eq!(e.diagonal(), vec![1, 2, 3, 4]);
        assert!(e.off_diagonal_support().is_empty());
    }

    #[test]
    fn comparison_maps_on_polynomial() {
        let f = Rationals;
        let pair = build_pair(&corpus::polynomial(&f, 2), 3).unwrap();
        let phi = phi_chain_map(&pair, 3).unwrap();
        assert!(phi.is_chain_map() && phi.all_isomorphisms(), "{phi:?}");
        let psi = psi_chain_map(&pair, 3).unwrap();
        assert!(psi.is_chain_map() && psi.all_isomorphisms(), "{psi:?}");
    }

    #[test]
    fn empty_generator_set_is_vacuous() {
        let f = Rationals;
        let pair = build_pair(&corpus::free(&f, 0), 3).unwrap();
        let psi = psi_chain_map(&pair, 3).unwrap();
        assert!(psi.is_chain_map());
    }
}
