//! Index bookkeeping for tensor powers and direct sums of tensor blocks.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::linalg::Matrix;

/// Compositions of `m` into `n` positive parts, in lexicographic order.
pub fn compositions(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < parts {
            return;
        }
        for first in 1..=rest - (parts - 1) {
            cur.push(first);
            go(rest - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(m, n, &mut cur, &mut out);
    out
}

/// Swap `U ⊗ V → V ⊗ U` for `dim U = a`, `dim V = b`.
pub fn swap<F: Field>(field: &F, a: usize, b: usize) -> Matrix<F> {
    let perm: Vec<usize> = (0..a * b).map(|idx| (idx % b) * a + idx / b).collect();
    Matrix::permutation(field, &perm)
}

/// Word reversal on `V^{⊗n}` with `dim V = g`.
pub fn reversal<F: Field>(field: &F, g: usize, n: usize) -> Matrix<F> {
    let total = g.pow(n as u32);
    let perm: Vec<usize> = (0..total)
        .map(|idx| {
            let mut digits = word_digits(idx, g, n);
            digits.reverse();
            word_index(&digits, g)
        })
        .collect();
    Matrix::permutation(field, &perm)
}

/// Base-`g` digits of `idx`, most significant first.
pub fn word_digits(mut idx: usize, g: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = idx % g;
        idx /= g;
    }
    d
}

pub fn word_index(digits: &[usize], g: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * g + d)
}

/// Tensor product of a list of matrices, left factor most significant.
pub fn kron_all<F: Field>(field: &F, parts: &[&Matrix<F>]) -> Matrix<F> {
    parts
        .iter()
        .fold(Matrix::identity(field, 1), |acc, m| acc.kronecker(m))
}

/// A direct sum of keyed blocks, laid out in insertion order.
#[derive(Clone, Debug)]
pub struct BlockLayout<K: Ord + Clone> {
    keys: Vec<(K, usize)>,
    offsets: BTreeMap<K, (usize, usize)>,
    total: usize,
}

impl<K: Ord + Clone> BlockLayout<K> {
    pub fn new(blocks: impl IntoIterator<Item = (K, usize)>) -> Self {
        let mut keys = Vec::new();
        let mut offsets = BTreeMap::new();
        let mut total = 0;
        for (k, d) in blocks {
            offsets.insert(k.clone(), (total, d));
            keys.push((k, d));
            total += d;
        }
        BlockLayout { keys, offsets, total }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn blocks(&self) -> &[(K, usize)] {
        &self.keys
    }

    /// `(offset, dim)` of a block, if present.
    pub fn get(&self, k: &K) -> Option<(usize, usize)> {
        self.offsets.get(k).copied()
    }

    pub fn offset(&self, k: &K) -> usize {
        self.offsets.get(k).expect("block present").0
    }
}

/// Global indices, inside `(⊕ X) ⊗ (⊕ Y)`, of the summand `X_a ⊗ Y_b` in its own
/// lexicographic order.
pub fn sum_tensor_indices<K: Ord + Clone, L: Ord + Clone>(
    left: &BlockLayout<K>,
    a: &K,
    right: &BlockLayout<L>,
    b: &L,
) -> Vec<usize> {
    let (oa, da) = left.get(a).expect("block present");
    let (ob, db) = right.get(b).expect("block present");
    let total = right.total();
    let mut out = Vec::with_capacity(da * db);
    for x in 0..da {
        for y in 0..db {
            out.push((oa + x) * total + ob + y);
        }
    }
    out
}

/// Indices `offset..offset + len`.
pub fn range_indices(offset: usize, len: usize) -> Vec<usize> {
    (offset..offset + len).collect()
}

/// Accumulates blocks into a matrix between two layouts.
pub struct BlockMatrix<'a, F: Field, R: Ord + Clone, C: Ord + Clone> {
    pub rows: &'a BlockLayout<R>,
    pub cols: &'a BlockLayout<C>,
    pub matrix: Matrix<F>,
}

impl<'a, F: Field, R: Ord + Clone, C: Ord + Clone> BlockMatrix<'a, F, R, C> {
    pub fn new(field: &F, rows: &'a BlockLayout<R>, cols: &'a BlockLayout<C>) -> Self {
        BlockMatrix { rows, cols, matrix: Matrix::zeros(field, rows.total(), cols.total()) }
    }

    /// Adds `m` into the `(r, c)` block; silently ignores blocks absent from a layout.
    pub fn add(&mut self, r: &R, c: &C, m: &Matrix<F>) {
        let (Some((ro, rd)), Some((co, cd))) = (self.rows.get(r), self.cols.get(c)) else {
            return;
        };
        assert_eq!((rd, cd), m.shape(), "block shape mismatch");
        self.matrix.add_block(ro, co, m);
    }

    pub fn finish(self) -> Matrix<F> {
        self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn composition_counts_are_binomial() {
        for m in 0..8usize {
            for n in 0..=m {
                let expected = if m == 0 && n == 0 {
                    1
                } else if n == 0 {
                    0
                } else {
                    binom(m - 1, n - 1)
                };
                assert_eq!(compositions(m, n).len(), expected, "m={m} n={n}");
            }
        }
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn swap_moves_factors() {
        let f = Rationals;
        let s = swap(&f, 2, 3);
        let u = Matrix::from_i64(&f, &[&[1], &[2]]);
        let v = Matrix::from_i64(&f, &[&[3], &[4], &[5]]);
        assert_eq!(s.mul(&u.kronecker(&v)), v.kronecker(&u));
        assert!(swap(&f, 3, 2).mul(&s).is_identity());
    }

    #[test]
    fn reversal_is_an_involution() {
        let f = Rationals;
        let r = reversal(&f, 2, 3);
        assert!(r.mul(&r).is_identity());
        let e = |i| Matrix::column_vector(&f, (0..2).map(|k| f.from_i64((k == i) as i64)).collect());
        let word = kron_all(&f, &[&e(0), &e(0), &e(1)]);
        assert_eq!(r.mul(&word), kron_all(&f, &[&e(1), &e(0), &e(0)]));
    }
}
