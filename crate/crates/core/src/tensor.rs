//! Dense real tensors of order `m` and dimension `n`.
//!
//! Entries are stored row-major over the multi-index `(i1, i2, ..., im)` with
//! `i1` varying slowest, so row `i1` (all entries sharing the first index) is a
//! contiguous slice of `n^(m-1)` values. Inside a row, the trailing index
//! `(i2, ..., im)` is itself row-major and is called a *tail*.
//!
//! Indices are 0-based in this API. Reports and `Display` output are 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// A multi-index, 0-based. Used both for full indices and for row tails.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex(components)
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Components shifted to 1-based numbering.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c + 1).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c + 1)?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Flat tail offset of the diagonal tail `(i, i, ..., i)` in a row of `row_len = n^(m-1)`.
pub(crate) fn diag_tail_offset(dim: usize, order: usize, i: usize) -> usize {
    let mut acc = 0;
    for _ in 0..order - 1 {
        acc = acc * dim + i;
    }
    acc
}

/// Dense real tensor with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    row_len: usize,
    entries: Vec<f64>,
}

/// Borrowed view of one row `a[i1, .., ..]`.
#[derive(Clone, Copy, Debug)]
pub struct RowView<'a> {
    row: usize,
    diag: usize,
    values: &'a [f64],
}

impl<'a> RowView<'a> {
    pub fn row(&self) -> usize {
        self.row
    }

    /// All `n^(m-1)` entries of the row, indexed by flat tail offset.
    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    /// Flat tail offset of the diagonal entry.
    pub fn diag_tail(&self) -> usize {
        self.diag
    }

    pub fn diagonal(&self) -> f64 {
        self.values[self.diag]
    }

    pub fn sum(&self) -> f64 {
        row_sum_slice(self.values)
    }

    /// Off-diagonal entries as `(tail offset, value)`, ascending in tail offset.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, f64)> + 'a {
        let diag = self.diag;
        self.values
            .iter()
            .copied()
            .enumerate()
            .filter(move |&(t, _)| t != diag)
    }

    pub fn gamma_plus(&self) -> f64 {
        gamma_plus_slice(self.values, self.diag)
    }
}

pub(crate) fn row_sum_slice(values: &[f64]) -> f64 {
    let mut s = 0.0;
    for &v in values {
        s += v;
    }
    s
}

pub(crate) fn gamma_plus_slice(values: &[f64], diag: usize) -> f64 {
    let mut g = 0.0_f64;
    for (t, &v) in values.iter().enumerate() {
        if t != diag && v > g {
            g = v;
        }
    }
    g
}

impl Tensor {
    /// Builds a tensor from its row-major entries.
    pub fn new(order: usize, dim: usize, entries: Vec<f64>) -> Result<Self> {
        let len = Self::checked_len(order, dim)?;
        if entries.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: entries.len(),
            });
        }
        let row_len = len / dim;
        let t = Tensor {
            order,
            dim,
            row_len,
            entries,
        };
        if let Some(flat) = t.entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                position: t.multi_index(flat).to_string(),
                value: t.entries[flat],
            });
        }
        Ok(t)
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        let len = Self::checked_len(order, dim)?;
        Tensor::new(order, dim, vec![0.0; len])
    }

    /// Builds a tensor by evaluating `f` at every 0-based multi-index.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = Self::checked_len(order, dim)?;
        let mut idx = vec![0usize; order];
        let mut entries = Vec::with_capacity(len);
        for _ in 0..len {
            entries.push(f(&idx));
            advance(&mut idx, dim);
        }
        Tensor::new(order, dim, entries)
    }

    /// Tensor whose only nonzero entries are the diagonal ones, `a[i,...,i] = diag[i]`.
    pub fn diagonal_tensor(order: usize, diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        Tensor::from_fn(order, dim, |idx| {
            if idx.iter().all(|&c| c == idx[0]) {
                diag[idx[0]]
            } else {
                0.0
            }
        })
    }

    /// Tensor with `diag` on the diagonal and `off` everywhere else.
    pub fn constant_pattern(order: usize, dim: usize, diag: f64, off: f64) -> Result<Self> {
        Tensor::from_fn(order, dim, |idx| {
            if idx.iter().all(|&c| c == idx[0]) {
                diag
            } else {
                off
            }
        })
    }

    fn checked_len(order: usize, dim: usize) -> Result<usize> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        if dim < 1 {
            return Err(Error::InvalidDim(dim));
        }
        match checked_pow(dim, order) {
            Some(len) if len <= isize::MAX as usize / 8 => Ok(len),
            _ => Err(Error::TooLarge { order, dim }),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of entries in one row, `n^(m-1)`.
    pub fn row_len(&self) -> usize {
        self.row_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    /// Overwrites one entry. The caller guarantees the value is finite.
    pub(crate) fn set_flat(&mut self, flat: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.entries[flat] = value;
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.order == other.order && self.dim == other.dim
    }

    pub(crate) fn shape_string(&self) -> String {
        format!("order {}, dim {}", self.order, self.dim)
    }

    pub(crate) fn ensure_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(self.shape_string(), other.shape_string()))
        }
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i < self.dim {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            })
        }
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.order {
            return Err(Error::IndexArity {
                expected: self.order,
                got: idx.len(),
            });
        }
        let mut flat = 0;
        for &c in idx {
            self.check_row(c)?;
            flat = flat * self.dim + c;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, flat: usize) -> MultiIndex {
        MultiIndex(decompose(flat, self.dim, self.order))
    }

    /// Tail offset of a trailing multi-index `(i2, ..., im)`.
    pub fn tail_offset(&self, tail: &[usize]) -> Result<usize> {
        if tail.len() != self.order - 1 {
            return Err(Error::IndexArity {
                expected: self.order - 1,
                got: tail.len(),
            });
        }
        let mut t = 0;
        for &c in tail {
            self.check_row(c)?;
            t = t * self.dim + c;
        }
        Ok(t)
    }

    pub fn tail_index(&self, tail: usize) -> MultiIndex {
        MultiIndex(decompose(tail, self.dim, self.order - 1))
    }

    pub fn diag_tail(&self, i: usize) -> usize {
        diag_tail_offset(self.dim, self.order, i)
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.entries[self.flat_index(idx)?])
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.entries[i * self.row_len + self.diag_tail(i)]
    }

    pub fn row(&self, i: usize) -> Result<RowView<'_>> {
        self.check_row(i)?;
        Ok(self.row_unchecked(i))
    }

    pub(crate) fn row_unchecked(&self, i: usize) -> RowView<'_> {
        RowView {
            row: i,
            diag: self.diag_tail(i),
            values: &self.entries[i * self.row_len..(i + 1) * self.row_len],
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = RowView<'_>> {
        (0..self.dim).map(move |i| self.row_unchecked(i))
    }

    /// Sum of the row, accumulated in ascending tail order.
    pub fn row_sum(&self, i: usize) -> Result<f64> {
        Ok(self.row(i)?.sum())
    }

    /// `max(0, off-diagonal entries of row i)`; zero when the row has no off-diagonal entries.
    pub fn gamma_plus(&self, i: usize) -> Result<f64> {
        Ok(self.row(i)?.gamma_plus())
    }

    /// The map `x -> A x^(m-1)`, `(A x^(m-1))_i = sum a[i,i2..im] x_i2 ... x_im`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let tail_products = tail_products(x, self.order - 1);
        self.entries
            .chunks_exact(self.row_len)
            .map(|row| {
                let mut s = 0.0;
                for (a, p) in row.iter().zip(&tail_products) {
                    s += a * p;
                }
                s
            })
            .collect()
    }

    /// `Ac - Delta x_1 T_z x_2 ... x_m T_z` with `T_z = diag(z)`:
    /// entry `(i1..im)` is `ac - delta * z_i1 * ... * z_im`.
    pub fn sign_transform(ac: &Tensor, delta: &Tensor, z: &[f64]) -> Result<Tensor> {
        ac.ensure_same_shape(delta)?;
        if z.len() != ac.dim {
            return Err(Error::LengthMismatch {
                expected: ac.dim,
                got: z.len(),
            });
        }
        if let Some((index, &value)) = z.iter().enumerate().find(|(_, &v)| v != 1.0 && v != -1.0) {
            return Err(Error::InvalidSign { index, value });
        }
        if let Some(flat) = delta.entries.iter().position(|&d| d < 0.0) {
            return Err(Error::NegativeRadius {
                position: delta.multi_index(flat).to_string(),
                value: delta.entries[flat],
            });
        }
        let mut idx = vec![0usize; ac.order];
        let mut entries = Vec::with_capacity(ac.len());
        for (c, d) in ac.entries.iter().zip(&delta.entries) {
            let sign: f64 = idx.iter().map(|&k| z[k]).product();
            entries.push(c - d * sign);
            advance(&mut idx, ac.dim);
        }
        Tensor::new(ac.order, ac.dim, entries)
    }

    /// True iff every entry is invariant under all permutations of its index.
    pub fn is_symmetric(&self) -> bool {
        let mut idx = vec![0usize; self.order];
        let mut sorted = vec![0usize; self.order];
        for flat in 0..self.len() {
            sorted.copy_from_slice(&idx);
            sorted.sort_unstable();
            let canon = sorted.iter().fold(0, |acc, &c| acc * self.dim + c);
            if self.entries[canon] != self.entries[flat] {
                return false;
            }
            advance(&mut idx, self.dim);
        }
        true
    }

    /// True iff `a[j1..jm] == a[j1+1..jm+1]` with every index shifted modulo `n`.
    pub fn is_circulant(&self) -> bool {
        let mut idx = vec![0usize; self.order];
        for flat in 0..self.len() {
            let shifted = idx
                .iter()
                .fold(0, |acc, &c| acc * self.dim + (c + 1) % self.dim);
            if self.entries[shifted] != self.entries[flat] {
                return false;
            }
            advance(&mut idx, self.dim);
        }
        true
    }

    /// The circulant tensor whose first row is `row` (tail-ordered, length `n^(m-1)`).
    pub fn circulant_from_first_row(row: &[f64], order: usize, dim: usize) -> Result<Tensor> {
        let len = Self::checked_len(order, dim)?;
        let row_len = len / dim;
        if row.len() != row_len {
            return Err(Error::LengthMismatch {
                expected: row_len,
                got: row.len(),
            });
        }
        Tensor::from_fn(order, dim, |idx| {
            let i1 = idx[0];
            let tail = idx[1..]
                .iter()
                .fold(0, |acc, &c| acc * dim + (c + dim - i1) % dim);
            row[tail]
        })
    }

    /// Off-diagonal entries of a row in ascending tail order.
    pub(crate) fn off_diagonal_values(&self, i: usize) -> Vec<f64> {
        self.row_unchecked(i).off_diagonal().map(|(_, v)| v).collect()
    }
}

/// Where one row of a [`row_mix`] result comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSource {
    /// Index into the parent list.
    pub parent: usize,
    /// `permutation[s]` is the parent's off-diagonal slot placed in result slot `s`.
    /// Slots enumerate the `n^(m-1) - 1` off-diagonal tails in ascending order.
    pub permutation: Vec<usize>,
}

impl RowSource {
    pub fn identity(parent: usize, off_diagonal_count: usize) -> Self {
        RowSource {
            parent,
            permutation: (0..off_diagonal_count).collect(),
        }
    }
}

/// Assembles a tensor row by row: each row keeps its parent's diagonal entry and
/// a rearrangement of that parent's off-diagonal entries.
pub fn row_mix(parents: &[Tensor], assignment: &[RowSource]) -> Result<Tensor> {
    let first = parents
        .first()
        .ok_or_else(|| Error::InvalidArgument("row_mix needs at least one parent".into()))?;
    for p in parents {
        first.ensure_same_shape(p)?;
    }
    let (order, dim, row_len) = (first.order, first.dim, first.row_len);
    if assignment.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "assignment covers {} rows, tensor has {dim}",
            assignment.len()
        )));
    }
    let off_count = row_len - 1;
    let mut entries = Vec::with_capacity(first.len());
    for (i, src) in assignment.iter().enumerate() {
        let parent = parents.get(src.parent).ok_or_else(|| {
            Error::InvalidArgument(format!("row {} names missing parent {}", i + 1, src.parent))
        })?;
        if src.permutation.len() != off_count {
            return Err(Error::InvalidArgument(format!(
                "row {} permutation has {} slots, expected {off_count}",
                i + 1,
                src.permutation.len()
            )));
        }
        let mut seen = vec![false; off_count];
        for &s in &src.permutation {
            if s >= off_count || seen[s] {
                return Err(Error::InvalidArgument(format!(
                    "row {} permutation is not a bijection",
                    i + 1
                )));
            }
            seen[s] = true;
        }
        let off = parent.off_diagonal_values(i);
        let diag = parent.diag_tail(i);
        let mut slot = 0;
        for t in 0..row_len {
            if t == diag {
                entries.push(parent.diagonal(i));
            } else {
                entries.push(off[src.permutation[slot]]);
                slot += 1;
            }
        }
    }
    Tensor::new(order, dim, entries)
}

/// Products `x_i2 * ... * x_im` for every tail, in tail order.
fn tail_products(x: &[f64], tail_order: usize) -> Vec<f64> {
    let mut prods = vec![1.0];
    for _ in 0..tail_order {
        let mut next = Vec::with_capacity(prods.len() * x.len());
        for &p in &prods {
            for &xi in x {
                next.push(p * xi);
            }
        }
        prods = next;
    }
    prods
}

pub(crate) fn decompose(mut flat: usize, dim: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for k in (0..len).rev() {
        out[k] = flat % dim;
        flat /= dim;
    }
    out
}

/// Row-major odometer step.
pub(crate) fn advance(idx: &mut [usize], dim: usize) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dim {
            return;
        }
        idx[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex31_lower() -> Tensor {
        Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.]).unwrap()
    }

    fn ex4_lower() -> Tensor {
        Tensor::constant_pattern(3, 2, 6.0, 0.0).unwrap()
    }

    fn ex4_upper() -> Tensor {
        Tensor::constant_pattern(3, 2, 7.0, 1.0).unwrap()
    }

    #[test]
    fn make_tensor_examples() {
        let t = ex31_lower();
        assert_eq!(t.entries(), &[4., 0., 0., 1., 0., 1., 1., 4.]);
        assert_eq!(t.get(&[0, 1, 1]).unwrap(), 1.0);
        let one = Tensor::new(2, 1, vec![7.0]).unwrap();
        assert_eq!(one.diagonal(0), 7.0);
        assert!(matches!(
            Tensor::new(3, 2, vec![1., 0., 0.]),
            Err(Error::LengthMismatch { expected: 8, got: 3 })
        ));
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(Tensor::new(1, 2, vec![0.; 2]), Err(Error::InvalidOrder(1))));
        assert!(matches!(Tensor::new(2, 0, vec![]), Err(Error::InvalidDim(0))));
        let err = Tensor::new(2, 2, vec![0., f64::NAN, 0., 0.]).unwrap_err();
        match err {
            Error::NonFinite { position, .. } => assert_eq!(position, "(1,2)"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Tensor::new(2, 2, vec![0., 0., f64::INFINITY, 0.]).is_err());
    }

    #[test]
    fn row_sums() {
        assert_eq!(ex31_lower().row_sum(0).unwrap(), 5.0);
        assert_eq!(ex31_lower().row_sum(1).unwrap(), 6.0);
        assert_eq!(Tensor::zeros(4, 3).unwrap().row_sum(2).unwrap(), 0.0);
        assert_eq!(ex4_lower().row_sum(0).unwrap(), 6.0);
        assert!(matches!(
            ex4_lower().row_sum(2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn gamma_plus_examples() {
        assert_eq!(ex4_upper().gamma_plus(0).unwrap(), 1.0);
        assert_eq!(ex31_lower().gamma_plus(0).unwrap(), 1.0);
        let neg = Tensor::constant_pattern(3, 3, 2.0, -0.5).unwrap();
        assert_eq!(neg.gamma_plus(1).unwrap(), 0.0);
        // n = 1 has no off-diagonal positions
        let single = Tensor::new(3, 1, vec![-3.0]).unwrap();
        assert_eq!(single.gamma_plus(0).unwrap(), 0.0);
    }

    #[test]
    fn diag_tail_positions() {
        let t = Tensor::zeros(4, 3).unwrap();
        assert_eq!(t.diag_tail(0), 0);
        assert_eq!(t.diag_tail(1), 9 + 3 + 1);
        assert_eq!(t.diag_tail(2), 26);
        assert_eq!(t.tail_index(13).components(), &[1, 1, 1]);
        assert_eq!(t.tail_offset(&[2, 2, 2]).unwrap(), 26);
    }

    #[test]
    fn apply_examples() {
        let d = Tensor::diagonal_tensor(4, &[1.0, 1.0, 1.0]).unwrap();
        let x = [2.0, -3.0, 0.5];
        let y = d.apply(&x).unwrap();
        assert_eq!(y, vec![8.0, -27.0, 0.125]);
        let a = ex31_lower();
        assert_eq!(a.apply(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(a.apply(&[1.0, 1.0]).unwrap(), vec![5.0, 6.0]);
        assert!(a.apply(&[1.0]).is_err());
    }

    #[test]
    fn apply_matches_naive_sum() {
        let a = Tensor::from_fn(3, 3, |idx| (idx[0] * 9 + idx[1] * 3 + idx[2]) as f64 - 10.0).unwrap();
        let x = [0.5, -1.0, 2.0];
        let y = a.apply(&x).unwrap();
        for (i, yi) in y.iter().enumerate() {
            let mut s = 0.0;
            for j in 0..3 {
                for k in 0..3 {
                    s += a.get(&[i, j, k]).unwrap() * x[j] * x[k];
                }
            }
            assert_eq!(*yi, s);
        }
    }

    #[test]
    fn sign_transform_examples() {
        let ac = ex4_lower();
        let delta = Tensor::constant_pattern(3, 2, 0.5, 0.5).unwrap();
        let lower = Tensor::sign_transform(&ac, &delta, &[1.0, 1.0]).unwrap();
        for (l, (c, d)) in lower.entries().iter().zip(ac.entries().iter().zip(delta.entries())) {
            assert_eq!(*l, c - d);
        }
        let zero = Tensor::zeros(3, 2).unwrap();
        assert_eq!(Tensor::sign_transform(&ac, &zero, &[1.0, -1.0]).unwrap(), ac);

        let ones = Tensor::constant_pattern(3, 2, 1.0, 1.0).unwrap();
        let az = Tensor::sign_transform(&zero, &ones, &[1.0, -1.0]).unwrap();
        assert_eq!(az.get(&[0, 1, 1]).unwrap(), -1.0);
        assert_eq!(az.get(&[0, 0, 1]).unwrap(), 1.0);

        assert!(matches!(
            Tensor::sign_transform(&ac, &delta, &[1.0, 0.0]),
            Err(Error::InvalidSign { index: 1, .. })
        ));
        let neg = Tensor::constant_pattern(3, 2, -1.0, 0.0).unwrap();
        assert!(matches!(
            Tensor::sign_transform(&ac, &neg, &[1.0, 1.0]),
            Err(Error::NegativeRadius { .. })
        ));
        assert!(Tensor::sign_transform(&ac, &Tensor::zeros(2, 2).unwrap(), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn symmetry_examples() {
        assert!(Tensor::diagonal_tensor(3, &[1.0, 2.0, -4.0]).unwrap().is_symmetric());
        assert!(ex4_lower().is_symmetric());
        let mut t = Tensor::zeros(3, 2).unwrap();
        t.set_flat(t.flat_index(&[0, 0, 1]).unwrap(), 1.0);
        assert!(!t.is_symmetric());
        // the Example-3.1 lower bound is symmetric as well
        assert!(ex31_lower().is_symmetric());
    }

    #[test]
    fn circulant_examples() {
        assert!(Tensor::constant_pattern(3, 4, 2.5, 2.5).unwrap().is_circulant());
        let c = Tensor::circulant_from_first_row(&[4., 0., 0., 1.], 3, 2).unwrap();
        assert!(c.is_circulant());
        // rows are cyclic shifts: a[2,i2,i3] = a[1,i2-1,i3-1]
        assert_eq!(c.entries(), &[4., 0., 0., 1., 1., 0., 0., 4.]);
        // Example 3.1's lower bound is not circulant: a112 = 0 but a221 = 1.
        assert!(!ex31_lower().is_circulant());
        assert_eq!(
            Tensor::circulant_from_first_row(&[0.; 9], 3, 3).unwrap(),
            Tensor::zeros(3, 3).unwrap()
        );
        assert!(Tensor::circulant_from_first_row(&[0.; 4], 3, 3).is_err());
    }

    #[test]
    fn circulant_round_trip_through_first_row() {
        let row: Vec<f64> = (0..9).map(|k| k as f64 * 0.25 - 1.0).collect();
        let c = Tensor::circulant_from_first_row(&row, 3, 3).unwrap();
        let again = Tensor::circulant_from_first_row(c.row(0).unwrap().values(), 3, 3).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn row_mix_identity_and_errors() {
        let a = ex31_lower();
        let ident: Vec<RowSource> = (0..2).map(|_| RowSource::identity(0, 3)).collect();
        assert_eq!(row_mix(std::slice::from_ref(&a), &ident).unwrap(), a);

        let swap = vec![
            RowSource {
                parent: 0,
                permutation: vec![2, 1, 0],
            },
            RowSource::identity(0, 3),
        ];
        let mixed = row_mix(std::slice::from_ref(&a), &swap).unwrap();
        assert_eq!(mixed.row(0).unwrap().values(), &[4., 1., 0., 0.]);

        let bad = vec![
            RowSource {
                parent: 0,
                permutation: vec![0, 0, 1],
            },
            RowSource::identity(0, 3),
        ];
        assert!(row_mix(std::slice::from_ref(&a), &bad).is_err());
        assert!(row_mix(std::slice::from_ref(&a), &ident[..1]).is_err());
    }

    #[test]
    fn multi_index_display_is_one_based() {
        assert_eq!(MultiIndex::new(vec![1, 1]).to_string(), "(2,2)");
        assert_eq!(ex31_lower().multi_index(3).components(), &[0, 1, 1]);
    }
}
