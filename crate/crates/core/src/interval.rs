//! Interval tensors `[lower, upper]` and the extreme members used by the
//! interval criteria and their proofs.

use crate::error::{Error, Result};
use crate::tensor::{MultiIndex, Tensor};

/// The box of all tensors `A` with `lower <= A <= upper` entrywise.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalTensor {
    lower: Tensor,
    upper: Tensor,
}

impl IntervalTensor {
    pub fn new(lower: Tensor, upper: Tensor) -> Result<Self> {
        lower.ensure_same_shape(&upper)?;
        let bad = lower
            .entries()
            .iter()
            .zip(upper.entries())
            .position(|(l, u)| l > u);
        if let Some(flat) = bad {
            return Err(Error::InvertedBounds {
                position: lower.multi_index(flat).to_string(),
                lower: lower.entries()[flat],
                upper: upper.entries()[flat],
            });
        }
        Ok(IntervalTensor { lower, upper })
    }

    /// The interval containing exactly `a`.
    pub fn degenerate(a: Tensor) -> Self {
        IntervalTensor {
            lower: a.clone(),
            upper: a,
        }
    }

    /// Builds `[c - delta, c + delta]`.
    pub fn from_midpoint_radius(c: &Tensor, delta: &Tensor) -> Result<Self> {
        c.ensure_same_shape(delta)?;
        if let Some(flat) = delta.entries().iter().position(|&d| d < 0.0) {
            return Err(Error::NegativeRadius {
                position: delta.multi_index(flat).to_string(),
                value: delta.entries()[flat],
            });
        }
        let lo = c.entries().iter().zip(delta.entries()).map(|(c, d)| c - d).collect();
        let hi = c.entries().iter().zip(delta.entries()).map(|(c, d)| c + d).collect();
        IntervalTensor::new(
            Tensor::new(c.order(), c.dim(), lo)?,
            Tensor::new(c.order(), c.dim(), hi)?,
        )
    }

    pub fn lower(&self) -> &Tensor {
        &self.lower
    }

    pub fn upper(&self) -> &Tensor {
        &self.upper
    }

    pub fn order(&self) -> usize {
        self.lower.order()
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn row_len(&self) -> usize {
        self.lower.row_len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// `(A^c, Delta)` with `A^c = (lower + upper) / 2` and `Delta = (upper - lower) / 2`.
    pub fn midpoint_radius(&self) -> (Tensor, Tensor) {
        let (o, n) = (self.order(), self.dim());
        let lo = self.lower.entries();
        let hi = self.upper.entries();
        let c = lo.iter().zip(hi).map(|(l, u)| (l + u) / 2.0).collect();
        let d = lo.iter().zip(hi).map(|(l, u)| (u - l) / 2.0).collect();
        // finite inputs give finite halves; the shapes are already valid
        (
            Tensor::new(o, n, c).expect("midpoint of finite bounds"),
            Tensor::new(o, n, d).expect("radius of finite bounds"),
        )
    }

    pub fn contains(&self, a: &Tensor) -> Result<bool> {
        self.lower.ensure_same_shape(a)?;
        Ok(self.contains_unchecked(a))
    }

    pub(crate) fn contains_unchecked(&self, a: &Tensor) -> bool {
        a.entries()
            .iter()
            .zip(self.lower.entries().iter().zip(self.upper.entries()))
            .all(|(v, (l, u))| l <= v && v <= u)
    }

    /// Symmetric when both midpoint and radius are symmetric tensors.
    pub fn is_symmetric(&self) -> bool {
        let (c, d) = self.midpoint_radius();
        c.is_symmetric() && d.is_symmetric()
    }

    /// Every member is a Z tensor exactly when every off-diagonal upper entry is <= 0.
    pub fn is_interval_z(&self) -> bool {
        self.upper
            .rows()
            .all(|row| row.off_diagonal().all(|(_, v)| v <= 0.0))
    }

    pub fn is_circulant(&self) -> bool {
        self.lower.is_circulant() && self.upper.is_circulant()
    }

    /// Flat positions where `lower < upper`.
    pub fn free_positions(&self) -> Vec<usize> {
        self.lower
            .entries()
            .iter()
            .zip(self.upper.entries())
            .enumerate()
            .filter(|(_, (l, u))| l < u)
            .map(|(k, _)| k)
            .collect()
    }

    fn off_diag_tail(&self, i: usize, tail: &[usize]) -> Result<usize> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
        }
        let t = self.lower.tail_offset(tail)?;
        if t == self.lower.diag_tail(i) {
            return Err(Error::DiagonalTail {
                row: i + 1,
                tail: MultiIndex::new(tail.to_vec()).to_string(),
            });
        }
        Ok(t)
    }

    /// Lower bound on the diagonal, upper bound everywhere else.
    pub fn extreme_prime(&self) -> Tensor {
        let mut out = self.upper.clone();
        let row_len = self.row_len();
        for i in 0..self.dim() {
            let flat = i * row_len + self.lower.diag_tail(i);
            out.set_flat(flat, self.lower.entries()[flat]);
        }
        out
    }

    /// `lower` with the single off-diagonal position `(i, tail)` raised to its upper bound.
    pub fn extreme_single_raise(&self, i: usize, tail: &[usize]) -> Result<Tensor> {
        let t = self.off_diag_tail(i, tail)?;
        let mut out = self.lower.clone();
        let flat = i * self.row_len() + t;
        out.set_flat(flat, self.upper.entries()[flat]);
        Ok(out)
    }

    /// `lower` with `(i, j)` and `(i2, k)` raised; the two rows must differ.
    pub fn extreme_double_raise(&self, (i, j): (usize, &[usize]), (i2, k): (usize, &[usize])) -> Result<Tensor> {
        if i == i2 {
            return Err(Error::InvalidArgument(format!(
                "double raise needs two distinct rows, got row {} twice",
                i + 1
            )));
        }
        let tj = self.off_diag_tail(i, j)?;
        let tk = self.off_diag_tail(i2, k)?;
        let mut out = self.lower.clone();
        for flat in [i * self.row_len() + tj, i2 * self.row_len() + tk] {
            out.set_flat(flat, self.upper.entries()[flat]);
        }
        Ok(out)
    }

    /// Tail of the largest off-diagonal upper entry of row `i`; ties go to the smallest tail.
    pub fn upper_argmax_tail(&self, i: usize) -> Option<usize> {
        let row = self.upper.row_unchecked(i);
        let mut best: Option<(usize, f64)> = None;
        for (t, v) in row.off_diagonal() {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((t, v));
            }
        }
        best.map(|(t, _)| t)
    }

    /// `lower`, except that every row other than `i` has its largest upper
    /// off-diagonal position raised to the upper bound.
    pub fn extreme_row_max_except(&self, i: usize) -> Result<Tensor> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
        }
        let mut out = self.lower.clone();
        for l in (0..self.dim()).filter(|&l| l != i) {
            if let Some(k) = self.upper_argmax_tail(l) {
                let flat = l * self.row_len() + k;
                out.set_flat(flat, self.upper.entries()[flat]);
            }
        }
        Ok(out)
    }

    /// Per row: upper bound at the argmax tail `k`, lower bound on the diagonal,
    /// and `min(lower_t, lower_k)` elsewhere. This can leave the box.
    pub fn extreme_hat(&self) -> Tensor {
        let mut out = self.lower.clone();
        let row_len = self.row_len();
        for l in 0..self.dim() {
            let Some(k) = self.upper_argmax_tail(l) else { continue };
            let base = l * row_len;
            let lower_k = self.lower.entries()[base + k];
            let diag = self.lower.diag_tail(l);
            for t in 0..row_len {
                let v = if t == k {
                    self.upper.entries()[base + t]
                } else if t == diag {
                    continue;
                } else {
                    self.lower.entries()[base + t].min(lower_k)
                };
                out.set_flat(base + t, v);
            }
        }
        out
    }

    /// Collapses every off-diagonal position `(i, j)` whose upper bound is
    /// dominated by the lower bound of another off-diagonal position of the same
    /// row. Returns the reduced interval and the collapsed positions (full 0-based indices).
    pub fn reduce_via_k(&self) -> (IntervalTensor, Vec<MultiIndex>) {
        let row_len = self.row_len();
        let mut upper = self.upper.clone();
        let mut k_set = Vec::new();
        for i in 0..self.dim() {
            let base = i * row_len;
            let diag = self.lower.diag_tail(i);
            let lo = &self.lower.entries()[base..base + row_len];
            let hi = &self.upper.entries()[base..base + row_len];
            // the two largest off-diagonal lowers are enough to test "some other tail"
            let mut best = (f64::NEG_INFINITY, usize::MAX);
            let mut second = f64::NEG_INFINITY;
            for (t, &v) in lo.iter().enumerate() {
                if t == diag {
                    continue;
                }
                if v > best.0 {
                    second = best.0;
                    best = (v, t);
                } else if v > second {
                    second = v;
                }
            }
            for t in 0..row_len {
                if t == diag {
                    continue;
                }
                let other = if t == best.1 { second } else { best.0 };
                if other >= hi[t] {
                    k_set.push(self.lower.multi_index(base + t));
                    upper.set_flat(base + t, lo[t]);
                }
            }
        }
        (
            IntervalTensor {
                lower: self.lower.clone(),
                upper,
            },
            k_set,
        )
    }

    /// Number of vertices, `2^(free positions)`, or `None` when that overflows `u64`.
    pub fn vertex_count(&self) -> Option<u64> {
        let free = self.free_positions().len();
        (free < 64).then(|| 1u64 << free)
    }

    pub(crate) fn check_budget(&self, limit: u64) -> Result<Vec<usize>> {
        let free = self.free_positions();
        if free.len() >= 64 || (1u64 << free.len()) > limit {
            return Err(Error::BudgetExceeded {
                free_positions: free.len(),
                limit,
            });
        }
        Ok(free)
    }

    /// Every vertex of the box, in ascending selector order. Only positions with
    /// `lower < upper` are enumerated, so a degenerate interval yields one tensor.
    pub fn vertex_iter(&self, limit: u64) -> Result<VertexIter<'_>> {
        let free = self.check_budget(limit)?;
        let total = 1u64 << free.len();
        Ok(VertexIter {
            interval: self,
            free,
            next: 0,
            total,
        })
    }

    /// The vertex picked by a full selector (`true` = upper).
    pub fn vertex(&self, sel: &VertexSelector) -> Result<Tensor> {
        if sel.bits.len() != self.lower.len() {
            return Err(Error::LengthMismatch {
                expected: self.lower.len(),
                got: sel.bits.len(),
            });
        }
        let mut out = self.lower.clone();
        for (k, &b) in sel.bits.iter().enumerate() {
            if b {
                out.set_flat(k, self.upper.entries()[k]);
            }
        }
        Ok(out)
    }

    /// Overwrites `buf` with the vertex whose free-position bits are `counter`.
    pub(crate) fn write_vertex(&self, free: &[usize], counter: u64, buf: &mut Tensor) {
        let lo = self.lower.entries();
        let hi = self.upper.entries();
        let e = buf.entries_mut();
        for (bit, &flat) in free.iter().enumerate() {
            e[flat] = if counter >> bit & 1 == 1 { hi[flat] } else { lo[flat] };
        }
    }
}

/// One boolean per entry: `false` picks the lower bound, `true` the upper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSelector {
    pub bits: Vec<bool>,
}

impl VertexSelector {
    /// Expands a counter over the free positions into a full selector.
    pub fn from_counter(len: usize, free: &[usize], counter: u64) -> Self {
        let mut bits = vec![false; len];
        for (bit, &flat) in free.iter().enumerate() {
            bits[flat] = counter >> bit & 1 == 1;
        }
        VertexSelector { bits }
    }
}

pub struct VertexIter<'a> {
    interval: &'a IntervalTensor,
    free: Vec<usize>,
    next: u64,
    total: u64,
}

impl VertexIter<'_> {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn free_positions(&self) -> &[usize] {
        &self.free
    }
}

impl Iterator for VertexIter<'_> {
    type Item = Tensor;

    fn next(&mut self) -> Option<Tensor> {
        if self.next >= self.total {
            return None;
        }
        let mut t = self.interval.lower.clone();
        self.interval.write_vertex(&self.free, self.next, &mut t);
        self.next += 1;
        Some(t)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for VertexIter<'_> {}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn ex31() -> IntervalTensor {
        IntervalTensor::new(
            Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.]).unwrap(),
            Tensor::new(3, 2, vec![5., 1., 1., 2., 1., 2., 2., 5.]).unwrap(),
        )
        .unwrap()
    }

    pub(crate) fn ex4() -> IntervalTensor {
        IntervalTensor::new(
            Tensor::constant_pattern(3, 2, 6.0, 0.0).unwrap(),
            Tensor::constant_pattern(3, 2, 7.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn make_interval_examples() {
        let ai = ex31();
        assert!(ai.contains(ai.lower()).unwrap());
        assert!(ai.contains(ai.upper()).unwrap());
        let d = IntervalTensor::degenerate(ai.lower().clone());
        assert!(d.is_degenerate());
        let mut hi = ai.lower().clone().into_entries();
        hi[5] = -1.0;
        let err = IntervalTensor::new(ai.lower().clone(), Tensor::new(3, 2, hi).unwrap()).unwrap_err();
        match err {
            Error::InvertedBounds { position, .. } => assert_eq!(position, "(2,1,2)"),
            e => panic!("{e:?}"),
        }
        assert!(IntervalTensor::new(Tensor::zeros(3, 2).unwrap(), Tensor::zeros(2, 2).unwrap()).is_err());
    }

    #[test]
    fn midpoint_radius_examples() {
        let (c, d) = ex4().midpoint_radius();
        assert_eq!(c, Tensor::constant_pattern(3, 2, 6.5, 0.5).unwrap());
        assert_eq!(d, Tensor::constant_pattern(3, 2, 0.5, 0.5).unwrap());
        let back = IntervalTensor::from_midpoint_radius(&c, &d).unwrap();
        assert_eq!(back, ex4());
        let (c0, d0) = IntervalTensor::degenerate(ex31().lower().clone()).midpoint_radius();
        assert_eq!(&c0, ex31().lower());
        assert_eq!(d0, Tensor::zeros(3, 2).unwrap());
    }

    #[test]
    fn contains_examples() {
        let ai = ex4();
        let (c, d) = ai.midpoint_radius();
        for z in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            let az = Tensor::sign_transform(&c, &d, &z).unwrap();
            assert!(ai.contains(&az).unwrap());
        }
        let mut e = ai.upper().clone().into_entries();
        e[3] += 1.0;
        assert!(!ai.contains(&Tensor::new(3, 2, e).unwrap()).unwrap());
    }

    #[test]
    fn extreme_prime_examples() {
        assert_eq!(ex4().extreme_prime(), Tensor::constant_pattern(3, 2, 6.0, 1.0).unwrap());
        let a = ex31().lower().clone();
        assert_eq!(IntervalTensor::degenerate(a.clone()).extreme_prime(), a);
    }

    #[test]
    fn single_raise_examples() {
        let r = ex31().extreme_single_raise(0, &[1, 1]).unwrap();
        assert_eq!(r.get(&[0, 1, 1]).unwrap(), 2.0);
        assert_eq!(r.entries()[..3], ex31().lower().entries()[..3]);
        assert!(matches!(
            ex31().extreme_single_raise(0, &[0, 0]),
            Err(Error::DiagonalTail { row: 1, .. })
        ));
        let d = IntervalTensor::degenerate(ex31().lower().clone());
        assert_eq!(&d.extreme_single_raise(1, &[0, 1]).unwrap(), d.lower());
    }

    #[test]
    fn double_raise_examples() {
        let ai = ex4();
        let r = ai.extreme_double_raise((0, &[0, 1]), (1, &[1, 0])).unwrap();
        assert_eq!(r.get(&[0, 0, 1]).unwrap(), 1.0);
        assert_eq!(r.get(&[1, 1, 0]).unwrap(), 1.0);
        assert_eq!(r.iter_sum_check(), 6.0 + 6.0 + 2.0);
        assert!(ai.extreme_double_raise((0, &[0, 1]), (0, &[1, 0])).is_err());
        assert!(ai.extreme_double_raise((0, &[0, 1]), (1, &[1, 1])).is_err());
    }

    impl Tensor {
        fn iter_sum_check(&self) -> f64 {
            self.entries().iter().sum()
        }
    }

    #[test]
    fn row_max_except_examples() {
        let r = ex4().extreme_row_max_except(0).unwrap();
        // row 2's first off-diagonal tail is (1,1)
        assert_eq!(r.get(&[1, 0, 0]).unwrap(), 1.0);
        assert_eq!(r.iter_sum_check(), 13.0);
        let one = IntervalTensor::new(Tensor::new(3, 1, vec![1.0]).unwrap(), Tensor::new(3, 1, vec![2.0]).unwrap()).unwrap();
        assert_eq!(&one.extreme_row_max_except(0).unwrap(), one.lower());
    }

    #[test]
    fn hat_examples() {
        let h = ex4().extreme_hat();
        assert_eq!(h.row(0).unwrap().values(), &[6., 1., 0., 0.]);
        assert_eq!(h.row(1).unwrap().values(), &[1., 0., 0., 6.]);

        // m = 2, n = 3: row 1 lower off-diagonal {3, 0}, argmax tail at the 3-entry
        let lo = Tensor::new(2, 3, vec![9., 3., 0., 0., 9., 0., 0., 0., 9.]).unwrap();
        let hi = Tensor::new(2, 3, vec![9., 4., 1., 0., 9., 0., 0., 0., 9.]).unwrap();
        let h = IntervalTensor::new(lo, hi).unwrap().extreme_hat();
        assert_eq!(h.row(0).unwrap().values(), &[9., 4., 0.]);

        // the min clause can dip below the box
        let lo = Tensor::new(2, 3, vec![9., 0., 5., 0., 9., 0., 0., 0., 9.]).unwrap();
        let hi = Tensor::new(2, 3, vec![9., 7., 6., 0., 9., 0., 0., 0., 9.]).unwrap();
        let ai = IntervalTensor::new(lo, hi).unwrap();
        let h = ai.extreme_hat();
        assert_eq!(h.row(0).unwrap().values(), &[9., 7., 0.]);
        assert!(!ai.contains(&h).unwrap());
    }

    #[test]
    fn k_reduction_examples() {
        let (r, k) = ex4().reduce_via_k();
        assert!(k.is_empty());
        assert_eq!(r, ex4());

        let lo = Tensor::new(2, 3, vec![5., 0., 1., 0., 5., 0., 0., 0., 5.]).unwrap();
        let hi = Tensor::new(2, 3, vec![5., 0.5, 2., 0., 5., 0., 0., 0., 5.]).unwrap();
        let ai = IntervalTensor::new(lo, hi).unwrap();
        let (r, k) = ai.reduce_via_k();
        assert_eq!(k[0].components(), &[0, 1]);
        assert_eq!(r.upper().get(&[0, 1]).unwrap(), 0.0);
        assert_eq!(r.reduce_via_k().0, r);
        assert!(ai.contains(r.upper()).unwrap());

        // with one off-diagonal position per row there is no other witness
        let m2 = IntervalTensor::new(
            Tensor::new(2, 2, vec![1., 5., 5., 1.]).unwrap(),
            Tensor::new(2, 2, vec![2., 6., 6., 2.]).unwrap(),
        )
        .unwrap();
        assert!(m2.reduce_via_k().1.is_empty());
    }

    #[test]
    fn vertex_iter_examples() {
        let d = IntervalTensor::degenerate(ex31().lower().clone());
        assert_eq!(d.vertex_iter(1).unwrap().count(), 1);
        let ai = ex4();
        let it = ai.vertex_iter(1 << 20).unwrap();
        // 8 entries, all free: 2^8 vertices
        assert_eq!(it.total(), 256);
        let all: Vec<Tensor> = it.collect();
        assert_eq!(&all[0], ai.lower());
        assert_eq!(all.last().unwrap(), ai.upper());
        assert!(matches!(
            ai.vertex_iter(100),
            Err(Error::BudgetExceeded { free_positions: 8, limit: 100 })
        ));
        let sel = VertexSelector::from_counter(8, &ai.free_positions(), 255);
        assert_eq!(&ai.vertex(&sel).unwrap(), ai.upper());
    }

    #[test]
    fn interval_z_examples() {
        let z = IntervalTensor::new(
            Tensor::constant_pattern(3, 2, 2.0, -0.5).unwrap(),
            Tensor::constant_pattern(3, 2, 3.0, -0.1).unwrap(),
        )
        .unwrap();
        assert!(z.is_interval_z());
        assert!(!ex4().is_interval_z());
        assert!(IntervalTensor::degenerate(Tensor::constant_pattern(3, 2, 5.0, -1.0).unwrap()).is_interval_z());
    }

    #[test]
    fn symmetric_and_circulant() {
        assert!(ex4().is_symmetric());
        assert!(ex4().is_circulant());
        assert!(!ex31().is_circulant());
    }
}
