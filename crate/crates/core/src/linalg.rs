//! Linear algebra over Z2 for vectors packed into `u128` (bit `i` = coordinate `i`).

fn top_bit(v: u128) -> u32 {
    debug_assert!(v != 0);
    127 - v.leading_zeros()
}

/// A basis in reduced echelon form. Each row has a distinct leading bit and
/// that bit is clear in every other row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EchelonBasis {
    // Sorted by leading bit, descending.
    rows: Vec<u128>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn reduce(&self, mut v: u128) -> u128 {
        for &row in &self.rows {
            if v >> top_bit(row) & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: u128) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = top_bit(v);
        for row in self.rows.iter_mut() {
            if *row >> pivot & 1 == 1 {
                *row ^= v;
            }
        }
        let at = self.rows.partition_point(|&r| top_bit(r) > pivot);
        self.rows.insert(at, v);
        true
    }

    /// Rows whose leading bit is below `k`. They span exactly the vectors of
    /// the space supported on coordinates `0..k`.
    pub fn rows_below(&self, k: u32) -> impl Iterator<Item = u128> + '_ {
        self.rows.iter().copied().filter(move |&r| top_bit(r) < k)
    }

    /// Every vector in the span, starting with zero (Gray-code order).
    pub fn span(&self) -> SpanIter<'_> {
        SpanIter {
            rows: &self.rows,
            counter: 0,
            current: 0,
            total: 1u128.checked_shl(self.rows.len() as u32),
        }
    }

    pub fn is_subspace_of(&self, other: &EchelonBasis) -> bool {
        self.rows.iter().all(|&r| other.contains(r))
    }

    /// Basis of `{x : x · row = 0 for every row}` inside `Z2^n`.
    pub fn null_space(&self, n: u32) -> EchelonBasis {
        let pivots: u128 = self.rows.iter().fold(0, |acc, &r| acc | 1u128 << top_bit(r));
        let mut out = EchelonBasis::new();
        for f in (0..n).filter(|&f| pivots >> f & 1 == 0) {
            let mut x = 1u128 << f;
            for &row in &self.rows {
                if row >> f & 1 == 1 {
                    x |= 1u128 << top_bit(row);
                }
            }
            out.insert(x);
        }
        out
    }

    /// The subspace of vectors in this span whose support lies inside `mask`.
    pub fn restricted_to(&self, mask: u128) -> EchelonBasis {
        // Eliminate on the part outside `mask`; combinations that cancel it
        // completely lie in the intersection.
        let mut pivots: Vec<(u128, u128)> = Vec::new();
        let mut out = EchelonBasis::new();
        for &v in &self.rows {
            let mut key = v & !mask;
            let mut full = v;
            for &(pk, pf) in &pivots {
                if key >> top_bit(pk) & 1 == 1 {
                    key ^= pk;
                    full ^= pf;
                }
            }
            if key == 0 {
                out.insert(full);
            } else {
                let p = top_bit(key);
                let at = pivots.partition_point(|&(k, _)| top_bit(k) > p);
                pivots.insert(at, (key, full));
            }
        }
        out
    }
}

impl FromIterator<u128> for EchelonBasis {
    fn from_iter<I: IntoIterator<Item = u128>>(iter: I) -> Self {
        let mut b = EchelonBasis::new();
        for v in iter {
            b.insert(v);
        }
        b
    }
}

pub struct SpanIter<'a> {
    rows: &'a [u128],
    counter: u128,
    current: u128,
    // None when the span has 2^128 elements.
    total: Option<u128>,
}

impl Iterator for SpanIter<'_> {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.total.is_some_and(|t| self.counter >= t) {
            return None;
        }
        if self.counter > 0 {
            self.current ^= self.rows[self.counter.trailing_zeros() as usize];
        }
        self.counter += 1;
        Some(self.current)
    }
}

pub fn dot(a: u128, b: u128) -> bool {
    (a & b).count_ones() & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_span(vs: &[u128]) -> BTreeSet<u128> {
        let mut set = BTreeSet::new();
        for mask in 0..(1u32 << vs.len()) {
            let mut acc = 0;
            for (i, v) in vs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc ^= v;
                }
            }
            set.insert(acc);
        }
        set
    }

    #[test]
    fn rank_and_membership() {
        let b: EchelonBasis = [0b110, 0b011, 0b101].into_iter().collect();
        assert_eq!(b.rank(), 2);
        assert!(b.contains(0));
        assert!(b.contains(0b101));
        assert!(!b.contains(0b001));
    }

    #[test]
    fn null_space_of_rank_one() {
        let b: EchelonBasis = [0b1111].into_iter().collect();
        let ns = b.null_space(4);
        assert_eq!(ns.rank(), 3);
        for v in ns.span() {
            assert!(!dot(v, 0b1111));
        }
    }

    #[test]
    fn span_of_empty_basis_is_zero() {
        assert_eq!(EchelonBasis::new().span().collect::<Vec<_>>(), vec![0]);
    }

    proptest! {
        #[test]
        fn span_matches_brute_force(vs in proptest::collection::vec(0u128..1 << 10, 0..7)) {
            let b: EchelonBasis = vs.iter().copied().collect();
            let got: BTreeSet<u128> = b.span().collect();
            prop_assert_eq!(got.len(), 1 << b.rank());
            prop_assert_eq!(got, brute_span(&vs));
        }

        #[test]
        fn null_space_is_orthogonal_complement(vs in proptest::collection::vec(0u128..1 << 9, 0..6)) {
            let b: EchelonBasis = vs.iter().copied().collect();
            let ns = b.null_space(9);
            prop_assert_eq!(ns.rank() + b.rank(), 9);
            let expected: BTreeSet<u128> = (0..1u128 << 9)
                .filter(|&x| vs.iter().all(|&v| !dot(x, v)))
                .collect();
            prop_assert_eq!(ns.span().collect::<BTreeSet<_>>(), expected);
        }

        #[test]
        fn restriction_matches_filter(vs in proptest::collection::vec(0u128..1 << 9, 0..7), mask in 0u128..1 << 9) {
            let b: EchelonBasis = vs.iter().copied().collect();
            let expected: BTreeSet<u128> = brute_span(&vs).into_iter().filter(|v| v & !mask == 0).collect();
            let got: BTreeSet<u128> = b.restricted_to(mask).span().collect();
            prop_assert_eq!(got, expected);
        }
    }
}
