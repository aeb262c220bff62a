//! Exact sparse row reduction over the rationals, keyed by an arbitrary
//! ordered column type.
//!
//! Rows are inserted one at a time; each is reduced against the pivots seen
//! so far, so the structure answers rank and span-membership queries online.

use crate::coeff::Rational;
use num::traits::Zero;
use std::collections::BTreeMap;

/// A growing row space over `Q` with columns indexed by `K`.
///
/// Every stored row is normalized so that its greatest key (its pivot)
/// carries coefficient 1, which guarantees the elimination loop strictly
/// decreases the working row's greatest key and terminates.
#[derive(Debug, Clone, Default)]
pub struct RowSpace<K: Ord + Clone> {
    pivots: BTreeMap<K, BTreeMap<K, Rational>>,
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        RowSpace { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the stored pivots; the residual has no pivot key
    /// as its maximum.
    fn reduce(&self, row: impl IntoIterator<Item = (K, Rational)>) -> BTreeMap<K, Rational> {
        let mut work: BTreeMap<K, Rational> = BTreeMap::new();
        for (k, c) in row {
            if c.is_zero() {
                continue;
            }
            let entry = work.entry(k.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                work.remove(&k);
            }
        }
        loop {
            let Some((lead, coeff)) = work.last_key_value() else {
                return work;
            };
            let Some(pivot_row) = self.pivots.get(lead) else {
                return work;
            };
            let factor = coeff.clone();
            let lead = lead.clone();
            work.remove(&lead);
            for (k, c) in pivot_row {
                if *k == lead {
                    continue;
                }
                let entry = work.entry(k.clone()).or_insert_with(Rational::zero);
                *entry -= &factor * c;
                if entry.is_zero() {
                    work.remove(k);
                }
            }
        }
    }

    /// Insert a row; returns true when it was independent of the span so far.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (K, Rational)>) -> bool {
        let mut residual = self.reduce(row);
        let Some((lead, coeff)) = residual.last_key_value() else {
            return false;
        };
        let lead = lead.clone();
        let inv = Rational::from_integer(1.into()) / coeff;
        for c in residual.values_mut() {
            *c *= &inv;
        }
        self.pivots.insert(lead, residual);
        true
    }

    /// True when `row` already lies in the span.
    pub fn contains(&self, row: impl IntoIterator<Item = (K, Rational)>) -> bool {
        self.reduce(row).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    fn row(entries: &[(u32, i64)]) -> Vec<(u32, Rational)> {
        entries.iter().map(|&(k, c)| (k, rat_int(c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut space = RowSpace::new();
        assert!(space.insert(row(&[(0, 1), (1, 2)])));
        assert!(space.insert(row(&[(1, 1), (2, 3)])));
        // Dependent: 1*(first) + 2*(second)
        assert!(!space.insert(row(&[(0, 1), (1, 4), (2, 6)])));
        assert_eq!(space.rank(), 2);
        assert!(space.contains(row(&[(0, 2), (1, 4)])));
        assert!(!space.contains(row(&[(0, 1)])));
        assert!(space.contains(row(&[])));
    }

    #[test]
    fn cancellation_inside_input_rows() {
        let mut space = RowSpace::new();
        assert!(!space.insert(row(&[(5, 3), (5, -3)])));
        assert_eq!(space.rank(), 0);
    }
}
