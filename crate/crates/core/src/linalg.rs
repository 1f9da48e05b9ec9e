//! Row echelon forms over `F_p`.
//!
//! Rows are sparse; pivots are taken at the first nonzero column, so when
//! columns are numbered in graded word order the pivot is the graded-first
//! word in the support.

use std::collections::BTreeMap;

use crate::ring::{CoeffRing, ModRing};

#[derive(Debug, Clone)]
pub struct Echelon {
    field: ModRing,
    pivots: BTreeMap<usize, BTreeMap<usize, u64>>,
}

impl Echelon {
    /// `field` must be a prime field.
    pub fn new(field: ModRing) -> Self {
        assert_eq!(field.k(), 1, "echelon forms need a prime field");
        Echelon {
            field,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the current basis; keep it if independent.
    /// Entries are arbitrary integers, reduced mod p.
    pub fn insert<I>(&mut self, entries: I) -> bool
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let f = self.field;
        let mut row: BTreeMap<usize, u64> = BTreeMap::new();
        for (c, v) in entries {
            let v = f.from_i64(v);
            let e = row.entry(c).or_insert(0);
            *e = f.add(e, &v);
        }
        row.retain(|_, v| *v != 0);
        while let Some((&col, &lead)) = row.iter().next() {
            match self.pivots.get(&col) {
                Some(prow) => {
                    let factor = f.neg(&lead);
                    for (&c, v) in prow {
                        let e = row.entry(c).or_insert(0);
                        *e = f.add(e, &f.mul(&factor, v));
                        if *e == 0 {
                            row.remove(&c);
                        }
                    }
                }
                None => {
                    let inv = f.inv(&lead).expect("nonzero element of a field");
                    for v in row.values_mut() {
                        *v = f.mul(v, &inv);
                    }
                    self.pivots.insert(col, row);
                    return true;
                }
            }
        }
        false
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }
}

/// Rank over `F_p` of a dense integer matrix.
pub fn rank_mod_p(field: ModRing, rows: &[Vec<i64>]) -> usize {
    let mut ech = Echelon::new(field);
    for r in rows {
        ech.insert(r.iter().copied().enumerate());
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        let f3 = ModRing::field(3).unwrap();
        assert_eq!(rank_mod_p(f3, &[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_mod_p(f3, &[vec![1, 2], vec![0, 3]]), 1);
        let f5 = ModRing::field(5).unwrap();
        assert_eq!(rank_mod_p(f5, &[vec![1, 2], vec![0, 3]]), 2);
        assert_eq!(rank_mod_p(f5, &[]), 0);
        assert_eq!(rank_mod_p(f5, &[vec![0, 0, 0]]), 0);
        let id: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect();
        assert_eq!(rank_mod_p(f5, &id), 4);
    }

    #[test]
    fn pivots_take_first_column() {
        let mut e = Echelon::new(ModRing::field(7).unwrap());
        assert!(e.insert([(3, 2), (1, 5)]));
        assert!(!e.insert([(3, 4), (1, 10)]));
        assert!(e.insert([(3, 1)]));
        assert_eq!(e.pivot_columns().collect::<Vec<_>>(), vec![1, 3]);
    }
}
