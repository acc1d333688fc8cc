//! Deterministic enumeration of disjoint `(Y, N)` pairs.
//!
//! Pairs are ordered by `|Y ∪ N|`, then by the lexicographic order of the
//! sorted id list `Y ∪ N`, then by the bitmask selecting which elements go to
//! `Y` (bit `b` set puts the `b`-th smallest element in `Y`). The enumerator
//! can rank and unrank, so sampled and parallel runs agree with the
//! sequential order.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub y: Vec<usize>,
    pub n: Vec<usize>,
}

impl Pair {
    pub fn empty() -> Self {
        Pair {
            y: Vec::new(),
            n: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairEnumerator {
    universe: usize,
    max_size: usize,
    /// `binom[a][b]` for `a <= universe`, `b <= max_size`.
    binom: Vec<Vec<u64>>,
    /// Number of pairs with `|Y ∪ N| < s`, for `s = 0..=max_size + 1`.
    offsets: Vec<u64>,
}

impl PairEnumerator {
    /// Pairs over ids `0..universe` with `|Y ∪ N| <= max_size`.
    pub fn new(universe: usize, max_size: usize) -> Result<Self> {
        let max_size = max_size.min(universe);
        if max_size >= 63 {
            return Err(Error::TooLarge {
                what: "pair size",
                size: max_size,
                cap: 62,
            });
        }
        let overflow = || Error::TooLarge {
            what: "pair count",
            size: universe,
            cap: u64::MAX as usize,
        };
        let mut binom = vec![vec![0u64; max_size + 1]; universe + 1];
        for a in 0..=universe {
            binom[a][0] = 1;
            for b in 1..=max_size.min(a) {
                binom[a][b] = binom[a - 1][b - 1]
                    .checked_add(binom[a - 1][b])
                    .ok_or_else(overflow)?;
            }
        }
        let mut offsets = vec![0u64];
        for s in 0..=max_size {
            let block = binom[universe][s]
                .checked_mul(1u64 << s)
                .ok_or_else(overflow)?;
            let next = offsets[s].checked_add(block).ok_or_else(overflow)?;
            offsets.push(next);
        }
        Ok(Self {
            universe,
            max_size,
            binom,
            offsets,
        })
    }

    pub fn count(&self) -> u64 {
        self.offsets[self.max_size + 1]
    }

    pub fn nth(&self, index: u64) -> Option<Pair> {
        if index >= self.count() {
            return None;
        }
        let s = (0..=self.max_size).find(|&s| index < self.offsets[s + 1])?;
        let rem = index - self.offsets[s];
        let mask = rem & ((1u64 << s) - 1);
        let combo = self.unrank_combination(rem >> s, s);
        let mut pair = Pair::empty();
        for (b, id) in combo.into_iter().enumerate() {
            if mask >> b & 1 == 1 {
                pair.y.push(id);
            } else {
                pair.n.push(id);
            }
        }
        Some(pair)
    }

    /// Position of a pair in the enumeration order.
    pub fn rank(&self, pair: &Pair) -> Option<u64> {
        let mut all: Vec<usize> = pair.y.iter().chain(&pair.n).copied().collect();
        all.sort_unstable();
        let s = all.len();
        if s > self.max_size
            || all.windows(2).any(|w| w[0] == w[1])
            || all.last().is_some_and(|&x| x >= self.universe)
        {
            return None;
        }
        let mask = all
            .iter()
            .enumerate()
            .filter(|(_, id)| pair.y.contains(id))
            .fold(0u64, |acc, (b, _)| acc | 1 << b);
        Some(self.offsets[s] + (self.rank_combination(&all) << s) + mask)
    }

    fn unrank_combination(&self, mut rank: u64, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        let mut next = 0;
        for slot in 0..k {
            let left = k - slot - 1;
            loop {
                let block = self.binom[self.universe - next - 1][left];
                if rank < block {
                    break;
                }
                rank -= block;
                next += 1;
            }
            out.push(next);
            next += 1;
        }
        out
    }

    fn rank_combination(&self, combo: &[usize]) -> u64 {
        let k = combo.len();
        let mut rank = 0;
        let mut next = 0;
        for (slot, &c) in combo.iter().enumerate() {
            let left = k - slot - 1;
            for skipped in next..c {
                rank += self.binom[self.universe - skipped - 1][left];
            }
            next = c + 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(universe: usize, max_size: usize) -> Vec<Pair> {
        let mut out = Vec::new();
        for s in 0..=max_size.min(universe) {
            let mut combos: Vec<Vec<usize>> = (0u32..1 << universe)
                .filter(|m| m.count_ones() as usize == s)
                .map(|m| (0..universe).filter(|b| m >> b & 1 == 1).collect())
                .collect();
            combos.sort();
            for c in combos {
                for mask in 0u32..1 << s {
                    let mut p = Pair::empty();
                    for (b, &id) in c.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            p.y.push(id)
                        } else {
                            p.n.push(id)
                        }
                    }
                    out.push(p);
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_order() {
        for universe in 0..7 {
            for max_size in 0..4 {
                let e = PairEnumerator::new(universe, max_size).unwrap();
                let expected = naive(universe, max_size);
                assert_eq!(e.count(), expected.len() as u64);
                for (i, p) in expected.iter().enumerate() {
                    assert_eq!(e.nth(i as u64).as_ref(), Some(p));
                    assert_eq!(e.rank(p), Some(i as u64));
                }
                assert_eq!(e.nth(e.count()), None);
            }
        }
    }

    #[test]
    fn counts_clique_pairs() {
        // K_10 has 55 variables; |Y ∪ N| <= 1 gives 1 + 2 * 55 pairs.
        assert_eq!(PairEnumerator::new(55, 1).unwrap().count(), 111);
        let e = PairEnumerator::new(105, 2).unwrap();
        assert_eq!(e.count(), 1 + 2 * 105 + 4 * 5460);
    }

    #[test]
    fn rank_rejects_foreign_pairs() {
        let e = PairEnumerator::new(4, 2).unwrap();
        assert_eq!(
            e.rank(&Pair {
                y: vec![1],
                n: vec![1]
            }),
            None
        );
        assert_eq!(
            e.rank(&Pair {
                y: vec![0, 1, 2],
                n: vec![]
            }),
            None
        );
        assert_eq!(
            e.rank(&Pair {
                y: vec![7],
                n: vec![]
            }),
            None
        );
    }
}
