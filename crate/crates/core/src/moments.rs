//! Moments of the product distribution `D_p` on a graph.
//!
//! Every vertex is chosen independently with probability `p`; an edge
//! variable is one exactly when an endpoint is chosen. A moment `y_A` is the
//! probability that every variable in `A` is one. Moments and the
//! conditional weights `w_{Y,N}` are computed by enumerating all 0-1
//! assignments of the vertices that the involved variables touch (the
//! support closure), so every value is an exact rational.

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_linalg::{Rational, SymMatrix};
use crate::instances::{Graph, VarSet};

/// Default limit on the number of vertices enumerated per event.
pub const DEFAULT_SUPPORT_CAP: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistParams {
    graph: Graph,
    p: Rational,
}

impl DistParams {
    pub fn new(graph: Graph, p: Rational) -> Result<Self> {
        if p.is_negative() || p > Rational::one() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        Ok(Self { graph, p })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }
}

/// Lazily evaluated, memoized moment vector `y` of `D_p`.
///
/// Safe to share between threads; the memo table is a sharded concurrent map
/// and every stored value is deterministic.
pub struct MomentVector {
    params: DistParams,
    support_cap: usize,
    /// Endpoint ids (0-based vertex ids) of each variable id; vertices map to themselves.
    endpoints: Vec<(usize, usize)>,
    p_pow: Vec<BigInt>,
    q_pow: Vec<BigInt>,
    den_pow: Vec<BigInt>,
    memo: DashMap<Vec<usize>, Rational>,
}

impl MomentVector {
    pub fn new(params: DistParams) -> Self {
        Self::with_support_cap(params, DEFAULT_SUPPORT_CAP)
    }

    pub fn with_support_cap(params: DistParams, support_cap: usize) -> Self {
        let g = params.graph();
        let n = g.num_vertices();
        let mut endpoints: Vec<(usize, usize)> = (0..n).map(|v| (v, v)).collect();
        endpoints.extend(
            g.edges()
                .iter()
                .map(|&(i, j)| ((i - 1) as usize, (j - 1) as usize)),
        );
        let p_num = params.p.numer().clone();
        let den = params.p.denom().clone();
        let q_num = &den - &p_num;
        let powers = |base: &BigInt| {
            let mut v = vec![BigInt::one()];
            for k in 1..=support_cap {
                let next = &v[k - 1] * base;
                v.push(next);
            }
            v
        };
        Self {
            p_pow: powers(&p_num),
            q_pow: powers(&q_num),
            den_pow: powers(&den),
            params,
            support_cap,
            endpoints,
            memo: DashMap::new(),
        }
    }

    pub fn params(&self) -> &DistParams {
        &self.params
    }

    pub fn graph(&self) -> &Graph {
        self.params.graph()
    }

    pub fn p(&self) -> &Rational {
        self.params.p()
    }

    pub fn num_vars(&self) -> usize {
        self.endpoints.len()
    }

    pub fn cached_moments(&self) -> usize {
        self.memo.len()
    }

    /// `y_A = Pr[every variable in A is one]`.
    pub fn moment(&self, a: &VarSet) -> Result<Rational> {
        let ids = self.graph().ids_of(a)?;
        self.moment_ids(&ids)
    }

    /// Moment of a sorted, duplicate-free id list.
    pub fn moment_ids(&self, ids: &[usize]) -> Result<Rational> {
        if ids.is_empty() {
            return Ok(Rational::one());
        }
        if let Some(v) = self.memo.get(ids) {
            return Ok(v.clone());
        }
        let v = self.event_probability(ids, &[])?;
        self.memo.insert(ids.to_vec(), v.clone());
        Ok(v)
    }

    /// `w_{Y,N}`: inclusion-exclusion over subsets of `N`, checked against
    /// the directly enumerated probability that all of `Y` is one and all of
    /// `N` is zero.
    pub fn cond_weight(&self, y: &VarSet, n: &VarSet) -> Result<Rational> {
        if !y.is_disjoint(n) {
            return Err(Error::NotDisjoint);
        }
        let y = self.graph().ids_of(y)?;
        let n = self.graph().ids_of(n)?;
        self.cond_weight_ids(&y, &n)
    }

    /// Id-level [`cond_weight`](Self::cond_weight). Overlapping `Y` and `N`
    /// give zero, which is what the inclusion-exclusion sum evaluates to.
    pub fn cond_weight_ids(&self, y: &[usize], n: &[usize]) -> Result<Rational> {
        if y.iter().any(|q| n.binary_search(q).is_ok()) {
            return Ok(Rational::zero());
        }
        let by_sum = self.inclusion_exclusion_ids(y, n)?;
        let direct = self.event_probability(y, n)?;
        assert_eq!(
            by_sum, direct,
            "inclusion-exclusion disagrees with direct enumeration for Y={y:?}, N={n:?}"
        );
        Ok(direct)
    }

    /// `sum_{T subset N} (-1)^{|T|} y_{Y u T}`.
    pub fn inclusion_exclusion_ids(&self, y: &[usize], n: &[usize]) -> Result<Rational> {
        let k = n.len();
        assert!(k < 32, "N too large for subset enumeration");
        let mut total = Rational::zero();
        let mut set = Vec::with_capacity(y.len() + k);
        for mask in 0u32..(1 << k) {
            set.clear();
            set.extend_from_slice(y);
            set.extend((0..k).filter(|b| mask >> b & 1 == 1).map(|b| n[b]));
            set.sort_unstable();
            set.dedup();
            let term = self.moment_ids(&set)?;
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total)
    }

    /// Directly enumerated `Pr[all of ones are 1, all of zeros are 0]`.
    pub fn event_probability(&self, ones: &[usize], zeros: &[usize]) -> Result<Rational> {
        let mut support: Vec<usize> = ones
            .iter()
            .chain(zeros)
            .flat_map(|&q| {
                let (a, b) = self.endpoints[q];
                [a, b]
            })
            .collect();
        support.sort_unstable();
        support.dedup();
        let u = support.len();
        if u > self.support_cap {
            return Err(Error::TooLarge {
                what: "support closure",
                size: u,
                cap: self.support_cap,
            });
        }
        let local = |q: usize| -> u64 {
            let (a, b) = self.endpoints[q];
            let pa = support.binary_search(&a).expect("in support");
            let pb = support.binary_search(&b).expect("in support");
            (1u64 << pa) | (1u64 << pb)
        };
        let one_masks: Vec<u64> = ones.iter().map(|&q| local(q)).collect();
        let zero_union = zeros.iter().fold(0u64, |acc, &q| acc | local(q));
        let free = ((1u64 << u) - 1) & !zero_union;

        let mut counts = vec![0u64; u + 1];
        let mut s = free;
        loop {
            if one_masks.iter().all(|m| m & s != 0) {
                counts[s.count_ones() as usize] += 1;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & free;
        }
        let mut num = BigInt::zero();
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                num += BigInt::from(c) * &self.p_pow[k] * &self.q_pow[u - k];
            }
        }
        Ok(Rational::new(num, self.den_pow[u].clone()))
    }
}

/// `X^{Y,N}` indexed by `P_1 = {∅} ∪ {{q}}`: entry `(A, B) = w_{Y ∪ A ∪ B, N}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondMomentMatrix {
    pub y: VarSet,
    pub n: VarSet,
    pub matrix: SymMatrix,
}

/// Builds `X^{Y,N}`; row/column 0 is `∅`, row `1 + id` is variable `id`.
pub fn build_cond_matrix(mv: &MomentVector, y: &VarSet, n: &VarSet) -> Result<CondMomentMatrix> {
    if !y.is_disjoint(n) {
        return Err(Error::NotDisjoint);
    }
    let y_ids = mv.graph().ids_of(y)?;
    let n_ids = mv.graph().ids_of(n)?;
    let matrix = cond_matrix_ids(mv, &y_ids, &n_ids)?;
    Ok(CondMomentMatrix {
        y: y.clone(),
        n: n.clone(),
        matrix,
    })
}

pub(crate) fn cond_matrix_ids(mv: &MomentVector, y: &[usize], n: &[usize]) -> Result<SymMatrix> {
    let dim = 1 + mv.num_vars();
    let rows: Vec<Vec<Rational>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            (i..dim)
                .map(|j| {
                    let mut set = y.to_vec();
                    set.extend([i, j].iter().filter(|&&k| k > 0).map(|&k| k - 1));
                    set.sort_unstable();
                    set.dedup();
                    mv.cond_weight_ids(&set, n)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(SymMatrix::from_fn(dim, |i, j| rows[i][j - i].clone()))
}
