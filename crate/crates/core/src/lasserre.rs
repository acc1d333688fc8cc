//! Level-1 Lasserre slack matrices for the product moment vector on `K_n`.
//!
//! The vertex-indexed slack matrix of the demand row has the closed form
//! `Z[I, J] = p^u (S_{n-u} + C_{n,u})` with `u = |I ∪ J|`, where
//! `S_k = binom(k, 2)(2p - p^2) - t` is the expected demand slack on `k`
//! untouched vertices and `C_{n,a}` counts edges covered by `a` chosen
//! vertices. An exhaustive summation over all vertex subsets reproduces it
//! and extends to every row of the relaxation and to the full index set
//! `{∅} ∪ V ∪ E`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::{exact_strings, fingerprint, Certificate, Parameters, Verdict};
use crate::error::{Error, Result};
use crate::exact_linalg::rational::binomial;
use crate::exact_linalg::{psd_check, schur_complement, PsdVerdict, Rational, SymMatrix};
use crate::hierarchy::{canonical_p, homogenized_rows, HomogenizedRow};
use crate::instances::{make_clique, Graph};
use crate::moments::{DistParams, MomentVector};

/// Largest vertex count for the exhaustive subset summations.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 20;

/// `binom(a, 2) + a (n - a)`.
pub fn covered_edges(n: u64, a: u64) -> Result<u64> {
    if a > n {
        return Err(Error::Precondition(format!("a = {a} exceeds n = {n}")));
    }
    Ok(a * a.saturating_sub(1) / 2 + a * (n - a))
}

/// `binom(n, 2)(2p - p^2) - t`.
pub fn expected_slack(n: u64, t: u64, p: &Rational) -> Rational {
    slack_with_demand(n, &Rational::from_integer(t.into()), p)
}

fn slack_with_demand(n: u64, demand: &Rational, p: &Rational) -> Rational {
    let edge = p * Rational::from_integer(2.into()) - p * p;
    Rational::from_integer(binomial(n, 2)) * edge - demand
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LasserreSlack {
    pub n: u64,
    /// Demand `t`; integral except through [`build_zbar_with_demand`].
    pub t: Rational,
    pub p: Rational,
    /// Indexed by `∅` then vertices `1..=n`.
    pub zbar: SymMatrix,
    /// `k -> S_k` for `k = n - 2 ..= n`.
    pub s_values: BTreeMap<u64, Rational>,
    /// `a -> C_{n,a}` for `a = 0..=2`.
    pub c_values: BTreeMap<u64, u64>,
}

impl LasserreSlack {
    pub fn s(&self, k: u64) -> &Rational {
        &self.s_values[&k]
    }

    pub fn c(&self, a: u64) -> u64 {
        self.c_values[&a]
    }
}

/// Vertex-indexed demand slack matrix from the closed form.
pub fn build_zbar(n: u64, t: u64, p: &Rational) -> Result<LasserreSlack> {
    build_zbar_with_demand(n, &Rational::from_integer(t.into()), p)
}

/// [`build_zbar`] for a rational demand, used to follow `p = t / binom(m, 2)`
/// at points where that `t` is not an integer.
pub fn build_zbar_with_demand(n: u64, t: &Rational, p: &Rational) -> Result<LasserreSlack> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let s_values: BTreeMap<u64, Rational> = (n - 2..=n)
        .map(|k| (k, slack_with_demand(k, t, p)))
        .collect();
    let c_values: BTreeMap<u64, u64> = (0..=2)
        .map(|a| Ok((a, covered_edges(n, a)?)))
        .collect::<Result<_>>()?;
    let by_union: Vec<Rational> = (0..=2u64)
        .map(|u| {
            let pu = (0..u).fold(Rational::one(), |acc, _| acc * p);
            pu * (&s_values[&(n - u)] + Rational::from_integer(c_values[&u].into()))
        })
        .collect();
    let zbar = SymMatrix::from_fn(n as usize + 1, |i, j| {
        let u = match (i, j) {
            (0, 0) => 0,
            (0, _) => 1,
            _ if i == j => 1,
            _ => 2,
        };
        by_union[u].clone()
    });
    Ok(LasserreSlack {
        n,
        t: t.clone(),
        p: p.clone(),
        zbar,
        s_values,
        c_values,
    })
}

/// Integer powers and denominator of `p` for exact accumulation by subset size.
struct Powers {
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    den: BigInt,
}

impl Powers {
    fn new(p: &Rational, n: usize) -> Self {
        let den = p.denom().clone();
        let qn = &den - p.numer();
        let pow = |b: &BigInt| {
            std::iter::successors(Some(BigInt::one()), |x| Some(x * b))
                .take(n + 1)
                .collect()
        };
        Powers {
            p: pow(p.numer()),
            q: pow(&qn),
            den: num_traits::pow(den, n),
        }
    }

    /// `sum_k acc[k] p^k (1-p)^{n-k}`.
    fn weigh(&self, acc: &[i64]) -> Rational {
        let n = acc.len() - 1;
        let num: BigInt = acc
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| BigInt::from(c) * &self.p[k] * &self.q[n - k])
            .sum();
        Rational::new(num, self.den.clone())
    }
}

/// [`build_zbar`]'s matrix by summing `Pr[A] (covered(A) - t) 1[I ∪ J ⊆ A]`
/// over all `2^n` vertex subsets `A` of `K_n`.
pub fn build_zbar_exhaustive(n: u64, t: u64, p: &Rational) -> Result<SymMatrix> {
    let nv = n as usize;
    if nv > EXHAUSTIVE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "exhaustive subset summation",
            size: nv,
            cap: EXHAUSTIVE_MAX_VERTICES,
        });
    }
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let g = make_clique(n as u32)?;
    let higher = higher_neighbors(&g);
    let dim = nv + 1;
    // acc[(i, j)][k]: summed slack over subsets of size k containing the row and column sets.
    let mut acc = vec![vec![0i64; nv + 1]; dim * dim];
    let t = t as i64;
    for a in 0u32..(1 << nv) {
        let k = a.count_ones() as usize;
        let slack = covered_count(&higher, a) as i64 - t;
        acc[0][k] += slack;
        for i in (0..nv).filter(|i| a >> i & 1 == 1) {
            acc[1 + i][k] += slack;
            for j in (i + 1..nv).filter(|j| a >> j & 1 == 1) {
                acc[(1 + i) * dim + 1 + j][k] += slack;
            }
        }
    }
    let pw = Powers::new(p, nv);
    Ok(SymMatrix::from_fn(dim, |i, j| {
        let key = if i == j {
            if i == 0 {
                0
            } else {
                i
            }
        } else if i == 0 {
            j
        } else {
            i * dim + j
        };
        pw.weigh(&acc[key])
    }))
}

fn higher_neighbors(g: &Graph) -> Vec<u32> {
    let mut higher = vec![0u32; g.num_vertices()];
    for &(i, j) in g.edges() {
        higher[(i - 1) as usize] |= 1 << (j - 1);
    }
    higher
}

fn covered_count(higher: &[u32], a: u32) -> u32 {
    higher
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            if a >> i & 1 == 1 {
                h.count_ones()
            } else {
                (h & a).count_ones()
            }
        })
        .sum()
}

/// Eigenvalue of the all-ones direction in the Schur complement of `Z` at
/// its `∅` entry. Rows of the complement have equal sums, so the all-ones
/// vector is an eigenvector.
pub fn allones_eigenvalue_after_schur(ls: &LasserreSlack) -> Result<Rational> {
    let n = ls.n;
    let sn = ls.s(n);
    if !sn.is_positive() {
        return Err(Error::InvalidPivot {
            index: 0,
            value: sn.to_string(),
        });
    }
    let p = &ls.p;
    let first = p * (ls.s(n - 1) + Rational::from_integer(ls.c(1).into()));
    let second = p * p * (ls.s(n - 2) + Rational::from_integer(ls.c(2).into()));
    let nr = Rational::from_integer(n.into());
    let value = &first + (&nr - Rational::one()) * second - nr * &first * &first / sn;
    if n <= 64 {
        let schur = schur_complement(&ls.zbar, 0)?;
        for i in 0..schur.dim() {
            assert_eq!(schur.row_sum(i), value, "row {i} of the Schur complement");
        }
    }
    Ok(value)
}

/// Level-1 slack matrix of `row` over `{∅} ∪ V ∪ E`:
/// entry `(A, B) = sum_q a_q y_{A ∪ B ∪ {q}} - b y_{A ∪ B}`.
pub fn slack_matrix(mv: &MomentVector, row: &HomogenizedRow) -> Result<SymMatrix> {
    let dim = 1 + mv.num_vars();
    let rows: Vec<Vec<Rational>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            (i..dim)
                .map(|j| {
                    let base = index_set(&[i, j]);
                    let mut value = -(&row.rhs * mv.moment_ids(&base)?);
                    for (q, a) in &row.terms {
                        let mut s = base.clone();
                        if let Err(pos) = s.binary_search(q) {
                            s.insert(pos, *q);
                        }
                        value += a * mv.moment_ids(&s)?;
                    }
                    Ok(value)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(SymMatrix::from_fn(dim, |i, j| rows[i][j - i].clone()))
}

/// Variable ids named by matrix indices, where index 0 is `∅`.
fn index_set(indices: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = indices.iter().filter(|&&k| k > 0).map(|&k| k - 1).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// [`slack_matrix`] by summing `Pr[A] slack(x(A)) x(A) x(A)^T` over all
/// vertex subsets `A`, where `x(A)` is the induced 0-1 point.
pub fn slack_matrix_exhaustive(g: &Graph, p: &Rational, row: &HomogenizedRow) -> Result<SymMatrix> {
    let nv = g.num_vertices();
    if nv > EXHAUSTIVE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "exhaustive subset summation",
            size: nv,
            cap: EXHAUSTIVE_MAX_VERTICES,
        });
    }
    let integer = |x: &Rational| -> Result<i64> {
        x.is_integer()
            .then(|| x.to_integer().to_i64())
            .flatten()
            .ok_or_else(|| {
                Error::Precondition(format!("row {} has a non-integer coefficient", row.name))
            })
    };
    let terms: Vec<(usize, i64)> = row
        .terms
        .iter()
        .map(|(q, a)| Ok((*q, integer(a)?)))
        .collect::<Result<_>>()?;
    let rhs = integer(&row.rhs)?;
    let dim = 1 + g.num_vars();
    let edge_masks: Vec<u32> = g
        .edges()
        .iter()
        .map(|&(i, j)| 1 << (i - 1) | 1 << (j - 1))
        .collect();
    let mut acc = vec![vec![0i64; nv + 1]; dim * (dim + 1) / 2];
    let mut x = vec![false; dim];
    for a in 0u32..(1 << nv) {
        x[0] = true;
        for v in 0..nv {
            x[1 + v] = a >> v & 1 == 1;
        }
        for (e, m) in edge_masks.iter().enumerate() {
            x[1 + nv + e] = a & m != 0;
        }
        let slack: i64 = terms
            .iter()
            .filter(|(q, _)| x[1 + q])
            .map(|(_, c)| c)
            .sum::<i64>()
            - rhs;
        if slack == 0 {
            continue;
        }
        let k = a.count_ones() as usize;
        let on: Vec<usize> = (0..dim).filter(|&i| x[i]).collect();
        for (s, &i) in on.iter().enumerate() {
            let base = i * dim - i * (i + 1) / 2;
            for &j in &on[s..] {
                acc[base + j][k] += slack;
            }
        }
    }
    let pw = Powers::new(p, nv);
    Ok(SymMatrix::from_fn(dim, |i, j| {
        pw.weigh(&acc[i * dim - i * (i + 1) / 2 + j])
    }))
}

/// Outcome of the level-1 Lasserre test of the product moment vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LasserreReport {
    pub n: u64,
    pub r: Option<u64>,
    pub t: u64,
    pub p: Rational,
    /// PSD verdict of the vertex-indexed demand slack matrix.
    pub zbar: PsdVerdict,
    /// `None` when `S_n <= 0`.
    pub allones_eigenvalue: Option<Rational>,
    /// PSD verdict of the demand slack matrix over `{∅} ∪ V ∪ E`.
    pub full_demand: PsdVerdict,
}

impl LasserreReport {
    /// Either demand slack matrix has a certified negative direction.
    pub fn refuted(&self) -> bool {
        !self.zbar.is_psd() || !self.full_demand.is_psd()
    }

    pub fn to_certificate(&self) -> Certificate {
        let verdict = if self.refuted() {
            Verdict::Refuted
        } else {
            Verdict::NotRefuted
        };
        let params = Parameters {
            n: Some(self.n),
            r: self.r,
            t: Some(self.t),
            p: Some((&self.p).into()),
        };
        let mut cert = Certificate::new("lasserre1-refutation", params, verdict);
        cert.set_value(
            "demand_slack_at_empty",
            &expected_slack(self.n, self.t, &self.p),
        );
        if let Some(ev) = &self.allones_eigenvalue {
            cert.set_value("allones_schur_eigenvalue", ev);
        }
        let describe = |v: &PsdVerdict| match v {
            PsdVerdict::Psd { .. } => json!({ "psd": true }),
            PsdVerdict::NotPsd { witness, value } => json!({
                "psd": false,
                "witness": exact_strings(witness),
                "quadratic_form": crate::exact_linalg::rational::to_fraction_string(value),
            }),
        };
        if let Some((_, v)) = self.zbar.witness() {
            cert.set_value("zbar_witness_value", v);
        }
        if let Some((_, v)) = self.full_demand.witness() {
            cert.set_value("full_demand_witness_value", v);
        }
        cert.witness = Some(json!({
            "zbar": describe(&self.zbar),
            "full_demand": describe(&self.full_demand),
        }));
        cert.enumeration_fingerprint = fingerprint([
            "lasserre1".to_string(),
            format!("zbar:index=empty,vertices:dim={}", self.n + 1),
            format!(
                "full:index=empty,vertices,edges:dim={}",
                1 + self.n + self.n * (self.n - 1) / 2
            ),
        ]);
        cert
    }
}

/// Runs both demand slack tests on `K_n` for an arbitrary `p`.
pub fn lasserre1_check(n: u64, t: u64, p: &Rational) -> Result<LasserreReport> {
    let ls = build_zbar(n, t, p)?;
    let zbar = psd_check(&ls.zbar);
    let allones_eigenvalue = if ls.s(n).is_positive() {
        Some(allones_eigenvalue_after_schur(&ls)?)
    } else {
        None
    };
    let g = make_clique(u32::try_from(n).map_err(|_| Error::TooLarge {
        what: "clique",
        size: usize::MAX,
        cap: u32::MAX as usize,
    })?)?;
    let rows = homogenized_rows(&g, t)?;
    let demand = rows
        .iter()
        .find(|r| r.name == "demand")
        .expect("demand row");
    let mv = MomentVector::new(DistParams::new(g.clone(), p.clone())?);
    let full_demand = psd_check(&slack_matrix(&mv, demand)?);
    Ok(LasserreReport {
        n,
        r: None,
        t,
        p: p.clone(),
        zbar,
        allones_eigenvalue,
        full_demand,
    })
}

/// The level-1 test at `p = t / binom(n - 2r, 2)`, requiring `n >= 2r + 2t + 2`.
pub fn lasserre1_refutes(n: u64, r: u64, t: u64) -> Result<LasserreReport> {
    if n < 2 * r + 2 * t + 2 {
        return Err(Error::Precondition(format!(
            "n = {n} is below 2r + 2t + 2 = {}",
            2 * r + 2 * t + 2
        )));
    }
    let p = canonical_p(n as u32, r as u32, t)?;
    let mut report = lasserre1_check(n, t, &p)?;
    report.r = Some(r);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rational::{int, rat};

    #[test]
    fn covered_edge_counts() {
        assert_eq!(covered_edges(5, 2).unwrap(), 7);
        assert_eq!(covered_edges(9, 0).unwrap(), 0);
        assert_eq!(covered_edges(9, 1).unwrap(), 8);
        assert_eq!(covered_edges(9, 9).unwrap(), 36);
        assert!(covered_edges(3, 4).is_err());
    }

    #[test]
    fn expected_slack_values() {
        assert_eq!(expected_slack(2, 0, &int(1)), int(1));
        assert_eq!(expected_slack(10, 1, &rat(1, 28)), rat(1691, 784));
        assert_eq!(expected_slack(7, 3, &int(0)), int(-3));
    }

    #[test]
    fn zbar_entries() {
        let p = rat(1, 5);
        let ls = build_zbar(6, 2, &p).unwrap();
        let expected = &p * (ls.s(5) + int(5));
        assert_eq!(ls.zbar.get(0, 3), &expected);
        assert_eq!(ls.zbar.get(3, 3), &expected);
        assert_eq!(ls.zbar.get(0, 0), ls.s(6));
        assert!(build_zbar(1, 0, &p).is_err());
    }

    #[test]
    fn closed_form_matches_exhaustive_small() {
        assert_eq!(
            build_zbar(4, 1, &rat(1, 2)).unwrap().zbar,
            build_zbar_exhaustive(4, 1, &rat(1, 2)).unwrap()
        );
        assert!(build_zbar_exhaustive(21, 1, &rat(1, 2)).is_err());
    }

    #[test]
    fn eigenvalue_rejects_nonpositive_pivot() {
        let ls = build_zbar(8, 1, &int(0)).unwrap();
        assert!(matches!(
            allones_eigenvalue_after_schur(&ls),
            Err(Error::InvalidPivot { .. })
        ));
    }

    #[test]
    fn integral_distribution_not_refuted() {
        let report = lasserre1_check(6, 1, &int(1)).unwrap();
        assert!(report.zbar.is_psd());
        assert!(report.full_demand.is_psd());
        assert!(!report.refuted());
    }

    #[test]
    fn moment_slack_matches_exhaustive() {
        let g = make_clique(5).unwrap();
        let p = rat(2, 9);
        let mv = MomentVector::new(DistParams::new(g.clone(), p.clone()).unwrap());
        for row in homogenized_rows(&g, 3).unwrap().iter().take(13) {
            assert_eq!(
                slack_matrix(&mv, row).unwrap(),
                slack_matrix_exhaustive(&g, &p, row).unwrap(),
                "{}",
                row.name
            );
        }
    }

    #[test]
    fn full_demand_restricts_to_zbar() {
        let (n, t, p) = (7u64, 1u64, rat(1, 10));
        let g = make_clique(n as u32).unwrap();
        let mv = MomentVector::new(DistParams::new(g.clone(), p.clone()).unwrap());
        let rows = homogenized_rows(&g, t).unwrap();
        let demand = rows.iter().find(|r| r.name == "demand").unwrap();
        let full = slack_matrix(&mv, demand).unwrap();
        let idx: Vec<usize> = (0..=n as usize).collect();
        assert_eq!(
            full.principal_submatrix(&idx),
            build_zbar(n, t, &p).unwrap().zbar
        );
    }

    #[test]
    fn precondition_enforced() {
        assert!(matches!(
            lasserre1_refutes(7, 2, 1),
            Err(Error::Precondition(_))
        ));
    }
}
