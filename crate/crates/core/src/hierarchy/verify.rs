use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairs::{Pair, PairEnumerator};
use crate::certificate::fingerprint;
use crate::error::{Error, Result};
use crate::exact_linalg::rational::binomial;
use crate::exact_linalg::{psd_check, PsdVerdict, Rational, Sense};
use crate::instances::{
    brute_force_opt, build_pvc_lp, make_clique, Graph, VarSet, BRUTE_FORCE_MAX_VERTICES,
};
use crate::moments::{cond_matrix_ids, DistParams, MomentVector};

/// Clique instance `K_n` with demand `t`, lifted to level `r`, and the
/// probability of the product distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaParams {
    pub n: u32,
    pub r: u32,
    pub t: u64,
    pub p: Rational,
}

impl SaParams {
    /// `p` defaults to [`canonical_p`].
    pub fn new(n: u32, r: u32, t: u64, p: Option<Rational>) -> Result<Self> {
        let p = match p {
            Some(p) => p,
            None => canonical_p(n, r, t)?,
        };
        Ok(Self { n, r, t, p })
    }

    /// `n >= 2r + 2t + 2`, the regime where the product solution is known to survive.
    pub fn hypothesis_holds(&self) -> bool {
        self.n as u64 >= 2 * self.r as u64 + 2 * self.t + 2
    }

    pub fn graph(&self) -> Result<Graph> {
        make_clique(self.n)
    }

    pub fn moment_vector(&self) -> Result<MomentVector> {
        Ok(MomentVector::new(DistParams::new(
            self.graph()?,
            self.p.clone(),
        )?))
    }
}

/// `t / binom(n - 2r, 2)`.
pub fn canonical_p(n: u32, r: u32, t: u64) -> Result<Rational> {
    let rest = (n as u64)
        .checked_sub(2 * r as u64)
        .filter(|&k| k >= 2)
        .ok_or_else(|| {
            Error::Precondition(format!("n - 2r must be at least 2 (n = {n}, r = {r})"))
        })?;
    let p = Rational::new(t.into(), binomial(rest, 2));
    if p > Rational::from_integer(1.into()) {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(p)
}

/// A relaxation row `sum_q a_q x_q >= b` with its nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizedRow {
    pub name: String,
    pub terms: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// Rows of the partial vertex cover LP, in its order, all as `>=` rows.
pub fn homogenized_rows(g: &Graph, t: u64) -> Result<Vec<HomogenizedRow>> {
    let lp = build_pvc_lp(g, t)?;
    Ok(lp
        .constraints
        .iter()
        .map(|c| {
            debug_assert_eq!(c.sense, Sense::Ge);
            HomogenizedRow {
                name: c.name.clone(),
                terms: c
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(q, a)| (q, a.clone()))
                    .collect(),
                rhs: c.rhs.clone(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `lhs = sum_q a_q w_{Y ∪ {q}, N} < rhs = b w_{Y, N}`.
    Constraint {
        row: usize,
        name: String,
        y: VarSet,
        n: VarSet,
        lhs: Rational,
        rhs: Rational,
    },
    /// `witness^T X^{Y,N} witness = value < 0`.
    NotPsd {
        y: VarSet,
        n: VarSet,
        witness: Vec<Rational>,
        value: Rational,
    },
}

impl Violation {
    pub fn pair(&self) -> (&VarSet, &VarSet) {
        match self {
            Violation::Constraint { y, n, .. } | Violation::NotPsd { y, n, .. } => (y, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaVerdict {
    pub feasible: bool,
    /// The earliest violation in enumeration order.
    pub violation: Option<Violation>,
    pub pairs_checked: u64,
    /// Linear rows evaluated, up to and including the violated one.
    pub constraints_checked: u64,
    /// PSD tests run, up to and including the failing one.
    pub psd_checked: u64,
    /// `sum_i w_i y_{{i}}`.
    pub objective_value: Rational,
    /// Integral optimum, when the graph is small enough to brute-force.
    pub opt: Option<Rational>,
    /// `opt / objective_value`.
    pub integrality_gap_lower_bound: Option<Rational>,
    pub fingerprint: String,
}

/// Seeded uniform sample of `count` pairs without replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sample {
    pub count: usize,
    pub seed: u64,
}

/// `(lhs, rhs)` of the row multiplied by `prod_Y x * prod_N (1 - x)`.
pub fn evaluate_constraint(
    mv: &MomentVector,
    row: &HomogenizedRow,
    y: &VarSet,
    n: &VarSet,
) -> Result<(Rational, Rational)> {
    if !y.is_disjoint(n) {
        return Err(Error::NotDisjoint);
    }
    let y = mv.graph().ids_of(y)?;
    let n = mv.graph().ids_of(n)?;
    let w0 = mv.cond_weight_ids(&y, &n)?;
    let mut lhs = Rational::zero();
    for (q, a) in &row.terms {
        lhs += a * lifted_weight(mv, &y, &n, *q)?;
    }
    Ok((lhs, &row.rhs * w0))
}

fn lifted_weight(mv: &MomentVector, y: &[usize], n: &[usize], q: usize) -> Result<Rational> {
    let mut set = y.to_vec();
    if let Err(pos) = set.binary_search(&q) {
        set.insert(pos, q);
    }
    mv.cond_weight_ids(&set, n)
}

fn objective_and_gap(
    mv: &MomentVector,
    t: u64,
) -> Result<(Rational, Option<Rational>, Option<Rational>)> {
    let g = mv.graph();
    let mut objective = Rational::zero();
    for (i, w) in g.weights().iter().enumerate() {
        if !w.is_zero() {
            objective += w * mv.moment_ids(&[i])?;
        }
    }
    let opt = if g.num_vertices() <= BRUTE_FORCE_MAX_VERTICES {
        Some(brute_force_opt(g, t)?.value)
    } else {
        None
    };
    let gap = opt
        .as_ref()
        .filter(|_| objective.is_positive())
        .map(|o| o / &objective);
    Ok((objective, opt, gap))
}

fn pair_sets(g: &Graph, pair: &Pair) -> (VarSet, VarSet) {
    (g.set_of(&pair.y), g.set_of(&pair.n))
}

/// Level-`r` Sherali-Adams membership of the moment vector for the partial
/// vertex cover relaxation with demand `t`.
///
/// Every disjoint `(Y, N)` with `|Y ∪ N| <= r` and every row of the
/// relaxation is checked exactly; the demand row is summed over all edges.
pub fn verify_sa(mv: &MomentVector, t: u64, r: u32) -> Result<SaVerdict> {
    let g = mv.graph();
    let rows = homogenized_rows(g, t)?;
    let pairs = PairEnumerator::new(g.num_vars(), r as usize)?;
    let (objective_value, opt, gap) = objective_and_gap(mv, t)?;

    let check = |index: u64| -> Result<Option<(usize, Violation)>> {
        let pair = pairs.nth(index).expect("index in range");
        let w0 = mv.cond_weight_ids(&pair.y, &pair.n)?;
        let lifted = (0..g.num_vars())
            .map(|q| lifted_weight(mv, &pair.y, &pair.n, q))
            .collect::<Result<Vec<_>>>()?;
        for (k, row) in rows.iter().enumerate() {
            let lhs: Rational = row.terms.iter().map(|(q, a)| a * &lifted[*q]).sum();
            let rhs = &row.rhs * &w0;
            if lhs < rhs {
                let (y, n) = pair_sets(g, &pair);
                return Ok(Some((
                    k,
                    Violation::Constraint {
                        row: k,
                        name: row.name.clone(),
                        y,
                        n,
                        lhs,
                        rhs,
                    },
                )));
            }
        }
        Ok(None)
    };
    let first = (0..pairs.count())
        .into_par_iter()
        .map(|i| check(i).map(|v| v.map(|v| (i, v))))
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()?
        .flatten();

    let per_pair = rows.len() as u64;
    let (pairs_checked, constraints_checked, violation) = match first {
        Some((i, (k, v))) => (i + 1, i * per_pair + k as u64 + 1, Some(v)),
        None => (pairs.count(), pairs.count() * per_pair, None),
    };
    Ok(SaVerdict {
        feasible: violation.is_none(),
        violation,
        pairs_checked,
        constraints_checked,
        psd_checked: 0,
        objective_value,
        opt,
        integrality_gap_lower_bound: gap,
        fingerprint: fingerprint(enumeration_header("sa", g, r as usize, &pairs, Some(&rows))),
    })
}

/// [`verify_sa`] followed by the PSD test of the level-1 moment matrix `X^{∅,∅}`.
pub fn verify_sap(mv: &MomentVector, t: u64, r: u32) -> Result<SaVerdict> {
    let mut verdict = verify_sa(mv, t, r)?;
    if verdict.feasible {
        verdict.psd_checked = 1;
        if let PsdVerdict::NotPsd { witness, value } = psd_check(&cond_matrix_ids(mv, &[], &[])?) {
            verdict.feasible = false;
            verdict.violation = Some(Violation::NotPsd {
                y: VarSet::empty(),
                n: VarSet::empty(),
                witness,
                value,
            });
        }
    }
    verdict.fingerprint = fingerprint([verdict.fingerprint.as_str(), "psd:X(∅,∅)"]);
    Ok(verdict)
}

/// PSD test of every `X^{Y,N}` with `|Y ∪ N| <= r - 1`, or of a seeded sample.
pub fn verify_xyn_family(
    mv: &MomentVector,
    t: u64,
    r: u32,
    sample: Option<Sample>,
) -> Result<SaVerdict> {
    let g = mv.graph();
    build_pvc_lp(g, t)?;
    let (objective_value, opt, gap) = objective_and_gap(mv, t)?;
    let (pairs, indices): (Option<PairEnumerator>, Vec<u64>) = if r == 0 {
        (None, Vec::new())
    } else {
        let pairs = PairEnumerator::new(g.num_vars(), r as usize - 1)?;
        let total = pairs.count();
        let indices = match sample {
            Some(s) if (s.count as u64) < total => {
                let len = usize::try_from(total).map_err(|_| Error::TooLarge {
                    what: "sample space",
                    size: usize::MAX,
                    cap: usize::MAX,
                })?;
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                let mut picked: Vec<u64> = rand::seq::index::sample(&mut rng, len, s.count)
                    .into_iter()
                    .map(|i| i as u64)
                    .collect();
                picked.sort_unstable();
                picked
            }
            _ => (0..total).collect(),
        };
        (Some(pairs), indices)
    };

    let first = indices
        .par_iter()
        .enumerate()
        .map(|(pos, &index)| -> Result<Option<(usize, Violation)>> {
            let pair = pairs
                .as_ref()
                .expect("pairs exist")
                .nth(index)
                .expect("index in range");
            let matrix = cond_matrix_ids(mv, &pair.y, &pair.n)?;
            Ok(match psd_check(&matrix) {
                PsdVerdict::Psd { .. } => None,
                PsdVerdict::NotPsd { witness, value } => {
                    let (y, n) = pair_sets(g, &pair);
                    Some((
                        pos,
                        Violation::NotPsd {
                            y,
                            n,
                            witness,
                            value,
                        },
                    ))
                }
            })
        })
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()?
        .flatten();

    let (checked, violation) = match first {
        Some((pos, v)) => (pos as u64 + 1, Some(v)),
        None => (indices.len() as u64, None),
    };
    let mut parts = match &pairs {
        Some(p) => enumeration_header("xyn", g, r as usize - 1, p, None),
        None => vec!["xyn:empty".to_string()],
    };
    if let Some(s) = sample {
        parts.push(format!("sample:{}:{}", s.count, s.seed));
        parts.extend(indices.iter().map(u64::to_string));
    }
    Ok(SaVerdict {
        feasible: violation.is_none(),
        violation,
        pairs_checked: checked,
        constraints_checked: 0,
        psd_checked: checked,
        objective_value,
        opt,
        integrality_gap_lower_bound: gap,
        fingerprint: fingerprint(parts),
    })
}

fn enumeration_header(
    kind: &str,
    g: &Graph,
    max_size: usize,
    pairs: &PairEnumerator,
    rows: Option<&[HomogenizedRow]>,
) -> Vec<String> {
    let mut parts = vec![
        format!(
            "{kind}:vars={}:max_size={max_size}:pairs={}",
            g.num_vars(),
            pairs.count()
        ),
        "order:size,lex,ymask".to_string(),
    ];
    parts.extend((0..g.num_vars()).map(|q| g.var_name(q)));
    if let Some(rows) = rows {
        parts.extend(rows.iter().map(|r| r.name.clone()));
    }
    parts
}
