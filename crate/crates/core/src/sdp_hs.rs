//! Vector relaxation of partial vertex cover in Gram form.
//!
//! A solution is the Gram matrix of unit vectors `v_0, v_1, ..., v_n`, where
//! `v_0` marks "chosen". The program reads
//!
//! ```text
//! min  1/2 sum_i w_i (1 + v_0·v_i)
//! s.t. v_0·v_i + v_0·v_j - v_i·v_j <= 1          for every edge {i, j}
//!      v_0·v_i + v_0·v_j + v_i·v_j >= -1
//!      sum_{ij in E} (3 + v_0·v_i + v_0·v_j - v_i·v_j) >= 4t
//!      Gram matrix PSD, unit diagonal
//! ```
//!
//! All inner products of the star solution are rational, so checking it is
//! exact and never needs a square root.

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::certificate::{exact_strings, fingerprint, Certificate, Parameters, Verdict};
use crate::error::{Error, Result};
use crate::exact_linalg::{psd_check, PsdVerdict, Rational, SymMatrix};
use crate::instances::{brute_force_opt, make_star, Graph, BRUTE_FORCE_MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSolution {
    /// Indexed by `0` (the reference vector) then vertices `1..=n`.
    pub gram: SymMatrix,
    pub graph: Graph,
    pub t: u64,
}

/// Star with `n` leaves: `v_0 = -v_i` on leaves and the center at angle
/// `v_0·v_c = -1 + 2t/n`.
pub fn build_star_sdp_solution(n: u32, t: u64) -> Result<GramSolution> {
    if t < 1 || 2 * t > n as u64 {
        return Err(Error::Precondition(format!(
            "need 1 <= t <= n/2, got n = {n}, t = {t}"
        )));
    }
    let graph = make_star(n)?;
    let center = n as usize + 1;
    let shift = Rational::new((2 * t).into(), n.into());
    let one = Rational::one();
    let gram = SymMatrix::from_fn(center + 1, |i, j| match (i, j) {
        _ if i == j => one.clone(),
        (0, j) if j == center => &shift - &one,
        (0, _) => -one.clone(),
        (_, j) if j == center => &one - &shift,
        _ => one.clone(),
    });
    Ok(GramSolution { gram, graph, t })
}

/// One-dimensional solution: `v_i = v_0` on `cover`, `-v_0` elsewhere.
pub fn integral_sdp_solution(graph: &Graph, t: u64, cover: &[u32]) -> GramSolution {
    let sign: Vec<i64> = std::iter::once(1)
        .chain((1..=graph.n()).map(|v| if cover.contains(&v) { 1 } else { -1 }))
        .collect();
    let gram = SymMatrix::from_fn(sign.len(), |i, j| {
        Rational::from_integer((sign[i] * sign[j]).into())
    });
    GramSolution {
        gram,
        graph: graph.clone(),
        t,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdpViolation {
    pub constraint: String,
    /// Negative amount by which the constraint fails.
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdpReport {
    pub feasible: bool,
    pub violation: Option<SdpViolation>,
    pub psd: PsdVerdict,
    pub objective: Rational,
    /// `sum_{ij in E} (3 + z_{ij})`.
    pub demand_sum: Rational,
    /// `(upper, lower)` slack of the two edge rows, in edge order.
    pub edge_slacks: Vec<(Rational, Rational)>,
    pub opt: Option<Rational>,
    pub gap: Option<Rational>,
}

pub fn verify_hs_sdp(sol: &GramSolution) -> Result<SdpReport> {
    let g = &sol.graph;
    let n = g.num_vertices();
    if sol.gram.dim() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "gram has dimension {}, graph needs {}",
            sol.gram.dim(),
            n + 1
        )));
    }
    let gm = |i: usize, j: usize| sol.gram.get(i, j);
    let mut violation: Option<SdpViolation> = None;
    let mut note = |name: String, slack: Rational| {
        if slack.is_negative() && violation.is_none() {
            violation = Some(SdpViolation {
                constraint: name,
                slack,
            });
        }
    };
    for i in 0..=n {
        note(format!("unit(v_{i})"), -(gm(i, i) - Rational::one()).abs());
    }
    let psd = psd_check(&sol.gram);
    if let Some((_, value)) = psd.witness() {
        note("gram-psd".to_string(), value.clone());
    }
    let mut demand_sum = Rational::zero();
    let mut edge_slacks = Vec::with_capacity(g.num_edges());
    for &(i, j) in g.edges() {
        let (i, j) = (i as usize, j as usize);
        let z = gm(0, i) + gm(0, j) - gm(i, j);
        let upper = Rational::one() - &z;
        let lower = gm(0, i) + gm(0, j) + gm(i, j) + Rational::one();
        note(format!("edge-upper{{{i},{j}}}"), upper.clone());
        note(format!("edge-lower{{{i},{j}}}"), lower.clone());
        edge_slacks.push((upper, lower));
        demand_sum += Rational::from_integer(3.into()) + z;
    }
    note(
        "demand".to_string(),
        &demand_sum - Rational::from_integer((4 * sol.t).into()),
    );

    let half = Rational::new(1.into(), 2.into());
    let objective: Rational = g
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| w * (Rational::one() + gm(0, i + 1)))
        .sum::<Rational>()
        * half;
    let opt = if n <= BRUTE_FORCE_MAX_VERTICES {
        Some(brute_force_opt(g, sol.t)?.value)
    } else {
        None
    };
    let gap = opt
        .as_ref()
        .filter(|_| objective.is_positive())
        .map(|o| o / &objective);
    Ok(SdpReport {
        feasible: violation.is_none(),
        violation,
        psd,
        objective,
        demand_sum,
        edge_slacks,
        opt,
        gap,
    })
}

impl SdpReport {
    pub fn to_certificate(&self, sol: &GramSolution) -> Certificate {
        let params = Parameters {
            n: Some(sol.graph.n() as u64 - 1),
            t: Some(sol.t),
            ..Default::default()
        };
        let verdict = if self.feasible {
            Verdict::Verified
        } else {
            Verdict::Failed
        };
        let mut cert = Certificate::new("vector-relaxation-star", params, verdict);
        cert.set_value("objective", &self.objective);
        cert.set_value("demand_sum", &self.demand_sum);
        if let Some(s) = self.edge_slacks.iter().map(|(u, _)| u).min() {
            cert.set_value("min_edge_upper_slack", s);
        }
        if let Some(s) = self.edge_slacks.iter().map(|(_, l)| l).min() {
            cert.set_value("min_edge_lower_slack", s);
        }
        if let Some(o) = &self.opt {
            cert.set_value("opt", o);
        }
        if let Some(gap) = &self.gap {
            cert.set_value("gap", gap);
        }
        cert.witness = self.violation.as_ref().map(|v| {
            json!({ "constraint": v.constraint, "slack": exact_strings(std::slice::from_ref(&v.slack))[0] })
        });
        cert.enumeration_fingerprint = fingerprint(
            std::iter::once("gram:index=reference,vertices".to_string()).chain(
                sol.graph
                    .edges()
                    .iter()
                    .map(|(i, j)| format!("edge{{{i},{j}}}")),
            ),
        );
        cert
    }
}
