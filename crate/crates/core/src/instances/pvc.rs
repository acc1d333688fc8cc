use num_traits::{One, Zero};

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::exact_linalg::{Direction, LinearProgram, Rational, Sense};

/// Largest vertex count accepted by [`brute_force_opt`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 24;

/// The partial vertex cover relaxation on `g`:
///
/// ```text
/// min  sum_i w_i x_i
/// s.t. x_i + x_j - x_e >= 0      for every edge e = {i, j}
///      sum_e x_e       >= t
///      x_q >= 0, -x_q >= -1      for every vertex and edge variable
/// ```
///
/// Rows come in exactly this order, box rows interleaved per variable.
pub fn build_pvc_lp(g: &Graph, t: u64) -> Result<LinearProgram> {
    if t > g.num_edges() as u64 {
        return Err(Error::DemandTooLarge {
            t,
            edges: g.num_edges(),
        });
    }
    let m = g.num_vars();
    let n = g.num_vertices();
    let names = (0..m).map(|id| g.var_name(id)).collect();
    let mut lp = LinearProgram::new(names, Direction::Minimize);
    for (i, w) in g.weights().iter().enumerate() {
        lp.objective[i] = w.clone();
    }
    let unit = |k: usize, v: i64| {
        let mut row = vec![Rational::zero(); m];
        row[k] = Rational::from_integer(v.into());
        row
    };

    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let mut row = vec![Rational::zero(); m];
        row[(i - 1) as usize] = Rational::one();
        row[(j - 1) as usize] = Rational::one();
        row[n + k] = -Rational::one();
        lp.add_constraint(format!("edge{{{i},{j}}}"), row, Sense::Ge, Rational::zero())?;
    }
    let mut demand = vec![Rational::zero(); m];
    for x in demand.iter_mut().skip(n) {
        *x = Rational::one();
    }
    lp.add_constraint(
        "demand",
        demand,
        Sense::Ge,
        Rational::from_integer(t.into()),
    )?;
    for q in 0..m {
        let name = g.var_name(q);
        lp.add_constraint(
            format!("lower({name})"),
            unit(q, 1),
            Sense::Ge,
            Rational::zero(),
        )?;
        lp.add_constraint(
            format!("upper({name})"),
            unit(q, -1),
            Sense::Ge,
            -Rational::one(),
        )?;
    }
    Ok(lp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceOpt {
    pub value: Rational,
    /// An optimal vertex set, ascending 1-based labels.
    pub cover: Vec<u32>,
}

/// Exact integral optimum by enumerating every vertex subset.
pub fn brute_force_opt(g: &Graph, t: u64) -> Result<BruteForceOpt> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "brute-force enumeration",
            size: n,
            cap: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    if t > g.num_edges() as u64 {
        return Err(Error::DemandTooLarge {
            t,
            edges: g.num_edges(),
        });
    }
    let mut adj = vec![0u32; n];
    for &(i, j) in g.edges() {
        adj[(i - 1) as usize] |= 1 << (j - 1);
        adj[(j - 1) as usize] |= 1 << (i - 1);
    }
    let total = g.num_edges() as u64;
    let full: u32 = (1u32 << n) - 1;

    let mut best: Option<(Rational, u32)> = None;
    let unweighted = g.is_unweighted();
    for mask in 0..=full {
        let outside = !mask & full;
        // Each uncovered edge is counted from both endpoints.
        let mut twice_uncovered = 0u64;
        let mut rest = outside;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_uncovered += (adj[v] & outside).count_ones() as u64;
        }
        if total - twice_uncovered / 2 < t {
            continue;
        }
        let cost = if unweighted {
            Rational::from_integer(mask.count_ones().into())
        } else {
            (0..n)
                .filter(|&v| mask >> v & 1 == 1)
                .map(|v| g.weights()[v].clone())
                .sum()
        };
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, mask));
        }
    }
    let (value, mask) = best.expect("t <= |E| makes V a feasible cover");
    let cover = (0..n as u32)
        .filter(|&v| mask >> v & 1 == 1)
        .map(|v| v + 1)
        .collect();
    Ok(BruteForceOpt { value, cover })
}

/// The 0-1 point of the LP induced by choosing `cover`: chosen vertices and
/// every edge they touch are set to one.
pub fn integral_point(g: &Graph, cover: &[u32]) -> Vec<Rational> {
    let n = g.num_vertices();
    let mut chosen = vec![false; n];
    for &v in cover {
        chosen[(v - 1) as usize] = true;
    }
    let mut x = vec![Rational::zero(); g.num_vars()];
    for (v, &c) in chosen.iter().enumerate() {
        if c {
            x[v] = Rational::one();
        }
    }
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        if chosen[(i - 1) as usize] || chosen[(j - 1) as usize] {
            x[n + k] = Rational::one();
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rational::{int, rat};
    use crate::exact_linalg::{check_result, lp_solve};
    use crate::instances::{make_clique, make_star};

    #[test]
    fn star_row_counts() {
        let lp = build_pvc_lp(&make_star(3).unwrap(), 2).unwrap();
        assert_eq!(lp.num_vars(), 7);
        assert_eq!(lp.constraints.len(), 3 + 1 + 14);
    }

    #[test]
    fn clique_demand_rhs() {
        let lp = build_pvc_lp(&make_clique(4).unwrap(), 6).unwrap();
        let demand = lp.constraints.iter().find(|c| c.name == "demand").unwrap();
        assert_eq!(demand.rhs, int(6));
        assert!(build_pvc_lp(&make_clique(4).unwrap(), 7).is_err());
    }

    #[test]
    fn full_demand_is_vertex_cover() {
        // t = |E| forces every edge variable to one, so each edge row reads x_i + x_j >= 1.
        let g = make_clique(4).unwrap();
        let lp = build_pvc_lp(&g, 6).unwrap();
        let res = lp_solve(&lp).unwrap();
        check_result(&lp, &res).unwrap();
        assert_eq!(res.value(), Some(&int(2)));
        let x = res.primal().unwrap();
        assert!(x[4..].iter().all(|v| v == &int(1)));
        assert_eq!(brute_force_opt(&g, 6).unwrap().value, int(3));
    }

    #[test]
    fn star_lp_value() {
        let g = make_star(4).unwrap();
        let lp = build_pvc_lp(&g, 2).unwrap();
        let res = lp_solve(&lp).unwrap();
        check_result(&lp, &res).unwrap();
        assert_eq!(res.value(), Some(&rat(1, 2)));
    }

    #[test]
    fn clique_lp_value() {
        let lp = build_pvc_lp(&make_clique(5).unwrap(), 2).unwrap();
        assert_eq!(lp_solve(&lp).unwrap().value(), Some(&rat(1, 2)));
    }

    #[test]
    fn brute_force_known_values() {
        for n in 1..=7 {
            let star = make_star(n).unwrap();
            for t in 1..=n as u64 {
                assert_eq!(brute_force_opt(&star, t).unwrap().value, int(1));
            }
            let clique = make_clique(n + 1).unwrap();
            for t in 1..=n as u64 {
                assert_eq!(brute_force_opt(&clique, t).unwrap().value, int(1));
            }
            assert_eq!(brute_force_opt(&clique, 0).unwrap().value, int(0));
        }
    }

    #[test]
    fn brute_force_weighted() {
        let mut g = make_star(3).unwrap();
        g.set_weight(4, int(5)).unwrap();
        // Covering 2 edges: either the center (5) or two leaves (2).
        let opt = brute_force_opt(&g, 2).unwrap();
        assert_eq!(opt.value, int(2));
        assert_eq!(opt.cover.len(), 2);
    }

    #[test]
    fn brute_force_rejects_oversize() {
        let g = make_clique(25).unwrap();
        assert!(matches!(
            brute_force_opt(&g, 1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_point_is_feasible() {
        let g = Graph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 5)]).unwrap();
        for t in 0..=6 {
            let opt = brute_force_opt(&g, t).unwrap();
            let lp = build_pvc_lp(&g, t).unwrap();
            let x = integral_point(&g, &opt.cover);
            assert!(lp.is_feasible(&x));
            assert_eq!(lp.objective_value(&x), opt.value);
        }
    }
}
