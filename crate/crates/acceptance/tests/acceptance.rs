//! Acceptance criteria, one pass/fail line each. Exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use liftgap::exact_linalg::rational::{binomial, int, rat, to_decimal, to_f64};
use liftgap::exact_linalg::{check_result, lp_solve, psd_check, LpResult, Rational};
use liftgap::hierarchy::{
    generate_sa1_lp, homogenized_rows, verify_sa, verify_sap, verify_xyn_family, SaParams,
    SaVerdict, Sample, Violation,
};
use liftgap::instances::{
    brute_force_opt, build_pvc_lp, make_clique, make_star, Graph, VarIndex, VarSet,
};
use liftgap::lasserre::{
    allones_eigenvalue_after_schur, build_zbar, build_zbar_exhaustive, build_zbar_with_demand,
    lasserre1_check, lasserre1_refutes, slack_matrix, slack_matrix_exhaustive,
};
use liftgap::moments::{build_cond_matrix, DistParams, MomentVector};
use liftgap::sdp_hs::{build_star_sdp_solution, verify_hs_sdp};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:.2?}, limit {limit:?}")
    })
}

fn lp_value(g: &Graph, t: u64) -> Result<Rational, String> {
    let lp = build_pvc_lp(g, t).map_err(|e| e.to_string())?;
    lp_optimum(&lp)
}

fn lp_optimum(lp: &liftgap::exact_linalg::LinearProgram) -> Result<Rational, String> {
    let res = lp_solve(lp).map_err(|e| e.to_string())?;
    check_result(lp, &res).map_err(|e| format!("certificate rejected: {e}"))?;
    match res {
        LpResult::Optimal { value, .. } => Ok(value),
        other => Err(format!("expected an optimum, got {:?}", other.status())),
    }
}

fn opt(g: &Graph, t: u64) -> Result<Rational, String> {
    brute_force_opt(g, t)
        .map(|o| o.value)
        .map_err(|e| e.to_string())
}

fn star_lp_gap() -> Outcome {
    for (n, t) in [(4u32, 2u64), (10, 1), (10, 2), (12, 3)] {
        let start = Instant::now();
        let g = make_star(n).map_err(|e| e.to_string())?;
        let lp = lp_value(&g, t)?;
        let best = opt(&g, t)?;
        within(
            start.elapsed(),
            Duration::from_secs(1),
            &format!("star ({n},{t})"),
        )?;
        ensure(lp == rat(t as i64, n as i64), || {
            format!("star ({n},{t}): LP {lp}")
        })?;
        ensure(best == int(1), || format!("star ({n},{t}): opt {best}"))?;
        ensure(&best / &lp == rat(n as i64, t as i64), || {
            format!("star ({n},{t}): gap")
        })?;
    }
    Ok("LP = t/n, opt = 1, gap n/t on all four stars".into())
}

fn clique_lp() -> Outcome {
    let start = Instant::now();
    for n in 4..=10u32 {
        let g = make_clique(n).map_err(|e| e.to_string())?;
        for t in 1..n as u64 {
            let v = lp_value(&g, t)?;
            ensure(v == rat(t as i64, n as i64 - 1), || {
                format!("K_{n}, t={t}: LP {v}")
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(5), "clique sweep")?;
    Ok(format!(
        "LP = t/(n-1) on K_4..K_10 in {:.2?}",
        start.elapsed()
    ))
}

fn star_sa1() -> Outcome {
    let start = Instant::now();
    let g = make_star(6).map_err(|e| e.to_string())?;
    let lp = generate_sa1_lp(&g, 3).map_err(|e| e.to_string())?;
    let v = lp_optimum(&lp)?;
    within(start.elapsed(), Duration::from_secs(30), "level-1 LP")?;
    ensure(v == int(1), || format!("level-1 value {v}"))?;
    Ok(format!(
        "level-1 value 1 over {} variables, {} rows in {:.2?}",
        lp.num_vars(),
        lp.constraints.len(),
        start.elapsed()
    ))
}

fn star_sdp() -> Outcome {
    for (n, t) in [(10u32, 2u64), (20, 5)] {
        let sol = build_star_sdp_solution(n, t).map_err(|e| e.to_string())?;
        let r = verify_hs_sdp(&sol).map_err(|e| e.to_string())?;
        ensure(r.feasible, || {
            format!("({n},{t}) violates {:?}", r.violation)
        })?;
        ensure(r.objective == rat(t as i64, n as i64), || {
            format!("({n},{t}) objective {}", r.objective)
        })?;
        ensure(r.demand_sum == int(4 * t as i64), || {
            format!("({n},{t}) demand sum {}", r.demand_sum)
        })?;
    }
    Ok("feasible, objective t/n, demand row tight at 4t".into())
}

const LIFT_GRID: [(u32, u32, u64); 4] = [(8, 1, 1), (10, 1, 1), (12, 2, 1), (14, 2, 2)];

fn check_lift(v: &SaVerdict, n: u32, r: u32, t: u64) -> Result<(), String> {
    ensure(v.feasible, || {
        format!("({n},{r},{t}) violation {:?}", v.violation)
    })?;
    let bound = Rational::new(binomial(n as u64 - 2 * r as u64, 2), (t * n as u64).into());
    ensure(
        v.integrality_gap_lower_bound.as_ref() == Some(&bound),
        || {
            format!(
                "({n},{r},{t}) gap bound {:?}, formula {bound}",
                v.integrality_gap_lower_bound
            )
        },
    )?;
    ensure(v.opt == Some(int(1)), || {
        format!("({n},{r},{t}) opt {:?}", v.opt)
    })
}

fn lift_grid(plus: bool) -> Outcome {
    let mut notes = Vec::new();
    for (n, r, t) in LIFT_GRID {
        let start = Instant::now();
        let params = SaParams::new(n, r, t, None).map_err(|e| e.to_string())?;
        let mv = params.moment_vector().map_err(|e| e.to_string())?;
        let v = if plus {
            verify_sap(&mv, t, r)
        } else {
            verify_sa(&mv, t, r)
        }
        .map_err(|e| e.to_string())?;
        check_lift(&v, n, r, t)?;
        if plus {
            ensure(v.psd_checked == 1, || {
                format!("({n},{r},{t}) ran {} PSD checks", v.psd_checked)
            })?;
        }
        if (n, r, t) == (14, 2, 2) {
            within(start.elapsed(), Duration::from_secs(600), "(14,2,2)")?;
        }
        notes.push(format!(
            "({n},{r},{t}) {} pairs {:.1?}",
            v.pairs_checked,
            start.elapsed()
        ));
    }
    Ok(notes.join("; "))
}

fn xyn_family() -> Outcome {
    let mv = SaParams::new(10, 2, 1, None)
        .and_then(|p| p.moment_vector())
        .map_err(|e| e.to_string())?;
    let full = verify_xyn_family(&mv, 1, 2, None).map_err(|e| e.to_string())?;
    ensure(full.feasible, || format!("(10,2,1) {:?}", full.violation))?;
    let mv = SaParams::new(14, 3, 2, None)
        .and_then(|p| p.moment_vector())
        .map_err(|e| e.to_string())?;
    let sample = Sample {
        count: 200,
        seed: 2024,
    };
    let sampled = verify_xyn_family(&mv, 2, 3, Some(sample)).map_err(|e| e.to_string())?;
    ensure(sampled.feasible, || {
        format!("(14,3,2) {:?}", sampled.violation)
    })?;
    ensure(sampled.psd_checked == 200, || {
        format!("(14,3,2) checked {}", sampled.psd_checked)
    })?;
    Ok(format!(
        "{} exhaustive matrices on (10,2,1), 200 sampled on (14,3,2)",
        full.psd_checked
    ))
}

fn all_vars(g: &Graph) -> Vec<VarIndex> {
    (0..g.num_vars()).map(|id| g.var_at(id)).collect()
}

fn random_pair(rng: &mut ChaCha8Rng, vars: &[VarIndex], max: usize) -> (VarSet, VarSet) {
    let size = rng.gen_range(0..=max);
    let picked: Vec<VarIndex> = vars.choose_multiple(rng, size).cloned().collect();
    let split = rng.gen_range(0..=size);
    (
        VarSet::new(picked[..split].to_vec()),
        VarSet::new(picked[split..].to_vec()),
    )
}

fn inclusion_exclusion() -> Outcome {
    let g = make_clique(8).map_err(|e| e.to_string())?;
    let mv = MomentVector::new(DistParams::new(g.clone(), rat(1, 15)).map_err(|e| e.to_string())?);
    let vars = all_vars(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let (y, n) = random_pair(&mut rng, &vars, 4);
        let yi = g.ids_of(&y).map_err(|e| e.to_string())?;
        let ni = g.ids_of(&n).map_err(|e| e.to_string())?;
        let ie = mv
            .inclusion_exclusion_ids(&yi, &ni)
            .map_err(|e| e.to_string())?;
        let direct = mv.event_probability(&yi, &ni).map_err(|e| e.to_string())?;
        ensure(ie == direct, || {
            format!("Y={} N={}: {ie} vs {direct}", y.encode(), n.encode())
        })?;
    }
    for _ in 0..100 {
        let size = rng.gen_range(0..=3);
        let s: Vec<VarIndex> = vars.choose_multiple(&mut rng, size).cloned().collect();
        let mut total = Rational::zero();
        for mask in 0u32..(1 << s.len()) {
            let y = VarSet::new(
                s.iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, v)| *v),
            );
            let n = VarSet::new(
                s.iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 0)
                    .map(|(_, v)| *v),
            );
            total += mv.cond_weight(&y, &n).map_err(|e| e.to_string())?;
        }
        ensure(total == int(1), || {
            format!("partition of {s:?} sums to {total}")
        })?;
    }
    Ok("500 identities and 100 partitions exact".into())
}

fn conditioned_psd() -> Outcome {
    let g = make_clique(10).map_err(|e| e.to_string())?;
    let mv = MomentVector::new(DistParams::new(g.clone(), rat(1, 28)).map_err(|e| e.to_string())?);
    let vars = all_vars(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let (y, n) = random_pair(&mut rng, &vars, 1);
        let x = build_cond_matrix(&mv, &y, &n).map_err(|e| e.to_string())?;
        ensure(psd_check(&x.matrix).is_psd(), || {
            format!("Y={} N={} not PSD", y.encode(), n.encode())
        })?;
    }
    Ok("50 matrices PSD".into())
}

fn demand_refutation() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (n, r, t) in [(12u64, 2u64, 1u64), (14, 2, 2)] {
        let rep = lasserre1_refutes(n, r, t).map_err(|e| e.to_string())?;
        let ev = rep
            .allones_eigenvalue
            .as_ref()
            .map(to_decimal)
            .unwrap_or_else(|| "undefined".into());
        notes.push(format!(
            "({n},{r},{t}) vertex minor psd={} all-ones eigenvalue {ev}, full demand matrix psd={}",
            rep.zbar.is_psd(),
            rep.full_demand.is_psd()
        ));
        match rep.zbar.witness() {
            Some((_, v)) if v.is_negative() => {}
            _ => failures.push(format!(
                "({n},{r},{t}) vertex minor has no negative witness"
            )),
        }
        if !rep
            .allones_eigenvalue
            .as_ref()
            .is_some_and(|e| e.is_negative())
        {
            failures.push(format!(
                "({n},{r},{t}) all-ones eigenvalue {ev} is not negative"
            ));
        }
    }
    for n in 4..=12u64 {
        for t in 0..=3u64 {
            for p in [int(0), rat(1, 7), rat(1, 2), int(1)] {
                let closed = build_zbar(n, t, &p).map_err(|e| e.to_string())?;
                let exhaustive = build_zbar_exhaustive(n, t, &p).map_err(|e| e.to_string())?;
                if closed.zbar != exhaustive {
                    failures.push(format!("closed form differs at n={n} t={t} p={p}"));
                }
            }
        }
    }
    // p = 1 / n^2 on the curve p = t / binom(n, 2), so the demand is fractional.
    let n = 500u64;
    let p = Rational::new(1.into(), (n * n).into());
    let demand = &p * Rational::from_integer(binomial(n, 2));
    let ls = build_zbar_with_demand(n, &demand, &p).map_err(|e| e.to_string())?;
    match allones_eigenvalue_after_schur(&ls) {
        Ok(ev) => {
            let scaled = to_f64(&ev) * n as f64;
            notes.push(format!(
                "n=500 t={}: eigenvalue x n = {scaled:.4}",
                to_decimal(&demand)
            ));
            if (scaled + 11.5).abs() > 1.15 {
                failures.push(format!(
                    "n=500: eigenvalue x n = {scaled:.4}, expected -11.5 within 10%"
                ));
            }
        }
        Err(e) => failures.push(format!("n=500: no eigenvalue ({e})")),
    }
    let detail = notes.join("; ");
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; observed: {detail}", failures.join("; ")))
    }
}

fn edge_box_slack() -> Outcome {
    let g = make_clique(10).map_err(|e| e.to_string())?;
    let p = rat(1, 15);
    let mv = MomentVector::new(DistParams::new(g.clone(), p.clone()).map_err(|e| e.to_string())?);
    let rows = homogenized_rows(&g, 1).map_err(|e| e.to_string())?;
    let mut count = 0;
    for row in rows.iter().filter(|r| r.name != "demand") {
        let m = slack_matrix(&mv, row).map_err(|e| e.to_string())?;
        let ex = slack_matrix_exhaustive(&g, &p, row).map_err(|e| e.to_string())?;
        ensure(m == ex, || {
            format!("{}: moment and exhaustive matrices differ", row.name)
        })?;
        ensure(psd_check(&m).is_psd(), || {
            format!("{} slack matrix not PSD", row.name)
        })?;
        count += 1;
    }
    Ok(format!("{count} edge and box slack matrices PSD"))
}

fn soundness() -> Outcome {
    let g = make_clique(6).map_err(|e| e.to_string())?;
    let ones = MomentVector::new(DistParams::new(g.clone(), int(1)).map_err(|e| e.to_string())?);
    for t in [1u64, 5] {
        for r in [1u32, 2] {
            let sa = verify_sa(&ones, t, r).map_err(|e| e.to_string())?;
            let sap = verify_sap(&ones, t, r).map_err(|e| e.to_string())?;
            let xyn = verify_xyn_family(&ones, t, r, None).map_err(|e| e.to_string())?;
            ensure(sa.feasible && sap.feasible && xyn.feasible, || {
                format!("p = 1 rejected at t={t} r={r}")
            })?;
        }
        let las = lasserre1_check(6, t, &int(1)).map_err(|e| e.to_string())?;
        ensure(!las.refuted(), || {
            format!("p = 1 refuted by level-1 test at t={t}")
        })?;
    }
    let zeros = MomentVector::new(DistParams::new(g, int(0)).map_err(|e| e.to_string())?);
    let v = verify_sa(&zeros, 1, 1).map_err(|e| e.to_string())?;
    match v.violation {
        Some(Violation::Constraint { name, y, n, .. })
            if name == "demand" && y.is_empty() && n.is_empty() => {}
        other => return Err(format!("p = 0 gave {other:?}")),
    }
    Ok("p = 1 accepted everywhere; p = 0 rejected on the demand row at the empty pair".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "star LP gap", star_lp_gap),
        (2, "clique LP value", clique_lp),
        (3, "level-1 lift on the star", star_sa1),
        (4, "star vector solution", star_sdp),
        (5, "lifted product solution", || lift_grid(false)),
        (6, "lifted product solution with PSD minor", || {
            lift_grid(true)
        }),
        (7, "conditioned PSD family", xyn_family),
        (8, "inclusion-exclusion suite", inclusion_exclusion),
        (9, "random conditioned matrices", conditioned_psd),
        (10, "level-1 demand refutation", demand_refutation),
        (11, "edge and box slack matrices", edge_box_slack),
        (12, "soundness suite", soundness),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS [{elapsed:.1?}] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL [{elapsed:.1?}] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
