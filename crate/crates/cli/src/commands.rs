use std::fmt;

use liftgap::certificate::{exact_strings, Certificate, ExactValue, Parameters, Verdict};
use liftgap::exact_linalg::rational::{binomial, parse_rational, to_decimal, to_fraction_string};
use liftgap::exact_linalg::{check_result, lp_solve, LinearProgram, LpResult};
use liftgap::hierarchy::{
    generate_sa1_lp, verify_sa, verify_sap, verify_xyn_family, SaParams, SaVerdict, Sample,
    Violation,
};
use liftgap::instances::{
    brute_force_opt, build_pvc_lp, make_star, parse_graph, BRUTE_FORCE_MAX_VERTICES,
};
use liftgap::lasserre::lasserre1_refutes;
use liftgap::sdp_hs::{build_star_sdp_solution, verify_hs_sdp};
use liftgap::Rational;
use serde_json::{json, Value};

use crate::{Format, Level};

/// Whether the verdict is the predicted one (exit 0) or not (exit 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Expected,
    Negative,
}

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Io(String),
    Lib(liftgap::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(m) | RunError::Io(m) => f.write_str(m),
            RunError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<liftgap::Error> for RunError {
    fn from(e: liftgap::Error) -> Self {
        RunError::Lib(e)
    }
}

type Output = Result<(String, Outcome), RunError>;

fn outcome(verdict: Verdict) -> Outcome {
    if verdict.is_expected() {
        Outcome::Expected
    } else {
        Outcome::Negative
    }
}

fn solve_checked(lp: &LinearProgram) -> Result<Rational, RunError> {
    let result = lp_solve(lp)?;
    check_result(lp, &result)
        .map_err(|e| RunError::Usage(format!("LP certificate rejected: {e}")))?;
    match result {
        LpResult::Optimal { value, .. } => Ok(value),
        other => Err(RunError::Usage(format!("LP is {:?}", other.status()))),
    }
}

/// `binom(n - 2r, 2) / (t n)`, when defined.
fn formula_gap(n: u32, r: u32, t: u64) -> Option<Rational> {
    let rest = (n as u64).checked_sub(2 * r as u64)?;
    (t > 0 && n > 0).then(|| Rational::new(binomial(rest, 2), (t * n as u64).into()))
}

pub fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::Constraint {
            row,
            name,
            y,
            n,
            lhs,
            rhs,
        } => json!({
            "kind": "linear",
            "row": row,
            "constraint": name,
            "Y": y.to_string(),
            "N": n.to_string(),
            "lhs": to_fraction_string(lhs),
            "rhs": to_fraction_string(rhs),
        }),
        Violation::NotPsd {
            y,
            n,
            witness,
            value,
        } => json!({
            "kind": "psd",
            "Y": y.to_string(),
            "N": n.to_string(),
            "quadratic_form": to_fraction_string(value),
            "witness": exact_strings(witness),
        }),
    }
}

pub fn verify(
    level: Level,
    n: u32,
    r: u32,
    t: u64,
    p: Option<&str>,
    sample: Option<usize>,
    seed: u64,
) -> Output {
    let p = p
        .map(|s| {
            parse_rational(s)
                .ok_or_else(|| RunError::Usage(format!("cannot parse probability {s:?}")))
        })
        .transpose()?;
    if sample.is_some() && level != Level::Xyn {
        return Err(RunError::Usage(
            "--sample only applies to --level xyn".into(),
        ));
    }
    let params = SaParams::new(n, r, t, p)?;
    let mv = params.moment_vector()?;
    let (claim, verdict): (&str, SaVerdict) = match level {
        Level::Sa => ("sa-membership", verify_sa(&mv, t, r)?),
        Level::Sap => ("sap-membership", verify_sap(&mv, t, r)?),
        Level::Xyn => {
            let sample = sample.map(|count| Sample { count, seed });
            ("xyn-family", verify_xyn_family(&mv, t, r, sample)?)
        }
    };
    let status = if verdict.feasible {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    };
    let parameters = Parameters {
        n: Some(n.into()),
        r: Some(r.into()),
        t: Some(t),
        p: Some(ExactValue::new(&params.p)),
    };
    let mut cert = Certificate::new(claim, parameters, status);
    cert.set_value("objective", &verdict.objective_value);
    if let Some(opt) = &verdict.opt {
        cert.set_value("opt", opt);
    }
    if let Some(gap) = &verdict.integrality_gap_lower_bound {
        cert.set_value("gap_bound", gap);
    }
    if let Some(gap) = formula_gap(n, r, t) {
        cert.set_value("gap_bound_formula", &gap);
    }
    cert.set_value(
        "pairs_checked",
        &Rational::from_integer(verdict.pairs_checked.into()),
    );
    cert.set_value(
        "constraints_checked",
        &Rational::from_integer(verdict.constraints_checked.into()),
    );
    cert.set_value(
        "psd_checked",
        &Rational::from_integer(verdict.psd_checked.into()),
    );
    cert.witness = verdict.violation.as_ref().map(violation_json);
    cert.enumeration_fingerprint = verdict.fingerprint.clone();
    Ok((cert.to_json(), outcome(status)))
}

pub fn star(n: u32, t: u64) -> Output {
    if t < 1 || t > n as u64 {
        return Err(RunError::Usage(format!(
            "star needs 1 <= t <= n, got n = {n}, t = {t}"
        )));
    }
    let g = make_star(n)?;
    let expected_lp = Rational::new(t.into(), n.into());
    let lp = solve_checked(&build_pvc_lp(&g, t)?)?;
    let sa1 = solve_checked(&generate_sa1_lp(&g, t)?)?;
    let opt = (g.num_vertices() <= BRUTE_FORCE_MAX_VERTICES)
        .then(|| brute_force_opt(&g, t))
        .transpose()?
        .map(|o| o.value);

    let mut ok = lp == expected_lp && opt.as_ref().is_none_or(|o| *o == sa1);
    let parameters = Parameters {
        n: Some(n.into()),
        t: Some(t),
        ..Default::default()
    };
    let mut values = vec![("lp_value", lp.clone()), ("sa1_value", sa1)];
    let mut witness = json!({});
    if 2 * t <= n as u64 {
        let sol = build_star_sdp_solution(n, t)?;
        let report = verify_hs_sdp(&sol)?;
        ok &= report.feasible && report.objective == expected_lp;
        values.push(("sdp_value", report.objective.clone()));
        values.push(("sdp_demand_sum", report.demand_sum.clone()));
        if let Some(v) = &report.violation {
            witness["sdp_violation"] =
                json!({ "constraint": v.constraint, "slack": to_fraction_string(&v.slack) });
        }
    } else {
        witness["sdp_skipped"] = json!("t exceeds n/2");
    }
    if let Some(opt) = &opt {
        values.push(("opt", opt.clone()));
        values.push(("lp_gap", opt / &lp));
    }
    let status = if ok {
        Verdict::Verified
    } else {
        Verdict::Failed
    };
    let mut cert = Certificate::new("star-gap", parameters, status);
    for (name, v) in &values {
        cert.set_value(name, v);
    }
    cert.witness = Some(witness);
    cert.enumeration_fingerprint = liftgap::certificate::fingerprint(
        ["star-gap", "lp", "sa1", "sdp", "opt"]
            .into_iter()
            .map(String::from)
            .chain([format!("n={n}:t={t}")]),
    );
    Ok((cert.to_json(), outcome(status)))
}

pub fn lasserre(n: u64, r: u64, t: u64) -> Output {
    let report = lasserre1_refutes(n, r, t)?;
    let cert = report.to_certificate();
    Ok((cert.to_json(), outcome(cert.verdict)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub n: u32,
    pub r: u32,
    pub t: u64,
}

pub fn parse_grid(grid: &str) -> Result<Vec<GridPoint>, RunError> {
    grid.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').collect();
            let bad = || RunError::Usage(format!("grid entry {item:?} is not n:r:t"));
            if parts.len() != 3 {
                return Err(bad());
            }
            Ok(GridPoint {
                n: parts[0].parse().map_err(|_| bad())?,
                r: parts[1].parse().map_err(|_| bad())?,
                t: parts[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[derive(Default)]
struct GapRow {
    p: Option<Rational>,
    objective: Option<Rational>,
    opt: Option<Rational>,
    gap: Option<Rational>,
    feasible: Option<bool>,
    hypothesis: bool,
    error: Option<String>,
}

fn gap_row(pt: &GridPoint) -> GapRow {
    let hypothesis = pt.n as u64 >= 2 * pt.r as u64 + 2 * pt.t + 2;
    let mut row = GapRow {
        hypothesis,
        ..Default::default()
    };
    let run = |row: &mut GapRow| -> liftgap::Result<()> {
        let params = SaParams::new(pt.n, pt.r, pt.t, None)?;
        row.p = Some(params.p.clone());
        let v = verify_sa(&params.moment_vector()?, pt.t, pt.r)?;
        row.objective = Some(v.objective_value);
        row.opt = v.opt;
        row.gap = v.integrality_gap_lower_bound;
        row.feasible = Some(v.feasible);
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
    }
    row
}

pub fn gap_table(grid: &str, format: Format) -> Output {
    let points = parse_grid(grid)?;
    let rows: Vec<GapRow> = points.iter().map(gap_row).collect();
    let exact = |x: &Option<Rational>| x.as_ref().map(to_fraction_string).unwrap_or_default();
    let decimal = |x: &Option<Rational>| x.as_ref().map(to_decimal).unwrap_or_default();
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header = [
                "n",
                "r",
                "t",
                "p",
                "p_decimal",
                "sa_objective",
                "sa_objective_decimal",
                "opt",
                "gap_bound",
                "gap_bound_decimal",
                "feasible",
                "hypothesis_holds",
                "error",
            ];
            w.write_record(header)
                .map_err(|e| RunError::Io(e.to_string()))?;
            for (pt, row) in points.iter().zip(&rows) {
                let record = [
                    pt.n.to_string(),
                    pt.r.to_string(),
                    pt.t.to_string(),
                    exact(&row.p),
                    decimal(&row.p),
                    exact(&row.objective),
                    decimal(&row.objective),
                    exact(&row.opt),
                    exact(&row.gap),
                    decimal(&row.gap),
                    row.feasible.map(|f| f.to_string()).unwrap_or_default(),
                    row.hypothesis.to_string(),
                    row.error.clone().unwrap_or_default(),
                ];
                w.write_record(&record)
                    .map_err(|e| RunError::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| RunError::Io(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is utf-8")
        }
        Format::Json => {
            let opt_value = |x: &Option<Rational>| x.as_ref().map(|v| json!(ExactValue::new(v)));
            let items: Vec<Value> = points
                .iter()
                .zip(&rows)
                .map(|(pt, row)| {
                    json!({
                        "n": pt.n,
                        "r": pt.r,
                        "t": pt.t,
                        "p": opt_value(&row.p),
                        "sa_objective": opt_value(&row.objective),
                        "opt": opt_value(&row.opt),
                        "gap_bound": opt_value(&row.gap),
                        "feasible": row.feasible,
                        "hypothesis_holds": row.hypothesis,
                        "error": row.error,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&items).expect("table serializes");
            s.push('\n');
            s
        }
    };
    Ok((text, Outcome::Expected))
}

pub fn graph_opt(source: &str, t: u64) -> Output {
    let g = parse_graph(source)?;
    let lp = solve_checked(&build_pvc_lp(&g, t)?)?;
    let bf = brute_force_opt(&g, t)?;
    let parameters = Parameters {
        n: Some(g.n().into()),
        t: Some(t),
        ..Default::default()
    };
    let mut cert = Certificate::new("graph-opt", parameters, Verdict::Verified);
    cert.set_value("lp_value", &lp);
    cert.set_value("opt", &bf.value);
    if lp > Rational::from_integer(0.into()) {
        cert.set_value("lp_gap", &(&bf.value / &lp));
    }
    cert.witness = Some(json!({ "cover": bf.cover }));
    cert.enumeration_fingerprint = liftgap::certificate::fingerprint(
        std::iter::once(format!("graph-opt:n={}:t={t}", g.n()))
            .chain(g.edges().iter().map(|(i, j)| format!("{i} {j}"))),
    );
    Ok((cert.to_json(), Outcome::Expected))
}
