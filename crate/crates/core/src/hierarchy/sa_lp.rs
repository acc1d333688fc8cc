use num_traits::{One, Zero};

use super::verify::homogenized_rows;
use crate::error::{Error, Result};
use crate::exact_linalg::{Direction, LinearProgram, Rational, Sense};
use crate::instances::Graph;

/// Default limit on the number of lifted variables `|P_2|`.
pub const DEFAULT_SA1_VAR_CAP: usize = 5000;

/// Explicit level-1 Sherali-Adams tightening of the partial vertex cover LP.
///
/// Variables are `y_A` for `|A| <= 2`, ordered `∅`, singletons by id, then
/// pairs lexicographically. Each relaxation row is multiplied by `x_q` and
/// by `1 - x_q` for every variable `q` and linearized with `x_q^2 = x_q`;
/// finally `y_∅ = 1`.
pub fn generate_sa1_lp(g: &Graph, t: u64) -> Result<LinearProgram> {
    generate_sa1_lp_with_cap(g, t, DEFAULT_SA1_VAR_CAP)
}

pub fn generate_sa1_lp_with_cap(g: &Graph, t: u64, cap: usize) -> Result<LinearProgram> {
    let m = g.num_vars();
    let size = 1 + m + m * m.saturating_sub(1) / 2;
    if size > cap {
        return Err(Error::TooLarge {
            what: "level-1 lifted variables",
            size,
            cap,
        });
    }
    let rows = homogenized_rows(g, t)?;

    // Offset of the first pair starting with `a`.
    let pair_base: Vec<usize> = (0..m)
        .scan(1 + m, |next, a| {
            let base = *next;
            *next += m - a - 1;
            Some(base)
        })
        .collect();
    let var = |a: usize, b: usize| -> usize {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => 1 + a,
            std::cmp::Ordering::Less => pair_base[a] + (b - a - 1),
            std::cmp::Ordering::Greater => pair_base[b] + (a - b - 1),
        }
    };

    let mut names = vec!["y{}".to_string()];
    names.extend((0..m).map(|q| format!("y{{{}}}", g.var_name(q))));
    for a in 0..m {
        for b in a + 1..m {
            names.push(format!("y{{{},{}}}", g.var_name(a), g.var_name(b)));
        }
    }
    debug_assert_eq!(names.len(), size);

    let mut lp = LinearProgram::new(names, Direction::Minimize);
    for (i, w) in g.weights().iter().enumerate() {
        lp.objective[1 + i] = w.clone();
    }
    for row in &rows {
        for q in 0..m {
            let mut times = vec![Rational::zero(); size];
            let mut rest = vec![Rational::zero(); size];
            for (k, a) in &row.terms {
                times[var(*k, q)] += a;
                rest[1 + k] += a;
                rest[var(*k, q)] -= a;
            }
            times[1 + q] -= &row.rhs;
            rest[0] -= &row.rhs;
            rest[1 + q] += &row.rhs;
            let name = g.var_name(q);
            lp.add_constraint(
                format!("{}*{name}", row.name),
                times,
                Sense::Ge,
                Rational::zero(),
            )?;
            lp.add_constraint(
                format!("{}*(1-{name})", row.name),
                rest,
                Sense::Ge,
                Rational::zero(),
            )?;
        }
    }
    let mut unit = vec![Rational::zero(); size];
    unit[0] = Rational::one();
    lp.add_constraint("normalization", unit, Sense::Eq, Rational::one())?;
    Ok(lp)
}
