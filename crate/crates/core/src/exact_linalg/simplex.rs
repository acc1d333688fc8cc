//! Exact rational linear programming.
//!
//! A [`LinearProgram`] has free variables and `>=`, `<=`, `=` rows. It is
//! solved through its dual, `max b.y  s.t.  A^T y = c, y >= 0` (free on
//! equality rows), with a dense two-phase tableau simplex.
//! The dual has one row per primal variable, which keeps the tableau small
//! for the many-row/few-column programs produced by lifting. Every outcome
//! carries a certificate that [`check_result`] verifies exactly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rational>,
    pub direction: Direction,
}

impl LinearProgram {
    pub fn new(variables: Vec<String>, direction: Direction) -> Self {
        let n = variables.len();
        Self {
            variables,
            constraints: Vec::new(),
            objective: vec![Rational::zero(); n],
            direction,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<Rational>,
        sense: Sense,
        rhs: Rational,
    ) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "constraint has {} coefficients, program has {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint {
            name: name.into(),
            coeffs,
            sense,
            rhs,
        });
        Ok(())
    }

    /// Checks the row-length invariant.
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars() {
            return Err(Error::DimensionMismatch("objective length".into()));
        }
        for c in &self.constraints {
            if c.coeffs.len() != self.num_vars() {
                return Err(Error::DimensionMismatch(format!("row {}", c.name)));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Whether `x` satisfies every row exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.sense {
                Sense::Ge => lhs >= c.rhs,
                Sense::Le => lhs <= c.rhs,
                Sense::Eq => lhs == c.rhs,
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of [`lp_solve`].
///
/// Dual vectors are indexed by constraint and satisfy `sum_i y_i a_i = c`
/// (optimal) or `sum_i y_i a_i = 0, b.y > 0` (Farkas). For minimization,
/// `>=` rows carry `y >= 0` and `<=` rows `y <= 0`; maximization flips both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpResult {
    Optimal {
        value: Rational,
        primal: Vec<Rational>,
        dual: Vec<Rational>,
    },
    Infeasible {
        farkas: Vec<Rational>,
    },
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible { .. } => LpStatus::Infeasible,
            LpResult::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn primal(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { primal, .. } => Some(primal),
            LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Standard-form outcome for `min c.z  s.t.  A z = b, z >= 0`.
enum Standard {
    /// `multipliers` satisfy `c_j - pi.A_j >= 0` for every column.
    Optimal {
        z: Vec<Rational>,
        multipliers: Vec<Rational>,
    },
    /// `u` satisfies `u.A_j <= 0` for every column and `u.b > 0`.
    Infeasible { u: Vec<Rational> },
    /// `A r = 0`, `r >= 0`, `c.r < 0`.
    Unbounded { ray: Vec<Rational> },
}

/// Integer entry type of the fraction-free tableau. Checked operations
/// return `None` on overflow, which restarts the solve with `BigInt`.
trait Entry: Clone + Ord {
    fn zero() -> Self;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Exact quotient; the division is known to leave no remainder.
    fn div_exact(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
}

impl Entry for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        num_traits::ToPrimitive::to_i128(x)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

struct Overflow;

/// Fraction-free tableau: entries are integers and the value they stand for
/// is `entry / den`, with `den` the determinant of the current basis. Pivots
/// divide exactly by the previous determinant, so no gcd is ever taken.
struct Tableau<E> {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<E>>,
    /// Reduced costs scaled by `den`; last entry is minus the objective.
    d: Vec<E>,
    den: E,
    basis: Vec<usize>,
    cols: usize,
}

impl<E: Entry> Tableau<E> {
    fn pivot(&mut self, r: usize, j: usize) -> std::result::Result<(), Overflow> {
        let p = self.t[r][j].clone();
        let den = std::mem::replace(&mut self.den, p.clone());
        let pivot_row = self.t[r].clone();
        let update = |row: &mut Vec<E>, f: &E| -> std::result::Result<(), Overflow> {
            for (k, x) in row.iter_mut().enumerate() {
                let mut v = if x.is_zero() {
                    E::zero()
                } else {
                    x.mul(&p).ok_or(Overflow)?
                };
                if !f.is_zero() && !pivot_row[k].is_zero() {
                    v = v
                        .sub(&f.mul(&pivot_row[k]).ok_or(Overflow)?)
                        .ok_or(Overflow)?;
                }
                if !den.is_one() && !v.is_zero() {
                    v = v.div_exact(&den);
                }
                *x = v;
            }
            Ok(())
        };
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                let f = row[j].clone();
                update(row, &f)?;
            }
        }
        let f = self.d[j].clone();
        update(&mut self.d, &f)?;
        if self.den.is_negative() {
            self.den = self.den.neg().ok_or(Overflow)?;
            for x in self.t.iter_mut().flatten().chain(self.d.iter_mut()) {
                *x = x.neg().ok_or(Overflow)?;
            }
        }
        self.basis[r] = j;
        Ok(())
    }

    /// Simplex iterations over columns `0..eligible`. Returns the unbounded column,
    /// if one is found.
    fn run(&mut self, eligible: usize) -> std::result::Result<Option<usize>, Overflow> {
        loop {
            // Bland's rule with variables ranked by descending column index.
            let entering = (0..eligible).rev().find(|&j| self.d[j].is_negative());
            let Some(j) = entering else {
                return Ok(None);
            };
            // Smallest ratio rhs / a over positive a, ties to the largest basic index.
            let mut best: Option<usize> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][j];
                if !a.is_positive() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(bi) => {
                        let lhs = self.t[i][self.cols].mul(&self.t[bi][j]).ok_or(Overflow)?;
                        let rhs = self.t[bi][self.cols].mul(a).ok_or(Overflow)?;
                        if lhs < rhs || (lhs == rhs && self.basis[i] > self.basis[bi]) {
                            Some(i)
                        } else {
                            Some(bi)
                        }
                    }
                };
            }
            match best {
                None => return Ok(Some(j)),
                Some(r) => self.pivot(r, j)?,
            }
        }
    }
}

/// Final tableau data in big integers, all scaled by `den`.
enum Raw {
    /// Scaled phase I reduced costs of the artificial columns.
    Infeasible { art: Vec<BigInt>, den: BigInt },
    /// Scaled entries of the unbounded column on each basic row.
    Unbounded {
        j: usize,
        basis: Vec<usize>,
        col: Vec<BigInt>,
        den: BigInt,
    },
    /// Scaled basic values and phase II reduced costs of the artificials.
    Optimal {
        basis: Vec<usize>,
        rhs: Vec<BigInt>,
        art: Vec<BigInt>,
        den: BigInt,
    },
}

fn simplex_core<E: Entry>(t: &[Vec<BigInt>], c: &[BigInt]) -> std::result::Result<Raw, Overflow> {
    let m = t.len();
    let k = c.len();
    let cols = k + m;
    let conv = |x: &BigInt| E::from_big(x).ok_or(Overflow);
    let t: Vec<Vec<E>> = t
        .iter()
        .map(|row| row.iter().map(conv).collect::<std::result::Result<_, _>>())
        .collect::<std::result::Result<_, _>>()?;
    let c: Vec<E> = c.iter().map(conv).collect::<std::result::Result<_, _>>()?;
    let big_den = |tab: &Tableau<E>| tab.den.to_big();

    // Phase I: minimize the sum of artificials.
    let mut d = vec![E::zero(); cols + 1];
    for j in (0..k).chain(std::iter::once(cols)) {
        let mut acc = E::zero();
        for row in &t {
            acc = acc.sub(&row[j]).ok_or(Overflow)?;
        }
        d[j] = acc;
    }
    let mut tab = Tableau {
        t,
        d,
        den: conv(&BigInt::one())?,
        basis: (k..cols).collect(),
        cols,
    };
    let phase_one = tab.run(k)?;
    debug_assert!(phase_one.is_none(), "phase one is bounded below by zero");

    if tab.d[cols].is_negative() {
        let art = (0..m).map(|i| tab.d[k + i].to_big()).collect();
        return Ok(Raw::Infeasible {
            art,
            den: big_den(&tab),
        });
    }

    // Drive artificials out of the basis where possible; rows where this
    // fails are redundant and keep their artificial at zero.
    for r in 0..m {
        if tab.basis[r] >= k {
            if let Some(j) = (0..k).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j)?;
            }
        }
    }

    // Phase II costs: c on structural columns, zero on artificials, scaled
    // by `den` like every other row.
    let mut d = vec![E::zero(); cols + 1];
    for (j, dj) in d.iter_mut().enumerate() {
        let mut acc = if j < k {
            tab.den.mul(&c[j]).ok_or(Overflow)?
        } else {
            E::zero()
        };
        for (i, &bi) in tab.basis.iter().enumerate() {
            if bi < k && !c[bi].is_zero() && !tab.t[i][j].is_zero() {
                acc = acc
                    .sub(&c[bi].mul(&tab.t[i][j]).ok_or(Overflow)?)
                    .ok_or(Overflow)?;
            }
        }
        *dj = acc;
    }
    tab.d = d;

    if let Some(j) = tab.run(k)? {
        let col = tab.t.iter().map(|row| row[j].to_big()).collect();
        return Ok(Raw::Unbounded {
            j,
            basis: tab.basis.clone(),
            col,
            den: big_den(&tab),
        });
    }
    Ok(Raw::Optimal {
        basis: tab.basis.clone(),
        rhs: tab.t.iter().map(|row| row[cols].to_big()).collect(),
        art: (0..m).map(|i| tab.d[k + i].to_big()).collect(),
        den: big_den(&tab),
    })
}

/// Integer multiple of `xs` and the positive factor used.
fn scale_to_integers(xs: &[&Rational]) -> (Vec<BigInt>, BigInt) {
    let l = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = xs.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    (ints, l)
}

fn standard_simplex(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Standard {
    let m = a.len();
    let k = c.len();

    // Row i is multiplied by `row_scale[i]` (sign included) so that it is
    // integral with a nonnegative right-hand side; artificials are appended.
    let mut row_scale = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let entries: Vec<&Rational> = a[i].iter().chain(std::iter::once(&b[i])).collect();
        let (mut row, mut l) = scale_to_integers(&entries);
        if b[i].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            l = -l;
        }
        let rhs = row.pop().expect("rhs entry");
        row.extend((0..m).map(|r| {
            if r == i {
                BigInt::one()
            } else {
                <BigInt as Zero>::zero()
            }
        }));
        row.push(rhs);
        t.push(row);
        row_scale.push(l);
    }
    let (c_int, cost_scale) = scale_to_integers(&c.iter().collect::<Vec<_>>());

    let raw = match simplex_core::<i128>(&t, &c_int) {
        Ok(raw) => raw,
        Err(Overflow) => match simplex_core::<BigInt>(&t, &c_int) {
            Ok(raw) => raw,
            Err(Overflow) => unreachable!("big integers do not overflow"),
        },
    };
    match raw {
        Raw::Infeasible { art, den } => {
            // Artificial reduced cost is 1 - u_i in the scaled rows.
            let u = art
                .iter()
                .zip(&row_scale)
                .map(|(x, s)| {
                    (Rational::one() - Rational::new(x.clone(), den.clone()))
                        * Rational::from_integer(s.clone())
                })
                .collect();
            Standard::Infeasible { u }
        }
        Raw::Unbounded { j, basis, col, den } => {
            let mut ray = vec![Rational::zero(); k];
            ray[j] = Rational::one();
            for (i, &bi) in basis.iter().enumerate() {
                if bi < k {
                    ray[bi] = -Rational::new(col[i].clone(), den.clone());
                }
            }
            Standard::Unbounded { ray }
        }
        Raw::Optimal {
            basis,
            rhs,
            art,
            den,
        } => {
            let mut z = vec![Rational::zero(); k];
            for (i, &bi) in basis.iter().enumerate() {
                if bi < k {
                    z[bi] = Rational::new(rhs[i].clone(), den.clone());
                }
            }
            // Artificial reduced cost is 0 - pi_i in the scaled rows and costs.
            let multipliers = art
                .iter()
                .zip(&row_scale)
                .map(|(x, s)| -Rational::new(x * s, &den * &cost_scale))
                .collect();
            Standard::Optimal { z, multipliers }
        }
    }
}

/// Row of the normalized primal `min c.x, a.x >= b` (or `= b`).
struct NormRow<'a> {
    coeffs: &'a [Rational],
    negate: bool,
    rhs: Rational,
    equality: bool,
}

impl NormRow<'_> {
    fn coeff(&self, j: usize) -> Rational {
        if self.negate {
            -&self.coeffs[j]
        } else {
            self.coeffs[j].clone()
        }
    }
}

/// Solves `lp` exactly. Deterministic: pivoting depends only on the input order.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let n = lp.num_vars();
    let maximize = lp.direction == Direction::Maximize;
    let c: Vec<Rational> = if maximize {
        lp.objective.iter().map(|x| -x).collect()
    } else {
        lp.objective.clone()
    };
    let rows: Vec<NormRow> = lp
        .constraints
        .iter()
        .map(|con| NormRow {
            coeffs: &con.coeffs,
            negate: con.sense == Sense::Le,
            rhs: if con.sense == Sense::Le {
                -&con.rhs
            } else {
                con.rhs.clone()
            },
            equality: con.sense == Sense::Eq,
        })
        .collect();

    // Presolve: drop rows with no coefficients that hold trivially, and
    // repeated rows (keeping the largest right-hand side of `>=` copies).
    // Dropped rows get a zero multiplier.
    let mut active: Vec<usize> = Vec::new();
    let mut seen: HashMap<(Vec<Rational>, bool), usize> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        let key: Vec<Rational> = (0..n).map(|j| r.coeff(j)).collect();
        if key.iter().all(Zero::is_zero)
            && (r.rhs.is_zero() || (!r.equality && r.rhs.is_negative()))
        {
            continue;
        }
        match seen.get(&(key.clone(), r.equality)) {
            Some(&slot) if !r.equality => {
                if r.rhs > rows[active[slot]].rhs {
                    active[slot] = i;
                }
            }
            Some(&slot) if rows[active[slot]].rhs == r.rhs => {}
            _ => {
                seen.insert((key, r.equality), active.len());
                active.push(i);
            }
        }
    }

    // Dual columns: one per row, plus a mirrored one for equality rows.
    let mut col_row = Vec::new();
    let mut col_sign = Vec::new();
    for (i, r) in active.iter().map(|&i| (i, &rows[i])) {
        col_row.push(i);
        col_sign.push(false);
        if r.equality {
            col_row.push(i);
            col_sign.push(true);
        }
    }
    let k = col_row.len();
    let dual_matrix: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            (0..k)
                .map(|col| {
                    let v = rows[col_row[col]].coeff(j);
                    if col_sign[col] {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let dual_cost: Vec<Rational> = (0..k)
        .map(|col| {
            let b = &rows[col_row[col]].rhs;
            if col_sign[col] {
                b.clone()
            } else {
                -b
            }
        })
        .collect();
    let collapse = |z: &[Rational]| -> Vec<Rational> {
        let mut y = vec![Rational::zero(); rows.len()];
        for (col, val) in z.iter().enumerate() {
            if col_sign[col] {
                y[col_row[col]] -= val;
            } else {
                y[col_row[col]] += val;
            }
        }
        y
    };
    // Dual multipliers of the normalized rows back to the caller's rows.
    let report_dual = |y: Vec<Rational>, flip_for_max: bool| -> Vec<Rational> {
        y.into_iter()
            .zip(&rows)
            .map(|(v, r)| {
                let v = if r.negate { -v } else { v };
                if flip_for_max && maximize {
                    -v
                } else {
                    v
                }
            })
            .collect()
    };

    let zero_obj = vec![Rational::zero(); n];
    match standard_simplex(&dual_matrix, &c, &dual_cost) {
        Standard::Optimal { z, multipliers } => {
            let primal: Vec<Rational> = multipliers.into_iter().map(|x| -x).collect();
            let value = lp.objective_value(&primal);
            let dual = report_dual(collapse(&z), true);
            Ok(LpResult::Optimal {
                value,
                primal,
                dual,
            })
        }
        Standard::Unbounded { ray } => Ok(LpResult::Infeasible {
            farkas: report_dual(collapse(&ray), false),
        }),
        Standard::Infeasible { u } => {
            let ray: Vec<Rational> = u.into_iter().map(|x| -x).collect();
            match standard_simplex(&dual_matrix, &zero_obj, &dual_cost) {
                Standard::Unbounded { ray: r } => Ok(LpResult::Infeasible {
                    farkas: report_dual(collapse(&r), false),
                }),
                Standard::Optimal { multipliers, .. } => {
                    let point = multipliers.into_iter().map(|x| -x).collect();
                    Ok(LpResult::Unbounded { point, ray })
                }
                Standard::Infeasible { .. } => {
                    unreachable!("y = 0 is feasible for the homogeneous dual")
                }
            }
        }
    }
}

/// Why a claimed LP outcome failed exact verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("vector has wrong length")]
    Length,
    #[error("primal point violates row {0}")]
    PrimalInfeasible(String),
    #[error("objective value does not match the primal point")]
    ObjectiveMismatch,
    #[error("dual multiplier of row {0} has the wrong sign")]
    DualSign(String),
    #[error("dual combination of rows does not reproduce the required vector")]
    DualCombination,
    #[error("duality gap is nonzero")]
    DualityGap,
    #[error("complementary slackness fails on row {0}")]
    Slackness(String),
    #[error("Farkas certificate does not prove infeasibility")]
    Farkas,
    #[error("ray is not an improving recession direction")]
    Ray,
}

fn check_sign(row: &Constraint, y: &Rational, maximize: bool) -> bool {
    let nonneg_expected = match row.sense {
        Sense::Ge => !maximize,
        Sense::Le => maximize,
        Sense::Eq => return true,
    };
    if nonneg_expected {
        !y.is_negative()
    } else {
        !y.is_positive()
    }
}

/// Verifies an [`LpResult`] against `lp` using exact arithmetic only.
pub fn check_result(
    lp: &LinearProgram,
    result: &LpResult,
) -> std::result::Result<(), CertificateError> {
    let n = lp.num_vars();
    let maximize = lp.direction == Direction::Maximize;
    let combine = |y: &[Rational]| -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); n];
        for (row, yi) in lp.constraints.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (a, c) in acc.iter_mut().zip(&row.coeffs) {
                if !c.is_zero() {
                    *a += yi * c;
                }
            }
        }
        acc
    };
    let check_primal = |x: &[Rational]| -> std::result::Result<(), CertificateError> {
        if x.len() != n {
            return Err(CertificateError::Length);
        }
        for row in &lp.constraints {
            let lhs = dot(&row.coeffs, x);
            let ok = match row.sense {
                Sense::Ge => lhs >= row.rhs,
                Sense::Le => lhs <= row.rhs,
                Sense::Eq => lhs == row.rhs,
            };
            if !ok {
                return Err(CertificateError::PrimalInfeasible(row.name.clone()));
            }
        }
        Ok(())
    };

    match result {
        LpResult::Optimal {
            value,
            primal,
            dual,
        } => {
            check_primal(primal)?;
            if dual.len() != lp.constraints.len() {
                return Err(CertificateError::Length);
            }
            if &lp.objective_value(primal) != value {
                return Err(CertificateError::ObjectiveMismatch);
            }
            for (row, y) in lp.constraints.iter().zip(dual) {
                if !check_sign(row, y, maximize) {
                    return Err(CertificateError::DualSign(row.name.clone()));
                }
            }
            if combine(dual) != lp.objective {
                return Err(CertificateError::DualCombination);
            }
            let dual_value: Rational = lp
                .constraints
                .iter()
                .zip(dual)
                .map(|(r, y)| &r.rhs * y)
                .sum();
            if &dual_value != value {
                return Err(CertificateError::DualityGap);
            }
            for (row, y) in lp.constraints.iter().zip(dual) {
                if !y.is_zero() && dot(&row.coeffs, primal) != row.rhs {
                    return Err(CertificateError::Slackness(row.name.clone()));
                }
            }
            Ok(())
        }
        LpResult::Infeasible { farkas } => {
            if farkas.len() != lp.constraints.len() {
                return Err(CertificateError::Length);
            }
            for (row, y) in lp.constraints.iter().zip(farkas) {
                if !check_sign(row, y, false) {
                    return Err(CertificateError::DualSign(row.name.clone()));
                }
            }
            if combine(farkas).iter().any(|x| !x.is_zero()) {
                return Err(CertificateError::DualCombination);
            }
            let bty: Rational = lp
                .constraints
                .iter()
                .zip(farkas)
                .map(|(r, y)| &r.rhs * y)
                .sum();
            if !bty.is_positive() {
                return Err(CertificateError::Farkas);
            }
            Ok(())
        }
        LpResult::Unbounded { point, ray } => {
            check_primal(point)?;
            if ray.len() != n {
                return Err(CertificateError::Length);
            }
            for row in &lp.constraints {
                let ad = dot(&row.coeffs, ray);
                let ok = match row.sense {
                    Sense::Ge => !ad.is_negative(),
                    Sense::Le => !ad.is_positive(),
                    Sense::Eq => ad.is_zero(),
                };
                if !ok {
                    return Err(CertificateError::Ray);
                }
            }
            let cd = lp.objective_value(ray);
            let improving = if maximize {
                cd.is_positive()
            } else {
                cd.is_negative()
            };
            if !improving {
                return Err(CertificateError::Ray);
            }
            Ok(())
        }
    }
}
