//! Exact positive-semidefiniteness test.
//!
//! The matrix is scaled to integers and eliminated with symmetric
//! fraction-free (Bareiss) steps, which keeps every intermediate entry a
//! principal minor instead of a growing fraction. The pivots reported are the
//! ordinary `LDL^T` pivots recovered from consecutive minors. A zero pivot is
//! accepted only when its whole remaining row vanishes; otherwise, or on a
//! negative pivot, a witness vector with `v^T M v < 0` is built.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::SymMatrix;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsdVerdict {
    /// Every `LDL^T` pivot is nonnegative.
    Psd { pivots: Vec<Rational> },
    /// `witness^T M witness = value < 0`.
    NotPsd {
        witness: Vec<Rational>,
        value: Rational,
    },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    pub fn witness(&self) -> Option<(&[Rational], &Rational)> {
        match self {
            PsdVerdict::Psd { .. } => None,
            PsdVerdict::NotPsd { witness, value } => Some((witness, value)),
        }
    }
}

enum Failure {
    /// The reduced pivot at `index` is negative.
    Negative { index: usize },
    /// The reduced pivot at `index` is zero but its row has a nonzero at `partner`.
    ZeroWithCoupling { index: usize, partner: usize },
}

pub fn psd_check(m: &SymMatrix) -> PsdVerdict {
    let n = m.dim();
    if n == 0 {
        return PsdVerdict::Psd { pivots: Vec::new() };
    }
    let scale = m.common_denominator();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < i {
                        BigInt::zero()
                    } else {
                        let x = m.get(i, j);
                        x.numer() * (&scale / x.denom())
                    }
                })
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    let mut pivots = Vec::with_capacity(n);
    let mut eliminated = Vec::new();
    let mut failure = None;

    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            failure = Some(Failure::Negative { index: k });
            break;
        }
        if pivot.is_zero() {
            if let Some(partner) = ((k + 1)..n).find(|&j| !a[k][j].is_zero()) {
                failure = Some(Failure::ZeroWithCoupling { index: k, partner });
                break;
            }
            pivots.push(Rational::zero());
            continue;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let row_k = &head[k];
        for (offset, row_i) in tail.iter_mut().enumerate() {
            let i = k + 1 + offset;
            let aki = &row_k[i];
            for j in i..n {
                let updated = &pivot * &row_i[j] - aki * &row_k[j];
                row_i[j] = if prev.is_one() {
                    updated
                } else {
                    updated / &prev
                };
            }
        }
        pivots.push(Rational::new(pivot.clone(), &prev * &scale));
        prev = pivot;
        eliminated.push(k);
    }

    let Some(failure) = failure else {
        return PsdVerdict::Psd { pivots };
    };

    // Remaining Schur complement entries, S_ij = a_ij / (prev * scale).
    let denom = &prev * &scale;
    let reduced = |i: usize, j: usize| -> Rational {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        Rational::new(a[i][j].clone(), denom.clone())
    };
    let (start, local) = match failure {
        Failure::Negative { index } => (index, vec![(index, Rational::one())]),
        Failure::ZeroWithCoupling { index, partner } => {
            let b = reduced(index, partner);
            let c = reduced(partner, partner);
            let s = -(c.abs() + Rational::one()) / (Rational::from_integer(BigInt::from(2)) * b);
            (index, vec![(index, s), (partner, Rational::one())])
        }
    };
    let witness = lift_witness(m, &eliminated, start, &local);
    let value = m.quad_form(&witness);
    assert!(
        value.is_negative(),
        "internal error: PSD witness does not certify negativity"
    );
    PsdVerdict::NotPsd { witness, value }
}

/// Extends a vector on the not-yet-eliminated indices to the full space so
/// that its quadratic form equals the Schur-complement form, then clears
/// denominators.
fn lift_witness(
    m: &SymMatrix,
    eliminated: &[usize],
    start: usize,
    local: &[(usize, Rational)],
) -> Vec<Rational> {
    let n = m.dim();
    let mut v = vec![Rational::zero(); n];
    for (idx, val) in local {
        debug_assert!(*idx >= start);
        v[*idx] = val.clone();
    }
    if !eliminated.is_empty() {
        // Solve M_EE z = -M_{E,R} u.
        let sub = m.principal_submatrix(eliminated);
        let rhs: Vec<Rational> = eliminated
            .iter()
            .map(|&e| {
                -local
                    .iter()
                    .map(|(r, u)| m.get(e, *r) * u)
                    .sum::<Rational>()
            })
            .collect();
        let z = solve_positive_definite(&sub, rhs);
        for (pos, &e) in eliminated.iter().enumerate() {
            v[e] = z[pos].clone();
        }
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let lcm = Rational::from_integer(lcm);
    let v: Vec<Rational> = v.into_iter().map(|x| x * &lcm).collect();
    let gcd = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    if gcd.is_zero() || gcd.is_one() {
        v
    } else {
        let g = Rational::from_integer(gcd);
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Gaussian elimination without pivoting; valid because every leading
/// principal minor of the eliminated block is positive.
fn solve_positive_definite(m: &SymMatrix, mut rhs: Vec<Rational>) -> Vec<Rational> {
    let n = m.dim();
    let mut a = m.to_rows();
    for k in 0..n {
        let p = a[k][k].clone();
        debug_assert!(p.is_positive());
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
            let delta = &f * &rhs[k];
            rhs[i] -= delta;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut s = rhs[k].clone();
        for j in (k + 1)..n {
            s -= &a[k][j] * &x[j];
        }
        x[k] = s / &a[k][k];
    }
    x
}
