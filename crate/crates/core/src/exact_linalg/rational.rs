//! Helpers around [`BigRational`]: construction, the canonical `num/den`
//! rendering used in certificates, and a rounded decimal rendering.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. Always normalized: lowest terms, positive denominator.
pub type Rational = BigRational;

/// Significant digits used by [`to_decimal`].
pub const DECIMAL_DIGITS: usize = 20;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `binom(n, k)` as an exact integer (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Canonical lossless rendering. The denominator is always printed, so
/// integers come out as `"3/1"`.
pub fn to_fraction_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"0.125"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().ok()?;
        let den: BigInt = b.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num: BigInt = digits.parse().ok()?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(num, den));
    }
    let num: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(num))
}

/// Positional decimal with [`DECIMAL_DIGITS`] significant digits, rounded
/// half-to-even, trailing zeros trimmed. For display only.
pub fn to_decimal(x: &Rational) -> String {
    to_decimal_digits(x, DECIMAL_DIGITS)
}

pub fn to_decimal_digits(x: &Rational, digits: usize) -> String {
    assert!(digits > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10);

    // Exponent e with 10^e <= a < 10^(e+1).
    let mut e: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }

    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let (q, r): (BigInt, BigInt) = scaled.numer().div_rem(scaled.denom());
    let twice_r: BigInt = &r * 2;
    let mut q = match twice_r.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    };
    let mut shift = shift;
    if q.to_string().len() > digits {
        // Rounded up to the next power of ten.
        q /= 10;
        shift -= 1;
    }

    let mut body = q.to_string();
    let out = if shift <= 0 {
        body.extend(std::iter::repeat_n('0', (-shift) as usize));
        body
    } else {
        let shift = shift as usize;
        if body.len() <= shift {
            let zeros = "0".repeat(shift - body.len());
            body = format!("0.{zeros}{body}");
        } else {
            body.insert(body.len() - shift, '.');
        }
        let trimmed = body.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    };
    if negative {
        format!("-{out}")
    } else {
        out
    }
}

/// Exact sign: -1, 0 or 1.
pub fn sign(x: &Rational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Lossy conversion for test oracles and display.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
