//! Decimal rendering of exact scalars.
//!
//! Rational values are truncated toward zero at the requested digit count.
//! Irrational values are rendered by bisecting the spec's root isolator and
//! evaluating the coordinate polynomial with interval arithmetic until the
//! truncated digits are pinned down. Rendering never feeds back into any
//! arithmetic path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::eval_poly;
use crate::error::{Error, Result};

/// Truncation of `v` toward zero with `digits` fractional digits.
pub fn decimal_of_rational(v: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = v * BigRational::from_integer(scale);
    let t = scaled.trunc().to_integer();
    format_scaled(&t, digits, v.is_negative())
}

fn format_scaled(t: &BigInt, digits: usize, negative: bool) -> String {
    let mag = t.magnitude().to_string();
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{mag}");
    }
    let (int_part, frac_part) = if mag.len() > digits {
        let split = mag.len() - digits;
        (mag[..split].to_string(), mag[split..].to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", mag, width = digits))
    };
    format!("{sign}{int_part}.{frac_part}")
}

/// Renders `sum_i coeffs[i] * beta^i` where `beta` is the unique root of
/// `min_poly` inside `(lo, hi)`. The value must be irrational (a rational
/// value would stall the bisection; callers dispatch rationals to
/// `decimal_of_rational`).
pub fn decimal_via_isolator(
    coeffs: &[BigRational],
    min_poly: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
    digits: usize,
) -> Result<String> {
    let scale = BigRational::from_integer(BigInt::from(10u32).pow(digits as u32));
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let sign_lo = eval_poly(min_poly, &lo).is_positive();

    let max_iters = 128 + 16 * digits;
    for _ in 0..max_iters {
        let (vlo, vhi) = value_interval(coeffs, &lo, &hi);
        let tlo = (&vlo * &scale).trunc().to_integer();
        let thi = (&vhi * &scale).trunc().to_integer();
        if tlo == thi {
            return Ok(format_scaled(&tlo, digits, tlo.is_negative()));
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        let pm = eval_poly(min_poly, &mid);
        if pm.is_zero() {
            return Err(Error::AmbiguousRootIsolator(
                "bisection hit a rational root; the minimal polynomial is reducible".into(),
            ));
        }
        if pm.is_positive() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Internal(
        "root bisection failed to settle the requested digits".into(),
    ))
}

/// Interval bounds of `sum_i coeffs[i] * x^i` for `x` in `[lo, hi]`.
fn value_interval(
    coeffs: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut acc_lo = BigRational::zero();
    let mut acc_hi = BigRational::zero();
    let mut pow_lo = BigRational::one();
    let mut pow_hi = BigRational::one();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            let candidates = [
                &pow_lo * lo,
                &pow_lo * hi,
                &pow_hi * lo,
                &pow_hi * hi,
            ];
            pow_lo = candidates.iter().min().unwrap().clone();
            pow_hi = candidates.iter().max().unwrap().clone();
        }
        if c.is_zero() {
            continue;
        }
        let (term_lo, term_hi) = if c.is_positive() {
            (c * &pow_lo, c * &pow_hi)
        } else {
            (c * &pow_hi, c * &pow_lo)
        };
        acc_lo += term_lo;
        acc_hi += term_hi;
    }
    (acc_lo, acc_hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_truncation() {
        assert_eq!(decimal_of_rational(&q(-1, 1), 3), "-1.000");
        assert_eq!(decimal_of_rational(&q(12, 25), 4), "0.4800");
        assert_eq!(decimal_of_rational(&q(-1, 3), 4), "-0.3333");
        assert_eq!(decimal_of_rational(&q(0, 1), 2), "0.00");
    }

    #[test]
    fn inv_sqrt2_to_six_digits() {
        // 1/sqrt2 = 0 + (1/2) * beta over x^2 - 2
        let coeffs = vec![q(0, 1), q(1, 2)];
        let poly = vec![q(-2, 1), q(0, 1), q(1, 1)];
        let s = decimal_via_isolator(&coeffs, &poly, &q(1, 1), &q(2, 1), 6).unwrap();
        assert_eq!(s, "0.707106");
    }

    #[test]
    fn negative_sqrt2_renders() {
        let coeffs = vec![q(0, 1), q(-1, 1)];
        let poly = vec![q(-2, 1), q(0, 1), q(1, 1)];
        let s = decimal_via_isolator(&coeffs, &poly, &q(1, 1), &q(2, 1), 5).unwrap();
        assert_eq!(s, "-1.41421");
    }
}
