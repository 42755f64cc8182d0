use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of the ring Z[sqrt 2, 1/2]: the value `(a + b*sqrt2) / 2^k`.
///
/// This is the whole amplitude ring of the sqrt2 compiler, which only ever
/// mixes 0, +-1 and +-1/sqrt2. Canonical form: `k` is minimal (zero is
/// `(0,0,0)`, otherwise `a` and `b` are not both even), so equality is
/// structural and the zero test is a field comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootTwoScalar {
    a: BigInt,
    b: BigInt,
    k: u32,
}

impl RootTwoScalar {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, k: u32) -> Self {
        let mut s = RootTwoScalar {
            a: a.into(),
            b: b.into(),
            k,
        };
        s.reduce();
        s
    }

    pub fn zero() -> Self {
        RootTwoScalar::new(0, 0, 0)
    }

    pub fn one() -> Self {
        RootTwoScalar::new(1, 0, 0)
    }

    /// sqrt2 itself, `(0 + 1*sqrt2)/2^0`.
    pub fn sqrt2() -> Self {
        RootTwoScalar::new(0, 1, 0)
    }

    /// 1/sqrt2 = sqrt2/2, `(0 + 1*sqrt2)/2^1`.
    pub fn inv_sqrt2() -> Self {
        RootTwoScalar::new(0, 1, 1)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        RootTwoScalar::new(n, 0, 0)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn reduce(&mut self) {
        if self.a.is_zero() && self.b.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 && self.a.is_even() && self.b.is_even() {
            self.a /= 2;
            self.b /= 2;
            self.k -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.a.is_one() && self.b.is_zero()
    }

    /// The value as `(p, q)` with `value = p + q*sqrt2`, both rational.
    pub fn to_rational_pair(&self) -> (BigRational, BigRational) {
        let denom = BigInt::one() << self.k;
        (
            BigRational::new(self.a.clone(), denom.clone()),
            BigRational::new(self.b.clone(), denom),
        )
    }

    /// Exact rational value when the sqrt2 coefficient vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            Some(BigRational::new(self.a.clone(), BigInt::one() << self.k))
        } else {
            None
        }
    }
}

impl Add for &RootTwoScalar {
    type Output = RootTwoScalar;

    fn add(self, rhs: &RootTwoScalar) -> RootTwoScalar {
        let k = self.k.max(rhs.k);
        let la = &self.a << (k - self.k);
        let lb = &self.b << (k - self.k);
        let ra = &rhs.a << (k - rhs.k);
        let rb = &rhs.b << (k - rhs.k);
        RootTwoScalar::new(la + ra, lb + rb, k)
    }
}

impl Mul for &RootTwoScalar {
    type Output = RootTwoScalar;

    fn mul(self, rhs: &RootTwoScalar) -> RootTwoScalar {
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + 2 b1 b2 + (a1 b2 + b1 a2) s
        let a = &self.a * &rhs.a + 2 * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        RootTwoScalar::new(a, b, self.k + rhs.k)
    }
}

impl Neg for &RootTwoScalar {
    type Output = RootTwoScalar;

    fn neg(self) -> RootTwoScalar {
        RootTwoScalar {
            a: -&self.a,
            b: -&self.b,
            k: self.k,
        }
    }
}

impl Sub for &RootTwoScalar {
    type Output = RootTwoScalar;

    fn sub(self, rhs: &RootTwoScalar) -> RootTwoScalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RootTwoScalar {
            type Output = RootTwoScalar;
            fn $method(self, rhs: RootTwoScalar) -> RootTwoScalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for RootTwoScalar {
    type Output = RootTwoScalar;
    fn neg(self) -> RootTwoScalar {
        -&self
    }
}

impl fmt::Display for RootTwoScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "({}-{}*sqrt2)/2^{}", self.a, self.b.abs(), self.k)
        } else {
            write!(f, "({}+{}*sqrt2)/2^{}", self.a, self.b, self.k)
        }
    }
}

impl FromStr for RootTwoScalar {
    type Err = Error;

    /// Accepts the canonical form `(a+b*sqrt2)/2^k` (also with `-b`), the
    /// parenthesised numerator alone, or a plain integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("bad sqrt2 scalar {s:?}"));
        if !s.starts_with('(') {
            let a = BigInt::from_str(s).map_err(|_| bad())?;
            return Ok(RootTwoScalar::new(a, 0, 0));
        }
        let rest = &s[1..];
        let close = rest.find(')').ok_or_else(bad)?;
        let numer = &rest[..close];
        let tail = &rest[close + 1..];
        let k: u32 = if tail.is_empty() {
            0
        } else {
            tail.strip_prefix("/2^")
                .and_then(|t| t.parse().ok())
                .ok_or_else(bad)?
        };
        let star = numer.find("*sqrt2").ok_or_else(bad)?;
        let coeff_part = &numer[..star];
        if numer.len() != star + "*sqrt2".len() {
            return Err(bad());
        }
        // split "a+b" / "a-b" at the last sign that is not a leading sign of a
        let mut split = None;
        for (i, c) in coeff_part.char_indices().skip(1) {
            if c == '+' || c == '-' {
                split = Some(i);
            }
        }
        let i = split.ok_or_else(bad)?;
        let a = BigInt::from_str(&coeff_part[..i]).map_err(|_| bad())?;
        let b_str = &coeff_part[i..];
        let b = if let Some(tail) = b_str.strip_prefix('+') {
            BigInt::from_str(tail).map_err(|_| bad())?
        } else {
            BigInt::from_str(b_str).map_err(|_| bad())?
        };
        Ok(RootTwoScalar::new(a, b, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_inverse_cancels() {
        let x = RootTwoScalar::new(1, 1, 0);
        let y = RootTwoScalar::new(-1, -1, 0);
        assert_eq!(&x + &y, RootTwoScalar::zero());
    }

    #[test]
    fn half_sqrt2_doubles_to_sqrt2() {
        let h = RootTwoScalar::inv_sqrt2();
        assert_eq!(&h + &h, RootTwoScalar::sqrt2());
    }

    #[test]
    fn difference_of_squares() {
        let x = RootTwoScalar::new(1, 1, 0);
        let y = RootTwoScalar::new(1, -1, 0);
        assert_eq!(&x * &y, RootTwoScalar::from_integer(-1));
    }

    #[test]
    fn inv_sqrt2_squares_to_half() {
        let h = RootTwoScalar::inv_sqrt2();
        assert_eq!(&h * &h, RootTwoScalar::new(1, 0, 1));
    }

    #[test]
    fn canonical_form_reduces() {
        assert_eq!(RootTwoScalar::new(2, 4, 1), RootTwoScalar::new(1, 2, 0));
        assert_eq!(RootTwoScalar::new(0, 0, 7), RootTwoScalar::zero());
        // 2^-200 stays nonzero
        assert!(!RootTwoScalar::new(1, 0, 200).is_zero());
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            RootTwoScalar::new(0, -1, 1),
            RootTwoScalar::new(3, 2, 5),
            RootTwoScalar::zero(),
            RootTwoScalar::new(-7, 0, 2),
        ] {
            let text = s.to_string();
            assert_eq!(text.parse::<RootTwoScalar>().unwrap(), s, "{text}");
        }
        assert_eq!("5".parse::<RootTwoScalar>().unwrap(), RootTwoScalar::from_integer(5));
    }
}
