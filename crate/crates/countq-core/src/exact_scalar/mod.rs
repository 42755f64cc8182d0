//! Exact amplitude arithmetic.
//!
//! Three representations cover every amplitude in the system: plain
//! rationals, the dyadic-sqrt2 ring `(a + b*sqrt2)/2^k`, and general number
//! fields given by a minimal polynomial or structure constants. Values are
//! immutable, eagerly canonicalized, and compared structurally; `is_zero`
//! is a field comparison with no numeric threshold anywhere.

mod decimal;
mod field;
pub(crate) mod linalg;
mod root_two;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub use field::{FieldElement, FieldPresentation, NumberFieldSpec};
pub use root_two::RootTwoScalar;

use crate::error::{Error, Result};


/// The arithmetic contract shared by every amplitude representation.
///
/// `try_add`/`try_mul` fail only across mismatched representations or field
/// specs. `norm_sq` is `x * conj(x)`, the exact acceptance-probability
/// contribution of an amplitude.
pub trait Amplitude: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn try_add(&self, rhs: &Self) -> Result<Self>;
    fn try_mul(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn to_decimal(&self, digits: usize) -> Result<String>;

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    fn norm_sq(&self) -> Self {
        self.try_mul(&self.conj())
            .expect("conjugate shares the representation")
    }
}

impl Amplitude for BigRational {
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn to_decimal(&self, digits: usize) -> Result<String> {
        Ok(decimal::decimal_of_rational(self, digits))
    }
}

impl Amplitude for RootTwoScalar {
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn is_zero(&self) -> bool {
        RootTwoScalar::is_zero(self)
    }

    fn is_one(&self) -> bool {
        RootTwoScalar::is_one(self)
    }

    fn zero_like(&self) -> Self {
        RootTwoScalar::zero()
    }

    fn one_like(&self) -> Self {
        RootTwoScalar::one()
    }

    fn to_decimal(&self, digits: usize) -> Result<String> {
        if let Some(q) = self.as_rational() {
            return Ok(decimal::decimal_of_rational(&q, digits));
        }
        let (p, q) = self.to_rational_pair();
        let two = BigRational::from_integer(2.into());
        let poly = [-&two, BigRational::zero(), BigRational::one()];
        decimal::decimal_via_isolator(&[p, q], &poly, &BigRational::one(), &two, digits)
    }
}

impl Amplitude for FieldElement {
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        FieldElement::try_add(self, rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        FieldElement::try_mul(self, rhs)
    }

    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }

    fn conj(&self) -> Self {
        FieldElement::conj(self)
    }

    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }

    fn is_one(&self) -> bool {
        FieldElement::is_one(self)
    }

    fn zero_like(&self) -> Self {
        FieldElement::zero(self.spec())
    }

    fn one_like(&self) -> Self {
        FieldElement::one(self.spec())
    }

    fn to_decimal(&self, digits: usize) -> Result<String> {
        if let Some(q) = self.as_rational() {
            return Ok(decimal::decimal_of_rational(&q, digits));
        }
        let Some((lo, hi)) = self.spec().root_interval() else {
            return Err(Error::MissingRootIsolator(
                "spec has no root interval; only rational-valued elements render".into(),
            ));
        };
        decimal::decimal_via_isolator(self.coeffs(), self.spec().min_poly(), lo, hi, digits)
    }
}

/// An amplitude in any of the three representations. Arithmetic between
/// different representations (or different field specs) is an error, never
/// a coercion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    RootTwo(RootTwoScalar),
    Field(FieldElement),
}

impl ExactScalar {
    pub fn ratio(n: i64, d: i64) -> Self {
        ExactScalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn integer(n: i64) -> Self {
        ExactScalar::Rational(BigRational::from_integer(n.into()))
    }

    /// Exact rational value, when the scalar happens to lie in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            ExactScalar::Rational(q) => Some(q.clone()),
            ExactScalar::RootTwo(s) => s.as_rational(),
            ExactScalar::Field(e) => e.as_rational(),
        }
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        ExactScalar::Rational(q)
    }
}

impl From<RootTwoScalar> for ExactScalar {
    fn from(s: RootTwoScalar) -> Self {
        ExactScalar::RootTwo(s)
    }
}

impl From<FieldElement> for ExactScalar {
    fn from(e: FieldElement) -> Self {
        ExactScalar::Field(e)
    }
}

fn rep_mismatch<T>() -> Result<T> {
    Err(Error::IncompatibleScalars("representation mismatch"))
}

impl Amplitude for ExactScalar {
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => Ok(a.try_add(b)?.into()),
            (ExactScalar::RootTwo(a), ExactScalar::RootTwo(b)) => Ok(a.try_add(b)?.into()),
            (ExactScalar::Field(a), ExactScalar::Field(b)) => Ok(a.try_add(b)?.into()),
            _ => rep_mismatch(),
        }
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => Ok(a.try_mul(b)?.into()),
            (ExactScalar::RootTwo(a), ExactScalar::RootTwo(b)) => Ok(a.try_mul(b)?.into()),
            (ExactScalar::Field(a), ExactScalar::Field(b)) => Ok(a.try_mul(b)?.into()),
            _ => rep_mismatch(),
        }
    }

    fn neg(&self) -> Self {
        match self {
            ExactScalar::Rational(a) => Amplitude::neg(a).into(),
            ExactScalar::RootTwo(a) => Amplitude::neg(a).into(),
            ExactScalar::Field(a) => Amplitude::neg(a).into(),
        }
    }

    fn conj(&self) -> Self {
        match self {
            ExactScalar::Rational(a) => Amplitude::conj(a).into(),
            ExactScalar::RootTwo(a) => Amplitude::conj(a).into(),
            ExactScalar::Field(a) => Amplitude::conj(a).into(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(a) => Amplitude::is_zero(a),
            ExactScalar::RootTwo(a) => Amplitude::is_zero(a),
            ExactScalar::Field(a) => Amplitude::is_zero(a),
        }
    }

    fn is_one(&self) -> bool {
        match self {
            ExactScalar::Rational(a) => Amplitude::is_one(a),
            ExactScalar::RootTwo(a) => Amplitude::is_one(a),
            ExactScalar::Field(a) => Amplitude::is_one(a),
        }
    }

    fn zero_like(&self) -> Self {
        match self {
            ExactScalar::Rational(a) => a.zero_like().into(),
            ExactScalar::RootTwo(a) => a.zero_like().into(),
            ExactScalar::Field(a) => a.zero_like().into(),
        }
    }

    fn one_like(&self) -> Self {
        match self {
            ExactScalar::Rational(a) => a.one_like().into(),
            ExactScalar::RootTwo(a) => a.one_like().into(),
            ExactScalar::Field(a) => a.one_like().into(),
        }
    }

    fn to_decimal(&self, digits: usize) -> Result<String> {
        match self {
            ExactScalar::Rational(a) => a.to_decimal(digits),
            ExactScalar::RootTwo(a) => a.to_decimal(digits),
            ExactScalar::Field(a) => a.to_decimal(digits),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(q) => write!(f, "{q}"),
            ExactScalar::RootTwo(s) => write!(f, "{s}"),
            ExactScalar::Field(e) => write!(f, "{e}"),
        }
    }
}

/// The scalar representation a circuit runs over. Decides how scalar tokens
/// parse and what `one`/`zero` look like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarRep {
    Rational,
    RootTwo,
    Field(Arc<NumberFieldSpec>),
}

impl ScalarRep {
    pub fn one(&self) -> ExactScalar {
        match self {
            ScalarRep::Rational => BigRational::one().into(),
            ScalarRep::RootTwo => RootTwoScalar::one().into(),
            ScalarRep::Field(spec) => FieldElement::one(spec).into(),
        }
    }

    pub fn zero(&self) -> ExactScalar {
        match self {
            ScalarRep::Rational => BigRational::zero().into(),
            ScalarRep::RootTwo => RootTwoScalar::zero().into(),
            ScalarRep::Field(spec) => FieldElement::zero(spec).into(),
        }
    }

    /// Parses one whitespace-free scalar token in this representation:
    /// `p/q` (rational), `(a+b*sqrt2)/2^k` or an integer (sqrt2 ring), or
    /// `[c0,c1,...]` with rational coordinates (field element).
    pub fn parse_scalar(&self, token: &str) -> Result<ExactScalar> {
        match self {
            ScalarRep::Rational => BigRational::from_str(token)
                .map(Into::into)
                .map_err(|_| Error::Invalid(format!("bad rational {token:?}"))),
            ScalarRep::RootTwo => RootTwoScalar::from_str(token).map(Into::into),
            ScalarRep::Field(spec) => {
                let inner = token
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| {
                        Error::Invalid(format!("bad field element {token:?}: expected [c0,c1,...]"))
                    })?;
                let coeffs: Vec<BigRational> = inner
                    .split(',')
                    .map(|c| {
                        BigRational::from_str(c.trim())
                            .map_err(|_| Error::Invalid(format!("bad rational {c:?} in {token:?}")))
                    })
                    .collect::<Result<_>>()?;
                Ok(FieldElement::new(spec.clone(), coeffs)?.into())
            }
        }
    }

    /// Header form used by field-spec lines and reports.
    pub fn describe(&self) -> String {
        match self {
            ScalarRep::Rational => "rational".into(),
            ScalarRep::RootTwo => "sqrt2".into(),
            ScalarRep::Field(spec) => {
                let mut out = String::from("poly");
                for c in spec.min_poly() {
                    out.push_str(&format!(" {c}"));
                }
                if let Some((lo, hi)) = spec.root_interval() {
                    out.push_str(&format!(" root {lo} {hi}"));
                }
                if let Some(c) = spec.conjugation() {
                    out.push_str(" conj");
                    for row in c {
                        for x in row {
                            out.push_str(&format!(" {x}"));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Parses a field-spec line: `field sqrt2`, `field rational`, or
/// `field poly c0 c1 ... ck root lo hi [conj m11 ... mkk]` (rationals as
/// `p/q`). The leading `field` keyword is optional.
pub fn parse_field_spec(line: &str) -> Result<ScalarRep> {
    let mut tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.first() == Some(&"field") {
        tokens.remove(0);
    }
    let bad = |msg: &str| Error::InvalidFieldSpec(format!("{msg} in {line:?}"));
    match tokens.split_first() {
        Some((&"sqrt2", [])) => Ok(ScalarRep::RootTwo),
        Some((&"rational", [])) => Ok(ScalarRep::Rational),
        Some((&"poly", rest)) => {
            let mut rats: Vec<BigRational> = Vec::new();
            let mut it = rest.iter();
            let mut root = None;
            for tok in it.by_ref() {
                if *tok == "root" {
                    root = Some(());
                    break;
                }
                rats.push(
                    BigRational::from_str(tok).map_err(|_| bad("bad polynomial coefficient"))?,
                );
            }
            if root.is_none() {
                return Err(bad("missing root interval"));
            }
            let lo = it
                .next()
                .and_then(|t| BigRational::from_str(t).ok())
                .ok_or_else(|| bad("bad root interval"))?;
            let hi = it
                .next()
                .and_then(|t| BigRational::from_str(t).ok())
                .ok_or_else(|| bad("bad root interval"))?;
            let spec = NumberFieldSpec::power_basis(rats, lo, hi)?;
            match it.next() {
                None => Ok(ScalarRep::Field(spec)),
                Some(&"conj") => {
                    let k = spec.degree();
                    let entries: Vec<BigRational> = it
                        .map(|t| {
                            BigRational::from_str(t).map_err(|_| bad("bad conjugation entry"))
                        })
                        .collect::<Result<_>>()?;
                    if entries.len() != k * k {
                        return Err(bad("conjugation matrix needs k*k entries"));
                    }
                    let matrix: Vec<Vec<BigRational>> =
                        entries.chunks(k).map(|row| row.to_vec()).collect();
                    Ok(ScalarRep::Field(spec.with_conjugation(matrix)?))
                }
                Some(_) => Err(bad("unexpected trailing tokens")),
            }
        }
        _ => Err(bad("expected sqrt2, rational, or poly ...")),
    }
}
