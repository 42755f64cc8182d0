use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{self, RatMatrix};
use crate::error::{Error, Result};

/// How the basis products of a number field are presented.
///
/// Either a power basis `1, beta, ..., beta^{k-1}` with an interval isolating
/// the real root `beta` of the minimal polynomial, or an explicit basis with
/// a structure-constant table `q[i][j][l]` giving
/// `basis_i * basis_j = sum_l q[i][j][l] * basis_l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldPresentation {
    PowerBasis {
        root_lo: BigRational,
        root_hi: BigRational,
    },
    StructureConstants {
        q: Vec<Vec<Vec<BigRational>>>,
    },
}

/// A number field Q(beta) of degree `k`, presented by a monic minimal
/// polynomial plus either a root isolator or structure constants, and an
/// optional conjugation matrix (identity when absent; required to be an
/// involution).
///
/// Irreducibility of the minimal polynomial is a caller contract and is not
/// verified here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldSpec {
    min_poly: Vec<BigRational>,
    presentation: FieldPresentation,
    conjugation: Option<RatMatrix>,
    unit: Vec<BigRational>,
}

impl NumberFieldSpec {
    /// Power-basis field: monic minimal polynomial `c0 + c1 x + ... + x^k`
    /// and a rational interval `(lo, hi)` containing exactly one real root.
    pub fn power_basis(
        min_poly: Vec<BigRational>,
        root_lo: BigRational,
        root_hi: BigRational,
    ) -> Result<Arc<Self>> {
        validate_min_poly(&min_poly)?;
        if root_lo >= root_hi {
            return Err(Error::InvalidFieldSpec(
                "root interval must satisfy lo < hi".into(),
            ));
        }
        let plo = eval_poly(&min_poly, &root_lo);
        let phi = eval_poly(&min_poly, &root_hi);
        if plo.is_zero() || phi.is_zero() || plo.is_positive() == phi.is_positive() {
            return Err(Error::AmbiguousRootIsolator(
                "minimal polynomial does not change sign over the interval".into(),
            ));
        }
        let k = min_poly.len() - 1;
        let mut unit = vec![BigRational::zero(); k];
        unit[0] = BigRational::one();
        Ok(Arc::new(NumberFieldSpec {
            min_poly,
            presentation: FieldPresentation::PowerBasis { root_lo, root_hi },
            conjugation: None,
            unit,
        }))
    }

    /// Explicit-basis field given by structure constants. Commutativity and
    /// associativity of the table are checked over all basis triples, and
    /// the multiplicative unit is solved for.
    #[allow(clippy::needless_range_loop)]
    pub fn structure_constants(
        min_poly: Vec<BigRational>,
        q: Vec<Vec<Vec<BigRational>>>,
    ) -> Result<Arc<Self>> {
        validate_min_poly(&min_poly)?;
        let k = min_poly.len() - 1;
        if q.len() != k || q.iter().any(|r| r.len() != k || r.iter().any(|c| c.len() != k)) {
            return Err(Error::InvalidFieldSpec(format!(
                "structure constants must form a {k}x{k}x{k} table"
            )));
        }
        let table = |i: usize, j: usize| -> &[BigRational] { &q[i][j] };
        for i in 0..k {
            for j in 0..k {
                if q[i][j] != q[j][i] {
                    return Err(Error::InvalidFieldSpec(format!(
                        "structure constants not commutative at ({i},{j})"
                    )));
                }
            }
        }
        // associativity: (b_i b_j) b_l == b_i (b_j b_l)
        let mul_vec = |v: &[BigRational], l: usize| -> Vec<BigRational> {
            let mut out = vec![BigRational::zero(); k];
            for (a, va) in v.iter().enumerate() {
                if va.is_zero() {
                    continue;
                }
                for (bi, qv) in table(a, l).iter().enumerate() {
                    let term = va * qv;
                    out[bi] = &out[bi] + &term;
                }
            }
            out
        };
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let left = mul_vec(table(i, j), l);
                    let mut right = vec![BigRational::zero(); k];
                    for (a, qv) in table(j, l).iter().enumerate() {
                        if qv.is_zero() {
                            continue;
                        }
                        for (bi, qb) in table(i, a).iter().enumerate() {
                            let term = qv * qb;
                            right[bi] = &right[bi] + &term;
                        }
                    }
                    if left != right {
                        return Err(Error::InvalidFieldSpec(format!(
                            "structure constants not associative at ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        // unit u: sum_i u_i q[i][j][l] = delta_{jl} for all j, l
        let mut rows = Vec::with_capacity(k * k);
        let mut rhs = Vec::with_capacity(k * k);
        for j in 0..k {
            for l in 0..k {
                rows.push((0..k).map(|i| q[i][j][l].clone()).collect());
                rhs.push(if j == l {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
        }
        let unit = linalg::solve(&rows, &rhs).ok_or_else(|| {
            Error::InvalidFieldSpec("structure constants admit no multiplicative unit".into())
        })?;
        Ok(Arc::new(NumberFieldSpec {
            min_poly,
            presentation: FieldPresentation::StructureConstants { q },
            conjugation: None,
            unit,
        }))
    }

    /// Attaches a conjugation matrix (coordinates of `conj(basis_j)` in
    /// column `j`). Must be an involution.
    pub fn with_conjugation(self: &Arc<Self>, c: RatMatrix) -> Result<Arc<Self>> {
        let k = self.degree();
        if c.len() != k || c.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidFieldSpec(format!(
                "conjugation matrix must be {k}x{k}"
            )));
        }
        if !linalg::is_identity(&linalg::mat_mul(&c, &c)) {
            return Err(Error::InvalidFieldSpec(
                "conjugation matrix is not an involution".into(),
            ));
        }
        let mut spec = (**self).clone();
        spec.conjugation = Some(c);
        Ok(Arc::new(spec))
    }

    /// The field Q(sqrt2) as a power basis over `x^2 - 2`.
    pub fn sqrt2() -> Arc<Self> {
        Self::quadratic(2).expect("x^2-2 is a valid spec")
    }

    /// Q(sqrt n) for a non-square n >= 2, power basis over `x^2 - n`.
    pub fn quadratic(n: i64) -> Result<Arc<Self>> {
        let poly = vec![
            BigRational::from_integer((-n).into()),
            BigRational::zero(),
            BigRational::one(),
        ];
        NumberFieldSpec::power_basis(
            poly,
            BigRational::one(),
            BigRational::from_integer(n.into()),
        )
    }

    /// The Gaussian-style field over `x^2 + 1` with conjugation
    /// `beta -> -beta`, presented by structure constants (there is no real
    /// root to isolate).
    pub fn gaussian() -> Arc<Self> {
        let q = |n: i64| BigRational::from_integer(n.into());
        let table = vec![
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            vec![vec![q(0), q(1)], vec![q(-1), q(0)]],
        ];
        let spec = NumberFieldSpec::structure_constants(vec![q(1), q(0), q(1)], table)
            .expect("x^2+1 table is a valid spec");
        spec.with_conjugation(vec![vec![q(1), q(0)], vec![q(0), q(-1)]])
            .expect("beta -> -beta is an involution")
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigRational] {
        &self.min_poly
    }

    pub fn presentation(&self) -> &FieldPresentation {
        &self.presentation
    }

    pub fn conjugation(&self) -> Option<&RatMatrix> {
        self.conjugation.as_ref()
    }

    /// Coordinates of the multiplicative unit over the basis.
    pub fn unit_coords(&self) -> &[BigRational] {
        &self.unit
    }

    pub fn root_interval(&self) -> Option<(&BigRational, &BigRational)> {
        match &self.presentation {
            FieldPresentation::PowerBasis { root_lo, root_hi } => Some((root_lo, root_hi)),
            FieldPresentation::StructureConstants { .. } => None,
        }
    }

    pub fn is_power_basis(&self) -> bool {
        matches!(self.presentation, FieldPresentation::PowerBasis { .. })
    }

    fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

fn validate_min_poly(min_poly: &[BigRational]) -> Result<()> {
    if min_poly.len() < 2 {
        return Err(Error::InvalidFieldSpec(
            "minimal polynomial must have degree >= 1".into(),
        ));
    }
    if !min_poly.last().unwrap().is_one() {
        return Err(Error::InvalidFieldSpec(
            "minimal polynomial must be monic".into(),
        ));
    }
    Ok(())
}

pub(crate) fn eval_poly(poly: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// An element of a number field: rational coordinates over the spec's basis.
/// Zero iff every coordinate is zero; no tolerance is involved anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: Arc<NumberFieldSpec>,
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn new(spec: Arc<NumberFieldSpec>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != spec.degree() {
            return Err(Error::Invalid(format!(
                "field element needs {} coordinates, got {}",
                spec.degree(),
                coeffs.len()
            )));
        }
        Ok(FieldElement { spec, coeffs })
    }

    pub fn zero(spec: &Arc<NumberFieldSpec>) -> Self {
        FieldElement {
            spec: spec.clone(),
            coeffs: vec![BigRational::zero(); spec.degree()],
        }
    }

    pub fn one(spec: &Arc<NumberFieldSpec>) -> Self {
        FieldElement {
            spec: spec.clone(),
            coeffs: spec.unit_coords().to_vec(),
        }
    }

    /// `q * 1` for a rational `q`.
    pub fn from_rational(spec: &Arc<NumberFieldSpec>, q: BigRational) -> Self {
        let coeffs = spec.unit_coords().iter().map(|u| u * &q).collect();
        FieldElement {
            spec: spec.clone(),
            coeffs,
        }
    }

    /// The basis element `beta` (power basis: coordinate 1).
    pub fn generator(spec: &Arc<NumberFieldSpec>) -> Result<Self> {
        if spec.degree() < 2 {
            return Err(Error::Invalid("degree-1 field has no generator".into()));
        }
        let mut coeffs = vec![BigRational::zero(); spec.degree()];
        coeffs[1] = BigRational::one();
        Ok(FieldElement {
            spec: spec.clone(),
            coeffs,
        })
    }

    pub fn spec(&self) -> &Arc<NumberFieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == self.spec.unit_coords()
    }

    fn check_spec(&self, rhs: &FieldElement) -> Result<()> {
        if self.spec.same_as(&rhs.spec) {
            Ok(())
        } else {
            Err(Error::IncompatibleScalars("field specs differ"))
        }
    }

    pub fn try_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_spec(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_spec(rhs)?;
        let k = self.spec.degree();
        let coeffs = match self.spec.presentation() {
            FieldPresentation::PowerBasis { .. } => {
                // polynomial product, then fold powers >= k via the monic
                // minimal polynomial: x^k = -(c0 + c1 x + ... + c_{k-1} x^{k-1})
                let mut prod = vec![BigRational::zero(); 2 * k - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in rhs.coeffs.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let term = a * b;
                        prod[i + j] = &prod[i + j] + &term;
                    }
                }
                let mp = self.spec.min_poly();
                for top in (k..prod.len()).rev() {
                    if prod[top].is_zero() {
                        continue;
                    }
                    let lead = std::mem::replace(&mut prod[top], BigRational::zero());
                    for i in 0..k {
                        let sub = &lead * &mp[i];
                        prod[top - k + i] = &prod[top - k + i] - &sub;
                    }
                }
                prod.truncate(k);
                prod
            }
            FieldPresentation::StructureConstants { q } => {
                let mut out = vec![BigRational::zero(); k];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in rhs.coeffs.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let ab = a * b;
                        for (l, qv) in q[i][j].iter().enumerate() {
                            if qv.is_zero() {
                                continue;
                            }
                            let term = &ab * qv;
                            out[l] = &out[l] + &term;
                        }
                    }
                }
                out
            }
        };
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn conj(&self) -> FieldElement {
        match self.spec.conjugation() {
            None => self.clone(),
            Some(c) => FieldElement {
                spec: self.spec.clone(),
                coeffs: linalg::mat_vec(c, &self.coeffs),
            },
        }
    }

    pub fn norm_sq(&self) -> FieldElement {
        self.try_mul(&self.conj())
            .expect("conjugate shares the spec")
    }

    /// Multiplies every coordinate by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Exact rational value, when the element lies in Q. For power-basis
    /// specs that means all higher coordinates vanish.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.spec.is_power_basis() {
            if self.coeffs[1..].iter().all(|c| c.is_zero()) {
                Some(self.coeffs[0].clone())
            } else {
                None
            }
        } else {
            // unit direction only: coeffs == q * unit
            let unit = self.spec.unit_coords();
            let mut ratio: Option<BigRational> = None;
            for (c, u) in self.coeffs.iter().zip(unit) {
                if u.is_zero() {
                    if !c.is_zero() {
                        return None;
                    }
                } else {
                    let r = c / u;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) if *prev == r => {}
                        Some(_) => return None,
                    }
                }
            }
            ratio.or_else(|| Some(BigRational::zero()))
        }
    }

    /// Lcm of coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}
