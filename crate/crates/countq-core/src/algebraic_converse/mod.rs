//! Exact simulation of arbitrary circuits over a number field, amplitude
//! and probability decompositions over the field basis, and the
//! acceptance-possibility decision.
//!
//! The decision never sees a decimal: an amplitude is zero iff its rational
//! coordinate vector is zero, so "accepts with nonzero probability" is
//! decided by exact coefficient inspection. The probability decomposition
//! expresses the acceptance probability as `(1/D^t) * sum_j f_j * alpha_j`
//! over real, Q-linearly-independent field elements with integer `f_j`;
//! it is zero iff every `f_j` is zero.

mod parse;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::constructions::RunOptions;
use crate::error::{Error, Result};
use crate::exact_scalar::linalg;
use crate::exact_scalar::{
    Amplitude, ExactScalar, FieldElement, NumberFieldSpec, RootTwoScalar, ScalarRep,
};
use crate::gap_oracle::{build_gni_predicate, Graph, WitnessPredicate};
use crate::state_vector::{BasisState, ControlFn, Gate1, Layer, ReversibleOracle, SparseState};

pub use parse::{parse_circuit_file, parse_circuit_str};

/// Accepting-set predicate: one `0`/`1`/`-` constraint per qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptPattern(Vec<Option<bool>>);

impl AcceptPattern {
    pub fn new(constraints: Vec<Option<bool>>) -> Self {
        AcceptPattern(constraints)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matches(&self, basis: &BasisState) -> bool {
        debug_assert_eq!(basis.width(), self.0.len());
        self.0
            .iter()
            .enumerate()
            .all(|(q, c)| c.is_none_or(|want| basis.bit(q) == want))
    }
}

impl FromStr for AcceptPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '-' => Ok(None),
                _ => Err(Error::Invalid(format!(
                    "bad accept pattern {s:?}: expected 0/1/-"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(AcceptPattern)
    }
}

impl fmt::Display for AcceptPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                Some(false) => "0",
                Some(true) => "1",
                None => "-",
            })?;
        }
        Ok(())
    }
}

/// A gate-list circuit over one scalar representation, with an initial
/// basis state and an accepting pattern.
#[derive(Debug, Clone)]
pub struct FieldCircuit {
    pub width: usize,
    pub rep: ScalarRep,
    pub layers: Vec<Layer<ExactScalar>>,
    pub initial: BasisState,
    pub accepting: AcceptPattern,
}

impl FieldCircuit {
    pub fn validate(&self) -> Result<()> {
        if self.initial.width() != self.width {
            return Err(Error::LengthMismatch {
                expected: self.width,
                got: self.initial.width(),
            });
        }
        if self.accepting.len() != self.width {
            return Err(Error::LengthMismatch {
                expected: self.width,
                got: self.accepting.len(),
            });
        }
        for layer in &self.layers {
            let max = match layer {
                Layer::Single(g) => g.target(),
                Layer::Pair(g) => g.qubits().0.max(g.qubits().1),
                Layer::Oracle(o) => o.max_qubit(),
            };
            if max >= self.width {
                return Err(Error::QubitOutOfRange {
                    q: max,
                    width: self.width,
                });
            }
        }
        Ok(())
    }
}

/// Output of one exact circuit run.
#[derive(Debug, Clone)]
pub struct FieldRun {
    pub final_state: SparseState<ExactScalar>,
    pub transcript: Vec<String>,
    pub norm_checks: usize,
}

/// Runs the circuit layer by layer with exact amplitudes, asserting the
/// squared norm is 1 after every layer.
pub fn simulate_field(c: &FieldCircuit, opts: &RunOptions) -> Result<FieldRun> {
    c.validate()?;
    let mut state = SparseState::initial_state(c.initial, c.rep.one());
    let mut transcript = Vec::new();
    let mut norm_checks = 0;
    for (i, layer) in c.layers.iter().enumerate() {
        state = state.apply_capped(layer, opts.max_terms)?;
        state.assert_normalized()?;
        norm_checks += 1;
        if opts.trace {
            transcript.push(format!(
                "layer {}: {} terms, norm=1",
                i + 1,
                state.num_terms()
            ));
            for line in state.dump_lines(opts.digits) {
                transcript.push(format!("  {line}"));
            }
        }
    }
    Ok(FieldRun {
        final_state: state,
        transcript,
        norm_checks,
    })
}

/// Exact check of `U * U^dagger == I`.
pub fn verify_unitary<A: Amplitude>(rows: &[Vec<A>]) -> bool {
    crate::state_vector::matrix_is_unitary(rows)
}

/// Exact acceptance probability of a simulated state: the sum of `norm_sq`
/// over accepting terms. Errors when the result is not fixed by the spec's
/// conjugation (a conjugation matrix that is not a ring map).
pub fn probability_of_state(
    state: &SparseState<ExactScalar>,
    accepting: &AcceptPattern,
) -> Result<ExactScalar> {
    let mut acc = state.unit().zero_like();
    for (basis, amp) in state.iter() {
        if accepting.matches(&basis) {
            acc = acc.try_add(&amp.norm_sq())?;
        }
    }
    if acc.conj() != acc {
        return Err(Error::ImaginaryProbability);
    }
    Ok(acc)
}

/// Exact acceptance probability of a circuit.
pub fn acceptance_probability(c: &FieldCircuit, opts: &RunOptions) -> Result<ExactScalar> {
    let run = simulate_field(c, opts)?;
    probability_of_state(&run.final_state, &c.accepting)
}

/// True iff the circuit accepts with exactly nonzero probability.
///
/// Decided from the sparse final state directly: stored amplitudes are
/// nonzero coordinate vectors, so acceptance is possible iff some stored
/// term matches the accepting pattern. The summed-probability zero test is
/// the independent route and is cross-checked in the test suites, never
/// substituted here.
pub fn qap_decide(c: &FieldCircuit, opts: &RunOptions) -> Result<bool> {
    let run = simulate_field(c, opts)?;
    let possible = run
        .final_state
        .iter()
        .any(|(basis, _)| c.accepting.matches(&basis));
    Ok(possible)
}

/// An amplitude pulled apart as `(1/d^t) * sum_i f_i * beta^i` with integer
/// coefficients; `d` is fixed per circuit, `t` is the layer count.
#[derive(Debug, Clone)]
pub struct AmplitudeDecomposition {
    pub rep: ScalarRep,
    pub d: BigInt,
    pub t: usize,
    pub coefficients: Vec<BigInt>,
}

impl AmplitudeDecomposition {
    /// Rebuilds the exact amplitude from the integer data.
    pub fn reconstruct(&self) -> Result<ExactScalar> {
        let scale = BigRational::new(BigInt::one(), self.d.pow(self.t as u32));
        match &self.rep {
            ScalarRep::Rational => {
                Ok(ExactScalar::Rational(
                    BigRational::from_integer(self.coefficients[0].clone()) * scale,
                ))
            }
            ScalarRep::Field(spec) => {
                let coeffs = self
                    .coefficients
                    .iter()
                    .map(|f| BigRational::from_integer(f.clone()) * &scale)
                    .collect();
                Ok(ExactScalar::Field(FieldElement::new(spec.clone(), coeffs)?))
            }
            ScalarRep::RootTwo => Err(Error::DecompositionUnsupported(
                "sqrt2-ring circuits decompose after re-expression over the x^2-2 field".into(),
            )),
        }
    }
}

/// The per-circuit common denominator `d`: the lcm of every gate-entry
/// coordinate denominator (oracles contribute 1), times the lcm of the
/// minimal-polynomial denominators once per reduction step for power-basis
/// fields with non-integer minimal polynomials.
pub fn circuit_denominator(c: &FieldCircuit) -> Result<BigInt> {
    let mut d = BigInt::one();
    let mut fold_scalar = |s: &ExactScalar| match s {
        ExactScalar::Rational(q) => {
            d = d.lcm(q.denom());
        }
        ExactScalar::Field(e) => {
            d = d.lcm(&e.denominator_lcm());
        }
        ExactScalar::RootTwo(_) => {}
    };
    for layer in &c.layers {
        match layer {
            Layer::Single(g) => {
                for row in g.matrix() {
                    row.iter().for_each(&mut fold_scalar);
                }
            }
            Layer::Pair(g) => {
                for row in g.matrix() {
                    row.iter().for_each(&mut fold_scalar);
                }
            }
            Layer::Oracle(_) => {}
        }
    }
    if let ScalarRep::Field(spec) = &c.rep {
        if !spec.is_power_basis() {
            return Err(Error::DecompositionUnsupported(
                "decomposition needs a power-basis field spec".into(),
            ));
        }
        let mp_denoms = spec
            .min_poly()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        if !mp_denoms.is_one() {
            // each multiplication can fold the top power k-1 times
            d *= mp_denoms.pow(spec.degree() as u32 - 1);
        }
    }
    if let ScalarRep::RootTwo = &c.rep {
        return Err(Error::DecompositionUnsupported(
            "sqrt2-ring circuits decompose after re-expression over the x^2-2 field".into(),
        ));
    }
    Ok(d)
}

/// Decomposes the amplitude of `s` in an already-simulated final state.
pub fn decompose_amplitude(
    c: &FieldCircuit,
    state: &SparseState<ExactScalar>,
    s: &BasisState,
) -> Result<AmplitudeDecomposition> {
    let d = circuit_denominator(c)?;
    let t = c.layers.len();
    let scale = BigRational::from_integer(d.pow(t as u32));
    let amp = state.amplitude_of(s)?;
    let coords: Vec<BigRational> = match &amp {
        ExactScalar::Rational(q) => vec![q.clone()],
        ExactScalar::Field(e) => e.coeffs().to_vec(),
        ExactScalar::RootTwo(_) => {
            return Err(Error::DecompositionUnsupported(
                "sqrt2-ring circuits decompose after re-expression over the x^2-2 field".into(),
            ))
        }
    };
    let coefficients = coords
        .iter()
        .map(|q| {
            let scaled = q * &scale;
            if scaled.denom().is_one() {
                Ok(scaled.to_integer())
            } else {
                Err(Error::Internal(format!(
                    "amplitude coordinate {q} does not clear the denominator {d}^{t}"
                )))
            }
        })
        .collect::<Result<_>>()?;
    Ok(AmplitudeDecomposition {
        rep: c.rep.clone(),
        d,
        t,
        coefficients,
    })
}

/// Simulates the circuit and decomposes the amplitude of basis state `s`.
pub fn amplitude_decomposition(
    c: &FieldCircuit,
    s: &BasisState,
    opts: &RunOptions,
) -> Result<AmplitudeDecomposition> {
    let run = simulate_field(c, opts)?;
    decompose_amplitude(c, &run.final_state, s)
}

/// The acceptance probability as `(1/D^t) * sum_j f_j * alpha_j` over real,
/// Q-linearly-independent field elements with integer coefficients;
/// `D = d^2`. Zero iff every coefficient is zero.
#[derive(Debug, Clone)]
pub struct ProbabilityDecomposition {
    pub rep: ScalarRep,
    pub d_squared: BigInt,
    pub t: usize,
    pub basis: Vec<ExactScalar>,
    pub coefficients: Vec<BigInt>,
}

impl ProbabilityDecomposition {
    pub fn reconstruct(&self) -> Result<ExactScalar> {
        let scale = ExactScalar::Rational(BigRational::new(
            BigInt::one(),
            self.d_squared.pow(self.t as u32),
        ));
        let mut acc = self.basis[0].zero_like();
        for (alpha, f) in self.basis.iter().zip(&self.coefficients) {
            let f_scalar = match alpha {
                ExactScalar::Field(e) => ExactScalar::Field(FieldElement::from_rational(
                    e.spec(),
                    BigRational::from_integer(f.clone()),
                )),
                _ => ExactScalar::Rational(BigRational::from_integer(f.clone())),
            };
            acc = acc.try_add(&alpha.try_mul(&f_scalar)?)?;
        }
        match (&acc, &scale) {
            (ExactScalar::Field(e), ExactScalar::Rational(q)) => {
                Ok(ExactScalar::Field(e.scale(q)))
            }
            _ => acc.try_mul(&scale),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|f| f.is_zero())
    }
}

pub fn probability_decomposition(
    c: &FieldCircuit,
    opts: &RunOptions,
) -> Result<ProbabilityDecomposition> {
    let probability = acceptance_probability(c, opts)?;
    let d = circuit_denominator(c)?;
    let d_squared = &d * &d;
    let t = c.layers.len();
    let scale = BigRational::from_integer(d_squared.pow(t as u32));

    match &c.rep {
        ScalarRep::Rational => {
            let ExactScalar::Rational(p) = &probability else {
                return Err(Error::Internal("rational circuit, non-rational state".into()));
            };
            let scaled = p * &scale;
            if !scaled.denom().is_one() {
                return Err(Error::Internal(
                    "probability does not clear D^t over the rationals".into(),
                ));
            }
            Ok(ProbabilityDecomposition {
                rep: c.rep.clone(),
                d_squared,
                t,
                basis: vec![ExactScalar::Rational(BigRational::one())],
                coefficients: vec![scaled.to_integer()],
            })
        }
        ScalarRep::Field(spec) => {
            let ExactScalar::Field(p) = &probability else {
                return Err(Error::Internal("field circuit, non-field state".into()));
            };
            let (basis_vecs, coeffs) = real_basis_expansion(spec, p.coeffs())?;
            // clear denominators: f_j = x_j * D^t, rescaling the basis by
            // any residual denominator so the coefficients are integers
            let raw: Vec<BigRational> = coeffs.iter().map(|x| x * &scale).collect();
            let residual = raw
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let coefficients: Vec<BigInt> = raw
                .iter()
                .map(|q| (q * BigRational::from_integer(residual.clone())).to_integer())
                .collect();
            let inv = BigRational::new(BigInt::one(), residual);
            let basis = basis_vecs
                .into_iter()
                .map(|v| {
                    FieldElement::new(spec.clone(), v).map(|e| ExactScalar::Field(e.scale(&inv)))
                })
                .collect::<Result<_>>()?;
            Ok(ProbabilityDecomposition {
                rep: c.rep.clone(),
                d_squared,
                t,
                basis,
                coefficients,
            })
        }
        ScalarRep::RootTwo => Err(Error::DecompositionUnsupported(
            "sqrt2-ring circuits decompose after re-expression over the x^2-2 field".into(),
        )),
    }
}

/// Expresses a conjugation-fixed element over a real basis: the
/// conjugation-symmetrized basis vectors `beta^j + conj(beta^j)` (just the
/// power basis when conjugation is the identity), thinned to a maximal
/// independent set by exact elimination.
fn real_basis_expansion(
    spec: &Arc<NumberFieldSpec>,
    coords: &[BigRational],
) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let k = spec.degree();
    let candidates: Vec<Vec<BigRational>> = match spec.conjugation() {
        None => (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect(),
        Some(c) => (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| {
                        let id = if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        };
                        id + &c[i][j]
                    })
                    .collect()
            })
            .collect(),
    };
    let picked = linalg::independent_subset(&candidates);
    let basis: Vec<Vec<BigRational>> = picked.iter().map(|&j| candidates[j].clone()).collect();
    // solve sum_j x_j basis_j = coords (matrix columns are basis vectors)
    let matrix: Vec<Vec<BigRational>> = (0..k)
        .map(|row| basis.iter().map(|v| v[row].clone()).collect())
        .collect();
    let x = linalg::solve(&matrix, coords).ok_or(Error::ImaginaryProbability)?;
    Ok((basis, x))
}

/// The sqrt2 compiler's pipeline re-expressed as a field circuit over the
/// power basis of `x^2 - 2`, for cross-representation checks and file-based
/// decision runs.
pub fn sqrt2_field_circuit(pred: &WitnessPredicate, x: &BitString) -> Result<FieldCircuit> {
    let m = pred.witness_bits();
    if m == 0 {
        return Err(Error::EmptyWitness);
    }
    let spec = NumberFieldSpec::sqrt2();
    let half_beta = FieldElement::new(
        spec.clone(),
        vec![BigRational::zero(), BigRational::new(1.into(), 2.into())],
    )?;
    let h = |target: usize| -> Result<Layer<ExactScalar>> {
        let e = ExactScalar::Field(half_beta.clone());
        Ok(Layer::Single(Gate1::new(
            [
                [e.clone(), e.clone()],
                [e.clone(), e.neg()],
            ],
            target,
        )?))
    };
    let width = m + 1;
    let mut layers = Vec::with_capacity(2 * m + 2);
    for q in 0..m {
        layers.push(h(q)?);
    }
    layers.push(Layer::Oracle(ReversibleOracle::xor(
        (0..m).collect(),
        vec![m],
        ControlFn::Predicate {
            pred: pred.clone(),
            x: *x,
        },
    )?));
    for q in 0..width {
        layers.push(h(q)?);
    }
    let accepting: AcceptPattern = format!("{}1", "0".repeat(m)).parse()?;
    Ok(FieldCircuit {
        width,
        rep: ScalarRep::Field(spec),
        layers,
        initial: BasisState::zeros(width)?,
        accepting,
    })
}

/// The graph-pair decision as a field circuit: compile the graph-pair
/// predicate and lower it through `sqrt2_field_circuit`.
pub fn gni_circuit(g1: &Graph, g2: &Graph) -> Result<FieldCircuit> {
    sqrt2_field_circuit(&build_gni_predicate(g1, g2), &BitString::empty())
}

/// Embeds a sqrt2-ring scalar into the `x^2 - 2` power-basis field.
pub fn roottwo_as_field(
    s: &RootTwoScalar,
    spec: &Arc<NumberFieldSpec>,
) -> Result<FieldElement> {
    let expected = [
        BigRational::from_integer((-2).into()),
        BigRational::zero(),
        BigRational::one(),
    ];
    if !spec.is_power_basis() || spec.min_poly() != expected {
        return Err(Error::IncompatibleScalars(
            "target spec is not the x^2-2 power basis",
        ));
    }
    let (p, q) = s.to_rational_pair();
    FieldElement::new(spec.clone(), vec![p, q])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use crate::gap_oracle::families;

    fn opts() -> RunOptions {
        RunOptions::default()
    }

    #[test]
    fn empty_circuit_is_the_initial_state() {
        let spec = NumberFieldSpec::sqrt2();
        let c = FieldCircuit {
            width: 2,
            rep: ScalarRep::Field(spec),
            layers: vec![],
            initial: "10".parse().unwrap(),
            accepting: "1-".parse().unwrap(),
        };
        let run = simulate_field(&c, &opts()).unwrap();
        assert_eq!(run.final_state.num_terms(), 1);
        assert!(run
            .final_state
            .amplitude_of(&"10".parse().unwrap())
            .unwrap()
            .is_one());
        assert!(qap_decide(&c, &opts()).unwrap());
    }

    #[test]
    fn single_a_gate_probability() {
        let a = constructions::rotation_a(0);
        let m = a.matrix().clone();
        let gate = Gate1::new(
            m.map(|row| row.map(ExactScalar::Rational)),
            0,
        )
        .unwrap();
        let c = FieldCircuit {
            width: 1,
            rep: ScalarRep::Rational,
            layers: vec![Layer::Single(gate)],
            initial: "0".parse().unwrap(),
            accepting: "1".parse().unwrap(),
        };
        let p = acceptance_probability(&c, &opts()).unwrap();
        assert_eq!(p, ExactScalar::ratio(16, 25));
        // amplitude 3/5 with d=5, t=1 -> f0 = 3
        let dec = amplitude_decomposition(&c, &"0".parse().unwrap(), &opts()).unwrap();
        assert_eq!(dec.d, BigInt::from(5));
        assert_eq!(dec.t, 1);
        assert_eq!(dec.coefficients, vec![BigInt::from(3)]);
        assert_eq!(dec.reconstruct().unwrap(), ExactScalar::ratio(3, 5));
    }

    #[test]
    fn sqrt2_circuit_matches_ring_run() {
        let pred = families::constant(0, 1, true);
        let c = sqrt2_field_circuit(&pred, &BitString::empty()).unwrap();
        let run = simulate_field(&c, &opts()).unwrap();
        let amp = run
            .final_state
            .amplitude_of(&"01".parse().unwrap())
            .unwrap();
        // -1/sqrt2 = -beta/2
        let expected = roottwo_as_field(
            &RootTwoScalar::new(0, -1, 1),
            match &c.rep {
                ScalarRep::Field(s) => s,
                _ => unreachable!(),
            },
        )
        .unwrap();
        assert_eq!(amp, ExactScalar::Field(expected));
        // probability of the accepting state is exactly 1/2
        let p = probability_of_state(&run.final_state, &c.accepting).unwrap();
        let ExactScalar::Field(p) = p else { panic!() };
        assert_eq!(p.as_rational().unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn decomposition_reconstructs_every_amplitude() {
        let pred = families::parity(0, 2);
        let c = sqrt2_field_circuit(&pred, &BitString::empty()).unwrap();
        let run = simulate_field(&c, &opts()).unwrap();
        for (basis, amp) in run.final_state.iter() {
            let dec = decompose_amplitude(&c, &run.final_state, &basis).unwrap();
            assert_eq!(&dec.reconstruct().unwrap(), amp);
        }
        // absent states decompose to the zero vector
        let zero_dec = decompose_amplitude(
            &c,
            &run.final_state,
            &"111".parse().unwrap(),
        );
        if let Ok(dec) = zero_dec {
            if run
                .final_state
                .amplitude_of(&"111".parse().unwrap())
                .unwrap()
                .is_zero()
            {
                assert!(dec.coefficients.iter().all(|f| f.is_zero()));
            }
        }
    }

    #[test]
    fn probability_decomposition_zero_iff_zero() {
        for (pred, expect_zero) in [
            (families::xor_pair(0, 2), true),
            (families::constant(0, 2, true), false),
        ] {
            let c = sqrt2_field_circuit(&pred, &BitString::empty()).unwrap();
            let dec = probability_decomposition(&c, &opts()).unwrap();
            assert_eq!(dec.is_zero(), expect_zero);
            let p = acceptance_probability(&c, &opts()).unwrap();
            assert_eq!(dec.reconstruct().unwrap(), p);
            assert_eq!(p.is_zero(), expect_zero);
        }
    }

    #[test]
    fn gaussian_probability_is_conjugation_fixed() {
        let spec = NumberFieldSpec::gaussian();
        let zero = BigRational::zero();
        let one = BigRational::one();
        let i = FieldElement::new(spec.clone(), vec![zero.clone(), one.clone()]).unwrap();
        let phase = Gate1::new(
            [
                [
                    ExactScalar::Field(FieldElement::one(&spec)),
                    ExactScalar::Field(FieldElement::zero(&spec)),
                ],
                [
                    ExactScalar::Field(FieldElement::zero(&spec)),
                    ExactScalar::Field(i),
                ],
            ],
            0,
        )
        .unwrap();
        let a = constructions::rotation_a(0);
        let a_over_field = Gate1::new(
            a.matrix()
                .clone()
                .map(|row| row.map(|q| ExactScalar::Field(FieldElement::from_rational(&spec, q)))),
            0,
        )
        .unwrap();
        let c = FieldCircuit {
            width: 1,
            rep: ScalarRep::Field(spec),
            layers: vec![Layer::Single(a_over_field), Layer::Single(phase)],
            initial: "0".parse().unwrap(),
            accepting: "1".parse().unwrap(),
        };
        let p = acceptance_probability(&c, &opts()).unwrap();
        assert_eq!(p.conj(), p);
        assert_eq!(
            p,
            ExactScalar::Field(FieldElement::from_rational(
                match &c.rep {
                    ScalarRep::Field(s) => s,
                    _ => unreachable!(),
                },
                BigRational::new(16.into(), 25.into())
            ))
        );
    }

    #[test]
    fn qap_routes_agree_on_gni_circuits() {
        let t = Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p2 = Graph::with_edges(3, &[(0, 2), (1, 2)]).unwrap();
        for (g1, g2, expect) in [(&t, &p, true), (&p, &p2, false), (&t, &t, false)] {
            let c = gni_circuit(g1, g2).unwrap();
            assert_eq!(qap_decide(&c, &opts()).unwrap(), expect, "{g1} vs {g2}");
            let prob = acceptance_probability(&c, &opts()).unwrap();
            assert_eq!(!prob.is_zero(), expect);
        }
    }

    #[test]
    fn tiny_amplitudes_still_decide_possible() {
        // 2^-20-scale amplitude: H-layers over one qubit with no oracle
        let pred = families::constant(0, 1, true);
        let mut c = sqrt2_field_circuit(&pred, &BitString::empty()).unwrap();
        // repeat the pipeline 10 times; amplitudes shrink but stay nonzero
        let layers = c.layers.clone();
        for _ in 0..9 {
            c.layers.extend(layers.iter().cloned());
        }
        assert!(qap_decide(&c, &opts()).unwrap());
    }
}
