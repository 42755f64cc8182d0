//! The built-in invariant suite behind `countq selftest`.
//!
//! Every check is deterministic (seeded RNG) and exact; a failure names the
//! violated property. The quick subset stays under ten seconds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebraic_converse::{
    acceptance_probability, decompose_amplitude, qap_decide, simulate_field, sqrt2_field_circuit,
    AcceptPattern, FieldCircuit,
};
use crate::bits::BitString;
use crate::constructions::{
    self, rational_law_constant, run_gni, run_rational, run_sqrt2, RunOptions, Variant,
};
use crate::exact_scalar::{
    Amplitude, ExactScalar, FieldElement, NumberFieldSpec, RootTwoScalar, ScalarRep,
};
use crate::gap_oracle::{families, Graph, WitnessPredicate};
use crate::state_vector::{
    matrix_is_unitary, BasisState, ControlFn, Gate1, Layer, ReversibleOracle, SparseState,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (&'static str, fn(bool) -> Result<String, String>);

const CHECKS: &[Check] = &[
    ("scalar ring axioms", check_ring_axioms),
    ("canonical zero test", check_canonical_zero),
    ("conjugation involution", check_conjugation),
    ("structure constants vs minimal polynomial", check_presentations_agree),
    ("scan rule involution", check_scan_involution),
    ("flag-mix orthogonality", check_flag_mix),
    ("sqrt2 amplitude law", check_sqrt2_law),
    ("rational amplitude law", check_rational_law),
    ("graph pairs vs permutation search", check_graph_pairs),
    ("decomposition reconstruction", check_decomposition),
    ("qap decision routes agree", check_qap_routes),
    ("high-precision decision", check_high_precision),
];

pub fn run_selftest(quick: bool) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, f)| match f(quick) {
            Ok(detail) => CheckResult {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckResult {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}

fn rand_ratio(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

fn rand_roottwo(rng: &mut ChaCha8Rng) -> RootTwoScalar {
    RootTwoScalar::new(
        rng.gen_range(-20i64..=20),
        rng.gen_range(-20i64..=20),
        rng.gen_range(0u32..=4),
    )
}

fn check_ring_axioms(quick: bool) -> Result<String, String> {
    let rounds = if quick { 100 } else { 400 };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = NumberFieldSpec::sqrt2();
    let mut checked = 0usize;
    for _ in 0..rounds {
        let (a, b, c) = (
            rand_roottwo(&mut rng),
            rand_roottwo(&mut rng),
            rand_roottwo(&mut rng),
        );
        axioms(&a, &b, &c).map_err(|e| format!("sqrt2 ring: {e}"))?;
        let (a, b, c) = (
            rand_ratio(&mut rng),
            rand_ratio(&mut rng),
            rand_ratio(&mut rng),
        );
        axioms(&a, &b, &c).map_err(|e| format!("rationals: {e}"))?;
        let fe = |rng: &mut ChaCha8Rng| {
            FieldElement::new(spec.clone(), vec![rand_ratio(rng), rand_ratio(rng)]).unwrap()
        };
        let (a, b, c) = (fe(&mut rng), fe(&mut rng), fe(&mut rng));
        axioms(&a, &b, &c).map_err(|e| format!("field elements: {e}"))?;
        checked += 3;
    }
    Ok(format!("{checked} random triples, all axioms exact"))
}

fn axioms<A: Amplitude>(a: &A, b: &A, c: &A) -> Result<(), String> {
    let add = |x: &A, y: &A| x.try_add(y).map_err(|e| e.to_string());
    let mul = |x: &A, y: &A| x.try_mul(y).map_err(|e| e.to_string());
    if add(&add(a, b)?, c)? != add(a, &add(b, c)?)? {
        return Err("associativity of + failed".into());
    }
    if mul(&mul(a, b)?, c)? != mul(a, &mul(b, c)?)? {
        return Err("associativity of * failed".into());
    }
    if mul(a, b)? != mul(b, a)? {
        return Err("commutativity of * failed".into());
    }
    let lhs = mul(a, &add(b, c)?)?;
    let rhs = add(&mul(a, b)?, &mul(a, c)?)?;
    if lhs != rhs {
        return Err("distributivity failed".into());
    }
    Ok(())
}

fn check_canonical_zero(quick: bool) -> Result<String, String> {
    let rounds = if quick { 200 } else { 1000 };
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..rounds {
        let a = rand_roottwo(&mut rng);
        let b = rand_roottwo(&mut rng);
        let diff = a.try_sub(&b).map_err(|e| e.to_string())?;
        if Amplitude::is_zero(&diff) != (a == b) {
            return Err(format!("x-y zero test disagrees with equality: {a} vs {b}"));
        }
    }
    if RootTwoScalar::new(1, 0, 200).is_zero() {
        return Err("2^-200 compared equal to zero".into());
    }
    Ok(format!("{rounds} random pairs, zero iff identical"))
}

fn check_conjugation(quick: bool) -> Result<String, String> {
    let rounds = if quick { 100 } else { 400 };
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let spec = NumberFieldSpec::gaussian();
    for _ in 0..rounds {
        let x = FieldElement::new(spec.clone(), vec![rand_ratio(&mut rng), rand_ratio(&mut rng)])
            .unwrap();
        if x.conj().conj() != x {
            return Err(format!("conj not an involution at {x}"));
        }
        let n = Amplitude::norm_sq(&x);
        if n.conj() != n {
            return Err(format!("norm_sq not fixed by conj at {x}"));
        }
    }
    Ok(format!("{rounds} elements, involution and fixed norms"))
}

fn check_presentations_agree(quick: bool) -> Result<String, String> {
    let rounds = if quick { 100 } else { 400 };
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let power = NumberFieldSpec::sqrt2();
    let q = |n: i64| BigRational::from_integer(n.into());
    let table = NumberFieldSpec::structure_constants(
        vec![q(-2), q(0), q(1)],
        vec![
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            vec![vec![q(0), q(1)], vec![q(2), q(0)]],
        ],
    )
    .map_err(|e| e.to_string())?;
    for _ in 0..rounds {
        let coords_a = vec![rand_ratio(&mut rng), rand_ratio(&mut rng)];
        let coords_b = vec![rand_ratio(&mut rng), rand_ratio(&mut rng)];
        let pa = FieldElement::new(power.clone(), coords_a.clone()).unwrap();
        let pb = FieldElement::new(power.clone(), coords_b.clone()).unwrap();
        let ta = FieldElement::new(table.clone(), coords_a).unwrap();
        let tb = FieldElement::new(table.clone(), coords_b).unwrap();
        let via_poly = pa.try_mul(&pb).map_err(|e| e.to_string())?;
        let via_table = ta.try_mul(&tb).map_err(|e| e.to_string())?;
        if via_poly.coeffs() != via_table.coeffs() {
            return Err("presentations multiply differently".into());
        }
    }
    Ok(format!("{rounds} products agree across presentations"))
}

fn check_scan_involution(quick: bool) -> Result<String, String> {
    let max_m = if quick { 6 } else { 8 };
    let mut states = 0usize;
    for m in 1..=max_m {
        for value in 0u64..(1 << m) {
            let basis = BasisState::from_bitstring(
                &BitString::from_len_value(m, value).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            let start = SparseState::initial_state(basis, RootTwoScalar::one());
            let mut s = start.clone();
            for _ in 0..2 {
                for q in 0..m {
                    s = s
                        .apply_gate1(&constructions::hadamard_gate(q))
                        .map_err(|e| e.to_string())?;
                }
            }
            if s != start {
                return Err(format!("scan twice moved |{basis}>"));
            }
            states += 1;
        }
    }
    Ok(format!("{states} basis states return exactly"))
}

fn check_flag_mix(_quick: bool) -> Result<String, String> {
    let rows = constructions::flag_mix_rows();
    let as_vec: Vec<Vec<BigRational>> = rows.iter().map(|r| r.to_vec()).collect();
    if !matrix_is_unitary(&as_vec) {
        return Err("published flag-mix rows are not orthogonal".into());
    }
    let a = constructions::rotation_a(0);
    let b = constructions::rotation_b(1);
    let gate = constructions::flag_mix_gate(0, 1).map_err(|e| e.to_string())?;
    for value in 0u64..4 {
        let basis = BasisState::from_bitstring(
            &BitString::from_len_value(2, value).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let start = SparseState::initial_state(basis, BigRational::one());
        let via_gate = start.apply_gate2(&gate).map_err(|e| e.to_string())?;
        let via_ab = start
            .apply_gate1(&a)
            .map_err(|e| e.to_string())?
            .apply_gate1(&b)
            .map_err(|e| e.to_string())?;
        if via_gate != via_ab {
            return Err(format!("flag mix disagrees with A then B on |{basis}>"));
        }
    }
    Ok("rows orthogonal; transpose factors as A (x) B".into())
}

fn family_suite(n: usize, m: usize) -> Vec<WitnessPredicate> {
    let mut preds = vec![
        families::constant(n, m, true),
        families::constant(n, m, false),
        families::and_all(n, m),
        families::or_all(n, m),
        families::parity(n, m),
        families::majority(n, m),
    ];
    if m >= 2 {
        preds.push(families::xor_pair(n, m));
    }
    preds.push(families::random(n, m, 12, (n * 31 + m) as u64));
    preds
}

fn check_sqrt2_law(quick: bool) -> Result<String, String> {
    let max_m = if quick { 6 } else { 9 };
    let opts = RunOptions::default();
    let mut runs = 0usize;
    let mut zeros = 0usize;
    for m in 1..=max_m {
        for n in [0usize, 2] {
            let x = BitString::from_len_value(n, 0b10 & ((1 << n) - 1)).unwrap();
            for pred in family_suite(n, m) {
                // run_sqrt2 asserts amplitude == -gap*sqrt2/2^m internally
                let r = run_sqrt2(&pred, &x, &opts).map_err(|e| e.to_string())?;
                let gv = r.gap_crosscheck.expect("crosscheck on by default");
                if r.accepting_amplitude.is_zero() != (gv.gap == 0) {
                    return Err("amplitude zero but gap nonzero (or vice versa)".into());
                }
                let expected_prob = ExactScalar::RootTwo(RootTwoScalar::new(
                    BigInt::from(gv.gap) * BigInt::from(gv.gap),
                    0,
                    2 * m as u32 - 1,
                ));
                if r.acceptance_probability != expected_prob {
                    return Err(format!("probability law failed at m={m}"));
                }
                zeros += (gv.gap == 0) as usize;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs, amplitude law exact, {zeros} zero-gap"))
}

fn check_rational_law(quick: bool) -> Result<String, String> {
    let max_m = if quick { 5 } else { 8 };
    let opts = RunOptions::default();
    let mut runs = 0usize;
    for m in 1..=max_m {
        for pred in family_suite(0, m) {
            // run_rational asserts amplitude == c*(12/25)^(m+1)*gap internally
            run_rational(&pred, &BitString::empty(), &opts).map_err(|e| e.to_string())?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} runs, law exact with c = {}",
        rational_law_constant()
    ))
}

fn check_graph_pairs(quick: bool) -> Result<String, String> {
    let mut catalog: Vec<Graph> = Vec::new();
    let max_v = if quick { 3 } else { 4 };
    for v in 2..=max_v {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| ((a + 1)..v).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            if !quick && v == 4 && mask % 7 != 0 && mask != 63 {
                continue; // sample the 4-vertex graphs; the acceptance suite is exhaustive
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            catalog.push(Graph::with_edges(v, &edges).unwrap());
        }
    }
    let opts = RunOptions::default();
    let mut pairs = 0usize;
    for g1 in &catalog {
        for g2 in &catalog {
            // run_gni asserts the amplitude-zero verdict matches search
            run_gni(g1, g2, Variant::Sqrt2, 5, &opts).map_err(|e| e.to_string())?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs, verdicts agree"))
}

fn check_decomposition(quick: bool) -> Result<String, String> {
    let max_m = if quick { 3 } else { 5 };
    let opts = RunOptions::default();
    let mut amplitudes = 0usize;
    for m in 1..=max_m {
        for pred in family_suite(0, m) {
            let c = sqrt2_field_circuit(&pred, &BitString::empty()).map_err(|e| e.to_string())?;
            let run = simulate_field(&c, &opts).map_err(|e| e.to_string())?;
            for (basis, amp) in run.final_state.iter() {
                let dec =
                    decompose_amplitude(&c, &run.final_state, &basis).map_err(|e| e.to_string())?;
                let back = dec.reconstruct().map_err(|e| e.to_string())?;
                if &back != amp {
                    return Err(format!("reconstruction differs at |{basis}>"));
                }
                amplitudes += 1;
            }
        }
    }
    Ok(format!("{amplitudes} amplitudes reconstruct exactly"))
}

/// Seeded random circuits over the rational field, x^2-2, and x^2-3.
pub fn random_field_circuit(seed: u64) -> FieldCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = match rng.gen_range(0..3) {
        0 => ScalarRep::Rational,
        1 => ScalarRep::Field(NumberFieldSpec::sqrt2()),
        _ => ScalarRep::Field(NumberFieldSpec::quadratic(3).unwrap()),
    };
    let width = rng.gen_range(1..=6usize);
    let layer_count = rng.gen_range(0..=12usize);

    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let lift = |rep: &ScalarRep, r: BigRational| -> ExactScalar {
        match rep {
            ScalarRep::Rational => ExactScalar::Rational(r),
            ScalarRep::Field(spec) => ExactScalar::Field(FieldElement::from_rational(spec, r)),
            ScalarRep::RootTwo => ExactScalar::RootTwo(RootTwoScalar::one()),
        }
    };
    // catalog of exactly unitary 2x2 matrices for the representation
    let mut single_gates: Vec<[[ExactScalar; 2]; 2]> = vec![
        // X
        [
            [lift(&rep, q(0, 1)), lift(&rep, q(1, 1))],
            [lift(&rep, q(1, 1)), lift(&rep, q(0, 1))],
        ],
        // Z
        [
            [lift(&rep, q(1, 1)), lift(&rep, q(0, 1))],
            [lift(&rep, q(0, 1)), lift(&rep, q(-1, 1))],
        ],
        // A rotation
        [
            [lift(&rep, q(3, 5)), lift(&rep, q(-4, 5))],
            [lift(&rep, q(4, 5)), lift(&rep, q(3, 5))],
        ],
    ];
    if let ScalarRep::Field(spec) = &rep {
        let beta_half = FieldElement::new(
            spec.clone(),
            vec![BigRational::zero(), q(1, 2)],
        )
        .unwrap();
        let half = FieldElement::from_rational(spec, q(1, 2));
        let is_sqrt3 = spec.min_poly()[0] == q(-3, 1);
        if is_sqrt3 {
            // rotation by 30 degrees: [[b/2, -1/2], [1/2, b/2]]
            single_gates.push([
                [
                    ExactScalar::Field(beta_half.clone()),
                    ExactScalar::Field(half.neg()),
                ],
                [
                    ExactScalar::Field(half.clone()),
                    ExactScalar::Field(beta_half.clone()),
                ],
            ]);
        } else {
            // the scan rule: [[b/2, b/2], [b/2, -b/2]]
            single_gates.push([
                [
                    ExactScalar::Field(beta_half.clone()),
                    ExactScalar::Field(beta_half.clone()),
                ],
                [
                    ExactScalar::Field(beta_half.clone()),
                    ExactScalar::Field(beta_half.neg()),
                ],
            ]);
        }
    }

    let mut layers: Vec<Layer<ExactScalar>> = Vec::new();
    for _ in 0..layer_count {
        if width >= 2 && rng.gen_bool(0.25) {
            // a reversible oracle with a random truth table
            let controls_len = rng.gen_range(1..width.min(3));
            let mut qubits: Vec<usize> = (0..width).collect();
            for i in (1..qubits.len()).rev() {
                qubits.swap(i, rng.gen_range(0..=i));
            }
            let controls: Vec<usize> = qubits[..controls_len].to_vec();
            let target = qubits[controls_len];
            let table: Vec<bool> = (0..(1 << controls_len)).map(|_| rng.gen()).collect();
            layers.push(Layer::Oracle(
                ReversibleOracle::xor(controls, vec![target], ControlFn::Table(table)).unwrap(),
            ));
        } else {
            let m = single_gates[rng.gen_range(0..single_gates.len())].clone();
            let target = rng.gen_range(0..width);
            layers.push(Layer::Single(Gate1::new(m, target).unwrap()));
        }
    }

    let init_value = rng.gen_range(0..(1u64 << width));
    let initial =
        BasisState::from_bitstring(&BitString::from_len_value(width, init_value).unwrap()).unwrap();
    let accepting = AcceptPattern::new(
        (0..width)
            .map(|_| match rng.gen_range(0..3) {
                0 => Some(false),
                1 => Some(true),
                _ => None,
            })
            .collect(),
    );
    FieldCircuit {
        width,
        rep,
        layers,
        initial,
        accepting,
    }
}

fn check_qap_routes(quick: bool) -> Result<String, String> {
    let rounds = if quick { 25 } else { 100 };
    let opts = RunOptions::default();
    let mut possible = 0usize;
    for seed in 0..rounds {
        let c = random_field_circuit(seed as u64);
        let by_terms = qap_decide(&c, &opts).map_err(|e| e.to_string())?;
        let by_probability = !acceptance_probability(&c, &opts)
            .map_err(|e| e.to_string())?
            .is_zero();
        if by_terms != by_probability {
            return Err(format!("routes disagree on seed {seed}"));
        }
        possible += by_terms as usize;
    }
    Ok(format!("{rounds} circuits, routes agree ({possible} possible)"))
}

fn check_high_precision(_quick: bool) -> Result<String, String> {
    // 70 A rotations: the amplitude denominator is 5^70 (> 2^64), and the
    // value is never exactly zero
    let steps = 70usize;
    let a = constructions::rotation_a(0);
    let gate = Gate1::new(
        a.matrix().clone().map(|row| row.map(ExactScalar::Rational)),
        0,
    )
    .map_err(|e| e.to_string())?;
    let c = FieldCircuit {
        width: 1,
        rep: ScalarRep::Rational,
        layers: (0..steps).map(|_| Layer::Single(gate.clone())).collect(),
        initial: BasisState::zeros(1).map_err(|e| e.to_string())?,
        accepting: AcceptPattern::new(vec![Some(true)]),
    };
    let opts = RunOptions::default();
    if !qap_decide(&c, &opts).map_err(|e| e.to_string())? {
        return Err("a nonzero amplitude with a 5^70 denominator was called zero".into());
    }
    let run = simulate_field(&c, &opts).map_err(|e| e.to_string())?;
    let one_state = BasisState::zeros(1).map_err(|e| e.to_string())?.with_bit(0, true);
    let amp = run
        .final_state
        .amplitude_of(&one_state)
        .map_err(|e| e.to_string())?;
    let ExactScalar::Rational(value) = &amp else {
        return Err("rational circuit produced a non-rational amplitude".into());
    };
    if value.denom() <= &BigInt::from(u64::MAX) {
        return Err("test circuit denominator is not past 2^64".into());
    }
    let rendered = amp.to_decimal(30).map_err(|e| e.to_string())?;
    let oracle = long_division_digits(value, 30);
    if rendered != oracle {
        return Err(format!("rendering {rendered} != long division {oracle}"));
    }
    Ok(format!("denominator {} digits ok", value.denom().to_string().len()))
}

/// Digit-by-digit long division, an independent rendering oracle.
fn long_division_digits(v: &BigRational, digits: usize) -> String {
    let negative = v.is_negative();
    let mut numer = v.numer().abs();
    let denom = v.denom().clone();
    let int_part = &numer / &denom;
    numer -= &int_part * &denom;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    out.push('.');
    let ten = BigInt::from(10);
    for _ in 0..digits {
        numer *= &ten;
        let digit = &numer / &denom;
        numer -= &digit * &denom;
        out.push_str(&digit.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for result in run_selftest(true) {
            assert!(result.passed, "{}: {}", result.name, result.detail);
        }
    }
}
