//! Exact sparse superpositions over basis bit strings.
//!
//! Amplitudes are any `Amplitude` implementor; nothing in this module ever
//! rounds. States are value-semantic (applying a gate yields a new state),
//! zero amplitudes are pruned eagerly, and the squared norm is available as
//! an exact scalar for the per-layer conservation checks.
//!
//! Qubit ordering: qubit 0 is the leftmost character of a printed ket, so
//! state dumps sorted by raw key are in lexicographic ket order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact_scalar::Amplitude;
use crate::gap_oracle::WitnessPredicate;

/// One basis vector of a `width`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    width: usize,
    key: u64,
}

impl BasisState {
    pub const MAX_WIDTH: usize = 64;

    pub fn zeros(width: usize) -> Result<Self> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(Error::Invalid(format!(
                "register width must be 1..={}, got {width}",
                Self::MAX_WIDTH
            )));
        }
        Ok(BasisState { width, key: 0 })
    }

    pub(crate) fn from_key(width: usize, key: u64) -> Self {
        BasisState { width, key }
    }

    pub fn from_bitstring(bits: &BitString) -> Result<Self> {
        let mut s = BasisState::zeros(bits.len())?;
        for q in 0..bits.len() {
            s = s.with_bit(q, bits.get(q));
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn key(&self) -> u64 {
        self.key
    }

    fn mask(&self, q: usize) -> u64 {
        1 << (self.width - 1 - q)
    }

    pub fn bit(&self, q: usize) -> bool {
        debug_assert!(q < self.width);
        self.key & self.mask(q) != 0
    }

    pub fn with_bit(&self, q: usize, value: bool) -> Self {
        let mask = self.mask(q);
        BasisState {
            width: self.width,
            key: if value {
                self.key | mask
            } else {
                self.key & !mask
            },
        }
    }
}

impl FromStr for BasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisState::from_bitstring(&s.parse()?)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.width {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A single-qubit gate: an exactly unitary 2x2 matrix (`m[row][col]`,
/// columns are images of |0>, |1>) and a target qubit.
#[derive(Debug, Clone)]
pub struct Gate1<A> {
    m: [[A; 2]; 2],
    target: usize,
}

impl<A: Amplitude> Gate1<A> {
    pub fn new(m: [[A; 2]; 2], target: usize) -> Result<Self> {
        let rows: Vec<Vec<A>> = m.iter().map(|r| r.to_vec()).collect();
        if !matrix_is_unitary(&rows) {
            return Err(Error::NonUnitary);
        }
        Ok(Gate1 { m, target })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn matrix(&self) -> &[[A; 2]; 2] {
        &self.m
    }
}

/// A two-qubit gate: exactly unitary 4x4 matrix over the ordered pair
/// `(q1, q2)`; q1 is the high bit of the 2-bit pattern.
#[derive(Debug, Clone)]
pub struct Gate2<A> {
    m: [[A; 4]; 4],
    q1: usize,
    q2: usize,
}

impl<A: Amplitude> Gate2<A> {
    pub fn new(m: [[A; 4]; 4], q1: usize, q2: usize) -> Result<Self> {
        if q1 == q2 {
            return Err(Error::DuplicateQubit);
        }
        let rows: Vec<Vec<A>> = m.iter().map(|r| r.to_vec()).collect();
        if !matrix_is_unitary(&rows) {
            return Err(Error::NonUnitary);
        }
        Ok(Gate2 { m, q1, q2 })
    }

    pub fn qubits(&self) -> (usize, usize) {
        (self.q1, self.q2)
    }

    pub fn matrix(&self) -> &[[A; 4]; 4] {
        &self.m
    }
}

/// Exact check of `U * U^dagger == I` for a square matrix. Mixed
/// representations make a matrix non-unitary by definition.
#[allow(clippy::needless_range_loop)]
pub fn matrix_is_unitary<A: Amplitude>(rows: &[Vec<A>]) -> bool {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            let mut acc = rows[0][0].zero_like();
            for k in 0..n {
                let term = match rows[i][k].try_mul(&rows[j][k].conj()) {
                    Ok(t) => t,
                    Err(_) => return false,
                };
                acc = match acc.try_add(&term) {
                    Ok(a) => a,
                    Err(_) => return false,
                };
            }
            let ok = if i == j { acc.is_one() } else { acc.is_zero() };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// The boolean selector of a reversible oracle, evaluated on the control
/// pattern.
#[derive(Debug, Clone)]
pub enum ControlFn {
    /// A witness predicate with its classical input bound; control qubit
    /// `j` feeds witness bit `y_j`.
    Predicate { pred: WitnessPredicate, x: BitString },
    /// An explicit truth table over control patterns (controls read
    /// MSB-first in listed order).
    Table(Vec<bool>),
}

/// A bijection on basis labels: either every target bit is XORed with the
/// selector, or the selector picks one of two permutations of the target
/// patterns.
#[derive(Debug, Clone)]
pub struct ReversibleOracle {
    controls: Vec<usize>,
    targets: Vec<usize>,
    selector: ControlFn,
    action: OracleAction,
}

#[derive(Debug, Clone)]
pub enum OracleAction {
    XorAll,
    Permutation {
        when_true: Vec<u64>,
        when_false: Vec<u64>,
    },
}

impl ReversibleOracle {
    fn validate_common(
        controls: &[usize],
        targets: &[usize],
        selector: &ControlFn,
    ) -> Result<()> {
        if targets.is_empty() {
            return Err(Error::Invalid("oracle needs at least one target".into()));
        }
        for t in targets {
            if controls.contains(t) {
                return Err(Error::OverlappingOracleBits);
            }
        }
        let mut seen = targets.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() {
            return Err(Error::DuplicateQubit);
        }
        match selector {
            ControlFn::Predicate { pred, x } => {
                if pred.witness_bits() != controls.len() {
                    return Err(Error::LengthMismatch {
                        expected: pred.witness_bits(),
                        got: controls.len(),
                    });
                }
                if pred.input_bits() != x.len() {
                    return Err(Error::LengthMismatch {
                        expected: pred.input_bits(),
                        got: x.len(),
                    });
                }
            }
            ControlFn::Table(t) => {
                if controls.len() >= 32 || t.len() != 1 << controls.len() {
                    return Err(Error::Invalid(format!(
                        "truth table needs 2^{} entries, got {}",
                        controls.len(),
                        t.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// XOR form: every target bit is flipped when the selector fires.
    pub fn xor(controls: Vec<usize>, targets: Vec<usize>, selector: ControlFn) -> Result<Self> {
        Self::validate_common(&controls, &targets, &selector)?;
        Ok(ReversibleOracle {
            controls,
            targets,
            selector,
            action: OracleAction::XorAll,
        })
    }

    /// Controlled-permutation form: the selector picks which permutation of
    /// the target patterns applies.
    pub fn permutation(
        controls: Vec<usize>,
        targets: Vec<usize>,
        selector: ControlFn,
        when_true: Vec<u64>,
        when_false: Vec<u64>,
    ) -> Result<Self> {
        Self::validate_common(&controls, &targets, &selector)?;
        let size = 1u64 << targets.len();
        for perm in [&when_true, &when_false] {
            if perm.len() as u64 != size {
                return Err(Error::Invalid(format!(
                    "permutation needs {size} images"
                )));
            }
            let mut seen = vec![false; size as usize];
            for &img in perm {
                if img >= size || seen[img as usize] {
                    return Err(Error::Invalid("image list is not a permutation".into()));
                }
                seen[img as usize] = true;
            }
        }
        Ok(ReversibleOracle {
            controls,
            targets,
            selector,
            action: OracleAction::Permutation {
                when_true,
                when_false,
            },
        })
    }

    /// The two-flag update: from the 00 pattern, a firing selector writes
    /// 01 and a silent one writes 10 (swap 00<->01 resp. 00<->10).
    pub fn flag_update(
        controls: Vec<usize>,
        flag0: usize,
        flag1: usize,
        selector: ControlFn,
    ) -> Result<Self> {
        Self::permutation(
            controls,
            vec![flag0, flag1],
            selector,
            vec![1, 0, 2, 3],
            vec![2, 1, 0, 3],
        )
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .chain(&self.targets)
            .copied()
            .max()
            .unwrap_or(0)
    }

    fn fires(&self, basis: &BasisState) -> bool {
        match &self.selector {
            ControlFn::Predicate { pred, x } => {
                let mut y = 0u64;
                for (j, &c) in self.controls.iter().enumerate() {
                    y |= (basis.bit(c) as u64) << j;
                }
                let mut buf = Vec::with_capacity(pred.gates().len());
                pred.eval_raw(x.raw(), y, &mut buf)
            }
            ControlFn::Table(t) => {
                let mut idx = 0usize;
                for &c in &self.controls {
                    idx = (idx << 1) | basis.bit(c) as usize;
                }
                t[idx]
            }
        }
    }

    /// The image of one basis label under the bijection.
    pub fn map_basis(&self, basis: &BasisState) -> BasisState {
        let fires = self.fires(basis);
        match &self.action {
            OracleAction::XorAll => {
                if !fires {
                    return *basis;
                }
                let mut out = *basis;
                for &t in &self.targets {
                    out = out.with_bit(t, !out.bit(t));
                }
                out
            }
            OracleAction::Permutation {
                when_true,
                when_false,
            } => {
                let t = self.targets.len();
                let mut pattern = 0u64;
                for (j, &q) in self.targets.iter().enumerate() {
                    pattern |= (basis.bit(q) as u64) << (t - 1 - j);
                }
                let image = if fires {
                    when_true[pattern as usize]
                } else {
                    when_false[pattern as usize]
                };
                let mut out = *basis;
                for (j, &q) in self.targets.iter().enumerate() {
                    out = out.with_bit(q, (image >> (t - 1 - j)) & 1 == 1);
                }
                out
            }
        }
    }
}

/// A finite map from basis states to nonzero exact amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState<A: Amplitude> {
    width: usize,
    unit: A,
    terms: BTreeMap<u64, A>,
}

impl<A: Amplitude> SparseState<A> {
    /// The state |bits> with amplitude `unit` (the representation's 1).
    pub fn initial_state(basis: BasisState, unit: A) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(basis.key(), unit.clone());
        SparseState {
            width: basis.width(),
            unit,
            terms,
        }
    }

    pub fn empty(width: usize, unit: A) -> Self {
        SparseState {
            width,
            unit,
            terms: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The representation's 1, as supplied at construction.
    pub fn unit(&self) -> &A {
        &self.unit
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisState, &A)> + '_ {
        self.terms
            .iter()
            .map(|(k, a)| (BasisState::from_key(self.width, *k), a))
    }

    /// Stored amplitude, or the exact zero for absent basis states.
    pub fn amplitude_of(&self, c: &BasisState) -> Result<A> {
        if c.width() != self.width {
            return Err(Error::LengthMismatch {
                expected: self.width,
                got: c.width(),
            });
        }
        Ok(self
            .terms
            .get(&c.key())
            .cloned()
            .unwrap_or_else(|| self.unit.zero_like()))
    }

    /// Exact sum of `norm_sq` over all stored terms.
    pub fn total_norm_sq(&self) -> Result<A> {
        let mut acc = self.unit.zero_like();
        for a in self.terms.values() {
            acc = acc.try_add(&a.norm_sq())?;
        }
        Ok(acc)
    }

    /// Errors unless the squared norm is exactly 1.
    pub fn assert_normalized(&self) -> Result<()> {
        if self.total_norm_sq()?.is_one() {
            Ok(())
        } else {
            Err(Error::Internal(
                "state norm is not exactly 1 after a unitary layer".into(),
            ))
        }
    }

    fn check_target(&self, q: usize) -> Result<()> {
        if q >= self.width {
            Err(Error::QubitOutOfRange {
                q,
                width: self.width,
            })
        } else {
            Ok(())
        }
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.terms.len() > cap {
            Err(Error::TermCapExceeded {
                terms: self.terms.len(),
                cap,
            })
        } else {
            Ok(())
        }
    }

    fn merge(terms: &mut BTreeMap<u64, A>, key: u64, contrib: A) -> Result<()> {
        match terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(contrib);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().try_add(&contrib)?;
                *e.get_mut() = sum;
            }
        }
        Ok(())
    }

    /// Applies a single-qubit gate; prunes exact zeros afterwards.
    pub fn apply_gate1(&self, g: &Gate1<A>) -> Result<Self> {
        self.check_target(g.target())?;
        let shift = self.width - 1 - g.target();
        let mask = 1u64 << shift;
        let mut out: BTreeMap<u64, A> = BTreeMap::new();
        for (&key, amp) in &self.terms {
            let col = ((key & mask) != 0) as usize;
            for (row, matrix_row) in g.matrix().iter().enumerate() {
                let entry = &matrix_row[col];
                if entry.is_zero() {
                    continue;
                }
                let contrib = amp.try_mul(entry)?;
                let new_key = if row == 1 { key | mask } else { key & !mask };
                Self::merge(&mut out, new_key, contrib)?;
            }
        }
        out.retain(|_, a| !a.is_zero());
        Ok(SparseState {
            width: self.width,
            unit: self.unit.clone(),
            terms: out,
        })
    }

    /// Applies a two-qubit gate on the ordered pair `(q1, q2)`.
    pub fn apply_gate2(&self, g: &Gate2<A>) -> Result<Self> {
        let (q1, q2) = g.qubits();
        self.check_target(q1)?;
        self.check_target(q2)?;
        let m1 = 1u64 << (self.width - 1 - q1);
        let m2 = 1u64 << (self.width - 1 - q2);
        let mut out: BTreeMap<u64, A> = BTreeMap::new();
        for (&key, amp) in &self.terms {
            let col = ((key & m1 != 0) as usize) << 1 | (key & m2 != 0) as usize;
            for (row, matrix_row) in g.matrix().iter().enumerate() {
                let entry = &matrix_row[col];
                if entry.is_zero() {
                    continue;
                }
                let contrib = amp.try_mul(entry)?;
                let mut new_key = key & !(m1 | m2);
                if row & 0b10 != 0 {
                    new_key |= m1;
                }
                if row & 0b01 != 0 {
                    new_key |= m2;
                }
                Self::merge(&mut out, new_key, contrib)?;
            }
        }
        out.retain(|_, a| !a.is_zero());
        Ok(SparseState {
            width: self.width,
            unit: self.unit.clone(),
            terms: out,
        })
    }

    /// Carries every amplitude along the oracle's bijection. The term count
    /// and the multiset of amplitudes are invariant.
    pub fn apply_oracle(&self, o: &ReversibleOracle) -> Result<Self> {
        self.check_target(o.max_qubit())?;
        let mut out: BTreeMap<u64, A> = BTreeMap::new();
        for (&key, amp) in &self.terms {
            let basis = BasisState::from_key(self.width, key);
            let image = o.map_basis(&basis);
            if out.insert(image.key(), amp.clone()).is_some() {
                return Err(Error::Internal("oracle mapped two labels together".into()));
            }
        }
        Ok(SparseState {
            width: self.width,
            unit: self.unit.clone(),
            terms: out,
        })
    }

    /// Applies one layer with a term-cap check.
    pub fn apply_capped(&self, layer: &Layer<A>, cap: usize) -> Result<Self> {
        let next = match layer {
            Layer::Single(g) => self.apply_gate1(g)?,
            Layer::Pair(g) => self.apply_gate2(g)?,
            Layer::Oracle(o) => self.apply_oracle(o)?,
        };
        next.check_cap(cap)?;
        Ok(next)
    }

    /// Inserts one term, dropping exact zeros; builder-style, used by
    /// representation converters.
    pub fn with_term(mut self, basis: BasisState, amp: A) -> Self {
        debug_assert_eq!(basis.width(), self.width);
        if amp.is_zero() {
            self.terms.remove(&basis.key());
        } else {
            self.terms.insert(basis.key(), amp);
        }
        self
    }

    /// Ket dump, one line per term in lexicographic order, with a decimal
    /// rendering when the representation supports one.
    pub fn dump_lines(&self, digits: usize) -> Vec<String> {
        self.iter()
            .map(|(basis, amp)| match amp.to_decimal(digits) {
                Ok(dec) => format!("|{basis}> = {amp} (~ {dec})"),
                Err(_) => format!("|{basis}> = {amp}"),
            })
            .collect()
    }
}

/// One circuit layer.
#[derive(Debug, Clone)]
pub enum Layer<A> {
    Single(Gate1<A>),
    Pair(Gate2<A>),
    Oracle(ReversibleOracle),
}

impl<A: Amplitude> Layer<A> {
    pub fn describe(&self) -> String {
        match self {
            Layer::Single(g) => format!("g1 q{}", g.target()),
            Layer::Pair(g) => {
                let (a, b) = g.qubits();
                format!("g2 q{a} q{b}")
            }
            Layer::Oracle(o) => format!(
                "oracle ({} controls, {} targets)",
                o.controls().len(),
                o.targets().len()
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::RootTwoScalar;
    use num_rational::BigRational;

    fn hadamard(target: usize) -> Gate1<RootTwoScalar> {
        let h = RootTwoScalar::inv_sqrt2();
        Gate1::new(
            [
                [h.clone(), h.clone()],
                [h.clone(), -&h],
            ],
            target,
        )
        .unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn initial_state_is_a_single_unit_term() {
        let s = SparseState::initial_state(
            "000".parse().unwrap(),
            RootTwoScalar::one(),
        );
        assert_eq!(s.num_terms(), 1);
        assert!(s.total_norm_sq().unwrap().is_one());
        let s2 = SparseState::initial_state("10".parse().unwrap(), RootTwoScalar::one());
        assert!(s2
            .amplitude_of(&"10".parse().unwrap())
            .unwrap()
            .is_one());
    }

    #[test]
    fn hadamard_splits_and_recombines() {
        let s = SparseState::initial_state("0".parse().unwrap(), RootTwoScalar::one());
        let h = hadamard(0);
        let split = s.apply_gate1(&h).unwrap();
        assert_eq!(split.num_terms(), 2);
        assert_eq!(
            split.amplitude_of(&"0".parse().unwrap()).unwrap(),
            RootTwoScalar::inv_sqrt2()
        );
        assert!(split.total_norm_sq().unwrap().is_one());
        // applying the rule twice returns |0> exactly
        let back = split.apply_gate1(&h).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn hadamard_twice_fixes_one_state_too() {
        let s = SparseState::initial_state("1".parse().unwrap(), RootTwoScalar::one());
        let h = hadamard(0);
        let back = s.apply_gate1(&h).unwrap().apply_gate1(&h).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn a_rotation_on_zero() {
        let a = Gate1::new(
            [
                [ratio(3, 5), ratio(-4, 5)],
                [ratio(4, 5), ratio(3, 5)],
            ],
            0,
        )
        .unwrap();
        let s = SparseState::initial_state("0".parse().unwrap(), BigRational::from_integer(1.into()));
        let out = s.apply_gate1(&a).unwrap();
        assert_eq!(
            out.amplitude_of(&"0".parse().unwrap()).unwrap(),
            ratio(3, 5)
        );
        assert_eq!(
            out.amplitude_of(&"1".parse().unwrap()).unwrap(),
            ratio(4, 5)
        );
        assert!(out.total_norm_sq().unwrap().is_one());
    }

    #[test]
    fn non_unitary_rejected() {
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        assert!(matches!(
            Gate1::new([[one.clone(), zero], [one.clone(), one]], 0),
            Err(Error::NonUnitary)
        ));
    }

    #[test]
    fn xor_oracle_entangles() {
        // (|00> + |10>)/sqrt2 with b ^= y  ->  (|00> + |11>)/sqrt2
        let s = SparseState::initial_state("00".parse().unwrap(), RootTwoScalar::one());
        let split = s.apply_gate1(&hadamard(0)).unwrap();
        let oracle = ReversibleOracle::xor(
            vec![0],
            vec![1],
            ControlFn::Table(vec![false, true]),
        )
        .unwrap();
        let out = split.apply_oracle(&oracle).unwrap();
        assert_eq!(
            out.amplitude_of(&"11".parse().unwrap()).unwrap(),
            RootTwoScalar::inv_sqrt2()
        );
        assert!(out
            .amplitude_of(&"10".parse().unwrap())
            .unwrap()
            .is_zero());
        assert_eq!(out.num_terms(), 2);
    }

    #[test]
    fn flag_update_writes_the_verdict() {
        // |y, 00> -> |y, 01> when the predicate fires, |y, 10> otherwise
        let oracle = ReversibleOracle::flag_update(
            vec![0],
            1,
            2,
            ControlFn::Table(vec![false, true]),
        )
        .unwrap();
        let accept = SparseState::initial_state("100".parse().unwrap(), RootTwoScalar::one())
            .apply_oracle(&oracle)
            .unwrap();
        assert!(accept
            .amplitude_of(&"101".parse().unwrap())
            .unwrap()
            .is_one());
        let reject = SparseState::initial_state("000".parse().unwrap(), RootTwoScalar::one())
            .apply_oracle(&oracle)
            .unwrap();
        assert!(reject
            .amplitude_of(&"010".parse().unwrap())
            .unwrap()
            .is_one());
    }

    #[test]
    fn overlapping_oracle_bits_rejected() {
        assert!(matches!(
            ReversibleOracle::xor(vec![0], vec![0], ControlFn::Table(vec![false, true])),
            Err(Error::OverlappingOracleBits)
        ));
    }

    #[test]
    fn empty_state_norm_is_zero() {
        let s: SparseState<RootTwoScalar> = SparseState::empty(2, RootTwoScalar::one());
        assert!(s.total_norm_sq().unwrap().is_zero());
        assert!(s
            .amplitude_of(&"00".parse().unwrap())
            .unwrap()
            .is_zero());
    }
}
