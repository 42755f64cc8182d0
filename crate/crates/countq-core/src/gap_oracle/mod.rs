//! Witness predicates and exact gap evaluation.
//!
//! A gap value is the accepting-minus-rejecting witness count of a predicate,
//! halved: `gap = (A - R) / 2`. The halving is deliberate (see GapValue) and
//! every amplitude law downstream is stated in terms of this convention.

pub mod families;
mod gni;
mod graph;
mod predicate;

use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};

pub use gni::build_gni_predicate;
pub use graph::{
    count_automorphisms, count_isomorphisms, isomorphic, parse_graph, Graph,
};
pub use predicate::{
    parse_predicate, GateKind, Operand, PredGate, PredicateBuilder, WitnessPredicate,
};

/// Default ceiling on enumerable witness widths: 2^24 evaluations is
/// seconds-scale, which is the point of a brute-force oracle.
pub const DEFAULT_WITNESS_CAP: usize = 24;

/// Exact witness counts for one predicate and input.
///
/// `A + R = 2^m`, `A - R` is always even (m >= 1), and the stored gap is
/// `(A - R) / 2 = A - 2^(m-1)`. The halved convention is load-bearing: the
/// sqrt2 compiler's amplitude is `-gap * sqrt2 / 2^m` only under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GapValue {
    pub accept: u64,
    pub reject: u64,
    pub gap: i64,
}

impl GapValue {
    fn from_counts(accept: u64, total: u64) -> Self {
        let reject = total - accept;
        GapValue {
            accept,
            reject,
            gap: (accept as i64) - (total / 2) as i64,
        }
    }

    /// The raw difference `A - R` (twice the stored gap).
    pub fn difference(&self) -> i64 {
        self.accept as i64 - self.reject as i64
    }

    pub fn is_zero(&self) -> bool {
        self.gap == 0
    }
}

/// Evaluates a predicate on one (input, witness) pair.
pub fn eval_predicate(p: &WitnessPredicate, x: &BitString, y: &BitString) -> Result<bool> {
    p.eval(x, y)
}

/// Exact gap by enumerating all `2^m` witnesses, with the default cap.
pub fn gap(p: &WitnessPredicate, x: &BitString) -> Result<GapValue> {
    gap_with_cap(p, x, DEFAULT_WITNESS_CAP)
}

/// Exact gap with an explicit witness-width cap. Enumeration is split
/// across threads; the counts are integers, so the result is identical for
/// any partitioning.
pub fn gap_with_cap(p: &WitnessPredicate, x: &BitString, cap: usize) -> Result<GapValue> {
    let m = p.witness_bits();
    if m == 0 {
        return Err(Error::EmptyWitness);
    }
    if m > cap || m >= 63 {
        return Err(Error::WitnessCapExceeded { m, cap });
    }
    if x.len() != p.input_bits() {
        return Err(Error::LengthMismatch {
            expected: p.input_bits(),
            got: x.len(),
        });
    }
    let total: usize = 1 << m;
    let xr = x.raw();
    let accept: u64 = (0..total)
        .into_par_iter()
        .with_min_len(1 << 10)
        .fold(
            || (Vec::new(), 0u64),
            |(mut buf, acc), y| {
                let hit = p.eval_raw(xr, y as u64, &mut buf);
                (buf, acc + hit as u64)
            },
        )
        .map(|(_, acc)| acc)
        .sum();
    Ok(GapValue::from_counts(accept, total as u64))
}
