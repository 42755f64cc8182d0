//! Exact quantum-circuit simulation with counting cross-checks.
//!
//! `countq-core` compiles witness-counting predicates into small quantum
//! circuits whose accepting amplitude equals a fixed multiple of the
//! predicate's gap (accepting minus rejecting witness count, halved), and
//! simulates arbitrary gate circuits over algebraic number fields with no
//! rounding anywhere. Because every amplitude is an exact ring element,
//! "does this circuit accept with nonzero probability?" is decidable by
//! coefficient inspection, however small the probability.
//!
//! The pieces:
//!
//! * [`exact_scalar`] — rationals, the dyadic-sqrt2 ring, and number-field
//!   elements behind one [`exact_scalar::Amplitude`] contract.
//! * [`gap_oracle`] — witness predicates, brute-force gap evaluation, and
//!   the graph-pair predicate whose gap vanishes exactly on isomorphism.
//! * [`state_vector`] — exact sparse superpositions, unitary gates, and
//!   reversible classical oracles.
//! * [`constructions`] — the sqrt2 and rational gap-to-amplitude compilers
//!   with built-in oracle cross-checks.
//! * [`algebraic_converse`] — field-circuit simulation, amplitude and
//!   probability decompositions, and the acceptance-possibility decider.
//! * [`selftest`] — the runtime invariant suite behind `countq selftest`.
//!
//! ```
//! use countq_core::bits::BitString;
//! use countq_core::constructions::{run_sqrt2, RunOptions};
//! use countq_core::gap_oracle::families;
//!
//! // AND of three witness bits: 1 accepting witness, 7 rejecting, gap -3
//! let pred = families::and_all(0, 3);
//! let report = run_sqrt2(&pred, &BitString::empty(), &RunOptions::default()).unwrap();
//! assert_eq!(report.gap_crosscheck.unwrap().gap, -3);
//! // accepting amplitude is exactly -gap * sqrt2 / 2^m = 3*sqrt2/8
//! assert_eq!(report.accepting_amplitude.to_string(), "(0+3*sqrt2)/2^3");
//! assert_eq!(report.acceptance_probability.to_string(), "(9+0*sqrt2)/2^5");
//! ```

pub mod algebraic_converse;
pub mod bits;
pub mod constructions;
pub mod error;
pub mod exact_scalar;
pub mod gap_oracle;
pub mod selftest;
pub mod state_vector;

pub use bits::BitString;
pub use error::{Error, Result};
