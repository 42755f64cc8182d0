//! Structured predicate families plus a seeded random-circuit generator.
//! These feed the amplitude-law suites and the benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::predicate::{GateKind, Operand, PredicateBuilder, WitnessPredicate};

/// All bits of `x` followed by all bits of `y`, as operands.
fn all_bits(n: usize, m: usize) -> Vec<Operand> {
    (0..n)
        .map(Operand::Input)
        .chain((0..m).map(Operand::Witness))
        .collect()
}

pub fn constant(n: usize, m: usize, value: bool) -> WitnessPredicate {
    let mut b = PredicateBuilder::new(n, m);
    let out = b.constant(value);
    b.finish(out)
}

/// AND over every input and witness bit.
pub fn and_all(n: usize, m: usize) -> WitnessPredicate {
    let mut b = PredicateBuilder::new(n, m);
    let ops = all_bits(n, m);
    let out = b.and_all(&ops);
    b.finish(out)
}

/// OR over every input and witness bit.
pub fn or_all(n: usize, m: usize) -> WitnessPredicate {
    let mut b = PredicateBuilder::new(n, m);
    let ops = all_bits(n, m);
    let out = b.or_all(&ops);
    b.finish(out)
}

/// `y0 XOR y1`; needs `m >= 2`. The canonical balanced predicate.
pub fn xor_pair(n: usize, m: usize) -> WitnessPredicate {
    assert!(m >= 2, "xor_pair needs two witness bits");
    let mut b = PredicateBuilder::new(n, m);
    let out = b.xor(Operand::Witness(0), Operand::Witness(1));
    b.finish(out)
}

/// Parity of every input and witness bit.
pub fn parity(n: usize, m: usize) -> WitnessPredicate {
    let mut b = PredicateBuilder::new(n, m);
    let ops = all_bits(n, m);
    let out = match ops.split_first() {
        None => b.constant(false),
        Some((first, rest)) => {
            let mut acc = *first;
            for op in rest {
                acc = b.xor(acc, *op);
            }
            acc
        }
    };
    b.finish(out)
}

/// Strict majority of the witness bits: popcount(y) > m/2.
///
/// Built as the threshold recurrence th(i, j) = "at least j of the first i
/// witness bits are set".
pub fn majority(n: usize, m: usize) -> WitnessPredicate {
    let mut b = PredicateBuilder::new(n, m);
    let threshold = m / 2 + 1;
    // th[j] after processing i bits; th[0] is always true
    let mut th: Vec<Operand> = Vec::with_capacity(threshold + 1);
    th.push(b.constant(true));
    for j in 1..=threshold {
        let _ = j;
        th.push(b.constant(false));
    }
    for i in 0..m {
        let bit = Operand::Witness(i);
        for j in (1..=threshold).rev() {
            let with_bit = b.and(bit, th[j - 1]);
            th[j] = b.or(th[j], with_bit);
        }
    }
    let out = th[threshold];
    b.finish(out)
}

/// A seeded random circuit with `gates` gates over arbitrary earlier
/// references. Deterministic per seed.
pub fn random(n: usize, m: usize, gates: usize, seed: u64) -> WitnessPredicate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = PredicateBuilder::new(n, m);
    let mut refs = all_bits(n, m);
    if refs.is_empty() {
        refs.push(b.constant(true));
    }
    let mut last = refs[0];
    for _ in 0..gates {
        let kind = match rng.gen_range(0..6) {
            0 => GateKind::And,
            1 => GateKind::Or,
            2 => GateKind::Xor,
            3 => GateKind::Not,
            4 => GateKind::Const0,
            _ => GateKind::Const1,
        };
        let pick = |rng: &mut ChaCha8Rng, refs: &[Operand]| refs[rng.gen_range(0..refs.len())];
        let args = match kind.arity() {
            0 => vec![],
            1 => vec![pick(&mut rng, &refs)],
            _ => vec![pick(&mut rng, &refs), pick(&mut rng, &refs)],
        };
        last = b.push(kind, args);
        refs.push(last);
    }
    b.finish(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::gap_oracle::gap;

    fn x0() -> BitString {
        BitString::empty()
    }

    #[test]
    fn constant_gap_is_half_the_space() {
        let g = gap(&constant(0, 3, true), &x0()).unwrap();
        assert_eq!((g.accept, g.reject, g.gap), (8, 0, 4));
        let g = gap(&constant(0, 3, false), &x0()).unwrap();
        assert_eq!((g.accept, g.reject, g.gap), (0, 8, -4));
    }

    #[test]
    fn xor_is_balanced() {
        let g = gap(&xor_pair(0, 2), &x0()).unwrap();
        assert_eq!((g.accept, g.reject, g.gap), (2, 2, 0));
    }

    #[test]
    fn and_all_gap() {
        let g = gap(&and_all(0, 3), &x0()).unwrap();
        assert_eq!((g.accept, g.reject, g.gap), (1, 7, -3));
    }

    #[test]
    fn majority_matches_binomials() {
        // independent count: sum of C(m, j) for j > m/2
        fn choose(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            let mut acc = 1u64;
            for i in 0..k {
                acc = acc * (n - i) / (i + 1);
            }
            acc
        }
        for m in 1..=9usize {
            let expected: u64 = ((m / 2 + 1)..=m).map(|j| choose(m as u64, j as u64)).sum();
            let g = gap(&majority(0, m), &x0()).unwrap();
            assert_eq!(g.accept, expected, "m={m}");
        }
    }

    #[test]
    fn parity_depends_on_x() {
        let p = parity(1, 2);
        let g0 = gap(&p, &"0".parse().unwrap()).unwrap();
        let g1 = gap(&p, &"1".parse().unwrap()).unwrap();
        // balanced in y either way
        assert_eq!(g0.gap, 0);
        assert_eq!(g1.gap, 0);
        // but pointwise inverted
        assert_eq!(g0.accept, g1.reject);
    }

    #[test]
    fn random_is_deterministic() {
        let a = random(2, 4, 12, 99);
        let b = random(2, 4, 12, 99);
        assert_eq!(a, b);
    }
}
