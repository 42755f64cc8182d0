//! Circuit file parser.
//!
//! ```text
//! field sqrt2 | rational | poly c0 c1 ... ck root lo hi [conj m11 ... mkk]
//! qubits <w>
//! init <bits>
//! g1 <q> <4 scalars>
//! g2 <q1> <q2> <16 scalars>
//! oracle xor <target...> <predicate-file> [x=<bits>] [controls=<q,q,...>]
//! oracle perm <target...> <predicate-file> [x=<bits>] [controls=...]
//!             [true=<img,...>] [false=<img,...>]
//! accept <pattern of 0/1/->
//! ```
//!
//! Scalars use the field's token syntax and contain no whitespace.
//! Predicate paths are resolved relative to the circuit file. Oracle
//! controls default to qubits `0..m-1` (the predicate's witness bits);
//! `oracle perm` without explicit images is the two-flag verdict update.

use std::path::Path;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact_scalar::{parse_field_spec, ExactScalar, ScalarRep};
use crate::gap_oracle::{parse_predicate, WitnessPredicate};
use crate::state_vector::{BasisState, ControlFn, Gate1, Gate2, Layer, ReversibleOracle};

use super::{AcceptPattern, FieldCircuit};

pub fn parse_circuit_file(path: &Path) -> Result<FieldCircuit> {
    let text = std::fs::read_to_string(path)?;
    parse_circuit_str(&text, path.parent())
}

pub fn parse_circuit_str(text: &str, base_dir: Option<&Path>) -> Result<FieldCircuit> {
    let mut rep: Option<ScalarRep> = None;
    let mut width: Option<usize> = None;
    let mut initial: Option<BasisState> = None;
    let mut accepting: Option<AcceptPattern> = None;
    let mut layers: Vec<Layer<ExactScalar>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let directive = tok.next().unwrap();
        let rest: Vec<&str> = tok.collect();
        match directive {
            "field" => {
                if rep.is_some() {
                    return Err(Error::parse(lineno, "duplicate field line"));
                }
                rep = Some(parse_field_spec(line).map_err(|e| Error::parse(lineno, e.to_string()))?);
            }
            "qubits" => {
                if width.is_some() {
                    return Err(Error::parse(lineno, "duplicate qubits line"));
                }
                let w: usize = rest
                    .first()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "bad qubit count"))?;
                if w == 0 || w > BasisState::MAX_WIDTH {
                    return Err(Error::parse(
                        lineno,
                        format!("qubit count must be 1..={}", BasisState::MAX_WIDTH),
                    ));
                }
                width = Some(w);
            }
            "init" => {
                let bits = rest
                    .first()
                    .ok_or_else(|| Error::parse(lineno, "init needs a bit string"))?;
                initial = Some(
                    BasisState::from_str(bits)
                        .map_err(|e| Error::parse(lineno, e.to_string()))?,
                );
            }
            "g1" => {
                let rep = rep
                    .as_ref()
                    .ok_or_else(|| Error::parse(lineno, "gate before field line"))?;
                if rest.len() != 5 {
                    return Err(Error::parse(lineno, "g1 takes a qubit and 4 scalars"));
                }
                let q: usize = rest[0]
                    .parse()
                    .map_err(|_| Error::parse(lineno, "bad qubit index"))?;
                let s = parse_scalars::<4>(rep, &rest[1..], lineno)?;
                let gate = Gate1::new([[s[0].clone(), s[1].clone()], [s[2].clone(), s[3].clone()]], q)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                layers.push(Layer::Single(gate));
            }
            "g2" => {
                let rep = rep
                    .as_ref()
                    .ok_or_else(|| Error::parse(lineno, "gate before field line"))?;
                if rest.len() != 18 {
                    return Err(Error::parse(lineno, "g2 takes two qubits and 16 scalars"));
                }
                let q1: usize = rest[0]
                    .parse()
                    .map_err(|_| Error::parse(lineno, "bad qubit index"))?;
                let q2: usize = rest[1]
                    .parse()
                    .map_err(|_| Error::parse(lineno, "bad qubit index"))?;
                let s = parse_scalars::<16>(rep, &rest[2..], lineno)?;
                let m = [
                    [s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone()],
                    [s[4].clone(), s[5].clone(), s[6].clone(), s[7].clone()],
                    [s[8].clone(), s[9].clone(), s[10].clone(), s[11].clone()],
                    [s[12].clone(), s[13].clone(), s[14].clone(), s[15].clone()],
                ];
                let gate =
                    Gate2::new(m, q1, q2).map_err(|e| Error::parse(lineno, e.to_string()))?;
                layers.push(Layer::Pair(gate));
            }
            "oracle" => {
                let oracle = parse_oracle(&rest, base_dir, lineno)?;
                layers.push(Layer::Oracle(oracle));
            }
            "accept" => {
                if accepting.is_some() {
                    return Err(Error::parse(lineno, "duplicate accept line"));
                }
                let pat = rest
                    .first()
                    .ok_or_else(|| Error::parse(lineno, "accept needs a pattern"))?;
                accepting = Some(
                    AcceptPattern::from_str(pat)
                        .map_err(|e| Error::parse(lineno, e.to_string()))?,
                );
            }
            other => {
                return Err(Error::parse(
                    lineno,
                    format!("unknown directive {other:?}"),
                ))
            }
        }
    }

    let rep = rep.ok_or_else(|| Error::parse(0, "missing field line"))?;
    let width = width.ok_or_else(|| Error::parse(0, "missing qubits line"))?;
    let initial = initial.ok_or_else(|| Error::parse(0, "missing init line"))?;
    let accepting = accepting.ok_or_else(|| Error::parse(0, "missing accept line"))?;
    let circuit = FieldCircuit {
        width,
        rep,
        layers,
        initial,
        accepting,
    };
    circuit.validate()?;
    Ok(circuit)
}

fn parse_scalars<const N: usize>(
    rep: &ScalarRep,
    tokens: &[&str],
    lineno: usize,
) -> Result<Vec<ExactScalar>> {
    debug_assert_eq!(tokens.len(), N);
    tokens
        .iter()
        .map(|t| {
            rep.parse_scalar(t)
                .map_err(|e| Error::parse(lineno, e.to_string()))
        })
        .collect()
}

fn parse_oracle(
    rest: &[&str],
    base_dir: Option<&Path>,
    lineno: usize,
) -> Result<ReversibleOracle> {
    let (kind, rest) = rest
        .split_first()
        .ok_or_else(|| Error::parse(lineno, "oracle needs a kind (xor or perm)"))?;
    // leading integers are targets, then the predicate path, then key=value
    let mut targets = Vec::new();
    let mut it = rest.iter().peekable();
    while let Some(tok) = it.peek() {
        match tok.parse::<usize>() {
            Ok(q) => {
                targets.push(q);
                it.next();
            }
            Err(_) => break,
        }
    }
    let path_tok = it
        .next()
        .ok_or_else(|| Error::parse(lineno, "oracle needs a predicate file"))?;
    let mut x = BitString::empty();
    let mut controls: Option<Vec<usize>> = None;
    let mut when_true: Option<Vec<u64>> = None;
    let mut when_false: Option<Vec<u64>> = None;
    for tok in it {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(lineno, format!("expected key=value, got {tok:?}")))?;
        match key {
            "x" => x = value.parse().map_err(|e: Error| Error::parse(lineno, e.to_string()))?,
            "controls" => {
                controls = Some(parse_int_list(value, lineno)?);
            }
            "true" => when_true = Some(parse_int_list(value, lineno)?),
            "false" => when_false = Some(parse_int_list(value, lineno)?),
            _ => return Err(Error::parse(lineno, format!("unknown oracle key {key:?}"))),
        }
    }

    let pred = load_predicate(path_tok, base_dir, lineno)?;
    let controls = controls.unwrap_or_else(|| (0..pred.witness_bits()).collect());
    let selector = ControlFn::Predicate { pred, x };
    let oracle = match *kind {
        "xor" => {
            if when_true.is_some() || when_false.is_some() {
                return Err(Error::parse(lineno, "xor oracles take no image lists"));
            }
            ReversibleOracle::xor(controls, targets, selector)
        }
        "perm" => match (when_true, when_false) {
            (None, None) => {
                if targets.len() != 2 {
                    return Err(Error::parse(
                        lineno,
                        "default perm oracle is the two-flag update; give true=/false= images otherwise",
                    ));
                }
                ReversibleOracle::flag_update(controls, targets[0], targets[1], selector)
            }
            (Some(t), Some(f)) => {
                ReversibleOracle::permutation(controls, targets, selector, t, f)
            }
            _ => {
                return Err(Error::parse(
                    lineno,
                    "perm oracle needs both true= and false= images (or neither)",
                ))
            }
        },
        other => {
            return Err(Error::parse(
                lineno,
                format!("unknown oracle kind {other:?}"),
            ))
        }
    };
    oracle.map_err(|e| Error::parse(lineno, e.to_string()))
}

fn parse_int_list<T: FromStr>(value: &str, lineno: usize) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| Error::parse(lineno, format!("bad integer list {value:?}")))
        })
        .collect()
}

fn load_predicate(
    token: &str,
    base_dir: Option<&Path>,
    lineno: usize,
) -> Result<WitnessPredicate> {
    let path = match base_dir {
        Some(dir) => dir.join(token),
        None => Path::new(token).to_path_buf(),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::parse(lineno, format!("cannot read predicate {}: {e}", path.display()))
    })?;
    parse_predicate(&text)
        .map_err(|e| Error::parse(lineno, format!("in predicate {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic_converse::{acceptance_probability, qap_decide, simulate_field};
    use crate::constructions::RunOptions;

    #[test]
    fn parses_a_rational_circuit() {
        let text = "\
# one A rotation
field rational
qubits 1
init 0
g1 0 3/5 -4/5 4/5 3/5
accept 1
";
        let c = parse_circuit_str(text, None).unwrap();
        assert_eq!(c.width, 1);
        assert_eq!(c.layers.len(), 1);
        let p = acceptance_probability(&c, &RunOptions::default()).unwrap();
        assert_eq!(p, ExactScalar::ratio(16, 25));
    }

    #[test]
    fn parses_field_circuit_with_oracle() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("p.pred"),
            "inputs 0 1\ngate g CONST1\noutput g\n",
        )
        .unwrap();
        let text = "\
field poly -2 0 1 root 1 2
qubits 2
init 00
g1 0 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]
oracle xor 1 p.pred
g1 0 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]
g1 1 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]
accept 01
";
        let c = parse_circuit_str(text, Some(dir.path())).unwrap();
        let run = simulate_field(&c, &RunOptions::default()).unwrap();
        assert_eq!(run.final_state.num_terms(), 2);
        assert!(qap_decide(&c, &RunOptions::default()).unwrap());
    }

    #[test]
    fn non_unitary_gate_is_a_parse_error() {
        let text = "field rational\nqubits 1\ninit 0\ng1 0 1 0 1 1\naccept 1\n";
        let err = parse_circuit_str(text, None).unwrap_err();
        assert!(err.to_string().contains("unitary"), "{err}");
    }

    #[test]
    fn missing_sections_are_reported() {
        assert!(parse_circuit_str("qubits 1\ninit 0\naccept 1\n", None).is_err());
        assert!(parse_circuit_str("field rational\ninit 0\naccept 1\n", None).is_err());
    }

    #[test]
    fn perm_oracle_defaults_to_flag_update() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("p.pred"),
            "inputs 0 1\ngate g CONST1\noutput g\n",
        )
        .unwrap();
        let text = "\
field rational
qubits 3
init 100
oracle perm 1 2 p.pred
accept 101
";
        let c = parse_circuit_str(text, Some(dir.path())).unwrap();
        assert!(qap_decide(&c, &RunOptions::default()).unwrap());
    }
}
