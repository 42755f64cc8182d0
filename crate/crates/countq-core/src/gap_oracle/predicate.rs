use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Gate kinds of the witness-predicate circuit language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Const0,
    Const1,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::And | GateKind::Or | GateKind::Xor => 2,
            GateKind::Not => 1,
            GateKind::Const0 | GateKind::Const1 => 0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Xor => "XOR",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NOT" => GateKind::Not,
            "XOR" => GateKind::Xor,
            "CONST0" => GateKind::Const0,
            "CONST1" => GateKind::Const1,
            _ => return None,
        })
    }
}

/// A reference to an input bit `x<i>`, a witness bit `y<i>`, or an earlier
/// gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operand {
    Input(usize),
    Witness(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredGate {
    pub kind: GateKind,
    pub args: Vec<Operand>,
}

/// A boolean circuit over `n` input bits and `m` witness bits. Gate
/// arguments only reference inputs, witnesses, or earlier gates, so
/// evaluation is a single forward pass.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessPredicate {
    n: usize,
    m: usize,
    gates: Vec<PredGate>,
    output: Operand,
}

impl WitnessPredicate {
    pub fn new(n: usize, m: usize, gates: Vec<PredGate>, output: Operand) -> Result<Self> {
        for (idx, gate) in gates.iter().enumerate() {
            if gate.args.len() != gate.kind.arity() {
                return Err(Error::Invalid(format!(
                    "gate {idx} ({}) takes {} argument(s), got {}",
                    gate.kind.name(),
                    gate.kind.arity(),
                    gate.args.len()
                )));
            }
            for arg in &gate.args {
                check_operand(*arg, n, m, idx)?;
            }
        }
        check_operand(output, n, m, gates.len())?;
        Ok(WitnessPredicate {
            n,
            m,
            gates,
            output,
        })
    }

    pub fn input_bits(&self) -> usize {
        self.n
    }

    pub fn witness_bits(&self) -> usize {
        self.m
    }

    pub fn gates(&self) -> &[PredGate] {
        &self.gates
    }

    pub fn output(&self) -> Operand {
        self.output
    }

    /// Evaluates the circuit on input `x` and witness `y`.
    pub fn eval(&self, x: &BitString, y: &BitString) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if y.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: y.len(),
            });
        }
        let mut buf = Vec::with_capacity(self.gates.len());
        Ok(self.eval_raw(x.raw(), y.raw(), &mut buf))
    }

    /// Forward pass over packed bit values; `x`/`y` bit `i` at position `i`.
    /// Lengths are assumed valid.
    pub(crate) fn eval_raw(&self, x: u64, y: u64, buf: &mut Vec<bool>) -> bool {
        buf.clear();
        let read = |buf: &Vec<bool>, op: Operand| -> bool {
            match op {
                Operand::Input(i) => (x >> i) & 1 == 1,
                Operand::Witness(i) => (y >> i) & 1 == 1,
                Operand::Gate(g) => buf[g],
            }
        };
        for gate in &self.gates {
            let v = match gate.kind {
                GateKind::And => read(buf, gate.args[0]) && read(buf, gate.args[1]),
                GateKind::Or => read(buf, gate.args[0]) || read(buf, gate.args[1]),
                GateKind::Xor => read(buf, gate.args[0]) ^ read(buf, gate.args[1]),
                GateKind::Not => !read(buf, gate.args[0]),
                GateKind::Const0 => false,
                GateKind::Const1 => true,
            };
            buf.push(v);
        }
        read(buf, self.output)
    }

    /// A copy with the output negated.
    pub fn negated(&self) -> WitnessPredicate {
        let mut gates = self.gates.clone();
        gates.push(PredGate {
            kind: GateKind::Not,
            args: vec![self.output],
        });
        WitnessPredicate {
            n: self.n,
            m: self.m,
            output: Operand::Gate(gates.len() - 1),
            gates,
        }
    }
}

fn check_operand(op: Operand, n: usize, m: usize, gate_idx: usize) -> Result<()> {
    match op {
        Operand::Input(i) if i >= n => Err(Error::Invalid(format!(
            "input x{i} out of range (n = {n})"
        ))),
        Operand::Witness(i) if i >= m => Err(Error::Invalid(format!(
            "witness y{i} out of range (m = {m})"
        ))),
        Operand::Gate(g) if g >= gate_idx => Err(Error::Invalid(format!(
            "gate reference g{g} does not point backwards"
        ))),
        _ => Ok(()),
    }
}

impl fmt::Display for WitnessPredicate {
    /// Canonical file form; `parse_predicate` round-trips it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs {} {}", self.n, self.m)?;
        let op_name = |op: Operand| match op {
            Operand::Input(i) => format!("x{i}"),
            Operand::Witness(i) => format!("y{i}"),
            Operand::Gate(g) => format!("g{g}"),
        };
        for (idx, gate) in self.gates.iter().enumerate() {
            write!(f, "gate g{idx} {}", gate.kind.name())?;
            for arg in &gate.args {
                write!(f, " {}", op_name(*arg))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "output {}", op_name(self.output))
    }
}

/// Parses the predicate file format:
///
/// ```text
/// # comment
/// inputs <n> <m>
/// gate <id> <KIND> <arg> [arg]
/// output <id>
/// ```
///
/// Arguments are `x<i>`, `y<i>`, or earlier gate ids. Errors carry the line
/// number.
pub fn parse_predicate(text: &str) -> Result<WitnessPredicate> {
    let mut header: Option<(usize, usize)> = None;
    let mut gates: Vec<PredGate> = Vec::new();
    let mut ids: Vec<String> = Vec::new();
    let mut output: Option<(usize, String)> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "inputs" => {
                if header.is_some() {
                    return Err(Error::parse(lineno, "duplicate inputs line"));
                }
                let n = parse_count(tok.next(), lineno, "n")?;
                let m = parse_count(tok.next(), lineno, "m")?;
                if tok.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens after inputs"));
                }
                header = Some((n, m));
            }
            "gate" => {
                let (n, m) =
                    header.ok_or_else(|| Error::parse(lineno, "gate before inputs line"))?;
                let id = tok
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "gate needs an id"))?;
                if parse_bit_ref(id).is_some() {
                    return Err(Error::parse(
                        lineno,
                        format!("gate id {id:?} shadows an input/witness name"),
                    ));
                }
                if ids.iter().any(|g| g == id) {
                    return Err(Error::parse(lineno, format!("duplicate gate id {id:?}")));
                }
                let kind_tok = tok
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "gate needs a kind"))?;
                let kind = GateKind::from_name(kind_tok)
                    .ok_or_else(|| Error::parse(lineno, format!("unknown gate kind {kind_tok:?}")))?;
                let args: Vec<Operand> = tok
                    .map(|t| resolve_operand(t, n, m, &ids, lineno))
                    .collect::<Result<_>>()?;
                if args.len() != kind.arity() {
                    return Err(Error::parse(
                        lineno,
                        format!(
                            "{} takes {} argument(s), got {}",
                            kind.name(),
                            kind.arity(),
                            args.len()
                        ),
                    ));
                }
                gates.push(PredGate { kind, args });
                ids.push(id.to_string());
            }
            "output" => {
                if output.is_some() {
                    return Err(Error::parse(lineno, "duplicate output line"));
                }
                let id = tok
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "output needs a reference"))?;
                if tok.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens after output"));
                }
                output = Some((lineno, id.to_string()));
            }
            other => {
                return Err(Error::parse(
                    lineno,
                    format!("unknown directive {other:?}"),
                ))
            }
        }
    }

    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing inputs line"))?;
    let (out_line, out_id) = output.ok_or_else(|| Error::parse(0, "missing output line"))?;
    let out = resolve_operand(&out_id, n, m, &ids, out_line)?;
    WitnessPredicate::new(n, m, gates, out)
}

fn parse_count(tok: Option<&str>, lineno: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(lineno, format!("bad {what} count")))
}

fn parse_bit_ref(tok: &str) -> Option<(char, usize)> {
    let mut chars = tok.chars();
    let lead = chars.next()?;
    if lead != 'x' && lead != 'y' {
        return None;
    }
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().map(|i| (lead, i))
}

fn resolve_operand(
    tok: &str,
    n: usize,
    m: usize,
    ids: &[String],
    lineno: usize,
) -> Result<Operand> {
    if let Some((kind, i)) = parse_bit_ref(tok) {
        return match kind {
            'x' if i < n => Ok(Operand::Input(i)),
            'x' => Err(Error::parse(lineno, format!("input x{i} out of range"))),
            _ if i < m => Ok(Operand::Witness(i)),
            _ => Err(Error::parse(lineno, format!("witness y{i} out of range"))),
        };
    }
    match ids.iter().position(|g| g == tok) {
        Some(idx) => Ok(Operand::Gate(idx)),
        None => Err(Error::parse(
            lineno,
            format!("dangling gate reference {tok:?}"),
        )),
    }
}

/// Incremental gate-list builder used by the structured families and the
/// graph-pair predicate.
#[derive(Debug, Default)]
pub struct PredicateBuilder {
    n: usize,
    m: usize,
    gates: Vec<PredGate>,
}

impl PredicateBuilder {
    pub fn new(n: usize, m: usize) -> Self {
        PredicateBuilder {
            n,
            m,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: GateKind, args: Vec<Operand>) -> Operand {
        debug_assert_eq!(args.len(), kind.arity());
        self.gates.push(PredGate { kind, args });
        Operand::Gate(self.gates.len() - 1)
    }

    pub fn constant(&mut self, value: bool) -> Operand {
        self.push(
            if value { GateKind::Const1 } else { GateKind::Const0 },
            vec![],
        )
    }

    pub fn not(&mut self, a: Operand) -> Operand {
        self.push(GateKind::Not, vec![a])
    }

    pub fn and(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateKind::And, vec![a, b])
    }

    pub fn or(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateKind::Or, vec![a, b])
    }

    pub fn xor(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateKind::Xor, vec![a, b])
    }

    /// AND over a list; CONST1 when empty.
    pub fn and_all(&mut self, ops: &[Operand]) -> Operand {
        match ops.split_first() {
            None => self.constant(true),
            Some((first, rest)) => {
                let mut acc = *first;
                for op in rest {
                    acc = self.and(acc, *op);
                }
                acc
            }
        }
    }

    /// OR over a list; CONST0 when empty.
    pub fn or_all(&mut self, ops: &[Operand]) -> Operand {
        match ops.split_first() {
            None => self.constant(false),
            Some((first, rest)) => {
                let mut acc = *first;
                for op in rest {
                    acc = self.or(acc, *op);
                }
                acc
            }
        }
    }

    pub fn finish(self, output: Operand) -> WitnessPredicate {
        WitnessPredicate::new(self.n, self.m, self.gates, output)
            .expect("builder only emits valid references")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_example_parses_and_evals() {
        let p = parse_predicate("inputs 0 2\ngate g1 XOR y0 y1\noutput g1").unwrap();
        let x = BitString::empty();
        let y10: BitString = "10".parse().unwrap();
        assert!(p.eval(&x, &y10).unwrap());
        let y11: BitString = "11".parse().unwrap();
        assert!(!p.eval(&x, &y11).unwrap());
    }

    #[test]
    fn and_all_witnesses() {
        let mut b = PredicateBuilder::new(0, 3);
        let ops: Vec<Operand> = (0..3).map(Operand::Witness).collect();
        let out = b.and_all(&ops);
        let p = b.finish(out);
        assert!(p
            .eval(&BitString::empty(), &"111".parse().unwrap())
            .unwrap());
        assert!(!p
            .eval(&BitString::empty(), &"110".parse().unwrap())
            .unwrap());
    }

    #[test]
    fn dangling_reference_is_an_error() {
        let err = parse_predicate("inputs 0 1\noutput g9").unwrap_err();
        assert!(err.to_string().contains("dangling"), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_predicate("inputs 0 1\ngate g1 NAND y0\noutput g1").unwrap_err();
        assert!(err.to_string().starts_with("line 2"), "{err}");
    }

    #[test]
    fn display_roundtrip() {
        let text = "inputs 1 3\ngate a XOR y0 y1\ngate b AND a x0\ngate c NOT b\noutput c\n";
        let p = parse_predicate(text).unwrap();
        let reparsed = parse_predicate(&p.to_string()).unwrap();
        assert_eq!(p, reparsed);
    }

    #[test]
    fn length_mismatch_rejected() {
        let p = parse_predicate("inputs 0 2\ngate g XOR y0 y1\noutput g").unwrap();
        assert!(p
            .eval(&BitString::empty(), &"1".parse().unwrap())
            .is_err());
    }
}
