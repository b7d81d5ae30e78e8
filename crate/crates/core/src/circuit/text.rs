//! Line-oriented text form.
//!
//! ```text
//! QUBITS 3
//! R 0
//! RX 1
//! TICK
//! CNOT[boundary] 1 0
//! DEPOLARIZE2(0.01) 1 0
//! DEPOLARIZE1(0.001) 2
//! TICK
//! M 0
//! TICK
//! DETECTOR 0 @ (0,0,0)
//! OBSERVABLE 0 0
//! ```
//!
//! Every tick is closed by a `TICK` line. Annotations may appear anywhere
//! but are always written after the last tick.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{Circuit, Detector, Instruction, NoiseChannel, NoiseKind, Operation, Qubit, Tick};
use crate::pauli::GateKind;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message} (at `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub message: String,
}

fn gate_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::ResetZ => "R",
        GateKind::ResetX => "RX",
        GateKind::H => "H",
        GateKind::Cnot => "CNOT",
        GateKind::MeasureZ => "M",
        GateKind::MeasureX => "MX",
        GateKind::Idle => "I",
    }
}

fn noise_name(kind: NoiseKind) -> &'static str {
    match kind {
        NoiseKind::Depolarize1 => "DEPOLARIZE1",
        NoiseKind::Depolarize2 => "DEPOLARIZE2",
        NoiseKind::FlipX => "X_ERROR",
        NoiseKind::FlipZ => "Z_ERROR",
    }
}

impl Circuit {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "QUBITS {}", self.num_qubits);
        for tick in &self.ticks {
            for op in &tick.ops {
                match op {
                    Operation::Gate(g) => {
                        out.push_str(gate_name(g.kind));
                        if g.boundary {
                            out.push_str("[boundary]");
                        }
                        for q in &g.targets {
                            let _ = write!(out, " {q}");
                        }
                    }
                    Operation::Noise(c) => {
                        let _ = write!(out, "{}({})", noise_name(c.kind), c.probability);
                        for q in &c.targets {
                            let _ = write!(out, " {q}");
                        }
                    }
                }
                out.push('\n');
            }
            out.push_str("TICK\n");
        }
        for det in &self.detectors {
            out.push_str("DETECTOR");
            for m in &det.measurements {
                let _ = write!(out, " {m}");
            }
            let [x, y, t] = det.coords;
            let _ = writeln!(out, " @ ({x},{y},{t})");
        }
        for (k, obs) in self.observables.iter().enumerate() {
            let _ = write!(out, "OBSERVABLE {k}");
            for m in obs {
                let _ = write!(out, " {m}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit, ParseError> {
        let mut circuit = Circuit::default();
        let mut saw_header = false;
        let mut current = Tick::default();
        let mut open = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |token: &str, message: &str| ParseError {
                line: line_no,
                token: token.to_string(),
                message: message.to_string(),
            };
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or("");
            if !saw_header {
                if head != "QUBITS" {
                    return Err(err(head, "expected `QUBITS <n>` header"));
                }
                let n = words.next().ok_or_else(|| err(line, "missing qubit count"))?;
                circuit.num_qubits = parse_num(n).ok_or_else(|| err(n, "bad qubit count"))?;
                if let Some(extra) = words.next() {
                    return Err(err(extra, "unexpected token"));
                }
                saw_header = true;
                continue;
            }
            match head {
                "TICK" => {
                    if let Some(extra) = words.next() {
                        return Err(err(extra, "unexpected token"));
                    }
                    circuit.ticks.push(std::mem::take(&mut current));
                    open = false;
                }
                "DETECTOR" => {
                    let (ms, coords) = match line.split_once('@') {
                        Some((a, b)) => (a, Some(b.trim())),
                        None => (line, None),
                    };
                    let measurements = ms
                        .split_whitespace()
                        .skip(1)
                        .map(|w| parse_num(w).ok_or_else(|| err(w, "bad measurement index")))
                        .collect::<Result<Vec<_>, _>>()?;
                    let coords = match coords {
                        None => [0.0; 3],
                        Some(c) => parse_coords(c).ok_or_else(|| err(c, "bad coordinates"))?,
                    };
                    circuit.detectors.push(Detector {
                        measurements,
                        coords,
                    });
                }
                "OBSERVABLE" => {
                    let k = words.next().ok_or_else(|| err(line, "missing observable index"))?;
                    let k: usize = parse_num(k).ok_or_else(|| err(k, "bad observable index"))?;
                    if k != circuit.observables.len() {
                        return Err(err(&k.to_string(), "observable indices must be dense and ascending"));
                    }
                    let ms = words
                        .map(|w| parse_num(w).ok_or_else(|| err(w, "bad measurement index")))
                        .collect::<Result<Vec<_>, _>>()?;
                    circuit.observables.push(ms);
                }
                _ => {
                    let op = parse_op(head, words).map_err(|(tok, msg)| err(&tok, msg))?;
                    current.ops.push(op);
                    open = true;
                }
            }
        }
        if !saw_header {
            return Err(ParseError {
                line: 0,
                token: String::new(),
                message: "empty input".into(),
            });
        }
        if open {
            circuit.ticks.push(current);
        }
        Ok(circuit)
    }
}

impl FromStr for Circuit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Circuit::from_text(s)
    }
}

fn parse_num<T: FromStr>(w: &str) -> Option<T> {
    w.parse().ok()
}

fn parse_coords(c: &str) -> Option<[f64; 3]> {
    let inner = c.strip_prefix('(')?.strip_suffix(')')?;
    let v: Vec<f64> = inner
        .split(',')
        .map(|s| s.trim().parse().ok())
        .collect::<Option<_>>()?;
    v.try_into().ok()
}

fn parse_targets<'a>(
    words: impl Iterator<Item = &'a str>,
) -> Result<Vec<Qubit>, (String, &'static str)> {
    words
        .map(|w| parse_num(w).ok_or_else(|| (w.to_string(), "bad qubit index")))
        .collect()
}

fn parse_op<'a>(
    head: &str,
    words: impl Iterator<Item = &'a str>,
) -> Result<Operation, (String, &'static str)> {
    if let Some(open) = head.find('(') {
        let name = &head[..open];
        let kind = match name {
            "DEPOLARIZE1" => NoiseKind::Depolarize1,
            "DEPOLARIZE2" => NoiseKind::Depolarize2,
            "X_ERROR" => NoiseKind::FlipX,
            "Z_ERROR" => NoiseKind::FlipZ,
            _ => return Err((head.to_string(), "unknown noise channel")),
        };
        let arg = head[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| (head.to_string(), "unclosed parenthesis"))?;
        let probability: f64 = arg
            .parse()
            .map_err(|_| (arg.to_string(), "bad probability"))?;
        let targets = parse_targets(words)?;
        if targets.is_empty() {
            return Err((head.to_string(), "noise channel without targets"));
        }
        if kind == NoiseKind::Depolarize2 && targets.len() != 2 {
            return Err((head.to_string(), "DEPOLARIZE2 takes exactly 2 targets"));
        }
        return Ok(Operation::Noise(NoiseChannel {
            kind,
            probability,
            targets,
        }));
    }
    let (name, boundary) = match head.strip_suffix("[boundary]") {
        Some(n) => (n, true),
        None => (head, false),
    };
    let kind = match name {
        "R" => GateKind::ResetZ,
        "RX" => GateKind::ResetX,
        "H" => GateKind::H,
        "CNOT" => GateKind::Cnot,
        "M" => GateKind::MeasureZ,
        "MX" => GateKind::MeasureX,
        "I" => GateKind::Idle,
        _ => return Err((head.to_string(), "unknown instruction")),
    };
    if boundary && kind != GateKind::Cnot {
        return Err((head.to_string(), "boundary flag is only allowed on CNOT"));
    }
    let targets = parse_targets(words)?;
    if targets.len() != kind.arity() {
        return Err((head.to_string(), "wrong number of targets"));
    }
    if kind == GateKind::Cnot && targets[0] == targets[1] {
        return Err((head.to_string(), "CNOT targets must be distinct"));
    }
    Ok(Operation::Gate(Instruction {
        kind,
        targets,
        boundary,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_single_cnot() {
        let c = Circuit::from_text("QUBITS 2\nCNOT 0 1\nTICK\n").unwrap();
        assert_eq!(c.ticks.len(), 1);
        let gates: Vec<_> = c.ticks[0].gates().collect();
        assert_eq!(gates, vec![&Instruction::cnot(0, 1, false)]);
    }

    #[test]
    fn malformed_cnot_reports_line() {
        let e = Circuit::from_text("QUBITS 2\nR 0\nCNOT 0\nTICK\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.token, "CNOT");
    }

    #[test]
    fn observable_gap_is_rejected() {
        let e = Circuit::from_text("QUBITS 1\nM 0\nTICK\nOBSERVABLE 1 0\n").unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn round_trip_preserves_everything() {
        let text = "\
QUBITS 3
R 0
RX 1
X_ERROR(0.001) 0
Z_ERROR(0.001) 1
DEPOLARIZE1(0.001) 2
TICK
CNOT[boundary] 1 0
DEPOLARIZE2(0.01) 1 0
I 2
TICK
H 1
M 0
TICK
DETECTOR 0 @ (0.5,1,2)
OBSERVABLE 0 0
";
        let c = Circuit::from_text(text).unwrap();
        assert_eq!(c.to_text(), text);
        assert_eq!(Circuit::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let c = Circuit::from_text("# hi\nQUBITS 1\n\nR 0 # reset\nTICK\n").unwrap();
        assert_eq!(c.ticks.len(), 1);
    }
}
