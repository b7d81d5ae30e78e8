//! Line-oriented text form:
//!
//! ```text
//! detector(Z) D0
//! detector D7
//! logical_observable L0
//! error(0.00025) D0 D3 L0
//! ```
//!
//! Every detector and observable is declared once, so the counts survive a
//! round trip even when some detector is never flipped.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{DetectorErrorModel, Symptom};
use crate::pauli::Basis;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct DemParseError {
    pub line: usize,
    pub message: String,
}

impl DetectorErrorModel {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.detector_classes.iter().enumerate() {
            match c {
                Some(b) => writeln!(out, "detector({b}) D{i}"),
                None => writeln!(out, "detector D{i}"),
            }
            .unwrap();
        }
        for k in 0..self.num_observables {
            writeln!(out, "logical_observable L{k}").unwrap();
        }
        for m in &self.mechanisms {
            if m.symptom.is_empty() {
                continue;
            }
            writeln!(out, "error({}) {}", m.probability, m.symptom).unwrap();
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self, DemParseError> {
        let mut classes: Vec<Option<Basis>> = Vec::new();
        let mut num_observables = 0usize;
        let mut errors = Vec::new();
        for (n, raw) in s.lines().enumerate() {
            let line = n + 1;
            let err = |message: String| DemParseError { line, message };
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let mut words = text.split_whitespace();
            let head = words.next().unwrap_or_default();
            let id = |tok: Option<&str>, prefix: char| -> Result<usize, DemParseError> {
                let tok = tok.ok_or_else(|| err(format!("missing {prefix} target")))?;
                tok.strip_prefix(prefix)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| err(format!("bad target `{tok}`")))
            };
            if head == "detector" || head.starts_with("detector(") {
                let class = match head {
                    "detector" => None,
                    "detector(X)" => Some(Basis::X),
                    "detector(Z)" => Some(Basis::Z),
                    _ => return Err(err(format!("unknown detector class `{head}`"))),
                };
                let i = id(words.next(), 'D')?;
                if i != classes.len() {
                    return Err(err(format!("detector D{i} declared out of order")));
                }
                classes.push(class);
            } else if head == "logical_observable" {
                let k = id(words.next(), 'L')?;
                if k != num_observables {
                    return Err(err(format!("observable L{k} declared out of order")));
                }
                num_observables += 1;
            } else if let Some(arg) = head.strip_prefix("error(").and_then(|h| h.strip_suffix(')')) {
                let p = f64::from_str(arg).map_err(|_| err(format!("bad probability `{arg}`")))?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(err(format!("probability {p} outside (0, 1)")));
                }
                let mut sym = Symptom::default();
                for tok in words {
                    if tok.starts_with('D') {
                        sym.detectors.push(id(Some(tok), 'D')? as u32);
                    } else {
                        let k = id(Some(tok), 'L')?;
                        if k >= 64 {
                            return Err(err(format!("observable L{k} out of range")));
                        }
                        sym.observables ^= 1 << k;
                    }
                }
                sym.detectors.sort_unstable();
                errors.push((line, sym, p));
            } else {
                return Err(err(format!("unknown instruction `{head}`")));
            }
        }
        let nd = classes.len();
        for (line, sym, _) in &errors {
            if let Some(&d) = sym.detectors.iter().find(|&&d| d as usize >= nd) {
                return Err(DemParseError {
                    line: *line,
                    message: format!("undeclared detector D{d}"),
                });
            }
            if sym.observables >> num_observables != 0 {
                return Err(DemParseError {
                    line: *line,
                    message: "undeclared observable".into(),
                });
            }
        }
        Ok(DetectorErrorModel::from_contributions(
            nd,
            num_observables,
            classes,
            errors.into_iter().map(|(_, s, p)| (s, p)),
        ))
    }
}

impl FromStr for DetectorErrorModel {
    type Err = DemParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DetectorErrorModel::from_text(s)
    }
}
