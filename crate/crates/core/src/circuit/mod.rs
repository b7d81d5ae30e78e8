//! Circuit intermediate representation.
//!
//! A circuit is a list of ticks. Each tick holds gate instructions and noise
//! channels in program order. Detectors and observables refer to
//! measurements by their index in program order, counting from zero.

mod noise;
mod text;

pub use noise::{inject_noise, NoiseParams};
pub use text::ParseError;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::pauli::GateKind;

pub type Qubit = u32;

#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub targets: Vec<Qubit>,
    /// Set only on CNOTs that cross the interface between the two patches.
    pub boundary: bool,
}

impl Instruction {
    pub fn new(kind: GateKind, targets: Vec<Qubit>) -> Self {
        Instruction {
            kind,
            targets,
            boundary: false,
        }
    }

    pub fn cnot(control: Qubit, target: Qubit, boundary: bool) -> Self {
        Instruction {
            kind: GateKind::Cnot,
            targets: vec![control, target],
            boundary,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Uniform over X, Y, Z on each target independently.
    Depolarize1,
    /// Uniform over the 15 non-identity two-qubit Paulis on a target pair.
    Depolarize2,
    FlipX,
    FlipZ,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseChannel {
    pub kind: NoiseKind,
    pub probability: f64,
    pub targets: Vec<Qubit>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Operation {
    Gate(Instruction),
    Noise(NoiseChannel),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tick {
    pub ops: Vec<Operation>,
}

impl Tick {
    pub fn gates(&self) -> impl Iterator<Item = &Instruction> {
        self.ops.iter().filter_map(|op| match op {
            Operation::Gate(g) => Some(g),
            Operation::Noise(_) => None,
        })
    }

    pub fn channels(&self) -> impl Iterator<Item = &NoiseChannel> {
        self.ops.iter().filter_map(|op| match op {
            Operation::Noise(n) => Some(n),
            Operation::Gate(_) => None,
        })
    }

    pub fn push_gate(&mut self, g: Instruction) {
        self.ops.push(Operation::Gate(g));
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Detector {
    pub measurements: Vec<usize>,
    pub coords: [f64; 3],
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub ticks: Vec<Tick>,
    pub detectors: Vec<Detector>,
    /// Observable `k` is the parity of the listed measurements.
    pub observables: Vec<Vec<usize>>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ..Default::default()
        }
    }

    pub fn num_measurements(&self) -> usize {
        self.instructions()
            .filter(|g| g.kind.is_measurement())
            .count()
    }

    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.ticks.iter().flat_map(|t| t.gates())
    }

    pub fn channels(&self) -> impl Iterator<Item = &NoiseChannel> {
        self.ticks.iter().flat_map(|t| t.channels())
    }

    pub fn num_channels(&self) -> usize {
        self.channels().count()
    }

    pub fn is_noiseless(&self) -> bool {
        self.channels().next().is_none()
    }

    /// Checks every structural invariant and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.num_qubits as Qubit;
        let mut measurements = 0usize;
        for (t, tick) in self.ticks.iter().enumerate() {
            let mut used = HashSet::new();
            for op in &tick.ops {
                match op {
                    Operation::Gate(g) => {
                        if g.targets.len() != g.kind.arity() {
                            violations.push(Violation::Arity {
                                tick: t,
                                kind: g.kind,
                                found: g.targets.len(),
                            });
                        }
                        if g.boundary && g.kind != GateKind::Cnot {
                            violations.push(Violation::BoundaryFlag { tick: t, kind: g.kind });
                        }
                        if g.kind == GateKind::Cnot
                            && g.targets.len() == 2
                            && g.targets[0] == g.targets[1]
                        {
                            violations.push(Violation::CnotSelfLoop {
                                tick: t,
                                qubit: g.targets[0],
                            });
                        }
                        let mut seen_here = HashSet::new();
                        for &q in &g.targets {
                            if q >= n {
                                violations.push(Violation::QubitOutOfRange { tick: t, qubit: q });
                            }
                            if !seen_here.insert(q) {
                                continue;
                            }
                            if !used.insert(q) {
                                violations.push(Violation::QubitReused { tick: t, qubit: q });
                            }
                        }
                        if g.kind.is_measurement() {
                            measurements += 1;
                        }
                    }
                    Operation::Noise(c) => {
                        if !(0.0..=1.0).contains(&c.probability) || c.probability.is_nan() {
                            violations.push(Violation::Probability {
                                tick: t,
                                probability: c.probability,
                            });
                        }
                        if c.kind == NoiseKind::Depolarize2
                            && (c.targets.len() != 2 || c.targets[0] == c.targets[1])
                        {
                            violations.push(Violation::ChannelArity {
                                tick: t,
                                found: c.targets.len(),
                            });
                        }
                        for &q in &c.targets {
                            if q >= n {
                                violations.push(Violation::QubitOutOfRange { tick: t, qubit: q });
                            }
                        }
                    }
                }
            }
        }
        for (i, det) in self.detectors.iter().enumerate() {
            for &m in &det.measurements {
                if m >= measurements {
                    violations.push(Violation::MissingMeasurement {
                        annotation: Annotation::Detector(i),
                        measurement: m,
                    });
                }
            }
        }
        for (k, obs) in self.observables.iter().enumerate() {
            for &m in obs {
                if m >= measurements {
                    violations.push(Violation::MissingMeasurement {
                        annotation: Annotation::Observable(k),
                        measurement: m,
                    });
                }
            }
        }
        ValidationReport { violations }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Annotation {
    Detector(usize),
    Observable(usize),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Violation {
    #[error("tick {tick}: qubit {qubit} is addressed by more than one instruction")]
    QubitReused { tick: usize, qubit: Qubit },
    #[error("tick {tick}: qubit {qubit} out of range")]
    QubitOutOfRange { tick: usize, qubit: Qubit },
    #[error("tick {tick}: {kind:?} expects {} targets, found {found}", kind.arity())]
    Arity { tick: usize, kind: GateKind, found: usize },
    #[error("tick {tick}: CNOT with identical control and target {qubit}")]
    CnotSelfLoop { tick: usize, qubit: Qubit },
    #[error("tick {tick}: boundary flag on {kind:?}")]
    BoundaryFlag { tick: usize, kind: GateKind },
    #[error("tick {tick}: probability {probability} outside [0, 1]")]
    Probability { tick: usize, probability: f64 },
    #[error("tick {tick}: two-qubit channel needs 2 distinct targets, found {found}")]
    ChannelArity { tick: usize, found: usize },
    #[error("{annotation:?} refers to measurement {measurement} which does not exist")]
    MissingMeasurement { annotation: Annotation, measurement: usize },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), CircuitError> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("invalid circuit:\n{0}")]
    Invalid(ValidationReport),
    #[error("noise can only be injected into a noiseless circuit")]
    AlreadyNoisy,
    #[error("invalid noise parameters: {0}")]
    NoiseParams(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_is_valid() {
        assert!(Circuit::default().validate().is_valid());
    }

    #[test]
    fn reused_qubit_is_reported_with_tick() {
        let mut c = Circuit::new(5);
        c.ticks.push(Tick::default());
        c.ticks.push(Tick::default());
        let mut t = Tick::default();
        t.push_gate(Instruction::cnot(3, 0, false));
        t.push_gate(Instruction::cnot(1, 3, false));
        c.ticks.push(t);
        let report = c.validate();
        assert_eq!(
            report.violations,
            vec![Violation::QubitReused { tick: 2, qubit: 3 }]
        );
    }

    #[test]
    fn reports_every_violation() {
        let mut c = Circuit::new(2);
        let mut t = Tick::default();
        t.push_gate(Instruction::new(GateKind::H, vec![0, 1]));
        t.push_gate(Instruction {
            kind: GateKind::H,
            targets: vec![5],
            boundary: true,
        });
        c.ticks.push(t);
        c.detectors.push(Detector {
            measurements: vec![0],
            coords: [0.0; 3],
        });
        let report = c.validate();
        assert_eq!(report.violations.len(), 4, "{report}");
    }
}
