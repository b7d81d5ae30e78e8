use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, NoiseChannel, NoiseKind, Operation, Qubit, Tick};
use crate::pauli::GateKind;

/// Uniform circuit-level noise: every single-qubit gate, two-qubit gate,
/// idle step, preparation and readout fails with probability `p`, except
/// CNOTs crossing the interface, which fail with `gamma * p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p: f64,
    pub gamma: f64,
    /// Apply idle noise in ticks that contain resets or measurements.
    /// On by default; turning it off is a sensitivity knob.
    #[serde(default = "default_true")]
    pub idle_in_reset_measure_ticks: bool,
}

fn default_true() -> bool {
    true
}

impl NoiseParams {
    pub fn new(p: f64, gamma: f64) -> Self {
        NoiseParams {
            p,
            gamma,
            idle_in_reset_measure_ticks: true,
        }
    }

    pub fn boundary_p(&self) -> f64 {
        self.gamma * self.p
    }

    pub fn check(&self) -> Result<(), CircuitError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(CircuitError::NoiseParams(format!("p = {} outside [0, 1]", self.p)));
        }
        if !(self.gamma >= 0.0) {
            return Err(CircuitError::NoiseParams(format!("gamma = {} is negative", self.gamma)));
        }
        if self.boundary_p() > 1.0 {
            return Err(CircuitError::NoiseParams(format!(
                "gamma * p = {} exceeds 1",
                self.boundary_p()
            )));
        }
        Ok(())
    }
}

/// Returns a noisy copy of an ideal circuit.
pub fn inject_noise(c: &Circuit, n: &NoiseParams) -> Result<Circuit, CircuitError> {
    n.check()?;
    if !c.is_noiseless() {
        return Err(CircuitError::AlreadyNoisy);
    }
    c.validate().into_result()?;

    let channel = |kind, probability, targets: Vec<Qubit>| {
        (probability > 0.0).then_some(Operation::Noise(NoiseChannel {
            kind,
            probability,
            targets,
        }))
    };

    let mut out = Circuit {
        num_qubits: c.num_qubits,
        ticks: Vec::with_capacity(c.ticks.len()),
        detectors: c.detectors.clone(),
        observables: c.observables.clone(),
    };
    let mut touched = vec![false; c.num_qubits];
    for tick in &c.ticks {
        touched.iter_mut().for_each(|t| *t = false);
        let mut io_tick = false;
        let mut ops = Vec::with_capacity(tick.ops.len() * 2 + 1);
        for g in tick.gates() {
            for &q in &g.targets {
                touched[q as usize] = true;
            }
            io_tick |= g.kind.is_reset() || g.kind.is_measurement();
            let before = match g.kind {
                GateKind::MeasureZ => channel(NoiseKind::FlipX, n.p, g.targets.clone()),
                GateKind::MeasureX => channel(NoiseKind::FlipZ, n.p, g.targets.clone()),
                _ => None,
            };
            let after = match g.kind {
                GateKind::ResetZ => channel(NoiseKind::FlipX, n.p, g.targets.clone()),
                GateKind::ResetX => channel(NoiseKind::FlipZ, n.p, g.targets.clone()),
                GateKind::H | GateKind::Idle => {
                    channel(NoiseKind::Depolarize1, n.p, g.targets.clone())
                }
                GateKind::Cnot => {
                    let p = if g.boundary { n.boundary_p() } else { n.p };
                    channel(NoiseKind::Depolarize2, p, g.targets.clone())
                }
                GateKind::MeasureZ | GateKind::MeasureX => None,
            };
            ops.extend(before);
            ops.push(Operation::Gate(g.clone()));
            ops.extend(after);
        }
        if n.idle_in_reset_measure_ticks || !io_tick {
            let idle: Vec<Qubit> = (0..c.num_qubits as Qubit)
                .filter(|&q| !touched[q as usize])
                .collect();
            if !idle.is_empty() {
                ops.extend(channel(NoiseKind::Depolarize1, n.p, idle));
            }
        }
        out.ticks.push(Tick { ops });
    }
    Ok(out)
}
