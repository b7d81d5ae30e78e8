use serde::Serialize;

use super::{build_interface, InterfaceConfig, Layout, LayoutError, Orientation, Stabilizer};
use crate::circuit::{Circuit, Detector, Instruction, Qubit, Tick};
use crate::pauli::frame::{Fault, FrameProgram};
use crate::pauli::{Basis, GateKind};

/// Noiseless annotated memory circuit plus what it measures.
#[derive(Clone, Debug, Serialize)]
pub struct MemoryExperiment {
    #[serde(skip)]
    pub circuit: Circuit,
    pub basis: Basis,
    pub rounds: usize,
    pub orientation: Option<Orientation>,
    pub num_detectors: usize,
}

fn reset_kind(b: Basis) -> GateKind {
    match b {
        Basis::Z => GateKind::ResetZ,
        Basis::X => GateKind::ResetX,
    }
}

fn measure_kind(b: Basis) -> GateKind {
    match b {
        Basis::Z => GateKind::MeasureZ,
        Basis::X => GateKind::MeasureX,
    }
}

struct PendingByproduct {
    source: usize,
    qubit: Qubit,
    pauli: Basis,
    /// Circuit tick after which the Pauli acts.
    tick: usize,
}

/// Builds the memory experiment for an interface configuration.
pub fn build_memory_experiment(cfg: &InterfaceConfig, rounds: usize) -> Result<MemoryExperiment, LayoutError> {
    let layout = build_interface(cfg)?;
    layout_memory_experiment(&layout, cfg.basis, rounds)
}

/// Builds a memory experiment on any layout: data prepared in `basis`,
/// `rounds` identical rounds, then transversal readout in `basis`.
pub fn layout_memory_experiment(
    layout: &Layout,
    basis: Basis,
    rounds: usize,
) -> Result<MemoryExperiment, LayoutError> {
    if rounds == 0 {
        return Err(LayoutError::InvalidConfig("at least one round is required".into()));
    }
    let data = layout.data_qubits();
    let mut c = Circuit::new(layout.num_qubits());
    let mut num_meas = 0usize;
    // outcome[r][s] = measurement indices whose parity is stabilizer s in round r.
    let mut outcome: Vec<Vec<Vec<usize>>> = Vec::with_capacity(rounds);
    let mut pending = Vec::new();
    let mut data_meas = vec![0usize; layout.num_qubits()];

    for r in 0..rounds {
        let round_start = c.ticks.len();
        let mut reset = Tick::default();
        if r == 0 {
            for &q in &data {
                reset.push_gate(Instruction::new(reset_kind(basis), vec![q]));
            }
        }
        for s in &layout.stabilizers {
            for &(q, b) in &s.resets {
                reset.push_gate(Instruction::new(reset_kind(b), vec![q]));
            }
        }
        c.ticks.push(reset);
        for t in 1..=layout.depth {
            let mut tick = Tick::default();
            for s in &layout.stabilizers {
                for g in s.cnots.iter().filter(|g| g.tick == t) {
                    tick.push_gate(Instruction::cnot(g.control, g.target, g.boundary));
                }
            }
            c.ticks.push(tick);
        }
        let mut measure = Tick::default();
        let mut round_outcomes = Vec::with_capacity(layout.stabilizers.len());
        for s in &layout.stabilizers {
            let first = num_meas;
            for &(q, b) in &s.measurements {
                measure.push_gate(Instruction::new(measure_kind(b), vec![q]));
                num_meas += 1;
            }
            round_outcomes.push(s.outcome.iter().map(|&i| first + i).collect());
            for bp in &s.byproducts {
                pending.push(PendingByproduct {
                    source: first + bp.source,
                    qubit: bp.qubit,
                    pauli: bp.pauli,
                    tick: round_start + bp.after_tick,
                });
            }
        }
        if r + 1 == rounds {
            for &q in &data {
                measure.push_gate(Instruction::new(measure_kind(basis), vec![q]));
                data_meas[q as usize] = num_meas;
                num_meas += 1;
            }
        }
        outcome.push(round_outcomes);
        c.ticks.push(measure);
    }

    let det = |ms: Vec<usize>, s: &Stabilizer, t: usize| Detector {
        measurements: ms,
        coords: [s.coord[0], s.coord[1], t as f64],
    };
    for (i, s) in layout.stabilizers.iter().enumerate() {
        if s.kind == basis {
            c.detectors.push(det(outcome[0][i].clone(), s, 0));
        }
    }
    for r in 1..rounds {
        for (i, s) in layout.stabilizers.iter().enumerate() {
            let mut ms = outcome[r - 1][i].clone();
            ms.extend(&outcome[r][i]);
            c.detectors.push(det(ms, s, r));
        }
    }
    for (i, s) in layout.stabilizers.iter().enumerate() {
        if s.kind == basis {
            let mut ms = outcome[rounds - 1][i].clone();
            ms.extend(s.data.iter().map(|&q| data_meas[q as usize]));
            c.detectors.push(det(ms, s, rounds));
        }
    }
    let logical = layout.observable(basis);
    c.observables
        .push(logical.support.iter().map(|&q| data_meas[q as usize]).collect());

    fold_byproducts(&mut c, &mut pending);
    for d in &mut c.detectors {
        d.measurements.sort_unstable();
    }
    for o in &mut c.observables {
        o.sort_unstable();
    }

    Ok(MemoryExperiment {
        num_detectors: c.detectors.len(),
        circuit: c,
        basis,
        rounds,
        orientation: logical.orientation,
    })
}

/// Rewrites detectors and observables so they read the Pauli-frame-corrected
/// outcomes. A conditional Pauli flips some set F of later measurements; any
/// parity that contains an odd number of F picks up the condition bit.
///
/// An earlier byproduct can flip the source of a later one (a data qubit
/// carries it into the next Bell pair), so the latest byproducts are folded
/// first: by the time an earlier one is processed, the parities already
/// mention every later source it influences.
fn fold_byproducts(c: &mut Circuit, pending: &mut [PendingByproduct]) {
    if pending.is_empty() {
        return;
    }
    pending.sort_by_key(|bp| std::cmp::Reverse(bp.tick));
    let program = FrameProgram::compile(c);
    for bp in pending.iter() {
        let fault = Fault {
            before_gate: c.gate_index_at_tick(bp.tick + 1),
            qubit: bp.qubit,
            pauli: bp.pauli.pauli(),
        };
        let flips = program.propagate(&[fault]).measurements;
        let toggle = |ms: &mut Vec<usize>| {
            let odd = ms.iter().filter(|&&m| flips[m]).count() % 2 == 1;
            if odd {
                match ms.iter().position(|&m| m == bp.source) {
                    Some(i) => {
                        ms.swap_remove(i);
                    }
                    None => ms.push(bp.source),
                }
            }
        };
        for d in &mut c.detectors {
            toggle(&mut d.measurements);
        }
        for o in &mut c.observables {
            toggle(o);
        }
    }
}
