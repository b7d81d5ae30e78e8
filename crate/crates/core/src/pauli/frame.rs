//! Bit-packed Pauli-frame sampler.
//!
//! A block of 64 shots is simulated at once: each qubit carries one `u64` of
//! X-flip bits and one of Z-flip bits, bit `i` belonging to shot
//! `64 * block + i`. Noise draws for a (block, site) pair come from their
//! own keyed stream, so any partition of blocks over workers produces the
//! same bits.

use rayon::prelude::*;

use super::rng::{BernoulliWord, KeyedStream};
use super::{Basis, GateKind, Pauli};
use crate::circuit::{Circuit, NoiseKind, Operation, Qubit};

/// One elementary noise location: a two-qubit channel, or one target of a
/// single-qubit channel. Sites are numbered in program order.
#[derive(Clone, Debug, PartialEq)]
pub struct FaultSite {
    pub kind: NoiseKind,
    pub probability: f64,
    pub qubits: Vec<Qubit>,
    /// Index of the first gate that comes after this site.
    pub before_gate: usize,
}

impl FaultSite {
    pub fn num_outcomes(&self) -> usize {
        match self.kind {
            NoiseKind::Depolarize1 => 3,
            NoiseKind::Depolarize2 => 15,
            NoiseKind::FlipX | NoiseKind::FlipZ => 1,
        }
    }

    /// Probability of each individual outcome.
    pub fn outcome_probability(&self) -> f64 {
        self.probability / self.num_outcomes() as f64
    }

    /// Pauli applied to `qubits` by outcome `o`.
    pub fn outcome(&self, o: usize) -> Vec<Pauli> {
        match self.kind {
            NoiseKind::Depolarize1 => vec![Pauli::ALL[o + 1]],
            NoiseKind::Depolarize2 => vec![Pauli::ALL[(o + 1) / 4], Pauli::ALL[(o + 1) % 4]],
            NoiseKind::FlipX => vec![Pauli::X],
            NoiseKind::FlipZ => vec![Pauli::Z],
        }
    }
}

impl Circuit {
    /// All noise sites in program order.
    pub fn fault_sites(&self) -> Vec<FaultSite> {
        let mut sites = Vec::new();
        let mut gates = 0usize;
        for tick in &self.ticks {
            for op in &tick.ops {
                match op {
                    Operation::Gate(_) => gates += 1,
                    Operation::Noise(c) => {
                        if c.kind == NoiseKind::Depolarize2 {
                            sites.push(FaultSite {
                                kind: c.kind,
                                probability: c.probability,
                                qubits: c.targets.clone(),
                                before_gate: gates,
                            });
                        } else {
                            for &q in &c.targets {
                                sites.push(FaultSite {
                                    kind: c.kind,
                                    probability: c.probability,
                                    qubits: vec![q],
                                    before_gate: gates,
                                });
                            }
                        }
                    }
                }
            }
        }
        sites
    }

    /// Index of the first gate in `tick` (or the total gate count past the end).
    pub fn gate_index_at_tick(&self, tick: usize) -> usize {
        self.ticks[..tick.min(self.ticks.len())]
            .iter()
            .map(|t| t.gates().count())
            .sum()
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Reset(u32),
    H(u32),
    Cnot(u32, u32),
    MeasZ(u32),
    MeasX(u32),
    Noise1 { kind: NoiseKind, q: u32, site: u32 },
    Noise2 { a: u32, b: u32, site: u32 },
}

/// A deterministic Pauli inserted just before gate `before_gate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fault {
    pub before_gate: usize,
    pub qubit: Qubit,
    pub pauli: Pauli,
}

/// Result of a single noiseless propagation with injected faults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaultResult {
    pub measurements: Vec<bool>,
    pub detectors: Vec<bool>,
    pub observables: Vec<bool>,
}

/// One fired noise outcome, recorded in event-log mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaultEvent {
    pub site: u32,
    pub shot: u64,
    pub outcome: u8,
}

/// Circuit compiled for repeated sampling.
#[derive(Clone, Debug)]
pub struct FrameProgram {
    num_qubits: usize,
    num_measurements: usize,
    ops: Vec<Op>,
    /// Position in `ops` of each gate; `None` for idle markers.
    gate_ops: Vec<Option<usize>>,
    sites: Vec<FaultSite>,
    samplers: Vec<BernoulliWord>,
    detectors: Vec<Vec<u32>>,
    observables: Vec<Vec<u32>>,
}

/// Detector and observable bits of a contiguous run of shots, stored as
/// 64-shot words: `detector_words[block * num_detectors + d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotBatch {
    pub num_shots: u64,
    pub num_detectors: usize,
    pub num_observables: usize,
    pub detector_words: Vec<u64>,
    pub observable_words: Vec<u64>,
}

impl ShotBatch {
    pub fn num_blocks(&self) -> usize {
        self.num_shots.div_ceil(64) as usize
    }

    pub fn detector(&self, shot: u64, d: usize) -> bool {
        let w = self.detector_words[(shot / 64) as usize * self.num_detectors + d];
        (w >> (shot % 64)) & 1 == 1
    }

    pub fn observable(&self, shot: u64, k: usize) -> bool {
        let w = self.observable_words[(shot / 64) as usize * self.num_observables + k];
        (w >> (shot % 64)) & 1 == 1
    }

    /// Fired detectors of one shot, ascending.
    pub fn fired(&self, shot: u64) -> Vec<usize> {
        (0..self.num_detectors)
            .filter(|&d| self.detector(shot, d))
            .collect()
    }

    /// Observable bits of one shot packed into an integer.
    pub fn observable_mask(&self, shot: u64) -> u64 {
        (0..self.num_observables)
            .filter(|&k| self.observable(shot, k))
            .fold(0, |m, k| m | (1 << k))
    }
}

/// Detector and observable words of one 64-shot block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOutcome {
    pub block: u64,
    /// Bit `i` set iff shot `64 * block + i` is part of the run.
    pub live: u64,
    pub detectors: Vec<u64>,
    pub observables: Vec<u64>,
}

impl BlockOutcome {
    /// Fired detectors per live shot, indexed by bit position.
    pub fn fired_lists(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); 64];
        for (d, &w) in self.detectors.iter().enumerate() {
            let mut w = w & self.live;
            while w != 0 {
                let i = w.trailing_zeros() as usize;
                out[i].push(d as u32);
                w &= w - 1;
            }
        }
        out
    }

    pub fn observable_mask(&self, bit: u32) -> u64 {
        self.observables
            .iter()
            .enumerate()
            .filter(|(_, &w)| (w >> bit) & 1 == 1)
            .fold(0, |m, (k, _)| m | (1 << k))
    }
}

struct Scratch {
    x: Vec<u64>,
    z: Vec<u64>,
    meas: Vec<u64>,
}

impl FrameProgram {
    pub fn compile(c: &Circuit) -> FrameProgram {
        let sites = c.fault_sites();
        let samplers = sites.iter().map(|s| BernoulliWord::new(s.probability)).collect();
        let mut ops = Vec::new();
        let mut gate_ops = Vec::new();
        let mut site = 0u32;
        let mut meas = 0usize;
        for tick in &c.ticks {
            for op in &tick.ops {
                match op {
                    Operation::Gate(g) => {
                        gate_ops.push((g.kind != GateKind::Idle).then_some(ops.len()));
                        let t = &g.targets;
                        match g.kind {
                            GateKind::ResetZ | GateKind::ResetX => ops.push(Op::Reset(t[0])),
                            GateKind::H => ops.push(Op::H(t[0])),
                            GateKind::Cnot => ops.push(Op::Cnot(t[0], t[1])),
                            GateKind::MeasureZ => {
                                ops.push(Op::MeasZ(t[0]));
                                meas += 1;
                            }
                            GateKind::MeasureX => {
                                ops.push(Op::MeasX(t[0]));
                                meas += 1;
                            }
                            GateKind::Idle => {}
                        }
                    }
                    Operation::Noise(ch) => {
                        if ch.kind == NoiseKind::Depolarize2 {
                            if ch.probability > 0.0 {
                                ops.push(Op::Noise2 {
                                    a: ch.targets[0],
                                    b: ch.targets[1],
                                    site,
                                });
                            }
                            site += 1;
                        } else {
                            for &q in &ch.targets {
                                if ch.probability > 0.0 {
                                    ops.push(Op::Noise1 {
                                        kind: ch.kind,
                                        q,
                                        site,
                                    });
                                }
                                site += 1;
                            }
                        }
                    }
                }
            }
        }
        let to_u32 = |v: &Vec<usize>| v.iter().map(|&m| m as u32).collect();
        FrameProgram {
            num_qubits: c.num_qubits,
            num_measurements: meas,
            ops,
            gate_ops,
            sites,
            samplers,
            detectors: c.detectors.iter().map(|d| to_u32(&d.measurements)).collect(),
            observables: c.observables.iter().map(to_u32).collect(),
        }
    }

    pub fn num_detectors(&self) -> usize {
        self.detectors.len()
    }

    pub fn num_observables(&self) -> usize {
        self.observables.len()
    }

    pub fn num_measurements(&self) -> usize {
        self.num_measurements
    }

    pub fn sites(&self) -> &[FaultSite] {
        &self.sites
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            x: vec![0; self.num_qubits],
            z: vec![0; self.num_qubits],
            meas: vec![0; self.num_measurements],
        }
    }

    fn run_ops(
        &self,
        ops: &[Op],
        seed: u64,
        block: u64,
        s: &mut Scratch,
        m: &mut usize,
        mut events: Option<&mut Vec<FaultEvent>>,
    ) {
        for op in ops {
            match *op {
                Op::Reset(q) => {
                    s.x[q as usize] = 0;
                    s.z[q as usize] = 0;
                }
                Op::H(q) => {
                    let q = q as usize;
                    std::mem::swap(&mut s.x[q], &mut s.z[q]);
                }
                Op::Cnot(c, t) => {
                    let (c, t) = (c as usize, t as usize);
                    s.x[t] ^= s.x[c];
                    s.z[c] ^= s.z[t];
                }
                Op::MeasZ(q) => {
                    s.meas[*m] = s.x[q as usize];
                    *m += 1;
                }
                Op::MeasX(q) => {
                    s.meas[*m] = s.z[q as usize];
                    *m += 1;
                }
                Op::Noise1 { kind, q, site } => {
                    let mut rng = KeyedStream::new(seed, block, site as u64);
                    let mask = self.samplers[site as usize].sample(&mut rng);
                    if mask == 0 {
                        continue;
                    }
                    let q = q as usize;
                    match kind {
                        NoiseKind::FlipX => {
                            s.x[q] ^= mask;
                            log_all(&mut events, site, block, mask, 0);
                        }
                        NoiseKind::FlipZ => {
                            s.z[q] ^= mask;
                            log_all(&mut events, site, block, mask, 0);
                        }
                        _ => {
                            let mut w = mask;
                            while w != 0 {
                                let bit = w & w.wrapping_neg();
                                let o = rng.below(3);
                                let p = Pauli::ALL[o as usize + 1];
                                if p.x_bit() {
                                    s.x[q] ^= bit;
                                }
                                if p.z_bit() {
                                    s.z[q] ^= bit;
                                }
                                if let Some(ev) = events.as_deref_mut() {
                                    ev.push(FaultEvent {
                                        site,
                                        shot: block * 64 + bit.trailing_zeros() as u64,
                                        outcome: o as u8,
                                    });
                                }
                                w &= w - 1;
                            }
                        }
                    }
                }
                Op::Noise2 { a, b, site } => {
                    let mut rng = KeyedStream::new(seed, block, site as u64);
                    let mask = self.samplers[site as usize].sample(&mut rng);
                    let (a, b) = (a as usize, b as usize);
                    let mut w = mask;
                    while w != 0 {
                        let bit = w & w.wrapping_neg();
                        let o = rng.below(15);
                        let v = o + 1;
                        let (pa, pb) = (Pauli::ALL[(v / 4) as usize], Pauli::ALL[(v % 4) as usize]);
                        if pa.x_bit() {
                            s.x[a] ^= bit;
                        }
                        if pa.z_bit() {
                            s.z[a] ^= bit;
                        }
                        if pb.x_bit() {
                            s.x[b] ^= bit;
                        }
                        if pb.z_bit() {
                            s.z[b] ^= bit;
                        }
                        if let Some(ev) = events.as_deref_mut() {
                            ev.push(FaultEvent {
                                site,
                                shot: block * 64 + bit.trailing_zeros() as u64,
                                outcome: o as u8,
                            });
                        }
                        w &= w - 1;
                    }
                }
            }
        }
    }

    fn finish(&self, block: u64, live: u64, s: &Scratch) -> BlockOutcome {
        let parity = |ms: &Vec<u32>| ms.iter().fold(0u64, |w, &m| w ^ s.meas[m as usize]) & live;
        BlockOutcome {
            block,
            live,
            detectors: self.detectors.iter().map(parity).collect(),
            observables: self.observables.iter().map(parity).collect(),
        }
    }

    /// Samples one 64-shot block. `live` masks out shots past the end of a run.
    pub fn run_block(&self, seed: u64, block: u64, live: u64) -> BlockOutcome {
        let mut s = self.scratch();
        let mut m = 0;
        self.run_ops(&self.ops, seed, block, &mut s, &mut m, None);
        self.finish(block, live, &s)
    }

    /// As [`run_block`](Self::run_block), also returning every fired noise outcome.
    pub fn run_block_with_events(
        &self,
        seed: u64,
        block: u64,
        live: u64,
    ) -> (BlockOutcome, Vec<FaultEvent>) {
        let mut s = self.scratch();
        let mut m = 0;
        let mut events = Vec::new();
        self.run_ops(&self.ops, seed, block, &mut s, &mut m, Some(&mut events));
        events.retain(|e| (live >> (e.shot % 64)) & 1 == 1);
        (self.finish(block, live, &s), events)
    }

    /// Samples shots `[first_block * 64, first_block * 64 + shots)`.
    pub fn sample_range(&self, seed: u64, first_block: u64, shots: u64) -> ShotBatch {
        let blocks = shots.div_ceil(64);
        let outcomes: Vec<BlockOutcome> = (0..blocks)
            .into_par_iter()
            .map(|b| self.run_block(seed, first_block + b, live_mask(shots, b)))
            .collect();
        let mut batch = ShotBatch {
            num_shots: shots,
            num_detectors: self.num_detectors(),
            num_observables: self.num_observables(),
            detector_words: Vec::with_capacity(blocks as usize * self.num_detectors()),
            observable_words: Vec::with_capacity(blocks as usize * self.num_observables()),
        };
        for o in outcomes {
            batch.detector_words.extend(o.detectors);
            batch.observable_words.extend(o.observables);
        }
        batch
    }

    pub fn sample(&self, shots: u64, seed: u64) -> ShotBatch {
        self.sample_range(seed, 0, shots)
    }

    /// Noiseless single-shot propagation of deterministic faults.
    pub fn propagate(&self, faults: &[Fault]) -> FaultResult {
        let mut s = self.scratch();
        let mut m = 0usize;
        let mut sorted: Vec<&Fault> = faults.iter().collect();
        sorted.sort_by_key(|f| f.before_gate);
        let mut next = 0;
        for g in 0..=self.gate_ops.len() {
            while next < sorted.len() && sorted[next].before_gate == g {
                let f = sorted[next];
                if f.pauli.x_bit() {
                    s.x[f.qubit as usize] ^= 1;
                }
                if f.pauli.z_bit() {
                    s.z[f.qubit as usize] ^= 1;
                }
                next += 1;
            }
            if let Some(Some(i)) = self.gate_ops.get(g) {
                self.run_ops(&self.ops[*i..=*i], 0, 0, &mut s, &mut m, None);
            }
        }
        let result = self.finish(0, 1, &s);
        FaultResult {
            measurements: s.meas.iter().map(|&w| w & 1 == 1).collect(),
            detectors: result.detectors.iter().map(|&w| w == 1).collect(),
            observables: result.observables.iter().map(|&w| w == 1).collect(),
        }
    }
}

/// Live-shot mask of block `b` in a run of `shots` shots.
pub fn live_mask(shots: u64, b: u64) -> u64 {
    let rem = shots - b * 64;
    if rem >= 64 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

fn log_all(events: &mut Option<&mut Vec<FaultEvent>>, site: u32, block: u64, mask: u64, o: u8) {
    if let Some(ev) = events.as_deref_mut() {
        let mut w = mask;
        while w != 0 {
            ev.push(FaultEvent {
                site,
                shot: block * 64 + w.trailing_zeros() as u64,
                outcome: o,
            });
            w &= w - 1;
        }
    }
}

/// Convenience: compile and sample.
pub fn sample(c: &Circuit, shots: u64, seed: u64) -> ShotBatch {
    FrameProgram::compile(c).sample(shots, seed)
}

/// Measurement basis of a measure instruction.
pub fn measured_basis(kind: GateKind) -> Option<Basis> {
    match kind {
        GateKind::MeasureZ => Some(Basis::Z),
        GateKind::MeasureX => Some(Basis::X),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Detector, Instruction, NoiseChannel, Tick};

    /// Repetition-code style toy: data 0,1,2 and parity checks 3 (0,1), 4 (1,2).
    fn rep_code(p: f64) -> Circuit {
        let mut c = Circuit::new(5);
        let mut t = Tick::default();
        for q in 0..5 {
            t.push_gate(Instruction::new(GateKind::ResetZ, vec![q]));
        }
        c.ticks.push(t);
        let mut t = Tick::default();
        t.ops.push(Operation::Noise(NoiseChannel {
            kind: NoiseKind::Depolarize1,
            probability: p,
            targets: vec![0, 1, 2],
        }));
        c.ticks.push(t);
        for (a, b) in [(0, 1), (1, 2)] {
            let mut t = Tick::default();
            t.push_gate(Instruction::cnot(a, 3, false));
            t.push_gate(Instruction::cnot(b, 4, false));
            c.ticks.push(t);
        }
        let mut t = Tick::default();
        for q in 0..5 {
            t.push_gate(Instruction::new(GateKind::MeasureZ, vec![q]));
        }
        c.ticks.push(t);
        c.detectors.push(Detector {
            measurements: vec![3],
            coords: [0.0; 3],
        });
        c.detectors.push(Detector {
            measurements: vec![4],
            coords: [1.0, 0.0, 0.0],
        });
        c.observables.push(vec![0]);
        c
    }

    #[test]
    fn zero_noise_gives_zero_detectors() {
        let b = sample(&rep_code(0.0), 1000, 3);
        assert!(b.detector_words.iter().all(|&w| w == 0));
    }

    #[test]
    fn deterministic_x_fires_adjacent_checks() {
        let p = FrameProgram::compile(&rep_code(0.0));
        let r = p.propagate(&[Fault {
            before_gate: 5,
            qubit: 1,
            pauli: Pauli::X,
        }]);
        assert_eq!(r.detectors, vec![true, true]);
        assert_eq!(r.observables, vec![false]);
        let r = p.propagate(&[Fault {
            before_gate: 5,
            qubit: 0,
            pauli: Pauli::Y,
        }]);
        assert_eq!(r.detectors, vec![true, false]);
        assert_eq!(r.observables, vec![true]);
    }

    #[test]
    fn sampling_is_independent_of_chunking() {
        let p = FrameProgram::compile(&rep_code(0.2));
        let whole = p.sample(640, 11);
        let a = p.sample_range(11, 0, 320);
        let b = p.sample_range(11, 5, 320);
        let mut words = a.detector_words.clone();
        words.extend(b.detector_words);
        assert_eq!(whole.detector_words, words);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| p.sample(640, 11));
        assert_eq!(single, whole);
    }

    #[test]
    fn partial_blocks_are_masked() {
        let b = sample(&rep_code(0.5), 70, 1);
        assert_eq!(b.num_blocks(), 2);
        assert_eq!(b.detector_words[2] >> 6, 0);
        assert_eq!(b.detector_words[3] >> 6, 0);
    }

    #[test]
    fn x_or_y_on_middle_qubit_fires_both_checks() {
        // P(both fire) = P(X or Y on qubit 1) = 2p/3 (to first order, exact
        // here since only qubit 1 touches both).
        let p = 0.3;
        let b = sample(&rep_code(p), 200_000, 5);
        let both = (0..b.num_shots)
            .filter(|&s| b.detector(s, 0) && b.detector(s, 1))
            .count() as f64
            / b.num_shots as f64;
        // Both fire iff qubit 1 flips and qubits 0, 2 do not flip, or
        // qubit 1 does not flip and both 0 and 2 flip.
        let f = 2.0 * p / 3.0;
        let expected = f * (1.0 - f) * (1.0 - f) + (1.0 - f) * f * f;
        let sigma = (expected * (1.0 - expected) / b.num_shots as f64).sqrt();
        assert!((both - expected).abs() < 4.0 * sigma, "{both} vs {expected}");
    }

    #[test]
    fn event_log_matches_sampled_bits() {
        let prog = FrameProgram::compile(&rep_code(0.1));
        let (out, events) = prog.run_block_with_events(2, 0, u64::MAX);
        let mut expect = [0u64; 2];
        for e in events {
            let pauli = prog.sites()[e.site as usize].outcome(e.outcome as usize)[0];
            let q = prog.sites()[e.site as usize].qubits[0];
            if pauli.x_bit() {
                if q <= 1 {
                    expect[0] ^= 1 << (e.shot % 64);
                }
                if q >= 1 {
                    expect[1] ^= 1 << (e.shot % 64);
                }
            }
        }
        assert_eq!(out.detectors, expect.to_vec());
    }
}
