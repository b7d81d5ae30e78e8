//! Reference stabilizer simulator.
//!
//! An Aaronson–Gottesman tableau whose row signs are affine GF(2) forms over
//! the outcomes of random measurements, rather than concrete bits. One run
//! therefore covers every branch: an outcome is deterministic exactly when
//! its form has no variables, and a detector is deterministic exactly when
//! the XOR of its measurement forms is constant.

use thiserror::Error;

use super::{GateKind, Pauli};
use crate::circuit::{Circuit, Operation};

/// Affine form over measurement variables. Bit 0 is the constant term,
/// bit `v + 1` is variable `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Form(Vec<u64>);

impl Form {
    pub fn constant(b: bool) -> Self {
        Form(vec![b as u64])
    }

    pub fn variable(v: usize) -> Self {
        let mut f = Form::default();
        f.toggle(v + 1);
        f
    }

    fn toggle(&mut self, bit: usize) {
        let w = bit / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] ^= 1 << (bit % 64);
    }

    pub fn xor_assign(&mut self, other: &Form) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    pub fn flip(&mut self) {
        self.toggle(0);
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &w)| {
            let w = if i == 0 { w & !1 } else { w };
            w == 0
        })
    }

    pub fn constant_term(&self) -> bool {
        self.0.first().is_some_and(|w| w & 1 == 1)
    }

    /// The value if the form has no variables.
    pub fn value(&self) -> Option<bool> {
        self.is_constant().then(|| self.constant_term())
    }
}

#[derive(Clone, Debug)]
pub struct Tableau {
    n: usize,
    words: usize,
    /// Rows `0..n` are destabilizers, `n..2n` stabilizers.
    x: Vec<Vec<u64>>,
    z: Vec<Vec<u64>>,
    sign: Vec<Form>,
    num_vars: usize,
}

impl Tableau {
    /// All qubits in |0⟩.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut x = vec![vec![0u64; words]; 2 * n];
        let mut z = vec![vec![0u64; words]; 2 * n];
        for q in 0..n {
            x[q][q / 64] |= 1 << (q % 64);
            z[n + q][q / 64] |= 1 << (q % 64);
        }
        Tableau {
            n,
            words,
            x,
            z,
            sign: vec![Form::default(); 2 * n],
            num_vars: 0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_variables(&self) -> usize {
        self.num_vars
    }

    #[inline]
    fn bit(v: &[u64], q: usize) -> bool {
        (v[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn h(&mut self, q: usize) {
        let (w, m) = (q / 64, 1u64 << (q % 64));
        for r in 0..2 * self.n {
            let (xb, zb) = (self.x[r][w] & m != 0, self.z[r][w] & m != 0);
            if xb && zb {
                self.sign[r].flip();
            }
            if xb != zb {
                self.x[r][w] ^= m;
                self.z[r][w] ^= m;
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        for r in 0..2 * self.n {
            let (xc, zc) = (Self::bit(&self.x[r], c), Self::bit(&self.z[r], c));
            let (xt, zt) = (Self::bit(&self.x[r], t), Self::bit(&self.z[r], t));
            if xc && zt && (xt == zc) {
                self.sign[r].flip();
            }
            if xc {
                self.x[r][t / 64] ^= 1 << (t % 64);
            }
            if zt {
                self.z[r][c / 64] ^= 1 << (c % 64);
            }
        }
    }

    /// Applies a Pauli whose presence is itself conditioned on `cond`.
    pub fn apply_pauli_if(&mut self, q: usize, p: Pauli, cond: &Form) {
        for r in 0..2 * self.n {
            let anti = (p.x_bit() && Self::bit(&self.z[r], q)) ^ (p.z_bit() && Self::bit(&self.x[r], q));
            if anti {
                self.sign[r].xor_assign(cond);
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        self.apply_pauli_if(q, p, &Form::constant(true));
    }

    /// Row `h` ← row `i` · row `h`, tracking the sign symbolically.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut phase = 0i32;
        for q in 0..self.n {
            let (x1, z1) = (Self::bit(&self.x[i], q), Self::bit(&self.z[i], q));
            let (x2, z2) = (Self::bit(&self.x[h], q), Self::bit(&self.z[h], q));
            phase += g(x1, z1, x2, z2);
        }
        let extra = phase.rem_euclid(4) == 2;
        let si = self.sign[i].clone();
        self.sign[h].xor_assign(&si);
        if extra {
            self.sign[h].flip();
        }
        for w in 0..self.words {
            let (xi, zi) = (self.x[i][w], self.z[i][w]);
            self.x[h][w] ^= xi;
            self.z[h][w] ^= zi;
        }
    }

    /// Measures Z on `q`. Returns the outcome as a form over variables.
    pub fn measure_z(&mut self, q: usize) -> Form {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&r| Self::bit(&self.x[r], q)) {
            for r in 0..2 * n {
                if r != p && Self::bit(&self.x[r], q) {
                    self.rowsum(r, p);
                }
            }
            self.x[p - n] = self.x[p].clone();
            self.z[p - n] = self.z[p].clone();
            self.sign[p - n] = self.sign[p].clone();
            self.x[p].iter_mut().for_each(|w| *w = 0);
            self.z[p].iter_mut().for_each(|w| *w = 0);
            self.z[p][q / 64] |= 1 << (q % 64);
            let v = Form::variable(self.num_vars);
            self.num_vars += 1;
            self.sign[p] = v.clone();
            v
        } else {
            // Deterministic: accumulate the stabilizers picked out by the
            // destabilizers that anticommute with Z_q into a scratch row.
            self.x.push(vec![0; self.words]);
            self.z.push(vec![0; self.words]);
            self.sign.push(Form::default());
            let scratch = 2 * n;
            for r in 0..n {
                if Self::bit(&self.x[r], q) {
                    self.rowsum(scratch, r + n);
                }
            }
            self.x.pop();
            self.z.pop();
            self.sign.pop().unwrap_or_default()
        }
    }

    pub fn measure_x(&mut self, q: usize) -> Form {
        self.h(q);
        let f = self.measure_z(q);
        self.h(q);
        f
    }

    pub fn reset_z(&mut self, q: usize) {
        let f = self.measure_z(q);
        self.apply_pauli_if(q, Pauli::X, &f);
    }

    pub fn reset_x(&mut self, q: usize) {
        let f = self.measure_x(q);
        self.apply_pauli_if(q, Pauli::Z, &f);
    }
}

fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementInfo {
    pub deterministic: bool,
    /// Outcome if deterministic.
    pub value: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismReport {
    pub measurements: Vec<MeasurementInfo>,
    /// Deterministic value of each observable.
    pub observables: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DeterminismError {
    #[error("reference simulation requires a noiseless circuit")]
    Noisy,
    #[error("detector {detector} (round {round}, at {x},{y}) is not deterministic", x = coords[0], y = coords[1])]
    NondeterministicDetector {
        detector: usize,
        round: f64,
        coords: [f64; 3],
    },
    #[error("detector {detector} (round {round}, at {x},{y}) is deterministically 1", x = coords[0], y = coords[1])]
    DetectorNotZero {
        detector: usize,
        round: f64,
        coords: [f64; 3],
    },
    #[error("observable {0} is not deterministic")]
    NondeterministicObservable(usize),
}

/// Runs a noiseless circuit symbolically and returns the forms of every
/// measurement in program order.
pub fn measurement_forms(c: &Circuit) -> Result<Vec<Form>, DeterminismError> {
    let mut t = Tableau::new(c.num_qubits);
    let mut forms = Vec::new();
    for tick in &c.ticks {
        for op in &tick.ops {
            let g = match op {
                Operation::Gate(g) => g,
                Operation::Noise(_) => return Err(DeterminismError::Noisy),
            };
            let q = g.targets[0] as usize;
            match g.kind {
                GateKind::ResetZ => t.reset_z(q),
                GateKind::ResetX => t.reset_x(q),
                GateKind::H => t.h(q),
                GateKind::Cnot => t.cnot(q, g.targets[1] as usize),
                GateKind::MeasureZ => forms.push(t.measure_z(q)),
                GateKind::MeasureX => forms.push(t.measure_x(q)),
                GateKind::Idle => {}
            }
        }
    }
    Ok(forms)
}

/// Checks that every detector is deterministically zero and every
/// observable deterministic.
pub fn reference_run(c: &Circuit) -> Result<DeterminismReport, DeterminismError> {
    let forms = measurement_forms(c)?;
    let parity = |ms: &[usize]| {
        let mut f = Form::default();
        for &m in ms {
            f.xor_assign(&forms[m]);
        }
        f
    };
    for (i, det) in c.detectors.iter().enumerate() {
        match parity(&det.measurements).value() {
            None => {
                return Err(DeterminismError::NondeterministicDetector {
                    detector: i,
                    round: det.coords[2],
                    coords: det.coords,
                })
            }
            Some(true) => {
                return Err(DeterminismError::DetectorNotZero {
                    detector: i,
                    round: det.coords[2],
                    coords: det.coords,
                })
            }
            Some(false) => {}
        }
    }
    let observables = c
        .observables
        .iter()
        .enumerate()
        .map(|(k, ms)| parity(ms).value().ok_or(DeterminismError::NondeterministicObservable(k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DeterminismReport {
        measurements: forms
            .iter()
            .map(|f| MeasurementInfo {
                deterministic: f.is_constant(),
                value: f.value(),
            })
            .collect(),
        observables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Detector, Instruction, Tick};

    fn circuit(n: usize, ticks: Vec<Vec<Instruction>>) -> Circuit {
        let mut c = Circuit::new(n);
        for gates in ticks {
            let mut t = Tick::default();
            for g in gates {
                t.push_gate(g);
            }
            c.ticks.push(t);
        }
        c
    }

    fn one(kind: GateKind, q: u32) -> Instruction {
        Instruction::new(kind, vec![q])
    }

    #[test]
    fn measure_z_after_reset_is_zero() {
        let c = circuit(1, vec![vec![one(GateKind::ResetZ, 0)], vec![one(GateKind::MeasureZ, 0)]]);
        let r = reference_run(&c).unwrap();
        assert_eq!(r.measurements[0].value, Some(false));
    }

    #[test]
    fn measure_x_after_reset_z_is_random() {
        let c = circuit(1, vec![vec![one(GateKind::ResetZ, 0)], vec![one(GateKind::MeasureX, 0)]]);
        let r = reference_run(&c).unwrap();
        assert!(!r.measurements[0].deterministic);
    }

    #[test]
    fn bell_pair_parities_are_deterministic() {
        let mut c = circuit(
            2,
            vec![
                vec![one(GateKind::ResetX, 0), one(GateKind::ResetZ, 1)],
                vec![Instruction::cnot(0, 1, false)],
                vec![one(GateKind::MeasureZ, 0), one(GateKind::MeasureZ, 1)],
            ],
        );
        c.detectors.push(Detector {
            measurements: vec![0, 1],
            coords: [0.0; 3],
        });
        let r = reference_run(&c).unwrap();
        assert!(!r.measurements[0].deterministic);
        // Same for XX.
        let mut c = circuit(
            2,
            vec![
                vec![one(GateKind::ResetX, 0), one(GateKind::ResetZ, 1)],
                vec![Instruction::cnot(0, 1, false)],
                vec![one(GateKind::MeasureX, 0), one(GateKind::MeasureX, 1)],
            ],
        );
        c.detectors.push(Detector {
            measurements: vec![0, 1],
            coords: [0.0; 3],
        });
        reference_run(&c).unwrap();
    }

    #[test]
    fn nondeterministic_detector_names_the_round() {
        let mut c = circuit(1, vec![vec![one(GateKind::ResetZ, 0)], vec![one(GateKind::MeasureX, 0)]]);
        c.detectors.push(Detector {
            measurements: vec![0],
            coords: [1.0, 2.0, 3.0],
        });
        let e = reference_run(&c).unwrap_err();
        assert_eq!(
            e,
            DeterminismError::NondeterministicDetector {
                detector: 0,
                round: 3.0,
                coords: [1.0, 2.0, 3.0]
            }
        );
    }

    #[test]
    fn reset_after_random_measurement_is_clean() {
        let c = circuit(
            1,
            vec![
                vec![one(GateKind::ResetX, 0)],
                vec![one(GateKind::MeasureZ, 0)],
                vec![one(GateKind::ResetZ, 0)],
                vec![one(GateKind::MeasureZ, 0)],
                vec![one(GateKind::ResetX, 0)],
                vec![one(GateKind::MeasureX, 0)],
            ],
        );
        let r = reference_run(&c).unwrap();
        assert!(!r.measurements[0].deterministic);
        assert_eq!(r.measurements[1].value, Some(false));
        assert_eq!(r.measurements[2].value, Some(false));
    }

    #[test]
    fn pauli_flips_deterministic_outcome() {
        let mut t = Tableau::new(2);
        t.apply_pauli(1, Pauli::X);
        t.cnot(1, 0);
        assert_eq!(t.measure_z(0).value(), Some(true));
        assert_eq!(t.measure_z(1).value(), Some(true));
    }

    #[test]
    fn ghz_parity_via_ancilla() {
        // Z0 Z1 parity measured through an ancilla on a random-but-correlated
        // input is deterministic relative to the individual outcomes.
        let mut t = Tableau::new(3);
        t.h(0);
        t.cnot(0, 1);
        t.cnot(0, 2);
        t.cnot(1, 2);
        let a = t.measure_z(2);
        assert_eq!(a.value(), Some(false));
        let m0 = t.measure_z(0);
        let mut m1 = t.measure_z(1);
        assert!(!m0.is_constant());
        m1.xor_assign(&m0);
        assert_eq!(m1.value(), Some(false));
    }
}
