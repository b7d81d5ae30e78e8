//! Detector error models.
//!
//! Every outcome of every fault site is mapped to the detectors and
//! observables it flips. Rather than propagating each fault forward, one
//! backward sweep keeps, per qubit, the symptom an X (resp. Z) inserted at
//! the current point would cause; a fault's symptom is then read off at its
//! location. Equal symptoms merge as independent flips.

mod decompose;
mod text;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use decompose::{decompose, decompose_parts, DecomposeError};
pub use text::DemParseError;

use crate::circuit::{Circuit, Operation};
use crate::pauli::frame::FaultSite;
use crate::pauli::{Basis, GateKind, Pauli};

/// What a fault flips: sorted detector ids and an observable bit mask
/// (bit k = observable k).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symptom {
    pub detectors: Vec<u32>,
    pub observables: u64,
}

impl Symptom {
    pub fn is_empty(&self) -> bool {
        self.detectors.is_empty() && self.observables == 0
    }

    /// Symmetric difference.
    pub fn xor(&self, other: &Symptom) -> Symptom {
        let (a, b) = (&self.detectors, &other.detectors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(*x);
                    i += 1;
                }
                (Some(x), None) => {
                    out.push(*x);
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Symptom {
            detectors: out,
            observables: self.observables ^ other.observables,
        }
    }
}

impl fmt::Display for Symptom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !std::mem::take(&mut first) {
                write!(f, " ")
            } else {
                Ok(())
            }
        };
        for d in &self.detectors {
            sep(f)?;
            write!(f, "D{d}")?;
        }
        for k in 0..64 {
            if self.observables >> k & 1 == 1 {
                sep(f)?;
                write!(f, "L{k}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorMechanism {
    pub probability: f64,
    pub symptom: Symptom,
}

impl ErrorMechanism {
    pub fn detectors(&self) -> &[u32] {
        &self.symptom.detectors
    }

    pub fn observables(&self) -> u64 {
        self.symptom.observables
    }
}

/// Probability that exactly one of two independent events happens.
pub fn xor_probability(p: f64, q: f64) -> f64 {
    p + q - 2.0 * p * q
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectorErrorModel {
    /// Sorted by symptom; symptoms are unique and non-empty.
    pub mechanisms: Vec<ErrorMechanism>,
    pub num_detectors: usize,
    pub num_observables: usize,
    /// `Some(Z)` for detectors flipped only by X components of errors (they
    /// compare Z-type checks), `Some(X)` for the converse, `None` when a
    /// detector sees both or nothing.
    pub detector_classes: Vec<Option<Basis>>,
}

impl DetectorErrorModel {
    /// Merges (symptom, probability) pairs in the given order.
    pub fn from_contributions<I>(
        num_detectors: usize,
        num_observables: usize,
        detector_classes: Vec<Option<Basis>>,
        contributions: I,
    ) -> Self
    where
        I: IntoIterator<Item = (Symptom, f64)>,
    {
        let mut merged: HashMap<Symptom, f64> = HashMap::new();
        for (s, p) in contributions {
            if s.is_empty() || p <= 0.0 {
                continue;
            }
            let e = merged.entry(s).or_insert(0.0);
            *e = xor_probability(*e, p);
        }
        let mut mechanisms: Vec<ErrorMechanism> = merged
            .into_iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(symptom, probability)| ErrorMechanism { probability, symptom })
            .collect();
        mechanisms.sort_by(|a, b| a.symptom.cmp(&b.symptom));
        DetectorErrorModel {
            mechanisms,
            num_detectors,
            num_observables,
            detector_classes,
        }
    }

    pub fn is_graphlike(&self) -> bool {
        self.mechanisms.iter().all(|m| m.symptom.detectors.len() <= 2)
    }

    pub fn find(&self, s: &Symptom) -> Option<&ErrorMechanism> {
        self.mechanisms
            .binary_search_by(|m| m.symptom.cmp(s))
            .ok()
            .map(|i| &self.mechanisms[i])
    }
}

/// Symptom of every outcome of every fault site, in site order.
#[derive(Clone, Debug)]
pub struct SiteSymptoms {
    pub sites: Vec<FaultSite>,
    /// `symptoms[site][outcome]`
    pub symptoms: Vec<Vec<Symptom>>,
    pub num_detectors: usize,
    pub num_observables: usize,
    pub detector_classes: Vec<Option<Basis>>,
}

type Bits = Vec<u64>;

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn or_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= s;
    }
}

/// Computes the symptom of every fault outcome of `c`.
pub fn site_symptoms(c: &Circuit) -> SiteSymptoms {
    let nd = c.detectors.len();
    let no = c.observables.len();
    assert!(no <= 64, "at most 64 observables are supported");
    let width = (nd + no).div_ceil(64).max(1);

    // Which detectors/observables each measurement feeds.
    let mut feeds: Vec<Vec<usize>> = vec![Vec::new(); c.num_measurements()];
    for (i, d) in c.detectors.iter().enumerate() {
        for &m in &d.measurements {
            feeds[m].push(i);
        }
    }
    for (k, o) in c.observables.iter().enumerate() {
        for &m in o {
            feeds[m].push(nd + k);
        }
    }

    let sites = c.fault_sites();
    let mut symptoms: Vec<Vec<Symptom>> = vec![Vec::new(); sites.len()];
    let mut sx: Vec<Bits> = vec![vec![0; width]; c.num_qubits];
    let mut sz: Vec<Bits> = vec![vec![0; width]; c.num_qubits];
    let mut seen_x: Bits = vec![0; width];
    let mut seen_z: Bits = vec![0; width];
    let mut site = sites.len();
    let mut meas = c.num_measurements();

    let to_symptom = |bits: &[u64]| {
        let mut s = Symptom::default();
        for (w, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                if b < nd {
                    s.detectors.push(b as u32);
                } else {
                    s.observables |= 1 << (b - nd);
                }
            }
        }
        s
    };
    let mut scratch: Bits = vec![0; width];
    let pauli_bits = |out: &mut Bits, sx: &[Bits], sz: &[Bits], qs: &[u32], ps: &[Pauli]| {
        out.iter_mut().for_each(|w| *w = 0);
        for (&q, &p) in qs.iter().zip(ps) {
            if p.x_bit() {
                xor_into(out, &sx[q as usize]);
            }
            if p.z_bit() {
                xor_into(out, &sz[q as usize]);
            }
        }
    };

    for tick in c.ticks.iter().rev() {
        for op in tick.ops.iter().rev() {
            match op {
                Operation::Gate(g) => match g.kind {
                    GateKind::ResetZ | GateKind::ResetX => {
                        let q = g.targets[0] as usize;
                        sx[q].iter_mut().for_each(|w| *w = 0);
                        sz[q].iter_mut().for_each(|w| *w = 0);
                    }
                    GateKind::H => {
                        let q = g.targets[0] as usize;
                        std::mem::swap(&mut sx[q], &mut sz[q]);
                    }
                    GateKind::Cnot => {
                        let (ct, tt) = (g.targets[0] as usize, g.targets[1] as usize);
                        // X on the control spreads to the target; Z on the
                        // target spreads to the control.
                        let t = sx[tt].clone();
                        xor_into(&mut sx[ct], &t);
                        let cz = sz[ct].clone();
                        xor_into(&mut sz[tt], &cz);
                    }
                    GateKind::MeasureZ | GateKind::MeasureX => {
                        meas -= 1;
                        let q = g.targets[0] as usize;
                        let s = if g.kind == GateKind::MeasureZ { &mut sx[q] } else { &mut sz[q] };
                        for &b in &feeds[meas] {
                            s[b / 64] ^= 1 << (b % 64);
                        }
                    }
                    GateKind::Idle => {}
                },
                Operation::Noise(ch) => {
                    let per_site: Vec<&[u32]> = if ch.kind == crate::circuit::NoiseKind::Depolarize2 {
                        vec![&ch.targets[..]]
                    } else {
                        ch.targets.iter().map(std::slice::from_ref).collect()
                    };
                    for qs in per_site.into_iter().rev() {
                        site -= 1;
                        let fs = &sites[site];
                        debug_assert_eq!(fs.qubits, qs);
                        for &q in qs {
                            or_into(&mut seen_x, &sx[q as usize]);
                            or_into(&mut seen_z, &sz[q as usize]);
                        }
                        symptoms[site] = (0..fs.num_outcomes())
                            .map(|o| {
                                pauli_bits(&mut scratch, &sx, &sz, qs, &fs.outcome(o));
                                to_symptom(&scratch)
                            })
                            .collect();
                    }
                }
            }
        }
    }
    debug_assert_eq!(site, 0);
    debug_assert_eq!(meas, 0);

    let bit = |b: &Bits, i: usize| b[i / 64] >> (i % 64) & 1 == 1;
    let detector_classes = (0..nd)
        .map(|i| match (bit(&seen_x, i), bit(&seen_z, i)) {
            (true, false) => Some(Basis::Z),
            (false, true) => Some(Basis::X),
            _ => None,
        })
        .collect();

    SiteSymptoms {
        sites,
        symptoms,
        num_detectors: nd,
        num_observables: no,
        detector_classes,
    }
}

/// Builds the detector error model of a noisy circuit.
pub fn extract_dem(c: &Circuit) -> DetectorErrorModel {
    let s = site_symptoms(c);
    let contributions = s.sites.iter().zip(&s.symptoms).flat_map(|(site, outs)| {
        let p = site.outcome_probability();
        outs.iter().map(move |sym| (sym.clone(), p))
    });
    DetectorErrorModel::from_contributions(
        s.num_detectors,
        s.num_observables,
        s.detector_classes.clone(),
        contributions,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{inject_noise, NoiseParams};
    use crate::layout::build_memory_experiment;
    use crate::layout::{CodeKind, Gadget, InterfaceConfig};
    use crate::pauli::frame::{Fault, FrameProgram};

    fn noisy(cfg: &InterfaceConfig, p: f64, gamma: f64) -> Circuit {
        let e = build_memory_experiment(cfg, cfg.d).unwrap();
        inject_noise(&e.circuit, &NoiseParams::new(p, gamma)).unwrap()
    }

    #[test]
    fn noiseless_circuit_gives_empty_model() {
        let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::DL, 3, Basis::Z);
        let e = build_memory_experiment(&cfg, 3).unwrap();
        let dem = extract_dem(&e.circuit);
        assert!(dem.mechanisms.is_empty());
        assert_eq!(dem.num_detectors, e.num_detectors);
    }

    #[test]
    fn xor_merge_of_equal_faults() {
        let s = Symptom {
            detectors: vec![1, 4],
            observables: 0,
        };
        let dem = DetectorErrorModel::from_contributions(5, 1, vec![None; 5], [(s.clone(), 0.1), (s.clone(), 0.1)]);
        assert_eq!(dem.mechanisms.len(), 1);
        assert!((dem.mechanisms[0].probability - (0.2 - 0.02)).abs() < 1e-15);
    }

    #[test]
    fn symptom_xor_is_symmetric_difference() {
        let a = Symptom {
            detectors: vec![1, 3, 5],
            observables: 1,
        };
        let b = Symptom {
            detectors: vec![3, 4],
            observables: 1,
        };
        assert_eq!(
            a.xor(&b),
            Symptom {
                detectors: vec![1, 4, 5],
                observables: 0
            }
        );
        assert_eq!(a.xor(&a), Symptom::default());
    }

    // The backward sweep must agree with forward propagation of each fault.
    #[test]
    fn backward_sweep_matches_forward_propagation() {
        for gadget in Gadget::ALL {
            let cfg = InterfaceConfig::new(CodeKind::Rotated, gadget, 3, Basis::Z);
            let c = noisy(&cfg, 1e-3, 2.0);
            let s = site_symptoms(&c);
            let prog = FrameProgram::compile(&c);
            for (i, site) in s.sites.iter().enumerate().step_by(7) {
                for o in 0..site.num_outcomes() {
                    let faults: Vec<Fault> = site
                        .qubits
                        .iter()
                        .zip(site.outcome(o))
                        .map(|(&qubit, pauli)| Fault {
                            before_gate: site.before_gate,
                            qubit,
                            pauli,
                        })
                        .collect();
                    let r = prog.propagate(&faults);
                    let dets: Vec<u32> = (0..r.detectors.len())
                        .filter(|&d| r.detectors[d])
                        .map(|d| d as u32)
                        .collect();
                    let obs = r
                        .observables
                        .iter()
                        .enumerate()
                        .fold(0u64, |m, (k, &b)| m | (b as u64) << k);
                    assert_eq!(s.symptoms[i][o].detectors, dets, "{gadget} site {i} outcome {o}");
                    assert_eq!(s.symptoms[i][o].observables, obs);
                }
            }
        }
    }

    #[test]
    fn detectors_split_into_two_classes() {
        let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::GT, 3, Basis::X);
        let dem = extract_dem(&noisy(&cfg, 1e-3, 10.0));
        assert!(dem.detector_classes.iter().all(|c| c.is_some()));
        for m in &dem.mechanisms {
            assert!(m.probability > 0.0 && m.probability < 1.0);
            assert!(!m.symptom.is_empty());
        }
    }

    #[test]
    fn extraction_is_deterministic() {
        let cfg = InterfaceConfig::new(CodeKind::Unrotated, Gadget::CAT, 3, Basis::Z);
        let c = noisy(&cfg, 2e-3, 10.0);
        assert_eq!(extract_dem(&c).to_text(), extract_dem(&c).to_text());
    }
}
