use std::collections::HashMap;

use thiserror::Error;

use super::{DetectorErrorModel, Symptom};
use crate::pauli::Basis;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("mechanism #{index} `error({probability}) {symptom}` is not a product of existing graph-like mechanisms")]
pub struct DecomposeError {
    pub index: usize,
    pub probability: f64,
    pub symptom: Symptom,
}

/// Search budget per mechanism; real models need a few dozen nodes.
const MAX_NODES: usize = 200_000;

struct Index<'a> {
    /// Detector set (1 or 2 ids) -> observable masks seen with it.
    parts: HashMap<Vec<u32>, Vec<u64>>,
    classes: &'a [Option<Basis>],
}

impl Index<'_> {
    fn same_class(&self, a: u32, b: u32) -> bool {
        match (self.classes.get(a as usize), self.classes.get(b as usize)) {
            (Some(Some(x)), Some(Some(y))) => x == y,
            _ => true,
        }
    }

    fn is_native(&self, s: &Symptom) -> bool {
        match s.detectors.as_slice() {
            [_] => true,
            [a, b] => self.same_class(*a, *b),
            _ => false,
        }
    }

    fn search(&self, rem: &[u32], acc: u64, target: u64, out: &mut Vec<Symptom>, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let Some((&r, rest)) = rem.split_first() else {
            return acc == target;
        };
        // Pairs first, so decompositions use as few components as possible.
        for (j, &r2) in rest.iter().enumerate() {
            if !self.same_class(r, r2) {
                continue;
            }
            if let Some(masks) = self.parts.get(&vec![r, r2]) {
                let mut next: Vec<u32> = rest.to_vec();
                next.remove(j);
                for &m in masks {
                    out.push(Symptom {
                        detectors: vec![r, r2],
                        observables: m,
                    });
                    if self.search(&next, acc ^ m, target, out, budget) {
                        return true;
                    }
                    out.pop();
                }
            }
        }
        if let Some(masks) = self.parts.get(&vec![r]) {
            for &m in masks {
                out.push(Symptom {
                    detectors: vec![r],
                    observables: m,
                });
                if self.search(rest, acc ^ m, target, out, budget) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }
}

/// Graph-like components of every mechanism, aligned with `dem.mechanisms`.
///
/// Mechanisms with at most two detectors of the same class are kept whole.
/// Larger ones (and two-detector ones straddling both classes) are written
/// as an XOR of symptoms that occur natively in the model. A mechanism with
/// more than two detectors that admits no such split is an error; a
/// straddling pair that admits none is kept as is.
pub fn decompose_parts(dem: &DetectorErrorModel) -> Result<Vec<Vec<Symptom>>, DecomposeError> {
    let mut index = Index {
        parts: HashMap::new(),
        classes: &dem.detector_classes,
    };
    for m in &dem.mechanisms {
        if index.is_native(&m.symptom) {
            let masks = index.parts.entry(m.symptom.detectors.clone()).or_default();
            if !masks.contains(&m.symptom.observables) {
                masks.push(m.symptom.observables);
            }
        }
    }
    dem.mechanisms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let s = &m.symptom;
            if s.detectors.is_empty() || index.is_native(s) {
                return Ok(vec![s.clone()]);
            }
            let mut out = Vec::new();
            let mut budget = MAX_NODES;
            if index.search(&s.detectors, 0, s.observables, &mut out, &mut budget) {
                Ok(out)
            } else if s.detectors.len() <= 2 {
                Ok(vec![s.clone()])
            } else {
                Err(DecomposeError {
                    index: i,
                    probability: m.probability,
                    symptom: s.clone(),
                })
            }
        })
        .collect()
}

/// Graph-like model: every component inherits its parent's probability and
/// coinciding components are merged again as independent flips.
pub fn decompose(dem: &DetectorErrorModel) -> Result<DetectorErrorModel, DecomposeError> {
    let parts = decompose_parts(dem)?;
    let contributions = dem
        .mechanisms
        .iter()
        .zip(parts)
        .flat_map(|(m, ps)| ps.into_iter().map(move |s| (s, m.probability)));
    Ok(DetectorErrorModel::from_contributions(
        dem.num_detectors,
        dem.num_observables,
        dem.detector_classes.clone(),
        contributions,
    ))
}
