use std::collections::VecDeque;

use serde::Serialize;

use super::run::prepare;
use super::HarnessError;
use crate::circuit::NoiseParams;
use crate::decoder::MatchingGraph;
use crate::layout::{InterfaceConfig, Orientation};
use crate::pauli::Basis;

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub config: String,
    pub basis: Basis,
    pub orientation: Orientation,
    pub distance: usize,
}

/// Fewest edges whose combined symptom is detector-free and flips
/// observable `k`: the shortest closed walk (through the boundary node if
/// needed) with odd observable parity, found by BFS on the graph doubled by
/// parity. Every such walk uses an odd edge, so BFS starts only there.
pub fn matching_graph_distance(g: &MatchingGraph, k: usize) -> Option<usize> {
    if g.boundary_loops.iter().any(|&(_, o)| o >> k & 1 == 1) {
        return Some(1);
    }
    let n = g.num_detectors + 1;
    let mut sources: Vec<u32> = g
        .edges
        .iter()
        .filter(|e| e.observables >> k & 1 == 1)
        .map(|e| e.a)
        .collect();
    sources.sort_unstable();
    sources.dedup();

    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; 2 * n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for s in sources {
        for &i in &touched {
            dist[i] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        let start = 2 * s as usize;
        dist[start] = 0;
        touched.push(start);
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x];
            if best.is_some_and(|b| dx + 1 >= b) {
                break;
            }
            let (u, par) = (x / 2, x % 2);
            for (v, o) in g.neighbours(u as u32) {
                let y = 2 * v as usize + (par ^ (o >> k & 1) as usize);
                if dist[y] == usize::MAX {
                    dist[y] = dx + 1;
                    touched.push(y);
                    if y == start + 1 {
                        best = Some(dx + 1);
                        break;
                    }
                    queue.push_back(y);
                }
            }
            if dist[start + 1] != usize::MAX {
                break;
            }
        }
    }
    best
}

/// Circuit distance of the memory experiment of `cfg` (rounds = d) as seen
/// by the decoder: the graph distance of its decomposed error model.
pub fn graph_distance(cfg: &InterfaceConfig) -> Result<usize, HarnessError> {
    // Any p in (0, 0.5 / gamma) gives the same graph structure.
    let prepared = prepare(cfg, &NoiseParams::new(1e-3, 1.0), None)?;
    matching_graph_distance(&prepared.graph, 0)
        .ok_or_else(|| HarnessError::Analysis(format!("{cfg}: no error chain flips the observable")))
}
