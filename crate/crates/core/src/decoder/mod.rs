//! Minimum-weight perfect matching decoder.
//!
//! Shortest-path distances between detectors are computed lazily, one
//! Dijkstra row per detector, and cached for the lifetime of the graph.
//! A shot is decoded by matching its fired detectors on the complete graph
//! of those distances, with a boundary copy per detector. Pairs for which
//! sending both detectors to the boundary is no worse are dropped; what is
//! left splits into independent clusters, most of them tiny.

mod blossom;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::sync::OnceLock;

use thiserror::Error;

pub use blossom::{max_weight_matching, min_weight_perfect_matching, min_weight_perfect_matching_lazy};

use crate::dem::{xor_probability, DetectorErrorModel, Symptom};

/// Fixed-point scale of integer edge weights.
pub const WEIGHT_SCALE: f64 = 65536.0;

const INF: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("mechanism `{0}` has more than two detectors")]
    NotGraphlike(Symptom),
    #[error("mechanism `{symptom}` has probability {probability}; edges need p < 0.5")]
    ProbabilityTooLarge { symptom: Symptom, probability: f64 },
    #[error("the decoder supports at most 32 observables, got {0}")]
    TooManyObservables(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("detector D{0} does not exist")]
    UnknownDetector(u32),
    #[error("fired detector D{0} cannot be matched: no path to the boundary or to another fired detector")]
    Unmatchable(u32),
    #[error("syndrome has {0} fired detectors; exhaustive decoding is limited to 10")]
    TooLarge(usize),
}

/// Edge of the matching graph; `b == None` is the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge {
    pub a: u32,
    pub b: Option<u32>,
    pub probability: f64,
    pub weight: f64,
    pub observables: u64,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    dist: u32,
    obs: u32,
}

#[derive(Debug)]
pub struct MatchingGraph {
    pub num_detectors: usize,
    pub num_observables: usize,
    pub edges: Vec<GraphEdge>,
    /// Detector-free mechanisms (probability, observable mask). They attach
    /// to the boundary and never change a matching.
    pub boundary_loops: Vec<(f64, u64)>,
    /// Adjacency over nodes 0..=num_detectors (the last is the boundary):
    /// (neighbour, integer weight, observable mask).
    adj: Vec<Vec<(u32, u32, u32)>>,
    rows: Vec<OnceLock<Box<[Entry]>>>,
}

/// Log-likelihood weight ln((1-p)/p).
pub fn edge_weight(p: f64) -> f64 {
    ((1.0 - p) / p).ln()
}

/// Builds the matching graph of a graph-like model.
///
/// Parallel edges with equal observable masks merge as independent flips.
/// Parallel edges that disagree on the observables cannot be merged; the
/// more likely one is kept.
pub fn build_graph(dem: &DetectorErrorModel) -> Result<MatchingGraph, GraphError> {
    if dem.num_observables > 32 {
        return Err(GraphError::TooManyObservables(dem.num_observables));
    }
    let boundary = dem.num_detectors as u32;
    let mut merged: BTreeMap<(u32, u32), Vec<(u64, f64)>> = BTreeMap::new();
    let mut boundary_loops = Vec::new();
    for m in &dem.mechanisms {
        let s = &m.symptom;
        let key = match s.detectors.as_slice() {
            [] => {
                boundary_loops.push((m.probability, s.observables));
                continue;
            }
            [a] => (*a, boundary),
            [a, b] => (*a.min(b), *a.max(b)),
            _ => return Err(GraphError::NotGraphlike(s.clone())),
        };
        let list = merged.entry(key).or_default();
        match list.iter_mut().find(|(o, _)| *o == s.observables) {
            Some((_, p)) => *p = xor_probability(*p, m.probability),
            None => list.push((s.observables, m.probability)),
        }
    }

    let mut edges = Vec::with_capacity(merged.len());
    let mut adj = vec![Vec::new(); dem.num_detectors + 1];
    for ((a, b), list) in merged {
        let (obs, p) = list
            .into_iter()
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if p <= 0.0 {
            continue;
        }
        if p >= 0.5 {
            let detectors = if b == boundary { vec![a] } else { vec![a, b] };
            return Err(GraphError::ProbabilityTooLarge {
                symptom: Symptom {
                    detectors,
                    observables: obs,
                },
                probability: p,
            });
        }
        let weight = edge_weight(p);
        let w = ((weight * WEIGHT_SCALE).round() as u32).max(1);
        adj[a as usize].push((b, w, obs as u32));
        adj[b as usize].push((a, w, obs as u32));
        edges.push(GraphEdge {
            a,
            b: (b != boundary).then_some(b),
            probability: p,
            weight,
            observables: obs,
        });
    }
    Ok(MatchingGraph {
        num_detectors: dem.num_detectors,
        num_observables: dem.num_observables,
        edges,
        boundary_loops,
        rows: (0..adj.len()).map(|_| OnceLock::new()).collect(),
        adj,
    })
}

/// Decoder output for one shot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Prediction {
    /// Predicted observable flips, bit k = observable k.
    pub observables: u64,
    /// Total matching weight in fixed point (see [`WEIGHT_SCALE`]).
    pub weight: u64,
}

impl Prediction {
    pub fn weight(&self) -> f64 {
        self.weight as f64 / WEIGHT_SCALE
    }
}

impl MatchingGraph {
    pub fn boundary(&self) -> u32 {
        self.num_detectors as u32
    }

    pub fn neighbours(&self, node: u32) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.adj[node as usize].iter().map(|&(v, _, o)| (v, o as u64))
    }

    fn row(&self, src: u32) -> &[Entry] {
        self.rows[src as usize].get_or_init(|| self.dijkstra(src))
    }

    fn dijkstra(&self, src: u32) -> Box<[Entry]> {
        let n = self.adj.len();
        let mut dist = vec![u64::MAX; n];
        let mut obs = vec![0u32; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[src as usize] = 0;
        heap.push(Reverse((0u64, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            let u = u as usize;
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, w, o) in &self.adj[u] {
                let nd = d + w as u64;
                let v = v as usize;
                if nd < dist[v] {
                    dist[v] = nd;
                    obs[v] = obs[u] ^ o;
                    heap.push(Reverse((nd, v as u32)));
                }
            }
        }
        dist.into_iter()
            .zip(obs)
            .map(|(d, o)| Entry {
                dist: d.min(INF as u64) as u32,
                obs: o,
            })
            .collect()
    }

    /// Shortest-path distance (fixed point) and observable mask between two
    /// nodes; `None` when disconnected.
    pub fn distance(&self, u: u32, v: u32) -> Option<(u64, u64)> {
        let e = self.row(u)[v as usize];
        (e.dist != INF).then_some((e.dist as u64, e.obs as u64))
    }

    fn check(&self, fired: &[u32]) -> Result<Vec<u32>, DecodeError> {
        let mut f: Vec<u32> = Vec::with_capacity(fired.len());
        for &d in fired {
            if d as usize >= self.num_detectors {
                return Err(DecodeError::UnknownDetector(d));
            }
            f.push(d);
        }
        f.sort_unstable();
        // A detector listed twice cancels.
        let mut out: Vec<u32> = Vec::with_capacity(f.len());
        for d in f {
            if out.last() == Some(&d) {
                out.pop();
            } else {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Minimum-weight matching of the fired detectors.
    pub fn decode(&self, fired: &[u32]) -> Result<Prediction, DecodeError> {
        let f = self.check(fired)?;
        let k = f.len();
        if k == 0 {
            return Ok(Prediction::default());
        }
        let b = self.boundary() as usize;
        let rows: Vec<&[Entry]> = f.iter().map(|&u| self.row(u)).collect();
        let bdist: Vec<u64> = rows.iter().map(|r| r[b].dist as u64).collect();
        let finite = |d: u64| d != INF as u64;

        // Useful pairs and clusters.
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut pairs: Vec<(usize, usize, u64)> = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let d = rows[i][f[j] as usize].dist as u64;
                if !finite(d) {
                    continue;
                }
                if finite(bdist[i]) && finite(bdist[j]) && d >= bdist[i] + bdist[j] {
                    continue;
                }
                pairs.push((i, j, d));
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..k {
            let r = find(&mut parent, i);
            clusters.entry(r).or_default().push(i);
        }
        let mut cluster_pairs: BTreeMap<usize, Vec<(usize, usize, u64)>> = BTreeMap::new();
        for &(i, j, d) in &pairs {
            let r = find(&mut parent, i);
            cluster_pairs.entry(r).or_default().push((i, j, d));
        }

        let mut pred = Prediction::default();
        let obs_of = |i: usize, j: Option<usize>| -> u64 {
            match j {
                Some(j) => rows[i][f[j] as usize].obs as u64,
                None => rows[i][b].obs as u64,
            }
        };
        for (root, members) in clusters {
            let cp = cluster_pairs.remove(&root).unwrap_or_default();
            match members.as_slice() {
                [i] => {
                    if !finite(bdist[*i]) {
                        return Err(DecodeError::Unmatchable(f[*i]));
                    }
                    pred.weight += bdist[*i];
                    pred.observables ^= obs_of(*i, None);
                }
                [i, j] if cp.len() == 1 => {
                    // The pair survived pruning, so it beats the boundary.
                    pred.weight += cp[0].2;
                    pred.observables ^= obs_of(*i, Some(*j));
                }
                _ => {
                    let (w, o) = self.match_cluster(&members, &cp, &bdist, &obs_of, &f)?;
                    pred.weight += w;
                    pred.observables ^= o;
                }
            }
        }
        Ok(pred)
    }

    fn match_cluster(
        &self,
        members: &[usize],
        pairs: &[(usize, usize, u64)],
        bdist: &[u64],
        obs_of: &dyn Fn(usize, Option<usize>) -> u64,
        f: &[u32],
    ) -> Result<(u64, u64), DecodeError> {
        // Node a has copy n + a. A copy pair exists wherever the node pair
        // does: whenever a and b match each other their copies match too.
        // Only each node's NEAREST pairs are given to the matcher up front;
        // the rest are added on demand when the duals say they help.
        const NEAREST: usize = 6;
        let n = members.len();
        let mut local = vec![usize::MAX; f.len()];
        for (a, &i) in members.iter().enumerate() {
            local[i] = a;
        }
        let mut by_node: Vec<Vec<(u64, usize)>> = vec![Vec::new(); n];
        for (k, &(i, j, d)) in pairs.iter().enumerate() {
            by_node[local[i]].push((d, k));
            by_node[local[j]].push((d, k));
        }
        let mut eager = vec![n <= 2 * NEAREST; pairs.len()];
        for list in &mut by_node {
            if list.len() > NEAREST {
                list.select_nth_unstable(NEAREST - 1);
                list.truncate(NEAREST);
            }
            for &(_, k) in list.iter() {
                eager[k] = true;
            }
        }
        let nv = 2 * n;
        let mut edges: Vec<(usize, usize, i64)> = Vec::with_capacity(2 * pairs.len() + n);
        let mut extra: Vec<(usize, usize, i64)> = Vec::new();
        let mut weight_of: HashMap<(usize, usize), u64> = HashMap::with_capacity(pairs.len());
        for (k, &(i, j, d)) in pairs.iter().enumerate() {
            let (a, b) = (local[i], local[j]);
            weight_of.insert((a.min(b), a.max(b)), d);
            let dst = if eager[k] { &mut edges } else { &mut extra };
            dst.push((a, b, d as i64));
            dst.push((n + a, n + b, 0));
        }
        for (a, &i) in members.iter().enumerate() {
            if bdist[i] != INF as u64 {
                edges.push((a, n + a, bdist[i] as i64));
            }
        }
        let mate = min_weight_perfect_matching_lazy(nv, &edges, &extra).ok_or_else(|| {
            let first = members.iter().find(|&&i| bdist[i] == INF as u64).copied().unwrap_or(members[0]);
            DecodeError::Unmatchable(f[first])
        })?;
        let (mut w, mut o) = (0u64, 0u64);
        for a in 0..n {
            let m = mate[a];
            if m < n {
                if a < m {
                    w += weight_of[&(a, m)];
                    o ^= obs_of(members[a], Some(members[m]));
                }
            } else {
                w += bdist[members[a]];
                o ^= obs_of(members[a], None);
            }
        }
        Ok((w, o))
    }

    /// Brute-force reference decoder for at most 10 fired detectors.
    ///
    /// Pairings are enumerated with the lowest unmatched detector first
    /// matched to each higher detector in order, then to the boundary; the
    /// first pairing reaching the minimum weight wins.
    pub fn exhaustive_decode(&self, fired: &[u32]) -> Result<Prediction, DecodeError> {
        let f = self.check(fired)?;
        if f.len() > 10 {
            return Err(DecodeError::TooLarge(f.len()));
        }
        let b = self.boundary();
        let rec_best = {
            struct Ctx<'a> {
                g: &'a MatchingGraph,
                f: &'a [u32],
                b: u32,
                best: Option<Prediction>,
            }
            fn rec(ctx: &mut Ctx<'_>, used: &mut [bool], acc: Prediction) {
                let Some(i) = used.iter().position(|&u| !u) else {
                    if ctx.best.is_none_or(|b| acc.weight < b.weight) {
                        ctx.best = Some(acc);
                    }
                    return;
                };
                used[i] = true;
                for j in i + 1..ctx.f.len() {
                    if used[j] {
                        continue;
                    }
                    if let Some((d, o)) = ctx.g.distance(ctx.f[i], ctx.f[j]) {
                        used[j] = true;
                        rec(
                            ctx,
                            used,
                            Prediction {
                                observables: acc.observables ^ o,
                                weight: acc.weight + d,
                            },
                        );
                        used[j] = false;
                    }
                }
                if let Some((d, o)) = ctx.g.distance(ctx.f[i], ctx.b) {
                    rec(
                        ctx,
                        used,
                        Prediction {
                            observables: acc.observables ^ o,
                            weight: acc.weight + d,
                        },
                    );
                }
                used[i] = false;
            }
            let mut ctx = Ctx {
                g: self,
                f: &f,
                b,
                best: None,
            };
            rec(&mut ctx, &mut vec![false; f.len()], Prediction::default());
            ctx.best
        };
        rec_best.ok_or_else(|| DecodeError::Unmatchable(f[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{inject_noise, NoiseParams};
    use crate::dem::{decompose, extract_dem};
    use crate::layout::{build_memory_experiment, CodeKind, Gadget, InterfaceConfig};
    use crate::pauli::Basis;
    use proptest::prelude::*;

    fn sym(d: &[u32], o: u64) -> Symptom {
        Symptom {
            detectors: d.to_vec(),
            observables: o,
        }
    }

    fn dem(nd: usize, ms: &[(Symptom, f64)]) -> DetectorErrorModel {
        DetectorErrorModel::from_contributions(nd, 1, vec![None; nd], ms.iter().cloned())
    }

    fn model(cfg: &InterfaceConfig, p: f64) -> DetectorErrorModel {
        let e = build_memory_experiment(cfg, cfg.d).unwrap();
        let c = inject_noise(&e.circuit, &NoiseParams::new(p, 10.0)).unwrap();
        decompose(&extract_dem(&c)).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(edge_weight(0.5), 0.0);
        let mut last = f64::INFINITY;
        for i in 1..50 {
            let w = edge_weight(i as f64 / 100.0);
            assert!(w < last);
            last = w;
        }
    }

    #[test]
    fn parallel_edges_merge() {
        // Two mechanisms on the same pair with equal masks can only arrive
        // separately through the graph builder, not through a merged model.
        let mut d = dem(2, &[(sym(&[0, 1], 0), 0.1)]);
        d.mechanisms.push(crate::dem::ErrorMechanism {
            probability: 0.1,
            symptom: sym(&[0, 1], 0),
        });
        let g = build_graph(&d).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert!((g.edges[0].probability - 0.18).abs() < 1e-12);
        assert!((g.edges[0].weight - (0.82f64 / 0.18).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_models() {
        assert!(matches!(
            build_graph(&dem(3, &[(sym(&[0, 1, 2], 0), 0.1)])),
            Err(GraphError::NotGraphlike(_))
        ));
        assert!(matches!(
            build_graph(&dem(1, &[(sym(&[0], 0), 0.6)])),
            Err(GraphError::ProbabilityTooLarge { .. })
        ));
    }

    #[test]
    fn small_chain() {
        // B -0- D0 -1- D1 -2- D2 -3- B, observable on the left boundary edge.
        let g = build_graph(&dem(
            3,
            &[
                (sym(&[0], 1), 0.01),
                (sym(&[0, 1], 0), 0.01),
                (sym(&[1, 2], 0), 0.01),
                (sym(&[2], 0), 0.01),
            ],
        ))
        .unwrap();
        assert_eq!(g.decode(&[]).unwrap(), Prediction::default());
        assert_eq!(g.decode(&[0, 1]).unwrap().observables, 0);
        assert_eq!(g.decode(&[0]).unwrap().observables, 1);
        assert_eq!(g.exhaustive_decode(&[0]).unwrap().observables, 1);
        assert_eq!(g.decode(&[2]).unwrap().observables, 0);
        assert_eq!(g.decode(&[1]).unwrap(), g.exhaustive_decode(&[1]).unwrap());
        assert_eq!(g.decode(&[0, 0]).unwrap(), Prediction::default());
        assert!(g.decode(&[7]).is_err());
        assert!(g.exhaustive_decode(&(0..11).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn isolated_detector_is_an_error() {
        let g = build_graph(&dem(3, &[(sym(&[0, 1], 0), 0.01)])).unwrap();
        assert_eq!(g.decode(&[0]), Err(DecodeError::Unmatchable(0)));
        assert_eq!(g.decode(&[0, 1]).unwrap().observables, 0);
    }

    #[test]
    fn metric_is_symmetric() {
        let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::DL, 3, Basis::Z);
        let g = build_graph(&model(&cfg, 1e-3)).unwrap();
        let n = g.num_detectors as u32 + 1;
        for u in (0..n).step_by(5) {
            for v in (0..n).step_by(3) {
                assert_eq!(g.distance(u, v), g.distance(v, u));
                for w in (0..n).step_by(11) {
                    if let (Some(a), Some(b), Some(c)) = (g.distance(u, v), g.distance(v, w), g.distance(u, w)) {
                        assert!(c.0 <= a.0 + b.0);
                    }
                }
            }
        }
    }

    #[test]
    fn single_mechanisms_decode_correctly_rotated_dl() {
        let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::DL, 3, Basis::Z);
        let d = model(&cfg, 1e-3);
        let g = build_graph(&d).unwrap();
        for m in &d.mechanisms {
            let p = g.decode(&m.symptom.detectors).unwrap();
            assert_eq!(p.observables, m.symptom.observables, "{}", m.symptom);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn decode_weight_matches_exhaustive(seed in any::<u64>(), k in 0usize..=10) {
            use std::sync::LazyLock;
            static G: LazyLock<MatchingGraph> = LazyLock::new(|| {
                let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::CAT, 3, Basis::Z);
                build_graph(&model(&cfg, 2e-3)).unwrap()
            });
            let n = G.num_detectors as u32;
            let mut s = crate::pauli::rng::KeyedStream::new(seed, 0, 0);
            let fired: Vec<u32> = (0..k).map(|_| s.below(n)).collect();
            let a = G.decode(&fired).unwrap();
            let b = G.exhaustive_decode(&fired).unwrap();
            prop_assert_eq!(a.weight, b.weight);
        }

        /// Large syndromes against a dense matching on the complete graph
        /// (every pair plus a boundary copy per detector).
        #[test]
        fn decode_weight_matches_dense_matching(seed in any::<u64>(), k in 20usize..=60) {
            use std::sync::LazyLock;
            static G: LazyLock<MatchingGraph> = LazyLock::new(|| {
                let cfg = InterfaceConfig::new(CodeKind::Unrotated, Gadget::CAT, 5, Basis::X);
                build_graph(&model(&cfg, 3e-3)).unwrap()
            });
            let nd = G.num_detectors as u32;
            let mut s = crate::pauli::rng::KeyedStream::new(seed, 0, 1);
            let fired: Vec<u32> = (0..k).map(|_| s.below(nd)).collect();
            let f = G.check(&fired).unwrap();
            let n = f.len();
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if let Some((d, _)) = G.distance(f[a], f[b]) {
                        edges.push((a, b, d as i64));
                        edges.push((n + a, n + b, 0));
                    }
                }
                if let Some((d, _)) = G.distance(f[a], G.boundary()) {
                    edges.push((a, n + a, d as i64));
                }
            }
            let mate = min_weight_perfect_matching(2 * n, &edges).unwrap();
            let dense: i64 = edges.iter().filter(|e| mate[e.0] == e.1).map(|e| e.2).sum();
            prop_assert_eq!(G.decode(&fired).unwrap().weight as i64, dense);
        }
    }
}
