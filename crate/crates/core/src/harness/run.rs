use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::wilson_interval;
use super::HarnessError;
use crate::circuit::{inject_noise, NoiseParams};
use crate::decoder::{build_graph, DecodeError, MatchingGraph, Prediction};
use crate::dem::{decompose, extract_dem, DetectorErrorModel};
use crate::layout::{build_memory_experiment, CodeKind, Gadget, InterfaceConfig, Orientation};
use crate::pauli::frame::{live_mask, FrameProgram};
use crate::pauli::rng::mix64;
use crate::pauli::Basis;

/// Blocks of 64 shots handled by one task.
const CHUNK_BLOCKS: u64 = 16;
const CHUNK_SHOTS: u64 = CHUNK_BLOCKS * 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_shots: u64,
    pub max_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_shots: 3_000_000,
            max_errors: 3_000,
        }
    }
}

impl StopRule {
    /// Laptop-sized default: same error target, fewer shots.
    pub fn desk() -> Self {
        StopRule {
            max_shots: 1_000_000,
            ..Default::default()
        }
    }
}

/// One simulation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSpec {
    pub cfg: InterfaceConfig,
    pub noise: NoiseParams,
    /// Syndrome rounds; `None` means d.
    pub rounds: Option<usize>,
    pub stop: StopRule,
    pub seed: u64,
}

impl PointSpec {
    pub fn new(cfg: InterfaceConfig, p: f64, gamma: f64, stop: StopRule, seed: u64) -> Self {
        PointSpec {
            cfg,
            noise: NoiseParams::new(p, gamma),
            rounds: None,
            stop,
            seed,
        }
    }
}

/// Per-point seed derived from a base seed, so every point of a scan gets
/// its own stream and rerunning a point alone reproduces it.
pub fn point_seed(base: u64, cfg: &InterfaceConfig, noise: &NoiseParams) -> u64 {
    let fields = [
        cfg.code as u64,
        cfg.gadget as u64,
        cfg.basis as u64,
        cfg.cut as u64,
        cfg.d as u64,
        noise.p.to_bits(),
        noise.gamma.to_bits(),
    ];
    fields.iter().fold(mix64(base), |h, &f| mix64(h ^ f))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub code: CodeKind,
    pub gadget: Gadget,
    pub basis: Basis,
    pub orientation: Orientation,
    pub gamma: f64,
    pub d: usize,
    pub p: f64,
    pub shots: u64,
    pub errors: u64,
    #[serde(rename = "p_L")]
    pub p_l: f64,
    /// Half-width of the 95% Wilson interval.
    pub ci95: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub shots: u64,
    pub errors: u64,
}

/// Everything needed to sample and decode one configuration at one p.
pub struct Prepared {
    pub cfg: InterfaceConfig,
    pub noise: NoiseParams,
    pub dem: DetectorErrorModel,
    pub program: FrameProgram,
    pub graph: MatchingGraph,
    /// Detectors whose graph component can flip an observable. The others
    /// only see errors of the wrong type for this memory experiment; since
    /// components interact solely through the boundary, dropping them does
    /// not change any prediction.
    relevant: Vec<bool>,
}

pub fn prepare(cfg: &InterfaceConfig, noise: &NoiseParams, rounds: Option<usize>) -> Result<Prepared, HarnessError> {
    let exp = build_memory_experiment(cfg, rounds.unwrap_or(cfg.d))?;
    let circuit = inject_noise(&exp.circuit, noise)?;
    let dem = extract_dem(&circuit);
    let graphlike = decompose(&dem).map_err(|source| HarnessError::Decompose { cfg: *cfg, source })?;
    let graph = build_graph(&graphlike).map_err(|source| HarnessError::Graph { cfg: *cfg, source })?;
    let relevant = relevant_detectors(&graph);
    Ok(Prepared {
        cfg: *cfg,
        noise: *noise,
        dem,
        program: FrameProgram::compile(&circuit),
        graph,
        relevant,
    })
}

fn relevant_detectors(g: &MatchingGraph) -> Vec<bool> {
    let n = g.num_detectors;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &g.edges {
        if let Some(b) = e.b {
            let (ra, rb) = (find(&mut parent, e.a as usize), find(&mut parent, b as usize));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut flips = vec![false; n];
    for e in &g.edges {
        if e.observables != 0 {
            let r = find(&mut parent, e.a as usize);
            flips[r] = true;
        }
    }
    (0..n).map(|i| flips[find(&mut parent, i)]).collect()
}

impl Prepared {
    /// Decodes one shot's fired detectors the way the sampler does.
    pub fn decode_shot(&self, fired: &[u32]) -> Result<Prediction, DecodeError> {
        let f: Vec<u32> = fired.iter().copied().filter(|&d| self.relevant.get(d as usize) != Some(&false)).collect();
        self.graph.decode(&f)
    }

    fn run_chunk(&self, seed: u64, chunk: u64, total: u64) -> Result<Counts, HarnessError> {
        let mut c = Counts::default();
        let first = chunk * CHUNK_BLOCKS;
        let last = total.div_ceil(64).min(first + CHUNK_BLOCKS);
        let mut fired = Vec::new();
        for b in first..last {
            let live = live_mask(total, b);
            let out = self.program.run_block(seed, b, live);
            let lists = out.fired_lists();
            for bit in 0..64u32 {
                if live >> bit & 1 == 0 {
                    continue;
                }
                fired.clear();
                fired.extend(lists[bit as usize].iter().copied().filter(|&d| self.relevant[d as usize]));
                let pred = self.graph.decode(&fired)?;
                c.shots += 1;
                if pred.observables != out.observable_mask(bit) {
                    c.errors += 1;
                }
            }
        }
        Ok(c)
    }

    /// Samples and decodes until the stop rule triggers. Work is split into
    /// fixed chunks of shots and the stop condition is checked after each
    /// chunk in order, so the result does not depend on the thread count.
    pub fn run(&self, stop: StopRule, seed: u64) -> Result<Counts, HarnessError> {
        if self.dem.mechanisms.is_empty() {
            // Noiseless: detectors and observables are deterministic zeros.
            return Ok(Counts {
                shots: stop.max_shots,
                errors: 0,
            });
        }
        let chunks = stop.max_shots.div_ceil(CHUNK_SHOTS);
        let wave = (rayon::current_num_threads() as u64 * 2).max(1);
        let mut total = Counts::default();
        let mut next = 0;
        while next < chunks {
            let end = (next + wave).min(chunks);
            let results: Vec<Result<Counts, HarnessError>> = (next..end)
                .into_par_iter()
                .map(|c| self.run_chunk(seed, c, stop.max_shots))
                .collect();
            for r in results {
                let c = r?;
                total.shots += c.shots;
                total.errors += c.errors;
                if total.errors >= stop.max_errors {
                    return Ok(total);
                }
            }
            next = end;
        }
        Ok(total)
    }

    pub fn record(&self, counts: Counts, seed: u64) -> RunRecord {
        let p_l = if counts.shots == 0 {
            0.0
        } else {
            counts.errors as f64 / counts.shots as f64
        };
        let (lo, hi) = wilson_interval(counts.errors, counts.shots);
        RunRecord {
            code: self.cfg.code,
            gadget: self.cfg.gadget,
            basis: self.cfg.basis,
            orientation: self.cfg.orientation(),
            gamma: self.noise.gamma,
            d: self.cfg.d,
            p: self.noise.p,
            shots: counts.shots,
            errors: counts.errors,
            p_l,
            ci95: (hi - lo) / 2.0,
            seed,
        }
    }
}

pub fn run_point(spec: &PointSpec) -> Result<RunRecord, HarnessError> {
    let prepared = prepare(&spec.cfg, &spec.noise, spec.rounds)?;
    let counts = prepared.run(spec.stop, spec.seed)?;
    Ok(prepared.record(counts, spec.seed))
}

/// Runs independent points in parallel; output order follows the input.
pub fn scan(points: &[PointSpec]) -> Result<Vec<RunRecord>, HarnessError> {
    points.par_iter().map(run_point).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: f64, shots: u64, seed: u64) -> PointSpec {
        let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::DL, 3, Basis::Z);
        PointSpec::new(
            cfg,
            p,
            1.0,
            StopRule {
                max_shots: shots,
                max_errors: 1_000_000,
            },
            seed,
        )
    }

    #[test]
    fn zero_noise_has_no_errors() {
        let r = run_point(&spec(0.0, 5000, 1)).unwrap();
        assert_eq!(r.errors, 0);
        assert_eq!(r.p_l, 0.0);
        assert_eq!(r.shots, 5000);
    }

    #[test]
    fn same_seed_same_record() {
        let a = run_point(&spec(5e-3, 3000, 7)).unwrap();
        let b = run_point(&spec(5e-3, 3000, 7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots, 3000);
        assert!(a.errors > 0);
    }

    #[test]
    fn stops_on_errors() {
        let mut s = spec(2e-2, 1_000_000, 3);
        s.stop.max_errors = 50;
        let r = run_point(&s).unwrap();
        assert!(r.errors >= 50);
        assert!(r.shots < 1_000_000);
        assert_eq!(r.shots % CHUNK_SHOTS, 0);
    }

    #[test]
    fn seeds_differ_per_point() {
        let cfg = InterfaceConfig::new(CodeKind::Rotated, Gadget::DL, 3, Basis::Z);
        let a = point_seed(1, &cfg, &NoiseParams::new(1e-3, 1.0));
        let b = point_seed(1, &cfg, &NoiseParams::new(2e-3, 1.0));
        assert_ne!(a, b);
        assert_eq!(a, point_seed(1, &cfg, &NoiseParams::new(1e-3, 1.0)));
    }
}
