use std::collections::BTreeMap;

use serde::Serialize;

use super::run::RunRecord;
use super::stats::{fit_slope, lambda_factor, pseudothreshold, Curve, Threshold};
use crate::layout::{CodeKind, Gadget, Orientation};
use crate::pauli::Basis;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupKey {
    pub code: CodeKind,
    pub gadget: Gadget,
    pub basis: Basis,
    pub orientation: Orientation,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaEntry {
    pub d_small: usize,
    pub d_large: usize,
    pub p: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub lower_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeEntry {
    pub d: usize,
    pub slope: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupAnalysis {
    #[serde(flatten)]
    pub key: GroupKey,
    pub pseudothreshold: Option<Threshold>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_error: Option<String>,
    pub lambda: Vec<LambdaEntry>,
    pub slopes: Vec<SlopeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisResult {
    pub groups: Vec<GroupAnalysis>,
}

pub(crate) fn group(records: &[RunRecord]) -> Vec<(GroupKey, Vec<&RunRecord>)> {
    let mut map: BTreeMap<(CodeKind, Gadget, Basis, Orientation, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        map.entry((r.code, r.gadget, r.basis, r.orientation, r.gamma.to_bits()))
            .or_default()
            .push(r);
    }
    map.into_iter()
        .map(|((code, gadget, basis, orientation, g), rs)| {
            (
                GroupKey {
                    code,
                    gadget,
                    basis,
                    orientation,
                    gamma: f64::from_bits(g),
                },
                rs,
            )
        })
        .collect()
}

pub(crate) fn curves(rs: &[&RunRecord]) -> Vec<Curve> {
    let mut by_d: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rs {
        by_d.entry(r.d).or_default().push((r.p, r.p_l));
    }
    by_d.into_iter()
        .map(|(d, mut points)| {
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Curve { d, points }
        })
        .collect()
}

/// Pseudothreshold, Λ at `lambda_p` and low-p slopes for every group of
/// records sharing code, gadget, basis and γ. Slopes use the points below
/// the pseudothreshold when one is known.
pub fn analyze(records: &[RunRecord], lambda_p: f64) -> AnalysisResult {
    let mut groups = Vec::new();
    for (key, rs) in group(records) {
        let cs = curves(&rs);
        let (pseudothreshold, threshold_error) = if cs.len() >= 2 {
            match pseudothreshold(&cs) {
                Ok(t) => (Some(t), None),
                Err(e) => (None, Some(e.to_string())),
            }
        } else {
            (None, Some("fewer than two distances".into()))
        };

        let at_p: BTreeMap<usize, &RunRecord> = rs
            .iter()
            .filter(|r| (r.p - lambda_p).abs() <= 1e-9 * lambda_p)
            .map(|r| (r.d, *r))
            .collect();
        let ds: Vec<usize> = at_p.keys().copied().collect();
        let lambda = ds
            .windows(2)
            .filter_map(|w| {
                let l = lambda_factor(at_p[&w[0]], at_p[&w[1]]).ok()?;
                Some(LambdaEntry {
                    d_small: w[0],
                    d_large: w[1],
                    p: lambda_p,
                    lambda: l.lambda,
                    sigma: l.sigma,
                    lower_bound: l.lower_bound,
                })
            })
            .collect();

        let cutoff = pseudothreshold.as_ref().map(|t| t.p_th).unwrap_or(f64::INFINITY);
        let slopes = cs
            .iter()
            .filter_map(|c| {
                let pts: Vec<(f64, f64)> = c.points.iter().copied().filter(|&(p, pl)| p < cutoff && pl > 0.0).collect();
                let slope = fit_slope(&pts).ok()?;
                Some(SlopeEntry {
                    d: c.d,
                    slope,
                    points: pts.len(),
                })
            })
            .collect();

        groups.push(GroupAnalysis {
            key,
            pseudothreshold,
            threshold_error,
            lambda,
            slopes,
        });
    }
    AnalysisResult { groups }
}
