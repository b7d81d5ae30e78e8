use serde::{Deserialize, Serialize};

use super::{HarnessError, RunRecord};

const Z95: f64 = 1.959963984540054;

/// 95% Wilson score interval of a binomial proportion.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    (lo, (centre + half).min(1.0))
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub lambda: f64,
    /// One standard deviation, from the binomial errors of both rates.
    pub sigma: f64,
    /// The larger distance saw no errors; `lambda` is a 95% lower bound.
    pub lower_bound: bool,
}

/// Λ = p_L(small d) / p_L(large d) at a common p.
pub fn lambda_factor(small: &RunRecord, large: &RunRecord) -> Result<LambdaEstimate, HarnessError> {
    if (small.p - large.p).abs() > 1e-12 * small.p.max(large.p) {
        return Err(HarnessError::Analysis(format!(
            "records are at different p ({} vs {})",
            small.p, large.p
        )));
    }
    if small.errors == 0 {
        return Err(HarnessError::Analysis(format!(
            "no logical errors at d={}, p={}: Λ is undefined",
            small.d, small.p
        )));
    }
    let rel = |r: &RunRecord| ((1.0 - r.p_l) / (r.errors as f64)).sqrt();
    if large.errors == 0 {
        let (_, hi) = wilson_interval(0, large.shots);
        return Ok(LambdaEstimate {
            lambda: small.p_l / hi,
            sigma: 0.0,
            lower_bound: true,
        });
    }
    let lambda = small.p_l / large.p_l;
    Ok(LambdaEstimate {
        lambda,
        sigma: lambda * (rel(small).powi(2) + rel(large).powi(2)).sqrt(),
        lower_bound: false,
    })
}

/// Least-squares slope of ln p_L against ln p. Points with no errors are
/// skipped.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64, HarnessError> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(p, pl)| p > 0.0 && pl > 0.0)
        .map(|&(p, pl)| (p.ln(), pl.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(HarnessError::Analysis(format!(
            "slope fit needs at least 3 points with logical errors, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::Analysis("slope fit needs distinct p values".into()));
    }
    Ok(sxy / sxx)
}

/// Logical error curve of one distance: (p, p_L) pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub d: usize,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub d_small: usize,
    pub d_large: usize,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub p_th: f64,
    /// Half the spread of the pairwise crossings (0 with a single pair).
    pub uncertainty: f64,
    pub crossings: Vec<Crossing>,
}

/// Points used per curve for the quadratic fit around a crossing.
const FIT_POINTS: usize = 4;

/// Coefficients of y = c0 + c1 (x - x0) + c2 (x - x0)^2; linear if fewer
/// than three points.
fn fit_quadratic(pts: &[(f64, f64)], x0: f64) -> [f64; 3] {
    let m = if pts.len() >= 3 { 3 } else { 2 };
    let mut a = [[0.0f64; 4]; 3];
    for &(x, y) in pts {
        let u = x - x0;
        let pw = [1.0, u, u * u];
        for i in 0..m {
            for j in 0..m {
                a[i][j] += pw[i] * pw[j];
            }
            a[i][3] += pw[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting on the m x m system.
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            continue;
        }
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut c = [0.0; 3];
    for i in 0..m {
        if a[i][i].abs() > 1e-300 {
            c[i] = a[i][3] / a[i][i];
        }
    }
    c
}

fn crossing(small: &Curve, large: &Curve) -> Result<f64, HarnessError> {
    // Shared grid points where both curves are measurable.
    let mut shared: Vec<(f64, f64, f64)> = Vec::new();
    for &(p, a) in &small.points {
        if let Some(&(_, b)) = large.points.iter().find(|q| (q.0 - p).abs() <= 1e-12 * p) {
            if a > 0.0 && b > 0.0 {
                shared.push((p.ln(), a.ln(), b.ln()));
            }
        }
    }
    shared.sort_by(|x, y| x.0.total_cmp(&y.0));
    let grid_advice = || {
        let lo = shared.first().map(|s| s.0.exp()).unwrap_or(f64::NAN);
        let hi = shared.last().map(|s| s.0.exp()).unwrap_or(f64::NAN);
        format!("usable grid [{lo:.3e}, {hi:.3e}]")
    };
    // Below threshold the smaller code is worse: diff > 0.
    let diff: Vec<f64> = shared.iter().map(|s| s.1 - s.2).collect();
    let bracket = (0..diff.len().saturating_sub(1)).find(|&i| diff[i] > 0.0 && diff[i + 1] <= 0.0);
    let Some(i) = bracket else {
        let advice = if !diff.is_empty() && diff.iter().all(|&x| x > 0.0) {
            "extend the grid to higher p"
        } else if !diff.is_empty() && diff.iter().all(|&x| x < 0.0) {
            "extend the grid to lower p"
        } else {
            "refine the grid"
        };
        return Err(HarnessError::Analysis(format!(
            "d={} and d={} curves do not cross inside the {}; {advice}",
            small.d,
            large.d,
            grid_advice()
        )));
    };
    let (x1, x2) = (shared[i].0, shared[i + 1].0);
    let xc = x1 + (x2 - x1) * diff[i] / (diff[i] - diff[i + 1]);
    let mut near: Vec<usize> = (0..shared.len()).collect();
    near.sort_by(|&a, &b| (shared[a].0 - xc).abs().total_cmp(&(shared[b].0 - xc).abs()));
    near.truncate(FIT_POINTS);
    let fs = fit_quadratic(&near.iter().map(|&k| (shared[k].0, shared[k].1)).collect::<Vec<_>>(), xc);
    let fl = fit_quadratic(&near.iter().map(|&k| (shared[k].0, shared[k].2)).collect::<Vec<_>>(), xc);
    let (c0, c1, c2) = (fs[0] - fl[0], fs[1] - fl[1], fs[2] - fl[2]);
    // Root of c0 + c1 u + c2 u^2 nearest the linear estimate (u = 0).
    let u = if c2.abs() < 1e-12 * (c1.abs() + 1e-300) {
        if c1 == 0.0 {
            0.0
        } else {
            -c0 / c1
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 {
            0.0
        } else {
            let s = disc.sqrt();
            let r1 = (-c1 + s) / (2.0 * c2);
            let r2 = (-c1 - s) / (2.0 * c2);
            if r1.abs() < r2.abs() {
                r1
            } else {
                r2
            }
        }
    };
    Ok((xc + u).exp())
}

/// Pseudothreshold from curves at several distances: the crossing of each
/// consecutive pair, fitted with quadratics in ln p, then averaged.
pub fn pseudothreshold(curves: &[Curve]) -> Result<Threshold, HarnessError> {
    let mut sorted: Vec<&Curve> = curves.iter().collect();
    sorted.sort_by_key(|c| c.d);
    if sorted.len() < 2 {
        return Err(HarnessError::Analysis("a crossing needs at least two distances".into()));
    }
    let mut crossings = Vec::new();
    for w in sorted.windows(2) {
        let p = crossing(w[0], w[1])?;
        crossings.push(Crossing {
            d_small: w[0].d,
            d_large: w[1].d,
            p,
        });
    }
    let n = crossings.len() as f64;
    let p_th = crossings.iter().map(|c| c.p).sum::<f64>() / n;
    let max = crossings.iter().map(|c| c.p).fold(f64::MIN, f64::max);
    let min = crossings.iter().map(|c| c.p).fold(f64::MAX, f64::min);
    Ok(Threshold {
        p_th,
        uncertainty: (max - min) / 2.0,
        crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{CodeKind, Gadget, Orientation};
    use crate::pauli::Basis;

    fn rec(d: usize, p: f64, errors: u64, shots: u64) -> RunRecord {
        RunRecord {
            code: CodeKind::Rotated,
            gadget: Gadget::DL,
            basis: Basis::Z,
            orientation: Orientation::Across,
            gamma: 1.0,
            d,
            p,
            shots,
            errors,
            p_l: errors as f64 / shots as f64,
            ci95: 0.0,
            seed: 0,
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(10, 1000);
        assert!(lo < 0.01 && 0.01 < hi);
        let (lo, hi) = wilson_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
        // Known value: k=50, n=100 -> 0.5 +- 0.0962.
        let (lo, hi) = wilson_interval(50, 100);
        assert!(((hi - lo) / 2.0 - 0.0962).abs() < 1e-3);
    }

    #[test]
    fn lambda_arithmetic() {
        let l = lambda_factor(&rec(5, 1e-3, 1000, 1_000_000), &rec(7, 1e-3, 200, 1_000_000)).unwrap();
        assert!((l.lambda - 5.0).abs() < 1e-12);
        assert!(l.sigma > 0.0 && !l.lower_bound);
        let l = lambda_factor(&rec(5, 1e-3, 1000, 1_000_000), &rec(7, 1e-3, 0, 1_000_000)).unwrap();
        assert!(l.lower_bound);
        assert!(lambda_factor(&rec(5, 1e-3, 0, 10), &rec(7, 1e-3, 0, 10)).is_err());
        assert!(lambda_factor(&rec(5, 1e-3, 1, 10), &rec(7, 2e-3, 1, 10)).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1e-4, 2e-4, 5e-4, 1e-3].iter().map(|&p| (p, 3.0 * p * p)).collect();
        assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_slope(&pts[..2]).is_err());
    }

    #[test]
    fn synthetic_crossing_is_exact() {
        let p0 = 7e-3;
        let grid = log_grid(2e-3, 1e-2, 10);
        let curves: Vec<Curve> = [3usize, 5, 7]
            .iter()
            .map(|&d| Curve {
                d,
                points: grid.iter().map(|&p| (p, 0.05 * (p / p0).powf((d as f64 + 1.0) / 2.0))).collect(),
            })
            .collect();
        let t = pseudothreshold(&curves).unwrap();
        assert!((t.p_th - p0).abs() < 1e-12 * p0, "{t:?}");
        assert_eq!(t.crossings.len(), 2);
    }

    #[test]
    fn identical_curves_have_no_crossing() {
        let grid = log_grid(2e-3, 1e-2, 10);
        let c = |d| Curve {
            d,
            points: grid.iter().map(|&p| (p, p)).collect(),
        };
        let e = pseudothreshold(&[c(3), c(5)]).unwrap_err();
        assert!(e.to_string().contains("do not cross"));
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(2e-3, 1e-2, 10);
        assert_eq!(g.len(), 10);
        assert!((g[0] - 2e-3).abs() < 1e-15 && (g[9] - 1e-2).abs() < 1e-15);
    }
}
