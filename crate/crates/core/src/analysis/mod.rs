//! Logical error rates from Monte Carlo counts, threshold and slope fits,
//! and the closed-form error-rate and qubit-count models.

mod harness;

pub use harness::{run_point, run_sweep, PointSpec};

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Threshold of the empirical power law.
pub const P_TH: f64 = 0.0057;
/// Prefactor of the empirical power law.
pub const PREFACTOR: f64 = 0.03;
/// Per-step thresholds when only one error class is active.
pub const CLASS_THRESHOLDS: [f64; 3] = [0.043, 0.12, 0.0125];

/// `(d + 1) / 2` for odd `d`, `d / 2` for even `d`.
pub fn error_dimension(d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("distance {d} < 2")));
    }
    Ok(if d % 2 == 1 { d.div_ceil(2) } else { d / 2 })
}

/// `0.03 (p / 0.0057)^{d_e}`.
pub fn empirical_pl(p: f64, d: usize) -> Result<f64> {
    Ok(PREFACTOR * (p / P_TH).powi(error_dimension(d)? as i32))
}

/// Row-counting estimate `d · d! / ((d_e - 1)! d_e!) · (8p)^{d_e}`; odd `d`
/// only.
pub fn statistical_pl(p: f64, d: usize) -> Result<f64> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("statistical model needs odd d, got {d}")));
    }
    let de = error_dimension(d)?;
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let count = fact(d) / (fact(de - 1) * fact(de));
    Ok(d as f64 * count * (8.0 * p).powi(de as i32))
}

/// `0.03 (p_j / p_th,j)^{d_e}` for error class `class`.
pub fn class_pl(p: f64, class: u8, d: usize) -> Result<f64> {
    let th = *CLASS_THRESHOLDS
        .get(class as usize)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown error class {class}")))?;
    Ok(PREFACTOR * (p / th).powi(error_dimension(d)? as i32))
}

/// Physical qubits of a distance-`d` planar array: `(2d - 1)^2`.
pub fn qubits_per_logical(d: usize) -> usize {
    let s = (2 * d).saturating_sub(1);
    s * s
}

/// Wilson score interval for `k` successes in `n` trials at normal
/// quantile `z`.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k, n as f64);
    let phat = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    (lo, (centre + half).min(1.0))
}

const Z95: f64 = 1.959_963_984_540_054;

/// Monte Carlo counts at one `(d, p)`. Each shot runs `rounds` cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub d: usize,
    pub p: f64,
    pub shots: u64,
    pub failures: u64,
    pub rounds: usize,
}

impl RatePoint {
    /// Per-cycle rate: the flip probability per cycle whose `rounds`-fold
    /// composition gives the observed per-shot failure fraction. Close to
    /// failures per shot divided by `rounds` when failures are rare.
    pub fn p_l(&self) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        per_cycle(self.failures as f64 / self.shots as f64, self.rounds)
    }

    /// Wilson 95% interval on the per-cycle rate.
    pub fn ci(&self) -> (f64, f64) {
        let (lo, hi) = wilson(self.failures, self.shots, Z95);
        (per_cycle(lo, self.rounds), per_cycle(hi, self.rounds))
    }
}

/// Inverts `P = (1 - (1 - 2q)^r) / 2`; shot fractions at or above one half
/// map to one half.
pub fn per_cycle(shot_fraction: f64, rounds: usize) -> f64 {
    if rounds <= 1 || shot_fraction <= 0.0 {
        return shot_fraction.min(0.5).max(0.0);
    }
    if shot_fraction >= 0.5 {
        return 0.5;
    }
    -(((1.0 - 2.0 * shot_fraction).ln() / rounds as f64).exp_m1()) / 2.0
}

pub const RATE_CSV_HEADER: &str = "d,p,shots,failures,P_L,ci_lo,ci_hi";

pub fn rates_csv(points: &[RatePoint]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{RATE_CSV_HEADER}");
    for pt in points {
        let (lo, hi) = pt.ci();
        let _ = writeln!(s, "{},{},{},{},{:.6e},{:.6e},{:.6e}", pt.d, pt.p, pt.shots, pt.failures, pt.p_l(), lo, hi);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    /// Error dimension of the largest distance.
    pub d_e: usize,
    /// Least-squares exponent of `P_L` vs `p` for the largest distance,
    /// over points below the crossing.
    pub slope: f64,
    pub p_th_estimate: f64,
}

/// Least-squares slope of `log P_L` against `log p`; points with no
/// failures are skipped.
pub fn fit_slope(points: &[RatePoint]) -> Result<f64> {
    let xy: Vec<(f64, f64)> = points.iter().filter(|p| p.failures > 0 && p.p > 0.0).map(|p| (p.p.ln(), p.p_l().ln())).collect();
    if xy.len() < 2 {
        return Err(Error::InvalidArgument("slope fit needs two points with failures".into()));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|v| v.0).sum::<f64>() / n;
    let my = xy.iter().map(|v| v.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|v| (v.0 - mx) * (v.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|v| (v.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs two distinct p".into()));
    }
    Ok(sxy / sxx)
}

/// Where the curves of two distances cross, interpolating linearly in
/// `(log p, log P_L)` between the bracketing sampled `p`.
pub fn crossing(small: &[RatePoint], large: &[RatePoint]) -> Result<f64> {
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for a in small {
        if let Some(b) = large.iter().find(|b| b.p == a.p) {
            if a.failures > 0 && b.failures > 0 {
                pairs.push((a.p.ln(), b.p_l().ln() - a.p_l().ln()));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in pairs.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        if f0 <= 0.0 && f1 > 0.0 {
            let x = if f1 == f0 { x0 } else { x0 - f0 * (x1 - x0) / (f1 - f0) };
            return Ok(x.exp());
        }
    }
    Err(Error::NoCrossing("curves do not cross in the sampled range".into()))
}

/// Threshold from the two largest distances, and the sub-threshold slope of
/// the largest.
pub fn estimate_threshold(points: &[RatePoint]) -> Result<ScalingFit> {
    let mut ds: Vec<usize> = points.iter().map(|p| p.d).collect();
    ds.sort_unstable();
    ds.dedup();
    if ds.len() < 2 {
        return Err(Error::NoCrossing("need at least two distances".into()));
    }
    let (d_small, d_large) = (ds[ds.len() - 2], ds[ds.len() - 1]);
    let of = |d: usize| -> Vec<RatePoint> { points.iter().copied().filter(|p| p.d == d).collect() };
    let large = of(d_large);
    let p_th = crossing(&of(d_small), &large)?;
    let below: Vec<RatePoint> = large.iter().copied().filter(|p| p.p < p_th).collect();
    let slope = fit_slope(&below).unwrap_or(f64::NAN);
    Ok(ScalingFit { d_e: error_dimension(d_large)?, slope, p_th_estimate: p_th })
}

/// Smallest odd distance whose empirical `P_L` at `p / p_th = ratio` is at
/// most `target`.
pub fn distance_for_target(ratio: f64, target: f64) -> Result<usize> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("p/p_th = {ratio} must lie in (0, 1)")));
    }
    if !(target > 0.0) {
        return Err(Error::InvalidArgument(format!("target {target} must be positive")));
    }
    let de = ((target / PREFACTOR).ln() / ratio.ln()).ceil().max(1.0) as usize;
    Ok(2 * de - 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitCurvePoint {
    pub target: f64,
    pub ratio: f64,
    pub d: usize,
    pub n_q: usize,
}

/// Qubits per logical qubit against `p / p_th` for each target `P_L`.
pub fn qubit_curves(targets: &[f64], ratios: &[f64]) -> Result<Vec<QubitCurvePoint>> {
    let mut out = Vec::new();
    for &target in targets {
        for &ratio in ratios {
            let d = distance_for_target(ratio, target)?;
            out.push(QubitCurvePoint { target, ratio, d, n_q: qubits_per_logical(d) });
        }
    }
    Ok(out)
}

pub const CURVE_CSV_HEADER: &str = "P_L,p_over_pth,d,n_q";

pub fn curves_csv(points: &[QubitCurvePoint]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{CURVE_CSV_HEADER}");
    for c in points {
        let _ = writeln!(s, "{:e},{},{},{}", c.target, c.ratio, c.d, c.n_q);
    }
    s
}
