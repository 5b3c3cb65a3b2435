//! Multiphase Monte Carlo volume of a rounded body.
//!
//! With `y = T(x − x₀)` the body becomes `K = {G·y ≤ r₀}` with the unit ball
//! inside. Phases `K_i = K ∩ B(R_i)` take `R_i = 2^{i/d}`, so consecutive
//! volumes differ by at most a factor 2. Each ratio `vol K_i / vol K_{i+1}`
//! is the fraction of hit-and-run samples of `K_{i+1}` that fall in `B(R_i)`.

use nalgebra::DVector;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::center::lp_solve_f64;
use crate::geometry::{lp_solve, HPolytope, RoundingMap, Sense};
use crate::ratio::{self, Rational};
use crate::rng::{self, StreamRng};

/// Constant in the per-phase sample count `⌈32·T·ln(2T/δ)/ε²⌉`.
pub const PHASE_SAMPLE_CONSTANT: f64 = 32.0;
/// Phase ratios below this are reported as alarms.
pub const RATIO_ALARM: f64 = 0.3;
/// Batches used for the standard error of each phase ratio.
const BATCHES: usize = 20;

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    let mut even = 1.0;
    let mut odd = 2.0;
    for k in 2..=d {
        let v = std::f64::consts::TAU / k as f64;
        if k % 2 == 0 {
            even *= v;
        } else {
            odd *= v;
        }
    }
    if d % 2 == 0 {
        even
    } else {
        odd
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnealingSchedule {
    /// `R_0 = 1, …, R_T`.
    pub radii: Vec<f64>,
    pub samples_per_phase: usize,
    /// Radius the schedule had to reach.
    pub target_radius: f64,
    /// `m^{3/2}` for the body's row count.
    pub theoretical_radius: f64,
    /// Circumradius of the coordinate bounding box of the rounded body.
    pub box_radius: f64,
}

impl AnnealingSchedule {
    /// Radii `2^{i/d}` up to the first one that reaches
    /// `min(m^{3/2}, box_radius)`.
    pub fn new(dim: usize, rows: usize, box_radius: f64, eps: f64, delta: f64) -> Self {
        let theoretical_radius = (rows as f64).powf(1.5);
        let target_radius = theoretical_radius.min(box_radius).max(1.0);
        let step = 2f64.powf(1.0 / dim as f64);
        let mut radii = vec![1.0];
        while *radii.last().unwrap() < target_radius {
            let i = radii.len() as f64;
            radii.push(2f64.powf(i / dim as f64).max(radii.last().unwrap() * step * (1.0 - 1e-15)));
        }
        let t = (radii.len() - 1).max(1) as f64;
        let samples_per_phase = (PHASE_SAMPLE_CONSTANT * t * (2.0 * t / delta).ln() / (eps * eps)).ceil() as usize;
        AnnealingSchedule { radii, samples_per_phase, target_radius, theoretical_radius, box_radius }
    }

    pub fn phases(&self) -> usize {
        self.radii.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub phase: usize,
    pub radius: f64,
    pub ratio: f64,
    pub samples: usize,
    /// Batch-means standard error of `ratio`.
    pub std_error: f64,
}

impl PhaseReport {
    pub fn to_json(&self) -> Value {
        json!({"phase": self.phase, "radius": self.radius, "ratio": self.ratio, "samples": self.samples})
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeParams {
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    /// Hit-and-run steps between recorded samples.
    pub thinning: usize,
    /// Hit-and-run steps at the start of each phase.
    pub burn_in: usize,
}

impl VolumeParams {
    pub fn new(eps: f64, delta: f64, seed: u64) -> Self {
        VolumeParams { eps, delta, seed, thinning: 1, burn_in: 0 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::OutOfRange { name: "eps", value: self.eps, range: "(0, 1)" });
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::OutOfRange { name: "delta", value: self.delta, range: "(0, 1)" });
        }
        if self.thinning == 0 {
            return Err(Error::OutOfRange { name: "thinning", value: 0.0, range: ">= 1" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub volume: f64,
    /// Estimated volume of `T(K − x₀)`; equals `volume · |det T|`.
    pub rounded_volume: f64,
    pub det: f64,
    /// Relative standard error from the per-phase batch means.
    pub relative_std_error: f64,
    pub schedule: AnnealingSchedule,
    pub phases: Vec<PhaseReport>,
}

impl VolumeEstimate {
    /// Phases whose ratio fell below [`RATIO_ALARM`].
    pub fn alarms(&self) -> Vec<usize> {
        self.phases.iter().filter(|p| p.ratio < RATIO_ALARM).map(|p| p.phase).collect()
    }

    pub fn std_error(&self) -> f64 {
        self.volume * self.relative_std_error
    }

    pub fn to_json(&self) -> Value {
        json!({
            "volume": self.volume,
            "rounded_volume": self.rounded_volume,
            "det": self.det,
            "relative_std_error": self.relative_std_error,
            "radii": self.schedule.radii.len(),
            "target_radius": self.schedule.target_radius,
            "box_radius": self.schedule.box_radius,
            "theoretical_radius": self.schedule.theoretical_radius,
            "samples_per_phase": self.schedule.samples_per_phase,
            "alarms": self.alarms(),
            "phases": self.phases.iter().map(PhaseReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `{G·y ≤ r₀}` in rounded coordinates.
#[derive(Debug, Clone)]
pub struct RoundedBody {
    dim: usize,
    /// Row-major `m × d`.
    g: Vec<f64>,
    r0: Vec<f64>,
}

impl RoundedBody {
    pub fn new(body: &HPolytope, rounding: &RoundingMap) -> Result<Self> {
        let d = body.dim();
        if rounding.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: rounding.dim() });
        }
        let lower = rounding.transform.transpose();
        let mut g = Vec::with_capacity(body.num_rows() * d);
        for a in body.dense_f64() {
            // g = T⁻ᵀa, i.e. L·g = a
            let row = lower
                .solve_lower_triangular(&DVector::from_vec(a))
                .ok_or_else(|| Error::RoundingFailure("singular transform".into()))?;
            g.extend(row.iter());
        }
        let r0 = body.residuals_f64(&rounding.center);
        if let Some((row, &residual)) = r0.iter().enumerate().find(|(_, r)| **r <= 0.0) {
            return Err(Error::OnBoundary { row, residual });
        }
        Ok(RoundedBody { dim: d, g, r0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rows(&self) -> usize {
        self.r0.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.g[i * self.dim..(i + 1) * self.dim]
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        (0..self.num_rows()).all(|i| dot(self.row(i), y) <= self.r0[i] + 1e-12)
    }

    fn mul(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), v);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hit-and-run on `K ∩ B(R)`.
struct HitAndRun<'a> {
    body: &'a RoundedBody,
    y: Vec<f64>,
    gy: Vec<f64>,
    gu: Vec<f64>,
    radius: f64,
    rng: StreamRng,
    steps: u64,
}

impl<'a> HitAndRun<'a> {
    fn new(body: &'a RoundedBody, y: Vec<f64>, rng: StreamRng) -> Self {
        let mut gy = vec![0.0; body.num_rows()];
        body.mul(&y, &mut gy);
        HitAndRun { body, y, gy, gu: vec![0.0; body.num_rows()], radius: 1.0, rng, steps: 0 }
    }

    fn step(&mut self) {
        let u = rng::unit_vector(&mut self.rng, self.body.dim());
        let b = dot(&self.y, &u);
        let yy = dot(&self.y, &self.y);
        let disc = (b * b - yy + self.radius * self.radius).max(0.0).sqrt();
        let (mut lo, mut hi) = (-b - disc, -b + disc);
        self.body.mul(&u, &mut self.gu);
        for i in 0..self.gu.len() {
            let gu = self.gu[i];
            let s = (self.body.r0[i] - self.gy[i]).max(0.0);
            if gu > 0.0 {
                hi = hi.min(s / gu);
            } else if gu < 0.0 {
                lo = lo.max(s / gu);
            }
        }
        if hi <= lo {
            return;
        }
        let t = lo + (hi - lo) * self.rng.random::<f64>();
        for (v, du) in self.y.iter_mut().zip(&u) {
            *v += t * du;
        }
        for (v, dg) in self.gy.iter_mut().zip(&self.gu) {
            *v += t * dg;
        }
        self.steps += 1;
        if self.steps % 4096 == 0 {
            self.body.mul(&self.y, &mut self.gy);
        }
    }

    fn norm(&self) -> f64 {
        dot(&self.y, &self.y).sqrt()
    }
}

/// Circumradius of the coordinate box of `T(K − x₀)`, from `2d` LPs.
pub fn box_radius(body: &HPolytope, rounding: &RoundingMap) -> Result<f64> {
    let d = body.dim();
    let mut sum = 0.0;
    for k in 0..d {
        let row: Vec<f64> = (0..d).map(|c| rounding.transform[(k, c)]).collect();
        let shift = dot(&row, &rounding.center);
        let hi = lp_solve_f64(body, &row, Sense::Maximize)?.value - shift;
        let lo = lp_solve_f64(body, &row, Sense::Minimize)?.value - shift;
        let reach = hi.abs().max(lo.abs());
        sum += reach * reach;
    }
    // guard against LP round-off
    Ok(sum.sqrt() * (1.0 + 1e-9) + 1e-9)
}

/// Volume of `body` to relative error `eps` with confidence `1 − delta`.
pub fn estimate_volume(body: &HPolytope, rounding: &RoundingMap, params: &VolumeParams) -> Result<VolumeEstimate> {
    params.validate()?;
    let d = body.dim();
    if d == 0 {
        let schedule = AnnealingSchedule {
            radii: vec![1.0],
            samples_per_phase: 0,
            target_radius: 1.0,
            theoretical_radius: (body.num_rows() as f64).powf(1.5),
            box_radius: 0.0,
        };
        return Ok(VolumeEstimate {
            volume: 1.0,
            rounded_volume: 1.0,
            det: 1.0,
            relative_std_error: 0.0,
            schedule,
            phases: Vec::new(),
        });
    }
    let rounded = RoundedBody::new(body, rounding)?;
    let schedule = AnnealingSchedule::new(d, body.num_rows(), box_radius(body, rounding)?, params.eps, params.delta);
    let n = schedule.samples_per_phase;
    let mut walker = HitAndRun::new(&rounded, vec![0.0; d], rng::stream(params.seed, 0));
    let mut phases = Vec::with_capacity(schedule.phases());
    let mut log_ratio = 0.0;
    let mut rel_var = 0.0;
    for i in 0..schedule.phases() {
        let inner = schedule.radii[i];
        walker.radius = schedule.radii[i + 1];
        walker.rng = rng::stream(params.seed, i as u64 + 1);
        for _ in 0..params.burn_in {
            walker.step();
        }
        let mut batches = [0usize; BATCHES];
        let mut hits = 0usize;
        for s in 0..n {
            for _ in 0..params.thinning {
                walker.step();
            }
            if walker.norm() <= inner {
                hits += 1;
                batches[s * BATCHES / n] += 1;
            }
        }
        let ratio = hits as f64 / n as f64;
        if hits == 0 {
            return Err(Error::RoundingFailure(format!("phase {i} saw no samples inside radius {inner}")));
        }
        let means: Vec<f64> = (0..BATCHES)
            .map(|b| {
                let size = (b + 1) * n / BATCHES - b * n / BATCHES;
                batches[b] as f64 / size.max(1) as f64
            })
            .collect();
        let var = means.iter().map(|m| (m - ratio).powi(2)).sum::<f64>() / (BATCHES * (BATCHES - 1)) as f64;
        rel_var += var / (ratio * ratio);
        log_ratio += ratio.ln();
        phases.push(PhaseReport { phase: i, radius: walker.radius, ratio, samples: n, std_error: var.sqrt() });
    }
    let rounded_volume = unit_ball_volume(d) * (-log_ratio).exp();
    let det = rounding.det().abs();
    Ok(VolumeEstimate { volume: rounded_volume / det, rounded_volume, det, relative_std_error: rel_var.sqrt(), schedule, phases })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub volume: f64,
    pub std_error: f64,
    pub box_volume: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Rejection sampling in the exact coordinate bounding box.
pub fn exact_volume_oracle(body: &HPolytope, box_samples: u64, seed: u64) -> Result<OracleEstimate> {
    let d = body.dim();
    if d > 6 {
        return Err(Error::OutOfRange { name: "dimension", value: d as f64, range: "<= 6" });
    }
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for k in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[k] = ratio::int(1);
        hi.push(ratio::to_f64(&lp_solve(body, &e, Sense::Maximize)?.value));
        lo.push(ratio::to_f64(&lp_solve(body, &e, Sense::Minimize)?.value));
    }
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = rng::stream(seed, 0);
    let mut hits = 0u64;
    let mut x = vec![0.0; d];
    for _ in 0..box_samples {
        for k in 0..d {
            x[k] = lo[k] + (hi[k] - lo[k]) * rng.random::<f64>();
        }
        if body.contains_f64(&x) {
            hits += 1;
        }
    }
    let p = hits as f64 / box_samples.max(1) as f64;
    let std_error = box_volume * (p * (1.0 - p) / box_samples.max(1) as f64).sqrt();
    Ok(OracleEstimate { volume: box_volume * p, std_error, box_volume, hits, samples: box_samples })
}
