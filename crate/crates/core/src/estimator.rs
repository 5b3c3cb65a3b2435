//! Randomized estimate of a Littlewood-Richardson coefficient: the volume of
//! the relaxed body `Q` times the fraction of uniform samples of `Q` whose
//! nearest lattice point is an integer hive.

use std::time::Instant;

use num_traits::Signed;
use rand::seq::IndexedRandom;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{self, Body, HPolytope};
use crate::hive::{build_rhombus_system, count_lattice_points};
use crate::partitions::{make_shift, shift_triple, PartitionTriple, ShiftDirection};
use crate::ratio::{self, Rational};
use crate::rng;
use crate::sampling::{sample_uniform, WalkParams};
use crate::volume::{estimate_volume, VolumeEstimate, VolumeParams};

/// Exact counts are attached to reports up to this dimension.
pub const EXACT_DIAGNOSTIC_DIM: usize = 7;
/// Node budget for the attached exact count.
pub const EXACT_DIAGNOSTIC_BUDGET: u64 = 20_000_000;
/// Counted lattice points whose surrounding unit cube is checked against `Q`.
const SPOT_CHECKS: usize = 10;

/// `s = ⌈(6/ε²)·ln(2/δ)⌉`.
pub fn sample_count(eps: f64, delta: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::OutOfRange { name: "eps", value: eps, range: "(0, 1/2]" });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange { name: "delta", value: delta, range: "(0, 1)" });
    }
    Ok((6.0 / (eps * eps) * (2.0 / delta).ln()).ceil() as usize)
}

/// Nearest integer per coordinate; halves round away from zero.
pub fn round_to_lattice(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| v.round() as i64).collect()
}

/// Whether `t ∈ (Δ, Δ, Δ′) + LRC`: the shifted-back triple is a triple of
/// partitions with a positive coefficient.
pub fn applicability(t: &PartitionTriple) -> bool {
    let Ok(shift) = make_shift(t.rank(), &ratio::int(1), true) else {
        return false;
    };
    match shift_triple(t, &shift, ShiftDirection::Subtract) {
        Ok(Some(base)) => geometry::positivity(&base),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOptions {
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub chains: usize,
    pub threads: usize,
    /// Overrides for the walk defaults.
    pub walk_radius: Option<f64>,
    pub burn_in: Option<u64>,
    pub thinning: Option<u64>,
    /// Node budget for the attached exact count; zero disables it.
    pub exact_budget: u64,
}

impl EstimateOptions {
    pub fn new(eps: f64, delta: f64, seed: u64) -> Self {
        EstimateOptions {
            eps,
            delta,
            seed,
            chains: 1,
            threads: 1,
            walk_radius: None,
            burn_in: None,
            thinning: None,
            exact_budget: EXACT_DIAGNOSTIC_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatePath {
    /// No interior nodes: the coefficient is 0 or 1 and read off directly.
    ZeroDimensional,
    /// `Q` is empty, so is `P`.
    Infeasible,
    /// `Q` is nonempty but has no interior, so `P` is empty.
    Flat,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateDiagnostics {
    pub path: EstimatePath,
    pub dim: usize,
    /// Rows of `Q` after dropping repeated and dominated rows.
    pub rows: usize,
    /// Rounded samples inside `P` (these make up `f`).
    pub hits_p: usize,
    /// Rounded samples inside `Q`; never below `hits_p`.
    pub hits_q: usize,
    /// Rounded samples on which the float and exact `P` checks disagree.
    pub float_disagreements: usize,
    /// Counted lattice points whose unit cube was checked inside `Q`.
    pub cube_checks: usize,
    pub cube_failures: usize,
    pub walk_acceptance: f64,
    /// `|f − p| ≤ 2ε` on the sample proportion.
    pub additive_band: f64,
    /// The same band relative to `f`.
    pub relative_band: Option<f64>,
    pub exact_count: Option<u64>,
    pub volume: Option<VolumeEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    #[serde(rename = "volume_Q")]
    pub volume_q: f64,
    pub f: f64,
    pub s: usize,
    pub eps: f64,
    pub delta: f64,
    pub applicable: bool,
    pub seed: u64,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub diagnostics: EstimateDiagnostics,
}

impl EstimateReport {
    /// The documented report object.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn diagnostics_json(&self) -> Value {
        let d = &self.diagnostics;
        json!({
            "path": d.path,
            "dim": d.dim,
            "rows": d.rows,
            "hits_p": d.hits_p,
            "hits_q": d.hits_q,
            "float_disagreements": d.float_disagreements,
            "cube_checks": d.cube_checks,
            "cube_failures": d.cube_failures,
            "walk_acceptance": d.walk_acceptance,
            "additive_band": d.additive_band,
            "relative_band": d.relative_band,
            "exact_count": d.exact_count,
            "volume": d.volume.as_ref().map(VolumeEstimate::to_json),
        })
    }
}

/// Whether the unit cube around `z` lies in `q`, checked on its `2d` facet
/// centers `z ± ½e_k` and exactly.
fn cube_in(q: &HPolytope, z: &[i64]) -> bool {
    let half = ratio::frac(1, 2);
    let base: Vec<Rational> = z.iter().map(|&v| ratio::int(v)).collect();
    (0..z.len()).all(|k| {
        [&half, &-&half].iter().all(|h| {
            let mut p = base.clone();
            p[k] += *h;
            q.contains(&p)
        })
    })
}

pub fn estimate_lrc(t: &PartitionTriple, eps: f64, delta: f64, seed: u64) -> Result<EstimateReport> {
    estimate_lrc_with(t, &EstimateOptions::new(eps, delta, seed))
}

pub fn estimate_lrc_with(t: &PartitionTriple, opts: &EstimateOptions) -> Result<EstimateReport> {
    let started = Instant::now();
    let s = sample_count(opts.eps, opts.delta)?;
    let system = build_rhombus_system(t);
    let d = system.dim();
    let q = HPolytope::from_system(&system, Body::Outer.slack()).deduplicated();
    let applicable = applicability(t);
    let exact_count = if d <= EXACT_DIAGNOSTIC_DIM && opts.exact_budget > 0 {
        count_lattice_points(&system, opts.exact_budget).ok()
    } else {
        None
    };
    let mut diagnostics = EstimateDiagnostics {
        path: EstimatePath::Sampled,
        dim: d,
        rows: q.num_rows(),
        hits_p: 0,
        hits_q: 0,
        float_disagreements: 0,
        cube_checks: 0,
        cube_failures: 0,
        walk_acceptance: 0.0,
        additive_band: 2.0 * opts.eps,
        relative_band: None,
        exact_count,
        volume: None,
    };
    let finish = |estimate: f64, volume_q: f64, f: f64, s: usize, diagnostics: EstimateDiagnostics| EstimateReport {
        estimate,
        volume_q,
        f,
        s,
        eps: opts.eps,
        delta: opts.delta,
        applicable,
        seed: opts.seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
        diagnostics,
    };

    if d == 0 {
        let count = u64::from(system.contains_integer(&[]));
        diagnostics.path = EstimatePath::ZeroDimensional;
        diagnostics.exact_count = Some(count);
        return Ok(finish(count as f64, 1.0, count as f64, 0, diagnostics));
    }
    let rounding = match geometry::rounding_for(&q) {
        Ok(r) => r,
        Err(Error::Infeasible) => {
            diagnostics.path = EstimatePath::Infeasible;
            return Ok(finish(0.0, 0.0, 0.0, 0, diagnostics));
        }
        Err(Error::FlatBody { .. }) => {
            diagnostics.path = EstimatePath::Flat;
            return Ok(finish(0.0, 0.0, 0.0, 0, diagnostics));
        }
        Err(e) => return Err(e),
    };

    let volume_params = VolumeParams::new(opts.eps, opts.delta, rng::derive(opts.seed, 1));
    let volume = estimate_volume(&q, &rounding, &volume_params)?;

    let defaults = WalkParams::for_body(&q, rng::derive(opts.seed, 2));
    let walk = WalkParams {
        radius: opts.walk_radius.unwrap_or(defaults.radius),
        burn_in: opts.burn_in.unwrap_or(defaults.burn_in),
        thinning: opts.thinning.unwrap_or(defaults.thinning),
        chains: opts.chains.max(1),
        threads: opts.threads.max(1),
        ..defaults
    };
    let samples = sample_uniform(&q, s, &walk, &rounding.center)?;
    diagnostics.walk_acceptance = samples.acceptance_rate();

    let p = HPolytope::from_system(&system, Body::Hive.slack());
    let mut counted = Vec::new();
    for x in &samples.points {
        let z = round_to_lattice(x);
        let exact = system.contains_integer(&z);
        let zf: Vec<f64> = z.iter().map(|&v| v as f64).collect();
        if exact != p.residuals_f64(&zf).iter().all(|r| *r >= 0.0) {
            diagnostics.float_disagreements += 1;
        }
        let in_q = q.residuals(&z.iter().map(|&v| ratio::int(v)).collect::<Vec<_>>()).iter().all(|r| !r.is_negative());
        diagnostics.hits_q += usize::from(in_q);
        if exact {
            diagnostics.hits_p += 1;
            counted.push(z);
        }
    }
    let mut spot = rng::stream(rng::derive(opts.seed, 3), 0);
    for z in counted.choose_multiple(&mut spot, SPOT_CHECKS) {
        diagnostics.cube_checks += 1;
        diagnostics.cube_failures += usize::from(!cube_in(&q, z));
    }

    let f = diagnostics.hits_p as f64 / s as f64;
    diagnostics.relative_band = (f > 0.0).then(|| 2.0 * opts.eps / f);
    let volume_q = volume.volume;
    diagnostics.volume = Some(volume);
    Ok(finish(f * volume_q, volume_q, f, s, diagnostics))
}
