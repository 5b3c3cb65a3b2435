//! Dikin walk: a Metropolis-filtered walk whose proposals are uniform in the
//! local Dikin ellipsoid, with the uniform distribution on the body as its
//! stationary law.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::dikin::hessian_f64;
use crate::geometry::HPolytope;
use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct WalkParams {
    /// Proposal radius in units of the Dikin ellipsoid, in `(0, 1)`.
    pub radius: f64,
    pub burn_in: u64,
    pub thinning: u64,
    pub seed: u64,
    /// Independent chains; chain `k` uses stream `k` of `seed`.
    pub chains: usize,
    /// Worker threads. Output does not depend on this.
    pub threads: usize,
}

/// Default proposal radius is this over `√d`.
pub const RADIUS_CONSTANT: f64 = 0.8;
/// Upper cap on the default radius.
pub const MAX_RADIUS: f64 = 0.95;

impl WalkParams {
    /// `r = min(0.8/√d, 0.95)`, burn-in `200·d·m`, thinning `10·d`, one chain.
    pub fn for_body(body: &HPolytope, seed: u64) -> Self {
        let d = body.dim().max(1) as u64;
        let m = body.num_rows().max(1) as u64;
        WalkParams {
            radius: (RADIUS_CONSTANT / (d as f64).sqrt()).min(MAX_RADIUS),
            burn_in: 200 * d * m,
            thinning: 10 * d,
            seed,
            chains: 1,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius < 1.0) {
            return Err(Error::OutOfRange { name: "radius", value: self.radius, range: "(0, 1)" });
        }
        if self.burn_in < 1 {
            return Err(Error::OutOfRange { name: "burn_in", value: 0.0, range: ">= 1" });
        }
        if self.thinning < 1 {
            return Err(Error::OutOfRange { name: "thinning", value: 0.0, range: ">= 1" });
        }
        if self.chains < 1 {
            return Err(Error::OutOfRange { name: "chains", value: 0.0, range: ">= 1" });
        }
        Ok(())
    }
}

/// Cholesky factor `L` of `H(x)` and `log det H(x)`.
fn factor(body: &HPolytope, x: &[f64]) -> Option<(DMatrix<f64>, f64)> {
    let h = hessian_f64(body, x).ok()?;
    let l = h.cholesky()?.l();
    let log_det = 2.0 * l.diagonal().iter().map(|v| v.ln()).sum::<f64>();
    Some((l, log_det))
}

#[derive(Debug, Clone)]
pub struct WalkState {
    x: Vec<f64>,
    lower: DMatrix<f64>,
    log_det: f64,
    steps: u64,
    accepted: u64,
    rng: StreamRng,
}

impl WalkState {
    pub fn new(body: &HPolytope, start: &[f64], rng: StreamRng) -> Result<Self> {
        if start.len() != body.dim() {
            return Err(Error::DimensionMismatch { expected: body.dim(), got: start.len() });
        }
        if let Some((row, &residual)) = body.residuals_f64(start).iter().enumerate().find(|(_, r)| **r <= 0.0) {
            return Err(Error::OnBoundary { row, residual });
        }
        let (lower, log_det) = factor(body, start).ok_or(Error::NotPositiveDefinite)?;
        Ok(WalkState { x: start.to_vec(), lower, log_det, steps: 0, accepted: 0, rng })
    }

    pub fn point(&self) -> &[f64] {
        &self.x
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// Uniform point of `D_x(r)`: `x + r·L⁻ᵀξ` with `ξ` uniform in the unit ball.
    pub fn propose(&mut self, radius: f64) -> Vec<f64> {
        let xi = DVector::from_vec(rng::in_unit_ball(&mut self.rng, self.x.len()));
        let z = self.lower.tr_solve_lower_triangular(&xi).expect("nonsingular factor");
        self.x.iter().zip(z.iter()).map(|(a, b)| a + radius * b).collect()
    }
}

/// Metropolis probability of moving from the current state to `y`, zero when
/// `y` leaves the interior or `x ∉ D_y(r)`. Also returns the factor at `y`.
fn acceptance(body: &HPolytope, state: &WalkState, y: &[f64], radius: f64) -> (f64, Option<(DMatrix<f64>, f64)>) {
    if !body.strictly_contains_f64(y) {
        return (0.0, None);
    }
    let Some((ly, log_det_y)) = factor(body, y) else {
        return (0.0, None);
    };
    let diff = DVector::from_iterator(y.len(), state.x.iter().zip(y).map(|(a, b)| a - b));
    let back = ly.transpose() * diff;
    if back.norm_squared() > radius * radius {
        return (0.0, None);
    }
    let p = (0.5 * (log_det_y - state.log_det)).exp().min(1.0);
    (p, Some((ly, log_det_y)))
}

/// Acceptance probability of the move from `x` to `y`.
pub fn acceptance_probability(body: &HPolytope, x: &[f64], y: &[f64], radius: f64) -> Result<f64> {
    let state = WalkState::new(body, x, rng::stream(0, 0))?;
    Ok(acceptance(body, &state, y, radius).0)
}

/// One step of the walk. Returns whether the proposal was accepted.
pub fn dikin_step(state: &mut WalkState, body: &HPolytope, radius: f64) -> bool {
    let y = state.propose(radius);
    let (p, factor_y) = acceptance(body, state, &y, radius);
    let u: f64 = state.rng.random();
    state.steps += 1;
    let moved = match factor_y {
        Some((ly, log_det_y)) if u < p => {
            state.x = y;
            state.lower = ly;
            state.log_det = log_det_y;
            state.accepted += 1;
            true
        }
        _ => false,
    };
    debug_assert!(body.strictly_contains_f64(&state.x));
    moved
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkOutput {
    pub points: Vec<Vec<f64>>,
    pub steps: u64,
    pub accepted: u64,
}

impl WalkOutput {
    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }
}

fn chain_share(count: usize, chains: usize, k: usize) -> usize {
    count / chains + usize::from(k < count % chains)
}

fn run_chain(
    body: &HPolytope,
    start: &[f64],
    params: &WalkParams,
    chain: usize,
    count: usize,
    mut trace: Option<&mut dyn Write>,
) -> Result<WalkOutput> {
    let mut state = WalkState::new(body, start, rng::stream(params.seed, chain as u64))?;
    let mut points = Vec::with_capacity(count);
    let mut advance = |state: &mut WalkState, steps: u64| -> Result<()> {
        for _ in 0..steps {
            let moved = dikin_step(state, body, params.radius);
            if let Some(w) = trace.as_deref_mut() {
                write!(w, "{},{}", state.steps(), chain)?;
                for v in state.point() {
                    write!(w, ",{v}")?;
                }
                writeln!(w, ",{}", u8::from(moved))?;
            }
        }
        Ok(())
    };
    if count > 0 {
        advance(&mut state, params.burn_in)?;
    }
    for _ in 0..count {
        advance(&mut state, params.thinning)?;
        points.push(state.point().to_vec());
    }
    Ok(WalkOutput { points, steps: state.steps(), accepted: state.accepted() })
}

fn merge(parts: Vec<WalkOutput>) -> WalkOutput {
    let mut out = WalkOutput { points: Vec::new(), steps: 0, accepted: 0 };
    for p in parts {
        out.points.extend(p.points);
        out.steps += p.steps;
        out.accepted += p.accepted;
    }
    out
}

/// `count` approximately uniform points of `body`. Each chain burns in and
/// then records one point per `thinning` steps; chains are concatenated in
/// stream order.
pub fn sample_uniform(body: &HPolytope, count: usize, params: &WalkParams, start: &[f64]) -> Result<WalkOutput> {
    params.validate()?;
    let chains = params.chains;
    if params.threads <= 1 || chains == 1 {
        let parts = (0..chains)
            .map(|k| run_chain(body, start, params, k, chain_share(count, chains, k), None))
            .collect::<Result<Vec<_>>>()?;
        return Ok(merge(parts));
    }
    let workers = params.threads.min(chains);
    let mut slots: Vec<Option<Result<WalkOutput>>> = vec![None; chains];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..chains)
                        .step_by(workers)
                        .map(|k| (k, run_chain(body, start, params, k, chain_share(count, chains, k), None)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("sampling worker panicked") {
                slots[k] = Some(r);
            }
        }
    });
    let parts = slots.into_iter().map(|s| s.expect("every chain ran")).collect::<Result<Vec<_>>>()?;
    Ok(merge(parts))
}

/// As [`sample_uniform`], single-threaded, also writing every step as CSV
/// `step,chain,x0,…,accepted`.
pub fn sample_uniform_traced(
    body: &HPolytope,
    count: usize,
    params: &WalkParams,
    start: &[f64],
    trace: &mut dyn Write,
) -> Result<WalkOutput> {
    params.validate()?;
    write!(trace, "step,chain")?;
    for k in 0..body.dim() {
        write!(trace, ",x{k}")?;
    }
    writeln!(trace, ",accepted")?;
    let parts = (0..params.chains)
        .map(|k| run_chain(body, start, params, k, chain_share(count, params.chains, k), Some(&mut *trace)))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(parts))
}
