//! Desk-scale experiments on the structure of hive polytopes: inscribed balls
//! of shifted bodies, lattice-point density, Minkowski containment and the
//! density of the shifted cone.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rand::seq::index;
use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::estimator::applicability;
use crate::geometry::{self, chebyshev_center, lp_solve, rounding_for, Body, HPolytope, Sense};
use crate::hive::{build_rhombus_system, exact_count, quadratic_hive};
use crate::partitions::{make_shift, Partition, PartitionTriple};
use crate::ratio::{self, Rational};
use crate::rng;
use crate::volume::{estimate_volume, VolumeParams};

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallCheckReport {
    pub n: usize,
    pub eps_inverse: String,
    pub dim: usize,
    /// Smallest rhombus slack of the quadratic hive (exact, as a decimal).
    pub quadratic_min_slack: f64,
    /// All rhombus slacks of the quadratic hive.
    pub quadratic_slacks: Vec<String>,
    pub inradius: f64,
    /// `C(n, 2)/(2ε)`.
    pub claimed_radius: f64,
    pub ratio: f64,
    pub full_dimensional: bool,
}

impl BallCheckReport {
    pub fn to_json(&self) -> Value {
        to_json(self)
    }
}

/// Inscribed ball of `P(Δ_ε, Δ_ε, Δ′_ε)` against the claimed radius.
pub fn inscribed_ball_check(n: usize, eps_inverse: &Rational) -> Result<BallCheckReport> {
    if !(3..=7).contains(&n) {
        return Err(Error::OutOfRange { name: "n", value: n as f64, range: "3..=7" });
    }
    let shift = make_shift(n, eps_inverse, true)?;
    let system = build_rhombus_system(&shift.as_triple()?);
    let slacks = system.rational_slacks(&quadratic_hive(n, eps_inverse)?);
    let min_slack = slacks.iter().min().cloned().unwrap_or_else(Rational::zero);
    let ball = chebyshev_center(&HPolytope::from_system(&system, Body::Hive.slack()))?;
    let claimed = (n * (n - 1) / 2) as f64 * ratio::to_f64(eps_inverse) / 2.0;
    Ok(BallCheckReport {
        n,
        eps_inverse: ratio::display(eps_inverse),
        dim: system.dim(),
        quadratic_min_slack: ratio::to_f64(&min_slack),
        quadratic_slacks: slacks.iter().map(ratio::display).collect(),
        inradius: ball.radius,
        claimed_radius: claimed,
        ratio: ball.radius / claimed,
        full_dimensional: ball.radius > ball.tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeRatioReport {
    pub triple: String,
    pub exact_count: u64,
    pub volume: f64,
    pub volume_std_error: f64,
    /// `N / V̂`.
    pub ratio: f64,
    pub upper_bound: f64,
    pub within_upper: bool,
    pub applicable: bool,
}

impl VolumeRatioReport {
    pub fn to_json(&self) -> Value {
        to_json(self)
    }
}

/// Lattice-point count of `P` against the estimated volume of `Q`.
pub fn volume_ratio_check(t: &PartitionTriple, eps: f64, delta: f64, seed: u64) -> Result<VolumeRatioReport> {
    let system = build_rhombus_system(t);
    if system.dim() > 6 {
        return Err(Error::OutOfRange { name: "dimension", value: system.dim() as f64, range: "<= 6" });
    }
    let count = exact_count(t, u64::MAX)?;
    let q = HPolytope::from_system(&system, Body::Outer.slack()).deduplicated();
    let (volume, se) = if system.dim() == 0 {
        (1.0, 0.0)
    } else {
        let v = estimate_volume(&q, &rounding_for(&q)?, &VolumeParams::new(eps, delta, seed))?;
        (v.volume, v.std_error())
    };
    let ratio = count as f64 / volume;
    Ok(VolumeRatioReport {
        triple: t.to_string(),
        exact_count: count,
        volume,
        volume_std_error: se,
        ratio,
        upper_bound: 1.0 + 3.0 * eps,
        within_upper: ratio <= 1.0 + 3.0 * eps,
        applicable: applicability(t),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orientation {
    /// `log c(left) − θ log c(a) − (1 − θ) log c(b)`; absent when infinite.
    pub slack: Option<f64>,
    /// The inequality decided in integers: `c(left)^q ≥ c(a)^p · c(b)^{q−p}` for `θ = p/q`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogConcavityReport {
    pub t1: String,
    pub t2: String,
    pub theta: String,
    pub midpoint: String,
    pub pairs: usize,
    pub containment_failures: usize,
    pub counts: Option<[u64; 3]>,
    /// `c(mid)` against `c(t1)`, `c(t2)`.
    pub midpoint_form: Option<Orientation>,
    /// `c(t1)` against `c(t2)`, `c(mid)`, as the roles read literally.
    pub literal_form: Option<Orientation>,
}

impl LogConcavityReport {
    pub fn to_json(&self) -> Value {
        to_json(self)
    }
}

/// `a^q ≥ b^p · c^{q−p}` in integers, with the matching log slack.
fn weighted_log_inequality(a: u64, b: u64, c: u64, theta: &Rational) -> Orientation {
    let p = theta.numer().clone();
    let q = theta.denom().clone();
    let p_u: u64 = p.to_string().parse().expect("small numerator");
    let q_u: u64 = q.to_string().parse().expect("small denominator");
    let lhs: BigInt = Pow::pow(BigInt::from(a), q_u);
    let rhs: BigInt = Pow::pow(BigInt::from(b), p_u) * Pow::pow(BigInt::from(c), q_u - p_u);
    let th = ratio::to_f64(theta);
    let slack = (a as f64).ln() - th * (b as f64).ln() - (1.0 - th) * (c as f64).ln();
    Orientation { slack: slack.is_finite().then_some(slack), holds: lhs >= rhs }
}

/// Rational points of a body: vertices from random integer objectives, then
/// random convex combinations with small rational weights.
fn random_points<R: Rng>(body: &HPolytope, count: usize, rng: &mut R) -> Result<Vec<Vec<Rational>>> {
    let d = body.dim();
    if d == 0 {
        return Ok(vec![Vec::new(); count]);
    }
    let mut vertices = Vec::new();
    for _ in 0..(2 * d + 2) {
        let objective: Vec<Rational> = (0..d).map(|_| ratio::int(rng.random_range(-5..=5))).collect();
        vertices.push(lp_solve(body, &objective, Sense::Maximize)?.point);
    }
    Ok((0..count)
        .map(|_| {
            let mut weights: Vec<i64> = vertices.iter().map(|_| rng.random_range(0..=6)).collect();
            if weights.iter().all(|&w| w == 0) {
                weights[0] = 1;
            }
            let total: i64 = weights.iter().sum();
            let mut x = vec![Rational::zero(); d];
            for (k, w) in weights.iter().enumerate() {
                for (c, v) in x.iter_mut().zip(&vertices[k]) {
                    *c += v * ratio::frac(*w, total);
                }
            }
            x
        })
        .collect())
}

/// Minkowski containment `θQ(t1) + (1 − θ)Q(t2) ⊆ Q(mid)` on random pairs,
/// and the Brunn-Minkowski type inequality among exact counts.
pub fn logconcavity_check(
    t1: &PartitionTriple,
    t2: &PartitionTriple,
    theta: &Rational,
    pairs: usize,
    seed: u64,
) -> Result<LogConcavityReport> {
    if theta.is_negative() || theta > &Rational::one() {
        return Err(Error::OutOfRange { name: "theta", value: ratio::to_f64(theta), range: "[0, 1]" });
    }
    let mid = t1.combine(t2, theta)?;
    let q1 = HPolytope::for_triple(t1, Body::Outer);
    let q2 = HPolytope::for_triple(t2, Body::Outer);
    let qm = HPolytope::for_triple(&mid, Body::Outer);
    let mut rng = rng::stream(seed, 0);
    let xs = random_points(&q1, pairs, &mut rng)?;
    let ys = random_points(&q2, pairs, &mut rng)?;
    let one_minus = Rational::one() - theta;
    let failures = xs
        .iter()
        .zip(&ys)
        .filter(|(x, y)| {
            let z: Vec<Rational> = x.iter().zip(y.iter()).map(|(a, b)| theta * a + &one_minus * b).collect();
            !qm.contains(&z)
        })
        .count();
    let exact = build_rhombus_system(t1).dim() <= 6;
    let counts = if exact { Some([exact_count(t1, u64::MAX)?, exact_count(t2, u64::MAX)?, exact_count(&mid, u64::MAX)?]) } else { None };
    Ok(LogConcavityReport {
        t1: t1.to_string(),
        t2: t2.to_string(),
        theta: ratio::display(theta),
        midpoint: mid.to_string(),
        pairs,
        containment_failures: failures,
        counts,
        midpoint_form: counts.map(|[a, b, m]| weighted_log_inequality(m, a, b, theta)),
        literal_form: counts.map(|[a, b, m]| weighted_log_inequality(a, b, m, theta)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionReport {
    pub n: usize,
    pub gamma: u64,
    pub shift_norm: String,
    /// Positive triples kept.
    pub accepted: usize,
    /// Kept triples inside the shifted cone.
    pub applicable: usize,
    pub fraction: f64,
    pub std_error: f64,
    pub attempts: u64,
    /// Accepted triples per attempt.
    pub acceptance_rate: f64,
}

impl FractionReport {
    pub fn to_json(&self) -> Value {
        to_json(self)
    }
}

/// Pass-through sink when no CSV is requested.
struct NoCsv;

impl Write for NoCsv {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        Ok(buf.len())
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

fn sorted_desc(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// One uniform draw of `ν` from the box cut out by the Weyl bounds
/// `max_{i+j=k+n-1}(λ_i + μ_j) ≤ ν_k ≤ min_{i+j=k}(λ_i + μ_j)`, with the last
/// part fixed by `|ν| = |λ| + |μ|`. `None` when the draw leaves the box or is
/// not weakly decreasing.
fn complete_nu<R: Rng>(lambda: &[i64], mu: &[i64], rng: &mut R) -> Option<Vec<i64>> {
    let n = lambda.len();
    let pairs = |k: usize| (0..n).filter_map(move |i| (k + n - 1).checked_sub(i).filter(|&j| j < n).map(|j| (i, j)));
    let lo = |k: usize| pairs(k).map(|(i, j)| lambda[i] + mu[j]).max().unwrap();
    let hi = |k: usize| (0..=k).map(|i| lambda[i] + mu[k - i]).min().unwrap();
    let mut nu = Vec::with_capacity(n);
    let mut left = lambda.iter().sum::<i64>() + mu.iter().sum::<i64>();
    for k in 0..n - 1 {
        let (a, b) = (lo(k), hi(k));
        if a > b {
            return None;
        }
        let v = rng.random_range(a..=b);
        nu.push(v);
        left -= v;
    }
    nu.push(left);
    let ok = (lo(n - 1)..=hi(n - 1)).contains(&left) && nu.windows(2).all(|w| w[0] >= w[1]);
    ok.then_some(nu)
}

/// Fraction of positive triples with `‖(λ, μ, ν)‖₁ ≤ γ` that lie in the
/// shifted cone `(Δ, Δ, Δ′) + LRC`.
///
/// `(λ, μ)` come from a uniform integer point of `{x ≥ 0, Σx ≤ ⌊γ/2⌋}` in
/// `2n` coordinates, each half sorted; `ν` is uniform between the Weyl
/// bounds. Only triples passing the positivity test count.
pub fn shifted_fraction_experiment(
    n: usize,
    gamma: u64,
    trials: usize,
    seed: u64,
    max_attempts: u64,
    csv: Option<&mut dyn Write>,
) -> Result<FractionReport> {
    if n < 3 {
        return Err(Error::RankTooSmall { n, min: 3 });
    }
    let shift = make_shift(n, &ratio::int(1), true)?;
    let norm = shift.l1_norm();
    if ratio::int(gamma as i64) <= norm {
        return Err(Error::OutOfRange { name: "gamma", value: gamma as f64, range: "> shift norm" });
    }
    let mut sink = NoCsv;
    let out: &mut dyn Write = match csv {
        Some(w) => {
            writeln!(w, "trial,lambda,mu,nu,applicable")?;
            w
        }
        None => &mut sink,
    };
    let budget = (gamma / 2) as usize;
    let mut rng = rng::stream(seed, 0);
    let (mut accepted, mut hits, mut attempts) = (0usize, 0usize, 0u64);
    while accepted < trials {
        if attempts >= max_attempts {
            return Err(Error::SamplingStarved { accepted, attempts });
        }
        attempts += 1;
        // stars and bars: 2n + 1 gaps between sorted cut points of 0..budget + 2n
        let mut cuts = index::sample(&mut rng, budget + 2 * n, 2 * n).into_vec();
        cuts.sort_unstable();
        let mut x = Vec::with_capacity(2 * n);
        let mut prev = 0usize;
        for (k, &c) in cuts.iter().enumerate() {
            x.push((c - prev - usize::from(k > 0)) as i64);
            prev = c;
        }
        let lambda = sorted_desc(x[..n].to_vec());
        let mu = sorted_desc(x[n..].to_vec());
        let Some(nu) = complete_nu(&lambda, &mu, &mut rng) else {
            continue;
        };
        let t = PartitionTriple::new(Partition::new(lambda)?, Partition::new(mu)?, Partition::new(nu)?)?;
        if !geometry::positivity(&t) {
            continue;
        }
        let inside = applicability(&t);
        writeln!(out, "{accepted},{},{},{},{}", t.lambda, t.mu, t.nu, inside)?;
        accepted += 1;
        hits += usize::from(inside);
    }
    let fraction = hits as f64 / accepted.max(1) as f64;
    Ok(FractionReport {
        n,
        gamma,
        shift_norm: ratio::display(&norm),
        accepted,
        applicable: hits,
        fraction,
        std_error: (fraction * (1.0 - fraction) / accepted.max(1) as f64).sqrt(),
        attempts,
        acceptance_rate: accepted as f64 / attempts.max(1) as f64,
    })
}
