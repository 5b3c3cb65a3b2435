//! Constraint-form bodies `{x : A·x − b ≼ slack·1}` and the exact geometry
//! built on them: feasibility, optimization, centers, Dikin metric and the
//! rounding map.

pub mod center;
pub mod dikin;
pub mod lp;

pub use center::{chebyshev_center, facet_center, feasible, lp_solve, positivity, ChebyshevBall};
pub use dikin::{dikin_metric, rounding_transform, DikinMetric, RoundingMap};
pub use lp::Sense;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hive::{build_rhombus_system, RhombusSystem};
use crate::partitions::PartitionTriple;
use crate::ratio::{self, Rational};

/// Rounding map at the facet center: `y = T(x − x₀)` with `TᵀT = H(x₀)`.
pub fn rounding_for(body: &HPolytope) -> Result<RoundingMap> {
    let x0: Vec<f64> = facet_center(body)?.iter().map(ratio::to_f64).collect();
    rounding_transform(&dikin_metric(body, &x0)?)
}

/// Float membership is accepted up to this much violation per row.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// Which of the three bodies around a hive polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Body {
    /// `O`, slack −2.
    Inner,
    /// `P`, slack 0.
    Hive,
    /// `Q`, slack +2.
    Outer,
}

impl Body {
    pub fn slack(self) -> i64 {
        match self {
            Body::Inner => -2,
            Body::Hive => 0,
            Body::Outer => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<Vec<(usize, i64)>>,
    b: Vec<Rational>,
    slack: Rational,
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<Vec<(usize, i64)>>, b: Vec<Rational>, slack: Rational) -> Result<Self> {
        if rows.len() != b.len() {
            return Err(Error::InvalidBody(format!("{} rows but {} offsets", rows.len(), b.len())));
        }
        for row in &rows {
            if let Some(&(c, _)) = row.iter().find(|(c, _)| *c >= dim) {
                return Err(Error::InvalidBody(format!("column {c} out of range for dimension {dim}")));
            }
        }
        Ok(HPolytope { dim, rows, b, slack })
    }

    pub fn from_system(system: &RhombusSystem, slack: i64) -> Self {
        let rows = system.rows.iter().map(|r| r.iter().map(|&(c, s)| (c, s as i64)).collect()).collect();
        HPolytope { dim: system.dim(), rows, b: system.b.iter().map(|&v| ratio::int(v)).collect(), slack: ratio::int(slack) }
    }

    pub fn for_triple(t: &PartitionTriple, body: Body) -> Self {
        HPolytope::from_system(&build_rhombus_system(t), body.slack())
    }

    /// The box `[lo, hi]^d`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for k in 0..dim {
            rows.push(vec![(k, 1)]);
            b.push(ratio::int(hi));
            rows.push(vec![(k, -1)]);
            b.push(ratio::int(-lo));
        }
        HPolytope { dim, rows, b, slack: Rational::zero() }
    }

    /// `{x ≥ 0, Σx ≤ 1}`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut rows: Vec<Vec<(usize, i64)>> = (0..dim).map(|k| vec![(k, -1)]).collect();
        let mut b = vec![Rational::zero(); dim];
        rows.push((0..dim).map(|k| (k, 1)).collect());
        b.push(ratio::int(1));
        HPolytope { dim, rows, b, slack: Rational::zero() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, i64)>] {
        &self.rows
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn slack(&self) -> &Rational {
        &self.slack
    }

    pub fn with_slack(&self, slack: Rational) -> Self {
        HPolytope { slack, ..self.clone() }
    }

    /// `c·K` for `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Self {
        HPolytope {
            dim: self.dim,
            rows: self.rows.clone(),
            b: self.b.iter().map(|v| v * c).collect(),
            slack: &self.slack * c,
        }
    }

    /// The same set with repeated or dominated rows removed: for each
    /// coefficient vector only the tightest offset survives, and zero rows
    /// are dropped. Order of first appearance is kept.
    pub fn deduplicated(&self) -> Self {
        let mut index: BTreeMap<Vec<(usize, i64)>, usize> = BTreeMap::new();
        let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
        let mut b: Vec<Rational> = Vec::new();
        for (row, off) in self.rows.iter().zip(&self.b) {
            let mut key: Vec<(usize, i64)> = row.iter().copied().filter(|&(_, v)| v != 0).collect();
            key.sort_unstable();
            if key.is_empty() {
                if (off + &self.slack).is_negative() {
                    // keep an unsatisfiable zero row so emptiness is preserved
                    rows.push(Vec::new());
                    b.push(off.clone());
                }
                continue;
            }
            match index.get(&key) {
                Some(&k) if off < &b[k] => b[k] = off.clone(),
                Some(_) => {}
                None => {
                    index.insert(key.clone(), rows.len());
                    rows.push(key);
                    b.push(off.clone());
                }
            }
        }
        HPolytope { dim: self.dim, rows, b, slack: self.slack.clone() }
    }

    /// Right-hand sides `b + slack`.
    pub fn offsets(&self) -> Vec<Rational> {
        self.b.iter().map(|v| v + &self.slack).collect()
    }

    pub fn offsets_f64(&self) -> Vec<f64> {
        self.offsets().iter().map(ratio::to_f64).collect()
    }

    pub fn dense_rows<T: Clone>(&self, from: impl Fn(i64) -> T, zero: T) -> Vec<Vec<T>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![zero.clone(); self.dim];
                for &(c, v) in row {
                    dense[c] = from(v);
                }
                dense
            })
            .collect()
    }

    pub fn dense_rational(&self) -> Vec<Vec<Rational>> {
        self.dense_rows(ratio::int, Rational::zero())
    }

    pub fn dense_f64(&self) -> Vec<Vec<f64>> {
        self.dense_rows(|v| v as f64, 0.0)
    }

    pub fn row_dot_f64(&self, r: usize, x: &[f64]) -> f64 {
        self.rows[r].iter().map(|&(c, v)| v as f64 * x[c]).sum()
    }

    pub fn row_dot(&self, r: usize, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for &(c, v) in &self.rows[r] {
            acc += &x[c] * ratio::int(v);
        }
        acc
    }

    /// `offset_i − a_iᵀx`, positive inside.
    pub fn residuals(&self, x: &[Rational]) -> Vec<Rational> {
        self.offsets().into_iter().enumerate().map(|(r, o)| o - self.row_dot(r, x)).collect()
    }

    pub fn residuals_f64(&self, x: &[f64]) -> Vec<f64> {
        let offsets = self.offsets_f64();
        (0..self.rows.len()).map(|r| offsets[r] - self.row_dot_f64(r, x)).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.residuals(x).iter().all(|r| !r.is_negative())
    }

    /// Membership with [`MEMBERSHIP_TOLERANCE`].
    pub fn contains_f64(&self, x: &[f64]) -> bool {
        x.len() == self.dim && self.residuals_f64(x).iter().all(|&r| r >= -MEMBERSHIP_TOLERANCE)
    }

    pub fn strictly_contains_f64(&self, x: &[f64]) -> bool {
        x.len() == self.dim && self.residuals_f64(x).iter().all(|&r| r > 0.0)
    }

    /// `{"rows": [[[col, coef], ...], ...], "b": [...], "slack": s, "dim": d}`.
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "rows": self.rows.iter().map(|r| r.iter().map(|&(c, v)| json!([c, v])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "b": self.b.iter().map(ratio::to_json).collect::<Vec<_>>(),
            "slack": ratio::to_json(&self.slack),
        })
    }

    /// Reads the format written by [`HPolytope::to_json`]; `dim` and `slack`
    /// are optional (dimension defaults to one past the largest column).
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidBody(msg.to_string());
        let rows_v = value.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing rows"))?;
        let mut rows = Vec::with_capacity(rows_v.len());
        let mut max_col = None;
        for row in rows_v {
            let entries = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            let mut parsed = Vec::with_capacity(entries.len());
            for e in entries {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("entry is not [col, coef]"))?;
                let c = pair[0].as_u64().ok_or_else(|| bad("column is not an index"))? as usize;
                let v = pair[1].as_i64().ok_or_else(|| bad("coefficient is not an integer"))?;
                max_col = Some(max_col.map_or(c, |m: usize| m.max(c)));
                parsed.push((c, v));
            }
            rows.push(parsed);
        }
        let b = value
            .get("b")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing b"))?
            .iter()
            .map(ratio::from_json)
            .collect::<Result<Vec<_>>>()?;
        let slack = match value.get("slack") {
            Some(v) => ratio::from_json(v)?,
            None => Rational::zero(),
        };
        let dim = match value.get("dim") {
            Some(v) => v.as_u64().ok_or_else(|| bad("dim is not an integer"))? as usize,
            None => max_col.map_or(0, |m| m + 1),
        };
        HPolytope::new(dim, rows, b, slack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bodies_of_a_triple_are_nested() {
        let t = PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1]).unwrap();
        let p = HPolytope::for_triple(&t, Body::Hive);
        let q = HPolytope::for_triple(&t, Body::Outer);
        let o = HPolytope::for_triple(&t, Body::Inner);
        for k in 0..=36 {
            let x = [ratio::frac(k, 4)];
            if o.contains(&x) {
                assert!(p.contains(&x));
            }
            if p.contains(&x) {
                assert!(q.contains(&x));
            }
        }
        assert!(q.contains(&[ratio::int(2)]) && q.contains(&[ratio::int(7)]));
        assert!(!q.contains(&[ratio::frac(19, 10)]) && !q.contains(&[ratio::frac(71, 10)]));
    }

    #[test]
    fn json_round_trip() {
        let body = HPolytope::standard_simplex(3).with_slack(ratio::frac(1, 2));
        let back = HPolytope::from_json(&body.to_json()).unwrap();
        assert_eq!(back, body);
        let text = r#"{"rows": [[[0, 1]], [[0, -1]]], "b": [7, "-2"], "slack": 0}"#;
        let body = HPolytope::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(body.dim(), 1);
        assert_eq!(body.offsets(), vec![ratio::int(7), ratio::int(-2)]);
        assert!(HPolytope::from_json(&serde_json::json!({"rows": [[[0, 1]]]})).is_err());
        assert!(HPolytope::from_json(&serde_json::json!({"rows": [[[2, 1]]], "b": [1], "dim": 1})).is_err());
    }

    #[test]
    fn deduplication_keeps_the_set() {
        let t = PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1]).unwrap();
        let q = HPolytope::for_triple(&t, Body::Outer);
        let dq = q.deduplicated();
        assert_eq!(dq.num_rows(), 2);
        assert_eq!(dq.offsets(), vec![ratio::int(7), ratio::int(-2)]);
        let body = HPolytope::new(
            2,
            vec![vec![(0, 1)], vec![(0, 1), (1, 0)], vec![], vec![(1, 1)], vec![(1, 1)]],
            vec![ratio::int(3), ratio::int(1), ratio::int(0), ratio::int(5), ratio::int(2)],
            ratio::int(0),
        )
        .unwrap();
        let d = body.deduplicated();
        assert_eq!(d.rows(), &[vec![(0, 1)], vec![(1, 1)]]);
        assert_eq!(d.b(), &[ratio::int(1), ratio::int(2)]);
        for k in -4..=12 {
            for l in -4..=12 {
                let x = [ratio::frac(k, 4), ratio::frac(l, 4)];
                assert_eq!(body.contains(&x), d.contains(&x));
            }
        }
        let empty = HPolytope::new(1, vec![vec![]], vec![ratio::int(-1)], ratio::int(0)).unwrap();
        assert!(!empty.deduplicated().contains(&[ratio::int(0)]));
    }

    #[test]
    fn scaling_cube() {
        let c = HPolytope::cube(2, 0, 1).scaled(&ratio::int(2));
        assert!(c.contains(&[ratio::int(2), ratio::int(2)]));
        assert!(!c.contains(&[ratio::frac(21, 10), ratio::int(0)]));
    }
}
