use num_traits::Zero;
use std::collections::BTreeSet;

use super::lp::{self, LpSolution, Sense};
use super::HPolytope;
use crate::error::{Error, Result};
use crate::partitions::PartitionTriple;
use crate::ratio::{self, Rational};

/// Exact optimum of a linear objective over the body.
pub fn lp_solve(body: &HPolytope, objective: &[Rational], sense: Sense) -> Result<LpSolution<Rational>> {
    if objective.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: objective.len() });
    }
    lp::solve(&body.dense_rational(), &body.offsets(), objective, sense)
}

/// Binary64 optimum, for objectives that are not rational by nature.
pub fn lp_solve_f64(body: &HPolytope, objective: &[f64], sense: Sense) -> Result<LpSolution<f64>> {
    if objective.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: objective.len() });
    }
    lp::solve(&body.dense_f64(), &body.offsets_f64(), objective, sense)
}

pub fn feasible(body: &HPolytope) -> bool {
    lp::is_feasible(&body.dense_rational(), &body.offsets(), body.dim())
}

/// `c_{λμ}^ν > 0`, decided as real feasibility of the hive polytope `P`
/// (valid by saturation).
pub fn positivity(t: &PartitionTriple) -> bool {
    feasible(&HPolytope::for_triple(t, super::Body::Hive))
}

/// Interior point from facet optima.
///
/// For every distinct constraint hyperplane `⟨a_f, x⟩ = offset_f` touched by
/// the body, maximize and minimize `⟨a_f, x⟩`. If the minimum also lies on
/// the hyperplane the body is flat; otherwise the minimizer is `x_f`. The
/// result is the average of all `x_f`, which is strictly interior.
pub fn facet_center(body: &HPolytope) -> Result<Vec<Rational>> {
    let dense = body.dense_rational();
    let offsets = body.offsets();
    let mut seen = BTreeSet::new();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for (r, row) in dense.iter().enumerate() {
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        if !seen.insert((body.rows()[r].clone(), offsets[r].clone())) {
            continue;
        }
        let top = lp::solve(&dense, &offsets, row, Sense::Maximize)?;
        if top.value < offsets[r] {
            // not a supporting hyperplane
            continue;
        }
        let bottom = lp::solve(&dense, &offsets, row, Sense::Minimize)?;
        if bottom.value == offsets[r] {
            return Err(Error::FlatBody { row: r });
        }
        points.push(bottom.point);
    }
    if points.is_empty() {
        return Err(Error::DegenerateBody);
    }
    let count = ratio::int(points.len() as i64);
    let mut center = vec![Rational::zero(); body.dim()];
    for p in &points {
        for (c, v) in center.iter_mut().zip(p) {
            *c += v;
        }
    }
    Ok(center.into_iter().map(|c| c / &count).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevBall {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Pivot tolerance of the binary64 LP that produced this ball.
    pub tolerance: f64,
}

/// Largest inscribed Euclidean ball: maximize `r` subject to
/// `a_iᵀx + r‖a_i‖₂ ≤ offset_i`, solved in binary64.
pub fn chebyshev_center(body: &HPolytope) -> Result<ChebyshevBall> {
    let d = body.dim();
    let offsets = body.offsets_f64();
    let mut rows = Vec::with_capacity(body.num_rows() + 1);
    let mut rhs = Vec::with_capacity(body.num_rows() + 1);
    for (r, row) in body.rows().iter().enumerate() {
        let norm_sq: i64 = row.iter().map(|&(_, v)| v * v).sum();
        if norm_sq == 0 {
            if offsets[r] < 0.0 {
                return Err(Error::Infeasible);
            }
            continue;
        }
        let mut dense = vec![0.0; d + 1];
        for &(c, v) in row {
            dense[c] += v as f64;
        }
        dense[d] = (norm_sq as f64).sqrt();
        rows.push(dense);
        rhs.push(offsets[r]);
    }
    let mut nonneg = vec![0.0; d + 1];
    nonneg[d] = -1.0;
    rows.push(nonneg);
    rhs.push(0.0);
    let mut objective = vec![0.0; d + 1];
    objective[d] = 1.0;
    let sol = lp::solve(&rows, &rhs, &objective, Sense::Maximize)?;
    Ok(ChebyshevBall { center: sol.point[..d].to_vec(), radius: sol.point[d], tolerance: lp::F64_TOLERANCE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Body;
    use crate::ratio::{frac, int};

    fn example() -> PartitionTriple {
        PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1]).unwrap()
    }

    #[test]
    fn hive_interval_by_lp() {
        let p = HPolytope::for_triple(&example(), Body::Hive);
        assert_eq!(lp_solve(&p, &[int(1)], Sense::Maximize).unwrap().value, int(5));
        assert_eq!(lp_solve(&p, &[int(1)], Sense::Minimize).unwrap().value, int(4));
        let q = HPolytope::for_triple(&example(), Body::Outer);
        assert_eq!(lp_solve(&q, &[int(1)], Sense::Maximize).unwrap().value, int(7));
        assert_eq!(lp_solve(&q, &[int(1)], Sense::Minimize).unwrap().value, int(2));
        // P has width 1 < 4, so O is empty
        let o = HPolytope::for_triple(&example(), Body::Inner);
        assert_eq!(lp_solve(&o, &[int(1)], Sense::Maximize), Err(Error::Infeasible));
    }

    #[test]
    fn box_lp() {
        let c = HPolytope::cube(2, -1, 1);
        assert_eq!(lp_solve(&c, &[int(1), int(0)], Sense::Maximize).unwrap().value, int(1));
        assert!(lp_solve(&c, &[int(1)], Sense::Maximize).is_err());
    }

    #[test]
    fn feasibility_and_positivity() {
        assert!(feasible(&HPolytope::for_triple(&example(), Body::Hive)));
        let bad = PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[6, 0, 0]).unwrap();
        assert!(!feasible(&HPolytope::for_triple(&bad, Body::Hive)));
        assert!(feasible(&HPolytope::for_triple(&example(), Body::Outer)));
        assert!(positivity(&example()));
        assert!(!positivity(&bad));
        assert!(positivity(&PartitionTriple::from_parts(&[1, 0], &[1, 0], &[2, 0]).unwrap()));
        // V_(2,0) ⊗ V_0 contains only V_(2,0)
        assert!(!positivity(&PartitionTriple::from_parts(&[2, 0], &[0, 0], &[1, 1]).unwrap()));
    }

    #[test]
    fn facet_center_examples() {
        let q = HPolytope::for_triple(&example(), Body::Outer);
        let x0 = facet_center(&q).unwrap();
        assert_eq!(x0, vec![frac(9, 2)]);
        let cube = HPolytope::cube(3, -1, 1);
        let x0 = facet_center(&cube).unwrap();
        assert!(cube.residuals(&x0).iter().all(|r| r > &int(0)));
        let flat = HPolytope::new(1, vec![vec![(0, 1)], vec![(0, -1)]], vec![int(0), int(0)], int(0)).unwrap();
        assert!(matches!(facet_center(&flat), Err(Error::FlatBody { .. })));
        let simplex = HPolytope::standard_simplex(4);
        let x0 = facet_center(&simplex).unwrap();
        assert!(simplex.residuals(&x0).iter().all(|r| r > &int(0)));
    }

    #[test]
    fn chebyshev_examples() {
        let ball = chebyshev_center(&HPolytope::cube(2, -1, 1)).unwrap();
        assert!((ball.radius - 1.0).abs() < 1e-9);
        let p = HPolytope::for_triple(&example(), Body::Hive);
        let ball = chebyshev_center(&p).unwrap();
        assert!((ball.radius - 0.5).abs() < 1e-9);
        assert!((ball.center[0] - 4.5).abs() < 1e-9);
        let ball = chebyshev_center(&HPolytope::standard_simplex(2)).unwrap();
        assert!((ball.radius - 1.0 / (2.0 + 2f64.sqrt())).abs() < 1e-9);
        let bad = PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[6, 0, 0]).unwrap();
        assert_eq!(chebyshev_center(&HPolytope::for_triple(&bad, Body::Hive)), Err(Error::Infeasible));
    }
}
