use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use super::HPolytope;
use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

/// Log-barrier Hessian `H(x₀) = Σ aᵢaᵢᵀ / (offsetᵢ − aᵢᵀx₀)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DikinMetric {
    pub center: Vec<f64>,
    pub hessian: DMatrix<f64>,
}

impl DikinMetric {
    /// `(y − x₀)ᵀ H (y − x₀)`.
    pub fn local_norm_sq(&self, y: &[f64]) -> f64 {
        let diff = DVector::from_iterator(y.len(), y.iter().zip(&self.center).map(|(a, b)| a - b));
        diff.dot(&(&self.hessian * &diff))
    }

    pub fn contains(&self, y: &[f64], radius: f64) -> bool {
        self.local_norm_sq(y) <= radius * radius
    }
}

pub fn dikin_metric(body: &HPolytope, x0: &[f64]) -> Result<DikinMetric> {
    let hessian = hessian_f64(body, x0)?;
    Ok(DikinMetric { center: x0.to_vec(), hessian })
}

pub(crate) fn hessian_f64(body: &HPolytope, x: &[f64]) -> Result<DMatrix<f64>> {
    if x.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: x.len() });
    }
    let d = body.dim();
    let mut h = DMatrix::zeros(d, d);
    for (r, residual) in body.residuals_f64(x).into_iter().enumerate() {
        if residual <= 0.0 {
            return Err(Error::OnBoundary { row: r, residual });
        }
        let w = 1.0 / (residual * residual);
        let row = &body.rows()[r];
        for &(c1, v1) in row {
            for &(c2, v2) in row {
                h[(c1, c2)] += w * (v1 * v2) as f64;
            }
        }
    }
    Ok(h)
}

/// The same Hessian in exact arithmetic.
pub fn exact_hessian(body: &HPolytope, x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    if x.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: x.len() });
    }
    let d = body.dim();
    let mut h = vec![vec![Rational::zero(); d]; d];
    for (r, residual) in body.residuals(x).into_iter().enumerate() {
        if !residual.is_positive() {
            return Err(Error::OnBoundary { row: r, residual: ratio::to_f64(&residual) });
        }
        let w = (&residual * &residual).recip();
        let row = &body.rows()[r];
        for &(c1, v1) in row {
            for &(c2, v2) in row {
                h[c1][c2] += &w * ratio::int(v1 * v2);
            }
        }
    }
    Ok(h)
}

/// `y = T(x − x₀)` with `T = Lᵀ` for `H = L·Lᵀ`; maps the unit Dikin
/// ellipsoid at `x₀` onto the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundingMap {
    pub center: Vec<f64>,
    /// Upper triangular `T = Lᵀ`.
    pub transform: DMatrix<f64>,
    lower: DMatrix<f64>,
}

impl RoundingMap {
    /// `T = I` about the origin.
    pub fn identity(dim: usize) -> Self {
        RoundingMap { center: vec![0.0; dim], transform: DMatrix::identity(dim, dim), lower: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let diff = DVector::from_iterator(x.len(), x.iter().zip(&self.center).map(|(a, b)| a - b));
        (&self.transform * diff).iter().copied().collect()
    }

    /// `x = x₀ + T⁻¹y`.
    pub fn invert(&self, y: &[f64]) -> Vec<f64> {
        let z = self.solve_transform(y);
        z.iter().zip(&self.center).map(|(a, b)| a + b).collect()
    }

    /// `T⁻¹y` by back substitution.
    pub fn solve_transform(&self, y: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_column_slice(y);
        self.transform.solve_upper_triangular(&rhs).expect("nonsingular factor").iter().copied().collect()
    }

    pub fn log_det(&self) -> f64 {
        self.lower.diagonal().iter().map(|v| v.ln()).sum()
    }

    pub fn det(&self) -> f64 {
        self.lower.diagonal().iter().product()
    }

    /// `Tᵀu`, the objective that reads `⟨u, T(x − x₀)⟩`
    /// as `⟨Tᵀu, x⟩` minus a constant.
    pub fn pullback(&self, u: &[f64]) -> Vec<f64> {
        let u = DVector::from_column_slice(u);
        (self.transform.transpose() * u).iter().copied().collect()
    }
}

pub fn rounding_transform(metric: &DikinMetric) -> Result<RoundingMap> {
    let chol = metric.hessian.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let lower = chol.l();
    Ok(RoundingMap { center: metric.center.clone(), transform: lower.transpose(), lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};

    #[test]
    fn hessian_examples() {
        let square = HPolytope::cube(2, -1, 1);
        let m = dikin_metric(&square, &[0.0, 0.0]).unwrap();
        assert_eq!(m.hessian, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]));
        let unit = HPolytope::cube(1, 0, 1);
        let m = dikin_metric(&unit, &[0.5]).unwrap();
        assert_eq!(m.hessian[(0, 0)], 8.0);
        assert_eq!(exact_hessian(&unit, &[frac(1, 2)]).unwrap(), vec![vec![int(8)]]);
        assert!(matches!(dikin_metric(&unit, &[1.0]), Err(Error::OnBoundary { row: 0, .. })));
        assert!(matches!(exact_hessian(&unit, &[int(0)]), Err(Error::OnBoundary { row: 1, .. })));
    }

    #[test]
    fn cholesky_examples() {
        let m = DikinMetric { center: vec![0.0; 2], hessian: DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]) };
        let t = rounding_transform(&m).unwrap();
        assert!((t.transform[(0, 0)] - 2f64.sqrt()).abs() < 1e-15);
        assert!((t.transform[(1, 1)] - 2f64.sqrt()).abs() < 1e-15);
        let m = DikinMetric { center: vec![0.0; 2], hessian: DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 9.0]) };
        let t = rounding_transform(&m).unwrap();
        assert_eq!(t.transform, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]));
        let bad = DikinMetric { center: vec![0.0; 2], hessian: DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]) };
        assert_eq!(rounding_transform(&bad), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn factor_reconstructs_inverse() {
        let simplex = HPolytope::standard_simplex(3);
        let m = dikin_metric(&simplex, &[0.2, 0.1, 0.3]).unwrap();
        let t = rounding_transform(&m).unwrap();
        let tinv = t.transform.clone().try_inverse().unwrap();
        let via_factor = &tinv * tinv.transpose();
        let direct = m.hessian.clone().lu().try_inverse().unwrap();
        let rel = (&via_factor - &direct).norm() / direct.norm();
        assert!(rel < 1e-9, "{rel}");
    }

    #[test]
    fn unit_ellipsoid_maps_to_unit_ball() {
        let simplex = HPolytope::standard_simplex(3);
        let m = dikin_metric(&simplex, &[0.2, 0.1, 0.3]).unwrap();
        let t = rounding_transform(&m).unwrap();
        let y = [0.3, -0.5, 0.1];
        let x = t.invert(&y);
        let norm_sq: f64 = y.iter().map(|v| v * v).sum();
        assert!((m.local_norm_sq(&x) - norm_sq).abs() < 1e-12);
        let back = t.apply(&x);
        for (a, b) in back.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((t.det().ln() - t.log_det()).abs() < 1e-12);
    }
}
