//! One-dimensional weighted Hardy inequalities on `[0,1]`.

use crate::error::{Result, StripError};
use crate::fd;
use crate::grid::Grid1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyVariant {
    /// `int y^k f^2 <= 4/(k+1)^2 int y^(k+2) f'^2`, requires `f(1) = 0`.
    Weighted,
    /// `int f^2/y^2 <= 4 int f'^2`, requires `f(0) = f(1) = 0`.
    LowerWall,
    /// `int f^2/(1-y)^2 <= 4 int f'^2`, requires `f(0) = f(1) = 0`.
    UpperWall,
}

/// Both sides `(lhs, rhs)` of the selected inequality for samples `f` on `grid`.
pub fn hardy_check(f: &[f64], grid: &Grid1D, weight_kappa: f64, variant: HardyVariant) -> Result<(f64, f64)> {
    if f.len() != grid.len() {
        return Err(StripError::GridMismatch("profile length".into()));
    }
    let n = f.len();
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let tol = 1e-12 * scale;
    if f[n - 1].abs() > tol {
        return Err(StripError::BoundaryCondition(format!("f(1) = {}", f[n - 1])));
    }
    let h = grid.spacing();
    let y = grid.nodes();
    let df = fd::d1(f, h);
    match variant {
        HardyVariant::Weighted => {
            if !(weight_kappa > -1.0) {
                return Err(StripError::InvalidArgument(format!("weight exponent {weight_kappa} <= -1")));
            }
            let lhs: Vec<f64> = f.iter().zip(y).map(|(v, s)| s.powf(weight_kappa) * v * v).collect();
            let rhs: Vec<f64> = df.iter().zip(y).map(|(d, s)| s.powf(weight_kappa + 2.0) * d * d).collect();
            Ok((fd::trapz(&lhs, h), 4.0 / (weight_kappa + 1.0).powi(2) * fd::trapz(&rhs, h)))
        }
        HardyVariant::LowerWall | HardyVariant::UpperWall => {
            if f[0].abs() > tol {
                return Err(StripError::BoundaryCondition(format!("f(0) = {}", f[0])));
            }
            let lower = variant == HardyVariant::LowerWall;
            let lhs: Vec<f64> = (0..n)
                .map(|k| {
                    let d = if lower { y[k] } else { 1.0 - y[k] };
                    // Wall node: f/d -> f' there.
                    if d.abs() < 0.5 * h {
                        df[k] * df[k]
                    } else {
                        (f[k] / d).powi(2)
                    }
                })
                .collect();
            let rhs: Vec<f64> = df.iter().map(|d| d * d).collect();
            Ok((fd::trapz(&lhs, h), 4.0 * fd::trapz(&rhs, h)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_profile_weighted() {
        let g = Grid1D::interval(2000).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|y| 1.0 - y).collect();
        let (l, r) = hardy_check(&f, &g, 0.0, HardyVariant::Weighted).unwrap();
        assert!((l - 1.0 / 3.0).abs() < 1e-6);
        assert!((r - 4.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn parabola_lower_wall() {
        let g = Grid1D::interval(2000).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|y| y * (1.0 - y)).collect();
        let (l, r) = hardy_check(&f, &g, 0.0, HardyVariant::LowerWall).unwrap();
        assert!((l - 1.0 / 3.0).abs() < 1e-6);
        assert!((r - 4.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn zero_function() {
        let g = Grid1D::interval(10).unwrap();
        assert_eq!(hardy_check(&vec![0.0; 11], &g, 0.5, HardyVariant::UpperWall).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn boundary_violation_rejected() {
        let g = Grid1D::interval(10).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|y| 1.0 + y).collect();
        assert!(hardy_check(&f, &g, 0.0, HardyVariant::Weighted).is_err());
    }
}
