//! Far-field velocity of the upper layer selected by the Batchelor-Wood condition.

use spectral_strip::ProblemSpec;

use crate::error::Result;

/// `A` is the far-field velocity the layer relaxes to; `B` is the shear offset,
/// identically zero for wall-driven Couette data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchelorConstants {
    pub far_velocity: f64,
    pub shear_offset: f64,
}

/// `A^2 = (1/2pi) int (alpha + delta f)^2 dx`, by trapezoid quadrature, which is
/// exact for the band-limited wall data.
pub fn batchelor_constant(spec: &ProblemSpec) -> Result<BatchelorConstants> {
    spec.validate()?;
    let m = (8 * (spec.forcing.max_mode() as usize + 1)).max(64);
    let mean_sq = spec.wall_samples(m).iter().map(|w| w * w).sum::<f64>() / m as f64;
    Ok(BatchelorConstants { far_velocity: mean_sq.sqrt(), shear_offset: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_strip::Forcing;

    #[test]
    fn constant_data() {
        let s = ProblemSpec::new(1.3, 0.0, Forcing::cosine());
        assert!((batchelor_constant(&s).unwrap().far_velocity - 1.3).abs() < 1e-15);
        let s = ProblemSpec::new(1.0, 0.2, Forcing::new(vec![(0, 1.0, 0.0)]));
        assert!((batchelor_constant(&s).unwrap().far_velocity - 1.2).abs() < 1e-14);
    }

    #[test]
    fn cosine_data() {
        let s = ProblemSpec::new(1.0, 0.1, Forcing::cosine());
        let a = batchelor_constant(&s).unwrap();
        assert!((a.far_velocity - 1.005f64.sqrt()).abs() < 1e-14);
        assert_eq!(a.shear_offset, 0.0);
    }

    #[test]
    fn nonpositive_wall_rejected() {
        let s = ProblemSpec::new(1.0, 2.0, Forcing::cosine());
        assert!(batchelor_constant(&s).is_err());
    }
}
