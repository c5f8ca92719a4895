//! Ambient Ricci inputs `Ric(ξ,ξ)` and `(Ric(ξ))^⊤` for the supported
//! 3-manifolds.

use crate::error::{Error, Result};
use crate::geom::TangentVector;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmbientModel {
    Euclidean,
    /// Constant sectional curvature `C`.
    SpaceForm {
        curvature: f64,
    },
    /// `S² × ℝ` with the unit round sphere.
    ProductS2R,
}

/// What the surface is, as far as the ambient model needs to know.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceContext {
    /// A generic parametric chart.
    Chart,
    /// Vertical cylinder over a circle of geodesic curvature `k` in `S²`.
    VerticalCylinder { k: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciData {
    /// `Ric(ξ, ξ)`.
    pub ric_normal: f64,
    /// `(Ric(ξ))^⊤` in chart coordinates.
    pub ric_tangent: TangentVector,
}

pub fn ricci_data(model: &AmbientModel, context: &SurfaceContext) -> Result<RicciData> {
    match (model, context) {
        (AmbientModel::Euclidean, _) => Ok(RicciData {
            ric_normal: 0.0,
            ric_tangent: TangentVector::ZERO,
        }),
        // Einstein: Ric = 2C·h
        (AmbientModel::SpaceForm { curvature }, _) => Ok(RicciData {
            ric_normal: 2.0 * curvature,
            ric_tangent: TangentVector::ZERO,
        }),
        (AmbientModel::ProductS2R, SurfaceContext::VerticalCylinder { .. }) => Ok(RicciData {
            ric_normal: 1.0,
            ric_tangent: TangentVector::ZERO,
        }),
        (AmbientModel::ProductS2R, SurfaceContext::Chart) => Err(Error::Unsupported(
            "S²×ℝ is only supported for vertical cylinders; generic charts are Euclidean"
                .to_string(),
        )),
    }
}

impl fmt::Display for AmbientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientModel::Euclidean => f.write_str("euclidean"),
            AmbientModel::SpaceForm { curvature } => write!(f, "spaceform:C={curvature}"),
            AmbientModel::ProductS2R => f.write_str("s2xr"),
        }
    }
}

impl FromStr for AmbientModel {
    type Err = Error;

    /// `euclidean`, `spaceform:C=<real>` or `s2xr`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "euclidean" => Ok(AmbientModel::Euclidean),
            "s2xr" => Ok(AmbientModel::ProductS2R),
            other => other
                .strip_prefix("spaceform:C=")
                .and_then(|c| c.trim().parse::<f64>().ok())
                .filter(|c| c.is_finite())
                .map(|curvature| AmbientModel::SpaceForm { curvature })
                .ok_or_else(|| Error::InvalidInput(format!("unknown ambient `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_equals_flat_space_form() {
        let a = ricci_data(&AmbientModel::Euclidean, &SurfaceContext::Chart).unwrap();
        let b = ricci_data(
            &AmbientModel::SpaceForm { curvature: 0.0 },
            &SurfaceContext::Chart,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ric_normal, 0.0);
    }

    #[test]
    fn hyperbolic_space() {
        let r = ricci_data(
            &AmbientModel::SpaceForm { curvature: -1.0 },
            &SurfaceContext::Chart,
        )
        .unwrap();
        assert_eq!(r.ric_normal, -2.0);
        assert_eq!(r.ric_tangent, TangentVector::ZERO);
    }

    #[test]
    fn product_space_vertical_cylinder_only() {
        for k in [1.1, 2.0f64.sqrt(), 5.0] {
            let r = ricci_data(
                &AmbientModel::ProductS2R,
                &SurfaceContext::VerticalCylinder { k },
            )
            .unwrap();
            assert_eq!(r.ric_normal, 1.0);
            assert_eq!(r.ric_tangent, TangentVector::ZERO);
        }
        assert!(matches!(
            ricci_data(&AmbientModel::ProductS2R, &SurfaceContext::Chart),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn parsing() {
        assert_eq!(
            "euclidean".parse::<AmbientModel>().unwrap(),
            AmbientModel::Euclidean
        );
        assert_eq!(
            "spaceform:C=-1".parse::<AmbientModel>().unwrap(),
            AmbientModel::SpaceForm { curvature: -1.0 }
        );
        assert_eq!(
            "s2xr".parse::<AmbientModel>().unwrap(),
            AmbientModel::ProductS2R
        );
        assert!("hyperbolic".parse::<AmbientModel>().is_err());
        assert!("spaceform:C=x".parse::<AmbientModel>().is_err());
    }
}
