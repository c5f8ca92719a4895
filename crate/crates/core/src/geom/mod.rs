//! Induced geometry of parametric surfaces: fundamental forms, normal,
//! shape operator, mean curvature and the intrinsic gradient and
//! Laplace–Beltrami operators of the induced metric `g = φ*h`.
//!
//! Conventions: `ξ = r_u × r_v / |r_u × r_v|`, `h_ij = ⟨r_ij, ξ⟩`,
//! `A = g⁻¹h`, `H = ½ tr A`.

mod chart;
mod fd;
mod metric;
mod preset;

pub use chart::{
    parse_grid_dims, DiffMode, GeometryAtPoint, Grid, LocalGeometry, Rect, ScalarField,
    SingularLocus, SurfaceChart, DEFAULT_FD_STEP, IMMERSION_EPS, SINGULAR_MARGIN,
};
pub use fd::fd_jet;
pub use metric::{Christoffel, Metric2, MetricJet, TangentVector};
pub use preset::Preset;

use crate::error::Result;
use crate::residual::ConformalFactor;

/// `grad f = g^{kl} ∂_k f ∂_l` in the induced metric.
pub fn grad(field: &ScalarField, chart: &SurfaceChart, p: (f64, f64)) -> Result<TangentVector> {
    let metric = chart.metric_jet(p)?;
    let f = field.jet(p, 1, chart.mode())?;
    Ok(metric.gradient(&f))
}

/// Laplace–Beltrami operator of the induced metric.
pub fn laplace_beltrami(field: &ScalarField, chart: &SurfaceChart, p: (f64, f64)) -> Result<f64> {
    let metric = chart.metric_jet(p)?;
    let f = field.jet(p, 2, chart.mode())?;
    Ok(metric.laplacian(&f))
}

/// Checks the two-dimensional conformal transformation law for
/// `ḡ = λ⁻²g`: returns `(Δ_ḡ f − λ²Δ_g f, |grad_ḡ f − λ² grad_g f|_g)`.
/// Both sides are computed independently, `Δ_ḡ` from the Christoffel
/// symbols of `ḡ` itself.
pub fn conformal_check(
    field: &ScalarField,
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    p: (f64, f64),
) -> Result<(f64, f64)> {
    let mode = chart.mode();
    let g = chart.metric_jet(p)?;
    let f = field.jet(p, 2, mode)?;
    let l2 = lambda.lambda2_jet(p, 2, mode)?;
    let gbar = g.conformal(&l2.recip());
    let lam2 = l2.value();

    let lap = gbar.laplacian(&f) - lam2 * g.laplacian(&f);
    let diff = gbar.gradient(&f) - g.gradient(&f).scale(lam2);
    Ok((lap, diff.norm(&g.at())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::PI;

    fn cyl() -> SurfaceChart {
        Preset::Cylinder { r: 1.0 }.chart()
    }

    fn sphere() -> SurfaceChart {
        Preset::Sphere { r: 1.0 }.chart()
    }

    #[test]
    fn cylinder_geometry() {
        for p in [(0.3, 0.2), (2.0, -1.0), (5.5, 3.0)] {
            let g = cyl().geometry_at(p).unwrap();
            assert!((g.g.g11 - 1.0).abs() < 1e-14);
            assert!(g.g.g12.abs() < 1e-14);
            assert!((g.g.g22 - 1.0).abs() < 1e-14);
            // outward normal: H = -1/(2R)
            assert!((g.mean_curvature + 0.5).abs() < 1e-14);
            assert!((g.norm_a2 - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sphere_geometry_matches_coordinate_forms() {
        let g = sphere().geometry_at((0.5, 1.0)).unwrap();
        let c2 = 0.5f64.cos().powi(2);
        assert!((g.g.g11 - 1.0).abs() < 1e-14);
        assert!((g.g.g22 - c2).abs() < 1e-14);
        // inward normal: h = diag(1, cos²u), A = id, H = 1
        assert!((g.h.g11 - 1.0).abs() < 1e-14);
        assert!((g.h.g22 - c2).abs() < 1e-14);
        assert!((g.shape[0][0] - 1.0).abs() < 1e-14 && (g.shape[1][1] - 1.0).abs() < 1e-14);
        assert!((g.mean_curvature - 1.0).abs() < 1e-14);
        assert!((g.norm_a2 - 2.0).abs() < 1e-13);
    }

    #[test]
    fn rotational_chart_forms() {
        // torus profile f = 2 + cos u, g = sin u: k = 1, h22 = f g'
        let chart = Preset::Torus {
            major: 2.0,
            minor: 1.0,
        }
        .chart();
        let u = 0.7f64;
        let g = chart.geometry_at((u, 0.4)).unwrap();
        let f = 2.0 + u.cos();
        assert!((g.g.g11 - 1.0).abs() < 1e-14);
        assert!((g.g.g22 - f * f).abs() < 1e-13);
        assert!((g.h.g11 - 1.0).abs() < 1e-14);
        assert!((g.h.g22 - f * u.cos()).abs() < 1e-13);
    }

    #[test]
    fn gradients() {
        let zero = grad(&ScalarField::constant(3.0), &cyl(), (1.0, 1.0)).unwrap();
        assert_eq!(zero, TangentVector::ZERO);
        let gv = grad(&ScalarField::parse("v").unwrap(), &cyl(), (1.0, 1.0)).unwrap();
        assert!(gv.a1.abs() < 1e-15 && (gv.a2 - 1.0).abs() < 1e-15);
        let gu = grad(&ScalarField::parse("u").unwrap(), &sphere(), (0.5, 0.3)).unwrap();
        assert!((gu.a1 - 1.0).abs() < 1e-15 && gu.a2.abs() < 1e-15);
    }

    #[test]
    fn laplacians() {
        for v in [-1.0, 0.0, 0.8] {
            let l =
                laplace_beltrami(&ScalarField::parse("exp(v)").unwrap(), &cyl(), (1.0, v)).unwrap();
            assert!((l - v.exp()).abs() < 1e-13);
        }
        assert_eq!(
            laplace_beltrami(&ScalarField::constant(2.0), &sphere(), (0.2, 0.1)).unwrap(),
            0.0
        );
        let plane = Preset::Plane.chart();
        let l =
            laplace_beltrami(&ScalarField::parse("u^2+v^2").unwrap(), &plane, (0.3, -0.4)).unwrap();
        assert!((l - 4.0).abs() < 1e-14);
    }

    #[test]
    fn laplacian_of_height_on_sphere() {
        // z = sin u restricted to the unit sphere is a first eigenfunction: Δz = -2z
        let z = ScalarField::parse("sin(u)").unwrap();
        let u = 0.6;
        let l = laplace_beltrami(&z, &sphere(), (u, 2.0)).unwrap();
        assert!((l + 2.0 * u.sin()).abs() < 1e-13);
    }

    #[test]
    fn conformal_law() {
        let f = ScalarField::parse("u*v").unwrap();
        let one = ConformalFactor::parse("1").unwrap();
        assert_eq!(
            conformal_check(&f, &cyl(), &one, (1.0, 0.5)).unwrap(),
            (0.0, 0.0)
        );
        let lam = ConformalFactor::parse("exp(v)").unwrap();
        for p in [(0.1, 0.2), (3.0, -2.0), (-4.0, 1.5)] {
            let (a, b) = conformal_check(&f, &cyl(), &lam, p).unwrap();
            assert!(a.abs() <= 1e-8 && b <= 1e-8, "{p:?}: {a} {b}");
        }
    }

    #[test]
    fn constant_rescaling_on_sphere() {
        let f = ScalarField::parse("sin(u)").unwrap();
        let p = (0.3, 0.7);
        let lam = ConformalFactor::parse("4").unwrap();
        let (a, b) = conformal_check(&f, &sphere(), &lam, p).unwrap();
        assert!(a.abs() < 1e-14 && b < 1e-14);
    }

    #[test]
    fn catenoid_is_minimal() {
        let c = Preset::Catenoid.chart();
        for p in [(0.0, 0.0), (0.9, 2.0), (-1.3, -4.0)] {
            assert!(c.geometry_at(p).unwrap().mean_curvature.abs() <= 1e-12);
        }
    }

    #[test]
    fn degenerate_and_outside_points() {
        let s = sphere();
        assert!(matches!(
            s.geometry_at((0.5 * PI, 0.0)),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            s.geometry_at((5.0, 0.0)),
            Err(Error::OutsideDomain { .. })
        ));
        let flat = SurfaceChart::from_strs("u", "u", "0", Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap();
        assert!(matches!(
            flat.geometry_at((0.0, 0.0)),
            Err(Error::DegenerateImmersion { .. })
        ));
    }

    #[test]
    fn fd_mode_tracks_analytic() {
        let mode = DiffMode::FiniteDifference { step: 1e-3 };
        for preset in [
            Preset::Sphere { r: 1.0 },
            Preset::Torus {
                major: 2.0,
                minor: 1.0,
            },
            Preset::Cone { alpha: 0.5 },
        ] {
            let a = preset.chart();
            let b = preset.chart().with_mode(mode);
            let p = (1.1, 0.4);
            let la = a.local_geometry(p).unwrap();
            let lb = b.local_geometry(p).unwrap();
            assert!((la.at.mean_curvature - lb.at.mean_curvature).abs() <= 1e-6);
            let da = la.metric.laplacian(&la.mean_curvature);
            let db = lb.metric.laplacian(&lb.mean_curvature);
            assert!((da - db).abs() <= 1e-3, "{preset}: {da} vs {db}");
        }
    }

    #[test]
    fn mode_and_region_parsing() {
        assert_eq!("analytic".parse::<DiffMode>().unwrap(), DiffMode::Analytic);
        assert_eq!(
            "fd:1e-3".parse::<DiffMode>().unwrap(),
            DiffMode::FiniteDifference { step: 1e-3 }
        );
        assert!("fd:-1".parse::<DiffMode>().is_err());
        let r: Rect = "0,3.5,0,1".parse().unwrap();
        assert_eq!(r, Rect::new(0.0, 3.5, 0.0, 1.0));
        let r: Rect = "0,2*pi,-1,1".parse().unwrap();
        assert!((r.u1 - 2.0 * PI).abs() < 1e-15);
        assert!("1,0,0,1".parse::<Rect>().is_err());
        assert_eq!(parse_grid_dims("50x40").unwrap(), (50, 40));
        assert!(parse_grid_dims("1x5").is_err());
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(
            "cylinder:R=1".parse::<Preset>().unwrap(),
            Preset::Cylinder { r: 1.0 }
        );
        assert_eq!(
            "torus:R=2,r=1".parse::<Preset>().unwrap(),
            Preset::Torus {
                major: 2.0,
                minor: 1.0
            }
        );
        assert_eq!(
            "cone:alpha=pi/6".parse::<Preset>().unwrap(),
            Preset::Cone { alpha: PI / 6.0 }
        );
        assert!("cone:alpha=2".parse::<Preset>().is_err());
        assert!("sphere:R=1".parse::<Preset>().is_err());
        assert!("blob".parse::<Preset>().is_err());
        for s in ["plane", "sphere:r=2", "catenoid", "torus:R=3,r=0.5"] {
            let p: Preset = s.parse().unwrap();
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
    }
}
