//! Energy functionals of `φ: (M, ḡ) → N` with `ḡ = λ⁻²g`, so that
//! `dv_ḡ = λ⁻² dv_g` in dimension two.

use super::quadrature::GaussLegendre;
use super::ConformalFactor;
use crate::error::{Error, Result};
use crate::geom::{Rect, SurfaceChart};

fn integrate(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    region: &Rect,
    rule: &GaussLegendre,
    integrand: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    if !region.is_valid() || !chart.domain().contains_rect(region) {
        return Err(Error::InvalidInput(format!(
            "region {region:?} is not inside the chart domain {:?}",
            chart.domain()
        )));
    }
    rule.integrate_rect(region, |u, v| {
        let at = chart.geometry_at((u, v))?;
        let l2 = lambda.lambda2((u, v))?;
        // dv_ḡ = λ⁻² √det g du dv
        Ok(integrand(l2, at.mean_curvature) * at.g.det().sqrt() / l2)
    })
}

/// `E(φ) = 2∫ λ² dv_ḡ`, i.e. twice the induced area.
pub fn energy(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    region: &Rect,
    rule: &GaussLegendre,
) -> Result<f64> {
    integrate(chart, lambda, region, rule, |l2, _| 2.0 * l2)
}

/// `E₂(φ) = ∫ |2λ²Hξ|² dv_ḡ`.
pub fn bienergy(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    region: &Rect,
    rule: &GaussLegendre,
) -> Result<f64> {
    integrate(chart, lambda, region, rule, |l2, h| {
        let t = 2.0 * l2 * h;
        t * t
    })
}

/// `∫ λ^p dv_ḡ`.
pub fn lambda_power_integral(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    power: f64,
    region: &Rect,
    rule: &GaussLegendre,
) -> Result<f64> {
    integrate(chart, lambda, region, rule, |l2, _| l2.powf(0.5 * power))
}
