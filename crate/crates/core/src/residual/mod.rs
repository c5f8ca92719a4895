//! The biharmonic conformal immersion system for a surface
//! `φ: (M², ḡ = λ⁻²g) → N³`, evaluated pointwise in the induced metric
//! `g = φ*h`, together with its special cases and the energy functionals.
//!
//! With `H`, `A` and all operators taken in `g`, the system is
//!
//! ```text
//! ΔH − H[|A|² − Ric(ξ,ξ) − λ⁻²Δλ²] + 4g(grad ln λ, grad H) = 0
//! A(grad H) + H[grad H − (Ric ξ)^⊤ + 2A(grad ln λ)]        = 0
//! ```

mod energy;
mod quadrature;

pub use energy::{bienergy, energy, lambda_power_integral};
pub use quadrature::{GaussLegendre, DEFAULT_QUADRATURE_ORDER};

use crate::ambient::{ricci_data, AmbientModel, RicciData, SurfaceContext};
use crate::error::{Error, Result};
use crate::expr::Jet;
use crate::geom::{
    DiffMode, Grid, LocalGeometry, Metric2, ScalarField, SurfaceChart, TangentVector,
};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Surfaces with `|grad H|_g` above this are rejected by [`cmc_residual`].
pub const CMC_GRAD_TOL: f64 = 1e-6;

/// Default sweep tolerance for the given differentiation mode.
pub fn default_tolerance(mode: DiffMode) -> f64 {
    match mode {
        DiffMode::Analytic => 1e-6,
        DiffMode::FiniteDifference { .. } => 1e-3,
    }
}

/// The conformal factor, stored as `λ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalFactor {
    lambda2: ScalarField,
}

impl ConformalFactor {
    pub fn new(lambda2: ScalarField) -> Self {
        Self { lambda2 }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::new(ScalarField::parse(text)?))
    }

    pub fn constant(lambda2: f64) -> Self {
        Self::new(ScalarField::constant(lambda2))
    }

    pub fn field(&self) -> &ScalarField {
        &self.lambda2
    }

    pub fn lambda2(&self, p: (f64, f64)) -> Result<f64> {
        let v = self.lambda2.value(p)?;
        positive(v, p)
    }

    pub fn lambda(&self, p: (f64, f64)) -> Result<f64> {
        Ok(self.lambda2(p)?.sqrt())
    }

    pub fn ln_lambda(&self, p: (f64, f64)) -> Result<f64> {
        Ok(0.5 * self.lambda2(p)?.ln())
    }

    pub fn lambda2_jet(&self, p: (f64, f64), order: usize, mode: DiffMode) -> Result<Jet> {
        let j = self.lambda2.jet(p, order, mode)?;
        positive(j.value(), p)?;
        Ok(j)
    }

    /// `ln λ = ½ ln λ²`.
    pub fn ln_lambda_jet(&self, p: (f64, f64), order: usize, mode: DiffMode) -> Result<Jet> {
        Ok(self.lambda2_jet(p, order, mode)?.ln() * 0.5)
    }
}

fn positive(v: f64, p: (f64, f64)) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::NonPositiveLambda {
            u: p.0,
            v: p.1,
            value: v,
        })
    }
}

/// Residuals of the scalar (normal) and vector (tangential) equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub normal: f64,
    pub tangential: TangentVector,
    pub normal_abs: f64,
    /// Norm in the induced metric.
    pub tangential_norm: f64,
}

impl ResidualReport {
    pub fn new(normal: f64, tangential: TangentVector, g: &Metric2) -> Self {
        Self {
            normal,
            tangential,
            normal_abs: normal.abs(),
            tangential_norm: tangential.norm(g),
        }
    }

    /// `|normal| + |tangential|_g`, the quantity bounded by sweep tolerances.
    pub fn combined(&self) -> f64 {
        self.normal_abs + self.tangential_norm
    }
}

struct Pieces {
    loc: LocalGeometry,
    ric: RicciData,
    grad_h: TangentVector,
    lap_h: f64,
}

fn pieces(chart: &SurfaceChart, model: &AmbientModel, p: (f64, f64)) -> Result<Pieces> {
    let ric = ricci_data(model, &SurfaceContext::Chart)?;
    let loc = chart.local_geometry(p)?;
    let grad_h = loc.metric.gradient(&loc.mean_curvature);
    let lap_h = loc.metric.laplacian(&loc.mean_curvature);
    Ok(Pieces {
        loc,
        ric,
        grad_h,
        lap_h,
    })
}

pub fn biharmonic_conformal_residual(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    model: &AmbientModel,
    p: (f64, f64),
) -> Result<ResidualReport> {
    Ok(evaluate(chart, lambda, model, p)?.report)
}

/// Residual plus the geometric fields that go into a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSample {
    pub u: f64,
    pub v: f64,
    pub report: ResidualReport,
    pub mean_curvature: f64,
    pub norm_a2: f64,
    pub lambda2: f64,
}

fn evaluate(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    model: &AmbientModel,
    p: (f64, f64),
) -> Result<ResidualSample> {
    let Pieces {
        loc,
        ric,
        grad_h,
        lap_h,
    } = pieces(chart, model, p)?;
    let at = &loc.at;
    let l2 = lambda.lambda2_jet(p, 2, chart.mode())?;
    let ln_l = l2.ln() * 0.5;
    let grad_ln = loc.metric.gradient(&ln_l);
    let lap_l2_ratio = loc.metric.laplacian(&l2) / l2.value();
    let h = at.mean_curvature;

    let normal = lap_h - h * (at.norm_a2 - ric.ric_normal - lap_l2_ratio)
        + 4.0 * at.g.inner(&grad_ln, &grad_h);
    let tangential = at.apply_shape(&grad_h)
        + (grad_h - ric.ric_tangent + at.apply_shape(&grad_ln).scale(2.0)).scale(h);
    Ok(ResidualSample {
        u: p.0,
        v: p.1,
        report: ResidualReport::new(normal, tangential, &at.g),
        mean_curvature: h,
        norm_a2: at.norm_a2,
        lambda2: l2.value(),
    })
}

/// Reduced system for constant mean curvature `H ≠ 0`:
/// `(Δλ² − λ²[|A|² − Ric(ξ,ξ)], A(grad ln λ) − ½(Ric ξ)^⊤)`.
pub fn cmc_residual(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    model: &AmbientModel,
    p: (f64, f64),
) -> Result<(f64, TangentVector)> {
    let Pieces {
        loc, ric, grad_h, ..
    } = pieces(chart, model, p)?;
    let at = &loc.at;
    let grad_norm = grad_h.norm(&at.g);
    if !(grad_norm <= CMC_GRAD_TOL) {
        return Err(Error::NotCmc {
            u: p.0,
            v: p.1,
            grad_norm,
        });
    }
    let l2 = lambda.lambda2_jet(p, 2, chart.mode())?;
    let grad_ln = loc.metric.gradient(&(l2.ln() * 0.5));
    let scalar = loc.metric.laplacian(&l2) - l2.value() * (at.norm_a2 - ric.ric_normal);
    let vector = at.apply_shape(&grad_ln) - ric.ric_tangent.scale(0.5);
    Ok((scalar, vector))
}

/// Biharmonic hypersurface system for the isometric case (`λ ≡ 1`, `m = 2`):
/// `ΔH − H|A|² + H Ric(ξ,ξ)` and `2A(grad H) + grad H² − 2H(Ric ξ)^⊤`.
pub fn isometric_biharmonic_residual(
    chart: &SurfaceChart,
    model: &AmbientModel,
    p: (f64, f64),
) -> Result<ResidualReport> {
    let Pieces {
        loc,
        ric,
        grad_h,
        lap_h,
    } = pieces(chart, model, p)?;
    let at = &loc.at;
    let h = at.mean_curvature;
    let grad_h2 = loc
        .metric
        .gradient(&(loc.mean_curvature * loc.mean_curvature));
    let normal = lap_h - h * at.norm_a2 + h * ric.ric_normal;
    let tangential = at.apply_shape(&grad_h).scale(2.0) + grad_h2 - ric.ric_tangent.scale(2.0 * h);
    Ok(ResidualReport::new(normal, tangential, &at.g))
}

/// Tension field `τ = 2λ²Hξ` of `φ: (M, λ⁻²g) → N`.
pub fn tension_field(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    p: (f64, f64),
) -> Result<[f64; 3]> {
    let at = chart.geometry_at(p)?;
    let s = 2.0 * lambda.lambda2(p)? * at.mean_curvature;
    Ok(at.xi.map(|x| s * x))
}

/// Evaluates the main system on every grid point, in parallel; rows are
/// ordered by `(u-index, v-index)`.
pub fn sweep(
    chart: &SurfaceChart,
    lambda: &ConformalFactor,
    model: &AmbientModel,
    grid: &Grid,
) -> Result<Vec<ResidualSample>> {
    grid.points()
        .into_par_iter()
        .map(|p| evaluate(chart, lambda, model, p))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub max_normal: f64,
    pub max_tangential: f64,
    /// `max(|normal| + |tangential|_g)` and where it occurs.
    pub max_combined: f64,
    pub worst: (f64, f64),
    pub tolerance: f64,
    pub feasible: bool,
}

pub fn summarize(samples: &[ResidualSample], tolerance: f64) -> SweepSummary {
    let mut s = SweepSummary {
        points: samples.len(),
        max_normal: 0.0,
        max_tangential: 0.0,
        max_combined: 0.0,
        worst: (f64::NAN, f64::NAN),
        tolerance,
        feasible: true,
    };
    for x in samples {
        let r = &x.report;
        s.max_normal = s.max_normal.max(r.normal_abs);
        s.max_tangential = s.max_tangential.max(r.tangential_norm);
        // NaN residuals must not pass
        if s.worst.0.is_nan() || !(r.combined() <= s.max_combined) {
            s.max_combined = if r.combined().is_nan() {
                f64::INFINITY
            } else {
                r.combined()
            };
            s.worst = (x.u, x.v);
        }
    }
    s.feasible = s.max_combined <= tolerance;
    s
}

pub const CSV_HEADER: &str = "u,v,res_normal,res_tan_1,res_tan_2,res_tan_norm,H,normA2,lambda2";

pub fn write_csv<W: Write>(out: &mut W, samples: &[ResidualSample]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in samples {
        let r = &s.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.u,
            s.v,
            r.normal,
            r.tangential.a1,
            r.tangential.a2,
            r.tangential_norm,
            s.mean_curvature,
            s.norm_a2,
            s.lambda2
        )?;
    }
    Ok(())
}
