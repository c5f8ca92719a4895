use crate::error::{Error, Result};
use crate::expr::{eval_jet, parse, Expr, Jet, Var};
use crate::geom::{Preset, Rect, SurfaceChart};
use std::f64::consts::PI;

pub const ARCLENGTH_TOL: f64 = 1e-8;
pub const AXIS_MIN: f64 = 1e-6;
const VALIDATION_SAMPLES: usize = 200;

/// Arclength-parametrized profile `x = f(u)`, `z = g(u)` of a surface of
/// revolution about the `z`-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    f: Expr,
    g: Expr,
    interval: (f64, f64),
}

impl ProfileCurve {
    /// Validates arclength and axis clearance on a uniform sample.
    pub fn new(f: Expr, g: Expr, interval: (f64, f64)) -> Result<Self> {
        let (u0, u1) = interval;
        if !(u0.is_finite() && u1.is_finite() && u0 < u1) {
            return Err(Error::InvalidInput(format!("bad interval [{u0}, {u1}]")));
        }
        if f.uses(Var::V) || g.uses(Var::V) {
            return Err(Error::InvalidInput(
                "profile expressions must depend on u only".into(),
            ));
        }
        let curve = Self { f, g, interval };
        for i in 0..VALIDATION_SAMPLES {
            let u = u0 + (u1 - u0) * i as f64 / (VALIDATION_SAMPLES - 1) as f64;
            let f = curve.f_jet(u, 1)?;
            let g = curve.g_jet(u, 1)?;
            if !(f.value() >= AXIS_MIN) {
                return Err(Error::AxisContact { u, f: f.value() });
            }
            let defect = (f.partial(1, 0).powi(2) + g.partial(1, 0).powi(2) - 1.0).abs();
            if !(defect <= ARCLENGTH_TOL) {
                return Err(Error::NotArclength { u, defect });
            }
        }
        Ok(curve)
    }

    pub fn parse(f: &str, g: &str, interval: (f64, f64)) -> Result<Self> {
        Self::new(parse(f)?, parse(g)?, interval)
    }

    /// Profile of a rotational preset on its default interval.
    pub fn from_preset(preset: &Preset) -> Result<Self> {
        let (f, g, iv) = preset
            .profile()
            .ok_or_else(|| Error::InvalidInput(format!("{preset} has no profile")))?;
        Self::new(f, g, iv)
    }

    pub fn with_interval(&self, interval: (f64, f64)) -> Result<Self> {
        Self::new(self.f.clone(), self.g.clone(), interval)
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub(crate) fn f_jet(&self, u: f64, order: usize) -> Result<Jet> {
        Ok(eval_jet(&self.f, (u, 0.0), order)?)
    }

    pub(crate) fn g_jet(&self, u: f64, order: usize) -> Result<Jet> {
        Ok(eval_jet(&self.g, (u, 0.0), order)?)
    }

    /// `(f(u) cos v, f(u) sin v, g(u))` over the profile interval.
    pub fn chart(&self) -> SurfaceChart {
        let (u0, u1) = self.interval;
        let coords = [
            self.f.clone() * parse("cos(v)").unwrap(),
            self.f.clone() * parse("sin(v)").unwrap(),
            self.g.clone(),
        ];
        SurfaceChart::new("rotational", coords, Rect::new(u0, u1, -2.0 * PI, 2.0 * PI))
    }
}
