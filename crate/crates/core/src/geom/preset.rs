use super::chart::{Rect, SingularLocus, SurfaceChart};
use crate::error::{Error, Result};
use crate::expr::{eval, parse, Expr};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Built-in surfaces.
///
/// Rotational presets (`sphere`, `cone`, `torus`) are charted as
/// `(f(u) cos v, f(u) sin v, g(u))` with an arclength profile, so the
/// sphere of radius 1 is `(cos u cos v, cos u sin v, sin u)`.
///
/// Mean-curvature signs under `ξ = r_u × r_v / |r_u × r_v|`:
/// plane 0, sphere `+1/r` (inward normal), cylinder `-1/(2R)` (outward
/// normal), cone `+cot α / (2u)`, catenoid 0, torus `(1/r + cos/(R + r cos))/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Plane,
    Sphere { r: f64 },
    Cylinder { r: f64 },
    Cone { alpha: f64 },
    Catenoid,
    Torus { major: f64, minor: f64 },
}

impl Preset {
    /// Arclength profile `(f, g)` and a default `u`-interval for the
    /// rotational presets.
    pub fn profile(&self) -> Option<(Expr, Expr, (f64, f64))> {
        let (f, g, iv) = match *self {
            Preset::Plane => ("u".to_string(), "0".to_string(), (0.5, 1.5)),
            Preset::Sphere { r } => (
                format!("{r}*cos(u/{r})"),
                format!("{r}*sin(u/{r})"),
                (-r, r),
            ),
            Preset::Cylinder { r } => (format!("{r}"), "u".to_string(), (0.0, 1.0)),
            Preset::Cone { alpha } => (
                format!("u*sin({alpha})"),
                format!("u*cos({alpha})"),
                (1.0, 2.0),
            ),
            Preset::Catenoid => (
                "sqrt(1+u^2)".to_string(),
                "ln(u+sqrt(1+u^2))".to_string(),
                (-1.0, 1.0),
            ),
            Preset::Torus { major, minor } => (
                format!("{major}+{minor}*cos(u/{minor})"),
                format!("{minor}*sin(u/{minor})"),
                (-minor, minor),
            ),
        };
        Some((parse(&f).ok()?, parse(&g).ok()?, iv))
    }

    pub fn chart(&self) -> SurfaceChart {
        let rot = |f: &Expr, g: &Expr| -> [Expr; 3] {
            [
                f.clone() * parse("cos(v)").unwrap(),
                f.clone() * parse("sin(v)").unwrap(),
                g.clone(),
            ]
        };
        let name = self.to_string();
        match *self {
            Preset::Plane => SurfaceChart::new(
                name,
                [Expr::u(), Expr::v(), Expr::Const(0.0)],
                Rect::new(-1.0, 1.0, -1.0, 1.0),
            ),
            Preset::Cylinder { r } => SurfaceChart::new(
                name,
                [
                    parse(&format!("{r}*cos(u/{r})")).unwrap(),
                    parse(&format!("{r}*sin(u/{r})")).unwrap(),
                    Expr::v(),
                ],
                Rect::new(-4.0 * PI * r, 4.0 * PI * r, -10.0, 10.0),
            ),
            Preset::Catenoid => SurfaceChart::new(
                name,
                [
                    parse("cosh(u)*cos(v)").unwrap(),
                    parse("cosh(u)*sin(v)").unwrap(),
                    Expr::u(),
                ],
                Rect::new(-3.0, 3.0, -2.0 * PI, 2.0 * PI),
            ),
            Preset::Sphere { r } => {
                let (f, g, _) = self.profile().unwrap();
                let half = 0.5 * PI * r;
                SurfaceChart::new(
                    name,
                    rot(&f, &g),
                    Rect::new(-1.5 * r, 1.5 * r, -2.0 * PI, 2.0 * PI),
                )
                .with_singular(SingularLocus::U(half))
                .with_singular(SingularLocus::U(-half))
            }
            Preset::Cone { .. } => {
                let (f, g, _) = self.profile().unwrap();
                SurfaceChart::new(
                    name,
                    rot(&f, &g),
                    Rect::new(0.05, 10.0, -2.0 * PI, 2.0 * PI),
                )
                .with_singular(SingularLocus::U(0.0))
            }
            Preset::Torus { minor, .. } => {
                let (f, g, _) = self.profile().unwrap();
                SurfaceChart::new(
                    name,
                    rot(&f, &g),
                    Rect::new(-2.0 * PI * minor, 2.0 * PI * minor, -2.0 * PI, 2.0 * PI),
                )
            }
        }
    }

    /// Region used for sweeps when none is given.
    pub fn default_region(&self) -> Rect {
        match *self {
            Preset::Plane => Rect::new(-1.0, 1.0, -1.0, 1.0),
            Preset::Sphere { r } => Rect::new(-1.2 * r, 1.2 * r, 0.0, 2.0 * PI),
            Preset::Cylinder { r } => Rect::new(0.0, 2.0 * PI * r, 0.0, 1.0),
            Preset::Cone { .. } => Rect::new(1.0, 2.0, 0.0, 2.0 * PI),
            Preset::Catenoid => Rect::new(-1.0, 1.0, 0.0, 2.0 * PI),
            Preset::Torus { minor, .. } => Rect::new(-PI * minor, PI * minor, 0.0, 2.0 * PI),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Plane => f.write_str("plane"),
            Preset::Sphere { r } => write!(f, "sphere:r={r}"),
            Preset::Cylinder { r } => write!(f, "cylinder:R={r}"),
            Preset::Cone { alpha } => write!(f, "cone:alpha={alpha}"),
            Preset::Catenoid => f.write_str("catenoid"),
            Preset::Torus { major, minor } => write!(f, "torus:R={major},r={minor}"),
        }
    }
}

fn constant(text: &str) -> Result<f64> {
    let e = parse(text)?;
    if !e.is_constant() {
        return Err(Error::InvalidInput(format!("`{text}` is not a constant")));
    }
    Ok(eval(&e, 0.0, 0.0)?)
}

impl FromStr for Preset {
    type Err = Error;

    /// `name[:key=value,...]`, e.g. `cylinder:R=1`, `torus:R=2,r=1`.
    /// Parameter values may be constant expressions such as `pi/6`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), p),
            None => (s.trim(), ""),
        };
        let mut kv = Vec::new();
        for item in params.split(',').filter(|x| !x.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("bad preset parameter `{item}`")))?;
            kv.push((k.trim().to_string(), constant(v.trim())?));
        }
        let mut take = |key: &str, default: f64| -> f64 {
            match kv.iter().position(|(k, _)| k == key) {
                Some(i) => kv.remove(i).1,
                None => default,
            }
        };
        let preset = match name {
            "plane" => Preset::Plane,
            "sphere" => Preset::Sphere { r: take("r", 1.0) },
            "cylinder" => Preset::Cylinder { r: take("R", 1.0) },
            "cone" => Preset::Cone {
                alpha: take("alpha", 0.5),
            },
            "catenoid" => Preset::Catenoid,
            "torus" => Preset::Torus {
                major: take("R", 2.0),
                minor: take("r", 1.0),
            },
            other => return Err(Error::InvalidInput(format!("unknown preset `{other}`"))),
        };
        if let Some((k, _)) = kv.first() {
            return Err(Error::InvalidInput(format!(
                "unknown parameter `{k}` for preset `{name}`"
            )));
        }
        let valid = match preset {
            Preset::Sphere { r } | Preset::Cylinder { r } => r > 0.0,
            Preset::Cone { alpha } => alpha > 0.0 && alpha < 0.5 * PI,
            Preset::Torus { major, minor } => minor > 0.0 && major > minor,
            Preset::Plane | Preset::Catenoid => true,
        };
        if !valid {
            return Err(Error::InvalidInput(format!("invalid parameters for `{s}`")));
        }
        Ok(preset)
    }
}
