use biharm_core::expr::{eval, parse, Expr, Var};
use biharm_core::geom::{DiffMode, Preset, Rect, SurfaceChart};
use biharm_core::rotational::ProfileCurve;
use biharm_core::{Error, Result};
use clap::Args;
use std::path::PathBuf;

/// Parses a real number, allowing constant expressions such as `sqrt(2)`.
pub fn real(s: &str) -> std::result::Result<f64, String> {
    let e = parse(s).map_err(|e| e.to_string())?;
    if !e.is_constant() {
        return Err(format!("`{s}` is not a constant"));
    }
    eval(&e, 0.0, 0.0).map_err(|e| e.to_string())
}

pub fn positive(s: &str) -> std::result::Result<f64, String> {
    match real(s)? {
        x if x > 0.0 => Ok(x),
        x => Err(format!("expected a positive value, got {x}")),
    }
}

pub fn grid_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    biharm_core::geom::parse_grid_dims(s).map_err(|e| e.to_string())
}

/// Prints a warning when a one-variable expression uses the other variable.
pub fn warn_if_uses(e: &Expr, var: Var, what: &str) -> bool {
    let used = e.uses(var);
    if used {
        let name = match var {
            Var::U => "u",
            Var::V => "v",
        };
        eprintln!("warning: {what} should not depend on `{name}`");
    }
    used
}

/// Which surface to work on.
#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Built-in surface, e.g. `cylinder:R=1`, `torus:R=2,r=1`, `cone:alpha=0.5`
    #[arg(long, conflicts_with_all = ["x", "f"])]
    pub preset: Option<Preset>,
    /// Custom chart x(u,v); needs --y, --z and --domain
    #[arg(long, requires_all = ["y", "z", "domain"], conflicts_with = "f")]
    pub x: Option<String>,
    #[arg(long, requires = "x")]
    pub y: Option<String>,
    #[arg(long, requires = "x")]
    pub z: Option<String>,
    /// Rotational profile x = f(u), z = g(u) (arclength); needs --g and --domain
    #[arg(long, requires_all = ["g", "domain"])]
    pub f: Option<String>,
    #[arg(long, requires = "f")]
    pub g: Option<String>,
    /// Chart domain `u0,u1,v0,v1` for custom or rotational charts
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<Rect>,
    /// `analytic`, `fd` or `fd:<step>`
    #[arg(long, default_value = "analytic")]
    pub mode: DiffMode,
}

impl SurfaceArgs {
    /// The chart and the region used when none is given.
    pub fn chart(&self) -> Result<(SurfaceChart, Rect)> {
        let (chart, region) = if let Some(p) = &self.preset {
            (p.chart(), p.default_region())
        } else if let (Some(x), Some(y), Some(z), Some(d)) =
            (&self.x, &self.y, &self.z, self.domain)
        {
            (SurfaceChart::from_strs(x, y, z, d)?, d)
        } else if let (Some(f), Some(g), Some(d)) = (&self.f, &self.g, self.domain) {
            let profile = ProfileCurve::parse(f, g, (d.u0, d.u1))?;
            let chart = profile.chart();
            let region = Rect::new(
                d.u0,
                d.u1,
                d.v0.max(chart.domain().v0),
                d.v1.min(chart.domain().v1),
            );
            (chart, region)
        } else {
            return Err(Error::InvalidInput(
                "choose a surface with --preset, --x/--y/--z/--domain or --f/--g/--domain".into(),
            ));
        };
        Ok((chart.with_mode(self.mode), region))
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write CSV here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
