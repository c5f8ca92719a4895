use crate::args::{grid_dims, positive, real, warn_if_uses, OutputArgs, SurfaceArgs};
use crate::CliError;
use biharm_core::ambient::AmbientModel;
use biharm_core::cmc::{
    cmc_admissibility_on_grid, cmc_shape_data, s2xr_condition_residual, s2xr_first_integral_check,
    sinh_gordon_residual, IsothermalCmcData, VerticalCylinderS2R,
};
use biharm_core::expr::{parse, Var};
use biharm_core::geom::{DiffMode, Grid, Preset, Rect, ScalarField};
use biharm_core::residual::{
    self, bienergy, default_tolerance, lambda_power_integral, summarize, sweep, write_csv,
    ConformalFactor, GaussLegendre, DEFAULT_QUADRATURE_ORDER,
};
use biharm_core::rotational::{
    check_lambda, rotational_data, solve_constrained, solve_lambda, write_trajectory_csv,
    ProfileCurve, Verdict, DEFAULT_STEP, DEFAULT_TOL,
};
use biharm_core::verify::{all_passed, render_table, run_verify, VerifyConfig};
use biharm_core::Error;
use clap::Args;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

type Outcome = Result<u8, CliError>;

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn region_within(chart_domain: Rect, region: Rect) -> Result<Rect, Error> {
    if !region.is_valid() || !chart_domain.contains_rect(&region) {
        return Err(Error::InvalidInput(format!(
            "region {region:?} is not inside the chart domain {chart_domain:?}"
        )));
    }
    Ok(region)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `analytic`, `fd` or `fd:<step>`
    #[arg(long, default_value = "analytic")]
    mode: DiffMode,
    /// Run only checks matching this name, id or tag (repeatable)
    #[arg(long)]
    only: Vec<String>,
    /// Print a JSON summary instead of the table
    #[arg(long)]
    json: bool,
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let outcomes = run_verify(&VerifyConfig { mode: a.mode }, &a.only);
    if outcomes.is_empty() {
        return Err(Error::InvalidInput(format!("no check matches {:?}", a.only)).into());
    }
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &outcomes).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", render_table(&outcomes))?;
    }
    let passed = outcomes
        .iter()
        .filter(|o| o.status == biharm_core::verify::Status::Pass)
        .count();
    eprintln!("{passed}/{} checks passed", outcomes.len());
    Ok(if all_passed(&outcomes) { 0 } else { 1 })
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Squared conformal factor λ²(u,v)
    #[arg(long, default_value = "1")]
    lambda2: String,
    /// `euclidean`, `space-form:C=<c>` or `s2xr`
    #[arg(long, default_value = "euclidean")]
    ambient: AmbientModel,
    /// Sample grid `NUxNV`
    #[arg(long, default_value = "50x50", value_parser = grid_dims)]
    grid: (usize, usize),
    /// Sample region `u0,u1,v0,v1` (default: the surface's default region)
    #[arg(long, allow_hyphen_values = true)]
    region: Option<Rect>,
    /// Feasibility tolerance (default 1e-6, or 1e-3 with finite differences)
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn residual(a: &ResidualArgs) -> Outcome {
    let (chart, default_region) = a.surface.chart()?;
    let region = region_within(chart.domain(), a.region.unwrap_or(default_region))?;
    let lambda = ConformalFactor::parse(&a.lambda2)?;
    let grid = Grid::new(region, a.grid.0, a.grid.1)?;
    let samples = sweep(&chart, &lambda, &a.ambient, &grid)?;
    let tol = a.tol.unwrap_or_else(|| default_tolerance(chart.mode()));
    let s = summarize(&samples, tol);

    let mut out = open_output(a.output.output.as_deref())?;
    write_csv(&mut out, &samples)?;
    out.flush()?;
    eprintln!(
        "points={} max_normal={:e} max_tangential={:e} max_combined={:e} worst=({}, {}) tol={:e} verdict={}",
        s.points,
        s.max_normal,
        s.max_tangential,
        s.max_combined,
        s.worst.0,
        s.worst.1,
        s.tolerance,
        if s.feasible { "FEASIBLE" } else { "INFEASIBLE" }
    );
    Ok(0)
}

#[derive(Debug, Args)]
pub struct RotationalArgs {
    /// Rotational preset: sphere, cylinder, cone, catenoid or torus
    #[arg(long, conflicts_with_all = ["f", "g"])]
    preset: Option<Preset>,
    /// Profile radius f(u); the profile must be arclength parametrized
    #[arg(long, requires = "g")]
    f: Option<String>,
    /// Profile height g(u)
    #[arg(long, requires = "f")]
    g: Option<String>,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    u0: Option<f64>,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    u1: Option<f64>,
    /// Check this λ²(u) against both equations
    #[arg(long, conflicts_with_all = ["solve", "constrained"])]
    lambda2: Option<String>,
    /// Integrate the second equation from `mu0=<a>,mup0=<b>` with RK4
    #[arg(long, value_parser = initial_data, conflicts_with = "constrained")]
    solve: Option<(f64, f64)>,
    /// Determine μ' from the first equation and check the second (default)
    #[arg(long)]
    constrained: bool,
    #[arg(long, default_value_t = DEFAULT_STEP, value_parser = positive)]
    step: f64,
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
    tol: f64,
    /// Print the verdict as JSON on stderr
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn initial_data(s: &str) -> Result<(f64, f64), String> {
    let (mut mu0, mut mup0) = (None, None);
    for item in s.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
        let x = real(v.trim())?;
        match k.trim() {
            "mu0" => mu0 = Some(x),
            "mup0" | "muprime0" => mup0 = Some(x),
            other => return Err(format!("unknown key `{other}` (expected mu0, mup0)")),
        }
    }
    match (mu0, mup0) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err("need both mu0 and mup0".into()),
    }
}

fn print_verdict(v: &Verdict, json: bool) -> Result<(), CliError> {
    if json {
        let s = serde_json::to_string_pretty(v).map_err(io::Error::from)?;
        eprintln!("{s}");
        return Ok(());
    }
    eprintln!("verdict: {}", v.feasibility);
    eprintln!("branch: {:?}", v.branch);
    eprintln!("reason: {}", v.reason);
    eprintln!("max |E1|: {:e}", v.max_eq1);
    if v.max_eq2.is_nan() {
        eprintln!("max |E2|: n/a (μ' is not determined by the first equation)");
    } else {
        eprintln!("max |E2|: {:e}", v.max_eq2);
    }
    if let Some(m) = v.min_hh_prime {
        eprintln!("min |HH'|: {m:e}");
    }
    if let Some(u) = v.witness_u {
        eprintln!("witness u: {u}");
    }
    eprintln!("tolerance: {:e}", v.tolerance);
    Ok(())
}

pub fn rotational(a: &RotationalArgs) -> Outcome {
    let profile = match (&a.preset, &a.f, &a.g) {
        (Some(p), _, _) => ProfileCurve::from_preset(p)?,
        (None, Some(f), Some(g)) => {
            let (fe, ge) = (
                parse(f).map_err(Error::from)?,
                parse(g).map_err(Error::from)?,
            );
            warn_if_uses(&fe, Var::V, "f");
            warn_if_uses(&ge, Var::V, "g");
            let (u0, u1) =
                a.u0.zip(a.u1)
                    .ok_or_else(|| Error::InvalidInput("--f/--g need --u0 and --u1".into()))?;
            ProfileCurve::new(fe, ge, (u0, u1))?
        }
        _ => return Err(Error::InvalidInput("choose --preset or --f/--g".into()).into()),
    };
    let (p0, p1) = profile.interval();
    let (u0, u1) = (a.u0.unwrap_or(p0), a.u1.unwrap_or(p1));
    let profile = profile.with_interval((u0, u1))?;
    let data = rotational_data(&profile);

    let verdict = if let Some(l) = &a.lambda2 {
        let e = parse(l).map_err(Error::from)?;
        warn_if_uses(&e, Var::V, "λ²");
        check_lambda(&data, &e, u0, u1, a.step, a.tol)?
    } else if let Some((mu0, mup0)) = a.solve {
        solve_lambda(&data, u0, mu0, mup0, u1, a.step, a.tol)?
    } else {
        solve_constrained(&data, u0, u1, a.step, a.tol, 0.0)?
    };

    let mut out = open_output(a.output.output.as_deref())?;
    write_trajectory_csv(&mut out, &verdict.rows)?;
    out.flush()?;
    print_verdict(&verdict, a.json)?;
    Ok(0)
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value = "1")]
    lambda2: String,
    /// Integration region `u0,u1,v0,v1` (default: the surface's default region)
    #[arg(long, allow_hyphen_values = true)]
    region: Option<Rect>,
    /// Gauss–Legendre order per direction
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_ORDER)]
    order: usize,
    /// Also report ∫λ^p dv for this p
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    power: Option<f64>,
}

pub fn energy(a: &EnergyArgs) -> Outcome {
    let (chart, default_region) = a.surface.chart()?;
    let region = region_within(chart.domain(), a.region.unwrap_or(default_region))?;
    let lambda = ConformalFactor::parse(&a.lambda2)?;
    let rule = GaussLegendre::new(a.order)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "energy={:.15e}",
        residual::energy(&chart, &lambda, &region, &rule)?
    )?;
    writeln!(
        out,
        "bienergy={:.15e}",
        bienergy(&chart, &lambda, &region, &rule)?
    )?;
    if let Some(p) = a.power {
        let x = lambda_power_integral(&chart, &lambda, p, &region, &rule)?;
        writeln!(out, "lambda_power_integral(p={p})={x:.15e}")?;
    }
    Ok(0)
}

#[derive(Debug, Args)]
pub struct SinhGordonArgs {
    /// Isothermal data w(u,v), with metric e^{2w}/(2H)(du² + dv²)
    #[arg(long)]
    w: String,
    /// Constant mean curvature H ≠ 0
    #[arg(long = "H", value_parser = real, allow_hyphen_values = true)]
    h: f64,
    #[arg(long, default_value = "50x50", value_parser = grid_dims)]
    grid: (usize, usize),
    #[arg(
        long,
        default_value = "0,6.283185307179586,0,6.283185307179586",
        allow_hyphen_values = true
    )]
    region: Rect,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn sinh_gordon(a: &SinhGordonArgs) -> Outcome {
    let data = IsothermalCmcData::new(a.h, ScalarField::parse(&a.w)?)?;
    let grid = Grid::new(a.region, a.grid.0, a.grid.1)?;
    let mut out = open_output(a.output.output.as_deref())?;
    writeln!(out, "u,v,w,sinh_gordon,A11,A22,metric_factor")?;
    let mut max_sg: f64 = 0.0;
    for p in grid.points() {
        let w = data.w().value(p)?;
        let sg = sinh_gordon_residual(&data, p)?;
        let (a11, a22) = cmc_shape_data(&data, p)?;
        let m = data.metric_factor(p)?;
        max_sg = max_sg.max(if sg.is_nan() { f64::INFINITY } else { sg.abs() });
        writeln!(out, "{},{},{w},{sg},{a11},{a22},{m}", p.0, p.1)?;
    }
    out.flush()?;
    let v = cmc_admissibility_on_grid(&data, &grid)?;
    eprintln!("max |sinh-Gordon residual|: {max_sg:e}");
    eprintln!(
        "class: {} (max |w| = {:e} at ({}, {}), tol {:e})",
        v.class, v.max_abs_w, v.witness.0, v.witness.1, v.tolerance
    );
    eprintln!("reason: {}", v.reason);
    Ok(0)
}

#[derive(Debug, Args)]
pub struct S2xrArgs {
    /// Geodesic curvature k > 1 of the base circle (constant expressions allowed)
    #[arg(long, value_parser = real)]
    k: f64,
    /// λ² as a function of the height z, written in the variable `v`
    #[arg(long)]
    lambda2: String,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    z0: f64,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    z1: f64,
    /// Number of sample heights
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Also report the first-integral residual for this constant
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn s2xr(a: &S2xrArgs) -> Outcome {
    let cyl = VerticalCylinderS2R::new(a.k)?;
    let e = parse(&a.lambda2).map_err(Error::from)?;
    if warn_if_uses(&e, Var::U, "λ²") {
        eprintln!("warning: evaluating along u = 0");
    }
    if a.n < 2 || a.z0.partial_cmp(&a.z1) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidInput("need n ≥ 2 and z0 < z1".into()).into());
    }
    let mut out = open_output(a.output.output.as_deref())?;
    write!(out, "z,lambda2,cd20,ode")?;
    if a.c1.is_some() {
        write!(out, ",first_integral")?;
    }
    writeln!(out)?;
    let bad = |x: f64| if x.is_nan() { f64::INFINITY } else { x.abs() };
    let (mut max_cd, mut max_ode, mut max_fi) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..a.n {
        let z = a.z0 + (a.z1 - a.z0) * i as f64 / (a.n - 1) as f64;
        let (cd, ode) = s2xr_condition_residual(&cyl, &e, z)?;
        let y = biharm_core::expr::eval(&e, 0.0, z).map_err(Error::from)?;
        max_cd = max_cd.max(bad(cd));
        max_ode = max_ode.max(bad(ode));
        write!(out, "{z},{y},{cd},{ode}")?;
        if let Some(c1) = a.c1 {
            let fi = s2xr_first_integral_check(&cyl, &e, z, c1)?;
            max_fi = max_fi.max(bad(fi));
            write!(out, ",{fi}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    eprintln!("R = {}", cyl.radius());
    eprintln!("max |CD20 residual|: {max_cd:e}");
    eprintln!("max |ODE residual|: {max_ode:e}");
    if a.c1.is_some() {
        eprintln!("max |first integral residual|: {max_fi:e}");
    }
    let ok = max_cd <= a.tol && max_ode <= a.tol && (a.c1.is_none() || max_fi <= a.tol);
    eprintln!(
        "verdict: {} (tol {:e})",
        if ok { "SATISFIED" } else { "VIOLATED" },
        a.tol
    );
    Ok(0)
}
