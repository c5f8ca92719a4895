use super::fd::fd_jet;
use super::metric::{Christoffel, Metric2, MetricJet, TangentVector};
use crate::error::{Error, Result};
use crate::expr::{eval, eval_jet, parse, Expr, Jet};
use serde::Serialize;
use std::str::FromStr;

/// Minimum parameter distance from a declared singular locus.
pub const SINGULAR_MARGIN: f64 = 1e-3;
/// Threshold on `|r_u × r_v|` below which a point is degenerate.
pub const IMMERSION_EPS: f64 = 1e-10;
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Outer step multiplier when finite-differencing the FD mean curvature.
pub const NESTED_FD_FACTOR: f64 = 10.0;

/// How chart and field derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DiffMode {
    #[default]
    Analytic,
    FiniteDifference {
        step: f64,
    },
}

impl FromStr for DiffMode {
    type Err = Error;
    /// `analytic`, `fd` or `fd:<step>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "analytic" {
            return Ok(DiffMode::Analytic);
        }
        let step = match s.strip_prefix("fd") {
            Some("") => DEFAULT_FD_STEP,
            Some(rest) => rest
                .strip_prefix(':')
                .and_then(|x| x.parse::<f64>().ok())
                .filter(|x| *x > 0.0 && x.is_finite())
                .ok_or_else(|| Error::InvalidInput(format!("bad mode `{s}`")))?,
            None => return Err(Error::InvalidInput(format!("bad mode `{s}`"))),
        };
        Ok(DiffMode::FiniteDifference { step })
    }
}

impl std::fmt::Display for DiffMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiffMode::Analytic => f.write_str("analytic"),
            DiffMode::FiniteDifference { step } => write!(f, "fd:{step}"),
        }
    }
}

/// Closed parameter rectangle `[u0,u1]×[v0,v1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Self { u0, u1, v0, v1 }
    }

    pub fn is_valid(&self) -> bool {
        [self.u0, self.u1, self.v0, self.v1]
            .iter()
            .all(|x| x.is_finite())
            && self.u0 < self.u1
            && self.v0 < self.v1
    }

    pub fn contains(&self, (u, v): (f64, f64)) -> bool {
        const SLACK: f64 = 1e-12;
        u >= self.u0 - SLACK && u <= self.u1 + SLACK && v >= self.v0 - SLACK && v <= self.v1 + SLACK
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains((other.u0, other.v0)) && self.contains((other.u1, other.v1))
    }
}

impl FromStr for Rect {
    type Err = Error;
    /// `u0,u1,v0,v1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|x| {
                crate::expr::parse(x.trim())
                    .ok()
                    .filter(Expr::is_constant)
                    .and_then(|e| eval(&e, 0.0, 0.0).ok())
            })
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::InvalidInput(format!("bad region `{s}`")))?;
        match parts[..] {
            [u0, u1, v0, v1] if Rect::new(u0, u1, v0, v1).is_valid() => {
                Ok(Rect::new(u0, u1, v0, v1))
            }
            _ => Err(Error::InvalidInput(format!(
                "region `{s}` must be u0,u1,v0,v1 with u0<u1 and v0<v1"
            ))),
        }
    }
}

/// Tensor grid of `nu × nv` points spanning a region, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub region: Rect,
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(region: Rect, nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidInput(format!(
                "grid dimensions must be at least 2, got {nu}x{nv}"
            )));
        }
        if !region.is_valid() {
            return Err(Error::InvalidInput(format!("invalid region {region:?}")));
        }
        Ok(Self { region, nu, nv })
    }

    pub fn u_at(&self, i: usize) -> f64 {
        let r = &self.region;
        r.u0 + (r.u1 - r.u0) * i as f64 / (self.nu - 1) as f64
    }

    pub fn v_at(&self, j: usize) -> f64 {
        let r = &self.region;
        r.v0 + (r.v1 - r.v0) * j as f64 / (self.nv - 1) as f64
    }

    /// Points ordered by `(u-index, v-index)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (i, j)))
            .map(|(i, j)| (self.u_at(i), self.v_at(j)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Parses `NUxNV`.
pub fn parse_grid_dims(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("bad grid `{s}`, expected NUxNV"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nu = a.trim().parse().map_err(|_| bad())?;
    let nv = b.trim().parse().map_err(|_| bad())?;
    if nu < 2 || nv < 2 {
        return Err(bad());
    }
    Ok((nu, nv))
}

/// A parameter line on which the chart fails to be an immersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularLocus {
    U(f64),
    V(f64),
}

impl SingularLocus {
    fn distance(&self, (u, v): (f64, f64)) -> f64 {
        match self {
            SingularLocus::U(c) => (u - c).abs(),
            SingularLocus::V(c) => (v - c).abs(),
        }
    }
}

/// A scalar field on the parameter domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    expr: Expr,
}

impl ScalarField {
    pub fn new(expr: Expr) -> Self {
        Self { expr }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::new(parse(text)?))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Expr::Const(c))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn value(&self, (u, v): (f64, f64)) -> Result<f64> {
        Ok(eval(&self.expr, u, v)?)
    }

    /// Jet of the field at `p`; finite-difference mode supports order ≤ 2.
    pub fn jet(&self, p: (f64, f64), order: usize, mode: DiffMode) -> Result<Jet> {
        match mode {
            DiffMode::Analytic => Ok(eval_jet(&self.expr, p, order)?),
            DiffMode::FiniteDifference { step } => {
                fd_jet(|u, v| Ok(eval(&self.expr, u, v)?), p, step, order)
            }
        }
    }
}

/// Induced Riemannian and extrinsic data at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryAtPoint {
    pub point: (f64, f64),
    pub g: Metric2,
    pub g_inv: Metric2,
    /// Second fundamental form `h_ij = ⟨r_ij, ξ⟩`.
    pub h: Metric2,
    /// Unit normal `ξ = r_u × r_v / |r_u × r_v|`.
    pub xi: [f64; 3],
    /// Shape operator `A = g⁻¹h` in the coordinate basis, `shape[i][j] = A^i_j`.
    pub shape: [[f64; 2]; 2],
    pub mean_curvature: f64,
    /// `|A|² = g^{kl} g^{ij} h_ki h_jl`.
    pub norm_a2: f64,
    pub christoffel: Christoffel,
}

impl GeometryAtPoint {
    pub fn apply_shape(&self, x: &TangentVector) -> TangentVector {
        let a = &self.shape;
        TangentVector::new(
            a[0][0] * x.a1 + a[0][1] * x.a2,
            a[1][0] * x.a1 + a[1][1] * x.a2,
        )
    }

    /// `trace(A·A)`; an alternative route to `|A|²` for self-adjoint `A`.
    pub fn norm_a2_from_shape(&self) -> f64 {
        let a = &self.shape;
        a[0][0] * a[0][0] + 2.0 * a[0][1] * a[1][0] + a[1][1] * a[1][1]
    }

    pub fn trace_shape(&self) -> f64 {
        self.shape[0][0] + self.shape[1][1]
    }
}

/// Geometry at a point together with the jets needed for second-order
/// intrinsic operators.
#[derive(Debug, Clone, Copy)]
pub struct LocalGeometry {
    pub at: GeometryAtPoint,
    pub metric: MetricJet,
    /// Order-2 jet of the mean curvature.
    pub mean_curvature: Jet,
}

struct Forms {
    metric: MetricJet,
    h: [Jet; 3],
    mean: Jet,
    xi: [f64; 3],
}

fn dot(a: &[Jet; 3], b: &[Jet; 3]) -> Jet {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[Jet; 3], b: &[Jet; 3]) -> [Jet; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn forms(r: &[Jet; 3], p: (f64, f64)) -> Result<Forms> {
    let ru = r.map(|x| x.d_u());
    let rv = r.map(|x| x.d_v());
    let ruu = ru.map(|x| x.d_u());
    let ruv = ru.map(|x| x.d_v());
    let rvv = rv.map(|x| x.d_v());

    let metric = MetricJet {
        g11: dot(&ru, &ru),
        g12: dot(&ru, &rv),
        g22: dot(&rv, &rv),
    };
    let n = cross(&ru, &rv);
    let nn = dot(&n, &n);
    let norm = nn.value().sqrt();
    if !(norm >= IMMERSION_EPS) {
        return Err(Error::DegenerateImmersion {
            u: p.0,
            v: p.1,
            norm,
        });
    }
    let inv_norm = nn.powf(-0.5);
    let h = [
        dot(&ruu, &n) * inv_norm,
        dot(&ruv, &n) * inv_norm,
        dot(&rvv, &n) * inv_norm,
    ];
    let (g11, g12, g22) = (metric.g11, metric.g12, metric.g22);
    let det = g11 * g22 - g12 * g12;
    let mean = (g22 * h[0] - 2.0 * g12 * h[1] + g11 * h[2]) / (2.0 * det);
    let xi = [
        n[0].value() / norm,
        n[1].value() / norm,
        n[2].value() / norm,
    ];
    Ok(Forms {
        metric,
        h,
        mean,
        xi,
    })
}

/// A parametric immersion `(u, v) ↦ (x, y, z)` into Euclidean 3-space.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceChart {
    name: String,
    coords: [Expr; 3],
    domain: Rect,
    singular: Vec<SingularLocus>,
    mode: DiffMode,
}

impl SurfaceChart {
    pub fn new(name: impl Into<String>, coords: [Expr; 3], domain: Rect) -> Self {
        Self {
            name: name.into(),
            coords,
            domain,
            singular: Vec::new(),
            mode: DiffMode::Analytic,
        }
    }

    /// Custom chart from three coordinate expressions.
    pub fn from_strs(x: &str, y: &str, z: &str, domain: Rect) -> Result<Self> {
        if !domain.is_valid() {
            return Err(Error::InvalidInput(format!("invalid domain {domain:?}")));
        }
        Ok(Self::new(
            "custom",
            [parse(x)?, parse(y)?, parse(z)?],
            domain,
        ))
    }

    pub fn with_mode(mut self, mode: DiffMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_singular(mut self, locus: SingularLocus) -> Self {
        self.singular.push(locus);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[Expr; 3] {
        &self.coords
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn mode(&self) -> DiffMode {
        self.mode
    }

    pub fn singular_loci(&self) -> &[SingularLocus] {
        &self.singular
    }

    pub fn check_point(&self, p: (f64, f64)) -> Result<()> {
        let ok = p.0.is_finite()
            && p.1.is_finite()
            && self.domain.contains(p)
            && self
                .singular
                .iter()
                .all(|s| s.distance(p) >= SINGULAR_MARGIN);
        if ok {
            Ok(())
        } else {
            Err(Error::OutsideDomain { u: p.0, v: p.1 })
        }
    }

    pub fn position(&self, (u, v): (f64, f64)) -> Result<[f64; 3]> {
        Ok([
            eval(&self.coords[0], u, v)?,
            eval(&self.coords[1], u, v)?,
            eval(&self.coords[2], u, v)?,
        ])
    }

    fn position_jets(&self, p: (f64, f64), order: usize) -> Result<[Jet; 3]> {
        match self.mode {
            DiffMode::Analytic => Ok([
                eval_jet(&self.coords[0], p, order)?,
                eval_jet(&self.coords[1], p, order)?,
                eval_jet(&self.coords[2], p, order)?,
            ]),
            DiffMode::FiniteDifference { step } => {
                let c = |i: usize| fd_jet(|u, v| Ok(eval(&self.coords[i], u, v)?), p, step, 2);
                Ok([c(0)?, c(1)?, c(2)?])
            }
        }
    }

    fn forms_at(&self, p: (f64, f64), order: usize) -> Result<Forms> {
        forms(&self.position_jets(p, order)?, p)
    }

    fn assemble(&self, p: (f64, f64), f: &Forms) -> Result<GeometryAtPoint> {
        let g = f.metric.at();
        if !g.is_positive_definite() {
            return Err(Error::DegenerateMetric {
                u: p.0,
                v: p.1,
                det: g.det(),
            });
        }
        let g_inv = g.inverse();
        let h = Metric2::new(f.h[0].value(), f.h[1].value(), f.h[2].value());
        let gi = g_inv.matrix();
        let hm = h.matrix();
        let mut shape = [[0.0; 2]; 2];
        for (i, row) in shape.iter_mut().enumerate() {
            for (j, a) in row.iter_mut().enumerate() {
                *a = gi[i][0] * hm[0][j] + gi[i][1] * hm[1][j];
            }
        }
        let mut norm_a2 = 0.0;
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        norm_a2 += gi[k][l] * gi[i][j] * hm[k][i] * hm[j][l];
                    }
                }
            }
        }
        Ok(GeometryAtPoint {
            point: p,
            g,
            g_inv,
            h,
            xi: f.xi,
            shape,
            mean_curvature: f.mean.value(),
            norm_a2,
            christoffel: f.metric.christoffel(),
        })
    }

    /// Fundamental forms, normal, shape operator, curvatures and
    /// Christoffel symbols at `p`.
    pub fn geometry_at(&self, p: (f64, f64)) -> Result<GeometryAtPoint> {
        self.check_point(p)?;
        let f = self.forms_at(p, 2)?;
        self.assemble(p, &f)
    }

    /// Geometry plus an order-2 jet of `H` and the metric jet at `p`.
    pub fn local_geometry(&self, p: (f64, f64)) -> Result<LocalGeometry> {
        self.check_point(p)?;
        match self.mode {
            DiffMode::Analytic => {
                let f = self.forms_at(p, 4)?;
                Ok(LocalGeometry {
                    at: self.assemble(p, &f)?,
                    metric: f.metric,
                    mean_curvature: f.mean,
                })
            }
            DiffMode::FiniteDifference { step } => {
                let f = self.forms_at(p, 2)?;
                // H carries the roundoff of a second difference already;
                // differencing it again on the same step would amplify that
                // by 1/step², so the outer stencil is wider.
                let mean = fd_jet(
                    |u, v| Ok(self.forms_at((u, v), 2)?.mean.value()),
                    p,
                    NESTED_FD_FACTOR * step,
                    2,
                )?;
                Ok(LocalGeometry {
                    at: self.assemble(p, &f)?,
                    metric: f.metric,
                    mean_curvature: mean,
                })
            }
        }
    }

    /// Metric jet of order ≥ 1 at `p`.
    pub fn metric_jet(&self, p: (f64, f64)) -> Result<MetricJet> {
        self.check_point(p)?;
        Ok(self.forms_at(p, 2)?.metric)
    }

    pub fn mean_curvature(&self, p: (f64, f64)) -> Result<f64> {
        self.check_point(p)?;
        Ok(self.forms_at(p, 2)?.mean.value())
    }
}
