//! Constant mean curvature machinery: isothermal CMC data and the
//! sinh-Gordon equation, the admissibility case analysis for biharmonic
//! conformal immersions of CMC surfaces, and the vertical cylinders of
//! `S² × ℝ` with their conformal-factor ODE.
//!
//! Isothermal CMC data `(H, w)` describe a non-umbilic CMC surface with
//! `I = e^{2w}/(2H)(du² + dv²)` and `II = e^w cosh w du² + e^w sinh w dv²`.

use crate::ambient::{ricci_data, AmbientModel, SurfaceContext};
use crate::error::{Error, Result};
use crate::expr::{eval_jet, BinaryOp, Expr, Jet, UnaryOp};
use crate::geom::{Grid, ScalarField};
use serde::Serialize;
use std::fmt;

/// `|w|` above this anywhere rules out the cylinder case.
pub const ADMISSIBILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct IsothermalCmcData {
    h: f64,
    w: ScalarField,
}

impl IsothermalCmcData {
    pub fn new(h: f64, w: ScalarField) -> Result<Self> {
        if !(h.is_finite() && h != 0.0) {
            return Err(Error::InvalidInput(format!(
                "CMC data needs a nonzero mean curvature, got {h}"
            )));
        }
        Ok(Self { h, w })
    }

    pub fn mean_curvature(&self) -> f64 {
        self.h
    }

    pub fn w(&self) -> &ScalarField {
        &self.w
    }

    fn w_jet(&self, (u, v): (f64, f64), order: usize) -> Result<Jet> {
        Ok(eval_jet(self.w.expr(), (u, v), order)?)
    }

    /// Conformal factor `e^{2w}/(2H)` of the first fundamental form.
    pub fn metric_factor(&self, p: (f64, f64)) -> Result<f64> {
        Ok((2.0 * self.w.value(p)?).exp() / (2.0 * self.h))
    }
}

/// `w_uu + w_vv + 2H cosh w sinh w`.
pub fn sinh_gordon_residual(data: &IsothermalCmcData, p: (f64, f64)) -> Result<f64> {
    let w = data.w_jet(p, 2)?;
    let x = w.value();
    Ok(w.partial(2, 0) + w.partial(0, 2) + 2.0 * data.h * x.cosh() * x.sinh())
}

/// Diagonal entries `(2He^{−w} cosh w, 2He^{−w} sinh w)` of the shape
/// operator in the isothermal coordinate basis.
pub fn cmc_shape_data(data: &IsothermalCmcData, p: (f64, f64)) -> Result<(f64, f64)> {
    let w = data.w.value(p)?;
    let s = 2.0 * data.h * (-w).exp();
    Ok((s * w.cosh(), s * w.sinh()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CmcClass {
    /// `w ≡ 0`: the surface is a piece of a circular cylinder, and
    /// `λ` may vary along the ruling direction.
    Cylinder,
    /// `sinh w ≠ 0` somewhere: `λ` is forced constant, which is impossible
    /// for `H ≠ 0`.
    Infeasible,
}

impl fmt::Display for CmcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmcClass::Cylinder => "CYLINDER",
            CmcClass::Infeasible => "INFEASIBLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityVerdict {
    pub class: CmcClass,
    pub max_abs_w: f64,
    /// Point where `|w|` is largest.
    pub witness: (f64, f64),
    pub tolerance: f64,
    pub reason: String,
}

/// The tangential equation for CMC data reads
/// `4H²e^{−3w}(∂₁ ln λ cosh w ∂₁ + ∂₂ ln λ sinh w ∂₂) = 0`. Since
/// `cosh w > 0`, `∂₁ ln λ ≡ 0`; wherever `sinh w ≠ 0` also `∂₂ ln λ = 0`.
/// The sample decides between the cylinder case `w ≡ 0` and the rest.
pub fn cmc_admissibility(
    data: &IsothermalCmcData,
    points: &[(f64, f64)],
) -> Result<AdmissibilityVerdict> {
    if points.is_empty() {
        return Err(Error::InvalidInput(
            "admissibility needs a nonempty grid".into(),
        ));
    }
    let mut max_abs_w = -1.0;
    let mut witness = points[0];
    for &p in points {
        let w = data.w.value(p)?.abs();
        let w = if w.is_nan() { f64::INFINITY } else { w };
        if w > max_abs_w {
            max_abs_w = w;
            witness = p;
        }
    }
    let (class, reason) = if max_abs_w <= ADMISSIBILITY_TOL {
        (
            CmcClass::Cylinder,
            "w≡0 ⇒ circular cylinder; ∂₁ln λ=0 leaves λ free along the rulings".to_string(),
        )
    } else {
        (
            CmcClass::Infeasible,
            "sinh w≠0 ⇒ ∂₁ln λ=∂₂ln λ=0, λ constant, contradicting H≠0".to_string(),
        )
    };
    Ok(AdmissibilityVerdict {
        class,
        max_abs_w,
        witness,
        tolerance: ADMISSIBILITY_TOL,
        reason,
    })
}

pub fn cmc_admissibility_on_grid(
    data: &IsothermalCmcData,
    grid: &Grid,
) -> Result<AdmissibilityVerdict> {
    cmc_admissibility(data, &grid.points())
}

/// Vertical cylinder `α × ℝ ⊂ S² × ℝ` over a circle of geodesic
/// curvature `k > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerticalCylinderS2R {
    k: f64,
}

impl VerticalCylinderS2R {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 1.0 && k.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "vertical cylinder needs k > 1, got {k}"
            )));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `R = 1/√(k² − 1)`.
    pub fn radius(&self) -> f64 {
        1.0 / (self.k * self.k - 1.0).sqrt()
    }

    pub fn mean_curvature(&self) -> f64 {
        0.5 * self.k
    }

    pub fn norm_a2(&self) -> f64 {
        self.k * self.k
    }

    fn ric_normal(&self) -> Result<f64> {
        Ok(ricci_data(
            &AmbientModel::ProductS2R,
            &SurfaceContext::VerticalCylinder { k: self.k },
        )?
        .ric_normal)
    }
}

/// `λ²` and its `z`-derivatives. The height `z` is the chart variable `v`.
fn lambda2_jet(lambda2: &Expr, z: f64) -> Result<Jet> {
    let y = eval_jet(lambda2, (0.0, z), 2)?;
    if !(y.value() > 0.0) {
        return Err(Error::NonPositiveLambda {
            u: 0.0,
            v: z,
            value: y.value(),
        });
    }
    Ok(y)
}

/// Residuals `(C, D)` of the reduced condition at height `z`:
/// `C = −(|A|² − Ric(ξ,ξ)) + (λ²)''/λ²`, which equals
/// `−(k² − 1) + 2[μ'' + 2μ'²]` for `μ = ln λ`, and the linear ODE residual
/// `D = (λ²)'' − λ²/R²`.
///
/// `C` is formed from `(λ²)''/λ²` rather than from `μ`: near zeros of `λ²`
/// the `μ` route cancels two large terms.
pub fn s2xr_condition_residual(
    cyl: &VerticalCylinderS2R,
    lambda2: &Expr,
    z: f64,
) -> Result<(f64, f64)> {
    let y = lambda2_jet(lambda2, z)?;
    let (y0, ypp) = (y.value(), y.partial(0, 2));
    let r = cyl.radius();
    let cd = -(cyl.norm_a2() - cyl.ric_normal()?) + ypp / y0;
    Ok((cd, ypp - y0 / (r * r)))
}

/// The same condition residual evaluated through `μ = ½ ln λ²`.
pub fn s2xr_condition_via_log(cyl: &VerticalCylinderS2R, lambda2: &Expr, z: f64) -> Result<f64> {
    let mu = lambda2_jet(lambda2, z)?.ln() * 0.5;
    let (mp, mpp) = (mu.partial(0, 1), mu.partial(0, 2));
    Ok(-(cyl.norm_a2() - cyl.ric_normal()?) + 2.0 * (mpp + 2.0 * mp * mp))
}

/// First-integral residual `(λ²)'² − (λ²)²/R² − C₁`.
pub fn s2xr_first_integral_check(
    cyl: &VerticalCylinderS2R,
    lambda2: &Expr,
    z: f64,
    c1: f64,
) -> Result<f64> {
    let y = lambda2_jet(lambda2, z)?;
    let (y0, yp) = (y.value(), y.partial(0, 1));
    let r = cyl.radius();
    Ok(yp * yp - y0 * y0 / (r * r) - c1)
}

/// `λ² = (C₂e^{±z/R} − C₁C₂⁻¹R²e^{∓z/R})/2` as an expression in `v`.
pub fn s2xr_closed_form(cyl: &VerticalCylinderS2R, c1: f64, c2: f64, plus: bool) -> Result<Expr> {
    if !(c2 != 0.0 && c2.is_finite() && c1.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "closed form needs C₂ ≠ 0, got C₂ = {c2}"
        )));
    }
    let r = cyl.radius();
    let s = if plus { 1.0 } else { -1.0 };
    let exp = |a: f64| {
        Expr::unary(
            UnaryOp::Exp,
            Expr::binary(BinaryOp::Mul, Expr::Const(a), Expr::v()),
        )
    };
    let first = Expr::binary(BinaryOp::Mul, Expr::Const(c2), exp(s / r));
    let second = Expr::binary(BinaryOp::Mul, Expr::Const(c1 / c2 * r * r), exp(-s / r));
    Ok(Expr::binary(
        BinaryOp::Div,
        Expr::binary(BinaryOp::Sub, first, second),
        Expr::Const(2.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::SQRT_2;

    fn data(h: f64, w: &str) -> IsothermalCmcData {
        IsothermalCmcData::new(h, ScalarField::parse(w).unwrap()).unwrap()
    }

    #[test]
    fn sinh_gordon_examples() {
        assert_eq!(
            sinh_gordon_residual(&data(0.7, "0"), (0.3, 0.1)).unwrap(),
            0.0
        );
        let c: f64 = 0.4;
        let r = sinh_gordon_residual(&data(1.0, "0.4"), (0.0, 0.0)).unwrap();
        assert!((r - (2.0 * c).sinh()).abs() < 1e-15);
        let d = data(1.0, "0.1*u");
        assert_eq!(sinh_gordon_residual(&d, (0.0, 0.0)).unwrap(), 0.0);
        let r = sinh_gordon_residual(&d, (1.0, 0.0)).unwrap();
        assert!((r - 0.2f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn shape_data() {
        assert_eq!(
            cmc_shape_data(&data(0.5, "0"), (0.0, 0.0)).unwrap(),
            (1.0, 0.0)
        );
        let (a, b) = cmc_shape_data(&data(1.0, "0.5"), (0.0, 0.0)).unwrap();
        assert!((a - 1.367879441171442).abs() < 1e-12);
        assert!((b - 0.6321205588285577).abs() < 1e-12);
        assert!((a + b - 2.0).abs() < 1e-15);
    }

    #[test]
    fn admissibility() {
        let grid = Grid::new(crate::geom::Rect::new(0.0, 3.0, 0.0, 3.0), 20, 20).unwrap();
        let v = cmc_admissibility_on_grid(&data(0.5, "0"), &grid).unwrap();
        assert_eq!(v.class, CmcClass::Cylinder);
        let v = cmc_admissibility_on_grid(&data(1.0, "0.3*sin(u)"), &grid).unwrap();
        assert_eq!(v.class, CmcClass::Infeasible);
        assert!(v.witness.0.sin().abs() > 0.99);
        let v = cmc_admissibility_on_grid(&data(1.0, "0.2"), &grid).unwrap();
        assert_eq!(v.class, CmcClass::Infeasible);
        assert!(cmc_admissibility(&data(1.0, "0"), &[]).is_err());
        assert!(IsothermalCmcData::new(0.0, ScalarField::constant(0.0)).is_err());
    }

    #[test]
    fn metric_factor_of_cylinder_data() {
        // w = 0, H = 1/(2R) gives I = R(du² + dv²)
        for r in [1.0, 2.5] {
            let d = data(0.5 / r, "0");
            assert!((d.metric_factor((0.4, 0.2)).unwrap() - r).abs() < 1e-15);
        }
    }

    #[test]
    fn vertical_cylinder() {
        let c = VerticalCylinderS2R::new(SQRT_2).unwrap();
        assert!((c.radius() - 1.0).abs() < 1e-15);
        assert!(VerticalCylinderS2R::new(1.0).is_err());
        let one = parse("1").unwrap();
        let (cd, ode) = s2xr_condition_residual(&c, &one, 0.3).unwrap();
        assert!((cd + 1.0).abs() < 1e-15 && (ode + 1.0).abs() < 1e-15);
        let ch = parse("cosh(v)").unwrap();
        for z in [0.0, 0.5, 1.0] {
            let (cd, ode) = s2xr_condition_residual(&c, &ch, z).unwrap();
            assert!(cd.abs() < 1e-15 && ode.abs() < 1e-15);
            let fi = s2xr_first_integral_check(&c, &ch, z, -1.0).unwrap();
            assert!(fi.abs() < 1e-14);
        }
        let e = parse("exp(v)").unwrap();
        assert!((s2xr_first_integral_check(&c, &e, 0.4, 0.3).unwrap() + 0.3).abs() < 1e-14);
    }

    #[test]
    fn closed_form_matches_text() {
        let c = VerticalCylinderS2R::new(SQRT_2).unwrap();
        let e = s2xr_closed_form(&c, 1.0, 2.0, true).unwrap();
        let text = parse("(2*exp(v)-0.5*exp(-v))/2").unwrap();
        for z in [0.0, 0.3, 1.0] {
            let a = crate::expr::eval(&e, 0.0, z).unwrap();
            let b = crate::expr::eval(&text, 0.0, z).unwrap();
            assert!((a - b).abs() < 1e-14);
            let (cd, ode) = s2xr_condition_residual(&c, &e, z).unwrap();
            assert!(cd.abs() < 1e-14 && ode.abs() < 1e-14);
            assert!(s2xr_first_integral_check(&c, &e, z, 1.0).unwrap().abs() < 1e-13);
            assert!(s2xr_condition_via_log(&c, &e, z).unwrap().abs() < 1e-13);
        }
        assert!(s2xr_closed_form(&c, 1.0, 0.0, true).is_err());
    }

    #[test]
    fn nonpositive_lambda() {
        let c = VerticalCylinderS2R::new(2.0).unwrap();
        assert!(matches!(
            s2xr_condition_residual(&c, &parse("v-1").unwrap(), 0.5),
            Err(Error::NonPositiveLambda { .. })
        ));
    }
}
