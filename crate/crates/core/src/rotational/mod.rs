//! Surfaces of revolution `r(u,v) = (f(u) cos v, f(u) sin v, g(u))` with an
//! arclength profile. For `λ = λ(u)` and `μ = ln λ` the biharmonic conformal
//! system collapses to
//!
//! ```text
//! E1 = kH' + HH' + 2kHμ'                                        = 0
//! E2 = 2μ'' + 2[ln(fH²)]'μ' + 4μ'² − (k² + (g'/f)² − H''/H − (f'/f)(H'/H)) = 0
//! ```
//!
//! with `k = −f''g' + g''f'` and `H = (k + g'/f)/2`. On the full chart the
//! normal residual equals `H·E2` and the tangential residual is `E1 ∂_u`.

mod profile;
mod solve;

pub use profile::{ProfileCurve, ARCLENGTH_TOL, AXIS_MIN};
pub use solve::{
    check_lambda, solve_constrained, solve_lambda, write_trajectory_csv, Branch, Feasibility,
    TrajectoryRow, Verdict, DEFAULT_STEP, DEFAULT_TOL, TRAJECTORY_HEADER,
};

use crate::ambient::AmbientModel;
use crate::error::{Error, Result};
use crate::expr::{Expr, Jet, Var};
use crate::geom::{DiffMode, ScalarField};
use crate::residual::{biharmonic_conformal_residual, ConformalFactor};
use serde::Serialize;

/// `|H|` below this is treated as vanishing.
pub const MIN_MEAN_CURVATURE: f64 = 1e-10;

/// Profile quantities at one value of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub u: f64,
    pub f: f64,
    pub fp: f64,
    pub gp: f64,
    /// Curvature of the profile.
    pub k: f64,
    pub h: f64,
    pub hp: f64,
    pub hpp: f64,
    /// `|A|² = k² + (g'/f)²`.
    pub norm_a2: f64,
}

impl ProfilePoint {
    /// `[ln(fH²)]' = f'/f + 2H'/H`.
    pub fn ln_fh2_prime(&self) -> f64 {
        self.fp / self.f + 2.0 * self.hp / self.h
    }

    /// Right-hand side of the second equation,
    /// `k² + (g'/f)² − H''/H − (f'/f)(H'/H)`.
    pub fn source(&self) -> f64 {
        self.norm_a2 - self.hpp / self.h - (self.fp / self.f) * (self.hp / self.h)
    }

    /// First equation `kH' + HH' + 2kHμ'`.
    pub fn eq1(&self, mup: f64) -> f64 {
        self.k * self.hp + self.h * self.hp + 2.0 * self.k * self.h * mup
    }

    /// Second equation, left minus right.
    pub fn eq2(&self, mup: f64, mupp: f64) -> f64 {
        2.0 * mupp + 2.0 * self.ln_fh2_prime() * mup + 4.0 * mup * mup - self.source()
    }

    fn require_nonminimal(&self) -> Result<()> {
        if self.h.abs() < MIN_MEAN_CURVATURE {
            return Err(Error::VanishingMeanCurvature {
                u: self.u,
                h: self.h,
            });
        }
        Ok(())
    }
}

/// `k` and `H` of a profile as order-2 jets in `u` (at `v = 0`).
#[derive(Debug, Clone, Copy)]
pub struct ProfileJets {
    pub f: Jet,
    pub fp: Jet,
    pub gp: Jet,
    pub k: Jet,
    pub h: Jet,
}

/// Curvature and mean-curvature data of a rotational surface.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationalData {
    profile: ProfileCurve,
}

pub fn rotational_data(profile: &ProfileCurve) -> RotationalData {
    RotationalData {
        profile: profile.clone(),
    }
}

impl RotationalData {
    pub fn profile(&self) -> &ProfileCurve {
        &self.profile
    }

    pub fn jets(&self, u: f64) -> Result<ProfileJets> {
        let f = self.profile.f_jet(u, 4)?;
        let g = self.profile.g_jet(u, 4)?;
        let (fp, gp) = (f.d_u(), g.d_u());
        let (fpp, gpp) = (fp.d_u(), gp.d_u());
        let k = gpp * fp - fpp * gp;
        let h = (k + gp / f) * 0.5;
        Ok(ProfileJets { f, fp, gp, k, h })
    }

    pub fn at(&self, u: f64) -> Result<ProfilePoint> {
        let j = self.jets(u)?;
        let (f, gp) = (j.f.value(), j.gp.value());
        let k = j.k.value();
        Ok(ProfilePoint {
            u,
            f,
            fp: j.fp.value(),
            gp,
            k,
            h: j.h.value(),
            hp: j.h.partial(1, 0),
            hpp: j.h.partial(2, 0),
            norm_a2: k * k + (gp / f) * (gp / f),
        })
    }

    pub fn curvature(&self, u: f64) -> Result<f64> {
        Ok(self.at(u)?.k)
    }

    pub fn mean_curvature(&self, u: f64) -> Result<f64> {
        Ok(self.at(u)?.h)
    }
}

/// `(ln λ, (ln λ)')` along the profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaOdeState {
    pub u: f64,
    pub mu: f64,
    pub muprime: f64,
}

/// `(μ', μ'')` from the second equation solved for `μ''`.
pub fn ode_rhs(data: &RotationalData, state: &LambdaOdeState) -> Result<(f64, f64)> {
    let p = data.at(state.u)?;
    p.require_nonminimal()?;
    let m = state.muprime;
    let mupp = 0.5 * p.source() - p.ln_fh2_prime() * m - 2.0 * m * m;
    Ok((m, mupp))
}

fn require_u_only(lambda2: &Expr) -> Result<()> {
    if lambda2.uses(Var::V) {
        return Err(Error::InvalidInput("λ² must depend on u only".into()));
    }
    Ok(())
}

/// Evaluates the full chart residual and the reduced pair `(H·E2, E1)` for
/// `λ² = λ²(u)` at `n` equally spaced `u` values (at a fixed `v`), and
/// returns the largest discrepancy between the two formulations. `mode`
/// applies to the full chart side; the reduced side always uses jets.
pub fn reduction_oracle(
    profile: &ProfileCurve,
    lambda2: &Expr,
    n: usize,
    mode: DiffMode,
) -> Result<f64> {
    require_u_only(lambda2)?;
    if n < 2 {
        return Err(Error::InvalidInput("oracle needs at least 2 points".into()));
    }
    let chart = profile.chart().with_mode(mode);
    let data = rotational_data(profile);
    let lambda = ConformalFactor::new(ScalarField::new(lambda2.clone()));
    let (u0, u1) = profile.interval();
    let v = 0.7;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let u = u0 + (u1 - u0) * i as f64 / (n - 1) as f64;
        let full =
            biharmonic_conformal_residual(&chart, &lambda, &AmbientModel::Euclidean, (u, v))?;
        let p = data.at(u)?;
        p.require_nonminimal()?;
        let mu = lambda.lambda2_jet((u, 0.0), 2, DiffMode::Analytic)?.ln() * 0.5;
        let (mup, mupp) = (mu.partial(1, 0), mu.partial(2, 0));
        let d = [
            full.normal - p.h * p.eq2(mup, mupp),
            full.tangential.a1 - p.eq1(mup),
            full.tangential.a2,
        ];
        for x in d {
            worst = worst.max(if x.is_nan() { f64::INFINITY } else { x.abs() });
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::geom::Preset;

    fn data(p: Preset) -> RotationalData {
        rotational_data(&ProfileCurve::from_preset(&p).unwrap())
    }

    #[test]
    fn preset_curvatures() {
        let cyl = data(Preset::Cylinder { r: 2.0 });
        let p = cyl.at(0.3).unwrap();
        assert_eq!(p.k, 0.0);
        assert!((p.h - 0.25).abs() < 1e-15);

        let s = data(Preset::Sphere { r: 1.0 });
        for u in [-0.8, 0.0, 0.5] {
            let p = s.at(u).unwrap();
            assert!((p.k - 1.0).abs() < 1e-14 && (p.h - 1.0).abs() < 1e-14);
            assert!(p.hp.abs() < 1e-14);
        }

        let alpha: f64 = 0.5;
        let cone = data(Preset::Cone { alpha });
        let p = cone.at(1.5).unwrap();
        assert_eq!(p.k, 0.0);
        assert!((p.h - 1.0 / (alpha.tan() * 3.0)).abs() < 1e-14);
        assert!((p.hp + 1.0 / (alpha.tan() * 2.0 * 1.5 * 1.5)).abs() < 1e-14);
    }

    #[test]
    fn mean_curvature_agrees_with_chart() {
        for preset in [
            Preset::Torus {
                major: 2.0,
                minor: 1.0,
            },
            Preset::Catenoid,
            Preset::Cone { alpha: 0.3 },
        ] {
            let profile = ProfileCurve::from_preset(&preset).unwrap();
            let d = rotational_data(&profile);
            let chart = profile.chart();
            let (u0, u1) = profile.interval();
            for i in 0..7 {
                let u = u0 + (u1 - u0) * i as f64 / 6.0;
                let a = d.mean_curvature(u).unwrap();
                let b = chart.geometry_at((u, 0.4)).unwrap().mean_curvature;
                assert!((a - b).abs() <= 1e-12, "{preset} u={u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn ode_rhs_cylinder() {
        let d = data(Preset::Cylinder { r: 1.0 });
        let s = |m| LambdaOdeState {
            u: 0.2,
            mu: 0.0,
            muprime: m,
        };
        assert_eq!(ode_rhs(&d, &s(0.5)).unwrap(), (0.5, 0.0));
        assert_eq!(ode_rhs(&d, &s(0.0)).unwrap(), (0.0, 0.5));
        // first equation is identically satisfied on the cylinder
        let p = d.at(0.2).unwrap();
        assert_eq!(p.eq1(0.37), 0.0);
    }

    #[test]
    fn ode_rhs_rejects_minimal() {
        let d = data(Preset::Catenoid);
        let s = LambdaOdeState {
            u: 0.1,
            mu: 0.0,
            muprime: 0.0,
        };
        assert!(matches!(
            ode_rhs(&d, &s),
            Err(Error::VanishingMeanCurvature { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let cyl = ProfileCurve::from_preset(&Preset::Cylinder { r: 1.0 }).unwrap();
        assert!(
            reduction_oracle(&cyl, &parse("exp(u)").unwrap(), 50, DiffMode::Analytic).unwrap()
                <= 1e-12
        );
        let torus = ProfileCurve::from_preset(&Preset::Torus {
            major: 2.0,
            minor: 1.0,
        })
        .unwrap();
        assert!(
            reduction_oracle(&torus, &parse("1").unwrap(), 50, DiffMode::Analytic).unwrap()
                <= 1e-10
        );
        let cone = ProfileCurve::from_preset(&Preset::Cone { alpha: 0.5 }).unwrap();
        assert!(
            reduction_oracle(&cone, &parse("u^2").unwrap(), 50, DiffMode::Analytic).unwrap()
                <= 1e-10
        );
        assert!(reduction_oracle(&cone, &parse("u+v").unwrap(), 50, DiffMode::Analytic).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(
            ProfileCurve::parse("u", "u", (1.0, 2.0)),
            Err(Error::NotArclength { .. })
        ));
        assert!(matches!(
            ProfileCurve::parse("u", "0", (-1.0, 1.0)),
            Err(Error::AxisContact { .. })
        ));
        assert!(ProfileCurve::parse("1", "u", (2.0, 1.0)).is_err());
        assert!(ProfileCurve::parse("1", "v", (0.0, 1.0)).is_err());
    }
}
