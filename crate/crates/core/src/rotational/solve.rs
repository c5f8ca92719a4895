use super::{ode_rhs, LambdaOdeState, ProfilePoint, RotationalData, MIN_MEAN_CURVATURE};
use crate::error::{Error, Result};
use crate::expr::{eval_jet, Expr, Var};
use serde::Serialize;
use std::fmt;
use std::io::Write;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-6;
/// `k` or `H'` below this on every sample counts as identically zero.
const FLAT_TOL: f64 = 1e-9;
const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Feasibility {
    Feasible,
    TriviallyFeasible,
    Infeasible,
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Feasibility::Feasible => "FEASIBLE",
            Feasibility::TriviallyFeasible => "TRIVIALLY-FEASIBLE",
            Feasibility::Infeasible => "INFEASIBLE",
        })
    }
}

/// Which case of the first equation decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `H ≡ 0`: any λ works.
    Minimal,
    /// `k ≡ 0`: the first equation reads `HH' = 0`.
    FlatProfile,
    /// `H' ≡ 0`, `k ≠ 0`: the first equation forces `μ' = 0`.
    ConstantMean,
    /// `μ' = −(k+H)H'/(2kH)`.
    Generic,
    /// Free integration of the second equation.
    Integrated,
    /// A user-supplied `λ²(u)`.
    Given,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub u: f64,
    pub mu: f64,
    pub muprime: f64,
    pub res_eq1: f64,
    pub res_eq2: f64,
}

/// Outcome of a rotational run with its evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub feasibility: Feasibility,
    pub branch: Branch,
    pub reason: String,
    pub tolerance: f64,
    pub max_eq1: f64,
    pub max_eq2: f64,
    /// Smallest `|HH'|` on the interval (flat-profile branch).
    pub min_hh_prime: Option<f64>,
    /// Where the largest violation occurs.
    pub witness_u: Option<f64>,
    #[serde(skip)]
    pub rows: Vec<TrajectoryRow>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.feasibility != Feasibility::Infeasible
    }
}

fn step_count(u0: f64, u1: f64, step: f64) -> Result<usize> {
    if !(step > 0.0 && step.is_finite() && u0.is_finite() && u1.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "bad step {step} on [{u0}, {u1}]"
        )));
    }
    let n = ((u1 - u0).abs() / step).ceil();
    if n > MAX_STEPS as f64 {
        return Err(Error::StepUnderflow(format!(
            "step {step} needs {n} steps on [{u0}, {u1}]"
        )));
    }
    Ok(n as usize)
}

fn samples(u0: f64, u1: f64, step: f64) -> Result<Vec<f64>> {
    let n = step_count(u0, u1, step)?.max(1);
    Ok((0..=n)
        .map(|i| {
            if i == n {
                u1
            } else {
                u0 + (u1 - u0) * i as f64 / n as f64
            }
        })
        .collect())
}

/// Tracks `max |x|` and its location; NaN counts as infinitely bad.
#[derive(Default)]
struct MaxAbs {
    value: f64,
    at: Option<f64>,
}

impl MaxAbs {
    fn push(&mut self, u: f64, x: f64) {
        let a = if x.is_nan() { f64::INFINITY } else { x.abs() };
        if self.at.is_none() || a > self.value {
            self.value = a;
            self.at = Some(u);
        }
    }
}

/// Integrates the second equation from `(u0, μ0, μ'0)` to `u1` with fixed
/// step classical RK4, reporting the first-equation residual along the
/// way. Feasible iff `max |E1| ≤ tol`.
pub fn solve_lambda(
    data: &RotationalData,
    u0: f64,
    mu0: f64,
    muprime0: f64,
    u1: f64,
    step: f64,
    tol: f64,
) -> Result<Verdict> {
    let n = step_count(u0, u1, step)?;
    let h = if n == 0 { 0.0 } else { (u1 - u0) / n as f64 };
    let rhs = |u: f64, y: [f64; 2]| -> Result<[f64; 2]> {
        let (a, b) = ode_rhs(
            data,
            &LambdaOdeState {
                u,
                mu: y[0],
                muprime: y[1],
            },
        )?;
        Ok([a, b])
    };
    let axpy = |y: [f64; 2], s: f64, k: [f64; 2]| [y[0] + s * k[0], y[1] + s * k[1]];

    let mut rows = Vec::with_capacity(n + 1);
    let mut eq1 = MaxAbs::default();
    let mut eq2 = MaxAbs::default();
    let mut record = |u: f64, y: [f64; 2], rows: &mut Vec<TrajectoryRow>| -> Result<()> {
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Blowup { u });
        }
        let p = data.at(u)?;
        let [_, mupp] = rhs(u, y)?;
        let row = TrajectoryRow {
            u,
            mu: y[0],
            muprime: y[1],
            res_eq1: p.eq1(y[1]),
            res_eq2: p.eq2(y[1], mupp),
        };
        eq1.push(u, row.res_eq1);
        eq2.push(u, row.res_eq2);
        rows.push(row);
        Ok(())
    };

    let mut y = [mu0, muprime0];
    record(u0, y, &mut rows)?;
    for i in 0..n {
        let u = u0 + h * i as f64;
        let k1 = rhs(u, y)?;
        let k2 = rhs(u + 0.5 * h, axpy(y, 0.5 * h, k1))?;
        let k3 = rhs(u + 0.5 * h, axpy(y, 0.5 * h, k2))?;
        let k4 = rhs(u + h, axpy(y, h, k3))?;
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        let next = if i + 1 == n {
            u1
        } else {
            u0 + h * (i + 1) as f64
        };
        record(next, y, &mut rows)?;
    }

    let feasible = eq1.value <= tol;
    Ok(Verdict {
        feasibility: if feasible {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible
        },
        branch: Branch::Integrated,
        reason: format!(
            "second equation integrated; first equation {}",
            if feasible { "satisfied" } else { "violated" }
        ),
        tolerance: tol,
        max_eq1: eq1.value,
        max_eq2: eq2.value,
        min_hh_prime: None,
        witness_u: if feasible { None } else { eq1.at },
        rows,
    })
}

fn points(data: &RotationalData, us: &[f64]) -> Result<Vec<ProfilePoint>> {
    us.iter().map(|&u| data.at(u)).collect()
}

fn minimal_verdict(tol: f64, pts: &[ProfilePoint]) -> Verdict {
    Verdict {
        feasibility: Feasibility::TriviallyFeasible,
        branch: Branch::Minimal,
        reason: "H≡0 ⇒ minimal, every λ is admissible".to_string(),
        tolerance: tol,
        max_eq1: 0.0,
        max_eq2: 0.0,
        min_hh_prime: None,
        witness_u: None,
        rows: pts
            .iter()
            .map(|p| TrajectoryRow {
                u: p.u,
                mu: f64::NAN,
                muprime: f64::NAN,
                res_eq1: 0.0,
                res_eq2: 0.0,
            })
            .collect(),
    }
}

/// Nonminimal everywhere, or minimal everywhere (`Ok(true)`).
fn classify_mean(pts: &[ProfilePoint]) -> Result<bool> {
    if pts.iter().all(|p| p.h.abs() < MIN_MEAN_CURVATURE) {
        return Ok(true);
    }
    match pts.iter().find(|p| p.h.abs() < MIN_MEAN_CURVATURE) {
        Some(p) => Err(Error::VanishingMeanCurvature { u: p.u, h: p.h }),
        None => Ok(false),
    }
}

fn satisfied(ok: bool) -> &'static str {
    if ok {
        "satisfied"
    } else {
        "violated"
    }
}

/// Uses the first equation to determine `μ'` and checks the second.
///
/// Case analysis, in order: `H ≡ 0` (trivially feasible); `k ≡ 0`, where the
/// first equation reduces to `HH' = 0`; `H' ≡ 0` with `k ≠ 0`, which forces
/// `μ' = 0`; otherwise `μ' = −(k+H)H'/(2kH)`. The interval is sampled at
/// spacing `step`.
pub fn solve_constrained(
    data: &RotationalData,
    u0: f64,
    u1: f64,
    step: f64,
    tol: f64,
    mu0: f64,
) -> Result<Verdict> {
    let us = samples(u0, u1, step)?;
    let pts = points(data, &us)?;
    if classify_mean(&pts)? {
        return Ok(minimal_verdict(tol, &pts));
    }

    let flat = pts.iter().all(|p| p.k.abs() <= FLAT_TOL);
    if !flat {
        if let Some(p) = pts.iter().find(|p| p.k.abs() <= FLAT_TOL) {
            return Err(Error::InvalidInput(format!(
                "profile curvature vanishes at u = {} but not identically; split the interval",
                p.u
            )));
        }
    }

    if flat {
        // E1 = HH' whatever μ' is
        let mut worst = MaxAbs::default();
        let mut least = f64::INFINITY;
        let rows: Vec<_> = pts
            .iter()
            .map(|p| {
                let r = p.eq1(0.0);
                worst.push(p.u, r);
                least = least.min(r.abs());
                TrajectoryRow {
                    u: p.u,
                    mu: f64::NAN,
                    muprime: f64::NAN,
                    res_eq1: r,
                    res_eq2: f64::NAN,
                }
            })
            .collect();
        let ok = worst.value <= tol;
        return Ok(Verdict {
            feasibility: if ok {
                Feasibility::Feasible
            } else {
                Feasibility::Infeasible
            },
            branch: Branch::FlatProfile,
            reason: if ok {
                "k=0 ⇒ HH'=0 satisfied; μ' is left free by the first equation".to_string()
            } else {
                "k=0 ⇒ HH'=0 violated".to_string()
            },
            tolerance: tol,
            max_eq1: worst.value,
            max_eq2: f64::NAN,
            min_hh_prime: Some(least),
            witness_u: if ok { None } else { worst.at },
            rows,
        });
    }

    let constant_mean = pts.iter().all(|p| p.hp.abs() <= FLAT_TOL);
    let mut eq1 = MaxAbs::default();
    let mut eq2 = MaxAbs::default();
    let mut rows = Vec::with_capacity(pts.len());
    let mut mu = mu0;
    let mut prev: Option<(f64, f64)> = None;
    for p in &pts {
        let (mup, mupp) = if constant_mean {
            (0.0, 0.0)
        } else {
            let j = data.jets(p.u)?;
            let m = -(j.k + j.h) * j.h.d_u() / (j.k * j.h * 2.0);
            (m.value(), m.partial(1, 0))
        };
        if let Some((u, m)) = prev {
            mu += 0.5 * (p.u - u) * (m + mup);
        }
        prev = Some((p.u, mup));
        let row = TrajectoryRow {
            u: p.u,
            mu,
            muprime: mup,
            res_eq1: p.eq1(mup),
            res_eq2: p.eq2(mup, mupp),
        };
        eq1.push(p.u, row.res_eq1);
        eq2.push(p.u, row.res_eq2);
        rows.push(row);
    }
    let ok = eq2.value <= tol && eq1.value <= tol;
    let (branch, reason) = if constant_mean {
        (
            Branch::ConstantMean,
            format!("H'=0, k≠0 ⇒ μ'=0; second equation {}", satisfied(ok)),
        )
    } else {
        (
            Branch::Generic,
            format!("μ' = -(k+H)H'/(2kH); second equation {}", satisfied(ok)),
        )
    };
    Ok(Verdict {
        feasibility: if ok {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible
        },
        branch,
        reason,
        tolerance: tol,
        max_eq1: eq1.value,
        max_eq2: eq2.value,
        min_hh_prime: None,
        witness_u: if ok { None } else { eq2.at },
        rows,
    })
}

/// Checks a given `λ²(u)` against both equations on `[u0, u1]`.
pub fn check_lambda(
    data: &RotationalData,
    lambda2: &Expr,
    u0: f64,
    u1: f64,
    step: f64,
    tol: f64,
) -> Result<Verdict> {
    if lambda2.uses(Var::V) {
        return Err(Error::InvalidInput("λ² must depend on u only".into()));
    }
    let us = samples(u0, u1, step)?;
    let pts = points(data, &us)?;
    if classify_mean(&pts)? {
        return Ok(minimal_verdict(tol, &pts));
    }
    let mut eq1 = MaxAbs::default();
    let mut eq2 = MaxAbs::default();
    let mut rows = Vec::with_capacity(pts.len());
    for p in &pts {
        let l2 = eval_jet(lambda2, (p.u, 0.0), 2)?;
        if !(l2.value() > 0.0) {
            return Err(Error::NonPositiveLambda {
                u: p.u,
                v: 0.0,
                value: l2.value(),
            });
        }
        let mu = l2.ln() * 0.5;
        let (mup, mupp) = (mu.partial(1, 0), mu.partial(2, 0));
        let row = TrajectoryRow {
            u: p.u,
            mu: mu.value(),
            muprime: mup,
            res_eq1: p.eq1(mup),
            res_eq2: p.eq2(mup, mupp),
        };
        eq1.push(p.u, row.res_eq1);
        eq2.push(p.u, row.res_eq2);
        rows.push(row);
    }
    let ok = eq1.value <= tol && eq2.value <= tol;
    let witness = if eq1.value >= eq2.value {
        eq1.at
    } else {
        eq2.at
    };
    Ok(Verdict {
        feasibility: if ok {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible
        },
        branch: Branch::Given,
        reason: format!("given λ²: both equations {}", satisfied(ok)),
        tolerance: tol,
        max_eq1: eq1.value,
        max_eq2: eq2.value,
        min_hh_prime: None,
        witness_u: if ok { None } else { witness },
        rows,
    })
}

pub const TRAJECTORY_HEADER: &str = "u,mu,muprime,res_eq1,res_eq2";

pub fn write_trajectory_csv<W: Write>(out: &mut W, rows: &[TrajectoryRow]) -> std::io::Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.u, r.mu, r.muprime, r.res_eq1, r.res_eq2
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{rotational_data, ProfileCurve};
    use super::*;
    use crate::expr::parse;
    use crate::geom::Preset;

    fn data(p: Preset) -> RotationalData {
        rotational_data(&ProfileCurve::from_preset(&p).unwrap())
    }

    #[test]
    fn cylinder_equilibrium_trajectory() {
        let d = data(Preset::Cylinder { r: 1.0 });
        let v = solve_lambda(&d, 0.0, 0.0, 0.5, 1.0, 1e-3, DEFAULT_TOL).unwrap();
        let last = v.rows.last().unwrap();
        assert_eq!(last.u, 1.0);
        assert!((last.mu - 0.5).abs() <= 1e-12);
        assert!(((2.0 * last.mu).exp() - 1f64.exp()).abs() <= 1e-11);
        assert!(v.is_feasible());
        assert_eq!(v.rows.len(), 1001);
    }

    #[test]
    fn cylinder_nonequilibrium_matches_closed_form() {
        // μ'' = ½ − 2μ'², μ'(0) = 0  ⇒  μ = ½ ln cosh u
        let d = data(Preset::Cylinder { r: 1.0 });
        let v = solve_lambda(&d, 0.0, 0.0, 0.0, 1.0, 1e-2, DEFAULT_TOL).unwrap();
        let exact = 0.5 * 1f64.cosh().ln();
        assert!((v.rows.last().unwrap().mu - exact).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let d = data(Preset::Cylinder { r: 1.0 });
        let v = solve_lambda(&d, 1.0, 0.5, 0.5, 0.0, 1e-3, DEFAULT_TOL).unwrap();
        assert!(v.rows.last().unwrap().mu.abs() < 1e-12);
    }

    #[test]
    fn torus_free_integration_violates_first_equation() {
        let d = data(Preset::Torus {
            major: 2.0,
            minor: 1.0,
        });
        let v = solve_lambda(&d, -0.5, 0.0, 0.0, 0.5, 1e-3, DEFAULT_TOL).unwrap();
        assert_eq!(v.feasibility, Feasibility::Infeasible);
        assert!(v.witness_u.is_some());
    }

    #[test]
    fn cone_is_infeasible() {
        let d = data(Preset::Cone { alpha: 0.5 });
        let v = solve_constrained(&d, 1.0, 2.0, DEFAULT_STEP, DEFAULT_TOL, 0.0).unwrap();
        assert_eq!(v.feasibility, Feasibility::Infeasible);
        assert_eq!(v.branch, Branch::FlatProfile);
        assert_eq!(v.reason, "k=0 ⇒ HH'=0 violated");
        // |HH'| = cot²α/(4u³) is smallest at u = 2
        let c = 1.0 / 0.5f64.tan();
        assert!((v.min_hh_prime.unwrap() - c * c / 32.0).abs() < 1e-12);
        assert_eq!(v.witness_u, Some(1.0));
    }

    #[test]
    fn sphere_forces_constant_lambda_and_fails() {
        let d = data(Preset::Sphere { r: 1.0 });
        let v = solve_constrained(&d, -0.5, 0.5, 1e-2, DEFAULT_TOL, 0.0).unwrap();
        assert_eq!(v.branch, Branch::ConstantMean);
        assert_eq!(v.feasibility, Feasibility::Infeasible);
        assert!((v.max_eq2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cylinder_constrained_is_feasible() {
        let d = data(Preset::Cylinder { r: 1.0 });
        let v = solve_constrained(&d, 0.0, 1.0, 1e-2, DEFAULT_TOL, 0.0).unwrap();
        assert_eq!(v.branch, Branch::FlatProfile);
        assert!(v.is_feasible());
    }

    #[test]
    fn torus_generic_branch() {
        let d = data(Preset::Torus {
            major: 2.0,
            minor: 1.0,
        });
        let v = solve_constrained(&d, 0.2, 1.0, 1e-2, DEFAULT_TOL, 0.0).unwrap();
        assert_eq!(v.branch, Branch::Generic);
        assert!(v.max_eq1 < 1e-12);
        assert_eq!(v.feasibility, Feasibility::Infeasible);
    }

    #[test]
    fn catenoid_is_trivially_feasible() {
        let d = data(Preset::Catenoid);
        let v = solve_constrained(&d, -1.0, 1.0, 1e-2, DEFAULT_TOL, 0.0).unwrap();
        assert_eq!(v.feasibility, Feasibility::TriviallyFeasible);
        let v = check_lambda(&d, &parse("1+u^2").unwrap(), -1.0, 1.0, 1e-2, DEFAULT_TOL).unwrap();
        assert_eq!(v.branch, Branch::Minimal);
    }

    #[test]
    fn given_lambda() {
        let d = data(Preset::Cylinder { r: 1.0 });
        let v = check_lambda(&d, &parse("exp(u)").unwrap(), 0.0, 1.0, 1e-2, DEFAULT_TOL).unwrap();
        assert!(v.is_feasible() && v.max_eq2 < 1e-14);
        let v = check_lambda(&d, &parse("1").unwrap(), 0.0, 1.0, 1e-2, DEFAULT_TOL).unwrap();
        assert!(!v.is_feasible());
        assert!((v.max_eq2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn step_validation() {
        let d = data(Preset::Cylinder { r: 1.0 });
        assert!(solve_lambda(&d, 0.0, 0.0, 0.5, 1.0, 0.0, 1e-6).is_err());
        assert!(matches!(
            solve_lambda(&d, 0.0, 0.0, 0.5, 1.0, 1e-12, 1e-6),
            Err(Error::StepUnderflow(_))
        ));
    }

    #[test]
    fn trajectory_csv() {
        let d = data(Preset::Cylinder { r: 1.0 });
        let v = solve_lambda(&d, 0.0, 0.0, 0.5, 1.0, 0.25, DEFAULT_TOL).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &v.rows).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().next(), Some(TRAJECTORY_HEADER));
        assert_eq!(s.lines().count(), 6);
    }
}
