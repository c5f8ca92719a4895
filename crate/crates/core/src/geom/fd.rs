//! Central finite differences with one Richardson extrapolation level,
//! packaged as jets so the analytic pipeline can consume them unchanged.

use crate::error::{Error, Result};
use crate::expr::Jet;

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Order-≤2 jet of `f` at `p` from samples at offsets `±h`, `±2h`.
pub fn fd_jet(
    f: impl Fn(f64, f64) -> Result<f64>,
    p: (f64, f64),
    step: f64,
    order: usize,
) -> Result<Jet> {
    if order > 2 {
        return Err(Error::InvalidInput(format!(
            "finite-difference jets support order ≤ 2, requested {order}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "invalid finite-difference step {step}"
        )));
    }
    let (u, v) = p;
    let f0 = f(u, v)?;
    if order == 0 {
        return Ok(Jet::constant(p, 0, f0));
    }

    let mut first = [0.0; 2];
    let mut second = [0.0; 2];
    for (axis, (d1, d2)) in first.iter_mut().zip(second.iter_mut()).enumerate() {
        let at = |s: f64| {
            if axis == 0 {
                f(u + s, v)
            } else {
                f(u, v + s)
            }
        };
        let (p1, m1, p2, m2) = (at(step)?, at(-step)?, at(2.0 * step)?, at(-2.0 * step)?);
        *d1 = richardson((p2 - m2) / (4.0 * step), (p1 - m1) / (2.0 * step));
        *d2 = richardson(
            (p2 - 2.0 * f0 + m2) / (4.0 * step * step),
            (p1 - 2.0 * f0 + m1) / (step * step),
        );
    }
    let mixed = if order == 2 {
        let cross = |s: f64| -> Result<f64> {
            Ok(
                (f(u + s, v + s)? - f(u + s, v - s)? - f(u - s, v + s)? + f(u - s, v - s)?)
                    / (4.0 * s * s),
            )
        };
        richardson(cross(2.0 * step)?, cross(step)?)
    } else {
        0.0
    };

    Ok(Jet::from_partials(p, order, |a, b| match (a, b) {
        (0, 0) => f0,
        (1, 0) => first[0],
        (0, 1) => first[1],
        (2, 0) => second[0],
        (0, 2) => second[1],
        (1, 1) => mixed,
        _ => unreachable!(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_smooth_derivatives() {
        let f = |u: f64, v: f64| Ok((0.7 * u).sin() * (0.3 * v).exp());
        let j = fd_jet(f, (0.4, 0.9), 1e-3, 2).unwrap();
        let (u, v) = (0.4f64, 0.9f64);
        let e = (0.3 * v).exp();
        assert!((j.partial(1, 0) - 0.7 * (0.7 * u).cos() * e).abs() < 1e-10);
        assert!((j.partial(0, 1) - 0.3 * (0.7 * u).sin() * e).abs() < 1e-10);
        assert!((j.partial(2, 0) + 0.49 * (0.7 * u).sin() * e).abs() < 1e-8);
        assert!((j.partial(1, 1) - 0.21 * (0.7 * u).cos() * e).abs() < 1e-8);
        assert!((j.partial(0, 2) - 0.09 * (0.7 * u).sin() * e).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_step_and_order() {
        let f = |_: f64, _: f64| Ok(1.0);
        assert!(fd_jet(f, (0.0, 0.0), 0.0, 1).is_err());
        assert!(fd_jet(f, (0.0, 0.0), 1e-3, 3).is_err());
    }
}
