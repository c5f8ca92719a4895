use crate::error::{Error, Result};
use crate::geom::Rect;

pub const DEFAULT_QUADRATURE_ORDER: usize = 16;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 256 {
            return Err(Error::InvalidInput(format!(
                "quadrature order {n} out of range 1..=256"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Newton iteration on P_n from the Chebyshev-like initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate_1d(
        &self,
        a: f64,
        b: f64,
        mut f: impl FnMut(f64) -> Result<f64>,
    ) -> Result<f64> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x)?;
        }
        Ok(s * half)
    }

    /// Tensor-product rule over a parameter rectangle.
    pub fn integrate_rect(
        &self,
        region: &Rect,
        mut f: impl FnMut(f64, f64) -> Result<f64>,
    ) -> Result<f64> {
        let (um, uh) = (0.5 * (region.u0 + region.u1), 0.5 * (region.u1 - region.u0));
        let (vm, vh) = (0.5 * (region.v0 + region.v1), 0.5 * (region.v1 - region.v0));
        let mut s = 0.0;
        for (x, wx) in self.nodes.iter().zip(&self.weights) {
            for (y, wy) in self.nodes.iter().zip(&self.weights) {
                s += wx * wy * f(um + uh * x, vm + vh * y)?;
            }
        }
        Ok(s * uh * vh)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_low_order_rules() {
        let r = GaussLegendre::new(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[1] - x).abs() < 1e-15 && (r.nodes()[0] + x).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
        let r = GaussLegendre::new(3).unwrap();
        assert!(r.nodes()[1].abs() < 1e-15);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in [1, 4, 9, 16] {
            let r = GaussLegendre::new(n).unwrap();
            let deg = 2 * n - 1;
            let got = r
                .integrate_1d(0.0, 1.0, |x| Ok(x.powi(deg as i32)))
                .unwrap();
            assert!((got - 1.0 / (deg + 1) as f64).abs() < 1e-14, "n={n}");
            let wsum: f64 = r.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn smooth_2d_integral() {
        let r = GaussLegendre::new(16).unwrap();
        let region = Rect::new(0.0, std::f64::consts::PI, 0.0, 1.0);
        let got = r
            .integrate_rect(&region, |u, v| Ok(u.sin() * v.exp()))
            .unwrap();
        assert!((got - 2.0 * (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn rejects_zero_order() {
        assert!(GaussLegendre::new(0).is_err());
    }
}
