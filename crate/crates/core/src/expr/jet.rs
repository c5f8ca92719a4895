//! Truncated bivariate Taylor jets.
//!
//! A [`Jet`] of order `n` at a center `(u, v)` carries every mixed partial
//! derivative `∂ᵃᵤ∂ᵇᵥ f` with `a + b ≤ n`. Internally the coefficients are
//! stored Taylor-normalized (divided by `a!·b!`) so that multiplication is a
//! plain truncated convolution; [`Jet::partial`] converts back.
//!
//! Elementary functions are applied by composition: for `x = x₀ + δ` with
//! nilpotent `δ`, `φ(x) = Σₖ φ⁽ᵏ⁾(x₀)/k! · δᵏ`, evaluated by Horner's rule.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest supported total derivative order.
pub const MAX_ORDER: usize = 4;

const NCOEF: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

const FACTORIAL: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[inline]
fn idx(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Truncated Taylor expansion of a scalar function of `(u, v)`.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    center: (f64, f64),
    order: usize,
    coeffs: [f64; NCOEF],
}

impl Jet {
    /// A constant function.
    pub fn constant(center: (f64, f64), order: usize, value: f64) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = [0.0; NCOEF];
        coeffs[0] = value;
        Self {
            center,
            order,
            coeffs,
        }
    }

    /// The coordinate function `u`.
    pub fn var_u(center: (f64, f64), order: usize) -> Self {
        let mut j = Self::constant(center, order, center.0);
        if order >= 1 {
            j.coeffs[idx(1, 0)] = 1.0;
        }
        j
    }

    /// The coordinate function `v`.
    pub fn var_v(center: (f64, f64), order: usize) -> Self {
        let mut j = Self::constant(center, order, center.1);
        if order >= 1 {
            j.coeffs[idx(0, 1)] = 1.0;
        }
        j
    }

    /// Builds a jet from mixed partials; `partials(a, b)` is queried for every
    /// `a + b ≤ order`.
    pub fn from_partials(
        center: (f64, f64),
        order: usize,
        mut partials: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut j = Self::constant(center, order, 0.0);
        for d in 0..=order {
            for b in 0..=d {
                let a = d - b;
                j.coeffs[idx(a, b)] = partials(a, b) / (FACTORIAL[a] * FACTORIAL[b]);
            }
        }
        j
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient of `(u-u₀)ᵃ(v-v₀)ᵇ`.
    pub fn taylor(&self, a: usize, b: usize) -> f64 {
        if a + b > self.order {
            return 0.0;
        }
        self.coeffs[idx(a, b)]
    }

    /// The mixed partial derivative `∂ᵃᵤ∂ᵇᵥ f` at the center.
    ///
    /// Panics if `a + b` exceeds the jet order.
    pub fn partial(&self, a: usize, b: usize) -> f64 {
        assert!(
            a + b <= self.order,
            "partial ({a},{b}) not available in a jet of order {}",
            self.order
        );
        self.coeffs[idx(a, b)] * FACTORIAL[a] * FACTORIAL[b]
    }

    /// `[∂ᵤf, ∂ᵥf]`.
    pub fn gradient(&self) -> [f64; 2] {
        [self.partial(1, 0), self.partial(0, 1)]
    }

    /// Symmetric coordinate Hessian.
    pub fn hessian(&self) -> [[f64; 2]; 2] {
        let uv = self.partial(1, 1);
        [[self.partial(2, 0), uv], [uv, self.partial(0, 2)]]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs[..count(self.order)]
            .iter()
            .all(|c| c.is_finite())
    }

    /// Drops all terms above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = *self;
        out.order = order;
        for c in out.coeffs[count(order)..].iter_mut() {
            *c = 0.0;
        }
        out
    }

    /// Derivative with respect to `u`; the result has one order less.
    pub fn d_u(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Self::constant(self.center, order, 0.0);
        for d in 0..=order {
            for b in 0..=d {
                let a = d - b;
                out.coeffs[idx(a, b)] = (a + 1) as f64 * self.coeffs[idx(a + 1, b)];
            }
        }
        out
    }

    /// Derivative with respect to `v`; the result has one order less.
    pub fn d_v(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Self::constant(self.center, order, 0.0);
        for d in 0..=order {
            for b in 0..=d {
                let a = d - b;
                out.coeffs[idx(a, b)] = (b + 1) as f64 * self.coeffs[idx(a, b + 1)];
            }
        }
        out
    }

    /// Applies a scalar function given its derivatives at the center value:
    /// `derivs[k] = φ⁽ᵏ⁾(x₀)` for `k = 0..=order`.
    pub fn compose(&self, derivs: &[f64]) -> Self {
        assert!(derivs.len() > self.order);
        let mut delta = *self;
        delta.coeffs[0] = 0.0;
        let n = self.order;
        let mut acc = Self::constant(self.center, n, derivs[n] / FACTORIAL[n]);
        for k in (0..n).rev() {
            acc = acc * delta;
            acc.coeffs[0] += derivs[k] / FACTORIAL[k];
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&[e; MAX_ORDER + 1])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&[s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&[c, -s, -c, s, c])
    }

    pub fn sinh(&self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose(&[s, c, s, c, s])
    }

    pub fn cosh(&self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose(&[c, s, c, s, c])
    }

    pub fn tanh(&self) -> Self {
        // t' = 1 - t², and the higher derivatives are polynomials in t.
        let t = self.value().tanh();
        let s = 1.0 - t * t;
        self.compose(&[
            t,
            s,
            -2.0 * t * s,
            -2.0 * s * (1.0 - 3.0 * t * t),
            8.0 * t * s * (2.0 - 3.0 * t * t),
        ])
    }

    /// Natural logarithm; the caller guarantees a positive value.
    pub fn ln(&self) -> Self {
        let x = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        d[0] = x.ln();
        let mut sign = 1.0;
        for (k, dk) in d.iter_mut().enumerate().skip(1) {
            *dk = sign * FACTORIAL[k - 1] / x.powi(k as i32);
            sign = -sign;
        }
        self.compose(&d)
    }

    /// `x^p` for real `p`; the caller guarantees a positive value.
    pub fn powf(&self, p: f64) -> Self {
        let x = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut falling = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = falling * x.powf(p - k as f64);
            falling *= p - k as f64;
        }
        self.compose(&d)
    }

    pub fn sqrt(&self) -> Self {
        let mut out = self.powf(0.5);
        out.coeffs[0] = self.value().sqrt();
        out
    }

    /// `1/x`; the caller guarantees a nonzero value.
    pub fn recip(&self) -> Self {
        let x = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut sign = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = sign * FACTORIAL[k] / x.powi(k as i32 + 1);
            sign = -sign;
        }
        self.compose(&d)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Self::constant(self.center, self.order, 1.0);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }

    fn zip(self, rhs: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let order = self.order.min(rhs.order);
        let mut out = Self::constant(self.center, order, 0.0);
        for i in 0..count(order) {
            out.coeffs[i] = f(self.coeffs[i], rhs.coeffs[i]);
        }
        out
    }

    fn scale(mut self, s: f64) -> Self {
        for c in self.coeffs[..count(self.order)].iter_mut() {
            *c *= s;
        }
        self
    }
}

#[inline]
fn count(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("center", &self.center)
            .field("order", &self.order)
            .field("taylor", &&self.coeffs[..count(self.order)])
            .finish()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(self.center, order, 0.0);
        for d1 in 0..=order {
            for b1 in 0..=d1 {
                let x = self.coeffs[idx(d1 - b1, b1)];
                if x == 0.0 {
                    continue;
                }
                for d2 in 0..=(order - d1) {
                    for b2 in 0..=d2 {
                        let a = d1 - b1 + d2 - b2;
                        out.coeffs[idx(a, b1 + b2)] += x * rhs.coeffs[idx(d2 - b2, b2)];
                    }
                }
            }
        }
        out
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(1.0 / rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: (f64, f64) = (0.4, -0.3);

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_partials() {
        // u²v at (1,2)
        let c = (1.0, 2.0);
        let u = Jet::var_u(c, 3);
        let v = Jet::var_v(c, 3);
        let f = u * u * v;
        assert_eq!(f.value(), 2.0);
        assert_eq!(f.partial(1, 0), 4.0);
        assert_eq!(f.partial(0, 1), 1.0);
        assert_eq!(f.partial(2, 0), 4.0);
        assert_eq!(f.partial(1, 1), 2.0);
        assert_eq!(f.partial(0, 2), 0.0);
        assert_eq!(f.partial(2, 1), 2.0);
        assert_eq!(f.partial(3, 0), 0.0);
    }

    #[test]
    fn exp_of_sum_has_all_partials_equal() {
        let f = (Jet::var_u(C, 4) + Jet::var_v(C, 4)).exp();
        let e = (C.0 + C.1).exp();
        for d in 0..=4 {
            for b in 0..=d {
                assert!(close(f.partial(d - b, b), e, 1e-14), "{d},{b}");
            }
        }
    }

    #[test]
    fn sin_fourth_derivative_cycles() {
        let f = Jet::var_u(C, 4).sin();
        assert!(close(f.partial(4, 0), C.0.sin(), 1e-14));
        assert!(close(f.partial(3, 0), -C.0.cos(), 1e-14));
        assert_eq!(f.partial(0, 1), 0.0);
    }

    #[test]
    fn tanh_matches_quotient() {
        let x = Jet::var_u(C, 4) * 0.7 + Jet::var_v(C, 4) * 1.3;
        let a = x.tanh();
        let b = x.sinh() / x.cosh();
        for i in 0..NCOEF {
            assert!(close(a.coeffs[i], b.coeffs[i], 1e-13), "coeff {i}");
        }
    }

    #[test]
    fn ln_exp_roundtrip() {
        let x = Jet::var_u(C, 4) * Jet::var_v(C, 4) + 2.0;
        let y = x.ln().exp();
        for i in 0..NCOEF {
            assert!(close(y.coeffs[i], x.coeffs[i], 1e-13), "coeff {i}");
        }
    }

    #[test]
    fn powi_matches_repeated_product_and_recip() {
        let x = Jet::var_u(C, 4) + Jet::var_v(C, 4) * 2.0 + 3.0;
        let p = x.powi(3);
        let q = x * x * x;
        for i in 0..NCOEF {
            assert!(close(p.coeffs[i], q.coeffs[i], 1e-14));
        }
        let r = x.powi(-2) * x * x;
        assert!(close(r.value(), 1.0, 1e-15));
        for i in 1..NCOEF {
            assert!(r.coeffs[i].abs() < 1e-13);
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let x = Jet::var_u(C, 4).exp() + 1.0;
        let s = x.sqrt();
        let y = s * s;
        for i in 0..NCOEF {
            assert!(close(y.coeffs[i], x.coeffs[i], 1e-13));
        }
    }

    #[test]
    fn differentiation_lowers_order() {
        let f = (Jet::var_u(C, 4) * Jet::var_v(C, 4)).sin();
        let fu = f.d_u();
        assert_eq!(fu.order(), 3);
        assert!(close(fu.partial(0, 0), f.partial(1, 0), 1e-15));
        assert!(close(fu.partial(1, 2), f.partial(2, 2), 1e-13));
        let fuv = fu.d_v();
        assert!(close(fuv.value(), f.partial(1, 1), 1e-15));
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = Jet::var_u(C, 4);
        let b = Jet::var_v(C, 2);
        assert_eq!((a * b).order(), 2);
        assert_eq!((a + b).order(), 2);
        assert_eq!(a.truncate(1).order(), 1);
        assert_eq!(a.truncate(1).taylor(2, 0), 0.0);
    }

    #[test]
    fn from_partials_inverts_partial() {
        let f = (Jet::var_u(C, 4) * 0.3 - Jet::var_v(C, 4)).cosh();
        let g = Jet::from_partials(C, 4, |a, b| f.partial(a, b));
        for i in 0..NCOEF {
            assert!(close(g.coeffs[i], f.coeffs[i], 1e-15));
        }
    }
}
