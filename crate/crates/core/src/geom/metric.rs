use crate::expr::Jet;
use serde::Serialize;

/// Tangent vector in the coordinate basis `∂₁ = ∂_u`, `∂₂ = ∂_v`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TangentVector {
    pub a1: f64,
    pub a2: f64,
}

impl TangentVector {
    pub const ZERO: TangentVector = TangentVector { a1: 0.0, a2: 0.0 };

    pub fn new(a1: f64, a2: f64) -> Self {
        Self { a1, a2 }
    }

    pub fn norm(&self, g: &Metric2) -> f64 {
        g.inner(self, self).max(0.0).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.a1, s * self.a2)
    }

    pub fn components(&self) -> [f64; 2] {
        [self.a1, self.a2]
    }
}

impl std::ops::Add for TangentVector {
    type Output = TangentVector;
    fn add(self, o: TangentVector) -> TangentVector {
        TangentVector::new(self.a1 + o.a1, self.a2 + o.a2)
    }
}

impl std::ops::Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, o: TangentVector) -> TangentVector {
        TangentVector::new(self.a1 - o.a1, self.a2 - o.a2)
    }
}

/// Symmetric 2×2 tensor; used both for `g_ij` and for the inverse `g^ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metric2 {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl Metric2 {
    pub fn new(g11: f64, g12: f64, g22: f64) -> Self {
        Self { g11, g12, g22 }
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g11 > 0.0 && self.det() > 0.0
    }

    pub fn inverse(&self) -> Metric2 {
        let d = self.det();
        Metric2::new(self.g22 / d, -self.g12 / d, self.g11 / d)
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.g11, self.g12], [self.g12, self.g22]]
    }

    /// Contracts a vector: `(T x)_i = T_ij x^j`.
    pub fn apply(&self, x: &TangentVector) -> TangentVector {
        TangentVector::new(
            self.g11 * x.a1 + self.g12 * x.a2,
            self.g12 * x.a1 + self.g22 * x.a2,
        )
    }

    /// `T_ij x^i y^j`.
    pub fn inner(&self, x: &TangentVector, y: &TangentVector) -> f64 {
        let tx = self.apply(x);
        tx.a1 * y.a1 + tx.a2 * y.a2
    }

    pub fn scale(&self, s: f64) -> Metric2 {
        Metric2::new(s * self.g11, s * self.g12, s * self.g22)
    }
}

/// `Γ^k_ij`, indexed `[k][i][j]`.
pub type Christoffel = [[[f64; 2]; 2]; 2];

/// Metric components carried as jets, so Christoffel symbols and
/// Laplacians can be formed at the jet center.
#[derive(Debug, Clone, Copy)]
pub struct MetricJet {
    pub g11: Jet,
    pub g12: Jet,
    pub g22: Jet,
}

impl MetricJet {
    pub fn at(&self) -> Metric2 {
        Metric2::new(self.g11.value(), self.g12.value(), self.g22.value())
    }

    /// Conformally rescaled metric `factor · g`.
    pub fn conformal(&self, factor: &Jet) -> MetricJet {
        MetricJet {
            g11: self.g11 * *factor,
            g12: self.g12 * *factor,
            g22: self.g22 * *factor,
        }
    }

    fn component(&self, i: usize, j: usize) -> &Jet {
        match (i, j) {
            (0, 0) => &self.g11,
            (1, 1) => &self.g22,
            _ => &self.g12,
        }
    }

    /// Requires first-order metric jets.
    pub fn christoffel(&self) -> Christoffel {
        // dg[l][i][j] = ∂_l g_ij
        let mut dg = [[[0.0; 2]; 2]; 2];
        for (l, dgl) in dg.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let c = self.component(i, j);
                    dgl[i][j] = if l == 0 {
                        c.partial(1, 0)
                    } else {
                        c.partial(0, 1)
                    };
                }
            }
        }
        let inv = self.at().inverse().matrix();
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = 0.0;
                    for l in 0..2 {
                        s += inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                    }
                    gk[i][j] = 0.5 * s;
                }
            }
        }
        gamma
    }

    /// `g^{kl} ∂_k f ∂_l`.
    pub fn gradient(&self, f: &Jet) -> TangentVector {
        let [fu, fv] = f.gradient();
        self.at().inverse().apply(&TangentVector::new(fu, fv))
    }

    /// Laplace–Beltrami `g^{ij}(∂_i∂_j f − Γ^k_ij ∂_k f)`; `f` needs order 2.
    pub fn laplacian(&self, f: &Jet) -> f64 {
        let inv = self.at().inverse().matrix();
        let gamma = self.christoffel();
        let df = f.gradient();
        let hess = f.hessian();
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut second = hess[i][j];
                for (k, dfk) in df.iter().enumerate() {
                    second -= gamma[k][i][j] * dfk;
                }
                s += inv[i][j] * second;
            }
        }
        s
    }
}
