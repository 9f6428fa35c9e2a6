//! Order-3 derivative jets: `[f, f', f'', f''']` propagated through
//! arithmetic and composition (Faà di Bruno up to third order).

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet(pub [f64; 4]);

impl Jet {
    pub const ZERO: Jet = Jet([0.0; 4]);

    pub fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    /// The identity function `x` at `x`.
    pub fn variable(x: f64) -> Self {
        Jet([x, 1.0, 0.0, 0.0])
    }

    /// `phi(self)` given `phi` and its first three derivatives at `self.0[0]`.
    fn compose(self, phi: [f64; 4]) -> Jet {
        let [_, f1, f2, f3] = self.0;
        Jet([
            phi[0],
            phi[1] * f1,
            phi[2] * f1 * f1 + phi[1] * f2,
            phi[3] * f1 * f1 * f1 + 3.0 * phi[2] * f1 * f2 + phi[1] * f3,
        ])
    }

    pub fn exp(self) -> Jet {
        let e = self.0[0].exp();
        self.compose([e; 4])
    }

    pub fn recip(self) -> Jet {
        let u = self.0[0];
        let r = 1.0 / u;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.0[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn scale(self, k: f64) -> Jet {
        Jet(self.0.map(|v| v * k))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = o.0;
        Jet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_matches_closed_form() {
        // x^2 * sin x at x = 0.7
        let x = Jet::variable(0.7);
        let j = x * x * x.sin();
        let (s, c) = 0.7f64.sin_cos();
        let t = 0.7;
        let want = [
            t * t * s,
            2.0 * t * s + t * t * c,
            2.0 * s + 4.0 * t * c - t * t * s,
            6.0 * c - 6.0 * t * s - t * t * c,
        ];
        for (g, w) in j.0.iter().zip(want) {
            assert!((g - w).abs() < 1e-14, "{g} vs {w}");
        }
    }

    #[test]
    fn exp_of_reciprocal_third_derivative() {
        // d^3/dx^3 exp(-1/x) = exp(-1/x) (1 - 6x + 6x^2) / x^6
        let x = 0.4;
        let j = (-Jet::variable(x).recip()).exp();
        let e = (-1.0 / x).exp();
        let want = e * (1.0 - 6.0 * x + 6.0 * x * x) / x.powi(6);
        assert!((j.0[3] - want).abs() < 1e-12 * want.abs().max(1.0));
    }
}
