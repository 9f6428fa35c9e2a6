//! The compactly supported curve `A(x) = chi(x) sin(2 pi x)`.
//!
//! `chi(x) = (1/(2 pi) + (x - 1/2)) psi(x)` where `psi` is a C-infinity
//! plateau function equal to 1 on the plateau and vanishing outside the
//! support. This gives `A(1/2) = 0`, `A'(1/2) = -1`, `A''(1/2) = -4 pi`
//! and `A = A' = 0` at 0 and 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpParams {
    pub support_lo: f64,
    pub plateau_lo: f64,
    pub plateau_hi: f64,
    pub support_hi: f64,
}

impl Default for BumpParams {
    fn default() -> Self {
        BumpParams {
            support_lo: 0.1,
            plateau_lo: 0.3,
            plateau_hi: 0.7,
            support_hi: 0.9,
        }
    }
}

impl BumpParams {
    pub fn is_valid(&self) -> bool {
        0.0 < self.support_lo
            && self.support_lo < self.plateau_lo
            && self.plateau_lo <= 0.5
            && 0.5 <= self.plateau_hi
            && self.plateau_hi < self.support_hi
            && self.support_hi < 1.0
    }
}

/// `exp(-1/t)` for `t > 0`, flat zero otherwise.
fn flat(t: Jet) -> Jet {
    if t.0[0] <= 0.0 {
        Jet::ZERO
    } else {
        (-t.recip()).exp()
    }
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`.
fn step(t: Jet) -> Jet {
    if t.0[0] <= 0.0 {
        return Jet::ZERO;
    }
    if t.0[0] >= 1.0 {
        return Jet::constant(1.0);
    }
    let a = flat(t);
    let b = flat(Jet::constant(1.0) - t);
    a * (a + b).recip()
}

fn plateau(p: &BumpParams, x: Jet) -> Jet {
    let rise = (x - Jet::constant(p.support_lo)).scale(1.0 / (p.plateau_lo - p.support_lo));
    let fall = (Jet::constant(p.support_hi) - x).scale(1.0 / (p.support_hi - p.plateau_hi));
    step(rise) * step(fall)
}

/// `[A, A', A'', A''']` at `x`.
pub(crate) fn bump_sine(p: &BumpParams, x: f64) -> [f64; 4] {
    if x <= p.support_lo || x >= p.support_hi {
        return [0.0; 4];
    }
    let v = Jet::variable(x);
    let chi = (Jet::constant(1.0 / (2.0 * PI) - 0.5) + v) * plateau(p, v);
    (chi * v.scale(2.0 * PI).sin()).0
}
