//! Closed forms and triple families for the worked examples.

use crate::curve::CurveSpec;
use crate::error::Result;
use crate::geometry::Triple;

/// `S[Im K_Gamma]` on `y = x^2` at abscissas `(-l, 0, l)`.
pub fn symmetric_parabola_im(l: f64) -> f64 {
    let l2 = l * l;
    2.0 * (2.0 * l2 - 1.0) / ((l2 + 1.0).powi(2) * (4.0 * l2 + 1.0))
}

/// `S[Re K_Gamma]` on `y = x^2` at abscissas `(-l, 0, l)`.
pub fn symmetric_parabola_re(l: f64) -> f64 {
    let l2 = l * l;
    6.0 * (2.0 * l2 + 1.0) / ((l2 + 1.0).powi(2) * (4.0 * l2 + 1.0))
}

pub fn symmetric_parabola_triple(l: f64) -> Result<Triple> {
    Triple::on_curve(&CurveSpec::parabola(1.0), [-l, 0.0, l])
}

/// Per-vertex terms `[I, II, III]` of `S[Re K_Gamma]` on `y = x^3` at
/// abscissas `(-a, 0, l)`, listed in abscissa order.
pub fn cubic_terms(a: f64, l: f64) -> [f64; 3] {
    let (a2, l2) = (a * a, l * l);
    let (a4, l4) = (a2 * a2, l2 * l2);
    let q = a4 - 2.0 * a2 * a * l + 3.0 * a2 * l2 - 2.0 * a * l2 * l + l4 + 1.0;
    [
        4.0 * a * (2.0 * a - l) / ((a4 + 1.0) * (9.0 * a4 + 1.0) * q),
        -2.0 * a * l / ((a4 + 1.0) * (l4 + 1.0)),
        4.0 * l * (2.0 * l - a) / ((l4 + 1.0) * (9.0 * l4 + 1.0) * q),
    ]
}

pub fn cubic_triple(a: f64, l: f64) -> Result<Triple> {
    Triple::on_curve(&CurveSpec::cubic(), [-a, 0.0, l])
}

/// The constant `1/(24 * 5^2 * 41)` of the cubic lower bound.
pub const CUBIC_LOWER_C0: f64 = 1.0 / (24.0 * 25.0 * 41.0);

/// Abscissas `(-eps alpha, 0, eps beta)` on `y = x^3`.
pub fn cubic_window_triple(eps: f64, alpha: f64, beta: f64) -> Result<Triple> {
    Triple::on_curve(&CurveSpec::cubic(), [-eps * alpha, 0.0, eps * beta])
}

/// Abscissas `(0, l, 1)` on the bump-sine curve.
pub fn bump_triple(spec: &CurveSpec, l: f64) -> Result<Triple> {
    Triple::on_curve(spec, [0.0, l, 1.0])
}
