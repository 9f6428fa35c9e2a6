//! Graph curves `y = A(x)` over an open abscissa interval.
//!
//! A [`CurveSpec`] evaluates `A`, `A'`, `A''` (and `A'''` where available)
//! at interior points of its domain, and derives the pointwise geometry the
//! kernels need: speed `s = sqrt(1 + A'^2)`, signed curvature `A''/s^3`, and
//! the phase `phi` of the unit factor `(A' - i)/s`.

mod bump;
mod jet;
pub mod record;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bump::BumpParams;

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// `(center - radius, center + radius)`.
    pub fn around(center: f64, radius: f64) -> Result<Self> {
        Interval::new(center - radius, center + radius)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied graph curve. Only `A` is mandatory; missing derivatives
/// fall back to central differences (see [`CurveSpec::second_derivative`]).
#[derive(Clone)]
pub struct CustomCurve {
    name: String,
    height: ScalarFn,
    first: Option<ScalarFn>,
    second: Option<ScalarFn>,
    third: Option<ScalarFn>,
}

impl CustomCurve {
    pub fn new(
        name: impl Into<String>,
        height: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomCurve {
            name: name.into(),
            height: Arc::new(height),
            first: None,
            second: None,
            third: None,
        }
    }

    pub fn with_first(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.first = Some(Arc::new(f));
        self
    }

    pub fn with_second(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.second = Some(Arc::new(f));
        self
    }

    pub fn with_third(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.third = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Closed-form custom curves addressable by name from records and the CLI.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "cosh" => Some(
                CustomCurve::new("cosh", f64::cosh)
                    .with_first(f64::sinh)
                    .with_second(f64::cosh)
                    .with_third(f64::sinh),
            ),
            "exp" => Some(
                CustomCurve::new("exp", f64::exp)
                    .with_first(f64::exp)
                    .with_second(f64::exp)
                    .with_third(f64::exp),
            ),
            _ => None,
        }
    }
}

impl fmt::Debug for CustomCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomCurve")
            .field("name", &self.name)
            .field("first", &self.first.is_some())
            .field("second", &self.second.is_some())
            .field("third", &self.third.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum CurveKind {
    Line {
        slope: f64,
        intercept: f64,
    },
    /// `A(x) = a x^2`.
    Parabola {
        a: f64,
    },
    /// `A(x) = x^3`.
    Cubic,
    /// `A(x) = chi(x) sin(2 pi x)`.
    BumpSine(BumpParams),
    Custom(CustomCurve),
}

#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub domain: Interval,
}

/// Pointwise geometry of a graph curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePointData {
    pub x: f64,
    pub height: f64,
    pub slope: f64,
    pub speed: f64,
    pub curvature: f64,
    pub phase: f64,
}

impl CurvePointData {
    /// `e^{i phi} = (A' - i)/s`.
    pub fn unit_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phase)
    }
}

fn fd_step(x: f64, base: f64) -> f64 {
    base.max(base * x.abs())
}

/// Fourth-order central first derivative.
fn central_first(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative.
fn central_second(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

impl CurveSpec {
    pub fn new(kind: CurveKind, domain: Interval) -> Result<Self> {
        match &kind {
            CurveKind::Parabola { a } if !a.is_finite() => {
                return Err(Error::InvalidParameter(format!("parabola coefficient {a}")))
            }
            CurveKind::Line { slope, intercept }
                if !(slope.is_finite() && intercept.is_finite()) =>
            {
                return Err(Error::InvalidParameter(
                    "line parameters must be finite".into(),
                ))
            }
            CurveKind::BumpSine(p) if !p.is_valid() => {
                return Err(Error::InvalidParameter(format!("bump cutoffs {p:?}")))
            }
            _ => {}
        }
        Ok(CurveSpec { kind, domain })
    }

    pub fn line(slope: f64, intercept: f64) -> Self {
        CurveSpec {
            kind: CurveKind::Line { slope, intercept },
            domain: Interval::REAL_LINE,
        }
    }

    pub fn parabola(a: f64) -> Self {
        CurveSpec {
            kind: CurveKind::Parabola { a },
            domain: Interval::REAL_LINE,
        }
    }

    pub fn cubic() -> Self {
        CurveSpec {
            kind: CurveKind::Cubic,
            domain: Interval::REAL_LINE,
        }
    }

    /// The bump-sine curve on its customary domain `(-1, 2)`.
    pub fn bump_sine() -> Self {
        CurveSpec {
            kind: CurveKind::BumpSine(BumpParams::default()),
            domain: Interval { lo: -1.0, hi: 2.0 },
        }
    }

    pub fn cosh() -> Self {
        CurveSpec {
            kind: CurveKind::Custom(CustomCurve::named("cosh").expect("built-in")),
            domain: Interval::REAL_LINE,
        }
    }

    pub fn custom(curve: CustomCurve, domain: Interval) -> Self {
        CurveSpec {
            kind: CurveKind::Custom(curve),
            domain,
        }
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                lo: self.domain.lo,
                hi: self.domain.hi,
            })
        }
    }

    /// `A(x)`, no domain check.
    pub fn height(&self, x: f64) -> f64 {
        match &self.kind {
            CurveKind::Line { slope, intercept } => slope * x + intercept,
            CurveKind::Parabola { a } => a * x * x,
            CurveKind::Cubic => x * x * x,
            CurveKind::BumpSine(p) => bump::bump_sine(p, x)[0],
            CurveKind::Custom(c) => (c.height)(x),
        }
    }

    /// `A'(x)`, no domain check.
    pub fn slope(&self, x: f64) -> f64 {
        match &self.kind {
            CurveKind::Line { slope, .. } => *slope,
            CurveKind::Parabola { a } => 2.0 * a * x,
            CurveKind::Cubic => 3.0 * x * x,
            CurveKind::BumpSine(p) => bump::bump_sine(p, x)[1],
            CurveKind::Custom(c) => match &c.first {
                Some(f) => f(x),
                None => central_first(c.height.as_ref(), x, fd_step(x, 1e-5)),
            },
        }
    }

    /// `A''(x)`, no domain check.
    ///
    /// Custom curves without a closed form differentiate `A'` once when it is
    /// supplied, otherwise apply the second-difference stencil to `A` with a
    /// wider step so that roundoff stays near 1e-10.
    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.kind {
            CurveKind::Line { .. } => 0.0,
            CurveKind::Parabola { a } => 2.0 * a,
            CurveKind::Cubic => 6.0 * x,
            CurveKind::BumpSine(p) => bump::bump_sine(p, x)[2],
            CurveKind::Custom(c) => match (&c.second, &c.first) {
                (Some(f), _) => f(x),
                (None, Some(d1)) => central_first(d1.as_ref(), x, fd_step(x, 1e-5)),
                (None, None) => central_second(c.height.as_ref(), x, fd_step(x, 1e-3)),
            },
        }
    }

    /// `A'''(x)` when the kind supplies it (or supplies `A''` to difference).
    pub fn third_derivative(&self, x: f64) -> Option<f64> {
        match &self.kind {
            CurveKind::Line { .. } | CurveKind::Parabola { .. } => Some(0.0),
            CurveKind::Cubic => Some(6.0),
            CurveKind::BumpSine(p) => Some(bump::bump_sine(p, x)[3]),
            CurveKind::Custom(c) => match (&c.third, &c.second) {
                (Some(f), _) => Some(f(x)),
                (None, Some(d2)) => Some(central_first(d2.as_ref(), x, fd_step(x, 1e-5))),
                (None, None) => None,
            },
        }
    }

    /// Unchecked `x + i A(x)`.
    #[inline]
    pub fn point(&self, x: f64) -> Complex64 {
        Complex64::new(x, self.height(x))
    }

    pub fn point_at(&self, x: f64) -> Result<Complex64> {
        self.check(x)?;
        Ok(self.point(x))
    }

    /// Principal argument of `(A'(x) - i)/s(x)`. The imaginary part is
    /// `-1/s < 0`, so the value lies in `(-pi, 0)` and is continuous in `x`.
    pub fn phase(&self, x: f64) -> f64 {
        (-1.0f64).atan2(self.slope(x))
    }

    pub fn curve_data(&self, x: f64) -> Result<CurvePointData> {
        self.check(x)?;
        let slope = self.slope(x);
        let speed = slope.hypot(1.0);
        let second = self.second_derivative(x);
        Ok(CurvePointData {
            x,
            height: self.height(x),
            slope,
            speed,
            curvature: second / (speed * speed * speed),
            phase: (-1.0f64).atan2(slope),
        })
    }

    /// Supremum of `|A''|` over `interval`: exact for lines, parabolas and
    /// the cubic, otherwise the maximum over `n` evenly spaced cell midpoints.
    pub fn lipschitz_of_derivative(&self, interval: Interval, n: usize) -> Result<f64> {
        if interval.lo.is_nan() || interval.hi.is_nan() || interval.lo >= interval.hi {
            return Err(Error::EmptyInterval {
                lo: interval.lo,
                hi: interval.hi,
            });
        }
        if !self.domain.contains_interval(&interval) {
            return Err(Error::InvalidParameter(format!(
                "interval ({}, {}) not inside the curve domain ({}, {})",
                interval.lo, interval.hi, self.domain.lo, self.domain.hi
            )));
        }
        match &self.kind {
            CurveKind::Line { .. } => Ok(0.0),
            CurveKind::Parabola { a } => Ok(2.0 * a.abs()),
            CurveKind::Cubic => Ok(6.0 * interval.lo.abs().max(interval.hi.abs())),
            _ => {
                if n < 2 {
                    return Err(Error::InvalidParameter(format!("sample count {n} < 2")));
                }
                if !interval.is_finite() {
                    return Err(Error::InvalidParameter(
                        "sampled Lipschitz estimate needs a finite interval".into(),
                    ));
                }
                let w = interval.length() / n as f64;
                Ok((0..n)
                    .map(|i| {
                        self.second_derivative(interval.lo + (i as f64 + 0.5) * w)
                            .abs()
                    })
                    .fold(0.0, f64::max))
            }
        }
    }

    /// True when `A''` has one sign on the whole domain for the closed-form
    /// kinds; `None` when that cannot be decided without sampling.
    pub fn has_fixed_concavity(&self) -> Option<bool> {
        match &self.kind {
            CurveKind::Line { .. } | CurveKind::Parabola { .. } => Some(true),
            CurveKind::Cubic => Some(self.domain.lo >= 0.0 || self.domain.hi <= 0.0),
            _ => None,
        }
    }

    /// Short identifier: `line`, `parabola:<a>`, `cubic`, `bumpsine`, or the
    /// custom name.
    pub fn shorthand(&self) -> String {
        match &self.kind {
            CurveKind::Line { slope, intercept } => {
                if *slope == 0.0 && *intercept == 0.0 {
                    "line".into()
                } else {
                    format!("line:{slope}:{intercept}")
                }
            }
            CurveKind::Parabola { a } => format!("parabola:{a}"),
            CurveKind::Cubic => "cubic".into(),
            CurveKind::BumpSine(_) => "bumpsine".into(),
            CurveKind::Custom(c) => c.name.clone(),
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.shorthand())
    }
}

impl std::str::FromStr for CurveSpec {
    type Err = Error;

    /// Parses `line[:slope[:intercept]]`, `parabola:<a>`, `cubic`,
    /// `bumpsine`, or a named custom curve (`cosh`, `exp`).
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let head = parts.next().unwrap_or_default().to_ascii_lowercase();
        let nums: Vec<f64> = parts
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{p}` in curve `{s}`")))
            })
            .collect::<Result<_>>()?;
        let spec = match (head.as_str(), nums.as_slice()) {
            ("line", []) => CurveSpec::line(0.0, 0.0),
            ("line", [m]) => CurveSpec::line(*m, 0.0),
            ("line", [m, c]) => CurveSpec::line(*m, *c),
            ("parabola", [a]) => CurveSpec::parabola(*a),
            ("cubic", []) => CurveSpec::cubic(),
            ("bumpsine", []) => CurveSpec::bump_sine(),
            (name, []) => match CustomCurve::named(name) {
                Some(c) => CurveSpec::custom(c, Interval::REAL_LINE),
                None => return Err(Error::Parse(format!("unknown curve `{s}`"))),
            },
            _ => return Err(Error::Parse(format!("unknown curve `{s}`"))),
        };
        CurveSpec::new(spec.kind, spec.domain)
    }
}

/// Unwraps a sampled angle sequence in place so consecutive entries differ
/// by less than `pi`.
pub fn unwrap_angles(angles: &mut [f64]) {
    use std::f64::consts::{PI, TAU};
    let mut offset = 0.0;
    for i in 1..angles.len() {
        let prev = angles[i - 1];
        let mut cur = angles[i] + offset;
        while cur - prev > PI {
            cur -= TAU;
            offset -= TAU;
        }
        while cur - prev < -PI {
            cur += TAU;
            offset += TAU;
        }
        angles[i] = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn point_at_examples() {
        assert_eq!(
            CurveSpec::parabola(0.5).point_at(1.0).unwrap(),
            Complex64::new(1.0, 0.5)
        );
        assert_eq!(
            CurveSpec::cubic().point_at(2.0).unwrap(),
            Complex64::new(2.0, 8.0)
        );
        let z = CurveSpec::bump_sine().point_at(0.5).unwrap();
        assert_eq!(z.re, 0.5);
        assert!(z.im.abs() < 1e-16);
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let bump = CurveSpec::bump_sine();
        assert!(matches!(bump.point_at(2.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(
            bump.curve_data(-1.5),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(CurveSpec::parabola(1.0).point_at(f64::INFINITY).is_err());
    }

    #[test]
    fn curve_data_examples() {
        let d = CurveSpec::parabola(0.5).curve_data(0.0).unwrap();
        assert_eq!((d.slope, d.speed, d.curvature), (0.0, 1.0, 1.0));

        let d = CurveSpec::cubic().curve_data(1.0).unwrap();
        assert_eq!(d.slope, 3.0);
        assert!((d.speed - 10f64.sqrt()).abs() < 1e-15);
        assert!((d.curvature - 6.0 / 10f64.powf(1.5)).abs() < 1e-15);

        let d = CurveSpec::bump_sine().curve_data(0.5).unwrap();
        assert!((d.slope + 1.0).abs() < 1e-15);
        assert!((d.speed - 2f64.sqrt()).abs() < 1e-15);
        assert!((d.phase + 0.75 * PI).abs() < 1e-15);
        let u = d.unit_factor();
        assert!((u - Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn phase_of_horizontal_tangent_is_minus_half_pi() {
        let d = CurveSpec::line(0.0, 0.0).curve_data(3.0).unwrap();
        assert_eq!(d.phase, -PI / 2.0);
        let bump = CurveSpec::bump_sine();
        assert_eq!(bump.phase(0.0), -PI / 2.0);
        assert_eq!(bump.phase(1.0), -PI / 2.0);
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(
            CurveSpec::parabola(1.0)
                .lipschitz_of_derivative(Interval::REAL_LINE, 2)
                .unwrap(),
            2.0
        );
        let eps = 0.05;
        let m = CurveSpec::cubic()
            .lipschitz_of_derivative(Interval::around(0.0, eps).unwrap(), 2)
            .unwrap();
        assert!((m - 6.0 * eps).abs() < 1e-15);
        assert_eq!(
            CurveSpec::line(2.0, 1.0)
                .lipschitz_of_derivative(Interval::REAL_LINE, 2)
                .unwrap(),
            0.0
        );
        let e = CurveSpec::cubic().lipschitz_of_derivative(Interval { lo: 1.0, hi: 1.0 }, 10);
        assert!(matches!(e, Err(Error::EmptyInterval { .. })));
    }

    #[test]
    fn sampled_lipschitz_for_cosh() {
        let m = CurveSpec::cosh()
            .lipschitz_of_derivative(Interval::new(-1.0, 1.0).unwrap(), 2001)
            .unwrap();
        assert!((m - 1f64.cosh()).abs() < 1e-3);
    }

    #[test]
    fn custom_fallback_derivatives_match_closed_forms() {
        let par = CurveSpec::custom(CustomCurve::new("p", |x| 0.7 * x * x), Interval::REAL_LINE);
        let cub = CurveSpec::custom(CustomCurve::new("c", |x| x * x * x), Interval::REAL_LINE);
        let refp = CurveSpec::parabola(0.7);
        let refc = CurveSpec::cubic();
        for x in [-3.0, -0.4, 0.0, 0.9, 5.0] {
            assert!((par.slope(x) - refp.slope(x)).abs() < 1e-9 * (1.0 + x.abs()));
            assert!((cub.slope(x) - refc.slope(x)).abs() < 1e-8 * (1.0 + x * x));
            assert!((par.second_derivative(x) - 1.4).abs() < 1e-7);
            assert!((cub.second_derivative(x) - 6.0 * x).abs() < 1e-6 * (1.0 + x.abs()));
        }
        assert_eq!(par.third_derivative(0.3), None);
    }

    #[test]
    fn shorthand_round_trips() {
        for s in [
            "line",
            "line:2:-1",
            "parabola:0.5",
            "cubic",
            "bumpsine",
            "cosh",
        ] {
            let c: CurveSpec = s.parse().unwrap();
            assert_eq!(c.shorthand(), s);
        }
        assert!("hyperbola:1".parse::<CurveSpec>().is_err());
        assert!("parabola".parse::<CurveSpec>().is_err());
        assert!("parabola:x".parse::<CurveSpec>().is_err());
    }

    #[test]
    fn unwrap_removes_jumps() {
        let mut a = vec![3.0, -3.0, 3.1, -3.1];
        unwrap_angles(&mut a);
        for w in a.windows(2) {
            assert!((w[1] - w[0]).abs() < PI);
        }
    }
}
