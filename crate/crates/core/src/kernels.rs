//! Point evaluation of the Cauchy-type kernels.
//!
//! All kernels are evaluated in double-double from exact coordinate
//! differences and rounded to `Complex64` once at the end. The `1/(2 pi)`
//! normalisation of the curve kernel is dropped throughout.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::curve::CurveSpec;
use crate::dd::{Dd, DdComplex};
use crate::error::{Error, Result};
use crate::geometry::Triple;

type PhaseFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PhaseSource {
    Constant(f64),
    /// `h(x + iy) = phi(x)` for the curve's tangent phase.
    Graph(CurveSpec),
    Custom {
        name: String,
        f: PhaseFn,
    },
}

/// A real phase `h` on the plane.
#[derive(Clone)]
pub struct PhaseFunction {
    pub source: PhaseSource,
}

impl PhaseFunction {
    pub fn constant(value: f64) -> Self {
        PhaseFunction {
            source: PhaseSource::Constant(value),
        }
    }

    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PhaseFunction {
            source: PhaseSource::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        }
    }

    /// `h(z) = sin(x) + cos(2y)/2`; the non-constant phase used by the suites.
    pub fn sinusoidal() -> Self {
        PhaseFunction::custom("sinusoidal", |z| z.re.sin() + 0.5 * (2.0 * z.im).cos())
    }

    pub fn tag(&self) -> &'static str {
        match self.source {
            PhaseSource::Constant(_) => "constant",
            PhaseSource::Graph(_) => "graph",
            PhaseSource::Custom { .. } => "custom",
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.source, PhaseSource::Constant(_))
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        match &self.source {
            PhaseSource::Constant(c) => *c,
            PhaseSource::Graph(spec) => spec.phase(z.re),
            PhaseSource::Custom { f, .. } => f(z),
        }
    }

    /// `e^{i h(z)}` as a unit double-double phasor. The graph phase uses
    /// `(A' - i)/s` directly rather than going through the angle.
    pub(crate) fn phasor(&self, z: Complex64) -> DdComplex {
        match &self.source {
            PhaseSource::Graph(spec) => DdComplex::unit(spec.slope(z.re), -1.0),
            _ => {
                let (s, c) = self.eval(z).sin_cos();
                DdComplex::unit(c, s)
            }
        }
    }
}

impl fmt::Debug for PhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            PhaseSource::Constant(c) => write!(f, "PhaseFunction::Constant({c})"),
            PhaseSource::Graph(s) => write!(f, "PhaseFunction::Graph({s})"),
            PhaseSource::Custom { name, .. } => write!(f, "PhaseFunction::Custom({name})"),
        }
    }
}

impl fmt::Display for PhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            PhaseSource::Constant(c) => write!(f, "const:{c}"),
            PhaseSource::Graph(s) => write!(f, "graph:{s}"),
            PhaseSource::Custom { name, .. } => f.write_str(name),
        }
    }
}

impl FromStr for PhaseFunction {
    type Err = Error;

    /// `const:<v>`, `sinusoidal`, `graph:<curve>`, or a bare number.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix("const:") {
            return v
                .parse()
                .map(PhaseFunction::constant)
                .map_err(|_| Error::Parse(format!("bad constant phase `{s}`")));
        }
        if let Some(c) = s.strip_prefix("graph:") {
            return Ok(graph_phase(&c.parse()?));
        }
        if s == "sinusoidal" {
            return Ok(PhaseFunction::sinusoidal());
        }
        s.parse()
            .map(PhaseFunction::constant)
            .map_err(|_| Error::Parse(format!("unknown phase `{s}`")))
    }
}

/// The vertical-line-constant extension of the tangent phase of `spec`.
pub fn graph_phase(spec: &CurveSpec) -> PhaseFunction {
    PhaseFunction {
        source: PhaseSource::Graph(spec.clone()),
    }
}

fn checked_diff(w: Complex64, z: Complex64) -> Result<DdComplex> {
    if w == z {
        return Err(Error::CoincidentPoints);
    }
    Ok(DdComplex::diff(w, z))
}

fn k0_dd(w: Complex64, z: Complex64) -> Result<DdComplex> {
    Ok(checked_diff(w, z)?.recip())
}

fn k_h_dd(h: &PhaseFunction, w: Complex64, z: Complex64) -> Result<DdComplex> {
    Ok(h.phasor(w) * checked_diff(w, z)?.recip())
}

fn k_gamma_dd(spec: &CurveSpec, x: f64, y: f64) -> Result<DdComplex> {
    spec.check(x)?;
    spec.check(y)?;
    if x == y {
        return Err(Error::CoincidentAbscissas(x, y));
    }
    let d = DdComplex::new(Dd::diff(x, y), Dd::diff(spec.height(x), spec.height(y)));
    Ok(DdComplex::unit(spec.slope(x), -1.0) * d.recip())
}

fn kerzman_stein_dd(spec: &CurveSpec, x: f64, y: f64) -> Result<DdComplex> {
    Ok(k_gamma_dd(spec, x, y)? - k_gamma_dd(spec, y, x)?.conj())
}

/// `1/(w - z)`.
pub fn eval_k0(w: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(k0_dd(w, z)?.to_c64())
}

/// `(A'(x) - i) / (s(x) (w - z))` with `w, z` the curve points over `x, y`.
pub fn eval_k_gamma(spec: &CurveSpec, x: f64, y: f64) -> Result<Complex64> {
    Ok(k_gamma_dd(spec, x, y)?.to_c64())
}

/// `e^{i h(w)} / (w - z)`.
pub fn eval_k_h(h: &PhaseFunction, w: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(k_h_dd(h, w, z)?.to_c64())
}

/// `e^{-i h(z)} / (conj z - conj w)`, i.e. `conj K_h(z, w)`.
pub fn eval_k_h_star(h: &PhaseFunction, w: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(k_h_dd(h, z, w)?.conj().to_c64())
}

/// `K_Gamma(w, z) - conj K_Gamma(z, w)`.
pub fn eval_kerzman_stein(spec: &CurveSpec, x: f64, y: f64) -> Result<Complex64> {
    Ok(kerzman_stein_dd(spec, x, y)?.to_c64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelId {
    K0,
    KGamma,
    KH,
    KHStar,
    KS,
}

impl KernelId {
    pub const ALL: [KernelId; 5] = [
        KernelId::K0,
        KernelId::KGamma,
        KernelId::KH,
        KernelId::KHStar,
        KernelId::KS,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelId::K0 => "k0",
            KernelId::KGamma => "kgamma",
            KernelId::KH => "kh",
            KernelId::KHStar => "khstar",
            KernelId::KS => "ks",
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown kernel `{s}` (k0|kgamma|kh|khstar|ks)")))
    }
}

#[derive(Debug, Clone)]
pub enum KernelHandle {
    Universal,
    Restricted(CurveSpec),
    Phase(PhaseFunction),
    DualPhase(PhaseFunction),
    KerzmanStein(CurveSpec),
}

impl KernelHandle {
    /// Builds the handle for `id`; curve kernels need `curve`, phase kernels
    /// need `phase`.
    pub fn from_id(
        id: KernelId,
        curve: Option<&CurveSpec>,
        phase: Option<&PhaseFunction>,
    ) -> Result<Self> {
        let need_curve = || {
            curve
                .cloned()
                .ok_or_else(|| Error::InvalidParameter(format!("kernel {id} needs a curve")))
        };
        let need_phase = || {
            phase
                .cloned()
                .ok_or_else(|| Error::InvalidParameter(format!("kernel {id} needs a phase")))
        };
        Ok(match id {
            KernelId::K0 => KernelHandle::Universal,
            KernelId::KGamma => KernelHandle::Restricted(need_curve()?),
            KernelId::KH => KernelHandle::Phase(need_phase()?),
            KernelId::KHStar => KernelHandle::DualPhase(need_phase()?),
            KernelId::KS => KernelHandle::KerzmanStein(need_curve()?),
        })
    }

    pub fn id(&self) -> KernelId {
        match self {
            KernelHandle::Universal => KernelId::K0,
            KernelHandle::Restricted(_) => KernelId::KGamma,
            KernelHandle::Phase(_) => KernelId::KH,
            KernelHandle::DualPhase(_) => KernelId::KHStar,
            KernelHandle::KerzmanStein(_) => KernelId::KS,
        }
    }

    pub fn curve(&self) -> Option<&CurveSpec> {
        match self {
            KernelHandle::Restricted(s) | KernelHandle::KerzmanStein(s) => Some(s),
            _ => None,
        }
    }

    /// `K(z_i, z_j)` in double-double.
    pub(crate) fn eval_dd(&self, t: &Triple, i: usize, j: usize) -> Result<DdComplex> {
        let (w, z) = (t.z[i], t.z[j]);
        match self {
            KernelHandle::Universal => k0_dd(w, z),
            KernelHandle::Phase(h) => k_h_dd(h, w, z),
            KernelHandle::DualPhase(h) => Ok(k_h_dd(h, z, w)?.conj()),
            KernelHandle::Restricted(spec) => {
                let xs = t.xs.ok_or(Error::MissingAbscissas("kgamma"))?;
                k_gamma_dd(spec, xs[i], xs[j])
            }
            KernelHandle::KerzmanStein(spec) => {
                let xs = t.xs.ok_or(Error::MissingAbscissas("ks"))?;
                kerzman_stein_dd(spec, xs[i], xs[j])
            }
        }
    }

    /// `K(z_i, z_j)`.
    pub fn eval(&self, t: &Triple, i: usize, j: usize) -> Result<Complex64> {
        Ok(self.eval_dd(t, i, j)?.to_c64())
    }

    /// All six off-diagonal values, `out[i][j] = K(z_i, z_j)`.
    pub(crate) fn table_dd(&self, t: &Triple) -> Result<[[DdComplex; 3]; 3]> {
        let mut out = [[DdComplex::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    out[i][j] = self.eval_dd(t, i, j)?;
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for KernelHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelHandle::Universal => f.write_str("k0"),
            KernelHandle::Restricted(s) => write!(f, "kgamma[{s}]"),
            KernelHandle::Phase(h) => write!(f, "kh[{h}]"),
            KernelHandle::DualPhase(h) => write!(f, "khstar[{h}]"),
            KernelHandle::KerzmanStein(s) => write!(f, "ks[{s}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k0_examples() {
        assert_eq!(eval_k0(c(1., 0.), c(0., 0.)).unwrap(), c(1., 0.));
        assert_eq!(eval_k0(c(0., 1.), c(0., 0.)).unwrap(), c(0., -1.));
        assert_eq!(eval_k0(c(0., 0.), c(1., 0.)).unwrap(), c(-1., 0.));
        assert_eq!(eval_k0(c(2., 2.), c(2., 2.)), Err(Error::CoincidentPoints));
    }

    #[test]
    fn k_gamma_examples() {
        let line = CurveSpec::line(0.0, 0.0);
        assert_eq!(eval_k_gamma(&line, 1.0, 0.0).unwrap(), c(0., -1.));
        let k = eval_k_gamma(&CurveSpec::parabola(0.5), 1.0, 0.0).unwrap();
        assert!((k.re - SQRT_2 / 5.0).abs() < 1e-15);
        assert!((k.im + 3.0 * SQRT_2 / 5.0).abs() < 1e-15);
        assert!(matches!(
            eval_k_gamma(&line, 0.4, 0.4),
            Err(Error::CoincidentAbscissas(..))
        ));
        assert!(matches!(
            eval_k_gamma(&CurveSpec::bump_sine(), 0.5, 3.0),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn phase_kernel_examples() {
        let zero = PhaseFunction::constant(0.0);
        let (w, z) = (c(0.3, -1.2), c(2.0, 0.25));
        assert_eq!(eval_k_h(&zero, w, z).unwrap(), eval_k0(w, z).unwrap());
        let quarter = PhaseFunction::constant(FRAC_PI_2);
        let d = eval_k_h(&quarter, w, z).unwrap() - Complex64::i() * eval_k0(w, z).unwrap();
        assert!(d.norm() < 1e-15);
        assert_eq!(
            eval_k_h_star(&zero, c(1., 0.), c(0., 0.)).unwrap(),
            c(-1., 0.)
        );
        assert!(eval_k_h_star(&zero, w, w).is_err());
    }

    #[test]
    fn line_graph_phase_is_minus_half_pi() {
        let h = graph_phase(&CurveSpec::line(0.0, 0.0));
        assert_eq!(h.eval(c(4.0, 9.0)), -FRAC_PI_2);
        assert_eq!(h.tag(), "graph");
    }

    #[test]
    fn kerzman_stein_vanishes_on_lines() {
        for spec in [CurveSpec::line(0.0, 0.0), CurveSpec::line(-3.0, 2.0)] {
            for (x, y) in [(0.0, 1.0), (-5.0, 0.001), (2.5, -7.0)] {
                assert!(eval_kerzman_stein(&spec, x, y).unwrap().norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn handle_needs_abscissas_for_curve_kernels() {
        let t = Triple::new(c(0., 0.), c(1., 0.), c(0., 1.)).unwrap();
        let k = KernelHandle::Restricted(CurveSpec::parabola(1.0));
        assert_eq!(k.eval(&t, 0, 1), Err(Error::MissingAbscissas("kgamma")));
        assert!(KernelHandle::from_id(KernelId::KS, None, None).is_err());
    }

    #[test]
    fn ids_and_phases_parse() {
        for id in KernelId::ALL {
            assert_eq!(id.as_str().parse::<KernelId>().unwrap(), id);
        }
        assert!("k1".parse::<KernelId>().is_err());
        assert!(
            matches!("const:1.5".parse::<PhaseFunction>().unwrap().source, PhaseSource::Constant(v) if v == 1.5)
        );
        assert_eq!(
            "graph:parabola:1".parse::<PhaseFunction>().unwrap().tag(),
            "graph"
        );
        assert_eq!(
            "sinusoidal".parse::<PhaseFunction>().unwrap().tag(),
            "custom"
        );
        assert!("wobbly".parse::<PhaseFunction>().is_err());
    }
}
