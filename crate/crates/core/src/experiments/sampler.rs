//! Seeded triple generation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{CurveSpec, Interval};
use crate::error::{Error, Result};
use crate::geometry::{relative_area, Triple};

/// Axis-aligned box `[re_lo, re_hi] x [im_lo, im_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl PlaneBox {
    pub const UNIT: PlaneBox = PlaneBox {
        re_lo: 0.0,
        re_hi: 1.0,
        im_lo: 0.0,
        im_hi: 1.0,
    };

    fn diameter(&self) -> f64 {
        (self.re_hi - self.re_lo).hypot(self.im_hi - self.im_lo)
    }
}

#[derive(Debug, Clone)]
pub enum SamplerMode {
    UniformBox(PlaneBox),
    /// Abscissas uniform on `interval`.
    OnCurve {
        spec: CurveSpec,
        interval: Interval,
    },
    /// Abscissas uniform on `(x0 - delta, x0 + delta)`.
    ShrinkingWindow {
        spec: CurveSpec,
        x0: f64,
        delta: f64,
    },
}

impl SamplerMode {
    pub fn curve(&self) -> Option<&CurveSpec> {
        match self {
            SamplerMode::UniformBox(_) => None,
            SamplerMode::OnCurve { spec, .. } | SamplerMode::ShrinkingWindow { spec, .. } => {
                Some(spec)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SamplerMode::UniformBox(b) => {
                format!(
                    "uniform-box [{}, {}] x [{}, {}]",
                    b.re_lo, b.re_hi, b.im_lo, b.im_hi
                )
            }
            SamplerMode::OnCurve { spec, interval } => {
                format!("on-curve {spec} ({}, {})", interval.lo, interval.hi)
            }
            SamplerMode::ShrinkingWindow { spec, x0, delta } => {
                format!("shrinking-window {spec} x0={x0} delta={delta}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct TripleSampler {
    pub mode: SamplerMode,
    pub seed: u64,
    pub count: usize,
    /// Minimum pairwise separation relative to the sampling width.
    pub min_separation: f64,
    /// Minimum relative area `2 Area / max l^2`; 0 accepts every
    /// non-coincident triple.
    pub conditioning_floor: f64,
}

const MAX_REJECTION_FACTOR: usize = 1000;

impl TripleSampler {
    pub fn new(mode: SamplerMode, seed: u64, count: usize) -> Self {
        TripleSampler {
            mode,
            seed,
            count,
            min_separation: 1e-6,
            conditioning_floor: 0.0,
        }
    }

    pub fn unit_box(seed: u64, count: usize) -> Self {
        Self::new(SamplerMode::UniformBox(PlaneBox::UNIT), seed, count)
    }

    pub fn on_curve(spec: CurveSpec, interval: Interval, seed: u64, count: usize) -> Self {
        Self::new(SamplerMode::OnCurve { spec, interval }, seed, count)
    }

    pub fn window(spec: CurveSpec, x0: f64, delta: f64, seed: u64, count: usize) -> Self {
        Self::new(
            SamplerMode::ShrinkingWindow { spec, x0, delta },
            seed,
            count,
        )
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.conditioning_floor = floor;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    fn validate(&self) -> Result<()> {
        match &self.mode {
            SamplerMode::UniformBox(b) => {
                if !(b.re_lo < b.re_hi && b.im_lo < b.im_hi && b.diameter().is_finite()) {
                    return Err(Error::InvalidParameter(format!("degenerate box {b:?}")));
                }
            }
            SamplerMode::OnCurve { spec, interval } => {
                if !interval.is_finite() || !spec.domain.contains_interval(interval) {
                    return Err(Error::InvalidParameter(format!(
                        "sampling interval ({}, {}) must be finite and inside the domain of {spec}",
                        interval.lo, interval.hi
                    )));
                }
            }
            SamplerMode::ShrinkingWindow { spec, x0, delta } => {
                let w = Interval::around(*x0, *delta)?;
                if !(*delta > 0.0) || !spec.domain.contains_interval(&w) {
                    return Err(Error::InvalidParameter(format!(
                        "window {x0} +/- {delta} must lie inside the domain of {spec}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The accepted triples, in generation order.
    pub fn samples(&self) -> Result<Vec<Triple>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count);
        let max_draws = MAX_REJECTION_FACTOR * self.count + MAX_REJECTION_FACTOR;
        for _ in 0..max_draws {
            if out.len() == self.count {
                break;
            }
            if let Some(t) = self.draw(&mut rng) {
                if self.conditioning_floor > 0.0 && relative_area(&t) < self.conditioning_floor {
                    continue;
                }
                out.push(t);
            }
        }
        if out.len() < self.count {
            return Err(Error::InvalidParameter(format!(
                "sampler accepted only {} of {} triples",
                out.len(),
                self.count
            )));
        }
        Ok(out)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Option<Triple> {
        match &self.mode {
            SamplerMode::UniformBox(b) => {
                let z: [Complex64; 3] = std::array::from_fn(|_| {
                    Complex64::new(
                        rng.random_range(b.re_lo..b.re_hi),
                        rng.random_range(b.im_lo..b.im_hi),
                    )
                });
                Triple::with_floor(z, self.min_separation * b.diameter()).ok()
            }
            SamplerMode::OnCurve { spec, interval } => {
                let xs: [f64; 3] =
                    std::array::from_fn(|_| rng.random_range(interval.lo..interval.hi));
                self.accept_abscissas(spec, xs, interval.length())
            }
            SamplerMode::ShrinkingWindow { spec, x0, delta } => {
                let xs: [f64; 3] =
                    std::array::from_fn(|_| rng.random_range(x0 - delta..x0 + delta));
                self.accept_abscissas(spec, xs, 2.0 * delta)
            }
        }
    }

    fn accept_abscissas(&self, spec: &CurveSpec, xs: [f64; 3], width: f64) -> Option<Triple> {
        let floor = self.min_separation * width;
        let close = (xs[0] - xs[1]).abs() < floor
            || (xs[0] - xs[2]).abs() < floor
            || (xs[1] - xs[2]).abs() < floor;
        if close {
            return None;
        }
        Triple::on_curve(spec, xs).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = TripleSampler::unit_box(7, 50).samples().unwrap();
        let b = TripleSampler::unit_box(7, 50).samples().unwrap();
        let c = TripleSampler::unit_box(8, 50).samples().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn on_curve_triples_carry_abscissas() {
        let spec = CurveSpec::parabola(1.0);
        let s = TripleSampler::on_curve(spec.clone(), Interval::new(-10.0, 10.0).unwrap(), 1, 100);
        for t in s.samples().unwrap() {
            let xs = t.xs.unwrap();
            for (x, z) in xs.iter().zip(t.z) {
                assert!(-10.0 < *x && *x < 10.0);
                assert_eq!(z.im, spec.height(*x));
            }
        }
    }

    #[test]
    fn floor_is_respected() {
        let s = TripleSampler::unit_box(3, 200).with_floor(1e-2);
        assert!(s
            .samples()
            .unwrap()
            .iter()
            .all(|t| relative_area(t) >= 1e-2));
    }

    #[test]
    fn invalid_configurations() {
        let spec = CurveSpec::bump_sine();
        assert!(TripleSampler::window(spec.clone(), 1.9, 0.5, 0, 10)
            .samples()
            .is_err());
        assert!(
            TripleSampler::on_curve(CurveSpec::cubic(), Interval::REAL_LINE, 0, 10)
                .samples()
                .is_err()
        );
        let line = CurveSpec::line(0.0, 0.0);
        let s =
            TripleSampler::on_curve(line, Interval::new(0.0, 1.0).unwrap(), 0, 5).with_floor(1e-3);
        assert!(s.samples().is_err());
    }
}
