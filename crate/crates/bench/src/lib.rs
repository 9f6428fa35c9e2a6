//! Seeded fixtures shared by the benchmarks.

use menger_core::experiments::TripleSampler;
use menger_core::geometry::WELL_CONDITIONED_FLOOR;
use menger_core::{CurveSpec, Interval, Triple};

pub const SEED: u64 = 7;

/// Well-conditioned triples in the unit box.
pub fn box_triples(n: usize) -> Vec<Triple> {
    TripleSampler::unit_box(SEED, n)
        .with_floor(WELL_CONDITIONED_FLOOR)
        .samples()
        .expect("unit-box sampler")
}

/// Triples on `spec` with abscissas uniform on `(-5, 5)`.
pub fn curve_triples(spec: &CurveSpec, n: usize) -> Vec<Triple> {
    TripleSampler::on_curve(spec.clone(), Interval { lo: -5.0, hi: 5.0 }, SEED, n)
        .samples()
        .expect("on-curve sampler")
}
