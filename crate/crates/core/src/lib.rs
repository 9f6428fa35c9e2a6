//! Three-point symmetrization of Cauchy-type kernels on planar graph curves.
//!
//! The crate evaluates the symmetrized forms `S[K]`, `S[Re K]`, `S[Im K]`
//! for the universal Cauchy kernel, the curve-restricted kernel, phase
//! kernels and their duals, and checks them against Menger curvature.

pub mod curve;
pub mod dd;
pub mod error;
pub mod experiments;
pub mod format;
pub mod geometry;
pub mod kernels;
pub mod symmetry;

pub use curve::{BumpParams, CurveKind, CurvePointData, CurveSpec, CustomCurve, Interval};
pub use error::{Error, Result};
pub use geometry::{Conditioning, TriangleStats, Triple};
pub use kernels::{KernelHandle, KernelId, PhaseFunction};
pub use num_complex::Complex64;
pub use symmetry::{RemainderReport, SymmetrizationResult};
