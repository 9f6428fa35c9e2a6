//! Symmetrized forms `S[K]`, `S[Re K]`, `S[Im K]`, their graph closed
//! forms, and the remainder functionals `R_h` and `H`.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::CurveSpec;
use crate::dd::{Dd, DdComplex};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::geometry::{
    admissible_order, conditioning, is_admissible, menger_curvature_sq, triangle_stats,
    Conditioning, Triple, PERMUTATIONS, TRIPLE_COLUMNS,
};
use crate::kernels::{KernelHandle, PhaseFunction};

/// `c^2 max(l)^2` below this counts as collinear in the identity routes.
pub const C_SQ_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationResult {
    pub full: Complex64,
    pub re_part: f64,
    pub im_part: f64,
    pub c_sq: f64,
    pub condition: Conditioning,
}

impl SymmetrizationResult {
    pub fn full_ratio(&self) -> f64 {
        self.full.re / self.c_sq
    }

    pub fn re_ratio(&self) -> f64 {
        self.re_part / self.c_sq
    }

    pub fn im_ratio(&self) -> f64 {
        self.im_part / self.c_sq
    }
}

/// `2 sum_j sum_{k<l} f(K_jk) f(K_jl)` over the off-diagonal table.
fn half_sum(table: &[[DdComplex; 3]; 3], f: impl Fn(DdComplex) -> Dd) -> Dd {
    let mut acc = Dd::ZERO;
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        acc = acc + f(table[j][k]) * f(table[j][l]);
    }
    acc * 2.0
}

/// The six-term sum `sum_sigma K(z_s1, z_s2) conj K(z_s1, z_s3)` and its
/// real/imaginary-kernel halves.
pub fn symmetrize(k: &KernelHandle, t: &Triple) -> Result<SymmetrizationResult> {
    let table = k.table_dd(t)?;
    let mut full = DdComplex::ZERO;
    for [a, b, c] in PERMUTATIONS {
        full = full + table[a][b] * table[a][c].conj();
    }
    Ok(SymmetrizationResult {
        full: full.to_c64(),
        re_part: half_sum(&table, |z| z.re).to_f64(),
        im_part: half_sum(&table, |z| z.im).to_f64(),
        c_sq: menger_curvature_sq(t),
        condition: conditioning(t),
    })
}

/// The swapped-argument variant `sum_sigma K(z_s2, z_s1) conj K(z_s3, z_s1)`.
pub fn symmetrize_tilde(k: &KernelHandle, t: &Triple) -> Result<Complex64> {
    let table = k.table_dd(t)?;
    let mut full = DdComplex::ZERO;
    for [a, b, c] in PERMUTATIONS {
        full = full + table[b][a] * table[c][a].conj();
    }
    Ok(full.to_c64())
}

/// Evaluates `symmetrize` over many triples in parallel, preserving order.
pub fn symmetrize_batch(k: &KernelHandle, triples: &[Triple]) -> Vec<Result<SymmetrizationResult>> {
    triples.par_iter().map(|t| symmetrize(k, t)).collect()
}

/// Column order of [`write_batch_csv`].
pub const BATCH_COLUMNS: [&str; 14] = [
    "z1_re",
    "z1_im",
    "z2_re",
    "z2_im",
    "z3_re",
    "z3_im",
    "c_sq",
    "full_re",
    "full_im",
    "re_part",
    "im_part",
    "re_ratio",
    "im_ratio",
    "condition",
];

pub fn write_batch_csv<W: Write>(out: W, rows: &[(Triple, SymmetrizationResult)]) -> Result<()> {
    debug_assert_eq!(&BATCH_COLUMNS[..6], &TRIPLE_COLUMNS);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BATCH_COLUMNS)?;
    for (t, r) in rows {
        let mut rec: Vec<String> = t.to_row().iter().map(|&v| sig17(v)).collect();
        for v in [
            r.c_sq,
            r.full.re,
            r.full.im,
            r.re_part,
            r.im_part,
            r.re_ratio(),
            r.im_ratio(),
        ] {
            rec.push(sig17(v));
        }
        rec.push(r.condition.as_str().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

struct GraphData {
    x: [f64; 3],
    a: [f64; 3],
    d: [f64; 3],
}

fn graph_data(spec: &CurveSpec, xs: [f64; 3]) -> Result<GraphData> {
    Triple::on_curve(spec, xs)?;
    Ok(GraphData {
        x: xs,
        a: xs.map(|x| spec.height(x)),
        d: xs.map(|x| spec.slope(x)),
    })
}

impl GraphData {
    fn dist_sq(&self, j: usize, k: usize) -> f64 {
        (self.x[j] - self.x[k]).powi(2) + (self.a[j] - self.a[k]).powi(2)
    }

    /// `A'_j (x_j - x_k) - (A_j - A_k)`.
    fn re_num(&self, j: usize, k: usize) -> f64 {
        (Dd::diff(self.x[j], self.x[k]) * self.d[j] - Dd::diff(self.a[j], self.a[k])).to_f64()
    }

    /// `(x_k - x_j) + A'_j (A_k - A_j)`.
    fn im_num(&self, j: usize, k: usize) -> f64 {
        (Dd::diff(self.x[k], self.x[j]) + Dd::diff(self.a[k], self.a[j]) * self.d[j]).to_f64()
    }

    fn terms(&self, num: impl Fn(&Self, usize, usize) -> f64) -> [f64; 3] {
        std::array::from_fn(|j| {
            let (k, l) = ((j + 1) % 3, (j + 2) % 3);
            let s2 = 1.0 + self.d[j] * self.d[j];
            2.0 * num(self, j, k) * num(self, j, l) / (s2 * self.dist_sq(j, k) * self.dist_sq(j, l))
        })
    }
}

/// Per-vertex terms of the graph form of `S[Re K_Gamma]`.
pub fn graph_terms_re(spec: &CurveSpec, xs: [f64; 3]) -> Result<[f64; 3]> {
    Ok(graph_data(spec, xs)?.terms(GraphData::re_num))
}

/// Per-vertex terms of the graph form of `S[Im K_Gamma]`.
pub fn graph_terms_im(spec: &CurveSpec, xs: [f64; 3]) -> Result<[f64; 3]> {
    Ok(graph_data(spec, xs)?.terms(GraphData::im_num))
}

pub fn s_re_graph(spec: &CurveSpec, xs: [f64; 3]) -> Result<f64> {
    Ok(graph_terms_re(spec, xs)?.iter().sum())
}

pub fn s_im_graph(spec: &CurveSpec, xs: [f64; 3]) -> Result<f64> {
    Ok(graph_terms_im(spec, xs)?.iter().sum())
}

/// Natural magnitude of the real-part terms: the same products with every
/// numerator difference replaced by the sum of absolute values.
pub fn graph_scale_re(spec: &CurveSpec, xs: [f64; 3]) -> Result<[f64; 3]> {
    let g = graph_data(spec, xs)?;
    let num = |g: &GraphData, j: usize, k: usize| {
        g.d[j].abs() * (g.x[j] - g.x[k]).abs() + (g.a[j] - g.a[k]).abs()
    };
    Ok(g.terms(num))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `S[Re K_h] = c^2 (1/2 + R_h)`.
    Remainder,
    /// `S[K_h*] = c^2 H`.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderReport {
    pub functional: Functional,
    /// Value of the functional (identity route).
    pub value: f64,
    pub via_formula: f64,
    pub via_identity: f64,
    /// Principal argument of `z2 - z1` in the admissible order.
    pub alpha21: f64,
    pub ordered: Triple,
    pub condition: Conditioning,
}

impl RemainderReport {
    pub fn discrepancy(&self) -> f64 {
        (self.via_formula - self.via_identity).abs() / self.via_formula.abs().max(1.0)
    }
}

fn guarded_c_sq(t: &Triple) -> Result<f64> {
    let s = triangle_stats(t);
    let c2 = menger_curvature_sq(t);
    let m = s.max_side();
    if s.orientation == 0 || c2 * m * m < C_SQ_GUARD {
        return Err(Error::Collinear);
    }
    Ok(c2)
}

fn reduce(angle: f64) -> f64 {
    angle.rem_euclid(TAU)
}

/// Cosine-bracket form of `R_h` on a triple already in admissible order.
pub fn rh_formula(h: &PhaseFunction, t: &Triple) -> Result<f64> {
    if !is_admissible(t) {
        return Err(Error::InvalidParameter(
            "triple is not in admissible order".into(),
        ));
    }
    let s = triangle_stats(t);
    let [z1, z2, z3] = t.z;
    let alpha21 = (z2 - z1).arg();
    let frak = |z: Complex64| reduce(2.0 * h.eval(z) - 2.0 * alpha21);
    let [l1, l2, l3] = s.l;
    let [th1, th2, _] = s.theta;
    let bracket = l1 * reduce(frak(z1) - th1).cos() + l2 * reduce(frak(z2) + th2).cos()
        - l3 * reduce(frak(z3) + th2 - th1).cos();
    let four_area = 4.0 * s.area;
    Ok(l1 * l2 * l3 / (four_area * four_area) * bracket)
}

/// Cosine-bracket form of `H` on a triple already in admissible order.
pub fn h_formula(h: &PhaseFunction, t: &Triple) -> Result<f64> {
    if !is_admissible(t) {
        return Err(Error::InvalidParameter(
            "triple is not in admissible order".into(),
        ));
    }
    let s = triangle_stats(t);
    let [h1, h2, h3] = t.z.map(|z| h.eval(z));
    let [l1, l2, l3] = s.l;
    let [th1, th2, th3] = s.theta;
    let bracket = l1 * reduce(h2 - h3 + th1).cos()
        + l2 * reduce(h1 - h3 - th2).cos()
        + l3 * reduce(h1 - h2 + th3).cos();
    let four_area = 4.0 * s.area;
    Ok(2.0 * l1 * l2 * l3 / (four_area * four_area) * bracket)
}

/// `R_h` by the cosine formula (on the admissible order) and by
/// `S[Re K_h]/c^2 - 1/2`.
pub fn remainder_rh(h: &PhaseFunction, t: &Triple) -> Result<RemainderReport> {
    let c2 = guarded_c_sq(t)?;
    let ordered = admissible_order(t)?;
    let via_formula = rh_formula(h, &ordered)?;
    let via_identity = symmetrize(&KernelHandle::Phase(h.clone()), t)?.re_part / c2 - 0.5;
    Ok(RemainderReport {
        functional: Functional::Remainder,
        value: via_identity,
        via_formula,
        via_identity,
        alpha21: (ordered.z[1] - ordered.z[0]).arg(),
        ordered,
        condition: conditioning(t),
    })
}

/// `H` by the cosine formula and by `S[K_h*]/c^2`.
pub fn h_functional(h: &PhaseFunction, t: &Triple) -> Result<RemainderReport> {
    let c2 = guarded_c_sq(t)?;
    let ordered = admissible_order(t)?;
    let via_formula = h_formula(h, &ordered)?;
    let via_identity = symmetrize(&KernelHandle::DualPhase(h.clone()), t)?.full.re / c2;
    Ok(RemainderReport {
        functional: Functional::Dual,
        value: via_identity,
        via_formula,
        via_identity,
        alpha21: (ordered.z[1] - ordered.z[0]).arg(),
        ordered,
        condition: conditioning(t),
    })
}
