//! Verification suites.
//!
//! Each suite evaluates a family of triples, reduces the sampled quantities
//! to worst cases (sequentially, in sample order) and records one
//! [`Assertion`] per checked inequality.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::closed_forms::{
    bump_triple, cubic_terms, cubic_triple, cubic_window_triple, symmetric_parabola_im,
    symmetric_parabola_triple, CUBIC_LOWER_C0,
};
use super::report::{Assertion, Extreme, SuiteReport};
use super::sampler::{SamplerMode, TripleSampler};
use crate::curve::{CurveKind, CurveSpec, Interval};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::geometry::{Conditioning, Triple};
use crate::kernels::{eval_kerzman_stein, graph_phase, KernelHandle, PhaseFunction};
use crate::symmetry::{
    graph_scale_re, graph_terms_re, h_functional, remainder_rh, symmetrize, SymmetrizationResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteId {
    Melnikov,
    PhaseUniversality,
    LocalLimit,
    GlobalBounds,
    Positivity,
    Example41,
    Example42,
    Example43,
    Lemma16,
    Trichotomy,
    KerzmanStein,
}

impl SuiteId {
    /// Every suite; `verify --suite all` runs exactly these.
    pub const ALL: [SuiteId; 11] = [
        SuiteId::Melnikov,
        SuiteId::PhaseUniversality,
        SuiteId::LocalLimit,
        SuiteId::GlobalBounds,
        SuiteId::Positivity,
        SuiteId::Example41,
        SuiteId::Example42,
        SuiteId::Example43,
        SuiteId::Lemma16,
        SuiteId::Trichotomy,
        SuiteId::KerzmanStein,
    ];

    /// Position in [`SuiteId::ALL`]; exhaustive so a new variant must be
    /// placed before the crate compiles.
    pub const fn index(self) -> usize {
        match self {
            SuiteId::Melnikov => 0,
            SuiteId::PhaseUniversality => 1,
            SuiteId::LocalLimit => 2,
            SuiteId::GlobalBounds => 3,
            SuiteId::Positivity => 4,
            SuiteId::Example41 => 5,
            SuiteId::Example42 => 6,
            SuiteId::Example43 => 7,
            SuiteId::Lemma16 => 8,
            SuiteId::Trichotomy => 9,
            SuiteId::KerzmanStein => 10,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Melnikov => "melnikov",
            SuiteId::PhaseUniversality => "phase_universality",
            SuiteId::LocalLimit => "local_limit",
            SuiteId::GlobalBounds => "global_bounds",
            SuiteId::Positivity => "positivity",
            SuiteId::Example41 => "example_41",
            SuiteId::Example42 => "example_42",
            SuiteId::Example43 => "example_43",
            SuiteId::Lemma16 => "lemma16",
            SuiteId::Trichotomy => "trichotomy",
            SuiteId::KerzmanStein => "kerzman_stein",
        }
    }

    /// The samplers a plain `verify --suite <id>` uses.
    pub fn default_samplers(self, count: usize, seed: u64) -> Vec<TripleSampler> {
        let wide = Interval {
            lo: -10.0,
            hi: 10.0,
        };
        match self {
            SuiteId::Melnikov | SuiteId::PhaseUniversality | SuiteId::Trichotomy => {
                vec![TripleSampler::unit_box(seed, count)
                    .with_floor(crate::geometry::WELL_CONDITIONED_FLOOR)]
            }
            SuiteId::LocalLimit => vec![TripleSampler::window(
                CurveSpec::parabola(0.5),
                0.0,
                0.1,
                seed,
                count,
            )],
            SuiteId::GlobalBounds => vec![TripleSampler::on_curve(
                CurveSpec::parabola(1.0),
                wide,
                seed,
                count,
            )],
            SuiteId::Positivity => vec![
                TripleSampler::on_curve(CurveSpec::parabola(0.5), wide, seed, count),
                TripleSampler::on_curve(CurveSpec::parabola(1.0), wide, seed, count),
                TripleSampler::on_curve(
                    CurveSpec::cosh(),
                    Interval { lo: -5.0, hi: 5.0 },
                    seed,
                    count,
                ),
            ],
            SuiteId::Example41 => vec![TripleSampler::window(
                CurveSpec::bump_sine(),
                0.5,
                0.4,
                seed,
                count,
            )],
            SuiteId::Example42 => vec![TripleSampler::on_curve(
                CurveSpec::parabola(1.0),
                wide,
                seed,
                count,
            )],
            SuiteId::Example43 | SuiteId::Lemma16 => {
                vec![TripleSampler::on_curve(
                    CurveSpec::cubic(),
                    wide,
                    seed,
                    count,
                )]
            }
            SuiteId::KerzmanStein => vec![TripleSampler::on_curve(
                CurveSpec::parabola(1.0),
                wide,
                seed,
                count,
            )],
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidSuite(format!("unknown suite `{s}`")))
    }
}

/// Thresholds used by the suites.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub melnikov_rel: f64,
    pub universality_rel: f64,
    pub split_rel: f64,
    pub graph_rel: f64,
    pub functional_agreement: f64,
    pub constant_phase: f64,
    pub positivity_abs: f64,
    pub local_final: f64,
    pub superpositivity_rel: f64,
    pub growth_factor: f64,
    pub divergence_floor: f64,
    pub unbounded_floor: f64,
    pub ks_variation: f64,
    pub ks_bound: f64,
    pub ks_line: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            melnikov_rel: 1e-9,
            universality_rel: 1e-9,
            split_rel: 1e-10,
            graph_rel: 1e-10,
            functional_agreement: 1e-8,
            constant_phase: 1e-12,
            positivity_abs: 1e-12,
            local_final: 1e-2,
            superpositivity_rel: 1e-2,
            growth_factor: 10.0,
            divergence_floor: 1e3,
            unbounded_floor: 1e3,
            ks_variation: 0.1,
            ks_bound: 1e2,
            ks_line: 1e-13,
        }
    }
}

impl Tolerances {
    pub fn entries(&self) -> [(&'static str, f64); 15] {
        [
            ("melnikov_rel", self.melnikov_rel),
            ("universality_rel", self.universality_rel),
            ("split_rel", self.split_rel),
            ("graph_rel", self.graph_rel),
            ("functional_agreement", self.functional_agreement),
            ("constant_phase", self.constant_phase),
            ("positivity_abs", self.positivity_abs),
            ("local_final", self.local_final),
            ("superpositivity_rel", self.superpositivity_rel),
            ("growth_factor", self.growth_factor),
            ("divergence_floor", self.divergence_floor),
            ("unbounded_floor", self.unbounded_floor),
            ("ks_variation", self.ks_variation),
            ("ks_bound", self.ks_bound),
            ("ks_line", self.ks_line),
        ]
    }

    /// Overrides one tolerance by name.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "melnikov_rel" => &mut self.melnikov_rel,
            "universality_rel" => &mut self.universality_rel,
            "split_rel" => &mut self.split_rel,
            "graph_rel" => &mut self.graph_rel,
            "functional_agreement" => &mut self.functional_agreement,
            "constant_phase" => &mut self.constant_phase,
            "positivity_abs" => &mut self.positivity_abs,
            "local_final" => &mut self.local_final,
            "superpositivity_rel" => &mut self.superpositivity_rel,
            "growth_factor" => &mut self.growth_factor,
            "divergence_floor" => &mut self.divergence_floor,
            "unbounded_floor" => &mut self.unbounded_floor,
            "ks_variation" => &mut self.ks_variation,
            "ks_bound" => &mut self.ks_bound,
            "ks_line" => &mut self.ks_line,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown tolerance `{key}`"
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

pub fn run_suite(id: SuiteId, sampler: &TripleSampler, tol: &Tolerances) -> Result<SuiteReport> {
    run_suite_with(id, sampler, tol, false)
}

/// As [`run_suite`]; `keep_samples` retains the per-triple results for CSV.
pub fn run_suite_with(
    id: SuiteId,
    sampler: &TripleSampler,
    tol: &Tolerances,
    keep_samples: bool,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new(id.as_str());
    r.config.insert("suite".into(), id.as_str().into());
    r.config.insert("sampler".into(), sampler.mode.describe());
    r.config.insert("seed".into(), sampler.seed.to_string());
    r.config.insert("count".into(), sampler.count.to_string());
    r.config
        .insert("min_separation".into(), sig17(sampler.min_separation));
    r.config.insert(
        "conditioning_floor".into(),
        sig17(sampler.conditioning_floor),
    );
    for (k, v) in tol.entries() {
        r.config.insert(format!("tol.{k}"), sig17(v));
    }
    let mut ctx = Ctx { r, keep_samples };
    match id {
        SuiteId::Melnikov => melnikov(&mut ctx, sampler, tol)?,
        SuiteId::PhaseUniversality => phase_universality(&mut ctx, sampler, tol)?,
        SuiteId::LocalLimit => local_limit(&mut ctx, sampler, tol)?,
        SuiteId::GlobalBounds => global_bounds(&mut ctx, sampler)?,
        SuiteId::Positivity => positivity(&mut ctx, sampler, tol)?,
        SuiteId::Example41 => example_41(&mut ctx, sampler, tol)?,
        SuiteId::Example42 => example_42(&mut ctx, tol)?,
        SuiteId::Example43 => example_43(&mut ctx, sampler, tol)?,
        SuiteId::Lemma16 => lemma16(&mut ctx, sampler)?,
        SuiteId::Trichotomy => trichotomy(&mut ctx, sampler, tol)?,
        SuiteId::KerzmanStein => kerzman_stein(&mut ctx, sampler, tol)?,
    }
    let mut r = ctx.r;
    r.runtime = start.elapsed();
    Ok(r)
}

struct Ctx {
    r: SuiteReport,
    keep_samples: bool,
}

impl Ctx {
    fn keep(&mut self, triples: &[Triple], results: &[SymmetrizationResult]) {
        if self.keep_samples {
            self.r
                .rows
                .extend(triples.iter().copied().zip(results.iter().copied()));
        }
    }
}

fn eval_all(k: &KernelHandle, triples: &[Triple]) -> Result<Vec<SymmetrizationResult>> {
    triples.par_iter().map(|t| symmetrize(k, t)).collect()
}

fn curve_sampler(sampler: &TripleSampler, suite: SuiteId) -> Result<(CurveSpec, Interval)> {
    match &sampler.mode {
        SamplerMode::OnCurve { spec, interval } => Ok((spec.clone(), *interval)),
        SamplerMode::ShrinkingWindow { spec, x0, delta } => {
            Ok((spec.clone(), Interval::around(*x0, *delta)?))
        }
        SamplerMode::UniformBox(_) => Err(Error::InvalidSuite(format!(
            "{suite} needs an on-curve sampler"
        ))),
    }
}

fn melnikov(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let triples = sampler.samples()?;
    let res = eval_all(&KernelHandle::Universal, &triples)?;
    let (mut full, mut re, mut im, mut split, mut imag) = (
        Extreme::new(),
        Extreme::new(),
        Extreme::new(),
        Extreme::new(),
        Extreme::new(),
    );
    let mut used = 0;
    for (t, s) in triples.iter().zip(&res) {
        let scale = s.full.norm().max(1.0);
        split.push((s.re_part + s.im_part - s.full.re).abs() / scale, t);
        imag.push(s.full.im.abs() / scale, t);
        if s.condition != Conditioning::WellConditioned {
            continue;
        }
        used += 1;
        full.push((s.full.re - s.c_sq).abs() / s.c_sq, t);
        re.push((s.re_part - 0.5 * s.c_sq).abs() / s.c_sq, t);
        im.push((s.im_part - 0.5 * s.c_sq).abs() / s.c_sq, t);
    }
    ctx.keep(&triples, &res);
    let r = &mut ctx.r;
    r.samples = triples.len();
    r.push(Assertion::at_least(
        "well_conditioned_samples",
        used as f64,
        1.0,
        None,
    ));
    r.push(Assertion::at_most(
        "full_vs_c_sq",
        full.value,
        tol.melnikov_rel,
        full.witness,
    ));
    r.push(Assertion::at_most(
        "re_vs_half_c_sq",
        re.value,
        tol.melnikov_rel,
        re.witness,
    ));
    r.push(Assertion::at_most(
        "im_vs_half_c_sq",
        im.value,
        tol.melnikov_rel,
        im.witness,
    ));
    r.push(Assertion::at_most(
        "split",
        split.value,
        tol.split_rel,
        split.witness,
    ));
    r.push(Assertion::at_most(
        "full_is_real",
        imag.value,
        tol.split_rel,
        imag.witness,
    ));
    Ok(())
}

/// The three phases exercised by the universality suite.
pub fn universality_phases() -> [PhaseFunction; 3] {
    [
        PhaseFunction::constant(0.7),
        graph_phase(&CurveSpec::parabola(1.0)),
        PhaseFunction::sinusoidal(),
    ]
}

fn phase_universality(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let triples = sampler.samples()?;
    for h in universality_phases() {
        let name = format!("{}_full_vs_c_sq", h.tag());
        let res = eval_all(&KernelHandle::Phase(h), &triples)?;
        let mut worst = Extreme::new();
        for (t, s) in triples.iter().zip(&res) {
            if s.condition == Conditioning::WellConditioned {
                worst.push((s.full.re - s.c_sq).abs() / s.c_sq, t);
            }
        }
        if ctx.r.rows.is_empty() {
            ctx.keep(&triples, &res);
        }
        ctx.r.push(Assertion::at_most(
            name,
            worst.value,
            tol.universality_rel,
            worst.witness,
        ));
    }
    ctx.r.samples = 3 * triples.len();
    Ok(())
}

/// Worst deviations `[|c^2 - k^2|, |S_re - 3/2 c^2|, |S_im + 1/2 c^2|]` and
/// the ratio deviations `[|S_re/c^2 - 3/2|, |S_im/c^2 + 1/2|]` over one window.
struct WindowStats {
    dev: [Extreme; 3],
    ratio: [Extreme; 2],
}

fn local_limit(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let SamplerMode::ShrinkingWindow { spec, x0, delta } = &sampler.mode else {
        return Err(Error::InvalidSuite(
            "local_limit needs a shrinking-window sampler".into(),
        ));
    };
    let k0 = spec.curve_data(*x0)?.curvature;
    if spec.second_derivative(*x0) == 0.0 {
        return Err(Error::InvalidSuite(format!(
            "local_limit at x0 = {x0}: A'' vanishes"
        )));
    }
    let k2 = k0 * k0;
    let kernel = KernelHandle::Restricted(spec.clone());
    let mut windows = Vec::new();
    for step in 0..3 {
        let d = delta / 10f64.powi(step);
        let s = TripleSampler {
            mode: SamplerMode::ShrinkingWindow {
                spec: spec.clone(),
                x0: *x0,
                delta: d,
            },
            seed: sampler.seed.wrapping_add(step as u64),
            ..sampler.clone()
        };
        let triples = s.samples()?;
        let res = eval_all(&kernel, &triples)?;
        let mut w = WindowStats {
            dev: [Extreme::new(); 3],
            ratio: [Extreme::new(); 2],
        };
        for (t, r) in triples.iter().zip(&res) {
            w.dev[0].push((r.c_sq - k2).abs(), t);
            w.dev[1].push((r.re_part - 1.5 * r.c_sq).abs(), t);
            w.dev[2].push((r.im_part + 0.5 * r.c_sq).abs(), t);
            w.ratio[0].push((r.re_ratio() - 1.5).abs(), t);
            w.ratio[1].push((r.im_ratio() + 0.5).abs(), t);
        }
        ctx.keep(&triples, &res);
        ctx.r.samples += triples.len();
        windows.push((d, w));
    }
    let names = ["c_sq", "re", "im"];
    for (q, name) in names.iter().enumerate() {
        for i in 0..2 {
            let (a, b) = (&windows[i].1.dev[q], &windows[i + 1].1.dev[q]);
            ctx.r.push(Assertion::below(
                format!(
                    "{name}_decreasing_{}_to_{}",
                    sig17(windows[i].0),
                    sig17(windows[i + 1].0)
                ),
                b.value / a.value,
                1.0,
                b.witness,
            ));
        }
        let last = &windows[2].1.dev[q];
        ctx.r.push(Assertion::below(
            format!("{name}_final_deviation"),
            last.value,
            tol.local_final,
            last.witness,
        ));
    }
    // tilde-eps = k0^2/2 gives the bound tilde-eps/(k0^2 - tilde-eps) = 1
    for (q, name) in ["re_ratio", "im_ratio"].iter().enumerate() {
        let worst = windows
            .iter()
            .map(|(_, w)| w.ratio[q])
            .fold(Extreme::new(), |mut acc, e| {
                if let Some(t) = e.witness {
                    acc.push(e.value, &t);
                }
                acc
            });
        ctx.r.push(Assertion::below(
            format!("{name}_local_bound"),
            worst.value,
            1.0,
            worst.witness,
        ));
    }
    Ok(())
}

fn global_bounds(ctx: &mut Ctx, sampler: &TripleSampler) -> Result<()> {
    let (spec, interval) = curve_sampler(sampler, SuiteId::GlobalBounds)?;
    let m = spec.lipschitz_of_derivative(interval, 10_000)?;
    let m2 = m * m;
    let triples = sampler.samples()?;
    let res = eval_all(&KernelHandle::Restricted(spec), &triples)?;
    let (mut re, mut c2, mut im) = (Extreme::new(), Extreme::new(), Extreme::new());
    for (t, s) in triples.iter().zip(&res) {
        re.push(s.re_part.abs(), t);
        c2.push(s.c_sq, t);
        im.push(s.im_part.abs(), t);
    }
    ctx.keep(&triples, &res);
    ctx.r.config.insert("lipschitz_m".into(), sig17(m));
    ctx.r.samples = triples.len();
    ctx.r.push(Assertion::at_most(
        "abs_re_le_1.5_m_sq",
        re.value,
        1.5 * m2,
        re.witness,
    ));
    ctx.r.push(Assertion::at_most(
        "c_sq_le_8_m_sq",
        c2.value,
        8.0 * m2,
        c2.witness,
    ));
    ctx.r.push(Assertion::at_most(
        "abs_im_le_9.5_m_sq",
        im.value,
        9.5 * m2,
        im.witness,
    ));
    Ok(())
}

fn fixed_concavity(spec: &CurveSpec, interval: Interval) -> bool {
    if let Some(b) = spec.has_fixed_concavity() {
        return b;
    }
    let n = 10_000;
    let w = interval.length() / n as f64;
    let signs: Vec<f64> = (0..=n)
        .map(|i| spec.second_derivative(interval.lo + i as f64 * w))
        .filter(|v| *v != 0.0)
        .map(f64::signum)
        .collect();
    signs.windows(2).all(|p| p[0] == p[1])
}

fn positivity(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let (spec, interval) = curve_sampler(sampler, SuiteId::Positivity)?;
    if !fixed_concavity(&spec, interval) {
        return Err(Error::InvalidSuite(format!(
            "positivity: A'' changes sign on {spec}"
        )));
    }
    let triples = sampler.samples()?;
    let res = eval_all(&KernelHandle::Restricted(spec.clone()), &triples)?;
    let terms: Vec<([f64; 3], [f64; 3])> = triples
        .par_iter()
        .map(|t| {
            let xs = t.xs.expect("on-curve sampler");
            Ok((graph_terms_re(&spec, xs)?, graph_scale_re(&spec, xs)?))
        })
        .collect::<Result<_>>()?;
    let (mut neg_re, mut neg_term) = (Extreme::new(), Extreme::new());
    for ((t, s), (term, scale)) in triples.iter().zip(&res).zip(&terms) {
        neg_re.push(-s.re_part, t);
        for j in 0..3 {
            neg_term.push(-term[j] / scale[j], t);
        }
    }
    ctx.keep(&triples, &res);
    ctx.r.samples = triples.len();
    ctx.r.push(Assertion::at_least(
        "min_re",
        -neg_re.value,
        -tol.positivity_abs,
        neg_re.witness,
    ));
    ctx.r.push(Assertion::at_least(
        "min_scaled_term",
        -neg_term.value,
        -tol.positivity_abs,
        neg_term.witness,
    ));

    // each vertex term tends to k0^2/2 near a point of nonzero curvature
    let x0 = 0.5 * (interval.lo + interval.hi);
    let k0 = spec.curve_data(x0)?.curvature;
    if k0 != 0.0 {
        let local = TripleSampler::window(spec.clone(), x0, 1e-3, sampler.seed, 100).samples()?;
        let mut dev = Extreme::new();
        for t in &local {
            for term in graph_terms_re(&spec, t.xs.expect("window sampler"))? {
                dev.push((term / (0.5 * k0 * k0) - 1.0).abs(), t);
            }
        }
        ctx.r.samples += local.len();
        ctx.r.push(Assertion::below(
            "local_superpositivity",
            dev.value,
            tol.superpositivity_rel,
            dev.witness,
        ));
    }
    Ok(())
}

fn bump_spec(sampler: &TripleSampler) -> CurveSpec {
    match sampler.mode.curve() {
        Some(s) if matches!(s.kind, CurveKind::BumpSine(_)) => s.clone(),
        _ => CurveSpec::bump_sine(),
    }
}

fn example_41(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let spec = bump_spec(sampler);
    let kernel = KernelHandle::Restricted(spec.clone());
    let mut ratios = Vec::new();
    for k in 2..=5 {
        let t = bump_triple(&spec, 0.5 - 10f64.powi(-k))?;
        let s = symmetrize(&kernel, &t)?;
        ratios.push((s.re_ratio().abs(), t));
    }
    for i in 0..ratios.len() - 1 {
        ctx.r.push(Assertion::at_least(
            format!("re_ratio_growth_k{}", i + 3),
            ratios[i + 1].0 / ratios[i].0,
            tol.growth_factor,
            Some(ratios[i + 1].1),
        ));
    }
    let (last, t) = ratios[ratios.len() - 1];
    ctx.r.push(Assertion::above(
        "re_ratio_k5",
        last,
        tol.divergence_floor,
        Some(t),
    ));

    let h = graph_phase(&spec);
    let mut rh = Vec::new();
    for l in [0.49, 0.499, 0.4999] {
        let t = bump_triple(&spec, l)?;
        rh.push((remainder_rh(&h, &t)?.value.abs(), t));
    }
    for i in 0..rh.len() - 1 {
        ctx.r.push(Assertion::at_least(
            format!("remainder_growth_{}", i + 1),
            rh[i + 1].0 / rh[i].0,
            tol.growth_factor,
            Some(rh[i + 1].1),
        ));
    }
    ctx.r.samples = ratios.len() + rh.len();
    Ok(())
}

fn example_42(ctx: &mut Ctx, tol: &Tolerances) -> Result<()> {
    let kernel = KernelHandle::Restricted(CurveSpec::parabola(1.0));
    for l in [2.0, 10.0] {
        let t = symmetric_parabola_triple(l)?;
        let direct = symmetrize(&kernel, &t)?.im_part;
        let closed = symmetric_parabola_im(l);
        ctx.r.push(Assertion::at_most(
            format!("closed_form_vs_direct_lambda_{l}"),
            (closed - direct).abs() / direct.abs(),
            tol.graph_rel,
            Some(t),
        ));
        if l == 10.0 {
            ctx.r.push(Assertion::above(
                "im_positive_lambda_10",
                direct,
                0.0,
                Some(t),
            ));
        }
    }
    ctx.r.samples = 2;
    Ok(())
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn example_43(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let kernel = KernelHandle::Restricted(CurveSpec::cubic());
    let t = cubic_triple(1.0, 100.0)?;
    let direct = symmetrize(&kernel, &t)?.re_part;
    let terms = cubic_terms(1.0, 100.0);
    let sum: f64 = terms.iter().sum();
    ctx.r.push(Assertion::below(
        "re_negative_a1_lambda100",
        direct,
        0.0,
        Some(t),
    ));
    ctx.r.push(Assertion::at_most(
        "decomposition_vs_direct",
        (sum - direct).abs() / direct.abs(),
        tol.graph_rel,
        Some(t),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let mut worst_ii = Extreme::new();
    let mut worst_sum = Extreme::new();
    for _ in 0..100 {
        let a = log_uniform(&mut rng, 1e-2, 1e2);
        let l = log_uniform(&mut rng, 1e-2, 1e2);
        let t = cubic_triple(a, l)?;
        let [i, ii, iii] = cubic_terms(a, l);
        worst_ii.push(ii, &t);
        let direct = symmetrize(&kernel, &t)?.re_part;
        let scale = i.abs() + ii.abs() + iii.abs();
        worst_sum.push((i + ii + iii - direct).abs() / scale, &t);
    }
    ctx.r.push(Assertion::below(
        "middle_term_negative",
        worst_ii.value,
        0.0,
        worst_ii.witness,
    ));
    ctx.r.push(Assertion::at_most(
        "decomposition_vs_direct_sampled",
        worst_sum.value,
        tol.graph_rel,
        worst_sum.witness,
    ));
    ctx.r.samples = 101;
    Ok(())
}

fn lemma16(ctx: &mut Ctx, sampler: &TripleSampler) -> Result<()> {
    let kernel = KernelHandle::Restricted(CurveSpec::cubic());
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let pairs: Vec<(f64, f64)> = (0..100)
        .map(|_| (rng.random_range(0.5..=1.0), rng.random_range(0.5..=1.0)))
        .collect();
    for eps in [0.01, 0.05, 0.1] {
        let bound = CUBIC_LOWER_C0 * (6.0 * eps) * (6.0 * eps);
        let mut worst = Extreme::new();
        for &(a, b) in &pairs {
            let t = cubic_window_triple(eps, a, b)?;
            let v = symmetrize(&kernel, &t)?.re_part;
            worst.push(-v / bound, &t);
        }
        ctx.r.push(Assertion::at_least(
            format!("re_over_c0_m_sq_eps_{eps}"),
            -worst.value,
            1.0,
            worst.witness,
        ));
    }
    ctx.r.samples = 3 * pairs.len();
    Ok(())
}

/// Skinny and fat triangles in every base direction, used for sign witnesses.
pub fn witness_family() -> Vec<Triple> {
    let mut out = Vec::new();
    for k in 0..16 {
        let dir = Complex64::from_polar(1.0, k as f64 * PI / 8.0);
        for eta in [0.3, 1e-3] {
            for s in 1..10 {
                let apex = Complex64::new(s as f64 / 10.0, eta) * dir;
                if let Ok(t) = Triple::new(Complex64::new(0.0, 0.0), dir, apex) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn trichotomy(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let triples = sampler.samples()?;
    let constant = PhaseFunction::constant(1.3);
    let wavy = PhaseFunction::sinusoidal();
    type Row = (f64, f64, f64, f64);
    let rows: Vec<Row> = triples
        .par_iter()
        .map(|t| {
            let rc = remainder_rh(&constant, t)?;
            let hc = h_functional(&constant, t)?;
            let rw = remainder_rh(&wavy, t)?;
            let hw = h_functional(&wavy, t)?;
            Ok((
                rc.value.abs(),
                (hc.value - 1.0).abs(),
                rw.discrepancy(),
                hw.discrepancy(),
            ))
        })
        .collect::<Result<_>>()?;
    let mut w = [Extreme::new(); 4];
    for (t, row) in triples.iter().zip(&rows) {
        w[0].push(row.0, t);
        w[1].push(row.1, t);
        if crate::geometry::conditioning(t) == Conditioning::WellConditioned {
            w[2].push(row.2, t);
            w[3].push(row.3, t);
        }
    }
    let r = &mut ctx.r;
    r.push(Assertion::at_most(
        "constant_remainder_zero",
        w[0].value,
        tol.constant_phase,
        w[0].witness,
    ));
    r.push(Assertion::at_most(
        "constant_dual_one",
        w[1].value,
        tol.constant_phase,
        w[1].witness,
    ));
    r.push(Assertion::at_most(
        "remainder_formula_vs_identity",
        w[2].value,
        tol.functional_agreement,
        w[2].witness,
    ));
    r.push(Assertion::at_most(
        "dual_formula_vs_identity",
        w[3].value,
        tol.functional_agreement,
        w[3].witness,
    ));

    let family = witness_family();
    let (mut hi, mut lo, mut small, mut big_h) = (
        Extreme::new(),
        Extreme::new(),
        Extreme::new(),
        Extreme::new(),
    );
    for t in &family {
        let rh = remainder_rh(&wavy, t)?.value;
        hi.push(rh, t);
        lo.push(-rh, t);
        small.push(-rh.abs(), t);
        big_h.push(h_functional(&wavy, t)?.value.abs(), t);
    }
    r.push(Assertion::above(
        "half_minus_remainder_negative",
        hi.value,
        0.5,
        hi.witness,
    ));
    r.push(Assertion::above(
        "half_plus_remainder_negative",
        lo.value,
        0.5,
        lo.witness,
    ));
    r.push(Assertion::below(
        "both_halves_positive",
        -small.value,
        0.5,
        small.witness,
    ));
    r.push(Assertion::above(
        "remainder_unbounded",
        hi.value.max(lo.value),
        tol.unbounded_floor,
        if hi.value >= lo.value {
            hi.witness
        } else {
            lo.witness
        },
    ));
    r.push(Assertion::above(
        "dual_unbounded",
        big_h.value,
        tol.unbounded_floor,
        big_h.witness,
    ));
    r.samples = triples.len() + family.len();
    Ok(())
}

fn kerzman_stein(ctx: &mut Ctx, sampler: &TripleSampler, tol: &Tolerances) -> Result<()> {
    let parabola = CurveSpec::parabola(1.0);
    let x = 0.3;
    let mags: Vec<f64> = (1..=6)
        .map(|k| Ok(eval_kerzman_stein(&parabola, x + 10f64.powi(-k), x)?.norm()))
        .collect::<Result<_>>()?;
    for (k, m) in mags.iter().enumerate() {
        ctx.r
            .config
            .insert(format!("ks_abs_h1e-{}", k + 1), sig17(*m));
    }
    let max = mags.iter().copied().fold(0.0, f64::max);
    ctx.r.push(Assertion::at_most(
        "parabola_bounded",
        max,
        tol.ks_bound,
        None,
    ));
    let tail = &mags[3..];
    let (tmin, tmax) = tail
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    ctx.r.push(Assertion::below(
        "parabola_tail_variation",
        (tmax - tmin) / tmax,
        tol.ks_variation,
        None,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let pairs: Vec<(f64, f64)> = (0..100)
        .map(|_| (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)))
        .filter(|(a, b)| a != b)
        .collect();
    let (mut line, mut skew) = (0.0f64, 0.0f64);
    for spec in [CurveSpec::line(0.0, 0.0), CurveSpec::line(-3.0, 2.0)] {
        for &(a, b) in &pairs {
            line = line.max(eval_kerzman_stein(&spec, a, b)?.norm());
        }
    }
    for &(a, b) in &pairs {
        let d = eval_kerzman_stein(&parabola, a, b)? + eval_kerzman_stein(&parabola, b, a)?.conj();
        skew = skew.max(d.norm());
    }
    ctx.r
        .push(Assertion::at_most("line_vanishes", line, tol.ks_line, None));
    ctx.r
        .push(Assertion::at_most("skew_symmetry", skew, tol.ks_line, None));
    ctx.r.samples = mags.len() + 3 * pairs.len();
    Ok(())
}
