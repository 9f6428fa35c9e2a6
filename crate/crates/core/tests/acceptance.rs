//! Acceptance criteria 1-15. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use menger_core::experiments::closed_forms::{symmetric_parabola_im, symmetric_parabola_triple};
use menger_core::experiments::{
    extremal_ratio, run_suite, Objective, RatioSearchReport, Region, SuiteId, SuiteReport,
    Tolerances, TripleSampler,
};
use menger_core::format::sig17;
use menger_core::geometry::{
    menger_curvature_sq, menger_graph_sq, relative_area, WELL_CONDITIONED_FLOOR,
};
use menger_core::symmetry::symmetrize;
use menger_core::{Complex64, CurveSpec, Interval, KernelHandle, Triple};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// Report artifacts kept for the determinism rerun.
#[derive(Default)]
struct Artifacts {
    melnikov: Option<String>,
    global: Option<String>,
    search: Option<String>,
}

fn suite(id: SuiteId, sampler: &TripleSampler) -> SuiteReport {
    run_suite(id, sampler, &Tolerances::default()).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn value(r: &SuiteReport, id: &str) -> f64 {
    r.assertion(id)
        .unwrap_or_else(|| panic!("{}: no assertion {id}", r.suite))
        .value
}

fn summarize(r: &SuiteReport, ids: &[&str]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ids {
        let a = r
            .assertion(id)
            .unwrap_or_else(|| panic!("{}: no assertion {id}", r.suite));
        pass &= a.pass;
        parts.push(format!(
            "{id}={:.3e}{}",
            a.value,
            if a.pass { "" } else { "(!)" }
        ));
    }
    Outcome::new(pass, parts.join(" "))
}

/// Circumradius from the intersection of two perpendicular bisectors.
fn circumradius_oracle_c_sq(t: &Triple) -> f64 {
    let [a, b, c] = t.z;
    let (b, c) = (b - a, c - a);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    let (nb, nc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * nb - b.im * nc) / d;
    let uy = (b.re * nc - c.re * nb) / d;
    1.0 / (ux * ux + uy * uy)
}

fn melnikov_sampler() -> TripleSampler {
    TripleSampler::unit_box(SEED, 100_000).with_floor(WELL_CONDITIONED_FLOOR)
}

fn global_sampler() -> TripleSampler {
    TripleSampler::on_curve(
        CurveSpec::parabola(1.0),
        Interval {
            lo: -10.0,
            hi: 10.0,
        },
        SEED,
        100_000,
    )
}

fn search_probe() -> RatioSearchReport {
    extremal_ratio(
        &CurveSpec::parabola(0.5),
        Objective::MinReRatio,
        Region::cube(-10.0, 10.0),
        1_000_000,
        SEED,
    )
    .expect("search")
}

fn search_record(r: &RatioSearchReport) -> String {
    let mut s = format!(
        "{} {} {} {} {}",
        sig17(r.best_value),
        r.arg.map(sig17).join(","),
        sig17(r.grid_best),
        r.evaluations,
        r.trace.len()
    );
    for e in &r.trace {
        s.push_str(&format!(" {}:{}", sig17(e.end_value), e.evaluations));
    }
    s
}

fn c1(art: &mut Artifacts) -> Outcome {
    let r = suite(SuiteId::Melnikov, &melnikov_sampler());
    art.melnikov = Some(r.to_json_lines());
    let ids = ["full_vs_c_sq", "re_vs_half_c_sq", "im_vs_half_c_sq"];
    let pass = ids.iter().all(|id| value(&r, id) <= 1e-9);
    let mut o = summarize(&r, &ids);
    o.pass = pass && r.samples == 100_000;
    o
}

fn c2(_: &mut Artifacts) -> Outcome {
    let sampler = TripleSampler::unit_box(SEED, 10_000).with_floor(WELL_CONDITIONED_FLOOR);
    let r = suite(SuiteId::PhaseUniversality, &sampler);
    let mut o = Outcome::new(r.pass, format!("samples={}", r.samples));
    for a in &r.assertions {
        o.pass &= a.threshold <= 1e-9 || a.id.contains("samples");
        o.detail.push_str(&format!(" {}={:.3e}", a.id, a.value));
    }
    o
}

fn c3(_: &mut Artifacts) -> Outcome {
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let mut worst_area = 0.0f64;
    for t in TripleSampler::unit_box(SEED, 10_000)
        .with_floor(WELL_CONDITIONED_FLOOR)
        .samples()
        .unwrap()
    {
        worst_area = worst_area.max(rel(menger_curvature_sq(&t), circumradius_oracle_c_sq(&t)));
    }
    let mut worst_graph = 0.0f64;
    let mut used = 0;
    for (spec, lo, hi) in [
        (CurveSpec::parabola(1.0), -3.0, 3.0),
        (CurveSpec::cubic(), -2.0, 2.0),
    ] {
        let ts = TripleSampler::on_curve(spec.clone(), Interval { lo, hi }, SEED, 5_000)
            .samples()
            .unwrap();
        for t in ts
            .iter()
            .filter(|t| relative_area(t) > WELL_CONDITIONED_FLOOR)
        {
            let oracle = circumradius_oracle_c_sq(t);
            let graph = menger_graph_sq(&spec, t.xs.unwrap()).unwrap();
            worst_graph = worst_graph
                .max(rel(graph, oracle))
                .max(rel(menger_curvature_sq(t), oracle));
            used += 1;
        }
    }
    let spot = Triple::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    )
    .unwrap();
    let spot_err = (menger_curvature_sq(&spot) - 2.0).abs();
    Outcome::new(
        worst_area <= 1e-9 && worst_graph <= 1e-9 && spot_err <= 1e-12 && used > 5_000,
        format!("area_vs_oracle={worst_area:.3e} graph_vs_oracle={worst_graph:.3e} (n={used}) spot_err={spot_err:.1e}"),
    )
}

/// `Re K_Gamma(x_j, x_k) = p/(s_j (1+q^2))`, `Im = -(1 + A'_j q)/(s_j d (1+q^2))`
/// with `d = x_j - x_k`, `q` the divided difference of `A` and
/// `p = (A'_j d - (A_j - A_k))/d^2`, both factored by hand per curve.
fn graph_kernel_oracle(curve: &str, a: f64, xs: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let slope = |x: f64| {
        if curve == "parabola" {
            2.0 * a * x
        } else {
            3.0 * x * x
        }
    };
    let pq = |xj: f64, xk: f64| {
        if curve == "parabola" {
            (a, a * (xj + xk))
        } else {
            (2.0 * xj + xk, xj * xj + xj * xk + xk * xk)
        }
    };
    let kernel = |j: usize, k: usize| {
        let (p, q) = pq(xs[j], xs[k]);
        let aj = slope(xs[j]);
        let s = (1.0 + aj * aj).sqrt();
        let d = xs[j] - xs[k];
        (
            p / (s * (1.0 + q * q)),
            -(1.0 + aj * q) / (s * d * (1.0 + q * q)),
        )
    };
    let mut re = [0.0; 3];
    let mut im = [0.0; 3];
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        let (hk, ik) = kernel(j, k);
        let (hl, il) = kernel(j, l);
        re[j] = 2.0 * hk * hl;
        im[j] = 2.0 * ik * il;
    }
    (re, im)
}

fn c4(_: &mut Artifacts) -> Outcome {
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for (name, curve, a, spec) in [
        ("parabola:1", "parabola", 1.0, CurveSpec::parabola(1.0)),
        ("parabola:0.5", "parabola", 0.5, CurveSpec::parabola(0.5)),
        ("cubic", "cubic", 0.0, CurveSpec::cubic()),
    ] {
        let kernel = KernelHandle::Restricted(spec.clone());
        let ts = TripleSampler::on_curve(spec, Interval { lo: -3.0, hi: 3.0 }, SEED, 10_000)
            .samples()
            .unwrap();
        let mut w = 0.0f64;
        for t in &ts {
            let s = symmetrize(&kernel, t).unwrap();
            let (re, im) = graph_kernel_oracle(curve, a, t.xs.unwrap());
            for (terms, direct) in [(re, s.re_part), (im, s.im_part)] {
                let sum: f64 = terms.iter().sum();
                let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(direct.abs());
                w = w.max((sum - direct).abs() / scale);
            }
        }
        detail.push(format!("{name}={w:.3e}"));
        worst = worst.max(w);
    }
    Outcome::new(worst <= 1e-10, detail.join(" "))
}

fn c5(art: &mut Artifacts) -> Outcome {
    let r = suite(SuiteId::GlobalBounds, &global_sampler());
    art.global = Some(r.to_json_lines());
    let thresholds: Vec<f64> = r.assertions.iter().map(|a| a.threshold).collect();
    let mut o = summarize(
        &r,
        &["abs_re_le_1.5_m_sq", "c_sq_le_8_m_sq", "abs_im_le_9.5_m_sq"],
    );
    o.pass &= thresholds == [6.0, 32.0, 38.0] && r.samples == 100_000;
    o.detail.push_str(&format!(" thresholds={thresholds:?}"));
    o
}

fn c6(_: &mut Artifacts) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (spec, lo, hi) in [
        (CurveSpec::parabola(0.5), -10.0, 10.0),
        (CurveSpec::parabola(1.0), -10.0, 10.0),
        (CurveSpec::cosh(), -5.0, 5.0),
    ] {
        let name = spec.shorthand();
        let r = suite(
            SuiteId::Positivity,
            &TripleSampler::on_curve(spec, Interval { lo, hi }, SEED, 100_000),
        );
        let o = summarize(&r, &["min_re", "min_scaled_term"]);
        pass &= o.pass;
        detail.push(format!("{name}: {}", o.detail));
    }
    Outcome::new(pass, detail.join("; "))
}

fn c7(_: &mut Artifacts) -> Outcome {
    let r = suite(
        SuiteId::LocalLimit,
        &TripleSampler::window(CurveSpec::parabola(0.5), 0.0, 0.1, SEED, 10_000),
    );
    let finals: Vec<String> = ["c_sq", "re", "im"]
        .iter()
        .map(|q| {
            format!(
                "{q}@1e-3={:.2e}",
                value(&r, &format!("{q}_final_deviation"))
            )
        })
        .collect();
    let failed: Vec<&str> = r.failures().map(|a| a.id.as_str()).collect();
    Outcome::new(r.pass, format!("{} failed={failed:?}", finals.join(" ")))
}

fn c8(_: &mut Artifacts) -> Outcome {
    let kernel = KernelHandle::Restricted(CurveSpec::parabola(1.0));
    let direct2 = symmetrize(&kernel, &symmetric_parabola_triple(2.0).unwrap())
        .unwrap()
        .im_part;
    let closed2 = symmetric_parabola_im(2.0);
    let direct10 = symmetrize(&kernel, &symmetric_parabola_triple(10.0).unwrap())
        .unwrap()
        .im_part;
    let target = 0.025;
    Outcome::new(
        (direct2 - target).abs() <= 1e-10 && (closed2 - target).abs() <= 1e-10 && direct10 > 0.0,
        format!(
            "direct(2)={} closed(2)={} expected 0.025; direct(10)={:.3e}",
            sig17(direct2),
            sig17(closed2),
            direct10
        ),
    )
}

fn c9(_: &mut Artifacts) -> Outcome {
    let r = suite(
        SuiteId::Example43,
        &SuiteId::Example43.default_samplers(1, SEED)[0],
    );
    summarize(
        &r,
        &[
            "re_negative_a1_lambda100",
            "decomposition_vs_direct",
            "middle_term_negative",
            "decomposition_vs_direct_sampled",
        ],
    )
}

fn c10(_: &mut Artifacts) -> Outcome {
    let r = suite(
        SuiteId::Example41,
        &SuiteId::Example41.default_samplers(1, SEED)[0],
    );
    summarize(
        &r,
        &[
            "re_ratio_growth_k3",
            "re_ratio_growth_k4",
            "re_ratio_growth_k5",
            "re_ratio_k5",
        ],
    )
}

fn c11(_: &mut Artifacts) -> Outcome {
    let r = suite(
        SuiteId::Lemma16,
        &SuiteId::Lemma16.default_samplers(1, SEED)[0],
    );
    let mut o = summarize(
        &r,
        &[
            "re_over_c0_m_sq_eps_0.01",
            "re_over_c0_m_sq_eps_0.05",
            "re_over_c0_m_sq_eps_0.1",
        ],
    );
    o.pass &= r.samples == 300;
    o
}

fn c12(_: &mut Artifacts) -> Outcome {
    let sampler = TripleSampler::unit_box(SEED, 1_000).with_floor(WELL_CONDITIONED_FLOOR);
    let r = suite(SuiteId::Trichotomy, &sampler);
    let mut o = summarize(
        &r,
        &[
            "constant_remainder_zero",
            "constant_dual_one",
            "remainder_formula_vs_identity",
            "dual_formula_vs_identity",
            "half_minus_remainder_negative",
            "half_plus_remainder_negative",
            "both_halves_positive",
        ],
    );
    o.pass &=
        value(&r, "constant_remainder_zero") <= 1e-12 && value(&r, "constant_dual_one") <= 1e-12;
    o
}

fn c13(art: &mut Artifacts) -> Outcome {
    let spec = CurveSpec::parabola(0.5);
    let r = search_probe();
    art.search = Some(search_record(&r));
    let again = r.reevaluate(&spec).unwrap();
    let exact = again.to_bits() == r.best_value.to_bits();
    Outcome::new(
        r.best_value >= 0.5 - 1e-4 && exact && r.evaluations <= 1_000_000,
        format!(
            "min re_ratio={} at xs=({}) evaluations={} reevaluates_exactly={exact}",
            sig17(r.best_value),
            r.arg.map(|x| format!("{x:.6}")).join(", "),
            r.evaluations
        ),
    )
}

fn c14(_: &mut Artifacts) -> Outcome {
    let r = suite(
        SuiteId::KerzmanStein,
        &SuiteId::KerzmanStein.default_samplers(1, SEED)[0],
    );
    let mut o = summarize(
        &r,
        &[
            "parabola_bounded",
            "parabola_tail_variation",
            "line_vanishes",
            "skew_symmetry",
        ],
    );
    let mags: Vec<String> = (1..=6)
        .map(|k| r.config[&format!("ks_abs_h1e-{k}")].clone())
        .collect();
    o.detail
        .push_str(&format!(" |A|(h=1e-1..1e-6)=[{}]", mags.join(", ")));
    o
}

fn c15(art: &mut Artifacts) -> Outcome {
    let m = suite(SuiteId::Melnikov, &melnikov_sampler()).to_json_lines();
    let g = suite(SuiteId::GlobalBounds, &global_sampler()).to_json_lines();
    let s = search_record(&search_probe());
    let same = [
        ("criterion 1", art.melnikov.as_deref() == Some(m.as_str())),
        ("criterion 5", art.global.as_deref() == Some(g.as_str())),
        ("criterion 13", art.search.as_deref() == Some(s.as_str())),
    ];
    Outcome::new(
        same.iter().all(|(_, b)| *b),
        same.iter()
            .map(|(n, b)| format!("{n}:{}", if *b { "identical" } else { "differs" }))
            .collect::<Vec<_>>()
            .join(" "),
    )
}

type Criterion = fn(&mut Artifacts) -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 15] = [
        ("melnikov identities", c1),
        ("phase universality", c2),
        ("menger cross-formula agreement", c3),
        ("graph closed forms vs direct sums", c4),
        ("global bounds on y = x^2", c5),
        ("positivity on convex graphs", c6),
        ("local limits on y = x^2/2", c7),
        ("symmetric parabola imaginary part", c8),
        ("cubic counterexample", c9),
        ("bump-sine divergence", c10),
        ("cubic lower bound", c11),
        ("remainder and dual functionals", c12),
        ("extremal probe, alpha = 1/2", c13),
        ("kerzman-stein smoothness", c14),
        ("determinism", c15),
    ];
    let mut art = Artifacts::default();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(|| f(&mut art))).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        println!(
            "{} criterion {n:>2} {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(n);
        }
    }
    println!(
        "acceptance: {} of {} criteria pass; failing: {failed:?}",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
