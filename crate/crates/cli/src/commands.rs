use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use menger_core::experiments::closed_forms::{
    bump_triple, cubic_terms, cubic_triple, symmetric_parabola_im, symmetric_parabola_re,
    symmetric_parabola_triple,
};
use menger_core::experiments::{
    extremal_ratio, run_suite_with, Objective, Region, SamplerMode, SuiteId, SuiteReport,
    Tolerances, TripleSampler,
};
use menger_core::format::{parse_f64, sig17};
use menger_core::geometry::{read_triples_csv, Triple};
use menger_core::kernels::graph_phase;
use menger_core::symmetry::{
    h_functional, remainder_rh, symmetrize, symmetrize_batch, write_batch_csv,
};
use menger_core::{Complex64, CurveSpec, Interval, KernelHandle, KernelId, PhaseFunction};

use crate::config::Config;
use crate::{CurvesArgs, EvalArgs, ExtremalArgs, ReproduceArgs, VerifyArgs};

/// Relative agreement required of `reproduce` closed forms.
const CLOSED_FORM_REL: f64 = 1e-10;

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Option<Vec<f64>> = s.split(',').map(parse_f64).collect();
    match v {
        Some(v) if v.len() == n => Ok(v),
        _ => bail!("{what}: expected {n} comma-separated numbers, got `{s}`"),
    }
}

fn parse_points(s: &str) -> Result<Triple> {
    let pts: Vec<&str> = s.split(';').collect();
    if pts.len() != 3 {
        bail!("--points: expected three `re,im` pairs separated by `;`, got `{s}`");
    }
    let mut z = [Complex64::new(0.0, 0.0); 3];
    for (slot, p) in z.iter_mut().zip(pts) {
        let v = parse_list(p, 2, "--points")?;
        *slot = Complex64::new(v[0], v[1]);
    }
    Ok(Triple::new(z[0], z[1], z[2])?)
}

fn kv(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> io::Result<()> {
    writeln!(out, "{key} = {value}")
}

pub fn eval(mut cfg: Config, a: EvalArgs) -> Result<bool> {
    let id: KernelId = cfg.require::<String>("kernel", a.kernel)?.parse()?;
    let curve = cfg.curve(a.curve)?;
    let phase = cfg
        .opt::<String>("phase", a.phase)?
        .map(|s| s.parse::<PhaseFunction>())
        .transpose()?;
    let kernel = KernelHandle::from_id(id, curve.as_ref(), phase.as_ref())?;
    let points = cfg.opt::<String>("points", a.points)?;
    let xs = cfg.opt::<String>("xs", a.xs)?;
    let triples = cfg.opt::<String>("triples", a.triples.map(|p| p.display().to_string()))?;
    let out_path = cfg.opt::<String>("out", a.out.map(|p| p.display().to_string()))?;
    let attach = |t: Triple| -> Result<Triple> {
        match kernel.curve() {
            Some(spec) => Ok(t.attach_curve(spec)?),
            None => Ok(t),
        }
    };

    let single = match (points, xs, triples) {
        (Some(p), None, None) => attach(parse_points(&p)?)?,
        (None, Some(x), None) => {
            let spec = curve
                .as_ref()
                .ok_or_else(|| anyhow!("--xs needs --curve"))?;
            let v = parse_list(&x, 3, "--xs")?;
            Triple::on_curve(spec, [v[0], v[1], v[2]])?
        }
        (None, None, Some(path)) => {
            let file = File::open(&path).with_context(|| format!("opening {path}"))?;
            let ts = read_triples_csv(file)?
                .into_iter()
                .map(attach)
                .collect::<Result<Vec<_>>>()?;
            let mut rows = Vec::with_capacity(ts.len());
            for (i, (t, r)) in ts.iter().zip(symmetrize_batch(&kernel, &ts)).enumerate() {
                rows.push((*t, r.with_context(|| format!("triple {}", i + 1))?));
            }
            let mut out = output(out_path.as_deref().map(Path::new))?;
            write_batch_csv(&mut out, &rows)?;
            out.flush()?;
            return Ok(true);
        }
        _ => bail!("give exactly one of --points, --xs, --triples"),
    };

    let s = symmetrize(&kernel, &single)?;
    let mut out = output(out_path.as_deref().map(Path::new))?;
    kv(&mut out, "kernel", &kernel)?;
    for (i, z) in single.z.iter().enumerate() {
        kv(
            &mut out,
            &format!("z{}", i + 1),
            format_args!("{},{}", sig17(z.re), sig17(z.im)),
        )?;
    }
    kv(&mut out, "c_sq", sig17(s.c_sq))?;
    kv(&mut out, "full_re", sig17(s.full.re))?;
    kv(&mut out, "full_im", sig17(s.full.im))?;
    kv(&mut out, "re_part", sig17(s.re_part))?;
    kv(&mut out, "im_part", sig17(s.im_part))?;
    kv(&mut out, "re_ratio", sig17(s.re_ratio()))?;
    kv(&mut out, "im_ratio", sig17(s.im_ratio()))?;
    kv(&mut out, "condition", s.condition.as_str())?;
    let functional = match &kernel {
        KernelHandle::Phase(h) => Some(("rh", remainder_rh(h, &single))),
        KernelHandle::DualPhase(h) => Some(("h", h_functional(h, &single))),
        _ => None,
    };
    if let Some((name, Ok(r))) = functional {
        kv(&mut out, name, sig17(r.value))?;
        kv(&mut out, &format!("{name}_formula"), sig17(r.via_formula))?;
        kv(
            &mut out,
            &format!("{name}_discrepancy"),
            sig17(r.discrepancy()),
        )?;
    }
    out.flush()?;
    Ok(true)
}

struct SamplerOverride {
    curve: Option<CurveSpec>,
    interval: Option<Interval>,
    window: Option<(f64, f64)>,
}

impl SamplerOverride {
    fn is_empty(&self) -> bool {
        self.curve.is_none() && self.interval.is_none() && self.window.is_none()
    }

    fn apply(
        &self,
        id: SuiteId,
        samplers: Vec<TripleSampler>,
        explicit: bool,
    ) -> Result<Vec<TripleSampler>> {
        if self.is_empty() {
            return Ok(samplers);
        }
        let Some(first) = samplers.into_iter().next() else {
            return Ok(Vec::new());
        };
        let Some(default_spec) = first.mode.curve() else {
            if explicit {
                bail!("suite {id} samples the unit box; curve options do not apply");
            }
            return Ok(vec![first]);
        };
        let spec = self.curve.clone().unwrap_or_else(|| default_spec.clone());
        let mode = match (self.interval, self.window, &first.mode) {
            (Some(interval), _, _) => SamplerMode::OnCurve { spec, interval },
            (None, Some((x0, delta)), _) => SamplerMode::ShrinkingWindow { spec, x0, delta },
            (None, None, SamplerMode::ShrinkingWindow { x0, delta, .. }) => {
                SamplerMode::ShrinkingWindow {
                    spec,
                    x0: *x0,
                    delta: *delta,
                }
            }
            (None, None, SamplerMode::OnCurve { interval, .. }) => SamplerMode::OnCurve {
                spec,
                interval: *interval,
            },
            (None, None, SamplerMode::UniformBox(_)) => unreachable!("box samplers carry no curve"),
        };
        Ok(vec![TripleSampler { mode, ..first }])
    }
}

fn pair(cfg: &mut Config, keys: [&str; 2], values: [Option<f64>; 2]) -> Result<Option<(f64, f64)>> {
    let a = cfg.opt(keys[0], values[0])?;
    let b = cfg.opt(keys[1], values[1])?;
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        (None, None) => Ok(None),
        _ => bail!("--{} and --{} must be given together", keys[0], keys[1]),
    }
}

pub fn verify(mut cfg: Config, a: VerifyArgs) -> Result<bool> {
    let suite = cfg.get("suite", a.suite, "all".to_string())?;
    let ids: Vec<SuiteId> = if suite == "all" {
        SuiteId::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let n = cfg.get("n", a.n, 10_000usize)?;
    let seed = cfg.get("seed", a.seed, 1u64)?;
    let out_dir = cfg.out_dir(a.out_dir)?;
    let samples_csv = a.samples_csv || cfg.get("samples-csv", None, false)?;
    let over = SamplerOverride {
        curve: cfg.curve(a.curve)?,
        interval: pair(&mut cfg, ["lo", "hi"], [a.lo, a.hi])?
            .map(|(lo, hi)| Interval::new(lo, hi))
            .transpose()?,
        window: pair(&mut cfg, ["x0", "delta"], [a.x0, a.delta])?,
    };
    if over.interval.is_some() && over.window.is_some() {
        bail!("give either --lo/--hi or --x0/--delta, not both");
    }

    let mut tol = Tolerances::default();
    let cli_tol: Vec<(String, String)> = a
        .tol
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| anyhow!("--tol expects NAME=VALUE, got `{s}`"))
        })
        .collect::<Result<_>>()?;
    for (k, v) in cfg.tolerance_overrides().into_iter().chain(cli_tol) {
        let x = parse_f64(&v).ok_or_else(|| anyhow!("tolerance {k}: bad value `{v}`"))?;
        tol.set(&k, x)?;
    }

    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let echo: Vec<(String, String)> = cfg
        .resolved
        .iter()
        .filter(|(k, _)| k.as_str() != "out-dir")
        .map(|(k, v)| (format!("cli.{k}"), v.clone()))
        .collect();

    let mut all_pass = true;
    for id in ids {
        let samplers = over.apply(id, id.default_samplers(n, seed), suite != "all")?;
        let mut reports: Vec<SuiteReport> = Vec::with_capacity(samplers.len());
        for sampler in &samplers {
            let mut r = run_suite_with(id, sampler, &tol, samples_csv)
                .with_context(|| format!("suite {id}"))?;
            r.config.extend(echo.iter().cloned());
            eprintln!(
                "{id}: {} samples in {:.3} s",
                r.samples,
                r.runtime.as_secs_f64()
            );
            if r.pass {
                println!("PASS {id} [{}]", sampler.mode.describe());
            } else {
                let failed: Vec<String> = r
                    .failures()
                    .map(|f| {
                        format!(
                            "{} (value {}, threshold {})",
                            f.id,
                            sig17(f.value),
                            sig17(f.threshold)
                        )
                    })
                    .collect();
                println!(
                    "FAIL {id} [{}]: {}",
                    sampler.mode.describe(),
                    failed.join("; ")
                );
            }
            all_pass &= r.pass;
            reports.push(r);
        }
        let path = out_dir.join(format!("{id}.jsonl"));
        let mut f = BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        for r in &reports {
            r.write_json_lines(&mut f)?;
        }
        f.flush()?;
        if samples_csv {
            let path = out_dir.join(format!("{id}.samples.csv"));
            let rows: Vec<_> = reports
                .iter()
                .flat_map(|r| r.rows.iter().copied())
                .collect();
            let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_batch_csv(BufWriter::new(f), &rows)?;
        }
    }
    println!("{}", if all_pass { "ALL PASS" } else { "SOME FAILED" });
    Ok(all_pass)
}

fn row(out: &mut dyn Write, name: &str, direct: f64, closed: Option<f64>) -> io::Result<f64> {
    match closed {
        Some(c) => {
            let rel = (direct - c).abs() / c.abs().max(f64::MIN_POSITIVE);
            writeln!(out, "{name},{},{},{}", sig17(direct), sig17(c), sig17(rel))?;
            Ok(rel)
        }
        None => {
            writeln!(out, "{name},{},,", sig17(direct))?;
            Ok(0.0)
        }
    }
}

pub fn reproduce(mut cfg: Config, a: ReproduceArgs) -> Result<bool> {
    let example = cfg.require::<String>("example", a.example)?;
    let lambda = cfg.opt("lambda", a.lambda)?;
    let a_param = cfg.opt("a", a.a)?;
    let mut out = output(None)?;
    writeln!(out, "quantity,direct,closed_form,rel_diff")?;
    let mut worst: f64 = 0.0;
    match example.as_str() {
        "4.1" => {
            let spec = CurveSpec::bump_sine();
            let kernel = KernelHandle::Restricted(spec.clone());
            let h = graph_phase(&spec);
            let ls: Vec<f64> = match lambda {
                Some(l) => vec![l],
                None => (2..=5).map(|k| 0.5 - 10f64.powi(-k)).collect(),
            };
            for l in ls {
                let t = bump_triple(&spec, l)?;
                let s = symmetrize(&kernel, &t)?;
                row(
                    &mut out,
                    &format!("re_ratio@{}", sig17(l)),
                    s.re_ratio(),
                    None,
                )?;
                row(
                    &mut out,
                    &format!("rh@{}", sig17(l)),
                    remainder_rh(&h, &t)?.value,
                    None,
                )?;
            }
        }
        "4.2" => {
            let l = lambda.unwrap_or(2.0);
            let t = symmetric_parabola_triple(l)?;
            let s = symmetrize(&KernelHandle::Restricted(CurveSpec::parabola(1.0)), &t)?;
            worst = worst.max(row(
                &mut out,
                "s_im",
                s.im_part,
                Some(symmetric_parabola_im(l)),
            )?);
            worst = worst.max(row(
                &mut out,
                "s_re",
                s.re_part,
                Some(symmetric_parabola_re(l)),
            )?);
            row(&mut out, "c_sq", s.c_sq, None)?;
        }
        "4.3" => {
            let (a_val, l) = (a_param.unwrap_or(1.0), lambda.unwrap_or(100.0));
            let t = cubic_triple(a_val, l)?;
            let s = symmetrize(&KernelHandle::Restricted(CurveSpec::cubic()), &t)?;
            let terms = cubic_terms(a_val, l);
            worst = worst.max(row(&mut out, "s_re", s.re_part, Some(terms.iter().sum()))?);
            for (name, v) in ["term_i", "term_ii", "term_iii"].iter().zip(terms) {
                row(&mut out, name, v, None)?;
            }
            row(&mut out, "c_sq", s.c_sq, None)?;
        }
        other => bail!("unknown example `{other}` (4.1|4.2|4.3)"),
    }
    out.flush()?;
    Ok(worst <= CLOSED_FORM_REL)
}

fn parse_region(s: &str) -> Result<Region> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("--region: expected `lo:hi,lo:hi,lo:hi`, got `{s}`");
    }
    let mut bounds = [(0.0, 0.0); 3];
    for (b, p) in bounds.iter_mut().zip(parts) {
        let (lo, hi) = p
            .split_once(':')
            .and_then(|(lo, hi)| Some((parse_f64(lo)?, parse_f64(hi)?)))
            .ok_or_else(|| anyhow!("--region: bad range `{p}`"))?;
        *b = (lo, hi);
    }
    Ok(Region { bounds })
}

pub fn extremal(mut cfg: Config, a: ExtremalArgs) -> Result<bool> {
    let spec = cfg
        .curve(a.curve)?
        .ok_or_else(|| anyhow!("missing --curve"))?;
    let objective: Objective = cfg
        .get("objective", a.objective, "min-re-ratio".into())?
        .parse()?;
    let budget = cfg.get("budget", a.budget, 100_000u64)?;
    let seed = cfg.get("seed", a.seed, 1u64)?;
    let region = match cfg.opt::<String>("region", a.region)? {
        Some(r) => parse_region(&r)?,
        None => match pair(&mut cfg, ["lo", "hi"], [a.lo, a.hi])? {
            Some((lo, hi)) => Region::cube(lo, hi),
            None => Region::cube(-10.0, 10.0),
        },
    };
    let r = extremal_ratio(&spec, objective, region, budget, seed)?;
    let again = r.reevaluate(&spec)?;
    let exact = again.to_bits() == r.best_value.to_bits();
    let mut out = output(None)?;
    kv(&mut out, "curve", spec.shorthand())?;
    kv(&mut out, "objective", objective)?;
    let b: Vec<String> = region
        .bounds
        .iter()
        .map(|(lo, hi)| format!("{}:{}", sig17(*lo), sig17(*hi)))
        .collect();
    kv(&mut out, "region", b.join(","))?;
    kv(&mut out, "seed", seed)?;
    kv(&mut out, "budget", r.budget)?;
    kv(&mut out, "evaluations", r.evaluations)?;
    kv(&mut out, "grid_side", r.grid_side)?;
    kv(&mut out, "grid_best", sig17(r.grid_best))?;
    kv(&mut out, "best", sig17(r.best_value))?;
    let xs: Vec<String> = r.arg.iter().map(|&x| sig17(x)).collect();
    kv(&mut out, "witness_xs", xs.join(","))?;
    let zs: Vec<String> = r
        .arg_triple
        .z
        .iter()
        .map(|z| format!("{},{}", sig17(z.re), sig17(z.im)))
        .collect();
    kv(&mut out, "witness_points", zs.join(";"))?;
    kv(&mut out, "reevaluated", sig17(again))?;
    kv(&mut out, "reevaluation_exact", exact)?;
    out.flush()?;
    Ok(exact)
}

pub fn curves(mut cfg: Config, a: CurvesArgs) -> Result<bool> {
    let spec = cfg
        .curve(a.curve)?
        .ok_or_else(|| anyhow!("missing --curve"))?;
    let (lo, hi) = match pair(&mut cfg, ["lo", "hi"], [a.lo, a.hi])? {
        Some(p) => p,
        None if spec.domain.contains(-1.0) && spec.domain.contains(1.0) => (-1.0, 1.0),
        None => {
            let (c, r) = (
                0.5 * (spec.domain.lo + spec.domain.hi),
                0.45 * spec.domain.length(),
            );
            (c - r, c + r)
        }
    };
    let n = cfg.get("n", a.n, 101usize)?;
    if n < 2 {
        bail!("--n must be at least 2");
    }
    let out_path = cfg.opt::<String>("out", a.out.map(|p| p.display().to_string()))?;
    let mut out = output(out_path.as_deref().map(PathBuf::from).as_deref())?;
    writeln!(out, "x,height,slope,speed,curvature,phase")?;
    for i in 0..n {
        let x = if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        };
        let d = spec.curve_data(x)?;
        let cols = [d.x, d.height, d.slope, d.speed, d.curvature, d.phase].map(sig17);
        writeln!(out, "{}", cols.join(","))?;
    }
    out.flush()?;
    Ok(true)
}
