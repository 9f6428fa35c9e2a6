//! Extremal search over abscissa triples on a curve.
//!
//! Half the budget goes to a jittered stratified grid (evaluated in
//! parallel), the rest to compass search restarted from the grid cells in
//! order of value. Every objective value comes from the direct permutation
//! sum, so a reported optimum re-evaluates bit-for-bit from its abscissas.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::geometry::Triple;
use crate::kernels::KernelHandle;
use crate::symmetry::symmetrize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MinReRatio,
    MaxImRatio,
    MinRe,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::MinReRatio => "min-re-ratio",
            Objective::MaxImRatio => "max-im-ratio",
            Objective::MinRe => "min-re",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Objective::MaxImRatio => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Objective::MinReRatio,
            Objective::MaxImRatio,
            Objective::MinRe,
        ]
        .into_iter()
        .find(|o| o.as_str() == s.trim())
        .ok_or_else(|| {
            Error::Parse(format!(
                "unknown objective `{s}` (min-re-ratio|max-im-ratio|min-re)"
            ))
        })
    }
}

/// Box of abscissa triples, one closed range per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub bounds: [(f64, f64); 3],
}

impl Region {
    pub fn cube(lo: f64, hi: f64) -> Self {
        Region {
            bounds: [(lo, hi); 3],
        }
    }

    fn validate(&self, spec: &CurveSpec) -> Result<()> {
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::DegenerateRegion(format!(
                    "coordinate {i}: [{lo}, {hi}]"
                )));
            }
            if !(spec.domain.contains(lo) && spec.domain.contains(hi)) {
                return Err(Error::DegenerateRegion(format!(
                    "coordinate {i}: [{lo}, {hi}] leaves the domain of {spec}"
                )));
            }
        }
        Ok(())
    }

    fn width(&self, i: usize) -> f64 {
        self.bounds[i].1 - self.bounds[i].0
    }

    fn clamp(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| x[i].clamp(self.bounds[i].0, self.bounds[i].1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub start: [f64; 3],
    pub start_value: f64,
    pub end_value: f64,
    pub moves: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSearchReport {
    pub objective: Objective,
    /// Objective value at `arg` (in the objective's own sign).
    pub best_value: f64,
    pub arg: [f64; 3],
    pub arg_triple: Triple,
    pub grid_side: usize,
    pub grid_best: f64,
    pub trace: Vec<TraceEntry>,
    pub budget: u64,
    pub evaluations: u64,
}

impl RatioSearchReport {
    pub fn reevaluate(&self, spec: &CurveSpec) -> Result<f64> {
        objective_value(spec, self.objective, self.arg)
    }
}

/// Objective at abscissas `xs` (raw sign).
pub fn objective_value(spec: &CurveSpec, objective: Objective, xs: [f64; 3]) -> Result<f64> {
    let t = Triple::on_curve(spec, xs)?;
    let r = symmetrize(&KernelHandle::Restricted(spec.clone()), &t)?;
    let v = match objective {
        Objective::MinReRatio => r.re_ratio(),
        Objective::MaxImRatio => r.im_ratio(),
        Objective::MinRe => r.re_part,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Collinear)
    }
}

/// Minimisation form; invalid points map to `+inf`.
fn cost(spec: &CurveSpec, objective: Objective, xs: [f64; 3]) -> f64 {
    objective_value(spec, objective, xs).map_or(f64::INFINITY, |v| objective.sign() * v)
}

/// Each restart may spend at most `1/RESTARTS` of the refinement budget;
/// restarts continue from successive grid cells until the budget is spent.
const RESTARTS: usize = 3;
const MIN_RESTART_BUDGET: u64 = 6;

pub fn extremal_ratio(
    spec: &CurveSpec,
    objective: Objective,
    region: Region,
    budget: u64,
    seed: u64,
) -> Result<RatioSearchReport> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    region.validate(spec)?;

    let grid_budget = (budget / 2).max(1);
    let g = ((grid_budget as f64).cbrt().floor() as usize).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell: [f64; 3] = std::array::from_fn(|i| region.width(i) / g as f64);
    let points: Vec<[f64; 3]> = (0..g * g * g)
        .map(|n| {
            let idx = [n / (g * g), (n / g) % g, n % g];
            std::array::from_fn(|i| {
                let u: f64 = rng.random();
                region.bounds[i].0 + (idx[i] as f64 + u) * cell[i]
            })
        })
        .collect();
    let costs: Vec<f64> = points
        .par_iter()
        .map(|&p| cost(spec, objective, p))
        .collect();
    let mut evaluations = points.len() as u64;

    let mut order: Vec<usize> = (0..points.len())
        .filter(|&i| costs[i].is_finite())
        .collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
    let Some(&first) = order.first() else {
        return Err(Error::DegenerateRegion(
            "objective undefined on every grid point".into(),
        ));
    };
    let grid_best = costs[first];
    let mut best = (costs[first], points[first]);

    let per_restart = budget.saturating_sub(evaluations) / RESTARTS as u64;
    let mut trace = Vec::new();
    for &s in &order {
        let left = budget.saturating_sub(evaluations);
        if left < MIN_RESTART_BUDGET {
            break;
        }
        let (value, at, entry) = compass(
            spec,
            objective,
            &region,
            points[s],
            costs[s],
            cell,
            per_restart.min(left),
        );
        evaluations += entry.evaluations;
        trace.push(entry);
        if value < best.0 {
            best = (value, at);
        }
    }

    let arg = best.1;
    Ok(RatioSearchReport {
        objective,
        best_value: objective.sign() * best.0,
        arg,
        arg_triple: Triple::on_curve(spec, arg)?,
        grid_side: g,
        grid_best: objective.sign() * grid_best,
        trace,
        budget,
        evaluations,
    })
}

/// Coordinate pattern search: polls `+-step` along each axis, moves to the
/// best improving poll point, halves the step when none improves.
fn compass(
    spec: &CurveSpec,
    objective: Objective,
    region: &Region,
    start: [f64; 3],
    start_cost: f64,
    initial_step: [f64; 3],
    budget: u64,
) -> (f64, [f64; 3], TraceEntry) {
    let mut x = start;
    let mut fx = start_cost;
    let mut step = initial_step;
    let mut used = 0u64;
    let mut moves = 0;
    let min_step: [f64; 3] = std::array::from_fn(|i| 1e-15 * region.width(i).max(1.0));
    while used + 6 <= budget && (0..3).any(|i| step[i] > min_step[i]) {
        let mut best = (fx, x);
        for i in 0..3 {
            for dir in [-1.0, 1.0] {
                let mut y = x;
                y[i] += dir * step[i];
                let y = region.clamp(y);
                let fy = cost(spec, objective, y);
                used += 1;
                if fy < best.0 {
                    best = (fy, y);
                }
            }
        }
        if best.0 < fx {
            (fx, x) = best;
            moves += 1;
        } else {
            step = step.map(|s| 0.5 * s);
        }
    }
    let entry = TraceEntry {
        start,
        start_value: objective.sign() * start_cost,
        end_value: objective.sign() * fx,
        moves,
        evaluations: used,
    };
    (fx, x, entry)
}
