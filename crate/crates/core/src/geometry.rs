//! Triples of plane points, triangle statistics and Menger curvature.
//!
//! The signed area is computed from a double-double cross product of exact
//! coordinate differences, so orientation and collinearity are decided on
//! (very nearly) exact data.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::CurveSpec;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::format::sig17;

/// Default relative-area threshold below which a triple counts as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;
/// Relative area below which a triple is flagged ill-conditioned.
pub const WELL_CONDITIONED_FLOOR: f64 = 1e-6;

/// The six orderings of `(0, 1, 2)`.
pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub z: [Complex64; 3],
    /// Abscissas when the points lie on a declared curve.
    pub xs: Option<[f64; 3]>,
}

impl Triple {
    /// Pairwise-distinct points (floor 0).
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        Self::with_floor([z1, z2, z3], 0.0)
    }

    /// Points whose pairwise distances all exceed `floor`.
    pub fn with_floor(z: [Complex64; 3], floor: f64) -> Result<Self> {
        if z.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        let t = Triple { z, xs: None };
        if t.min_separation() <= floor {
            return Err(Error::CoincidentPoints);
        }
        Ok(t)
    }

    /// The curve points over abscissas `xs`.
    pub fn on_curve(spec: &CurveSpec, xs: [f64; 3]) -> Result<Self> {
        for &x in &xs {
            spec.check(x)?;
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if xs[i] == xs[j] {
                return Err(Error::CoincidentAbscissas(xs[i], xs[j]));
            }
        }
        Ok(Triple {
            z: xs.map(|x| spec.point(x)),
            xs: Some(xs),
        })
    }

    /// Reinterprets the real parts as abscissas on `spec`, checking that the
    /// imaginary parts match the curve heights.
    pub fn attach_curve(&self, spec: &CurveSpec) -> Result<Self> {
        let xs = self.z.map(|p| p.re);
        let t = Triple::on_curve(spec, xs)?;
        for (p, q) in self.z.iter().zip(&t.z) {
            if (p.im - q.im).abs() > 1e-9 * q.im.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "point {p} is not on curve {spec} (height {})",
                    q.im
                )));
            }
        }
        Ok(t)
    }

    pub fn permuted(&self, p: [usize; 3]) -> Self {
        Triple {
            z: p.map(|i| self.z[i]),
            xs: self.xs.map(|xs| p.map(|i| xs[i])),
        }
    }

    pub fn min_separation(&self) -> f64 {
        let [a, b, c] = self.z;
        (a - b).norm().min((a - c).norm()).min((b - c).norm())
    }

    /// `[re1, im1, re2, im2, re3, im3]`.
    pub fn to_row(&self) -> [f64; 6] {
        let [a, b, c] = self.z;
        [a.re, a.im, b.re, b.im, c.re, c.im]
    }

    pub fn from_row(row: &[f64]) -> Result<Self> {
        match row {
            [a, b, c, d, e, f] => Triple::new(
                Complex64::new(*a, *b),
                Complex64::new(*c, *d),
                Complex64::new(*e, *f),
            ),
            _ => Err(Error::Parse(format!(
                "triple row needs 6 values, got {}",
                row.len()
            ))),
        }
    }
}

/// Column names of the triple CSV layout.
pub const TRIPLE_COLUMNS: [&str; 6] = ["z1_re", "z1_im", "z2_re", "z2_im", "z3_re", "z3_im"];

/// Writes triples as headed CSV, six 17-digit floats per row.
pub fn write_triples_csv<W: Write>(out: W, triples: &[Triple]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIPLE_COLUMNS)?;
    for t in triples {
        w.write_record(t.to_row().map(sig17))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads six-column CSV; a non-numeric first row is treated as a header.
pub fn read_triples_csv<R: Read>(input: R) -> Result<Vec<Triple>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match vals {
            Ok(v) => out.push(Triple::from_row(&v)?),
            Err(_) if n == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("row {}: {e}", n + 1))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleStats {
    /// `l[j]` is the side opposite `z[j]`.
    pub l: [f64; 3],
    /// `theta[j]` is the interior angle at `z[j]`.
    pub theta: [f64; 3],
    pub area: f64,
    /// +1 counterclockwise, -1 clockwise, 0 collinear.
    pub orientation: i8,
    /// Index of the vertex opposite the longest side.
    pub apex: usize,
}

impl TriangleStats {
    pub fn max_side(&self) -> f64 {
        self.l[0].max(self.l[1]).max(self.l[2])
    }

    /// `2 Area / max l^2`.
    pub fn relative_area(&self) -> f64 {
        let m = self.max_side();
        2.0 * self.area / (m * m)
    }
}

/// `(b - a) x (c - a)` in double-double.
pub(crate) fn cross_dd(a: Complex64, b: Complex64, c: Complex64) -> Dd {
    let (ux, uy) = (Dd::diff(b.re, a.re), Dd::diff(b.im, a.im));
    let (vx, vy) = (Dd::diff(c.re, a.re), Dd::diff(c.im, a.im));
    ux * vy - uy * vx
}

fn dot_dd(a: Complex64, b: Complex64, c: Complex64) -> Dd {
    let (ux, uy) = (Dd::diff(b.re, a.re), Dd::diff(b.im, a.im));
    let (vx, vy) = (Dd::diff(c.re, a.re), Dd::diff(c.im, a.im));
    ux * vx + uy * vy
}

fn dist_sq(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm_sqr()
}

pub fn triangle_stats(t: &Triple) -> TriangleStats {
    let z = t.z;
    let cross = cross_dd(z[0], z[1], z[2]);
    let twice_area = cross.abs().to_f64();
    let l = [
        (z[1] - z[2]).norm(),
        (z[0] - z[2]).norm(),
        (z[0] - z[1]).norm(),
    ];
    let theta = std::array::from_fn(|j| {
        let d = dot_dd(z[j], z[(j + 1) % 3], z[(j + 2) % 3]).to_f64();
        twice_area.atan2(d)
    });
    let mut apex = 0;
    for j in 1..3 {
        if l[j] > l[apex] {
            apex = j;
        }
    }
    TriangleStats {
        l,
        theta,
        area: 0.5 * twice_area,
        orientation: cross.signum() as i8,
        apex,
    }
}

/// `c^2 = (4 Area / (l1 l2 l3))^2`; exactly 0 for collinear points.
pub fn menger_curvature_sq(t: &Triple) -> f64 {
    let z = t.z;
    let cross = cross_dd(z[0], z[1], z[2]);
    if cross.is_zero() {
        return 0.0;
    }
    let c = cross.to_f64();
    let d = dist_sq(z[1], z[2]) * dist_sq(z[0], z[2]) * dist_sq(z[0], z[1]);
    4.0 * c * c / d
}

/// Graph form of `c^2` from heights at abscissas `(u, x, v)`.
pub fn menger_graph_sq(spec: &CurveSpec, xs: [f64; 3]) -> Result<f64> {
    let [u, x, v] = xs;
    for p in xs {
        spec.check(p)?;
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if xs[i] == xs[j] {
            return Err(Error::CoincidentAbscissas(xs[i], xs[j]));
        }
    }
    let [au, ax, av] = xs.map(|p| spec.height(p));
    let num = Dd::from_f64(au) * Dd::diff(x, v)
        + Dd::from_f64(ax) * Dd::diff(v, u)
        + Dd::from_f64(av) * Dd::diff(u, x);
    let n = num.to_f64();
    let lu = (v - x).powi(2) + (av - ax).powi(2);
    let lx = (u - v).powi(2) + (au - av).powi(2);
    let lv = (x - u).powi(2) + (ax - au).powi(2);
    Ok(4.0 * n * n / (lu * lx * lv))
}

/// `2 Area <= tol * max(l)^2`.
pub fn is_collinear(t: &Triple, tol: f64) -> bool {
    let s = triangle_stats(t);
    let m = s.max_side();
    2.0 * s.area <= tol * m * m
}

pub fn relative_area(t: &Triple) -> f64 {
    triangle_stats(t).relative_area()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    WellConditioned,
    IllConditioned,
    Collinear,
}

impl Conditioning {
    pub fn as_str(self) -> &'static str {
        match self {
            Conditioning::WellConditioned => "well",
            Conditioning::IllConditioned => "ill",
            Conditioning::Collinear => "collinear",
        }
    }
}

pub fn conditioning(t: &Triple) -> Conditioning {
    let r = relative_area(t);
    if r <= COLLINEAR_TOL {
        Conditioning::Collinear
    } else if r < WELL_CONDITIONED_FLOOR {
        Conditioning::IllConditioned
    } else {
        Conditioning::WellConditioned
    }
}

/// Index permutation taking `t` to admissible order: the longest side is
/// `(a, b)`, swapped if needed so `(a, b, c)` is counterclockwise.
pub fn admissible_permutation(t: &Triple) -> Result<[usize; 3]> {
    let s = triangle_stats(t);
    if s.orientation == 0 || s.relative_area() <= COLLINEAR_TOL {
        return Err(Error::Collinear);
    }
    let c = s.apex;
    let (a, b) = ((c + 1) % 3, (c + 2) % 3);
    // cyclic relabelling preserves orientation
    Ok(if s.orientation > 0 {
        [a, b, c]
    } else {
        [b, a, c]
    })
}

pub fn admissible_order(t: &Triple) -> Result<Triple> {
    Ok(t.permuted(admissible_permutation(t)?))
}

/// Whether `(a, b, c)` is counterclockwise with the foot of the altitude
/// from `c` strictly inside `[a, b]`.
pub fn is_admissible(t: &Triple) -> bool {
    let [a, b, c] = t.z;
    if cross_dd(a, b, c).signum() <= 0.0 {
        return false;
    }
    let along = dot_dd(a, b, c);
    let base = Dd::diff(b.re, a.re).sqr() + Dd::diff(b.im, a.im).sqr();
    along.signum() > 0.0 && (base - along).signum() > 0.0
}
