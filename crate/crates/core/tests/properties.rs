use std::f64::consts::PI;

use menger_core::experiments::{extremal_ratio, Objective, Region, TripleSampler};
use menger_core::geometry::{
    admissible_order, is_admissible, menger_curvature_sq, menger_graph_sq, relative_area,
    triangle_stats,
};
use menger_core::kernels::{
    eval_k_gamma, eval_k_h, eval_k_h_star, eval_kerzman_stein, graph_phase,
};
use menger_core::symmetry::{h_functional, remainder_rh, symmetrize, symmetrize_batch};
use menger_core::{Complex64, CurveSpec, Interval, KernelHandle, PhaseFunction, Triple};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| Complex64::new(x, y))
}

/// Triples with relative area at least `1e-3`.
fn fat_triple() -> impl Strategy<Value = Triple> {
    (point(), point(), point()).prop_filter_map("thin or coincident", |(a, b, c)| {
        Triple::new(a, b, c)
            .ok()
            .filter(|t| relative_area(t) > 1e-3)
    })
}

fn abscissas(lo: f64, hi: f64) -> impl Strategy<Value = [f64; 3]> {
    [lo..hi, lo..hi, lo..hi].prop_filter("separated", |x| {
        (x[0] - x[1]).abs() > 1e-3 && (x[0] - x[2]).abs() > 1e-3 && (x[1] - x[2]).abs() > 1e-3
    })
}

fn phase() -> impl Strategy<Value = PhaseFunction> {
    prop_oneof![
        (-10.0..10.0f64).prop_map(PhaseFunction::constant),
        Just(PhaseFunction::sinusoidal()),
        (0.1..3.0f64).prop_map(|a| graph_phase(&CurveSpec::parabola(a))),
        (0.5..5.0f64, -PI..PI)
            .prop_map(|(k, p)| PhaseFunction::custom("wave", move |z: Complex64| {
                (k * z.re + p).sin() * z.im.cosh()
            })),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn melnikov_identity_and_split(t in fat_triple()) {
        let s = symmetrize(&KernelHandle::Universal, &t).unwrap();
        prop_assert!(rel(s.full.re, s.c_sq) < 1e-12);
        prop_assert!(rel(s.re_part, 0.5 * s.c_sq) < 1e-12);
        prop_assert!(rel(s.im_part, 0.5 * s.c_sq) < 1e-12);
        prop_assert!((s.re_part + s.im_part - s.full.re).abs() < 1e-12 * s.c_sq);
        prop_assert!(s.full.im.abs() < 1e-12 * s.c_sq);
    }

    #[test]
    fn phase_universality(t in fat_triple(), h in phase()) {
        let s = symmetrize(&KernelHandle::Phase(h), &t).unwrap();
        prop_assert!(rel(s.full.re, s.c_sq) < 1e-11);
        prop_assert!(s.full.im.abs() < 1e-11 * s.c_sq);
        prop_assert!((s.re_part + s.im_part - s.full.re).abs() < 1e-11 * s.c_sq);
    }

    #[test]
    fn phase_kernel_modulus_and_dual(w in point(), z in point(), h in phase()) {
        prop_assume!((w - z).norm() > 1e-6);
        let k = eval_k_h(&h, w, z).unwrap();
        prop_assert!(rel(k.norm(), 1.0 / (w - z).norm()) < 1e-14);
        let dual = eval_k_h_star(&h, w, z).unwrap();
        let swapped = eval_k_h(&h, z, w).unwrap().conj();
        prop_assert!((dual - swapped).norm() <= 1e-15 * swapped.norm());
    }

    #[test]
    fn curvature_invariant_under_permutation(t in fat_triple()) {
        let c = menger_curvature_sq(&t);
        for p in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]] {
            prop_assert!(rel(menger_curvature_sq(&t.permuted(p)), c) < 1e-14);
        }
    }

    #[test]
    fn curvature_scales_under_similarity(t in fat_triple(), scale in 0.01..100.0f64, angle in -PI..PI, shift in point()) {
        let m = Complex64::from_polar(scale, angle);
        let [a, b, c] = t.z.map(|z| m * z + shift);
        let u = Triple::new(a, b, c).unwrap();
        prop_assert!(rel(menger_curvature_sq(&u) * scale * scale, menger_curvature_sq(&t)) < 1e-12);
    }

    #[test]
    fn speed_at_least_one(x in -5.0..5.0f64, a in -3.0..3.0f64) {
        for spec in [CurveSpec::parabola(a), CurveSpec::cubic(), CurveSpec::cosh(), CurveSpec::line(a, 1.0)] {
            let d = spec.curve_data(x).unwrap();
            prop_assert!(d.speed >= 1.0);
            prop_assert!(rel(d.unit_factor().norm(), 1.0) < 1e-15);
            prop_assert!(d.phase > -PI && d.phase < 0.0);
        }
    }

    #[test]
    fn admissible_order_is_admissible(t in fat_triple()) {
        let o = admissible_order(&t).unwrap();
        prop_assert!(is_admissible(&o));
        let s = triangle_stats(&o);
        prop_assert_eq!(s.orientation, 1);
        prop_assert_eq!(s.apex, 2);
        prop_assert_eq!(admissible_order(&o).unwrap(), o);
    }

    #[test]
    fn constant_phase_functionals(t in fat_triple(), c in -10.0..10.0f64) {
        let h = PhaseFunction::constant(c);
        prop_assert!(remainder_rh(&h, &t).unwrap().value.abs() < 1e-12);
        prop_assert!((h_functional(&h, &t).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn functional_routes_agree(t in fat_triple(), h in phase()) {
        let r = remainder_rh(&h, &t).unwrap();
        prop_assert!(r.discrepancy() < 1e-9, "R_h {} vs {}", r.via_formula, r.via_identity);
        let d = h_functional(&h, &t).unwrap();
        prop_assert!(d.discrepancy() < 1e-9, "H {} vs {}", d.via_formula, d.via_identity);
    }

    #[test]
    fn graph_curvature_matches_area_formula(xs in abscissas(-3.0, 3.0), a in 0.1..3.0f64) {
        for spec in [CurveSpec::parabola(a), CurveSpec::cubic()] {
            let t = Triple::on_curve(&spec, xs).unwrap();
            prop_assume!(relative_area(&t) > 1e-6);
            prop_assert!(rel(menger_graph_sq(&spec, xs).unwrap(), menger_curvature_sq(&t)) < 1e-10);
        }
    }

    /// On a convex graph, abscissas in increasing order give a
    /// counterclockwise triangle; a concave graph reverses it.
    #[test]
    fn orientation_follows_concavity(xs in abscissas(-3.0, 3.0), a in 0.1..3.0f64) {
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let up = Triple::on_curve(&CurveSpec::parabola(a), xs).unwrap();
        let down = Triple::on_curve(&CurveSpec::parabola(-a), xs).unwrap();
        prop_assert_eq!(triangle_stats(&up).orientation, 1);
        prop_assert_eq!(triangle_stats(&down).orientation, -1);
    }

    #[test]
    fn global_bounds_on_parabolas(xs in abscissas(-10.0, 10.0), a in 0.05..3.0f64) {
        let spec = CurveSpec::parabola(a);
        let m2 = (2.0 * a) * (2.0 * a);
        let s = symmetrize(&KernelHandle::Restricted(spec.clone()), &Triple::on_curve(&spec, xs).unwrap()).unwrap();
        prop_assert!(s.re_part.abs() <= 1.5 * m2);
        prop_assert!(s.c_sq <= 8.0 * m2);
        prop_assert!(s.im_part.abs() <= 9.5 * m2);
        prop_assert!(s.re_part >= -1e-12);
    }

    #[test]
    fn lines_have_zero_symmetrization(xs in abscissas(-10.0, 10.0), m in -5.0..5.0f64, c in -5.0..5.0f64) {
        let spec = CurveSpec::line(m, c);
        let t = Triple::on_curve(&spec, xs).unwrap();
        let s = symmetrize(&KernelHandle::Restricted(spec), &t).unwrap();
        // heights are rounded, so the points are collinear only to roundoff
        prop_assert!(s.c_sq < 1e-24);
        prop_assert!(s.re_part.abs() < 1e-12 && s.im_part.abs() < 1e-12);
    }

    #[test]
    fn kerzman_stein_is_skew(x in -5.0..5.0f64, y in -5.0..5.0f64, a in -3.0..3.0f64) {
        prop_assume!((x - y).abs() > 1e-6);
        let spec = CurveSpec::parabola(a);
        let d = eval_kerzman_stein(&spec, x, y).unwrap() + eval_kerzman_stein(&spec, y, x).unwrap().conj();
        prop_assert!(d.norm() < 1e-13);
        let k = eval_k_gamma(&spec, x, y).unwrap();
        let dist = (spec.point(x) - spec.point(y)).norm();
        prop_assert!(rel(k.norm(), 1.0 / dist) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn search_witness_reevaluates(seed in any::<u64>(), a in 0.2..2.0f64) {
        let spec = CurveSpec::parabola(a);
        let r = extremal_ratio(&spec, Objective::MinReRatio, Region::cube(-3.0, 3.0), 500, seed).unwrap();
        prop_assert_eq!(r.reevaluate(&spec).unwrap().to_bits(), r.best_value.to_bits());
        prop_assert!(r.evaluations <= r.budget);
    }

    #[test]
    fn sampling_and_batches_are_deterministic(seed in any::<u64>()) {
        let s = TripleSampler::on_curve(CurveSpec::cubic(), Interval { lo: -2.0, hi: 2.0 }, seed, 200);
        let a = s.samples().unwrap();
        prop_assert_eq!(&a, &s.samples().unwrap());
        let k = KernelHandle::Restricted(CurveSpec::cubic());
        let batch: Vec<_> = symmetrize_batch(&k, &a).into_iter().map(Result::unwrap).collect();
        let seq: Vec<_> = a.iter().map(|t| symmetrize(&k, t).unwrap()).collect();
        prop_assert_eq!(batch, seq);
    }
}
