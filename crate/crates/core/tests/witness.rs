use num_complex::Complex64 as C;
use sosnag_core::exec::Sequential;
use sosnag_core::poly::{PolySystem, Polynomial};
use sosnag_core::witness::*;
use sosnag_core::Seed;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn plane() -> (Polynomial, Polynomial, Polynomial) {
    (Polynomial::var(2, 0), Polynomial::var(2, 1), Polynomial::constant(2, c(1.0)))
}

fn cross() -> PolySystem {
    let (x, y, _) = plane();
    PolySystem::new(2, vec![&x * &y]).unwrap()
}

fn circle() -> PolySystem {
    let (x, y, one) = plane();
    PolySystem::new(2, vec![&(&(&x * &x) + &(&y * &y)) - &one]).unwrap()
}

fn circle_and_line() -> PolySystem {
    let (x, y, one) = plane();
    let f = &(&(&(&x * &x) + &(&y * &y)) - &one) * &(&x - &y);
    PolySystem::new(2, vec![f]).unwrap()
}

/// Affine twisted cubic y = x^2, z = x^3.
fn twisted_cubic() -> PolySystem {
    let x = Polynomial::var(3, 0);
    let y = Polynomial::var(3, 1);
    let z = Polynomial::var(3, 2);
    PolySystem::new(3, vec![&y - &(&x * &x), &z - &(&x * &y), &(&x * &z) - &(&y * &y)]).unwrap()
}

#[test]
fn superset_counts() {
    let cfg = WitnessConfig::default();
    assert_eq!(witness_superset(&cross(), 1, &cfg, &Sequential).unwrap().points.len(), 2);
    assert_eq!(witness_superset(&circle(), 1, &cfg, &Sequential).unwrap().points.len(), 2);
    let w = witness_superset(&twisted_cubic(), 1, &cfg, &Sequential).unwrap();
    assert_eq!(w.points.len(), 3);
    // Oracle: substitute the parametrization t -> (t, t^2, t^3) into the slice
    // and count roots of the resulting cubic in t.
    let f = &w.slice.forms[0];
    let cubic = [f.constant, f.coeffs[0], f.coeffs[1], f.coeffs[2]];
    assert!(cubic[3].norm() > 0.0);
    for p in &w.points {
        let t = p[0];
        let v = cubic[0] + cubic[1] * t + cubic[2] * t * t + cubic[3] * t * t * t;
        assert!(v.norm() < 1e-9);
        assert!((p[1] - t * t).norm() < 1e-9 && (p[2] - t * t * t).norm() < 1e-9);
    }
}

#[test]
fn monodromy_groups() {
    let cfg = WitnessConfig::default();
    let sizes = |sys: &PolySystem| {
        let w = witness_superset(sys, 1, &cfg, &Sequential).unwrap();
        let p = monodromy_partition(&w.points, &w.square, &w.slice, Seed(3), &cfg, &Sequential).unwrap();
        let mut s: Vec<usize> = p.groups.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    };
    assert_eq!(sizes(&cross()), vec![1, 1]);
    assert_eq!(sizes(&circle()), vec![2]);
    assert_eq!(sizes(&circle_and_line()), vec![2, 1]);
}

#[test]
fn trace_test_on_subsets() {
    let cfg = WitnessConfig::default();
    let w = witness_superset(&circle(), 1, &cfg, &Sequential).unwrap();
    assert_eq!(trace_test(&w.points, &w.square, &w.slice, &cfg, &Sequential).unwrap(), TraceOutcome::Complete);
    assert_eq!(trace_test(&w.points[..1], &w.square, &w.slice, &cfg, &Sequential).unwrap(), TraceOutcome::Incomplete);
    assert_eq!(trace_test(&w.points[1..], &w.square, &w.slice, &cfg, &Sequential).unwrap(), TraceOutcome::Incomplete);

    let w = witness_superset(&cross(), 1, &cfg, &Sequential).unwrap();
    for p in &w.points {
        let one = std::slice::from_ref(p);
        assert_eq!(trace_test(one, &w.square, &w.slice, &cfg, &Sequential).unwrap(), TraceOutcome::Complete);
    }
    assert_eq!(trace_test(&w.points, &w.square, &w.slice, &cfg, &Sequential).unwrap(), TraceOutcome::Complete);

    // circle and line: the line point alone and the circle pair pass, mixed pairs fail.
    let w = witness_superset(&circle_and_line(), 1, &cfg, &Sequential).unwrap();
    assert_eq!(w.points.len(), 3);
    let on_line: Vec<bool> = w.points.iter().map(|p| (p[0] - p[1]).norm() < 1e-8).collect();
    for mask in 1u32..8 {
        let pts: Vec<Vec<C>> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| w.points[i].clone()).collect();
        let lines = (0..3).filter(|&i| mask >> i & 1 == 1 && on_line[i]).count();
        let circles = pts.len() - lines;
        let expect = if circles == 0 || circles == 2 { TraceOutcome::Complete } else { TraceOutcome::Incomplete };
        assert_eq!(trace_test(&pts, &w.square, &w.slice, &cfg, &Sequential).unwrap(), expect, "mask {mask}");
    }
}

#[test]
fn decomposition_of_cross() {
    let cfg = WitnessConfig::default();
    let d = numerical_decomposition(&cross(), &[1], &cfg, &Sequential).unwrap();
    assert_eq!(d.components.len(), 2);
    assert!(d.components.iter().all(|w| w.degree == 1 && w.dim == 1));
    assert!(d.uncertified.is_empty());
}

#[test]
fn decomposition_of_circle_and_line() {
    let cfg = WitnessConfig::default();
    let d = numerical_decomposition(&circle_and_line(), &[1, 0], &cfg, &Sequential).unwrap();
    let mut degs: Vec<usize> = d.components.iter().map(|w| w.degree).collect();
    degs.sort_unstable();
    assert_eq!(degs, vec![1, 2]);
    assert!(d.uncertified.is_empty());
}

#[test]
fn point_plus_line_absorbs_nothing_extra() {
    // {x*y = 0, x*(x-1) = 0}: line x = 0 and point (1, 0).
    let (x, y, one) = plane();
    let sys = PolySystem::new(2, vec![&x * &y, &x * &(&x - &one)]).unwrap();
    let cfg = WitnessConfig::default();
    let d = numerical_decomposition(&sys, &[1, 0], &cfg, &Sequential).unwrap();
    let mut comps: Vec<(usize, usize)> = d.components.iter().map(|w| (w.dim, w.degree)).collect();
    comps.sort_unstable();
    assert_eq!(comps, vec![(0, 1), (1, 1)]);
    let pt = d.components.iter().find(|w| w.dim == 0).unwrap();
    assert!((pt.points[0][0] - c(1.0)).norm() < 1e-9 && pt.points[0][1].norm() < 1e-9);
}

#[test]
fn membership_on_circle() {
    let cfg = WitnessConfig::default();
    let d = numerical_decomposition(&circle(), &[1], &cfg, &Sequential).unwrap();
    let ws = &d.components[0];
    assert_eq!(ws.degree, 2);
    let on = [c(0.6), c(0.8)];
    assert!(membership(&on, ws, &cfg, &Sequential).unwrap());
    let off = [C::new(0.3, 0.2), C::new(-1.7, 0.4)];
    assert!(!membership(&off, ws, &cfg, &Sequential).unwrap());
}

#[test]
fn reslicing_keeps_degree_and_trace() {
    let cfg = WitnessConfig::default();
    let d = numerical_decomposition(&twisted_cubic(), &[1], &cfg, &Sequential).unwrap();
    assert_eq!(d.components.len(), 1);
    let ws = &d.components[0];
    assert_eq!(ws.degree, 3);
    for s in 0..3 {
        let r = reslice(ws, Seed(100 + s), &cfg, &Sequential).unwrap();
        assert_eq!(r.degree, 3);
        for p in &r.points {
            assert!(ws.system.residual(p).unwrap() < 1e-8);
        }
        assert_eq!(trace_test(&r.points, &r.square, &r.slice, &cfg, &Sequential).unwrap(), TraceOutcome::Complete);
    }
}

#[test]
fn degree_additivity_for_products() {
    // (x^2 + y^2 - 1)(x - y)(x + 2y - 3): 2 + 1 + 1 points at dimension 1.
    let (x, y, one) = plane();
    let f = &(&(&(&(&x * &x) + &(&y * &y)) - &one) * &(&x - &y)) * &(&(&x + &y.scale(c(2.0))) - &one.scale(c(3.0)));
    let sys = PolySystem::new(2, vec![f]).unwrap();
    let cfg = WitnessConfig::default();
    let sup = witness_superset(&sys, 1, &cfg, &Sequential).unwrap();
    let d = numerical_decomposition(&sys, &[1], &cfg, &Sequential).unwrap();
    let total: usize = d.components.iter().map(|w| w.degree).sum();
    assert_eq!(total, sup.points.len());
    assert_eq!(total, 4);
    assert_eq!(d.components.len(), 3);
}
