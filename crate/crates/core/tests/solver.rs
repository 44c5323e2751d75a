use num_complex::Complex64 as C;
use sosnag_core::exec::Sequential;
use sosnag_core::poly::{random_poly, PolySystem, Polynomial};
use sosnag_core::solver::*;
use sosnag_core::{Error, Seed};

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn random_system(n: usize, degrees: &[u32], seed: u64) -> PolySystem {
    let eqs = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| random_poly(n, d, true, Seed(seed * 97 + i as u64)))
        .collect();
    PolySystem::new(n, eqs).unwrap()
}

#[test]
fn total_degree_start_roots_are_roots() {
    let sys = random_system(3, &[2, 2, 2], 1);
    let st = total_degree_start(&sys, Seed(5)).unwrap();
    assert_eq!(st.kind, StartKind::TotalDegree);
    assert_eq!(st.root_count(), 8);
    let roots = st.roots();
    assert_eq!(roots.len(), 8);
    for r in &roots {
        assert!(st.system.residual(r).unwrap() < 1e-10);
    }
    let x = Polynomial::var(1, 0);
    let one = PolySystem::new(1, vec![&x.pow(2) - &Polynomial::constant(1, c(4.0))]).unwrap();
    let st = total_degree_start(&one, Seed(0)).unwrap();
    assert_eq!(st.roots().len(), 2);
    let c0 = -st.system.equations()[0].coefficient(&sosnag_core::Monomial::one(1));
    assert!((c0.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn sextic_sized_start_count() {
    let sys = random_system(26, &[2; 26], 0);
    let total = 1u128 << 26;
    let eqs: Vec<Polynomial> = (0..26).map(|i| {
        let v = Polynomial::var(26, i);
        &v * &v
    }).collect();
    let sq = PolySystem::new(26, eqs).unwrap();
    let st = total_degree_start(&sq, Seed(0)).unwrap();
    assert_eq!(st.root_count(), total);
    assert_eq!(sys.bezout_number(), total);
}

#[test]
fn non_square_is_rejected() {
    let sys = random_system(3, &[2, 2], 0);
    assert!(matches!(total_degree_start(&sys, Seed(0)), Err(Error::NotSquare { .. })));
}

#[test]
fn diagonal_quadrics_solve() {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let sys = PolySystem::new(
        2,
        vec![&(&x * &x) - &Polynomial::constant(2, c(4.0)), &(&y * &y) - &Polynomial::constant(2, c(9.0))],
    )
    .unwrap();
    let s = solve_total_degree(&sys, &SolverConfig::default(), &Sequential).unwrap();
    assert_eq!(s.len(), 4);
    assert_eq!(s.counts.success, 4);
    let expected = [(-2.0, -3.0), (-2.0, 3.0), (2.0, -3.0), (2.0, 3.0)];
    for (p, (a, b)) in s.points.iter().zip(expected) {
        assert!((p[0] - c(a)).norm() < 1e-10 && (p[1] - c(b)).norm() < 1e-10);
    }
}

#[test]
fn generic_three_quadrics_have_eight_solutions() {
    let sys = random_system(3, &[2, 2, 2], 7);
    let s = solve_total_degree(&sys, &SolverConfig::default(), &Sequential).unwrap();
    assert_eq!(s.len(), 8);
    assert!(s.residuals.iter().all(|&r| r < 1e-9));
    assert_eq!(s.multiplicity_flags, vec![1; 8]);
}

#[test]
fn one_quadric_as_product_of_linear_forms() {
    let x = Polynomial::var(1, 0);
    let sys = PolySystem::new(1, vec![&x.pow(2) - &Polynomial::constant(1, c(3.0))]).unwrap();
    let spec = vec![vec![FactorSpec { vars: vec![0] }, FactorSpec { vars: vec![0] }]];
    let st = linear_product_start(&sys, &spec, None, Seed(2)).unwrap();
    assert_eq!(st.kind, StartKind::LinearProduct);
    let roots = st.roots();
    assert_eq!(roots.len(), 2);
    for r in &roots {
        assert!(st.system.residual(r).unwrap() < 1e-10);
    }
    let s = solve_system(&sys, &st, None, &SolverConfig::default(), &Sequential).unwrap();
    assert_eq!(s.len(), 2);
}

#[test]
fn inconsistent_grouping_is_rejected() {
    let x = Polynomial::var(1, 0);
    let sys = PolySystem::new(1, vec![x.pow(3)]).unwrap();
    let spec = vec![vec![FactorSpec { vars: vec![0] }]];
    assert!(matches!(
        linear_product_start(&sys, &spec, None, Seed(0)),
        Err(Error::InconsistentGrouping { .. })
    ));
}

/// Two quadrics in (a, g) containing g only through g^2 or g*linear-in-g terms.
fn symmetric_pair() -> (PolySystem, SymmetryAction) {
    let a = Polynomial::var(2, 0);
    let g = Polynomial::var(2, 1);
    let k = |v: f64| Polynomial::constant(2, c(v));
    let f1 = &(&(&a * &a).scale(c(1.3)) + &(&g * &g).scale(c(-0.7))) + &(&a.scale(c(0.4)) - &k(2.0));
    let f2 = &(&(&a * &a).scale(c(-0.5)) + &(&g * &g).scale(c(2.1))) + &(&a.scale(c(-1.2)) - &k(0.3));
    let sys = PolySystem::new(2, vec![f1, f2]).unwrap();
    let sym = SymmetryAction::new(vec![SignedPermutation::negation(2, &[1])]);
    (sys, sym)
}

#[test]
fn symmetric_start_is_closed_under_negation() {
    let (sys, sym) = symmetric_pair();
    assert!(sym.preserves(&sys, Seed(1)));
    let spec = vec![vec![FactorSpec { vars: vec![0, 1] }, FactorSpec { vars: vec![0, 1] }]; 2];
    let st = linear_product_start(&sys, &spec, Some(&sym), Seed(4)).unwrap();
    assert!(sym.preserves(&st.system, Seed(2)));
    let roots = st.roots();
    assert_eq!(roots.len(), 4);
    for r in &roots {
        assert!(st.system.residual(r).unwrap() < 1e-10);
        let img = sym.generators[0].apply(r);
        let hits = roots.iter().filter(|q| q.iter().zip(&img).all(|(u, v)| (u - v).norm() < 1e-9)).count();
        assert_eq!(hits, 1);
    }
    assert_eq!(st.orbit_count(), Some(2));
}

#[test]
fn orbit_tracking_reconstitutes_all_solutions() {
    let (sys, sym) = symmetric_pair();
    let spec = vec![vec![FactorSpec { vars: vec![0, 1] }, FactorSpec { vars: vec![0, 1] }]; 2];
    let st = linear_product_start(&sys, &spec, Some(&sym), Seed(4)).unwrap();
    let cfg = SolverConfig::default();
    let orbit = solve_system(&sys, &st, Some(&sym), &cfg, &Sequential).unwrap();
    let full = solve_total_degree(&sys, &cfg, &Sequential).unwrap();
    assert_eq!(orbit.counts.success, 2);
    assert_eq!(orbit.len(), 4);
    assert_eq!(full.len(), 4);
    for (p, q) in orbit.points.iter().zip(&full.points) {
        assert!(p.iter().zip(q).all(|(u, v)| (u - v).norm() < 1e-8), "{p:?} vs {q:?} {:?} {:?}", orbit.residuals, full.residuals);
    }
    for p in &orbit.points {
        let img = sym.generators[0].apply(p);
        assert!(orbit.points.iter().any(|q| q.iter().zip(&img).all(|(u, v)| (u - v).norm() < cfg.cluster_tol)));
    }
}

#[test]
fn total_degree_with_symmetry_uses_numeric_orbits() {
    let (sys, sym) = symmetric_pair();
    let st = total_degree_start(&sys, Seed(9)).unwrap();
    let s = solve_system(&sys, &st, Some(&sym), &SolverConfig::default(), &Sequential);
    // x_i^2 - c_i is invariant under g -> -g, so orbits pair up.
    let s = s.unwrap();
    assert_eq!(s.counts.success, 2);
    assert_eq!(s.len(), 4);
}

#[test]
fn path_budget_is_enforced() {
    let sys = random_system(3, &[2, 2, 2], 3);
    let cfg = SolverConfig { paths_limit: Some(7), ..SolverConfig::default() };
    let st = total_degree_start(&sys, Seed(0)).unwrap();
    assert!(matches!(
        solve_system(&sys, &st, None, &cfg, &Sequential),
        Err(Error::PathBudgetExceeded { requested: 8, limit: 7 })
    ));
}

#[test]
fn sampling_tracks_requested_orbits() {
    let sys = random_system(3, &[2, 2, 2], 3);
    let st = total_degree_start(&sys, Seed(0)).unwrap();
    let run = solve_sampled(&sys, &st, None, 3, &SolverConfig::default(), &Sequential).unwrap();
    assert_eq!(run.tracked, 3);
    assert_eq!(run.total_orbits, 8);
    assert_eq!(run.solutions.counts.success + run.solutions.counts.divergent + run.solutions.counts.failed, 3);
}

#[test]
fn synthetic_pairs_cluster() {
    let mut pts = Vec::with_capacity(166_400);
    for k in 0..83_200u32 {
        let t = k as f64 * 0.731;
        let p = vec![C::new(t.cos() * 10.0 + k as f64 * 1e-3, t.sin()), C::new(t * 1e-2, (t * 0.37).cos())];
        let q: Vec<C> = p.iter().map(|z| z + C::new(1e-11, -1e-11)).collect();
        pts.push(p);
        pts.push(q);
    }
    let s = dedupe_solutions(&pts, 1e-8);
    assert_eq!(s.len(), 83_200);
    assert!(s.multiplicity_flags.iter().all(|&m| m == 2));
}

#[test]
fn randomize_keeps_linear_equations() {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let lin = &x - &y;
    let sys = PolySystem::new(2, vec![&x * &x, lin.clone(), &y * &x]).unwrap();
    let sq = randomize_to_square(&sys, 2, Seed(0)).unwrap();
    assert_eq!(sq.len(), 2);
    assert_eq!(sq.equations()[0], lin);
    assert_eq!(sq.degrees(), vec![1, 2]);
}

#[test]
fn reseeding_moves_nothing() {
    let sys = random_system(2, &[3, 2], 11);
    let a = solve_total_degree(&sys, &SolverConfig::default(), &Sequential).unwrap();
    let b = solve_total_degree(&sys, &SolverConfig { seed: Seed(99), ..SolverConfig::default() }, &Sequential).unwrap();
    assert_eq!(a.len(), 6);
    assert_eq!(a.len(), b.len());
    for (p, q) in a.points.iter().zip(&b.points) {
        assert!(p.iter().zip(q).all(|(u, v)| (u - v).norm() < 1e-8));
    }
    let again = solve_total_degree(&sys, &SolverConfig::default(), &Sequential).unwrap();
    assert_eq!(a, again);
}

/// A regular root of two dense octics whose chart point is large enough that
/// its absolute residual never drops below the Newton tolerance.
#[test]
fn large_chart_points_of_high_degree_systems_are_accepted() {
    let eqs = (0..2).map(|i| random_poly(2, 8, true, Seed(7000).derive(i as u64))).collect();
    let sys = PolySystem::new(2, eqs).unwrap();
    let s = solve_total_degree(&sys, &SolverConfig { seed: Seed(7000), ..SolverConfig::default() }, &Sequential).unwrap();
    assert_eq!(s.counts.failed, 0);
    assert_eq!(s.len(), 64);
    assert!(s.residuals.iter().all(|&r| r < 1e-9));
}
