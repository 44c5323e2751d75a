use num_bigint::BigInt;
use num_complex::Complex64 as C;
use num_rational::BigRational;
use sosnag_core::boundary::*;
use sosnag_core::exec::Sequential;
use sosnag_core::poly::{monomials_of_degree, Polynomial};
use sosnag_core::random::gaussian_complex;
use sosnag_core::solver::{solve_total_degree, SolverConfig};
use sosnag_core::{Error, Seed};

fn random_form(nx: usize, d: u32, rng: &mut impl rand::Rng) -> Polynomial {
    let terms: Vec<_> = monomials_of_degree(nx, d).into_iter().map(|m| (m, gaussian_complex(rng))).collect();
    Polynomial::from_terms(nx, terms).unwrap()
}

fn overwrite(form: &Polynomial, fixed: &[(Vec<u32>, f64)]) -> Polynomial {
    let terms = form.terms().iter().map(|(m, c)| {
        match fixed.iter().find(|(e, _)| e.as_slice() == m.exponents()) {
            Some((_, v)) => (m.clone(), C::new(*v, 0.0)),
            None => (m.clone(), *c),
        }
    });
    Polynomial::from_terms(form.nvars(), terms).unwrap().prune(0.0)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn sextic_census() {
    let (p, q) = random_pencil(3, 6, Seed(1));
    let sys = sextic_system(&p, &q).unwrap();
    assert_eq!(sys.system.nvars(), 28);
    assert_eq!(sys.system.len(), 28);
    assert_eq!(sys.census(), (2, 26));
    assert_eq!(sys.normalizations.len(), 3);
    assert_eq!(sys.unknowns[sys.s_index], "s");
    assert!(sys.symmetry.as_ref().unwrap().preserves(&sys.system, Seed(3)));
}

#[test]
fn sextic_anchor_has_zero_residual() {
    let x0 = Polynomial::var(3, 0);
    let p = x0.pow(6);
    let (_, q) = random_pencil(3, 6, Seed(2));
    let sys = sextic_system(&p, &q).unwrap();
    let cube = x0.pow(3);
    let pt = sys.point_from_forms(&[('f', cube.clone()), ('h', cube)], C::new(0.0, 0.0));
    assert!(sys.system.residual(&pt).unwrap() < 1e-14);
    assert!(sys.spot_check(&pt, 20, Seed(4)) < 1e-14);
}

#[test]
fn sextic_plug_in() {
    let mut rng = Seed(5).rng();
    let f = overwrite(&random_form(3, 3, &mut rng), &[(vec![3, 0, 0], 1.0), (vec![2, 1, 0], 0.0)]);
    let g = overwrite(&random_form(3, 3, &mut rng), &[(vec![3, 0, 0], 0.0)]);
    let h = random_form(3, 3, &mut rng);
    let q = random_form(3, 6, &mut rng);
    let s0 = C::new(0.3, -1.1);
    let p = &(&(&f * &h) - &(&g * &g)) - &q.scale(s0);
    let sys = sextic_system(&p, &q).unwrap();
    let pt = sys.point_from_forms(&[('f', f), ('g', g), ('h', h)], s0);
    assert!(sys.system.residual(&pt).unwrap() < 1e-12);
    assert!(sys.spot_check(&pt, 20, Seed(6)) < 1e-12);
}

#[test]
fn quartic_census_and_plug_in() {
    let mut rng = Seed(7).rng();
    let f = overwrite(&random_form(4, 2, &mut rng), &[(vec![2, 0, 0, 0], 1.0)]);
    let g = random_form(4, 2, &mut rng);
    let h = overwrite(
        &random_form(4, 2, &mut rng),
        &[(vec![2, 0, 0, 0], 0.0), (vec![1, 1, 0, 0], 0.0), (vec![1, 0, 1, 0], 1.0)],
    );
    let k = overwrite(&random_form(4, 2, &mut rng), &[(vec![2, 0, 0, 0], 0.0), (vec![1, 1, 0, 0], 0.0)]);
    let q = random_form(4, 4, &mut rng);
    let s0 = C::new(-0.7, 0.2);
    let p = &(&(&f * &g) - &(&h * &k)) - &q.scale(s0);
    let sys = quartic_system(&p, &q).unwrap();
    assert_eq!(sys.system.nvars(), 35);
    assert_eq!(sys.system.len(), 35);
    assert_eq!(sys.normalizations.len(), 6);
    assert_eq!(sys.groupings.len(), 35);
    let pt = sys.point_from_forms(&[('f', f), ('g', g), ('h', h), ('k', k)], s0);
    assert!(sys.system.residual(&pt).unwrap() < 1e-12);
}

#[test]
fn input_validation() {
    let (p, q) = random_pencil(3, 5, Seed(1));
    assert!(matches!(sextic_system(&p, &q), Err(Error::DegreeMismatch { .. })));
    let x = Polynomial::var(3, 0);
    let bad = &x.pow(6) + &x;
    assert!(matches!(sextic_system(&bad, &x.pow(6)), Err(Error::NonHomogeneous)));
}

#[test]
fn binary_census() {
    for k in 1..=4 {
        let pc = BinaryPencil::random(k, Seed(k as u64));
        let sys = binary_analogue_system(&pc).unwrap();
        let n = 2 * k as usize + 1;
        assert_eq!(sys.system.nvars(), n);
        assert_eq!(sys.system.len(), n);
    }
}

#[test]
fn binary_k1_closed_form() {
    // f = x0, g = c x1: only the x1^2 coefficient constrains s.
    let pc = BinaryPencil {
        k: 1,
        f: vec![rat(1, 1), rat(0, 1)],
        c: rat(2, 1),
        p: vec![rat(1, 1), rat(3, 1), rat(5, 1)],
        q: vec![rat(2, 1), rat(-1, 1), rat(3, 1)],
    };
    let sys = binary_analogue_system(&pc).unwrap();
    let oracle = brute_force_degree(&sys).unwrap();
    assert_eq!(oracle.degree, 1);
    let sols = solve_total_degree(&sys.system, &SolverConfig::default(), &Sequential).unwrap();
    let s = sys.distinct_s(&sols, 1e-6);
    assert_eq!(s.len(), 1);
    assert!((s[0] - C::new(-3.0, 0.0)).norm() < 1e-8);
}

fn homotopy_matches_oracle(k: u32, seeds: &[u64]) {
    for &seed in seeds {
        let pc = BinaryPencil::random(k, Seed(seed));
        let sys = binary_analogue_system(&pc).unwrap();
        let oracle = brute_force_degree(&sys).unwrap();
        assert!(!oracle.degenerate);
        let cfg = SolverConfig { seed: Seed(seed + 100), ..SolverConfig::default() };
        let sols = solve_total_degree(&sys.system, &cfg, &Sequential).unwrap();
        assert_eq!(sols.counts.failed, 0, "k={k} seed={seed}");
        let s = sys.distinct_s(&sols, 1e-6);
        assert_eq!(s.len(), oracle.degree, "k={k} seed={seed}");
        for r in oracle.roots() {
            assert!(s.iter().any(|v| (v - r).norm() <= 1e-6 * (1.0 + r.norm())), "k={k} seed={seed} root {r}");
        }
        for p in &sols.points {
            assert!(sys.spot_check(p, 20, Seed(seed)) < 1e-8);
        }
    }
}

#[test]
fn binary_k2_matches_elimination() {
    homotopy_matches_oracle(2, &[1, 2, 3, 4, 5]);
}

#[test]
fn binary_k3_matches_elimination() {
    homotopy_matches_oracle(3, &[11, 12, 13, 14, 15]);
}

#[test]
fn binary_degenerate_pencil() {
    let mut pc = BinaryPencil::random(2, Seed(9));
    pc.p = pc.q.iter().map(|x| x * rat(3, 2)).collect();
    let sys = binary_analogue_system(&pc).unwrap();
    let o = brute_force_degree(&sys).unwrap();
    assert!(o.degenerate);
    assert_eq!(o.degree, 0);
}

#[test]
fn oracle_stable_under_rationalization() {
    let mut rng = Seed(21).rng();
    let mut draw = |n: usize| (0..n).map(|_| sosnag_core::random::gaussian_real(&mut rng)).collect::<Vec<f64>>();
    let mut f = draw(3);
    f[0] = 1.0;
    f[1] = 0.0;
    let (p, q) = (draw(5), draw(5));
    let a = BinaryPencil::from_floats(2, &f, 0.8, &p, &q, 1000);
    let b = BinaryPencil::from_floats(2, &f, 0.8, &p, &q, 1 << 20);
    let da = brute_force_degree(&binary_analogue_system(&a).unwrap()).unwrap();
    let db = brute_force_degree(&binary_analogue_system(&b).unwrap()).unwrap();
    assert_eq!(da.degree, db.degree);
}

#[test]
fn oracle_refuses_large_k() {
    let sys = binary_analogue_system(&BinaryPencil::random(4, Seed(1))).unwrap();
    assert!(matches!(brute_force_degree(&sys), Err(Error::EliminationBudget(_))));
}
