use num_bigint::BigUint;
use num_complex::Complex64 as C;
use sosnag_core::exec::Sequential;
use sosnag_core::poly::{PolySystem, Polynomial};
use sosnag_core::rankloci::*;
use sosnag_core::solver::{randomize_to_square, solve_total_degree, SolverConfig};
use sosnag_core::witness::{membership, numerical_decomposition, WitnessConfig};
use sosnag_core::{Error, Seed};

fn labels(spec: &HankelSpec) -> Vec<Vec<String>> {
    build_hankel(spec, |e| Some(coefficient_label(e))).unwrap()
}

#[test]
fn hankel_index_examples() {
    let s = HankelSpec::new(3, 3);
    assert_eq!(s.size(), 10);
    let l = labels(&s);
    assert_eq!(l[0][0], "a_{006}");
    assert_eq!(l[9][9], "a_{600}");
    assert_eq!(s.row_index[4], vec![1, 0, 2]);
    assert_eq!(s.row_index[7], vec![2, 0, 1]);
    assert_eq!(l[4][7], "a_{303}");
    let q = HankelSpec::new(4, 2);
    assert_eq!(q.size(), 10);
    assert_eq!(labels(&q)[0][9], "a_{2002}");
    assert_eq!(s.coefficient_index().len(), 28);
    assert_eq!(q.coefficient_index().len(), 35);
}

#[test]
fn missing_coefficient_is_reported() {
    let s = HankelSpec::new(2, 1);
    let r = build_hankel(&s, |e| if e == [2, 0] { None } else { Some(0) });
    assert!(matches!(r, Err(Error::MissingCoefficient(ref m)) if m == "a_{20}"));
}

/// Independent evaluation of the product formula with rationals.
fn ht_oracle(n: u64, r: u64) -> u64 {
    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }
    let v: f64 = (0..n - r).map(|j| binom(n + j, n - r - j) / binom(2 * j + 1, j)).product();
    v.round() as u64
}

#[test]
fn harris_tu_values() {
    let h = harris_tu_degree(10, 7).unwrap();
    assert_eq!(h.degree, BigUint::from(2640u32));
    assert_eq!(h.codim, 6);
    let h = harris_tu_degree(10, 6).unwrap();
    assert_eq!(h.degree, BigUint::from(28314u32));
    assert_eq!(h.codim, 10);
    let h = harris_tu_degree(3, 1).unwrap();
    assert_eq!((h.degree, h.codim), (BigUint::from(4u32), 3));
    let h = harris_tu_degree(4, 2).unwrap();
    assert_eq!((h.degree, h.codim), (BigUint::from(10u32), 3));
    // Corank one: the determinant hypersurface of degree n.
    for n in 2..12u32 {
        let h = harris_tu_degree(n, n - 1).unwrap();
        assert_eq!((h.degree, h.codim), (BigUint::from(n), 1));
    }
    for n in 2..10u64 {
        for r in 1..n {
            let h = harris_tu_degree(n as u32, r as u32).unwrap();
            assert_eq!(h.degree, BigUint::from(ht_oracle(n, r)), "n={n} r={r}");
        }
    }
    assert!(matches!(harris_tu_degree(4, 4), Err(Error::RankOutOfRange { .. })));
    assert!(matches!(harris_tu_degree(4, 0), Err(Error::RankOutOfRange { .. })));
}

#[test]
fn two_by_two_rank_one_system() {
    let rs = rank_deficiency_system(&symmetric_generic(2), 1, Seed(4)).unwrap();
    assert_eq!(rs.system.len(), 2);
    assert_eq!(rs.xi_vars, 1);
    assert_eq!(rs.system.nvars(), 4);
    assert!(rs.system.equations().iter().all(|p| p.degree() == 2));
    // On ad - b^2 = 0 a lift exists and solves the system; off it none does.
    let (a, b) = (C::new(0.3, 1.1), C::new(-0.7, 0.2));
    let on = [a, b, b * b / a];
    let lifted = rs.lift(&on, 1e-10).unwrap();
    assert!(rs.system.residual(&lifted).unwrap() < 1e-12);
    assert_eq!(rs.project(&lifted), on.to_vec());
    let off = [a, b, C::new(2.0, 0.5)];
    assert!(rs.lift(&off, 1e-8).is_none());
}

#[test]
fn diagonal_rank_two_is_three_planes() {
    let rs = rank_deficiency_system(&diagonal(3), 2, Seed(1)).unwrap();
    let cfg = WitnessConfig { slice_vars: Some(rs.slice_vars()), ..WitnessConfig::default() };
    let d = numerical_decomposition(&rs.system, &[2], &cfg, &Sequential).unwrap();
    assert_eq!(d.components.len(), 3);
    assert!(d.uncertified.is_empty());
    let mut zero_coord: Vec<usize> = d
        .components
        .iter()
        .map(|w| {
            assert_eq!(w.degree, 1);
            let x = rs.project(&w.points[0]);
            x.iter().position(|v| v.norm() < 1e-9).unwrap()
        })
        .collect();
    zero_coord.sort_unstable();
    assert_eq!(zero_coord, vec![0, 1, 2]);
}

fn symmetric_locus_degree(n: usize, r: usize, seed: u64) -> (Vec<usize>, RankSystem, sosnag_core::witness::Decomposition, WitnessConfig) {
    let rs = rank_deficiency_system(&symmetric_generic(n), r, Seed(seed)).unwrap();
    let ht = harris_tu_degree(n as u32, r as u32).unwrap();
    let dim = rs.x_vars - ht.codim as usize;
    let cfg = WitnessConfig {
        slice_vars: Some(rs.slice_vars()),
        solver: SolverConfig { seed: Seed(seed), ..SolverConfig::default() },
        ..WitnessConfig::default()
    };
    let d = numerical_decomposition(&rs.system, &[dim], &cfg, &Sequential).unwrap();
    let degs = d.components.iter().map(|w| w.degree).collect();
    (degs, rs, d, cfg)
}

#[test]
fn symmetric_three_by_three_rank_one() {
    let (degs, rs, d, cfg) = symmetric_locus_degree(3, 1, 11);
    assert_eq!(degs, vec![4]);
    // Outer product v v^T lies on the component; a random symmetric matrix does not.
    let v = [C::new(0.4, -0.3), C::new(1.2, 0.1), C::new(-0.5, 0.8)];
    let x = vec![v[0] * v[0], v[0] * v[1], v[0] * v[2], v[1] * v[1], v[1] * v[2], v[2] * v[2]];
    let ws = &d.components[0];
    assert!(membership(&x, ws, &cfg, &Sequential).unwrap());
    let y: Vec<C> = (0..6).map(|i| C::new(0.3 * i as f64 - 0.4, 0.2 + 0.1 * i as f64)).collect();
    assert!(!membership(&y, ws, &cfg, &Sequential).unwrap());
    assert_eq!(rs.x_vars, 6);
}

#[test]
fn symmetric_four_by_four_rank_two() {
    let (degs, _, _, _) = symmetric_locus_degree(4, 2, 5);
    assert_eq!(degs, vec![10]);
}

/// Oracle: solve the 3x3 minors of the binary-sextic Hankel matrix on a
/// random affine 4-space directly (randomized to a square system).
fn minors_count(spec: &HankelSpec, rank: usize) -> usize {
    let h = hankel_matrix(spec);
    let m = h[0][0].nvars();
    let size = h.len();
    let k = rank + 1;
    let mut minors = Vec::new();
    let subsets = |n: usize| -> Vec<Vec<usize>> {
        (0u32..(1 << n)).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
    };
    for rows in subsets(size) {
        for cols in subsets(size) {
            minors.push(det_poly(&h, &rows, &cols));
        }
    }
    let codim = harris_tu_degree(size as u32, rank as u32).unwrap().codim as usize;
    let sys = PolySystem::new(m, minors).unwrap();
    let mut sq = randomize_to_square(&sys, codim, Seed(8)).unwrap().equations().to_vec();
    let mut rng_state = 0.37f64;
    for _ in 0..(m - codim) {
        let coeffs: Vec<C> = (0..m)
            .map(|_| {
                rng_state = (rng_state * 7.13 + 0.219).fract();
                C::from_polar(1.0, rng_state * 6.283)
            })
            .collect();
        sq.push(Polynomial::linear(&coeffs, C::new(0.9, -0.4)));
    }
    let full = PolySystem::new(m, sq).unwrap();
    let sols = solve_total_degree(&full, &SolverConfig::default(), &Sequential).unwrap();
    let orig = sys.normalized();
    sols.points.iter().filter(|p| orig.residual(p).unwrap() < 1e-8).count()
}

fn det_poly(h: &[Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Polynomial {
    if rows.len() == 1 {
        return h[rows[0]][cols[0]].clone();
    }
    let m = h[0][0].nvars();
    let mut acc = Polynomial::zero(m);
    for (j, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &h[rows[0]][c] * &det_poly(h, &rows[1..], &rest);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[test]
fn scaled_down_hankel_witness() {
    for (n, d, rank, expected) in [(2usize, 2u32, 2u32, 3usize), (2, 3, 2, 10)] {
        let case = HankelCase { n, d, rank };
        let formula = hankel_rank_locus(case, LocusMode::Formula, &WitnessConfig::default(), &Sequential).unwrap();
        let witness = hankel_rank_locus(case, LocusMode::Witness, &WitnessConfig::default(), &Sequential).unwrap();
        assert_eq!(formula.degree, expected as u64);
        assert_eq!(witness.components, vec![expected]);
        assert_eq!(witness.degree, formula.degree);
        assert_eq!(witness.dim, formula.dim);
        // Properness: the lifted solution set has the expected affine dimension.
        assert_eq!(witness.observed_dim, Some(formula.dim + 1));
        // Secant variety of the rational normal curve of degree 2d.
        let big = 2 * d as usize;
        assert_eq!(expected, (big - 1) * (big - 2) / 2);
        assert_eq!(minors_count(&case.spec(), rank as usize), expected);
    }
}

#[test]
fn full_size_cases_formula_mode() {
    let cfg = WitnessConfig::default();
    let a = hankel_rank_locus(HankelCase::TERNARY_SEXTIC, LocusMode::Formula, &cfg, &Sequential).unwrap();
    assert_eq!((a.dim, a.degree), (21, 2640));
    assert!(!a.assumptions.is_empty());
    let b = hankel_rank_locus(HankelCase::QUATERNARY_QUARTIC, LocusMode::Formula, &cfg, &Sequential).unwrap();
    assert_eq!((b.dim, b.degree), (24, 28314));
}

#[test]
fn witness_mode_respects_budget() {
    let mut cfg = WitnessConfig::default();
    cfg.solver.paths_limit = Some(100_000);
    let r = hankel_rank_locus(HankelCase::TERNARY_SEXTIC, LocusMode::Witness, &cfg, &Sequential);
    assert!(matches!(r, Err(Error::PathBudgetExceeded { .. })));
}

/// Rows of reference exponent labels, one whitespace-separated row per line.
fn reference(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split_whitespace().map(|e| format!("a_{{{e}}}")).collect()).collect()
}

#[test]
fn layouts_match_reference_matrices() {
    let cases = [
        (HankelSpec::new(3, 3), include_str!("data/hankel_n3_d3.txt")),
        (HankelSpec::new(4, 2), include_str!("data/hankel_n4_d2.txt")),
    ];
    for (spec, text) in cases {
        let want = reference(text);
        assert_eq!(want.len(), 10);
        assert!(want.iter().all(|r| r.len() == 10));
        assert_eq!(labels(&spec), want);
    }
}
