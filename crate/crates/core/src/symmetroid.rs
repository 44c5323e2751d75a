//! Symmetric determinantal representations of 10-nodal quartic surfaces.
//!
//! Pipeline: nodes of `F`, projection from one node, splitting of the
//! ramification sextic into two cubics, sampling of the sextic curve on one
//! cubic cone, its cubic ideal and Hilbert-Burch matrix, completion to a
//! 4x4 linear matrix `L` with `det L ~ F`, and a change of rows making it
//! symmetric.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Matrix3, SymmetricEigen};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::linalg::{from_rows, lstsq, norm2, nullspace, numerical_rank, subspace_gap, CMat};
use crate::poly::{monomials_of_degree, Monomial, PolySystem, Polynomial, C};
use crate::random::{gaussian_complex, Seed};
use crate::solver::{cluster_points, solve_total_degree, SolverConfig};

const NV: usize = 4;

fn one() -> C {
    C::new(1.0, 0.0)
}

/// A quartic surface `F = 0` in projective 3-space.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticSurface {
    pub f: Polynomial,
}

impl QuarticSurface {
    pub fn new(f: Polynomial) -> Result<Self> {
        if f.nvars() != NV {
            return Err(Error::DimensionMismatch { expected: NV, found: f.nvars() });
        }
        if f.is_zero() || !f.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        if f.degree() != 4 {
            return Err(Error::DegreeMismatch { expected: 4, found: f.degree() });
        }
        Ok(QuarticSurface { f })
    }
}

/// `sum_{i<j} x_i^2 x_j^2 + b sum x_i^2 x_j x_k + (4b^2 - 4b - 2) x_1 x_2 x_3 x_4`,
/// the middle sum over the twelve terms with `i` outside `{j < k}`.
pub fn clr_quartic(b: f64) -> QuarticSurface {
    let mut terms = Vec::new();
    let mon = |e: [u32; 4]| Monomial::new(e.to_vec());
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut e = [0; 4];
            e[i] = 2;
            e[j] = 2;
            terms.push((mon(e), one()));
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            for k in (j + 1)..4 {
                if i == j || i == k {
                    continue;
                }
                let mut e = [0; 4];
                e[i] = 2;
                e[j] = 1;
                e[k] = 1;
                terms.push((mon(e), C::new(b, 0.0)));
            }
        }
    }
    terms.push((mon([1, 1, 1, 1]), C::new(4.0 * b * b - 4.0 * b - 2.0, 0.0)));
    QuarticSurface { f: Polynomial::from_terms(NV, terms).expect("arity") }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetroidConfig {
    pub solver: SolverConfig,
    /// Relative tolerance for singular points and node tests.
    pub node_tol: f64,
    pub sample_count: usize,
    pub node_index: usize,
    /// Relative singular-value threshold for every nullspace.
    pub rank_tol: f64,
    pub seed: Seed,
}

impl Default for SymmetroidConfig {
    fn default() -> Self {
        SymmetroidConfig {
            solver: SolverConfig::default(),
            node_tol: 1e-8,
            sample_count: 100,
            node_index: 0,
            rank_tol: 1e-8,
            seed: Seed(0x5eed),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    /// Unit-norm representative, scaled so its largest entry is real positive.
    pub point: Vec<C>,
    pub real: bool,
    pub hessian_rank: usize,
    /// Eigenvalues of the Hessian restricted to the orthogonal complement of
    /// the node (real nodes only).
    pub affine_hessian: Option<[f64; 3]>,
}

impl Node {
    pub fn is_positive_definite(&self) -> bool {
        self.affine_hessian.is_some_and(|e| e.iter().all(|&v| v > 0.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    pub nodes: Vec<Node>,
    /// Singular points of other types (Hessian rank below 3).
    pub other_singular: Vec<Vec<C>>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_ten_nodal(&self) -> bool {
        self.nodes.len() == 10 && self.other_singular.is_empty()
    }

    pub fn require_ten_nodal(&self) -> Result<()> {
        if self.is_ten_nodal() {
            Ok(())
        } else {
            Err(Error::NotTenNodal { found: self.nodes.len() })
        }
    }
}

fn eval(p: &Polynomial, x: &[C]) -> C {
    p.eval(x).expect("arity")
}

fn max_coeff(p: &Polynomial) -> f64 {
    p.max_abs_coeff().max(1e-300)
}

fn unit(x: &[C]) -> Vec<C> {
    let n = norm2(x);
    let k = (0..x.len()).max_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm())).unwrap_or(0);
    let phase = if x[k].norm() > 0.0 { x[k].conj() / x[k].norm() } else { one() };
    x.iter().map(|v| v * phase / n).collect()
}

/// Gauss-Newton on an overdetermined polynomial system; returns the best
/// iterate and its max-norm residual.
pub fn gauss_newton(eqs: &[Polynomial], x0: &[C], iters: usize) -> (Vec<C>, f64) {
    let n = x0.len();
    let jac: Vec<Vec<Polynomial>> = eqs.iter().map(|e| (0..n).map(|i| e.partial(i)).collect()).collect();
    let resid = |x: &[C]| eqs.iter().fold(0.0f64, |m, e| m.max(eval(e, x).norm()));
    let mut x = x0.to_vec();
    let mut best = (x.clone(), resid(&x));
    for _ in 0..iters {
        let f: Vec<C> = eqs.iter().map(|e| -eval(e, &x)).collect();
        let j = CMat::from_fn(eqs.len(), n, |r, c| eval(&jac[r][c], &x));
        let dx = lstsq(&j, &f);
        for (a, d) in x.iter_mut().zip(&dx) {
            *a += d;
        }
        let r = resid(&x);
        if r < best.1 {
            best = (x.clone(), r);
        }
        if norm2(&dx) <= 1e-15 * (1.0 + norm2(&x)) {
            break;
        }
    }
    best
}

/// Random affine chart `x = a0 + sum s_j a_j` of a `dim`-dimensional linear
/// subspace of projective `(n-1)`-space, as polynomial images of `x_i`.
fn random_chart(n: usize, dim: usize, seed: Seed) -> (Vec<Vec<C>>, Vec<Polynomial>) {
    let mut rng = seed.rng();
    let basis: Vec<Vec<C>> = (0..=dim).map(|_| (0..n).map(|_| gaussian_complex(&mut rng)).collect()).collect();
    let images = (0..n)
        .map(|i| {
            let coeffs: Vec<C> = (1..=dim).map(|j| basis[j][i]).collect();
            Polynomial::linear(&coeffs, basis[0][i])
        })
        .collect();
    (basis, images)
}

fn chart_point(basis: &[Vec<C>], s: &[C]) -> Vec<C> {
    let n = basis[0].len();
    (0..n)
        .map(|i| basis[0][i] + s.iter().enumerate().map(|(j, v)| v * basis[j + 1][i]).sum::<C>())
        .collect()
}

fn random_combinations(eqs: &[Polynomial], k: usize, seed: Seed) -> Vec<Polynomial> {
    let mut rng = seed.rng();
    (0..k)
        .map(|_| {
            eqs.iter().fold(Polynomial::zero(eqs[0].nvars()), |acc, e| &acc + &e.scale(gaussian_complex(&mut rng)))
        })
        .collect()
}

/// Solves `eqs = 0` (homogeneous, projective) on a random `dim`-dimensional
/// linear section, after randomizing to `dim` equations. Returns unit
/// representatives that satisfy all of `eqs` to `tol` relative.
fn projective_zeros<E: Executor>(
    eqs: &[Polynomial],
    dim: usize,
    tol: f64,
    cfg: &SolverConfig,
    seed: Seed,
    exec: &E,
) -> Result<Vec<Vec<C>>> {
    let n = eqs[0].nvars();
    let (basis, images) = random_chart(n, dim, seed.derive(1));
    let pulled: Vec<Polynomial> = eqs.iter().map(|e| e.substitute(&images)).collect::<Result<_>>()?;
    let square = random_combinations(&pulled, dim, seed.derive(2));
    let sys = PolySystem::new(dim, square)?;
    let cfg = SolverConfig { seed: seed.derive(3), ..cfg.clone() };
    let sols = solve_total_degree(&sys, &cfg, exec)?;
    let scale = eqs.iter().map(max_coeff).fold(0.0f64, f64::max);
    let mut out = Vec::new();
    for s in &sols.points {
        let (s, _) = gauss_newton(&pulled, s, 8);
        let x = unit(&chart_point(&basis, &s));
        // Off a proper section, ambient refinement could leave it.
        let x = if dim + 1 == n { refine_projective(eqs, &x) } else { x };
        let r = eqs.iter().fold(0.0f64, |m, e| m.max(eval(e, &x).norm())) / scale;
        if r <= tol {
            out.push(x);
        }
    }
    let groups = cluster_points(&out, 1e-6);
    Ok(groups.into_iter().map(|g| out[g[0]].clone()).collect())
}

fn hessian(f: &Polynomial) -> Vec<Vec<Polynomial>> {
    let n = f.nvars();
    let grad = f.gradient();
    grad.iter().map(|g| (0..n).map(|j| g.partial(j)).collect()).collect()
}

fn eval_matrix(m: &[Vec<Polynomial>], x: &[C]) -> CMat {
    CMat::from_fn(m.len(), m[0].len(), |r, c| eval(&m[r][c], x))
}

/// Real orthogonal (or, for complex nodes, unitary) matrix whose last column
/// is the unit node; the identity when the node is `(0:0:0:1)`.
pub fn node_frame(node: &[C]) -> CMat {
    let n = node.len();
    let u = unit(node);
    let last = u[n - 1];
    let phase = if last.norm() > 0.0 { last.conj() / last.norm() } else { one() };
    let u: Vec<C> = u.iter().map(|v| v * phase).collect();
    let mut w = u.clone();
    w[n - 1] -= one();
    let ww: f64 = w.iter().map(|v| v.norm_sqr()).sum();
    if ww < 1e-30 {
        return CMat::identity(n, n);
    }
    CMat::from_fn(n, n, |i, j| {
        let id = if i == j { one() } else { C::zero() };
        id - w[i] * w[j].conj() * (2.0 / ww)
    })
}

/// Singular points of `F`, classified by Hessian rank.
pub fn find_nodes<E: Executor>(surface: &QuarticSurface, cfg: &SymmetroidConfig, exec: &E) -> Result<NodeSet> {
    let f = &surface.f;
    let grad = f.gradient();
    // A random plane meets any singular curve or surface.
    let on_plane = projective_zeros(&grad, 2, cfg.node_tol, &cfg.solver, cfg.seed.derive(0x51), exec)?;
    if !on_plane.is_empty() {
        return Err(Error::SingularLocusPositiveDim);
    }
    let points = projective_zeros(&grad, 3, cfg.node_tol, &cfg.solver, cfg.seed.derive(0x52), exec)?;
    let hess = hessian(f);
    let mut nodes = Vec::new();
    let mut other = Vec::new();
    for x in points {
        let h = eval_matrix(&hess, &x);
        let rank = numerical_rank(&h, 1e-6);
        if rank != 3 {
            other.push(x);
            continue;
        }
        let real = x.iter().all(|v| v.im.abs() <= 1e-8);
        let (point, affine_hessian) = if real {
            let p: Vec<C> = x.iter().map(|v| C::new(v.re, 0.0)).collect();
            let q = node_frame(&p);
            let hq = q.adjoint() * eval_matrix(&hess, &p) * &q;
            let m3 = Matrix3::from_fn(|i, j| hq[(i, j)].re);
            let eig = SymmetricEigen::new(m3).eigenvalues;
            let mut e = [eig[0], eig[1], eig[2]];
            e.sort_by(|a, b| a.total_cmp(b));
            (p, Some(e))
        } else {
            (x, None)
        };
        nodes.push(Node { point, real, hessian_rank: rank, affine_hessian });
    }
    nodes.sort_by(|a, b| crate::solver::canonical_cmp(&a.point, &b.point));
    Ok(NodeSet { nodes, other_singular: other })
}

/// `F(Q y) = f y4^2 + 2 g y4 + h` in node coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    /// Coordinate change `x = Q y`; the node is `Q e4`.
    pub frame: CMat,
    pub transformed: Polynomial,
    pub f: Polynomial,
    pub g: Polynomial,
    pub h: Polynomial,
}

fn transform(p: &Polynomial, q: &CMat) -> Result<Polynomial> {
    let rows: Vec<Vec<C>> = (0..q.nrows()).map(|i| (0..q.ncols()).map(|j| q[(i, j)]).collect()).collect();
    crate::poly::compose_linear(p, &rows)
}

fn split_last(p: &Polynomial, power: u32) -> Polynomial {
    let terms = p
        .terms()
        .iter()
        .filter(|(m, _)| m.exponents()[NV - 1] == power)
        .map(|(m, c)| (Monomial::new(m.exponents()[..NV - 1].to_vec()), *c));
    Polynomial::from_terms(NV - 1, terms).expect("arity")
}

/// Gauss-Newton in ambient coordinates with the patch `<x0, x> = 1`.
fn refine_projective(eqs: &[Polynomial], x0: &[C]) -> Vec<C> {
    let mut sys = eqs.to_vec();
    let patch: Vec<C> = x0.iter().map(|v| v.conj()).collect();
    sys.push(Polynomial::linear(&patch, -one()));
    let (x, _) = gauss_newton(&sys, x0, 10);
    unit(&x)
}

fn refine_node(f: &Polynomial, node: &[C]) -> Vec<C> {
    refine_projective(&f.gradient(), &unit(node))
}

pub fn project_from_node(surface: &QuarticSurface, node: &[C]) -> Result<Projection> {
    let scale = max_coeff(&surface.f);
    let mut node = unit(node);
    for attempt in 0..2 {
        let q = node_frame(&node);
        let fc = transform(&surface.f, &q)?;
        let lead = split_last(&fc, 4).max_abs_coeff().max(split_last(&fc, 3).max_abs_coeff()) / scale;
        if lead <= 1e-10 {
            let f = split_last(&fc, 2);
            let g = split_last(&fc, 1).scale(C::new(0.5, 0.0));
            let h = split_last(&fc, 0);
            return Ok(Projection { frame: q, transformed: fc, f, g, h });
        }
        if attempt == 0 {
            node = refine_node(&surface.f, &node);
        } else {
            return Err(Error::NodeRefinementFailed { residual: lead });
        }
    }
    unreachable!()
}

/// Two cubics with `K1 K2 = f h - g^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSplit {
    pub k1: Polynomial,
    pub k2: Polynomial,
    /// Nodes of the sextic, on both cubics.
    pub nodes: Vec<Vec<C>>,
    /// `K2` is the coefficientwise conjugate of `K1`.
    pub conjugate: bool,
    /// Both factors are real up to scale.
    pub real_split: bool,
    pub residual: f64,
}

fn is_real_up_to_scale(p: &Polynomial, tol: f64) -> bool {
    let Some((_, c)) = p.terms().iter().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())) else { return true };
    let c = *c;
    p.terms().iter().all(|(_, v)| (v / c).im.abs() <= tol)
}

fn from_coeffs(nvars: usize, mons: &[Monomial], v: &[C]) -> Polynomial {
    Polynomial::from_terms(nvars, mons.iter().cloned().zip(v.iter().copied())).expect("arity")
}

fn coeff_vector(p: &Polynomial, mons: &[Monomial]) -> Vec<C> {
    mons.iter().map(|m| p.coefficient(m)).collect()
}

pub fn split_conjugate_cubics<E: Executor>(
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    cfg: &SymmetroidConfig,
    exec: &E,
) -> Result<CubicSplit> {
    split_sextic(&(&(f * h) - &(g * g)), cfg, exec)
}

/// Splits a ternary sextic with nine nodes into two cubics through them.
pub fn split_sextic<E: Executor>(sextic: &Polynomial, cfg: &SymmetroidConfig, exec: &E) -> Result<CubicSplit> {
    if sextic.nvars() != 3 || sextic.degree() != 6 || !sextic.is_homogeneous() {
        return Err(Error::InvalidInput("expected a ternary sextic".into()));
    }
    let scale = max_coeff(&sextic);
    let nodes = projective_zeros(&sextic.gradient(), 2, cfg.node_tol, &cfg.solver, cfg.seed.derive(0x53), exec)?;
    if nodes.len() < 8 {
        return Err(Error::NotSplitting { residual: f64::INFINITY });
    }
    let cubics = monomials_of_degree(3, 3);
    let rows: Vec<Vec<C>> = nodes.iter().map(|p| cubics.iter().map(|m| m.eval(p)).collect()).collect();
    let ns = nullspace(&from_rows(&rows), 1e-6);
    if ns.basis.len() != 2 {
        return Err(Error::NotSplitting { residual: f64::INFINITY });
    }
    let mut k1 = from_coeffs(3, &cubics, &ns.basis[0]);
    let mut k2 = from_coeffs(3, &cubics, &ns.basis[1]);
    // The sextic lies in span(k1^2, k1 k2, k2^2).
    let sextics = monomials_of_degree(3, 6);
    let cols = [&k1 * &k1, &k1 * &k2, &k2 * &k2];
    let a = CMat::from_fn(sextics.len(), 3, |r, c| cols[c].coefficient(&sextics[r]));
    let mut abc = lstsq(&a, &coeff_vector(sextic, &sextics));
    if abc[0].norm() < abc[2].norm() {
        core::mem::swap(&mut k1, &mut k2);
        abc.swap(0, 2);
    }
    let (al, be, de) = (abc[0], abc[1], abc[2]);
    let disc = (be * be - al * de * 4.0).sqrt();
    let r1 = (-be + disc) / (al * 2.0);
    let r2 = (-be - disc) / (al * 2.0);
    // k1 - r k2 vanishes where the binary form does.
    let mut p1 = &k1 - &k2.scale(r1);
    let mut p2 = (&k1 - &k2.scale(r2)).scale(al);
    let prod = &p1 * &p2;
    let residual = prod.max_coeff_diff(sextic) / scale;
    if residual > 1e-8 {
        return Err(Error::NotSplitting { residual });
    }
    let real_split = is_real_up_to_scale(&p1, 1e-8) && is_real_up_to_scale(&p2, 1e-8);
    let mut conjugate = false;
    if !real_split {
        // Rescale so that K2 = conj(K1) when the sextic allows it.
        let q1 = p1.conj();
        let lam = {
            let a = CMat::from_fn(sextics.len(), 1, |r, _| (&p1 * &q1).coefficient(&sextics[r]));
            lstsq(&a, &coeff_vector(sextic, &sextics))[0]
        };
        if lam.im.abs() <= 1e-8 * lam.norm() && lam.re > 0.0 {
            let k = p1.scale(C::new(lam.re.sqrt(), 0.0));
            let kc = k.conj();
            if (&k * &kc).max_coeff_diff(sextic) / scale <= 1e-8 {
                p1 = k;
                p2 = kc;
                conjugate = true;
            }
        }
    }
    let residual = (&p1 * &p2).max_coeff_diff(sextic) / scale;
    Ok(CubicSplit { k1: p1, k2: p2, nodes, conjugate, real_split, residual })
}

/// Refines an intersection point of `F = K = 0` on a plane section. Tangency
/// points are singular for the square system, so a deflated variant that
/// also imposes the Jacobian determinant competes with plain Newton.
fn refine_section_point(fp: &Polynomial, kp: &Polynomial, s: &[C]) -> Option<Vec<C>> {
    let det = &(&fp.partial(0) * &kp.partial(1)) - &(&fp.partial(1) * &kp.partial(0));
    let ds = max_coeff(&det);
    let deflated = gauss_newton(&[fp.clone(), kp.clone(), det.scale(C::new(1.0 / ds, 0.0))], s, 12);
    if deflated.1 <= 1e-10 * (max_coeff(fp) + max_coeff(kp)) {
        return Some(deflated.0);
    }
    // Plain Newton only where the square system is well conditioned; near a
    // tangency it stalls at a small residual far from the point.
    let (x, _) = gauss_newton(&[fp.clone(), kp.clone()], s, 12);
    let j = CMat::from_fn(2, 2, |r, c| eval(&[fp, kp][r].partial(c), &x));
    let sv = crate::linalg::singular_values(&j);
    (sv[1] > 1e-6 * sv[0]).then_some(x)
}

/// Points on `F = K = 0` for a quartic `F` and a cubic `K` in four
/// variables, from random plane sections. When the cubic cone is tangent to
/// `F` along the curve, each section point is double.
pub fn sample_curve_points<E: Executor>(
    f: &Polynomial,
    k: &Polynomial,
    count: usize,
    cfg: &SymmetroidConfig,
    seed: Seed,
    exec: &E,
) -> Result<Vec<Vec<C>>> {
    let fs = max_coeff(f);
    let ks = max_coeff(k);
    let mut out: Vec<Vec<C>> = Vec::new();
    let mut empty = 0;
    let mut slice = 0u64;
    while out.len() < count {
        let (basis, images) = random_chart(NV, 2, seed.derive(slice));
        slice += 1;
        let fp = f.substitute(&images)?;
        let kp = k.substitute(&images)?;
        let sys = PolySystem::new(2, vec![fp.clone(), kp.clone()])?;
        let scfg = SolverConfig { seed: seed.derive(0x1000 + slice), ..cfg.solver.clone() };
        let sols = solve_total_degree(&sys, &scfg, exec)?;
        let before = out.len();
        for s in &sols.points {
            let Some(s) = refine_section_point(&fp, &kp, s) else { continue };
            let x = unit(&chart_point(&basis, &s));
            let r = (eval(f, &x).norm() / fs).max(eval(k, &x).norm() / ks);
            if r <= 1e-10 && !out.iter().any(|p| crate::solver::dist_inf(p, &x) < 1e-8) {
                out.push(x);
            }
        }
        if out.len() == before {
            empty += 1;
            if empty >= 5 {
                return Err(Error::SamplingFailed(format!(
                    "{empty} plane sections without curve points ({} points so far)",
                    out.len()
                )));
            }
        }
    }
    out.truncate(count);
    Ok(out)
}

/// Basis of the cubics in four variables vanishing on sampled points.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicIdeal {
    pub cubics: Vec<Polynomial>,
    pub singular_values: Vec<f64>,
}

impl CubicIdeal {
    /// `sigma_16 / sigma_17` for a four-dimensional nullspace.
    pub fn gap(&self) -> f64 {
        let s = &self.singular_values;
        if s.len() < 17 {
            return 0.0;
        }
        s[15] / s[16].max(1e-300)
    }
}

pub fn cubic_ideal_basis(points: &[Vec<C>], rank_tol: f64) -> Result<CubicIdeal> {
    let mons = monomials_of_degree(NV, 3);
    let rows: Vec<Vec<C>> = points.iter().map(|p| mons.iter().map(|m| m.eval(p)).collect()).collect();
    if rows.len() < mons.len() {
        return Err(Error::DegenerateCurve { nullity: mons.len() - rows.len() });
    }
    let ns = nullspace(&from_rows(&rows), rank_tol);
    if ns.basis.len() != 4 {
        return Err(Error::DegenerateCurve { nullity: ns.basis.len() });
    }
    let cubics = ns.basis.iter().map(|v| from_coeffs(NV, &mons, v)).collect();
    Ok(CubicIdeal { cubics, singular_values: ns.singular_values })
}

/// 3x4 matrix of linear forms.
pub type LinearMatrix = Vec<Vec<Polynomial>>;

fn linear_from(v: &[C]) -> Polynomial {
    Polynomial::linear(v, C::zero())
}

fn coefficient_matrix(polys: &[Polynomial], mons: &[Monomial]) -> CMat {
    CMat::from_fn(mons.len(), polys.len(), |r, c| polys[c].coefficient(&mons[r]))
}

/// Three independent linear syzygies `sum_j l_ij g_j = 0`, as the rows of a
/// Hilbert-Burch matrix.
pub fn linear_syzygies(g: &[Polynomial], rank_tol: f64) -> Result<LinearMatrix> {
    let quartics = monomials_of_degree(NV, 4);
    let cols: Vec<Polynomial> = (0..g.len())
        .flat_map(|j| (0..NV).map(move |m| (j, m)))
        .map(|(j, m)| &g[j] * &Polynomial::var(NV, m))
        .collect();
    let ns = nullspace(&coefficient_matrix(&cols, &quartics), rank_tol);
    if ns.basis.len() != 3 {
        return Err(Error::SyzygyDefect { nullity: ns.basis.len() });
    }
    Ok(ns
        .basis
        .iter()
        .map(|v| (0..g.len()).map(|j| linear_from(&v[j * NV..(j + 1) * NV])).collect())
        .collect())
}

fn det3(m: &[[&Polynomial; 3]; 3]) -> Polynomial {
    let t = |a: &Polynomial, b: &Polynomial, c: &Polynomial| &(a * b) * c;
    let plus = &(&t(m[0][0], m[1][1], m[2][2]) + &t(m[0][1], m[1][2], m[2][0])) + &t(m[0][2], m[1][0], m[2][1]);
    let minus = &(&t(m[0][2], m[1][1], m[2][0]) + &t(m[0][0], m[1][2], m[2][1])) + &t(m[0][1], m[1][0], m[2][2]);
    &plus - &minus
}

/// Maximal minors of a 3x4 matrix; entry `j` deletes column `j`.
pub fn maximal_minors(hb: &LinearMatrix) -> Vec<Polynomial> {
    (0..4)
        .map(|j| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            det3(&[
                [&hb[0][cols[0]], &hb[0][cols[1]], &hb[0][cols[2]]],
                [&hb[1][cols[0]], &hb[1][cols[1]], &hb[1][cols[2]]],
                [&hb[2][cols[0]], &hb[2][cols[1]], &hb[2][cols[2]]],
            ])
        })
        .collect()
}

/// Sine of the largest angle between the spans of two sets of cubics.
pub fn cubic_span_gap(a: &[Polynomial], b: &[Polynomial]) -> f64 {
    let mons = monomials_of_degree(NV, 3);
    subspace_gap(&coefficient_matrix(a, &mons), &coefficient_matrix(b, &mons))
}

/// Determinant of a square matrix of polynomials (Laplace expansion).
pub fn det_poly(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let nv = m[0][0].nvars();
    let mut acc = Polynomial::zero(nv);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = &m[0][j] * &det_poly(&sub);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Least-squares `lambda` with `a ~ lambda b` coefficientwise, and the
/// relative residual `max|a - lambda b| / max|lambda b|`.
pub fn proportionality(a: &Polynomial, b: &Polynomial) -> (C, f64) {
    let mons: Vec<Monomial> = {
        let mut m: Vec<Monomial> = a.terms().iter().chain(b.terms()).map(|(m, _)| m.clone()).collect();
        m.sort();
        m.dedup();
        m
    };
    let num: C = mons.iter().map(|m| b.coefficient(m).conj() * a.coefficient(m)).sum();
    let den: f64 = mons.iter().map(|m| b.coefficient(m).norm_sqr()).sum();
    if den == 0.0 {
        return (C::zero(), f64::INFINITY);
    }
    let lam = num / den;
    let scaled = b.scale(lam);
    (lam, a.max_coeff_diff(&scaled) / max_coeff(&scaled))
}

/// `[[l1, -l2, l3, -l4]; HB]` with `F = sum l_j m_j` over the maximal minors
/// `m_j` of `HB`, so that `det L = F` up to the solve residual.
pub fn complete_to_l(f: &Polynomial, hb: &LinearMatrix) -> Result<Vec<Vec<Polynomial>>> {
    if f.is_zero() {
        return Err(Error::InvalidInput("zero quartic".into()));
    }
    let minors = maximal_minors(hb);
    let quartics = monomials_of_degree(NV, 4);
    let cols: Vec<Polynomial> = (0..4)
        .flat_map(|j| (0..NV).map(move |m| (j, m)))
        .map(|(j, m)| &minors[j] * &Polynomial::var(NV, m))
        .collect();
    let a = coefficient_matrix(&cols, &quartics);
    let b = coeff_vector(f, &quartics);
    let sol = lstsq(&a, &b);
    let fitted = crate::linalg::mat_vec(&a, &sol);
    let residual = fitted.iter().zip(&b).fold(0.0f64, |m, (u, v)| m.max((u - v).norm())) / max_coeff(f);
    if residual > 1e-8 {
        return Err(Error::NotInIdeal { residual });
    }
    let mut first = Vec::with_capacity(4);
    for j in 0..4 {
        let l = linear_from(&sol[j * NV..(j + 1) * NV]);
        first.push(if j % 2 == 0 { l } else { -&l });
    }
    let mut rows = vec![first];
    rows.extend(hb.iter().cloned());
    Ok(rows)
}

/// Symmetric linear matrix with `det M = scale F`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetRep {
    pub m: Vec<Vec<Polynomial>>,
    pub scale: C,
    pub residual: f64,
}

impl DetRep {
    /// `max |coeff(det M - scale F)| / max |coeff(scale F)|`.
    pub fn certify(m: &[Vec<Polynomial>], f: &Polynomial) -> (C, f64) {
        proportionality(&det_poly(m), f)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.m[i][j] == self.m[j][i]))
    }
}

fn linear_coeffs(p: &Polynomial) -> Vec<C> {
    (0..NV).map(|i| p.coefficient(&Monomial::var(NV, i))).collect()
}

/// Solves `P L = (P L)^T` and returns `M = P L`, exactly symmetrized.
pub fn symmetrize(l: &[Vec<Polynomial>], f: &Polynomial, rank_tol: f64, seed: Seed) -> Result<DetRep> {
    let lk: Vec<CMat> = (0..NV)
        .map(|k| CMat::from_fn(4, 4, |r, c| linear_coeffs(&l[r][c])[k]))
        .collect();
    // Unknown P_{ac} at index 4a + c.
    let mut rows = Vec::new();
    for lm in &lk {
        for a in 0..4 {
            for b in (a + 1)..4 {
                let mut row = vec![C::zero(); 16];
                for c in 0..4 {
                    row[4 * a + c] += lm[(c, b)];
                    row[4 * b + c] -= lm[(c, a)];
                }
                rows.push(row);
            }
        }
    }
    let ns = nullspace(&from_rows(&rows), rank_tol);
    if ns.basis.is_empty() {
        return Err(Error::SymmetrizationFailed);
    }
    let mut rng = seed.rng();
    let mut best: Option<(f64, CMat)> = None;
    let tries = if ns.basis.len() == 1 { 1 } else { 16 };
    for _ in 0..tries {
        let w: Vec<C> = if ns.basis.len() == 1 { vec![one()] } else { ns.basis.iter().map(|_| gaussian_complex(&mut rng)).collect() };
        let v: Vec<C> = (0..16).map(|i| ns.basis.iter().zip(&w).map(|(b, c)| b[i] * c).sum()).collect();
        let p = CMat::from_fn(4, 4, |r, c| v[4 * r + c]);
        let size = p.norm();
        let d = p.clone().determinant().norm() / size.powi(4).max(1e-300);
        if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
            best = Some((d, p));
        }
    }
    let (d, p) = best.expect("at least one sample");
    if d <= 1e-8 {
        return Err(Error::SymmetrizationFailed);
    }
    let mut m: Vec<Vec<Polynomial>> = (0..4)
        .map(|r| {
            (0..4)
                .map(|c| (0..4).fold(Polynomial::zero(NV), |acc, k| &acc + &l[k][c].scale(p[(r, k)])))
                .collect()
        })
        .collect();
    for r in 0..4 {
        for c in (r + 1)..4 {
            let avg = (&m[r][c] + &m[c][r]).scale(C::new(0.5, 0.0));
            m[r][c] = avg.clone();
            m[c][r] = avg;
        }
    }
    let (scale, residual) = DetRep::certify(&m, f);
    Ok(DetRep { m, scale, residual })
}

/// Substitutes `y = Q^H x` into every entry.
fn back_to_original(m: &[Vec<Polynomial>], q: &CMat) -> Result<Vec<Vec<Polynomial>>> {
    let qh = q.adjoint();
    m.iter().map(|row| row.iter().map(|p| transform(p, &qh)).collect()).collect()
}

/// Intermediate data of one run of the pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetroidReport {
    pub nodes: NodeSet,
    pub node: Vec<C>,
    pub split: CubicSplit,
    pub sample_size: usize,
    pub ideal_gap: f64,
    /// Angle between the Hilbert-Burch minors and the sampled cubic ideal.
    pub minors_gap: f64,
    /// Symmetric representation in the original coordinates.
    pub detrep: DetRep,
}

/// Full pipeline from a 10-nodal quartic to a symmetric linear matrix.
pub fn determinantal_representation<E: Executor>(
    surface: &QuarticSurface,
    cfg: &SymmetroidConfig,
    exec: &E,
) -> Result<SymmetroidReport> {
    let nodes = find_nodes(surface, cfg, exec)?;
    nodes.require_ten_nodal()?;
    let node = nodes
        .nodes
        .get(cfg.node_index)
        .ok_or_else(|| Error::InvalidInput(format!("node index {} out of range", cfg.node_index)))?
        .point
        .clone();
    let proj = project_from_node(surface, &node)?;
    let split = split_conjugate_cubics(&proj.f, &proj.g, &proj.h, cfg, exec)?;
    let k1 = split.k1.embed(NV, &[0, 1, 2]);
    let points = sample_curve_points(&proj.transformed, &k1, cfg.sample_count, cfg, cfg.seed.derive(0x54), exec)?;
    let ideal = cubic_ideal_basis(&points, cfg.rank_tol)?;
    let hb = linear_syzygies(&ideal.cubics, cfg.rank_tol)?;
    let minors_gap = cubic_span_gap(&maximal_minors(&hb), &ideal.cubics);
    if minors_gap > 1e-6 {
        return Err(Error::SyzygyDefect { nullity: 3 });
    }
    let l = complete_to_l(&proj.transformed, &hb)?;
    let local = symmetrize(&l, &proj.transformed, cfg.rank_tol, cfg.seed.derive(0x55))?;
    let m = back_to_original(&local.m, &proj.frame)?;
    let (scale, residual) = DetRep::certify(&m, &surface.f);
    Ok(SymmetroidReport {
        nodes,
        node,
        split,
        sample_size: points.len(),
        ideal_gap: ideal.gap(),
        minors_gap,
        detrep: DetRep { m, scale, residual },
    })
}

/// `det(sum x_i A_i)` for symmetric 4x4 matrices `A_i`.
pub fn symmetroid_from_matrices(a: &[CMat]) -> Polynomial {
    let m: Vec<Vec<Polynomial>> = (0..4)
        .map(|r| {
            (0..4)
                .map(|c| {
                    let coeffs: Vec<C> = a.iter().map(|ai| ai[(r, c)]).collect();
                    linear_from(&coeffs)
                })
                .collect()
        })
        .collect();
    det_poly(&m)
}

/// Numerical rank of the 35x40 Jacobian of `(A_1..A_4) -> det(sum x_i A_i)`
/// at the given symmetric matrices.
pub fn qs_jacobian_rank_at(a: &[CMat]) -> usize {
    let m: Vec<Vec<Polynomial>> = (0..4)
        .map(|r| (0..4).map(|c| linear_from(&a.iter().map(|ai| ai[(r, c)]).collect::<Vec<_>>())).collect())
        .collect();
    // adj(M)_{ab} = (-1)^{a+b} minor_{ba}
    let cofactor = |r: usize, c: usize| -> Polynomial {
        let sub: Vec<Vec<Polynomial>> = (0..4)
            .filter(|&i| i != r)
            .map(|i| (0..4).filter(|&j| j != c).map(|j| m[i][j].clone()).collect())
            .collect();
        let d = det_poly(&sub);
        if (r + c) % 2 == 0 { d } else { -&d }
    };
    let cof: Vec<Vec<Polynomial>> = (0..4).map(|r| (0..4).map(|c| cofactor(r, c)).collect()).collect();
    let quartics = monomials_of_degree(NV, 4);
    let mut cols = Vec::with_capacity(40);
    for i in 0..NV {
        let xi = Polynomial::var(NV, i);
        for r in 0..4 {
            for c in r..4 {
                let d = if r == c { cof[r][r].clone() } else { &cof[r][c] + &cof[c][r] };
                cols.push(&xi * &d);
            }
        }
    }
    numerical_rank(&coefficient_matrix(&cols, &quartics), 1e-8)
}

pub fn random_symmetric(seed: Seed) -> Vec<CMat> {
    let mut rng = seed.rng();
    (0..4)
        .map(|_| {
            let mut a = CMat::zeros(4, 4);
            for r in 0..4 {
                for c in r..4 {
                    let v = gaussian_complex(&mut rng);
                    a[(r, c)] = v;
                    a[(c, r)] = v;
                }
            }
            a
        })
        .collect()
}

/// Jacobian rank of the symmetroid parametrization at a random point.
pub fn qs_jacobian_rank(seed: Seed) -> usize {
    qs_jacobian_rank_at(&random_symmetric(seed))
}
