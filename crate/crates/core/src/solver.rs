//! Start systems, batch path tracking, endpoint deduplication and
//! symmetry-orbit reduction.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::TAU;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{CompiledSystem, LinearForm, ProductSystem, SystemEval};
use crate::exec::Executor;
use crate::linalg::{self, lu_solve_in_place, norm_inf, CMat};
use crate::poly::{Monomial, PolySystem, Polynomial, C};
use crate::random::{unit_complex, Seed};
use crate::tracker::{newton_correct, PathStatus, PathTracker, TrackerConfig};

/// Coordinate map `x -> y` with `y[i] = signs[i] * x[perm[i]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    /// Negates the listed coordinates.
    pub fn negation(nvars: usize, vars: &[usize]) -> Self {
        let mut signs = vec![1i8; nvars];
        for &v in vars {
            signs[v] = -1;
        }
        SignedPermutation { perm: (0..nvars).collect(), signs }
    }

    pub fn apply(&self, x: &[C]) -> Vec<C> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| x[p] * s as f64)
            .collect()
    }

    /// `l(g x)` expressed as a linear form in `x`.
    fn pull_back(&self, f: &LinearForm) -> LinearForm {
        let mut coeffs = vec![C::zero(); f.coeffs.len()];
        for (i, a) in f.coeffs.iter().enumerate() {
            coeffs[self.perm[i]] += a * self.signs[i] as f64;
        }
        LinearForm { coeffs, constant: f.constant }
    }

    fn is_involution(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| {
            self.perm[p] == i && self.signs[i] == self.signs[p]
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryAction {
    pub generators: Vec<SignedPermutation>,
}

impl SymmetryAction {
    pub fn new(generators: Vec<SignedPermutation>) -> Self {
        SymmetryAction { generators }
    }

    /// All images of `x` under the generated group, `x` first.
    pub fn orbit(&self, x: &[C], tol: f64) -> Vec<Vec<C>> {
        let mut out: Vec<Vec<C>> = vec![x.to_vec()];
        let mut i = 0;
        while i < out.len() && out.len() < 4096 {
            for g in &self.generators {
                let y = g.apply(&out[i]);
                if !out.iter().any(|p| dist_inf(p, &y) <= tol) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// Checks numerically that every generator maps the zero set of `sys`
    /// to itself: `F(g x) = A F(x)` for a constant matrix `A` on random samples.
    pub fn preserves(&self, sys: &PolySystem, seed: Seed) -> bool {
        let n = sys.nvars();
        let m = sys.len();
        let mut rng = seed.rng();
        let samples = 2 * m + 4;
        for g in &self.generators {
            if g.perm.len() != n {
                return false;
            }
            let mut fx = CMat::zeros(samples, m);
            let mut fgx = CMat::zeros(samples, m);
            for k in 0..samples {
                let x: Vec<C> = (0..n).map(|_| crate::random::gaussian_complex(&mut rng)).collect();
                let a = sys.eval(&x).expect("arity");
                let b = sys.eval(&g.apply(&x)).expect("arity");
                for j in 0..m {
                    fx[(k, j)] = a[j];
                    fgx[(k, j)] = b[j];
                }
            }
            let scale = fgx.iter().fold(1e-300f64, |s, v| s.max(v.norm()));
            for j in 0..m {
                let col: Vec<C> = (0..samples).map(|k| fgx[(k, j)]).collect();
                let coef = linalg::lstsq(&fx, &col);
                let fit = linalg::mat_vec(&fx, &coef);
                let err = fit.iter().zip(&col).fold(0.0f64, |e, (u, v)| e.max((u - v).norm()));
                if err > 1e-8 * scale {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartKind {
    TotalDegree,
    LinearProduct,
}

/// Variable support of one linear factor in a product structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug)]
enum Structure {
    TotalDegree { degrees: Vec<u32>, consts: Vec<C> },
    LinearProduct { forms: Vec<Vec<LinearForm>>, factor_perm: Option<Vec<Vec<usize>>> },
}

#[derive(Clone, Debug)]
pub struct StartSystem {
    pub kind: StartKind,
    pub system: PolySystem,
    structure: Structure,
}

impl StartSystem {
    pub fn nvars(&self) -> usize {
        self.system.nvars()
    }

    fn radices(&self) -> Vec<u32> {
        match &self.structure {
            Structure::TotalDegree { degrees, .. } => degrees.clone(),
            Structure::LinearProduct { forms, .. } => forms.iter().map(|f| f.len() as u32).collect(),
        }
    }

    pub fn root_count(&self) -> u128 {
        self.radices().iter().map(|&d| d as u128).product()
    }

    fn digits(&self, mut index: u128) -> Vec<usize> {
        self.radices()
            .iter()
            .map(|&d| {
                let k = (index % d as u128) as usize;
                index /= d as u128;
                k
            })
            .collect()
    }

    fn index_of(&self, digits: &[usize]) -> u128 {
        let mut idx = 0u128;
        for (&d, &k) in self.radices().iter().zip(digits).rev() {
            idx = idx * d as u128 + k as u128;
        }
        idx
    }

    /// Root number `index` in mixed-radix order (first equation fastest);
    /// `None` for a singular linear-product combination.
    pub fn root(&self, index: u128) -> Option<Vec<C>> {
        let digits = self.digits(index);
        match &self.structure {
            Structure::TotalDegree { degrees, consts } => Some(
                digits
                    .iter()
                    .zip(degrees.iter().zip(consts))
                    .map(|(&k, (&d, c))| {
                        let r = c.norm().powf(1.0 / d as f64);
                        let th = (c.arg() + TAU * k as f64) / d as f64;
                        C::from_polar(r, th)
                    })
                    .collect(),
            ),
            Structure::LinearProduct { forms, .. } => {
                let n = self.nvars();
                let mut a = vec![C::zero(); n * n];
                let mut b = vec![C::zero(); n];
                for (i, &k) in digits.iter().enumerate() {
                    let f = &forms[i][k];
                    a[i * n..(i + 1) * n].copy_from_slice(&f.coeffs);
                    b[i] = -f.constant;
                }
                if lu_solve_in_place(&mut a, n, &mut b) {
                    Some(b)
                } else {
                    None
                }
            }
        }
    }

    /// Every start root; singular combinations are skipped.
    pub fn roots(&self) -> Vec<Vec<C>> {
        (0..self.root_count()).filter_map(|i| self.root(i)).collect()
    }

    /// Number of orbits of start roots under the factor permutation of an
    /// involutive symmetry (counted combinatorially).
    pub fn orbit_count(&self) -> Option<u128> {
        match &self.structure {
            Structure::LinearProduct { factor_perm: Some(perms), .. } => {
                let total = self.root_count();
                let fixed: u128 = perms
                    .iter()
                    .map(|p| p.iter().enumerate().filter(|(k, &q)| *k == q).count() as u128)
                    .product();
                Some((total + fixed) / 2)
            }
            _ => None,
        }
    }

    fn orbit_rep(&self, index: u128) -> u128 {
        match &self.structure {
            Structure::LinearProduct { factor_perm: Some(perms), .. } => {
                let d = self.digits(index);
                let img: Vec<usize> = d.iter().zip(perms).map(|(&k, p)| p[k]).collect();
                index.min(self.index_of(&img))
            }
            _ => index,
        }
    }

    /// Representative root indices, one per symmetry orbit.
    fn representatives(&self, sym: Option<&SymmetryAction>) -> Result<Vec<u128>> {
        let total = self.root_count();
        match (sym, &self.structure) {
            (None, _) => Ok((0..total).collect()),
            (Some(_), Structure::LinearProduct { factor_perm: Some(_), .. }) => {
                Ok((0..total).filter(|&i| self.orbit_rep(i) == i).collect())
            }
            (Some(sym), _) => numeric_representatives(self, sym),
        }
    }

    /// Distinct random orbit representatives.
    pub fn sample_representatives(&self, sym: Option<&SymmetryAction>, count: u64, seed: Seed) -> Vec<u128> {
        let total = self.root_count();
        let orbits = if sym.is_some() { self.orbit_count().unwrap_or(total) } else { total };
        if (count as u128) >= orbits {
            return self.representatives(sym).unwrap_or_default();
        }
        let mut rng = seed.rng();
        let mut chosen = BTreeSet::new();
        let mut order = Vec::new();
        let mut attempts = 0u64;
        while (chosen.len() as u64) < count && attempts < count.saturating_mul(50) {
            attempts += 1;
            let hi = rng.gen::<u64>() as u128;
            let lo = rng.gen::<u64>() as u128;
            let idx = ((hi << 64) | lo) % total;
            let rep = if sym.is_some() { self.orbit_rep(idx) } else { idx };
            if chosen.insert(rep) {
                order.push(rep);
            }
        }
        order
    }

    /// Start evaluator on the projective chart: homogenizing variable at
    /// index 0, chart row `<patch, z> = 1` appended.
    fn projective_evaluator(&self, patch: &[C]) -> Box<dyn SystemEval> {
        let n1 = self.nvars() + 1;
        let chart = LinearForm { coeffs: patch.to_vec(), constant: C::new(-1.0, 0.0) };
        match &self.structure {
            Structure::LinearProduct { forms, .. } => {
                let mut eqs: Vec<Vec<LinearForm>> = forms
                    .iter()
                    .map(|fs| {
                        fs.iter()
                            .map(|f| {
                                let mut coeffs = Vec::with_capacity(n1);
                                coeffs.push(f.constant);
                                coeffs.extend_from_slice(&f.coeffs);
                                LinearForm { coeffs, constant: C::zero() }
                            })
                            .collect()
                    })
                    .collect();
                eqs.push(vec![chart]);
                Box::new(ProductSystem::new(n1, eqs))
            }
            Structure::TotalDegree { .. } => {
                let mut sys = homogenize_system(&self.system);
                sys.push(chart.to_polynomial()).expect("arity");
                Box::new(CompiledSystem::new(&sys))
            }
        }
    }
}

use alloc::boxed::Box;

fn numeric_representatives(start: &StartSystem, sym: &SymmetryAction) -> Result<Vec<u128>> {
    let total = start.root_count();
    let roots: Vec<(u128, Vec<C>)> = (0..total).filter_map(|i| start.root(i).map(|r| (i, r))).collect();
    let pts: Vec<Vec<C>> = roots.iter().map(|(_, r)| r.clone()).collect();
    let index = ProjectionIndex::new(&pts);
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    for (k, p) in pts.iter().enumerate() {
        for g in &sym.generators {
            let img = g.apply(p);
            match index.find(&pts, &img, 1e-8) {
                Some(j) => union(&mut parent, k, j),
                None => return Err(Error::StartNotInvariant),
            }
        }
    }
    let mut reps = Vec::new();
    for k in 0..pts.len() {
        if find(&mut parent, k) == k {
            reps.push(roots[k].0);
        }
    }
    Ok(reps)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

pub(crate) fn dist_inf(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

/// Sorted scalar projection for neighbourhood queries in the max-modulus norm.
struct ProjectionIndex {
    keys: Vec<(f64, usize)>,
    weight: f64,
}

fn projection_weights(i: usize) -> (f64, f64) {
    let a = 0.5 + 0.5 * ((i as f64) * 0.754_877_666).fract();
    let b = 0.5 + 0.5 * ((i as f64) * 0.569_840_291 + 0.3).fract();
    (a, b)
}

fn project(p: &[C]) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, z)| {
            let (a, b) = projection_weights(i);
            a * z.re + b * z.im
        })
        .sum()
}

impl ProjectionIndex {
    fn new(points: &[Vec<C>]) -> Self {
        let mut keys: Vec<(f64, usize)> = points.iter().enumerate().map(|(i, p)| (project(p), i)).collect();
        keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let n = points.first().map(|p| p.len()).unwrap_or(0);
        let weight = (0..n).map(|i| {
            let (a, b) = projection_weights(i);
            a + b
        }).sum::<f64>();
        ProjectionIndex { keys, weight }
    }

    fn find(&self, points: &[Vec<C>], q: &[C], tol: f64) -> Option<usize> {
        let key = project(q);
        let w = self.weight * tol;
        let start = self.keys.partition_point(|(k, _)| *k < key - w);
        for &(k, i) in &self.keys[start..] {
            if k > key + w {
                break;
            }
            if dist_inf(&points[i], q) <= tol {
                return Some(i);
            }
        }
        None
    }
}

/// Single-linkage clusters under the max-modulus distance, each cluster's
/// members listed in canonical order, clusters ordered by representative.
pub fn cluster_points(points: &[Vec<C>], tol: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut keys: Vec<(f64, usize)> = points.iter().enumerate().map(|(i, p)| (project(p), i)).collect();
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let dim = points.first().map(|p| p.len()).unwrap_or(0);
    let w: f64 = (0..dim).map(|i| {
        let (a, b) = projection_weights(i);
        a + b
    }).sum::<f64>() * tol;
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..keys.len() {
        for b in (a + 1)..keys.len() {
            if keys[b].0 - keys[a].0 > w {
                break;
            }
            let (i, j) = (keys[a].1, keys[b].1);
            if dist_inf(&points[i], &points[j]) <= tol {
                union(&mut parent, i, j);
            }
        }
    }
    let mut groups: alloc::collections::BTreeMap<usize, Vec<usize>> = alloc::collections::BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    for g in &mut out {
        g.sort_by(|&a, &b| canonical_cmp(&points[a], &points[b]));
    }
    out.sort_by(|a, b| canonical_cmp(&points[a[0]], &points[b[0]]));
    out
}

/// Real parts compared first, then imaginary parts, each on a 1e-9 grid so
/// that round-off noise around zero does not decide the order.
pub fn canonical_cmp(a: &[C], b: &[C]) -> Ordering {
    let q = |v: f64| (v * 1e9).round();
    for (x, y) in a.iter().zip(b) {
        match q(x.re).total_cmp(&q(y.re)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    for (x, y) in a.iter().zip(b) {
        match q(x.im).total_cmp(&q(y.im)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCounts {
    pub success: u64,
    pub divergent: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolutionSet {
    pub points: Vec<Vec<C>>,
    pub residuals: Vec<f64>,
    pub multiplicity_flags: Vec<usize>,
    pub counts: PathCounts,
    /// Winding number recorded for each point's representative path.
    pub windings: Vec<usize>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Clusters `points` at `cluster_tol` and keeps one representative each.
pub fn dedupe_solutions(points: &[Vec<C>], cluster_tol: f64) -> SolutionSet {
    let residuals = vec![0.0; points.len()];
    let windings = vec![1; points.len()];
    dedupe_with(points, &residuals, &windings, cluster_tol)
}

fn dedupe_with(points: &[Vec<C>], residuals: &[f64], windings: &[usize], tol: f64) -> SolutionSet {
    let groups = cluster_points(points, tol);
    let mut out = SolutionSet::default();
    for g in groups {
        let r = g[0];
        out.points.push(points[r].clone());
        out.residuals.push(residuals[r]);
        out.windings.push(windings[r]);
        out.multiplicity_flags.push(g.len());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tracker: TrackerConfig,
    pub cluster_tol: f64,
    pub residual_tol: f64,
    pub paths_limit: Option<u64>,
    pub seed: Seed,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tracker: TrackerConfig::default(),
            cluster_tol: 1e-6,
            residual_tol: 1e-8,
            paths_limit: None,
            seed: Seed(0),
        }
    }
}

/// `x_i^{d_i} - c_i` with random unit-modulus `c_i`.
pub fn total_degree_start(target: &PolySystem, seed: Seed) -> Result<StartSystem> {
    let n = target.nvars();
    if !target.is_square() {
        return Err(Error::NotSquare { equations: target.len(), variables: n });
    }
    let mut rng = seed.rng();
    let degrees: Vec<u32> = target.degrees().iter().map(|&d| d.max(1)).collect();
    let consts: Vec<C> = degrees.iter().map(|_| unit_complex(&mut rng)).collect();
    let eqs = degrees
        .iter()
        .zip(&consts)
        .enumerate()
        .map(|(i, (&d, &c))| {
            &Polynomial::monomial(pure_power(n, i, d), C::new(1.0, 0.0)) - &Polynomial::constant(n, c)
        })
        .collect();
    Ok(StartSystem {
        kind: StartKind::TotalDegree,
        system: PolySystem::new(n, eqs)?,
        structure: Structure::TotalDegree { degrees, consts },
    })
}

fn pure_power(n: usize, i: usize, d: u32) -> Monomial {
    let mut e = vec![0; n];
    e[i] = d;
    Monomial::new(e)
}

/// Products of random affine-linear forms. With a symmetry (one involutive
/// signed permutation), consecutive factors are paired as `l, l o g` and an
/// unpaired trailing factor is averaged into `(l + l o g) / 2`.
pub fn linear_product_start(
    target: &PolySystem,
    groupings: &[Vec<FactorSpec>],
    sym: Option<&SymmetryAction>,
    seed: Seed,
) -> Result<StartSystem> {
    let n = target.nvars();
    if !target.is_square() {
        return Err(Error::NotSquare { equations: target.len(), variables: n });
    }
    if groupings.len() != target.len() {
        return Err(Error::DimensionMismatch { expected: target.len(), found: groupings.len() });
    }
    let generator = match sym {
        None => None,
        Some(s) if s.generators.len() == 1 && s.generators[0].is_involution() && s.generators[0].perm.len() == n => {
            Some(&s.generators[0])
        }
        Some(_) => {
            return Err(Error::UnsupportedSymmetry(String::from(
                "linear-product starts support a single involutive signed permutation",
            )))
        }
    };
    let mut rng = seed.rng();
    let mut forms = Vec::with_capacity(n);
    let mut perms = Vec::with_capacity(n);
    for (i, (eq, spec)) in target.equations().iter().zip(groupings).enumerate() {
        if spec.len() as u32 != eq.degree() || spec.is_empty() {
            return Err(Error::InconsistentGrouping { equation: i, degree: eq.degree(), factors: spec.len() });
        }
        let mut fs: Vec<LinearForm> = Vec::with_capacity(spec.len());
        for f in spec {
            if f.vars.iter().any(|&v| v >= n) {
                return Err(Error::InvalidInput(String::from("factor variable out of range")));
            }
            let mut coeffs = vec![C::zero(); n];
            for &v in &f.vars {
                coeffs[v] = unit_complex(&mut rng);
            }
            fs.push(LinearForm { coeffs, constant: unit_complex(&mut rng) });
        }
        let mut perm: Vec<usize> = (0..fs.len()).collect();
        if let Some(g) = generator {
            let mut k = 0;
            while k + 1 < fs.len() {
                let image = g.pull_back(&fs[k]);
                fs[k + 1] = image;
                perm[k] = k + 1;
                perm[k + 1] = k;
                k += 2;
            }
            if k < fs.len() {
                let image = g.pull_back(&fs[k]);
                let avg = LinearForm {
                    coeffs: fs[k].coeffs.iter().zip(&image.coeffs).map(|(a, b)| (a + b) * 0.5).collect(),
                    constant: fs[k].constant,
                };
                fs[k] = avg;
            }
        }
        forms.push(fs);
        perms.push(perm);
    }
    let product = ProductSystem::new(n, forms.clone());
    Ok(StartSystem {
        kind: StartKind::LinearProduct,
        system: product.to_poly_system(),
        structure: Structure::LinearProduct { forms, factor_perm: generator.map(|_| perms) },
    })
}

/// Homogenizes every equation with a new variable at index 0.
pub fn homogenize_system(sys: &PolySystem) -> PolySystem {
    sys.map_equations(|p| p.homogenize(0))
}

/// Squares up an overdetermined system to `k` equations: linear equations
/// are kept verbatim and the rest are combined as `f_i + sum_j a_ij f_j`
/// (equations sorted by descending degree, `j` over the surplus).
pub fn randomize_to_square(sys: &PolySystem, k: usize, seed: Seed) -> Result<PolySystem> {
    if sys.len() < k {
        return Err(Error::InvalidInput(String::from("fewer equations than requested")));
    }
    if sys.len() == k {
        return Ok(sys.clone());
    }
    let mut linear: Vec<&Polynomial> = Vec::new();
    let mut rest: Vec<&Polynomial> = Vec::new();
    for p in sys.equations() {
        if p.degree() <= 1 {
            linear.push(p);
        } else {
            rest.push(p);
        }
    }
    if linear.len() > k {
        rest.extend(linear.drain(..));
    }
    rest.sort_by(|a, b| b.degree().cmp(&a.degree()));
    let keep = k - linear.len();
    let mut rng = seed.rng();
    let mut out: Vec<Polynomial> = linear.into_iter().cloned().collect();
    for i in 0..keep {
        let mut p = rest[i].clone();
        for extra in &rest[keep..] {
            p = &p + &extra.scale(unit_complex(&mut rng));
        }
        out.push(p);
    }
    PolySystem::new(sys.nvars(), out)
}

/// Result of one tracked path after dehomogenization and polishing.
#[derive(Clone, Debug, PartialEq)]
pub struct PathReport {
    pub index: u128,
    pub status: PathStatus,
    pub point: Vec<C>,
    pub residual: f64,
    pub winding: usize,
    pub steps: usize,
    pub low_confidence: bool,
}

struct Prepared {
    target_h: CompiledSystem,
    start_h: Box<dyn SystemEval>,
    patch: Vec<C>,
    gamma: C,
    normalized: PolySystem,
}

fn prepare(target: &PolySystem, start: &StartSystem, seed: Seed) -> Result<Prepared> {
    let n = target.nvars();
    if !target.is_square() {
        return Err(Error::NotSquare { equations: target.len(), variables: n });
    }
    if start.nvars() != n || start.system.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: start.nvars() });
    }
    let mut rng = seed.derive(0x7061_7468).rng();
    let gamma = unit_complex(&mut rng);
    let patch: Vec<C> = (0..=n).map(|_| unit_complex(&mut rng)).collect();
    let normalized = target.normalized();
    let mut th = homogenize_system(&normalized);
    th.push(LinearForm { coeffs: patch.clone(), constant: C::new(-1.0, 0.0) }.to_polynomial())?;
    Ok(Prepared {
        target_h: CompiledSystem::new(&th),
        start_h: start.projective_evaluator(&patch),
        patch,
        gamma,
        normalized,
    })
}

fn lift_to_chart(patch: &[C], y: &[C]) -> Vec<C> {
    let mut z = Vec::with_capacity(y.len() + 1);
    z.push(C::new(1.0, 0.0));
    z.extend_from_slice(y);
    let s: C = patch.iter().zip(&z).map(|(a, b)| a * b).sum();
    z.iter().map(|v| v / s).collect()
}

fn run_path(prep: &Prepared, tracker: &PathTracker<'_>, start: &StartSystem, index: u128, cfg: &SolverConfig) -> PathReport {
    let report = |status, point, residual, winding, steps, low_confidence| PathReport {
        index,
        status,
        point,
        residual,
        winding,
        steps,
        low_confidence,
    };
    let root = match start.root(index) {
        Some(r) => r,
        None => return report(PathStatus::StepFailure, Vec::new(), f64::INFINITY, 0, 0, false),
    };
    let z0 = lift_to_chart(&prep.patch, &root);
    let res = tracker.track(&z0);
    if res.status != PathStatus::Success {
        return report(res.status, res.endpoint, res.residual, res.winding_estimate, res.steps_taken, res.low_confidence);
    }
    let z = &res.endpoint;
    let h = z[0];
    let affine: Vec<C> = z[1..].iter().map(|v| v / h).collect();
    let scale = norm_inf(&affine);
    if h.norm() == 0.0 || scale > cfg.tracker.max_norm {
        return report(PathStatus::Divergent, affine, f64::INFINITY, res.winding_estimate, res.steps_taken, res.low_confidence);
    }
    let pol = newton_correct(&prep.normalized, &affine, cfg.tracker.newton_tol, cfg.tracker.newton_max_iters);
    let before = prep.normalized.residual(&affine).unwrap_or(f64::INFINITY);
    let (point, residual) = if pol.residual <= before && dist_inf(&pol.point, &affine) <= 1e-6 * (1.0 + scale) {
        (pol.point, pol.residual)
    } else {
        (affine, before)
    };
    let status = if residual <= cfg.residual_tol { PathStatus::Success } else { PathStatus::StepFailure };
    report(status, point, residual, res.winding_estimate, res.steps_taken, res.low_confidence)
}

fn assemble(outcomes: Vec<PathReport>, sym: Option<&SymmetryAction>, cfg: &SolverConfig) -> SolutionSet {
    let mut counts = PathCounts::default();
    let mut pts = Vec::new();
    let mut res = Vec::new();
    let mut wind = Vec::new();
    for o in outcomes {
        match o.status {
            PathStatus::Success => {
                counts.success += 1;
                let images = match sym {
                    Some(s) => s.orbit(&o.point, cfg.cluster_tol),
                    None => vec![o.point],
                };
                for p in images {
                    pts.push(p);
                    res.push(o.residual);
                    wind.push(o.winding);
                }
            }
            PathStatus::Divergent => counts.divergent += 1,
            _ => counts.failed += 1,
        }
    }
    let mut set = dedupe_with(&pts, &res, &wind, cfg.cluster_tol);
    set.counts = counts;
    set
}

/// Tracks one path per symmetry orbit of start roots (all roots without a
/// symmetry), reconstitutes orbits and deduplicates. Tracking is done on a
/// random projective chart.
pub fn solve_system<E: Executor>(
    target: &PolySystem,
    start: &StartSystem,
    sym: Option<&SymmetryAction>,
    cfg: &SolverConfig,
    exec: &E,
) -> Result<SolutionSet> {
    let budget = match sym {
        Some(_) => start.orbit_count().unwrap_or(start.root_count()),
        None => start.root_count(),
    };
    if let Some(limit) = cfg.paths_limit {
        if budget > limit as u128 {
            return Err(Error::PathBudgetExceeded { requested: budget, limit });
        }
    }
    let reps = start.representatives(sym)?;
    solve_indices(target, start, sym, &reps, cfg, exec)
}

/// Summary of a sampled run.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledRun {
    pub solutions: SolutionSet,
    pub tracked: u64,
    pub total_orbits: u128,
}

/// Tracks `count` random orbit representatives only.
pub fn solve_sampled<E: Executor>(
    target: &PolySystem,
    start: &StartSystem,
    sym: Option<&SymmetryAction>,
    count: u64,
    cfg: &SolverConfig,
    exec: &E,
) -> Result<SampledRun> {
    let reps = start.sample_representatives(sym, count, cfg.seed.derive(0x7361_6d70));
    let total = match sym {
        Some(_) => start.orbit_count().unwrap_or(start.root_count()),
        None => start.root_count(),
    };
    let solutions = solve_indices(target, start, sym, &reps, cfg, exec)?;
    Ok(SampledRun { solutions, tracked: reps.len() as u64, total_orbits: total })
}

fn solve_indices<E: Executor>(
    target: &PolySystem,
    start: &StartSystem,
    sym: Option<&SymmetryAction>,
    reps: &[u128],
    cfg: &SolverConfig,
    exec: &E,
) -> Result<SolutionSet> {
    let outcomes = track_indices(target, start, reps, cfg, exec)?;
    Ok(assemble(outcomes, sym, cfg))
}

/// Per-path reports for the given start-root indices, in input order.
pub fn track_indices<E: Executor>(
    target: &PolySystem,
    start: &StartSystem,
    indices: &[u128],
    cfg: &SolverConfig,
    exec: &E,
) -> Result<Vec<PathReport>> {
    let prep = prepare(target, start, cfg.seed)?;
    let tracker = PathTracker::new(&prep.target_h, prep.start_h.as_ref(), prep.gamma, cfg.tracker.clone())?
        .with_homogenizing_var(0);
    Ok(exec.map(indices.len(), |k| run_path(&prep, &tracker, start, indices[k], cfg)))
}

/// Total-degree solve of a square system.
pub fn solve_total_degree<E: Executor>(target: &PolySystem, cfg: &SolverConfig, exec: &E) -> Result<SolutionSet> {
    let start = total_degree_start(target, cfg.seed.derive(1))?;
    solve_system(target, &start, None, cfg, exec)
}
