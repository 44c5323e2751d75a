//! Witness sets: slicing, monodromy grouping, trace certification,
//! membership and a per-dimension decomposition sweep.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::eval::{CompiledSystem, LinearForm};
use crate::exec::Executor;
use crate::linalg::{condition_number, norm_inf, CMat};
use crate::poly::{PolySystem, Polynomial, C};
use crate::random::{unit_complex, Seed};
use crate::solver::{dist_inf, randomize_to_square, solve_total_degree, PathCounts, SolverConfig};
use crate::tracker::{PathStatus, PathTracker, TrackerConfig};

/// `forms.len()` affine-linear equations supported on the variables `vars`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub forms: Vec<LinearForm>,
    pub vars: Vec<usize>,
    pub seed: Seed,
}

impl Slice {
    pub fn random(nvars: usize, vars: &[usize], k: usize, seed: Seed) -> Slice {
        let mut rng = seed.rng();
        let forms = (0..k)
            .map(|_| {
                let mut coeffs = vec![C::zero(); nvars];
                for &v in vars {
                    coeffs[v] = unit_complex(&mut rng);
                }
                LinearForm { coeffs, constant: unit_complex(&mut rng) }
            })
            .collect();
        Slice { forms, vars: vars.to_vec(), seed }
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.forms.iter().map(LinearForm::to_polynomial).collect()
    }

    /// Coordinates of `x` on the slice variables.
    pub fn restrict(&self, x: &[C]) -> Vec<C> {
        self.vars.iter().map(|&v| x[v]).collect()
    }

    /// Same linear parts, constants chosen so that the slice contains the
    /// point with slice-variable coordinates `q`.
    pub fn through(&self, q: &[C]) -> Slice {
        let mut out = self.clone();
        for f in &mut out.forms {
            f.constant = -self.vars.iter().zip(q).map(|(&v, x)| f.coeffs[v] * x).sum::<C>();
        }
        out
    }

    /// Translates form `index` by `delta`.
    pub fn shifted(&self, index: usize, delta: C) -> Slice {
        let mut out = self.clone();
        out.forms[index].constant += delta;
        out
    }

    /// A fresh slice with the same support.
    pub fn reseeded(&self, seed: Seed) -> Slice {
        let n = self.forms.first().map(|f| f.coeffs.len()).unwrap_or(0);
        Slice::random(n, &self.vars, self.dim(), seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessConfig {
    pub solver: SolverConfig,
    /// Variables the slices act on; all variables when `None`.
    pub slice_vars: Option<Vec<usize>>,
    pub max_loops: usize,
    pub max_retries: usize,
    pub trace_delta: f64,
    pub trace_tol: f64,
    pub cond_max: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            solver: SolverConfig::default(),
            slice_vars: None,
            max_loops: 10,
            max_retries: 20,
            trace_delta: 0.1,
            trace_tol: 1e-6,
            cond_max: 1e8,
        }
    }
}

impl WitnessConfig {
    fn vars(&self, n: usize) -> Vec<usize> {
        self.slice_vars.clone().unwrap_or_else(|| (0..n).collect())
    }

    fn move_cfg(&self) -> TrackerConfig {
        TrackerConfig { use_endgame: false, ..self.solver.tracker.clone() }
    }
}

/// Candidate witness points of dimension `dim` before decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSuperset {
    pub square: PolySystem,
    pub slice: Slice,
    pub points: Vec<Vec<C>>,
    pub dim: usize,
    pub counts: PathCounts,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSet {
    pub system: PolySystem,
    /// Randomized square subsystem the points were tracked on.
    pub square: PolySystem,
    pub slice: Slice,
    pub points: Vec<Vec<C>>,
    pub dim: usize,
    pub degree: usize,
}

fn stack(square: &PolySystem, slice: &Slice) -> PolySystem {
    let mut eqs = square.equations().to_vec();
    eqs.extend(slice.polynomials());
    PolySystem::new(square.nvars(), eqs).expect("slice arity")
}

fn point_residual_ok(sys: &PolySystem, p: &[C], tol: f64) -> bool {
    let d = sys.degrees().into_iter().max().unwrap_or(1) as i32;
    let scale = norm_inf(p).max(1.0).powi(d);
    sys.residual(p).map(|r| r <= tol * scale).unwrap_or(false)
}

fn jacobian_condition(sys: &PolySystem, p: &[C]) -> f64 {
    let j = sys.jacobian();
    let n = sys.nvars();
    let mut m = CMat::zeros(sys.len(), n);
    for (i, row) in j.iter().enumerate() {
        for (k, e) in row.iter().enumerate() {
            m[(i, k)] = e.eval(p).unwrap_or(C::zero());
        }
    }
    condition_number(&m)
}

/// Isolated solutions of `sys` (squared to `nvars - k` equations) together
/// with a random `k`-dimensional slice, filtered by residual on `sys` and by
/// nonsingularity.
pub fn witness_superset<E: Executor>(sys: &PolySystem, k: usize, cfg: &WitnessConfig, exec: &E) -> Result<WitnessSuperset> {
    let n = sys.nvars();
    let vars = cfg.vars(n);
    if k > vars.len() || vars.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput(String::from("slice dimension exceeds slice variables")));
    }
    let seed = cfg.solver.seed;
    let slice = Slice::random(n, &vars, k, seed.derive(0x736c));
    let codim = n - k;
    if sys.len() < codim {
        let square = sys.normalized();
        return Ok(WitnessSuperset { square, slice, points: Vec::new(), dim: k, counts: PathCounts::default() });
    }
    let square = randomize_to_square(sys, codim, seed.derive(0x7371))?.normalized();
    let full = stack(&square, &slice);
    let sols = solve_total_degree(&full, &cfg.solver, exec)?;
    let original = sys.normalized();
    let counts = sols.counts;
    let points = sols
        .points
        .into_iter()
        .filter(|p| point_residual_ok(&original, p, cfg.solver.residual_tol))
        .filter(|p| jacobian_condition(&full, p) < cfg.cond_max)
        .collect();
    Ok(WitnessSuperset { square, slice, points, dim: k, counts })
}

/// Tracks `points` from slice `from` to slice `to`; `None` marks a lost path.
pub fn move_slice<E: Executor>(
    square: &PolySystem,
    from: &Slice,
    to: &Slice,
    gamma: C,
    points: &[Vec<C>],
    tracker: &TrackerConfig,
    exec: &E,
) -> Result<Vec<Option<Vec<C>>>> {
    let start = CompiledSystem::new(&stack(square, from));
    let target = CompiledSystem::new(&stack(square, to));
    let pt = PathTracker::new(&target, &start, gamma, tracker.clone())?;
    Ok(exec.map(points.len(), |i| {
        let r = pt.track(&points[i]);
        (r.status == PathStatus::Success).then_some(r.endpoint)
    }))
}

fn match_points(points: &[Vec<C>], ends: &[Option<Vec<C>>], tol: f64) -> Option<Vec<usize>> {
    let mut used = vec![false; points.len()];
    let mut perm = Vec::with_capacity(ends.len());
    for e in ends {
        let e = e.as_ref()?;
        let j = points
            .iter()
            .position(|p| dist_inf(p, e) <= tol * (1.0 + norm_inf(p)))?;
        if used[j] {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Indices into the input points, each group sorted, groups ordered by first index.
    pub groups: Vec<Vec<usize>>,
    pub loops: usize,
    pub discarded_loops: usize,
}

fn groups_of(parent: &mut [usize]) -> Vec<Vec<usize>> {
    let mut map: alloc::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..parent.len() {
        let r = root(parent, i);
        map.entry(r).or_default().push(i);
    }
    let mut g: Vec<Vec<usize>> = map.into_values().collect();
    g.sort();
    g
}

fn root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn monodromy_with<E: Executor, S>(
    points: &[Vec<C>],
    square: &PolySystem,
    slice: &Slice,
    seed: Seed,
    cfg: &WitnessConfig,
    exec: &E,
    mut done: S,
) -> Result<Partition>
where
    S: FnMut(&[Vec<usize>]) -> bool,
{
    let mut parent: Vec<usize> = (0..points.len()).collect();
    let mut part = Partition { groups: groups_of(&mut parent), loops: 0, discarded_loops: 0 };
    if points.len() <= 1 || done(&part.groups) {
        return Ok(part);
    }
    let mut rng_seed = seed;
    let mut idle = 0;
    let tcfg = cfg.move_cfg();
    while idle < cfg.max_loops {
        if part.discarded_loops > cfg.max_retries {
            return Err(Error::Inconclusive(String::from("monodromy loops keep losing paths")));
        }
        rng_seed = rng_seed.derive(0x6c6f);
        let mut rng = rng_seed.rng();
        let (g1, g2) = (unit_complex(&mut rng), unit_complex(&mut rng));
        let mid = slice.reseeded(rng_seed.derive(1));
        let out = move_slice(square, slice, &mid, g1, points, &tcfg, exec)?;
        let lost = out.iter().any(Option::is_none);
        let perm = if lost {
            None
        } else {
            let there: Vec<Vec<C>> = out.into_iter().map(Option::unwrap).collect();
            let back = move_slice(square, &mid, slice, g2, &there, &tcfg, exec)?;
            match_points(points, &back, cfg.solver.cluster_tol)
        };
        let Some(perm) = perm else {
            part.discarded_loops += 1;
            continue;
        };
        part.loops += 1;
        let before = part.groups.len();
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (root(&mut parent, i), root(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        part.groups = groups_of(&mut parent);
        if part.groups.len() < before {
            idle = 0;
            if part.groups.len() == 1 || done(&part.groups) {
                break;
            }
        } else {
            idle += 1;
        }
    }
    Ok(part)
}

/// Groups witness points connected by random monodromy loops; stops after
/// `cfg.max_loops` consecutive loops without a merge.
pub fn monodromy_partition<E: Executor>(
    points: &[Vec<C>],
    square: &PolySystem,
    slice: &Slice,
    seed: Seed,
    cfg: &WitnessConfig,
    exec: &E,
) -> Result<Partition> {
    monodromy_with(points, square, slice, seed, cfg, exec, |_| false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOutcome {
    Complete,
    Incomplete,
    Inconclusive,
}

/// Linear-trace test on a parallel pencil of slices through form 0.
pub fn trace_test<E: Executor>(group: &[Vec<C>], square: &PolySystem, slice: &Slice, cfg: &WitnessConfig, exec: &E) -> Result<TraceOutcome> {
    if group.is_empty() || slice.dim() == 0 {
        return Ok(TraceOutcome::Complete);
    }
    let tcfg = cfg.move_cfg();
    let one = C::new(1.0, 0.0);
    let delta = C::new(cfg.trace_delta, 0.0);
    let mut centroids = Vec::with_capacity(3);
    for d in [-delta, C::zero(), delta] {
        let pts: Vec<Vec<C>> = if d == C::zero() {
            group.to_vec()
        } else {
            let target = slice.shifted(0, d);
            let out = move_slice(square, slice, &target, one, group, &tcfg, exec)?;
            if out.iter().any(Option::is_none) {
                return Ok(TraceOutcome::Inconclusive);
            }
            out.into_iter().map(Option::unwrap).collect()
        };
        let mut c = vec![C::zero(); slice.vars.len()];
        for p in &pts {
            for (acc, x) in c.iter_mut().zip(slice.restrict(p)) {
                *acc += x;
            }
        }
        let m = pts.len() as f64;
        centroids.push(c.into_iter().map(|x| x / m).collect::<Vec<C>>());
    }
    let second: Vec<C> = (0..centroids[1].len())
        .map(|i| centroids[0][i] - centroids[1][i] * 2.0 + centroids[2][i])
        .collect();
    let scale = norm_inf(&centroids[1]).max(1.0);
    Ok(if norm_inf(&second) <= cfg.trace_tol * scale {
        TraceOutcome::Complete
    } else {
        TraceOutcome::Incomplete
    })
}

/// Whether the point with slice-variable coordinates `q` lies on the
/// component of `ws`. Lost paths with no hit give `Error::Inconclusive`.
pub fn membership<E: Executor>(q: &[C], ws: &WitnessSet, cfg: &WitnessConfig, exec: &E) -> Result<bool> {
    if q.len() != ws.slice.vars.len() {
        return Err(Error::DimensionMismatch { expected: ws.slice.vars.len(), found: q.len() });
    }
    if ws.dim == 0 {
        return Ok(ws.points.iter().any(|p| dist_inf(&ws.slice.restrict(p), q) <= cfg.solver.cluster_tol * (1.0 + norm_inf(q))));
    }
    let target = ws.slice.through(q);
    let mut rng = cfg.solver.seed.derive(0x6d62).rng();
    let gamma = unit_complex(&mut rng);
    let start = CompiledSystem::new(&stack(&ws.square, &ws.slice));
    let goal = CompiledSystem::new(&stack(&ws.square, &target));
    let pt = PathTracker::new(&goal, &start, gamma, cfg.solver.tracker.clone())?;
    let results = exec.map(ws.points.len(), |i| pt.track(&ws.points[i]));
    let tol = cfg.solver.cluster_tol * (1.0 + norm_inf(q)) * 10.0;
    let mut lost = false;
    for r in &results {
        match r.status {
            PathStatus::Success => {
                if dist_inf(&ws.slice.restrict(&r.endpoint), q) <= tol {
                    return Ok(true);
                }
            }
            PathStatus::Divergent => {}
            _ => lost = true,
        }
    }
    if lost {
        Err(Error::Inconclusive(String::from("membership paths lost")))
    } else {
        Ok(false)
    }
}

/// Moves a witness set to a fresh random slice.
pub fn reslice<E: Executor>(ws: &WitnessSet, seed: Seed, cfg: &WitnessConfig, exec: &E) -> Result<WitnessSet> {
    let fresh = ws.slice.reseeded(seed);
    let gamma = unit_complex(&mut seed.derive(0x67).rng());
    let out = move_slice(&ws.square, &ws.slice, &fresh, gamma, &ws.points, &cfg.move_cfg(), exec)?;
    if out.iter().any(Option::is_none) {
        return Err(Error::Inconclusive(String::from("reslicing lost a path")));
    }
    let points: Vec<Vec<C>> = out.into_iter().map(Option::unwrap).collect();
    Ok(WitnessSet { slice: fresh, degree: points.len(), points, ..ws.clone() })
}

/// A monodromy group that failed certification.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertifiedGroup {
    pub dim: usize,
    pub points: Vec<Vec<C>>,
    pub outcome: TraceOutcome,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Decomposition {
    pub components: Vec<WitnessSet>,
    pub uncertified: Vec<UncertifiedGroup>,
    /// Superset points removed as lying on higher-dimensional components, per swept dimension.
    pub absorbed: Vec<usize>,
    pub path_counts: PathCounts,
}

/// Per-dimension sweep from the largest requested dimension down.
pub fn numerical_decomposition<E: Executor>(sys: &PolySystem, dims: &[usize], cfg: &WitnessConfig, exec: &E) -> Result<Decomposition> {
    let mut order = dims.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    order.dedup();
    let mut dec = Decomposition::default();
    for &k in &order {
        let sup = witness_superset(sys, k, cfg, exec)?;
        let mut kept = Vec::new();
        let mut absorbed = 0;
        'points: for p in sup.points {
            let q = sup.slice.restrict(&p);
            for ws in dec.components.iter().filter(|w| w.dim > k) {
                if membership(&q, ws, cfg, exec)? {
                    absorbed += 1;
                    continue 'points;
                }
            }
            kept.push(p);
        }
        dec.absorbed.push(absorbed);
        dec.path_counts.success += sup.counts.success;
        dec.path_counts.divergent += sup.counts.divergent;
        dec.path_counts.failed += sup.counts.failed;
        let mut verdicts: alloc::collections::BTreeMap<Vec<usize>, TraceOutcome> = Default::default();
        let mut trace_err = None;
        let part = monodromy_with(&kept, &sup.square, &sup.slice, cfg.solver.seed.derive(k as u64), cfg, exec, |groups| {
            groups.iter().all(|g| {
                if let Some(v) = verdicts.get(g) {
                    return *v == TraceOutcome::Complete;
                }
                let pts: Vec<Vec<C>> = g.iter().map(|&i| kept[i].clone()).collect();
                let v = match trace_test(&pts, &sup.square, &sup.slice, cfg, exec) {
                    Ok(v) => v,
                    Err(e) => {
                        trace_err = Some(e);
                        TraceOutcome::Inconclusive
                    }
                };
                verdicts.insert(g.clone(), v);
                v == TraceOutcome::Complete
            })
        })?;
        if let Some(e) = trace_err {
            return Err(e);
        }
        for g in part.groups {
            let pts: Vec<Vec<C>> = g.iter().map(|&i| kept[i].clone()).collect();
            let verdict = match verdicts.get(&g) {
                Some(v) => *v,
                None => trace_test(&pts, &sup.square, &sup.slice, cfg, exec)?,
            };
            if verdict == TraceOutcome::Complete {
                dec.components.push(WitnessSet {
                    system: sys.clone(),
                    square: sup.square.clone(),
                    slice: sup.slice.clone(),
                    degree: pts.len(),
                    points: pts,
                    dim: k,
                });
            } else {
                dec.uncertified.push(UncertifiedGroup { dim: k, points: pts, outcome: verdict });
            }
        }
    }
    Ok(dec)
}
