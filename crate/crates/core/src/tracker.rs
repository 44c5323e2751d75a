//! Predictor-corrector path tracking for `H(x,t) = gamma t G(x) + (1-t) F(x)`
//! from `t = 1` to `t = 0`, with a Cauchy endgame.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{CompiledSystem, SystemEval};
use crate::linalg::{lstsq, lu_solve_in_place, norm_inf, CMat};
use crate::poly::{PolySystem, C};

#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy {
    pub target: PolySystem,
    pub start: PolySystem,
    pub gamma: C,
}

impl Homotopy {
    pub fn new(target: PolySystem, start: PolySystem, gamma: C) -> Result<Self> {
        if target.nvars() != start.nvars() {
            return Err(Error::DimensionMismatch { expected: target.nvars(), found: start.nvars() });
        }
        if target.len() != start.len() {
            return Err(Error::DimensionMismatch { expected: target.len(), found: start.len() });
        }
        if gamma.is_zero() {
            return Err(Error::InvalidInput("gamma must be nonzero".into()));
        }
        Ok(Homotopy { target, start, gamma })
    }
}

fn default_corrector_iters() -> usize {
    3
}
fn default_success_run() -> usize {
    3
}
fn default_track_tol() -> f64 {
    1e-9
}
fn default_max_norm() -> f64 {
    1e8
}
fn default_loops() -> usize {
    16
}
fn default_levels() -> usize {
    30
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub step_init: f64,
    pub step_min: f64,
    pub step_max: f64,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    pub max_steps: usize,
    pub endgame_radius: f64,
    pub endgame_ratio: f64,
    pub endgame_samples: usize,
    #[serde(default = "default_corrector_iters")]
    pub corrector_max_iters: usize,
    #[serde(default = "default_success_run")]
    pub success_run: usize,
    #[serde(default = "default_track_tol")]
    pub track_tol: f64,
    #[serde(default = "default_max_norm")]
    pub max_norm: f64,
    #[serde(default = "default_loops")]
    pub endgame_max_loops: usize,
    #[serde(default = "default_levels")]
    pub endgame_max_levels: usize,
    #[serde(default = "default_true")]
    pub use_endgame: bool,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            step_init: 0.02,
            step_min: 1e-9,
            step_max: 0.1,
            newton_tol: 1e-10,
            newton_max_iters: 8,
            max_steps: 100_000,
            endgame_radius: 0.1,
            endgame_ratio: 0.5,
            endgame_samples: 8,
            corrector_max_iters: default_corrector_iters(),
            success_run: default_success_run(),
            track_tol: default_track_tol(),
            max_norm: default_max_norm(),
            endgame_max_loops: default_loops(),
            endgame_max_levels: default_levels(),
            use_endgame: true,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.step_min > 0.0
            && self.step_min <= self.step_init
            && self.step_init <= self.step_max
            && self.step_max < 1.0
            && self.newton_tol > 0.0
            && self.endgame_ratio > 0.0
            && self.endgame_ratio < 1.0
            && self.endgame_radius > 0.0
            && self.endgame_radius < 1.0
            && self.endgame_samples >= 3
            && self.corrector_max_iters >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("inconsistent tracker configuration".into()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathStatus {
    Success,
    Divergent,
    StepFailure,
    MaxSteps,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub status: PathStatus,
    /// Approximate root of the target; for divergent paths on a projective
    /// chart this is the chart point approaching the hyperplane at infinity.
    pub endpoint: Vec<C>,
    pub residual: f64,
    pub winding_estimate: usize,
    pub steps_taken: usize,
    pub low_confidence: bool,
}

/// Outcome of plain Newton iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    pub point: Vec<C>,
    pub residual: f64,
    pub converged: bool,
}

/// Newton's method on `sys` (Gauss-Newton when overdetermined). Converged
/// means the last update and the residual are both at most `tol`.
pub fn newton_correct(sys: &PolySystem, point: &[C], tol: f64, max_iters: usize) -> NewtonOutcome {
    let cs = CompiledSystem::new(sys);
    newton_eval(&cs, point, tol, max_iters)
}

pub(crate) fn newton_eval(sys: &dyn SystemEval, point: &[C], tol: f64, max_iters: usize) -> NewtonOutcome {
    let n = sys.nvars();
    let m = sys.neqs();
    let mut x = point.to_vec();
    let mut vals = vec![C::zero(); m];
    let mut jac = vec![C::zero(); m * n];
    let mut scratch = Vec::new();
    let mut last_update = f64::INFINITY;
    for _ in 0..max_iters {
        sys.evaluate(&x, &mut vals, Some(&mut jac), &mut scratch);
        let res = norm_inf(&vals);
        if res <= tol && last_update <= tol {
            return NewtonOutcome { point: x, residual: res, converged: true };
        }
        let delta = match solve_linearized(&mut jac, m, n, &vals) {
            Some(d) => d,
            None => return NewtonOutcome { point: x, residual: res, converged: false },
        };
        for (xi, di) in x.iter_mut().zip(&delta) {
            *xi += di;
        }
        last_update = norm_inf(&delta);
        if !last_update.is_finite() {
            break;
        }
    }
    sys.evaluate(&x, &mut vals, None, &mut scratch);
    let res = norm_inf(&vals);
    NewtonOutcome { point: x, residual: res, converged: res <= tol && last_update <= tol }
}

fn solve_linearized(jac: &mut [C], m: usize, n: usize, vals: &[C]) -> Option<Vec<C>> {
    if m == n {
        let mut rhs: Vec<C> = vals.iter().map(|v| -v).collect();
        if lu_solve_in_place(jac, n, &mut rhs) {
            Some(rhs)
        } else {
            None
        }
    } else {
        let a = CMat::from_fn(m, n, |i, j| jac[i * n + j]);
        let rhs: Vec<C> = vals.iter().map(|v| -v).collect();
        let d = lstsq(&a, &rhs);
        if d.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Some(d)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Segment {
    /// `t = t0 + s (t1 - t0)`, `s` in `[0, 1]`.
    Line { t0: C, t1: C },
    /// `t = t0 exp(-s)`, `s` in `[0, ln(t0/t1)]`, real positive endpoints.
    Radial { t0: f64, t1: f64 },
    /// `t = r exp(i (theta0 + TAU s))`, `s` in `[0, len]`.
    Arc { r: f64, theta0: f64, len: f64 },
}

impl Segment {
    fn length(&self) -> f64 {
        match *self {
            Segment::Line { .. } => 1.0,
            Segment::Radial { t0, t1 } => (t0 / t1).ln(),
            Segment::Arc { len, .. } => len,
        }
    }

    fn at(&self, s: f64) -> (C, C) {
        match *self {
            Segment::Line { t0, t1 } => (t0 + (t1 - t0) * s, t1 - t0),
            Segment::Radial { t0, .. } => {
                let t = C::new(t0 * (-s).exp(), 0.0);
                (t, -t)
            }
            Segment::Arc { r, theta0, .. } => {
                let th = theta0 + TAU * s;
                let t = C::new(r * th.cos(), r * th.sin());
                (t, C::new(0.0, TAU) * t)
            }
        }
    }
}

struct Workspace {
    fv: Vec<C>,
    gv: Vec<C>,
    fj: Vec<C>,
    gj: Vec<C>,
    hj: Vec<C>,
    rhs: Vec<C>,
    tmp: Vec<C>,
    k: [Vec<C>; 4],
    scratch: Vec<C>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = || vec![C::zero(); n];
        Workspace {
            fv: z(),
            gv: z(),
            fj: vec![C::zero(); n * n],
            gj: vec![C::zero(); n * n],
            hj: vec![C::zero(); n * n],
            rhs: z(),
            tmp: z(),
            k: [z(), z(), z(), z()],
            scratch: Vec::new(),
        }
    }
}

enum SegmentEnd {
    Done,
    StepFailure,
    MaxSteps,
    Diverged,
}

/// True when the chart point already sits near infinity and has been
/// approaching it at a steady positive rate: a corrector breakdown there
/// comes from the singular solution set at infinity, not from a finite root.
fn decaying(hist: &[(f64, f64)]) -> bool {
    if hist.len() < 3 {
        return false;
    }
    let last = hist[hist.len() - 1].1;
    let slopes_ok = hist[hist.len() - 3..].windows(2).all(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0) > 0.1);
    slopes_ok && last < (1e-3f64).ln()
}

/// Path tracker over precompiled start and target evaluators.
pub struct PathTracker<'a> {
    target: &'a dyn SystemEval,
    start: &'a dyn SystemEval,
    gamma: C,
    cfg: TrackerConfig,
    homogenizing: Option<usize>,
}

impl<'a> PathTracker<'a> {
    pub fn new(
        target: &'a dyn SystemEval,
        start: &'a dyn SystemEval,
        gamma: C,
        cfg: TrackerConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let n = target.nvars();
        if target.neqs() != n || start.neqs() != n || start.nvars() != n {
            return Err(Error::NotSquare { equations: target.neqs(), variables: n });
        }
        Ok(PathTracker { target, start, gamma, cfg, homogenizing: None })
    }

    /// Declares coordinate `index` as the homogenizing variable of a
    /// projective chart; affine blow-up is measured relative to it.
    pub fn with_homogenizing_var(mut self, index: usize) -> Self {
        self.homogenizing = Some(index);
        self
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.cfg
    }

    fn n(&self) -> usize {
        self.target.nvars()
    }

    fn affine_norm(&self, x: &[C]) -> f64 {
        match self.homogenizing {
            None => norm_inf(x),
            Some(h) => {
                let d = x[h].norm();
                let m = x
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != h)
                    .fold(0.0f64, |m, (_, v)| m.max(v.norm()));
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    m / d
                }
            }
        }
    }

    /// Evaluates H and H_x at (x, t); also leaves H_t = gamma G - F in `ws.tmp`.
    fn eval_h(&self, x: &[C], t: C, ws: &mut Workspace, want_ht: bool) {
        let n = self.n();
        self.target.evaluate(x, &mut ws.fv, Some(&mut ws.fj), &mut ws.scratch);
        self.start.evaluate(x, &mut ws.gv, Some(&mut ws.gj), &mut ws.scratch);
        let a = self.gamma * t;
        let b = C::new(1.0, 0.0) - t;
        for i in 0..n * n {
            ws.hj[i] = a * ws.gj[i] + b * ws.fj[i];
        }
        for i in 0..n {
            ws.rhs[i] = a * ws.gv[i] + b * ws.fv[i];
            if want_ht {
                ws.tmp[i] = self.gamma * ws.gv[i] - ws.fv[i];
            }
        }
    }

    /// dx/ds at (x, s) along `seg`, written to `out`.
    fn velocity(&self, x: &[C], seg: &Segment, s: f64, ws: &mut Workspace, out_idx: usize) -> bool {
        let (t, dt) = seg.at(s);
        self.eval_h(x, t, ws, true);
        let n = self.n();
        let mut v = core::mem::take(&mut ws.k[out_idx]);
        for i in 0..n {
            v[i] = -ws.tmp[i] * dt;
        }
        let ok = lu_solve_in_place(&mut ws.hj, n, &mut v);
        ws.k[out_idx] = v;
        ok
    }

    fn rk4(&self, x: &[C], seg: &Segment, s: f64, h: f64, ws: &mut Workspace, out: &mut [C]) -> bool {
        let n = self.n();
        if !self.velocity(x, seg, s, ws, 0) {
            return false;
        }
        let mut y = vec![C::zero(); n];
        for i in 0..n {
            y[i] = x[i] + ws.k[0][i] * (h / 2.0);
        }
        if !self.velocity(&y, seg, s + h / 2.0, ws, 1) {
            return false;
        }
        for i in 0..n {
            y[i] = x[i] + ws.k[1][i] * (h / 2.0);
        }
        if !self.velocity(&y, seg, s + h / 2.0, ws, 2) {
            return false;
        }
        for i in 0..n {
            y[i] = x[i] + ws.k[2][i] * h;
        }
        if !self.velocity(&y, seg, s + h, ws, 3) {
            return false;
        }
        for i in 0..n {
            out[i] = x[i]
                + (ws.k[0][i] + ws.k[1][i] * 2.0 + ws.k[2][i] * 2.0 + ws.k[3][i]) * (h / 6.0);
        }
        out.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Newton at fixed t; requires contraction and a small final update.
    fn correct(&self, x: &mut [C], t: C, tol: f64, iters: usize, ws: &mut Workspace) -> bool {
        let n = self.n();
        let mut prev = f64::INFINITY;
        for _ in 0..iters {
            self.eval_h(x, t, ws, false);
            let mut d: Vec<C> = ws.rhs.iter().map(|v| -v).collect();
            if !lu_solve_in_place(&mut ws.hj, n, &mut d) {
                return false;
            }
            for i in 0..n {
                x[i] += d[i];
            }
            let nd = norm_inf(&d);
            if !nd.is_finite() {
                return false;
            }
            if nd <= tol * (1.0 + norm_inf(x)) {
                return true;
            }
            if nd > 0.5 * prev {
                return false;
            }
            prev = nd;
        }
        false
    }

    fn track_segment(&self, x: &mut Vec<C>, seg: Segment, steps: &mut usize, ws: &mut Workspace) -> SegmentEnd {
        let mut h = self.cfg.step_init;
        self.track_segment_from(x, seg, steps, ws, &mut h)
    }

    /// Like `track_segment`, starting from step `h` and leaving the last
    /// accepted step size in it.
    fn track_segment_from(&self, x: &mut Vec<C>, seg: Segment, steps: &mut usize, ws: &mut Workspace, step: &mut f64) -> SegmentEnd {
        let len = seg.length();
        let cfg = &self.cfg;
        let mut s = 0.0;
        let mut h = step.clamp(cfg.step_min, cfg.step_max);
        let mut run = 0;
        let mut pred = vec![C::zero(); self.n()];
        while s < len {
            if *steps >= cfg.max_steps {
                return SegmentEnd::MaxSteps;
            }
            *steps += 1;
            let hh = h.min(len - s);
            *step = h;
            let ok = self.rk4(x, &seg, s, hh, ws, &mut pred) && {
                let (t1, _) = seg.at(s + hh);
                self.correct(&mut pred, t1, cfg.track_tol, cfg.corrector_max_iters, ws)
            };
            if ok {
                x.copy_from_slice(&pred);
                s += hh;
                run += 1;
                if run >= cfg.success_run {
                    h = (2.0 * h).min(cfg.step_max);
                    run = 0;
                }
                if norm_inf(x) > 1e12 || (self.homogenizing.is_none() && norm_inf(x) > cfg.max_norm) {
                    return SegmentEnd::Diverged;
                }
            } else {
                h *= 0.5;
                run = 0;
                if h < cfg.step_min {
                    return SegmentEnd::StepFailure;
                }
            }
        }
        SegmentEnd::Done
    }

    /// Tracks one start point from t = 1 to t = 0.
    pub fn track(&self, start_point: &[C]) -> PathResult {
        let n = self.n();
        let mut ws = Workspace::new(n);
        let mut x = start_point.to_vec();
        let mut steps = 0;
        let stop = if self.cfg.use_endgame { self.cfg.endgame_radius } else { 0.0 };
        let seg = Segment::Line { t0: C::new(1.0, 0.0), t1: C::new(stop, 0.0) };
        match self.track_segment(&mut x, seg, &mut steps, &mut ws) {
            SegmentEnd::Done => {}
            end => return self.failed(end, x, steps),
        }
        if !self.cfg.use_endgame {
            return self.finish(x, 1, steps, false, &mut ws);
        }
        self.endgame_from(x, self.cfg.endgame_radius, steps, &mut ws)
    }

    /// Cauchy endgame from a point on the path at real `t = radius`.
    pub fn endgame(&self, point_at_radius: &[C], radius: f64) -> PathResult {
        let mut ws = Workspace::new(self.n());
        self.endgame_from(point_at_radius.to_vec(), radius, 0, &mut ws)
    }

    fn failed(&self, end: SegmentEnd, x: Vec<C>, steps: usize) -> PathResult {
        let status = match end {
            SegmentEnd::MaxSteps => PathStatus::MaxSteps,
            SegmentEnd::Diverged => PathStatus::Divergent,
            _ => PathStatus::StepFailure,
        };
        PathResult {
            status,
            endpoint: x,
            residual: f64::INFINITY,
            winding_estimate: 0,
            steps_taken: steps,
            low_confidence: false,
        }
    }

    fn endgame_from(&self, mut x: Vec<C>, radius: f64, mut steps: usize, ws: &mut Workspace) -> PathResult {
        let cfg = &self.cfg;
        let m = cfg.endgame_samples;
        let mut r = radius;
        let mut prev: Option<Vec<C>> = None;
        let mut winding = 1;
        let mut h = cfg.step_init;
        if let Some(hv) = self.homogenizing {
            match self.classify_at_infinity(&mut x, &mut r, hv, &mut steps, ws, &mut h) {
                Ok(true) => return self.divergent(x, 0, steps),
                Ok(false) => {}
                Err(end) => return self.failed(end, x, steps),
            }
        }
        for _level in 0..cfg.endgame_max_levels {
            let x0 = x.clone();
            let mut sum = vec![C::zero(); x.len()];
            let mut count = 0usize;
            let mut closed = false;
            let mut loops = 0;
            let close_tol = 1e-6 * (1.0 + norm_inf(&x0));
            while loops < cfg.endgame_max_loops {
                for k in 0..m {
                    for (a, b) in sum.iter_mut().zip(&x) {
                        *a += b;
                    }
                    count += 1;
                    let seg = Segment::Arc {
                        r,
                        theta0: TAU * (k as f64) / (m as f64),
                        len: 1.0 / (m as f64),
                    };
                    match self.track_segment_from(&mut x, seg, &mut steps, ws, &mut h) {
                        SegmentEnd::Done => {}
                        end => return self.loop_failed(end, x, steps),
                    }
                }
                loops += 1;
                let gap = x.iter().zip(&x0).fold(0.0f64, |a, (p, q)| a.max((p - q).norm()));
                if gap <= close_tol {
                    closed = true;
                    // Snap back to the start sample to avoid drift across levels.
                    x.copy_from_slice(&x0);
                    break;
                }
            }
            if closed {
                let est: Vec<C> = sum.iter().map(|v| v / count as f64).collect();
                if self.affine_norm(&est) > cfg.max_norm {
                    return self.divergent(est, loops, steps);
                }
                if let Some(p) = &prev {
                    let diff = est.iter().zip(p).fold(0.0f64, |a, (u, v)| a.max((u - v).norm()));
                    if loops == winding && diff <= 10.0 * cfg.newton_tol {
                        // Agreeing estimates can still average distinct roots when a
                        // branch point lies inside both circles; demand a true root.
                        let done = self.finish(est.clone(), winding, steps, false, ws);
                        if done.status == PathStatus::Success {
                            return done;
                        }
                    }
                }
                winding = loops;
                prev = Some(est);
            } else {
                // The loop wandered onto other sheets: resume from its start and shrink.
                x.copy_from_slice(&x0);
                prev = None;
            }
            let next = r * cfg.endgame_ratio;
            match self.track_segment_from(&mut x, Segment::Radial { t0: r, t1: next }, &mut steps, ws, &mut h) {
                SegmentEnd::Done => {}
                end => return self.failed(end, x, steps),
            }
            r = next;
        }
        match prev {
            Some(est) => self.finish(est, winding, steps, true, ws),
            None => self.plain_extrapolation(x, r, winding, steps, ws),
        }
    }

    /// Radial descent watching the valuation of the homogenizing coordinate:
    /// `|x_h| / max|x_i| ~ t^v`. A stable `v > 0` means the path ends at
    /// infinity; a stable `v ~ 0` hands over to the Cauchy loops.
    fn classify_at_infinity(
        &self,
        x: &mut Vec<C>,
        r: &mut f64,
        hv: usize,
        steps: &mut usize,
        ws: &mut Workspace,
        h: &mut f64,
    ) -> core::result::Result<bool, SegmentEnd> {
        let cfg = &self.cfg;
        let rel = |x: &[C]| {
            let m = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            (x[hv].norm() / m).max(1e-300).ln()
        };
        let mut hist: Vec<(f64, f64)> = vec![(r.ln(), rel(x))];
        for _ in 0..cfg.endgame_max_levels {
            if hist.len() >= 6 {
                let slopes: Vec<f64> =
                    hist[hist.len() - 6..].windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
                let lo = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                // Pre-asymptotic transients of large finite roots can mimic decay,
                // so only decide on a small radius and a tight spread.
                if lo > 0.1 && hi - lo < 0.01 && *r <= 1e-3 {
                    return Ok(true);
                }
                if hi.abs() < 0.02 && lo.abs() < 0.02 {
                    return Ok(false);
                }
            }
            let next = *r * cfg.endgame_ratio;
            match self.track_segment_from(x, Segment::Radial { t0: *r, t1: next }, steps, ws, h) {
                SegmentEnd::Done => {}
                SegmentEnd::StepFailure if decaying(&hist) => return Ok(true),
                end => return Err(end),
            }
            *r = next;
            hist.push((r.ln(), rel(x)));
        }
        Ok(false)
    }

    fn plain_extrapolation(&self, mut x: Vec<C>, r: f64, winding: usize, mut steps: usize, ws: &mut Workspace) -> PathResult {
        let floor = 1e-14;
        if r > floor {
            let _ = self.track_segment(&mut x, Segment::Radial { t0: r, t1: floor }, &mut steps, ws);
        }
        if self.affine_norm(&x) > self.cfg.max_norm {
            return self.divergent(x, winding, steps);
        }
        self.finish(x, winding, steps, true, ws)
    }

    /// A Cauchy loop that breaks down far out in the chart is read the same
    /// way `finish` reads a large endpoint.
    fn loop_failed(&self, end: SegmentEnd, x: Vec<C>, steps: usize) -> PathResult {
        if matches!(end, SegmentEnd::StepFailure) && self.affine_norm(&x) > self.cfg.max_norm.sqrt() {
            return self.divergent(x, 0, steps);
        }
        self.failed(end, x, steps)
    }

    fn divergent(&self, x: Vec<C>, winding: usize, steps: usize) -> PathResult {
        PathResult {
            status: PathStatus::Divergent,
            endpoint: x,
            residual: f64::INFINITY,
            winding_estimate: winding,
            steps_taken: steps,
            low_confidence: false,
        }
    }

    /// Final Newton polish on the target; keeps the best iterate.
    fn finish(&self, est: Vec<C>, winding: usize, steps: usize, low: bool, ws: &mut Workspace) -> PathResult {
        let cfg = &self.cfg;
        let mut vals = vec![C::zero(); self.n()];
        self.target.evaluate(&est, &mut vals, None, &mut ws.scratch);
        let mut best = (norm_inf(&vals), est.clone());
        let polished = newton_eval(self.target, &est, cfg.newton_tol, cfg.newton_max_iters);
        if polished.residual < best.0 && polished.point.iter().zip(&est).all(|(a, b)| (a - b).norm() <= 1e-3 * (1.0 + b.norm())) {
            best = (polished.residual, polished.point);
        }
        let (residual, endpoint) = best;
        let status = if residual <= cfg.newton_tol || self.newton_step_negligible(&endpoint, ws) {
            PathStatus::Success
        } else if self.affine_norm(&endpoint) > cfg.max_norm.sqrt() {
            PathStatus::Divergent
        } else {
            PathStatus::StepFailure
        };
        PathResult { status, endpoint, residual, winding_estimate: winding, steps_taken: steps, low_confidence: low }
    }

    /// Absolute residuals of high-degree equations at a large chart point sit
    /// far above `newton_tol` even at round-off level; the Newton update does
    /// not depend on how the equations are scaled.
    fn newton_step_negligible(&self, x: &[C], ws: &mut Workspace) -> bool {
        let (m, n) = (self.target.neqs(), self.target.nvars());
        let mut vals = vec![C::zero(); m];
        let mut jac = vec![C::zero(); m * n];
        self.target.evaluate(x, &mut vals, Some(&mut jac), &mut ws.scratch);
        match solve_linearized(&mut jac, m, n, &vals) {
            Some(d) => norm_inf(&d) <= self.cfg.newton_tol * (1.0 + norm_inf(x)),
            None => false,
        }
    }
}

/// Tracks a single path of `h` from `start_point`.
pub fn track_path(h: &Homotopy, start_point: &[C], cfg: &TrackerConfig) -> Result<PathResult> {
    let f = CompiledSystem::new(&h.target);
    let g = CompiledSystem::new(&h.start);
    if start_point.len() != h.target.nvars() {
        return Err(Error::DimensionMismatch { expected: h.target.nvars(), found: start_point.len() });
    }
    let tracker = PathTracker::new(&f, &g, h.gamma, cfg.clone())?;
    Ok(tracker.track(start_point))
}

/// Runs the Cauchy endgame from a point on the path at `t = cfg.endgame_radius`.
/// Returns the endpoint estimate and the winding number.
pub fn cauchy_endgame(h: &Homotopy, point_at_radius: &[C], cfg: &TrackerConfig) -> Result<(PathResult, usize)> {
    let f = CompiledSystem::new(&h.target);
    let g = CompiledSystem::new(&h.start);
    let tracker = PathTracker::new(&f, &g, h.gamma, cfg.clone())?;
    let res = tracker.endgame(point_at_radius, cfg.endgame_radius);
    let w = res.winding_estimate;
    Ok((res, w))
}
