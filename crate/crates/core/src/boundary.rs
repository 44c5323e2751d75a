//! Incidence systems `fh - g^2 = p + s q` and `fg - hk = p + s q` for
//! the boundary of sums-of-squares cones, binary analogues, and an exact
//! elimination oracle for the binary case.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Monomial, PolySystem, Polynomial, C};
use crate::random::{gaussian_complex, Seed};
use crate::solver::{cluster_points, FactorSpec, SignedPermutation, SolutionSet, SymmetryAction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCase {
    Sextic3Squares,
    Quartic4Squares,
    BinaryAnalogue(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    Var(usize),
    Fixed(C),
}

#[derive(Clone, Debug, PartialEq)]
struct Form {
    name: char,
    monomials: Vec<Monomial>,
    slots: Vec<Slot>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySystem {
    pub case: BoundaryCase,
    pub p: Polynomial,
    pub q: Polynomial,
    pub system: PolySystem,
    /// Labels such as `g[210]`, with `s` last.
    pub unknowns: Vec<String>,
    pub s_index: usize,
    pub normalizations: Vec<(String, C)>,
    pub symmetry: Option<SymmetryAction>,
    /// Per-equation factor supports for linear-product starts.
    pub groupings: Vec<Vec<FactorSpec>>,
    /// Exact data when built from a rational binary pencil.
    pub pencil: Option<BinaryPencil>,
    forms: Vec<Form>,
    products: Vec<(usize, usize, f64)>,
}

fn label(name: char, m: &Monomial) -> String {
    let mut s = format!("{name}[");
    for e in m.exponents() {
        s.push_str(&format!("{e}"));
    }
    s.push(']');
    s
}

impl BoundarySystem {
    /// Number of equations of each degree, as `(linear, quadratic)`.
    pub fn census(&self) -> (usize, usize) {
        let d = self.system.degrees();
        (d.iter().filter(|&&x| x == 1).count(), d.iter().filter(|&&x| x == 2).count())
    }

    pub fn form_names(&self) -> Vec<char> {
        self.forms.iter().map(|f| f.name).collect()
    }

    /// Form `name` at the unknown vector `point`, as a polynomial in `x`.
    pub fn form(&self, name: char, point: &[C]) -> Option<Polynomial> {
        let f = self.forms.iter().find(|f| f.name == name)?;
        let n = f.monomials.first().map(Monomial::nvars).unwrap_or(0);
        let terms = f.monomials.iter().zip(&f.slots).map(|(m, s)| {
            let c = match *s {
                Slot::Var(i) => point[i],
                Slot::Fixed(c) => c,
            };
            (m.clone(), c)
        });
        Polynomial::from_terms(n, terms).ok()
    }

    /// Unknown vector for given forms and `s` (normalized coefficients are ignored).
    pub fn point_from_forms(&self, forms: &[(char, Polynomial)], s: C) -> Vec<C> {
        let mut x = vec![C::zero(); self.s_index + 1];
        for (name, poly) in forms {
            if let Some(f) = self.forms.iter().find(|f| f.name == *name) {
                for (m, slot) in f.monomials.iter().zip(&f.slots) {
                    if let Slot::Var(i) = slot {
                        x[*i] = poly.coefficient(m);
                    }
                }
            }
        }
        x[self.s_index] = s;
        x
    }

    /// Largest `|sum ± F_i F_j - p - s q|` over random points `x`, relative
    /// to the size of the terms.
    pub fn spot_check(&self, point: &[C], samples: usize, seed: Seed) -> f64 {
        let forms: Vec<Polynomial> = self.forms.iter().map(|f| self.form(f.name, point).expect("form")).collect();
        let s = point[self.s_index];
        let n = self.p.nvars();
        let mut rng = seed.rng();
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let x: Vec<C> = (0..n).map(|_| gaussian_complex(&mut rng)).collect();
            let vals: Vec<C> = forms.iter().map(|f| f.eval(&x).expect("arity")).collect();
            let pv = self.p.eval(&x).expect("arity");
            let qv = self.q.eval(&x).expect("arity");
            let mut acc = -pv - s * qv;
            let mut scale = pv.norm() + (s * qv).norm();
            for &(i, j, sign) in &self.products {
                let t = vals[i] * vals[j] * sign;
                acc += t;
                scale += t.norm();
            }
            worst = worst.max(acc.norm() / scale.max(1e-300));
        }
        worst
    }

    /// Distinct values of `s` among `solutions`, clustered at `tol`.
    pub fn distinct_s(&self, solutions: &SolutionSet, tol: f64) -> Vec<C> {
        let svals: Vec<Vec<C>> = solutions.points.iter().map(|p| vec![p[self.s_index]]).collect();
        cluster_points(&svals, tol).into_iter().map(|g| svals[g[0]][0]).collect()
    }
}

struct Builder {
    nx: usize,
    forms: Vec<Form>,
    nunknowns: usize,
    normalizations: Vec<(String, C)>,
}

impl Builder {
    fn new(nx: usize) -> Self {
        Builder { nx, forms: Vec::new(), nunknowns: 0, normalizations: Vec::new() }
    }

    fn form(&mut self, name: char, degree: u32, fixed: &[(Vec<u32>, C)]) {
        let monomials = monomials_of_degree(self.nx, degree);
        let slots = monomials
            .iter()
            .map(|m| match fixed.iter().find(|(e, _)| e.as_slice() == m.exponents()) {
                Some((_, c)) => {
                    self.normalizations.push((label(name, m), *c));
                    Slot::Fixed(*c)
                }
                None => {
                    self.nunknowns += 1;
                    Slot::Var(self.nunknowns - 1)
                }
            })
            .collect();
        self.forms.push(Form { name, monomials, slots });
    }

    fn finish(
        self,
        case: BoundaryCase,
        products: Vec<(usize, usize, f64)>,
        p: &Polynomial,
        q: &Polynomial,
        degree: u32,
    ) -> Result<BoundarySystem> {
        for poly in [p, q] {
            if poly.nvars() != self.nx {
                return Err(Error::DimensionMismatch { expected: self.nx, found: poly.nvars() });
            }
            if !poly.is_zero() && !poly.is_homogeneous() {
                return Err(Error::NonHomogeneous);
            }
            if !poly.is_zero() && poly.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: poly.degree() });
            }
        }
        let nv = self.nunknowns + 1;
        let s_index = self.nunknowns;
        let targets = monomials_of_degree(self.nx, degree);
        let lift = |slot: &Slot| match *slot {
            Slot::Var(i) => Polynomial::var(nv, i),
            Slot::Fixed(c) => Polynomial::constant(nv, c),
        };
        let mut eqs: Vec<Polynomial> = targets
            .iter()
            .map(|m| {
                &Polynomial::constant(nv, -p.coefficient(m)) - &Polynomial::var(nv, s_index).scale(q.coefficient(m))
            })
            .collect();
        for &(i, j, sign) in &products {
            let (a, b) = (&self.forms[i], &self.forms[j]);
            for (ma, sa) in a.monomials.iter().zip(&a.slots) {
                for (mb, sb) in b.monomials.iter().zip(&b.slots) {
                    let m = ma.mul(mb);
                    let k = targets.binary_search(&m).expect("product degree");
                    eqs[k] = &eqs[k] + &(&lift(sa) * &lift(sb)).scale(C::new(sign, 0.0));
                }
            }
        }
        let mut unknowns = vec![String::new(); nv];
        for f in &self.forms {
            for (m, s) in f.monomials.iter().zip(&f.slots) {
                if let Slot::Var(i) = s {
                    unknowns[*i] = label(f.name, m);
                }
            }
        }
        unknowns[s_index] = String::from("s");
        let eqs: Vec<Polynomial> = eqs.into_iter().map(|e| e.prune(0.0)).collect();
        let system = PolySystem::new(nv, eqs)?;
        Ok(BoundarySystem {
            case,
            p: p.clone(),
            q: q.clone(),
            system,
            unknowns,
            s_index,
            normalizations: self.normalizations,
            symmetry: None,
            groupings: Vec::new(),
            pencil: None,
            forms: self.forms,
            products,
        })
    }

    fn vars_of(&self, names: &[char]) -> Vec<usize> {
        self.forms
            .iter()
            .filter(|f| names.contains(&f.name))
            .flat_map(|f| f.slots.iter().filter_map(|s| if let Slot::Var(i) = s { Some(*i) } else { None }))
            .collect()
    }
}

fn dense_groupings(sys: &PolySystem) -> Vec<Vec<FactorSpec>> {
    let all: Vec<usize> = (0..sys.nvars()).collect();
    sys.degrees()
        .iter()
        .map(|&d| (0..d.max(1)).map(|_| FactorSpec { vars: all.clone() }).collect())
        .collect()
}

fn one() -> C {
    C::new(1.0, 0.0)
}

/// `fh - g^2 = p + s q` for ternary sextics with `f[300] = 1`, `f[210] = 0`,
/// `g[300] = 0`. Carries the symmetry `g -> -g` and a dense product grouping.
pub fn sextic_system(p: &Polynomial, q: &Polynomial) -> Result<BoundarySystem> {
    let mut b = Builder::new(3);
    b.form('f', 3, &[(vec![3, 0, 0], one()), (vec![2, 1, 0], C::zero())]);
    b.form('g', 3, &[(vec![3, 0, 0], C::zero())]);
    b.form('h', 3, &[]);
    let gvars = b.vars_of(&['g']);
    let mut sys = b.finish(BoundaryCase::Sextic3Squares, vec![(0, 2, 1.0), (1, 1, -1.0)], p, q, 6)?;
    sys.symmetry = Some(SymmetryAction::new(vec![SignedPermutation::negation(sys.system.nvars(), &gvars)]));
    sys.groupings = dense_groupings(&sys.system);
    Ok(sys)
}

/// `fg - hk = p + s q` for quaternary quartics. Six coefficient
/// normalizations remove the six-dimensional group preserving the
/// determinant of `[[f, h], [k, g]]`. Products are grouped as
/// `{f, h, s} x {g, k, s}`.
pub fn quartic_system(p: &Polynomial, q: &Polynomial) -> Result<BoundarySystem> {
    let mut b = Builder::new(4);
    let e = |v: [u32; 4]| v.to_vec();
    b.form('f', 2, &[(e([2, 0, 0, 0]), one())]);
    b.form('g', 2, &[]);
    b.form('h', 2, &[(e([2, 0, 0, 0]), C::zero()), (e([1, 1, 0, 0]), C::zero()), (e([1, 0, 1, 0]), one())]);
    b.form('k', 2, &[(e([2, 0, 0, 0]), C::zero()), (e([1, 1, 0, 0]), C::zero())]);
    let mut left = b.vars_of(&['f', 'h']);
    let mut right = b.vars_of(&['g', 'k']);
    let s = b.nunknowns;
    left.push(s);
    right.push(s);
    let mut sys = b.finish(BoundaryCase::Quartic4Squares, vec![(0, 1, 1.0), (2, 3, -1.0)], p, q, 4)?;
    let all: Vec<usize> = (0..sys.system.nvars()).collect();
    sys.groupings = sys
        .system
        .degrees()
        .iter()
        .map(|&d| {
            if d >= 2 {
                vec![FactorSpec { vars: left.clone() }, FactorSpec { vars: right.clone() }]
            } else {
                vec![FactorSpec { vars: all.clone() }]
            }
        })
        .collect();
    Ok(sys)
}

/// Exact data of a binary analogue: forms of degree `2k` in `(x0, x1)`,
/// coefficient `i` multiplying `x0^(deg - i) x1^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryPencil {
    pub k: u32,
    /// The fixed form `f`, with `f[0] = 1`.
    pub f: Vec<BigRational>,
    /// Fixed coefficient of `x0^(k-1) x1` in `g` (that of `x0^k` is zero).
    pub c: BigRational,
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let mut num: i64 = rng.gen_range(-9..=9);
    if num == 0 {
        num = 1;
    }
    let den: i64 = rng.gen_range(1..=7);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest rational with denominator `den`.
pub fn rationalize(x: f64, den: i64) -> BigRational {
    BigRational::new(BigInt::from((x * den as f64).round() as i64), BigInt::from(den))
}

fn to_c(x: &BigRational) -> C {
    C::new(x.to_f64().unwrap_or(f64::NAN), 0.0)
}

impl BinaryPencil {
    pub fn random(k: u32, seed: Seed) -> Self {
        let mut rng = seed.rng();
        let mut f: Vec<BigRational> = (0..=k).map(|_| small_rational(&mut rng)).collect();
        f[0] = BigRational::one();
        if k >= 1 {
            f[1] = BigRational::zero();
        }
        let c = small_rational(&mut rng);
        let p = (0..=2 * k).map(|_| small_rational(&mut rng)).collect();
        let q = (0..=2 * k).map(|_| small_rational(&mut rng)).collect();
        BinaryPencil { k, f, c, p, q }
    }

    /// Real-valued data rounded to denominator `den`.
    pub fn from_floats(k: u32, f: &[f64], c: f64, p: &[f64], q: &[f64], den: i64) -> Self {
        let r = |v: &[f64]| v.iter().map(|&x| rationalize(x, den)).collect::<Vec<_>>();
        BinaryPencil { k, f: r(f), c: rationalize(c, den), p: r(p), q: r(q) }
    }

    fn binary(&self, coeffs: &[BigRational]) -> Polynomial {
        let d = coeffs.len() as u32 - 1;
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| (Monomial::new(vec![d - i as u32, i as u32]), to_c(a)));
        Polynomial::from_terms(2, terms).expect("arity")
    }

    pub fn p_poly(&self) -> Polynomial {
        self.binary(&self.p)
    }

    pub fn q_poly(&self) -> Polynomial {
        self.binary(&self.q)
    }

    fn is_degenerate(&self) -> bool {
        // p proportional to q
        let Some(i) = self.q.iter().position(|x| !x.is_zero()) else { return true };
        let ratio = &self.p[i] / &self.q[i];
        self.p.iter().zip(&self.q).all(|(a, b)| *a == &ratio * b)
    }
}

/// `fh - g^2 = p + s q` for binary forms with `f` fixed, `g[k0] = 0` and
/// `g[k-1,1] = c`; unknowns are the remaining `g`, all of `h`, and `s`.
pub fn binary_analogue_system(pencil: &BinaryPencil) -> Result<BoundarySystem> {
    let k = pencil.k;
    if k == 0 || pencil.f.len() != k as usize + 1 || pencil.p.len() != 2 * k as usize + 1 || pencil.q.len() != 2 * k as usize + 1 {
        return Err(Error::DegreeMismatch { expected: 2 * k, found: pencil.p.len().saturating_sub(1) as u32 });
    }
    if pencil.c.is_zero() {
        return Err(Error::InvalidInput(String::from("g coefficient c must be nonzero")));
    }
    let mut b = Builder::new(2);
    let fixed_f: Vec<(Vec<u32>, C)> = pencil.f.iter().enumerate().map(|(i, a)| (vec![k - i as u32, i as u32], to_c(a))).collect();
    b.form('f', k, &fixed_f);
    b.form('g', k, &[(vec![k, 0], C::zero()), (vec![k - 1, 1], to_c(&pencil.c))]);
    b.form('h', k, &[]);
    let mut sys = b.finish(BoundaryCase::BinaryAnalogue(k), vec![(0, 2, 1.0), (1, 1, -1.0)], &pencil.p_poly(), &pencil.q_poly(), 2 * k)?;
    sys.groupings = dense_groupings(&sys.system);
    sys.pencil = Some(pencil.clone());
    Ok(sys)
}

/// Random complex homogeneous form for the ternary and quaternary cases.
pub fn random_pencil(nx: usize, degree: u32, seed: Seed) -> (Polynomial, Polynomial) {
    let mut rng = seed.rng();
    let mut draw = || {
        let terms: Vec<(Monomial, C)> = monomials_of_degree(nx, degree).into_iter().map(|m| (m, gaussian_complex(&mut rng))).collect();
        Polynomial::from_terms(nx, terms).expect("arity")
    };
    let p = draw();
    let q = draw();
    (p, q)
}

/// Exact elimination result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleDegree {
    /// Degree in `s` of the squarefree part of the eliminant.
    pub degree: usize,
    /// Degree of the eliminant itself.
    pub eliminant_degree: usize,
    pub degenerate: bool,
    /// Eliminant in `s`, lowest degree first (empty when degenerate).
    pub eliminant: Vec<BigRational>,
}

impl OracleDegree {
    /// Roots of the eliminant, by companion-free Durand-Kerner iteration.
    pub fn roots(&self) -> Vec<C> {
        let c: Vec<C> = self.eliminant.iter().map(to_c).collect();
        durand_kerner(&c)
    }
}

fn durand_kerner(c: &[C]) -> Vec<C> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<C> = c.iter().map(|v| v / lead).collect();
    let eval = |z: C| monic.iter().rev().fold(C::zero(), |acc, a| acc * z + a);
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, a| m.max(a.norm()));
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn constant(c: BigRational) -> Self {
        QPoly(vec![c]).trim()
    }

    fn x() -> Self {
        QPoly(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect()).trim()
    }

    fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect()).trim()
    }

    fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly(out).trim()
    }

    fn scale(&self, c: &BigRational) -> QPoly {
        QPoly(self.0.iter().map(|a| a * c).collect()).trim()
    }

    fn derivative(&self) -> QPoly {
        QPoly(self.0.iter().enumerate().skip(1).map(|(i, a)| a * BigRational::from_integer(BigInt::from(i))).collect()).trim()
    }

    fn rem(&self, d: &QPoly) -> QPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0[dd].clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let factor = &r.0[rd] / &lead;
            for i in 0..=dd {
                let v = &d.0[i] * &factor;
                r.0[rd - dd + i] -= v;
            }
            r = r.trim();
        }
        r
    }

    fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

/// Determinant by Gaussian elimination over the rationals.
fn det_q(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else { return BigRational::zero() };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &m[col][c] * &f;
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Resultant with formal degrees `da`, `db`.
fn resultant(a: &QPoly, da: usize, b: &QPoly, db: usize) -> BigRational {
    let n = da + db;
    if n == 0 {
        return BigRational::one();
    }
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for r in 0..db {
        for i in 0..=da {
            m[r][r + i] = a.coeff(da - i);
        }
    }
    for r in 0..da {
        for i in 0..=db {
            m[db + r][r + i] = b.coeff(db - i);
        }
    }
    det_q(m)
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly = QPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        poly = poly.mul(&QPoly(vec![-xs[i].clone(), BigRational::one()])).add(&QPoly::constant(dd[i].clone()));
    }
    poly
}

/// Eliminant value at a rational `s`: `g` and `h` are eliminated exactly,
/// leaving a resultant in `g[k-2,2]` when `k = 3`.
fn eliminant_at(pc: &BinaryPencil, s: &BigRational) -> BigRational {
    let k = pc.k as usize;
    let rhs: Vec<BigRational> = pc.p.iter().zip(&pc.q).map(|(a, b)| a + s * b).collect();
    // g as polynomials in the single free unknown u = g[2] (k = 3 only).
    let mut g: Vec<QPoly> = vec![QPoly(Vec::new()); k + 1];
    g[1] = QPoly::constant(pc.c.clone());
    if k == 3 {
        g[2] = QPoly::x();
    }
    let gsq = |g: &[QPoly], i: usize| -> QPoly {
        let mut acc = QPoly(Vec::new());
        for a in 0..=i.min(k) {
            let b = i - a;
            if b <= k {
                acc = acc.add(&g[a].mul(&g[b]));
            }
        }
        acc
    };
    let fcoef = |i: usize| -> BigRational { pc.f.get(i).cloned().unwrap_or_else(BigRational::zero) };
    // h from coefficients 0..=k (g[k] does not enter there since g[0] = 0).
    let mut h: Vec<QPoly> = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut acc = QPoly::constant(rhs[j].clone()).add(&gsq(&g, j));
        for i in 1..=j {
            acc = acc.sub(&h[j - i].scale(&fcoef(i)));
        }
        h.push(acc.scale(&(BigRational::one() / fcoef(0))));
    }
    let fh = |h: &[QPoly], i: usize| -> QPoly {
        let mut acc = QPoly(Vec::new());
        for a in 0..=k.min(i) {
            if i - a <= k {
                acc = acc.add(&h[i - a].scale(&fcoef(a)));
            }
        }
        acc
    };
    let eq = |g: &[QPoly], i: usize| fh(&h, i).sub(&QPoly::constant(rhs[i].clone())).sub(&gsq(g, i));
    if k == 1 {
        return eq(&g, 2).coeff(0);
    }
    // Coefficient k + 1 is linear in g[k] with coefficient -2c.
    let without = eq(&g, k + 1);
    let two_c = &pc.c * BigRational::from_integer(BigInt::from(2));
    g[k] = without.scale(&(BigRational::one() / two_c));
    match k {
        2 => eq(&g, 4).coeff(0),
        _ => {
            let a = eq(&g, 5);
            let b = eq(&g, 6);
            resultant(&a, 3, &b, 4)
        }
    }
}

/// Distinct-`s` count of a binary analogue by exact elimination
/// (evaluation and interpolation in `s` over the rationals). Supports `k <= 3`.
pub fn brute_force_degree(sys: &BoundarySystem) -> Result<OracleDegree> {
    let pc = sys
        .pencil
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(String::from("oracle needs exact binary pencil data")))?;
    if pc.k > 3 {
        return Err(Error::EliminationBudget(format!("k = {} exceeds the supported k <= 3", pc.k)));
    }
    if pc.is_degenerate() {
        return Ok(OracleDegree { degree: 0, eliminant_degree: 0, degenerate: true, eliminant: Vec::new() });
    }
    let mut bound = 8usize;
    loop {
        let xs: Vec<BigRational> = (0..=bound + 2).map(|i| BigRational::from_integer(BigInt::from(i as i64) - BigInt::from(3))).collect();
        let ys: Vec<BigRational> = xs.iter().map(|s| eliminant_at(pc, s)).collect();
        let poly = interpolate(&xs[..=bound], &ys[..=bound]);
        let ok = xs[bound + 1..].iter().zip(&ys[bound + 1..]).all(|(x, y)| {
            let v = poly.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
            v == *y
        });
        if ok {
            if poly.is_zero() {
                return Ok(OracleDegree { degree: 0, eliminant_degree: 0, degenerate: true, eliminant: Vec::new() });
            }
            let d = poly.degree().unwrap_or(0);
            let g = QPoly::gcd(&poly, &poly.derivative());
            let dg = g.degree().unwrap_or(0);
            return Ok(OracleDegree { degree: d - dg, eliminant_degree: d, degenerate: false, eliminant: poly.0 });
        }
        bound *= 2;
        if bound > 256 {
            return Err(Error::EliminationBudget(String::from("eliminant degree bound exceeded")));
        }
    }
}

#[allow(dead_code)]
fn abs_max(v: &[BigRational]) -> BigRational {
    v.iter().map(|x| x.abs()).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
}
