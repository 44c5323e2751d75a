//! Sparse multivariate polynomials with complex double coefficients.
//!
//! Terms are kept sorted in graded-lexicographic ascending order on exponent
//! tuples: total degree first, then the exponent tuple compared entry by entry
//! starting with the first variable. Evaluation and serialization follow this
//! order, so results are reproducible bit for bit.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::{unit_complex, Seed};

pub type C = Complex64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { exps })
    }

    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::new(1.0, 0.0);
        for (x, &e) in point.iter().zip(&self.exps) {
            if e > 0 {
                acc *= x.powu(e);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of exactly degree `d` in `nvars` variables, ascending.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0; nvars];
    rec(0, d, &mut cur, &mut out);
    out
}

/// All monomials of degree at most `d`, ascending.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, C)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), C::new(1.0, 0.0))
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(m, c)] }
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: m.nvars() });
            }
            *acc.entry(m).or_insert_with(C::zero) += c;
        }
        Ok(Self::from_map(nvars, acc))
    }

    /// Linear form `sum coeffs[i] x_i + constant`.
    pub fn linear(coeffs: &[C], constant: C) -> Self {
        let n = coeffs.len();
        let mut terms = Vec::with_capacity(n + 1);
        if !constant.is_zero() {
            terms.push((Monomial::one(n), constant));
        }
        for i in (0..n).rev() {
            if !coeffs[i].is_zero() {
                terms.push((Monomial::var(n, i), coeffs[i]));
            }
        }
        Polynomial { nvars: n, terms }
    }

    fn from_map(nvars: usize, map: BTreeMap<Monomial, C>) -> Self {
        Polynomial {
            nvars,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.last().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exps[i]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d)
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1,
            Err(_) => C::zero(),
        }
    }

    pub fn coefficient_of(&self, exps: &[u32]) -> C {
        self.coefficient(&Monomial::new(exps.to_vec()))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, (_, c)| m.max(c.norm()))
    }

    /// Divides by the largest coefficient modulus.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs_coeff();
        if m == 0.0 {
            return self.clone();
        }
        self.scale(C::new(1.0 / m, 0.0))
    }

    pub fn scale(&self, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Drops terms whose coefficient modulus is at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).cloned().collect(),
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|(_, c)| c.im.abs() <= tol)
    }

    /// Evaluates at `point`, summing terms in ascending term order.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(point);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] = e - 1;
            terms.push((Monomial::new(exps), c * e as f64));
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::constant(self.nvars, C::new(1.0, 0.0));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Homogenizes with a new variable inserted at `new_var_index`.
    pub fn homogenize(&self, new_var_index: usize) -> Self {
        let d = self.degree();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.exps.clone();
            exps.insert(new_var_index, d - m.degree());
            (Monomial::new(exps), *c)
        });
        Self::from_terms(self.nvars + 1, terms).expect("consistent arity")
    }

    /// Restricts to the affine chart `<patch, x> = 1`, eliminating the
    /// variable with the largest patch coefficient.
    pub fn dehomogenize(&self, patch: &[C]) -> Result<Self> {
        if patch.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: patch.len() });
        }
        let pivot = chart_pivot(patch)?;
        let m = self.nvars - 1;
        let images = chart_images(patch, pivot, m);
        self.substitute(&images)
    }

    /// Replaces variable `i` by `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        if let Some(bad) = images.iter().find(|p| p.nvars != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.nvars });
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::constant(m, C::new(1.0, 0.0)), p.clone()])
            .collect();
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut prod = Polynomial::constant(m, *c);
            for (v, &e) in mono.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap() * &images[v];
                    powers[v].push(next);
                }
                prod = &prod * &powers[v][e as usize];
            }
            for (tm, tc) in prod.terms {
                *acc.entry(tm).or_insert_with(C::zero) += tc;
            }
        }
        Ok(Self::from_map(m, acc))
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; nvars];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[map[i]] += e;
            }
            (Monomial::new(exps), *c)
        });
        Self::from_terms(nvars, terms).expect("consistent arity")
    }

    /// Coefficient-wise maximum modulus difference.
    pub fn max_coeff_diff(&self, other: &Polynomial) -> f64 {
        (self - other).max_abs_coeff()
    }
}

pub(crate) fn chart_pivot(patch: &[C]) -> Result<usize> {
    let mut pivot = 0;
    let mut best = 0.0;
    for (i, c) in patch.iter().enumerate() {
        if c.norm() > best {
            best = c.norm();
            pivot = i;
        }
    }
    if best == 0.0 {
        return Err(Error::ZeroPatch);
    }
    Ok(pivot)
}

/// Affine images of the ambient variables under the chart `<patch, x> = 1`
/// parametrized by the `m` non-pivot coordinates.
fn chart_images(patch: &[C], pivot: usize, m: usize) -> Vec<Polynomial> {
    let n = patch.len();
    let inv = C::new(1.0, 0.0) / patch[pivot];
    let mut images = Vec::with_capacity(n);
    let mut k = 0;
    for i in 0..n {
        if i == pivot {
            let mut coeffs = vec![C::zero(); m];
            let mut kk = 0;
            for (j, pj) in patch.iter().enumerate() {
                if j != pivot {
                    coeffs[kk] = -pj * inv;
                    kk += 1;
                }
            }
            images.push(Polynomial::linear(&coeffs, inv));
        } else {
            images.push(Polynomial::var(m, k));
            k += 1;
        }
    }
    images
}

/// Lifts an affine chart point back to the ambient coordinates.
pub fn chart_lift(patch: &[C], affine: &[C]) -> Result<Vec<C>> {
    let pivot = chart_pivot(patch)?;
    let mut out = Vec::with_capacity(patch.len());
    let mut k = 0;
    let mut s = C::zero();
    for (j, pj) in patch.iter().enumerate() {
        if j != pivot {
            s += pj * affine[k];
            k += 1;
        }
    }
    let xp = (C::new(1.0, 0.0) - s) / patch[pivot];
    k = 0;
    for j in 0..patch.len() {
        if j == pivot {
            out.push(xp);
        } else {
            out.push(affine[k]);
            k += 1;
        }
    }
    Ok(out)
}

/// Drops the pivot coordinate of a point already scaled onto the chart.
pub fn chart_project(patch: &[C], point: &[C]) -> Result<Vec<C>> {
    let pivot = chart_pivot(patch)?;
    let s: C = patch.iter().zip(point).map(|(a, b)| a * b).sum();
    if s.norm() == 0.0 {
        return Err(Error::InvalidInput("point lies on the chart's hyperplane at infinity".into()));
    }
    Ok(point
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != pivot)
        .map(|(_, x)| x / s)
        .collect())
}

/// Substitutes `x = A y` where `a` is row-major with `a.len()` rows.
pub fn compose_linear(poly: &Polynomial, a: &[Vec<C>]) -> Result<Polynomial> {
    let images: Vec<Polynomial> = a.iter().map(|row| Polynomial::linear(row, C::zero())).collect();
    poly.substitute(&images)
}

fn merge(a: &Polynomial, b: &Polynomial, sign: f64) -> Polynomial {
    assert_eq!(a.nvars, b.nvars, "polynomial arity mismatch");
    let mut terms = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let ord = if i == a.terms.len() {
            Ordering::Greater
        } else if j == b.terms.len() {
            Ordering::Less
        } else {
            a.terms[i].0.cmp(&b.terms[j].0)
        };
        match ord {
            Ordering::Less => {
                terms.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                terms.push((b.terms[j].0.clone(), b.terms[j].1 * sign));
                j += 1;
            }
            Ordering::Equal => {
                let c = a.terms[i].1 + b.terms[j].1 * sign;
                if !c.is_zero() {
                    terms.push((a.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Polynomial { nvars: a.nvars, terms }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        merge(self, rhs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        merge(self, rhs, -1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(C::zero) += ca * cb;
            }
        }
        Polynomial::from_map(self.nvars, acc)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(C::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// A list of polynomials over a common variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    nvars: usize,
    equations: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(nvars: usize, equations: Vec<Polynomial>) -> Result<Self> {
        if let Some(bad) = equations.iter().find(|p| p.nvars != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: bad.nvars });
        }
        Ok(PolySystem { nvars, equations })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.equations.len() == self.nvars
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.equations.iter().map(|p| p.degree()).collect()
    }

    pub fn bezout_number(&self) -> u128 {
        self.equations.iter().map(|p| p.degree() as u128).product()
    }

    pub fn push(&mut self, p: Polynomial) -> Result<()> {
        if p.nvars != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: p.nvars });
        }
        self.equations.push(p);
        Ok(())
    }

    /// Concatenates the equations of `other`.
    pub fn stacked(&self, other: &PolySystem) -> Result<PolySystem> {
        let mut out = self.clone();
        for p in &other.equations {
            out.push(p.clone())?;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[C]) -> Result<Vec<C>> {
        self.equations.iter().map(|p| p.eval(point)).collect()
    }

    /// Infinity norm of the residual vector.
    pub fn residual(&self, point: &[C]) -> Result<f64> {
        Ok(self.eval(point)?.iter().fold(0.0, |m, v| m.max(v.norm())))
    }

    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        jacobian(self)
    }

    /// Each equation divided by its largest coefficient modulus.
    pub fn normalized(&self) -> PolySystem {
        PolySystem {
            nvars: self.nvars,
            equations: self.equations.iter().map(|p| p.normalized()).collect(),
        }
    }

    pub fn map_equations<F: FnMut(&Polynomial) -> Polynomial>(&self, f: F) -> PolySystem {
        let equations: Vec<Polynomial> = self.equations.iter().map(f).collect();
        let nvars = equations.first().map(|p| p.nvars).unwrap_or(self.nvars);
        PolySystem { nvars, equations }
    }
}

/// Matrix of partial derivatives; entry `(i, j)` is `d eq_i / d x_j`.
pub fn jacobian(sys: &PolySystem) -> Vec<Vec<Polynomial>> {
    sys.equations.iter().map(|p| p.gradient()).collect()
}

/// Random polynomial with unit-modulus coefficients. Dense means every
/// monomial of degree at most `degree`; otherwise each monomial is kept with
/// probability 1/2, always keeping the constant and the pure powers.
pub fn random_poly(nvars: usize, degree: u32, dense: bool, seed: Seed) -> Polynomial {
    let mut rng = seed.rng();
    let mut terms = Vec::new();
    for m in monomials_up_to(nvars, degree) {
        let pure = m.degree() == 0 || (m.degree() == degree && m.exps.iter().any(|&e| e == degree));
        let keep = dense || pure || rng.gen::<bool>();
        let c = unit_complex(&mut rng);
        if keep {
            terms.push((m, c));
        }
    }
    Polynomial { nvars, terms }
}

/// Random homogeneous form with unit-modulus coefficients on every monomial.
pub fn random_form(nvars: usize, degree: u32, seed: Seed) -> Polynomial {
    let mut rng = seed.rng();
    let terms = monomials_of_degree(nvars, degree)
        .into_iter()
        .map(|m| (m, unit_complex(&mut rng)))
        .collect();
    Polynomial { nvars, terms }
}
