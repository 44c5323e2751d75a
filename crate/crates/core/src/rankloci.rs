//! Hankel (catalecticant) matrices, rank-deficiency systems and the
//! Harris–Tu degree of symmetric determinantal loci.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::linalg::{condition_number, lstsq, mat_vec, norm_inf, numerical_rank, CMat};
use crate::poly::{monomials_of_degree, Monomial, PolySystem, Polynomial, C};
use crate::random::{unit_complex, Seed};
use crate::solver::PathCounts;
use crate::witness::{numerical_decomposition, WitnessConfig};

/// Row/column indexing of the `N x N` Hankel matrix of `n`-ary forms of degree `2d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HankelSpec {
    pub n: usize,
    pub d: u32,
    /// Exponent tuples of degree `d`, ascending graded-lexicographic.
    pub row_index: Vec<Vec<u32>>,
}

impl HankelSpec {
    pub fn new(n: usize, d: u32) -> Self {
        let row_index = monomials_of_degree(n, d).into_iter().map(|m| m.exponents().to_vec()).collect();
        HankelSpec { n, d, row_index }
    }

    pub fn size(&self) -> usize {
        self.row_index.len()
    }

    /// Exponent tuple labelling entry `(r, c)`.
    pub fn entry(&self, r: usize, c: usize) -> Vec<u32> {
        self.row_index[r].iter().zip(&self.row_index[c]).map(|(a, b)| a + b).collect()
    }

    /// Coefficient indices: all exponent tuples of degree `2d`, ascending.
    pub fn coefficient_index(&self) -> Vec<Vec<u32>> {
        monomials_of_degree(self.n, 2 * self.d).into_iter().map(|m| m.exponents().to_vec()).collect()
    }
}

/// Fills the Hankel matrix from a coefficient lookup.
pub fn build_hankel<T, F>(spec: &HankelSpec, mut a: F) -> Result<Vec<Vec<T>>>
where
    F: FnMut(&[u32]) -> Option<T>,
{
    let n = spec.size();
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            let e = spec.entry(r, c);
            match a(&e) {
                Some(v) => row.push(v),
                None => return Err(Error::MissingCoefficient(coefficient_label(&e))),
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `a_{i1 i2 ... in}` with exponents concatenated.
pub fn coefficient_label(e: &[u32]) -> String {
    let mut s = String::from("a_{");
    for x in e {
        s.push_str(&format!("{x}"));
    }
    s.push('}');
    s
}

/// Hankel matrix whose entries are the coefficient variables, numbered in
/// `spec.coefficient_index()` order.
pub fn hankel_matrix(spec: &HankelSpec) -> Vec<Vec<Polynomial>> {
    let index = spec.coefficient_index();
    let m = index.len();
    build_hankel(spec, |e| index.iter().position(|x| x.as_slice() == e).map(|i| Polynomial::var(m, i)))
        .expect("every entry has degree 2d")
}

/// Generic symmetric matrix in `n(n+1)/2` variables, upper triangle row by row.
pub fn symmetric_generic(n: usize) -> Vec<Vec<Polynomial>> {
    let m = n * (n + 1) / 2;
    let mut idx = vec![vec![0usize; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            idx[i][j] = k;
            idx[j][i] = k;
            k += 1;
        }
    }
    idx.iter().map(|row| row.iter().map(|&v| Polynomial::var(m, v)).collect()).collect()
}

/// `diag(x_1, ..., x_n)`.
pub fn diagonal(n: usize) -> Vec<Vec<Polynomial>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Polynomial::var(n, i) } else { Polynomial::zero(n) }).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarrisTu {
    pub degree: BigUint,
    pub codim: u64,
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Degree and codimension of the locus of symmetric `n x n` matrices of rank at most `r`.
pub fn harris_tu_degree(n: u32, r: u32) -> Result<HarrisTu> {
    if r < 1 || r >= n {
        return Err(Error::RankOutOfRange { n, r });
    }
    let (n, r) = (n as u64, r as u64);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..(n - r) {
        num *= binomial(n + j, n - r - j);
        den *= binomial(2 * j + 1, j);
    }
    let (q, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::NonExactDivision { value: format!("{num}"), divisor: den.to_i64().unwrap_or(i64::MAX) });
    }
    let k = n - r + 1;
    Ok(HarrisTu { degree: q, codim: k * (k - 1) / 2 })
}

/// `A(x) B [I; Xi]` with `x` first and the `r x (N - r)` entries of `Xi`
/// appended row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct RankSystem {
    pub matrix: Vec<Vec<Polynomial>>,
    pub b: Vec<Vec<C>>,
    pub r: usize,
    pub x_vars: usize,
    pub xi_vars: usize,
    pub system: PolySystem,
}

impl RankSystem {
    /// Slice variables for witness computations: the `x` block.
    pub fn slice_vars(&self) -> Vec<usize> {
        (0..self.x_vars).collect()
    }

    pub fn project(&self, point: &[C]) -> Vec<C> {
        point[..self.x_vars].to_vec()
    }

    fn cols(&self) -> usize {
        self.b.len()
    }

    /// Least-squares `Xi` for a given `x`; `None` when the residual exceeds `tol`.
    pub fn lift(&self, x: &[C], tol: f64) -> Option<Vec<C>> {
        let nn = self.cols();
        let k = nn - self.r;
        let a: Vec<Vec<C>> = self.matrix.iter().map(|row| row.iter().map(|p| p.eval(x).unwrap_or(C::zero())).collect()).collect();
        let rows = a.len();
        // A B = [P | Q] with P the first N - r columns, Q the last r; solve Q Xi = -P.
        let mut ab = vec![vec![C::zero(); nn]; rows];
        for i in 0..rows {
            for j in 0..nn {
                ab[i][j] = (0..nn).map(|l| a[i][l] * self.b[l][j]).sum();
            }
        }
        let q = CMat::from_fn(rows, self.r, |i, j| ab[i][k + j]);
        let mut xi = vec![C::zero(); self.r * k];
        for col in 0..k {
            let rhs: Vec<C> = (0..rows).map(|i| -ab[i][col]).collect();
            let sol = lstsq(&q, &rhs);
            let fit = mat_vec(&q, &sol);
            let err = fit.iter().zip(&rhs).fold(0.0f64, |e, (u, v)| e.max((u - v).norm()));
            if err > tol * (1.0 + norm_inf(&rhs)) {
                return None;
            }
            for (i, v) in sol.into_iter().enumerate() {
                xi[i * k + col] = v;
            }
        }
        let mut full = x.to_vec();
        full.extend(xi);
        Some(full)
    }
}

/// Random unit-modulus `N x N` matrix with condition number at most `1e6`.
pub fn random_well_conditioned(nn: usize, seed: Seed) -> Vec<Vec<C>> {
    let mut attempt = 0u64;
    loop {
        let mut rng = seed.derive(attempt).rng();
        let m = CMat::from_fn(nn, nn, |_, _| unit_complex(&mut rng));
        if condition_number(&m) <= 1e6 {
            return (0..nn).map(|i| (0..nn).map(|j| m[(i, j)]).collect()).collect();
        }
        attempt += 1;
    }
}

pub fn rank_deficiency_system(matrix: &[Vec<Polynomial>], r: usize, seed: Seed) -> Result<RankSystem> {
    let rows = matrix.len();
    let nn = matrix.first().map(Vec::len).unwrap_or(0);
    if nn == 0 || matrix.iter().any(|row| row.len() != nn) {
        return Err(Error::InvalidInput(String::from("ragged or empty matrix")));
    }
    if r >= nn {
        return Err(Error::RankOutOfRange { n: nn as u32, r: r as u32 });
    }
    let m = matrix[0][0].nvars();
    let k = nn - r;
    let total = m + r * k;
    let b = random_well_conditioned(nn, seed);
    let map: Vec<usize> = (0..m).collect();
    let lifted: Vec<Vec<Polynomial>> = matrix.iter().map(|row| row.iter().map(|p| p.embed(total, &map)).collect()).collect();
    // Column j of [I; Xi]: e_j on top, Xi[:, j] below.
    let xi = |i: usize, j: usize| Polynomial::var(total, m + i * k + j);
    let mut frame = vec![vec![Polynomial::zero(total); k]; nn];
    for l in 0..nn {
        for j in 0..k {
            let mut e = Polynomial::constant(total, b[l][j]);
            for i in 0..r {
                e = &e + &xi(i, j).scale(b[l][k + i]);
            }
            frame[l][j] = e;
        }
    }
    let mut eqs = Vec::with_capacity(rows * k);
    for row in &lifted {
        for j in 0..k {
            let mut acc = Polynomial::zero(total);
            for l in 0..nn {
                if !row[l].is_zero() {
                    acc = &acc + &(&row[l] * &frame[l][j]);
                }
            }
            eqs.push(acc);
        }
    }
    Ok(RankSystem {
        matrix: matrix.to_vec(),
        b,
        r,
        x_vars: m,
        xi_vars: r * k,
        system: PolySystem::new(total, eqs)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HankelCase {
    pub n: usize,
    pub d: u32,
    pub rank: u32,
}

impl HankelCase {
    pub const TERNARY_SEXTIC: HankelCase = HankelCase { n: 3, d: 3, rank: 7 };
    pub const QUATERNARY_QUARTIC: HankelCase = HankelCase { n: 4, d: 2, rank: 6 };

    pub fn spec(&self) -> HankelSpec {
        HankelSpec::new(self.n, self.d)
    }

    /// Projective dimension of the space of forms of degree `2d`.
    pub fn ambient_dim(&self) -> u64 {
        monomials_of_degree(self.n, 2 * self.d).len() as u64 - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusMode {
    Formula,
    Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub case: HankelCase,
    pub mode: LocusMode,
    /// Projective dimension.
    pub dim: u64,
    pub degree: u64,
    pub assumptions: Vec<String>,
    pub path_counts: Option<PathCounts>,
    /// Component degrees found in witness mode.
    pub components: Vec<usize>,
    /// Affine dimension of the lifted solution set at a witness point, from the Jacobian rank.
    pub observed_dim: Option<u64>,
}

const PROPER_SECTION: &str = "the Hankel linear space meets the symmetric rank locus properly";

/// Dimension and degree of the rank-bounded Hankel locus.
pub fn hankel_rank_locus<E: Executor>(case: HankelCase, mode: LocusMode, cfg: &WitnessConfig, exec: &E) -> Result<LocusReport> {
    let spec = case.spec();
    let nn = spec.size() as u32;
    let ht = harris_tu_degree(nn, case.rank)?;
    let dim = case.ambient_dim().checked_sub(ht.codim).ok_or_else(|| Error::InvalidInput(String::from("codimension exceeds ambient dimension")))?;
    let formula_degree = ht.degree.to_u64().ok_or_else(|| Error::InvalidInput(String::from("degree overflow")))?;
    match mode {
        LocusMode::Formula => Ok(LocusReport {
            case,
            mode,
            dim,
            degree: formula_degree,
            assumptions: vec![String::from(PROPER_SECTION)],
            path_counts: None,
            components: Vec::new(),
            observed_dim: None,
        }),
        LocusMode::Witness => {
            let rs = rank_deficiency_system(&hankel_matrix(&spec), case.rank as usize, cfg.solver.seed.derive(0x42))?;
            let affine_dim = (dim + 1) as usize;
            let square_eqs = rs.system.nvars() - affine_dim;
            let paths: u128 = 1u128.checked_shl(square_eqs as u32).unwrap_or(u128::MAX);
            if let Some(limit) = cfg.solver.paths_limit {
                if paths > limit as u128 {
                    return Err(Error::PathBudgetExceeded { requested: paths, limit });
                }
            }
            let wcfg = WitnessConfig { slice_vars: Some(rs.slice_vars()), ..cfg.clone() };
            let dec = numerical_decomposition(&rs.system, &[affine_dim], &wcfg, exec)?;
            if !dec.uncertified.is_empty() {
                return Err(Error::Inconclusive(format!("{} uncertified groups", dec.uncertified.len())));
            }
            let components: Vec<usize> = dec.components.iter().map(|w| w.degree).collect();
            let observed_dim = dec.components.first().and_then(|w| w.points.first()).map(|p| {
                let j = jacobian_at(&rs.system, p);
                (rs.system.nvars() - numerical_rank(&j, 1e-8)) as u64
            });
            Ok(LocusReport {
                case,
                mode,
                dim,
                degree: components.iter().sum::<usize>() as u64,
                assumptions: Vec::new(),
                path_counts: Some(dec.path_counts),
                components,
                observed_dim,
            })
        }
    }
}

pub(crate) fn jacobian_at(sys: &PolySystem, p: &[C]) -> CMat {
    let j = sys.jacobian();
    CMat::from_fn(sys.len(), sys.nvars(), |r, c| j[r][c].eval(p).unwrap_or(C::zero()))
}

/// Monomial of the coefficient variable for exponent tuple `e`.
pub fn coefficient_monomial(spec: &HankelSpec, e: &[u32]) -> Option<Monomial> {
    let index = spec.coefficient_index();
    index.iter().position(|x| x.as_slice() == e).map(|i| Monomial::var(index.len(), i))
}
