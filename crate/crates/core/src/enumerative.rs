//! Exact enumerative formulas: rational plane curve counts, Noether-Lefschetz
//! bookkeeping and discriminant degrees.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient as an exact integer (zero outside `0 <= k <= n`).
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of rational plane curves of degree `d` through `3d - 1` general
/// points, by the quadratic recursion starting from `N_1 = 1`.
pub fn kontsevich_manin(d: u32) -> BigInt {
    kontsevich_manin_table(d).pop().unwrap_or_else(BigInt::zero)
}

/// `[N_1, ..., N_d]`.
pub fn kontsevich_manin_table(d: u32) -> Vec<BigInt> {
    let mut n: Vec<BigInt> = Vec::with_capacity(d as usize);
    for dd in 1..=d as i64 {
        if dd == 1 {
            n.push(BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for d1 in 1..dd {
            let d2 = dd - d1;
            let w = BigInt::from(d1 * d1 * d2 * d2) * binomial(3 * dd - 4, 3 * d1 - 2)
                - BigInt::from(d1 * d1 * d1 * d2) * binomial(3 * dd - 4, 3 * d1 - 1);
            acc += &n[(d1 - 1) as usize] * &n[(d2 - 1) as usize] * w;
        }
        n.push(acc);
    }
    n
}

pub type Rational = Ratio<i64>;

/// Exponent `delta = (dot^2 - l (2 genus - 2)) / (2 l)` of the relevant
/// monomial in the theta series of a degree-`l` polarization.
pub fn delta_exponent(l: i64, genus: i64, dot: i64) -> Rational {
    let disc = dot * dot - l * (2 * genus - 2);
    Rational::new(disc, 2 * l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NlCase {
    Sextic,
    Quartic,
}

/// Leading terms of a theta series, stored verbatim, plus the number of
/// curve classes to divide out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NLData {
    pub l: i64,
    pub coefficients: Vec<(Rational, i64)>,
    pub divisor: i64,
    /// `(genus, degree)` of the curve class.
    pub curve: (i64, i64),
}

impl NLData {
    pub fn for_case(case: NlCase) -> Self {
        let r = Rational::new;
        match case {
            NlCase::Sextic => NLData {
                l: 2,
                coefficients: vec![
                    (r(0, 1), -1),
                    (r(1, 1), 150),
                    (r(5, 4), 1248),
                    (r(2, 1), 108600),
                    (r(9, 4), 332800),
                    (r(3, 1), 5113200),
                ],
                divisor: 4,
                curve: (1, 3),
            },
            NlCase::Quartic => NLData {
                l: 4,
                coefficients: vec![
                    (r(0, 1), -1),
                    (r(1, 1), 108),
                    (r(9, 8), 320),
                    (r(3, 2), 5016),
                    (r(2, 1), 76950),
                    (r(17, 8), 136512),
                ],
                divisor: 2,
                curve: (1, 4),
            },
        }
    }

    pub fn coefficient(&self, exponent: Rational) -> Option<i64> {
        self.coefficients.iter().find(|(e, _)| *e == exponent).map(|(_, v)| *v)
    }
}

/// Degree of the sums-of-squares boundary hypersurface read off the theta
/// coefficient at `delta`, divided exactly by the number of curve classes.
pub fn boundary_degree_from_nl(data: &NLData) -> Result<i64> {
    let delta = delta_exponent(data.l, data.curve.0, data.curve.1);
    let value = data
        .coefficient(delta)
        .ok_or_else(|| Error::MissingThetaCoefficient(format!("q^({})", delta)))?;
    if data.divisor == 0 || value % data.divisor != 0 {
        return Err(Error::NonExactDivision { value: value.to_string(), divisor: data.divisor });
    }
    Ok(value / data.divisor)
}

/// Degree `n (2d - 1)^(n - 1)` of the discriminant of forms of degree `2d`
/// in `n` variables.
pub fn discriminant_degree(n: u32, d: u32) -> BigUint {
    if n == 0 || d == 0 {
        return BigUint::zero();
    }
    BigUint::from(n) * BigUint::from(2 * d - 1).pow(n - 1)
}
