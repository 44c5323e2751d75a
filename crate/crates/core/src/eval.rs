//! Flattened evaluators used on the path-tracking hot path.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::{PolySystem, Polynomial, C};

/// A square-or-not system that can be evaluated with its Jacobian.
pub trait SystemEval: Sync {
    fn nvars(&self) -> usize;
    fn neqs(&self) -> usize;
    /// Writes values into `vals` and, if given, the row-major Jacobian into `jac`.
    fn evaluate(&self, x: &[C], vals: &mut [C], jac: Option<&mut [C]>, scratch: &mut Vec<C>);
}

#[derive(Clone, Debug)]
struct FlatPoly {
    coeffs: Vec<C>,
    starts: Vec<u32>,
    factors: Vec<(u32, u32)>,
}

impl FlatPoly {
    fn new(p: &Polynomial) -> Self {
        let mut coeffs = Vec::with_capacity(p.len());
        let mut starts = Vec::with_capacity(p.len() + 1);
        let mut factors = Vec::new();
        starts.push(0);
        for (m, c) in p.terms() {
            coeffs.push(*c);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    factors.push((v as u32, e));
                }
            }
            starts.push(factors.len() as u32);
        }
        FlatPoly { coeffs, starts, factors }
    }

    #[inline]
    fn eval(&self, pw: &[C], offs: &[usize]) -> C {
        let mut acc = C::zero();
        for (t, c) in self.coeffs.iter().enumerate() {
            let mut prod = *c;
            for &(v, e) in &self.factors[self.starts[t] as usize..self.starts[t + 1] as usize] {
                prod *= pw[offs[v as usize] + e as usize];
            }
            acc += prod;
        }
        acc
    }
}

/// Polynomial system compiled to flat term lists with a power table.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    nvars: usize,
    offs: Vec<usize>,
    max_exp: Vec<u32>,
    table_len: usize,
    eqs: Vec<FlatPoly>,
    jac: Vec<(usize, FlatPoly)>,
}

impl CompiledSystem {
    pub fn new(sys: &PolySystem) -> Self {
        let n = sys.nvars();
        let mut max_exp = vec![0u32; n];
        for p in sys.equations() {
            for (m, _) in p.terms() {
                for (v, &e) in m.exponents().iter().enumerate() {
                    max_exp[v] = max_exp[v].max(e);
                }
            }
        }
        let mut offs = Vec::with_capacity(n);
        let mut len = 0;
        for &e in &max_exp {
            offs.push(len);
            len += e as usize + 1;
        }
        let eqs = sys.equations().iter().map(FlatPoly::new).collect();
        let mut jac = Vec::new();
        for (i, p) in sys.equations().iter().enumerate() {
            for j in 0..n {
                let d = p.partial(j);
                if !d.is_zero() {
                    jac.push((i * n + j, FlatPoly::new(&d)));
                }
            }
        }
        CompiledSystem { nvars: n, offs, max_exp, table_len: len, eqs, jac }
    }

    fn fill_powers(&self, x: &[C], pw: &mut Vec<C>) {
        pw.clear();
        pw.resize(self.table_len, C::zero());
        for (v, &xv) in x.iter().enumerate().take(self.nvars) {
            let o = self.offs[v];
            let mut acc = C::new(1.0, 0.0);
            pw[o] = acc;
            for e in 1..=self.max_exp[v] as usize {
                acc *= xv;
                pw[o + e] = acc;
            }
        }
    }
}

impl SystemEval for CompiledSystem {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn neqs(&self) -> usize {
        self.eqs.len()
    }

    fn evaluate(&self, x: &[C], vals: &mut [C], jac: Option<&mut [C]>, scratch: &mut Vec<C>) {
        self.fill_powers(x, scratch);
        for (i, e) in self.eqs.iter().enumerate() {
            vals[i] = e.eval(scratch, &self.offs);
        }
        if let Some(jm) = jac {
            for v in jm.iter_mut() {
                *v = C::zero();
            }
            for (pos, p) in &self.jac {
                jm[*pos] = p.eval(scratch, &self.offs);
            }
        }
    }
}

/// Equations that are products of affine-linear forms, evaluated in
/// factored form. Form `k` of equation `i` is `coeffs . x + constant`.
#[derive(Clone, Debug)]
pub struct ProductSystem {
    nvars: usize,
    equations: Vec<Vec<LinearForm>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub coeffs: Vec<C>,
    pub constant: C,
}

impl LinearForm {
    pub fn eval(&self, x: &[C]) -> C {
        let mut acc = self.constant;
        for (a, v) in self.coeffs.iter().zip(x) {
            acc += a * v;
        }
        acc
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::linear(&self.coeffs, self.constant)
    }
}

impl ProductSystem {
    pub fn new(nvars: usize, equations: Vec<Vec<LinearForm>>) -> Self {
        ProductSystem { nvars, equations }
    }

    pub fn equations(&self) -> &[Vec<LinearForm>] {
        &self.equations
    }

    pub fn to_poly_system(&self) -> PolySystem {
        let eqs = self
            .equations
            .iter()
            .map(|fs| {
                fs.iter().fold(Polynomial::constant(self.nvars, C::new(1.0, 0.0)), |acc, f| {
                    &acc * &f.to_polynomial()
                })
            })
            .collect();
        PolySystem::new(self.nvars, eqs).expect("consistent arity")
    }
}

impl SystemEval for ProductSystem {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn neqs(&self) -> usize {
        self.equations.len()
    }

    fn evaluate(&self, x: &[C], vals: &mut [C], jac: Option<&mut [C]>, scratch: &mut Vec<C>) {
        let n = self.nvars;
        match jac {
            None => {
                for (i, fs) in self.equations.iter().enumerate() {
                    vals[i] = fs.iter().fold(C::new(1.0, 0.0), |acc, f| acc * f.eval(x));
                }
            }
            Some(jm) => {
                for (i, fs) in self.equations.iter().enumerate() {
                    scratch.clear();
                    scratch.extend(fs.iter().map(|f| f.eval(x)));
                    vals[i] = scratch.iter().fold(C::new(1.0, 0.0), |acc, v| acc * v);
                    let row = &mut jm[i * n..(i + 1) * n];
                    for v in row.iter_mut() {
                        *v = C::zero();
                    }
                    for (k, f) in fs.iter().enumerate() {
                        let mut others = C::new(1.0, 0.0);
                        for (kk, v) in scratch.iter().enumerate() {
                            if kk != k {
                                others *= v;
                            }
                        }
                        for (j, a) in f.coeffs.iter().enumerate() {
                            row[j] += a * others;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::random_poly;
    use crate::random::Seed;

    #[test]
    fn compiled_matches_direct() {
        let sys = PolySystem::new(
            3,
            (0..3).map(|i| random_poly(3, 3, false, Seed(i))).collect(),
        )
        .unwrap();
        let cs = CompiledSystem::new(&sys);
        let x = [C::new(0.3, -0.2), C::new(-1.1, 0.4), C::new(0.7, 0.9)];
        let mut vals = vec![C::zero(); 3];
        let mut jac = vec![C::zero(); 9];
        let mut scratch = Vec::new();
        cs.evaluate(&x, &mut vals, Some(&mut jac), &mut scratch);
        let direct = sys.eval(&x).unwrap();
        let j = sys.jacobian();
        for i in 0..3 {
            assert!((vals[i] - direct[i]).norm() < 1e-12);
            for k in 0..3 {
                assert!((jac[i * 3 + k] - j[i][k].eval(&x).unwrap()).norm() < 1e-12);
            }
        }
    }
}
