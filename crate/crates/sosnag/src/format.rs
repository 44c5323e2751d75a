//! JSON shapes for polynomials, systems, solutions, witness sets and
//! determinantal representations.

use std::collections::BTreeMap;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use sosnag_core::eval::LinearForm;
use sosnag_core::solver::{PathCounts, SolutionSet};
use sosnag_core::symmetroid::DetRep;
use sosnag_core::witness::{Slice, WitnessSet};
use sosnag_core::{Monomial, PolySystem, Polynomial, Seed};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C> for ComplexJson {
    fn from(c: C) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

impl From<ComplexJson> for C {
    fn from(c: ComplexJson) -> Self {
        C::new(c.re, c.im)
    }
}

pub fn point_json(p: &[C]) -> Vec<ComplexJson> {
    p.iter().map(|&c| c.into()).collect()
}

pub fn point_from_json(p: &[ComplexJson]) -> Vec<C> {
    p.iter().map(|&c| c.into()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    /// Terms are written in the canonical monomial order.
    pub fn from_poly(p: &Polynomial) -> Self {
        let mut terms: Vec<(Monomial, C)> = p.terms().to_vec();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        PolyJson {
            nvars: p.nvars(),
            terms: terms.into_iter().map(|(m, c)| TermJson { exp: m.exponents().to_vec(), re: c.re, im: c.im }).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Polynomial, CliError> {
        for t in &self.terms {
            if t.exp.len() != self.nvars {
                return Err(CliError::Input(format!(
                    "term exponent {:?} has length {}, expected {}",
                    t.exp,
                    t.exp.len(),
                    self.nvars
                )));
            }
        }
        let terms = self.terms.iter().map(|t| (Monomial::new(t.exp.clone()), C::new(t.re, t.im)));
        Ok(Polynomial::from_terms(self.nvars, terms)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemJson {
    pub nvars: usize,
    pub equations: Vec<PolyJson>,
}

impl SystemJson {
    pub fn from_system(sys: &PolySystem) -> Self {
        SystemJson { nvars: sys.nvars(), equations: sys.equations().iter().map(PolyJson::from_poly).collect() }
    }

    pub fn to_system(&self) -> Result<PolySystem, CliError> {
        let eqs = self.equations.iter().map(PolyJson::to_poly).collect::<Result<Vec<_>, _>>()?;
        Ok(PolySystem::new(self.nvars, eqs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub points: Vec<Vec<ComplexJson>>,
    pub residuals: Vec<f64>,
    pub counts: PathCounts,
}

impl SolutionJson {
    pub fn from_set(s: &SolutionSet) -> Self {
        SolutionJson { points: s.points.iter().map(|p| point_json(p)).collect(), residuals: s.residuals.clone(), counts: s.counts }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFormJson {
    pub coeffs: Vec<ComplexJson>,
    pub constant: ComplexJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceJson {
    pub seed: u64,
    pub vars: Vec<usize>,
    pub forms: Vec<LinearFormJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSetJson {
    pub system: SystemJson,
    pub square: SystemJson,
    pub slice: SliceJson,
    pub points: Vec<Vec<ComplexJson>>,
    pub dim: usize,
    pub degree: usize,
}

impl WitnessSetJson {
    pub fn from_set(w: &WitnessSet) -> Self {
        WitnessSetJson {
            system: SystemJson::from_system(&w.system),
            square: SystemJson::from_system(&w.square),
            slice: SliceJson {
                seed: w.slice.seed.0,
                vars: w.slice.vars.clone(),
                forms: w
                    .slice
                    .forms
                    .iter()
                    .map(|f| LinearFormJson { coeffs: point_json(&f.coeffs), constant: f.constant.into() })
                    .collect(),
            },
            points: w.points.iter().map(|p| point_json(p)).collect(),
            dim: w.dim,
            degree: w.degree,
        }
    }

    pub fn to_set(&self) -> Result<WitnessSet, CliError> {
        let slice = Slice {
            forms: self
                .slice
                .forms
                .iter()
                .map(|f| LinearForm { coeffs: point_from_json(&f.coeffs), constant: f.constant.into() })
                .collect(),
            vars: self.slice.vars.clone(),
            seed: Seed(self.slice.seed),
        };
        if self.points.len() != self.degree || slice.forms.len() != self.dim {
            return Err(CliError::Input("witness set degree or dimension does not match its data".into()));
        }
        Ok(WitnessSet {
            system: self.system.to_system()?,
            square: self.square.to_system()?,
            slice,
            points: self.points.iter().map(|p| point_from_json(p)).collect(),
            dim: self.dim,
            degree: self.degree,
        })
    }
}

/// Upper triangle of a symmetric matrix of linear forms, keyed `m11` to
/// `m44`, each entry the coefficients of `x1..x4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetRepJson {
    pub entries: BTreeMap<String, Vec<ComplexJson>>,
    pub scale: ComplexJson,
    pub residual: f64,
    pub nodes: Vec<Vec<ComplexJson>>,
}

impl DetRepJson {
    pub fn from_detrep(rep: &DetRep, nodes: &[Vec<C>]) -> Self {
        let mut entries = BTreeMap::new();
        for r in 0..4 {
            for c in r..4 {
                let p = &rep.m[r][c];
                let coeffs: Vec<C> = (0..4).map(|i| p.coefficient(&Monomial::var(4, i))).collect();
                entries.insert(format!("m{}{}", r + 1, c + 1), point_json(&coeffs));
            }
        }
        DetRepJson { entries, scale: rep.scale.into(), residual: rep.residual, nodes: nodes.iter().map(|p| point_json(p)).collect() }
    }

    /// The full symmetric matrix of linear forms.
    pub fn matrix(&self) -> Result<Vec<Vec<Polynomial>>, CliError> {
        let mut m = vec![vec![Polynomial::zero(4); 4]; 4];
        for r in 0..4 {
            for c in r..4 {
                let key = format!("m{}{}", r + 1, c + 1);
                let coeffs = self.entries.get(&key).ok_or_else(|| CliError::Input(format!("missing entry {key}")))?;
                if coeffs.len() != 4 {
                    return Err(CliError::Input(format!("entry {key} needs 4 coefficients")));
                }
                let p = Polynomial::linear(&point_from_json(coeffs), C::new(0.0, 0.0));
                m[r][c] = p.clone();
                m[c][r] = p;
            }
        }
        Ok(m)
    }
}
