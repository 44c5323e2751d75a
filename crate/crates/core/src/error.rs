use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    InvalidInput(String),
    NotSquare { equations: usize, variables: usize },
    ZeroPatch,
    NonHomogeneous,
    DegreeMismatch { expected: u32, found: u32 },
    InconsistentGrouping { equation: usize, degree: u32, factors: usize },
    UnsupportedSymmetry(String),
    StartNotInvariant,
    PathBudgetExceeded { requested: u128, limit: u64 },
    BudgetExceeded(String),
    MissingCoefficient(String),
    RankOutOfRange { n: u32, r: u32 },
    MissingThetaCoefficient(String),
    NonExactDivision { value: String, divisor: i64 },
    EliminationBudget(String),
    NotTenNodal { found: usize },
    SingularLocusPositiveDim,
    NodeRefinementFailed { residual: f64 },
    NotSplitting { residual: f64 },
    DegenerateCurve { nullity: usize },
    SyzygyDefect { nullity: usize },
    NotInIdeal { residual: f64 },
    SymmetrizationFailed,
    SamplingFailed(String),
    Inconclusive(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotSquare { equations, variables } => {
                write!(f, "system is not square: {equations} equations in {variables} variables")
            }
            Error::ZeroPatch => f.write_str("patch vector is zero"),
            Error::NonHomogeneous => f.write_str("polynomial is not homogeneous"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::InconsistentGrouping { equation, degree, factors } => write!(
                f,
                "equation {equation} has degree {degree} but its grouping has {factors} factors"
            ),
            Error::UnsupportedSymmetry(msg) => write!(f, "unsupported symmetry: {msg}"),
            Error::StartNotInvariant => {
                f.write_str("start roots are not closed under the symmetry action")
            }
            Error::PathBudgetExceeded { requested, limit } => {
                write!(f, "path budget exceeded: {requested} paths requested, limit {limit}")
            }
            Error::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
            Error::MissingCoefficient(label) => write!(f, "missing coefficient {label}"),
            Error::RankOutOfRange { n, r } => {
                write!(f, "rank bound {r} out of range for {n}x{n} matrices")
            }
            Error::MissingThetaCoefficient(exp) => {
                write!(f, "no theta coefficient stored at exponent {exp}")
            }
            Error::NonExactDivision { value, divisor } => {
                write!(f, "{value} is not divisible by {divisor}")
            }
            Error::EliminationBudget(msg) => write!(f, "elimination budget exceeded: {msg}"),
            Error::NotTenNodal { found } => write!(f, "expected 10 nodes, found {found}"),
            Error::SingularLocusPositiveDim => {
                f.write_str("singular locus has positive dimension")
            }
            Error::NodeRefinementFailed { residual } => {
                write!(f, "node refinement failed (residual {residual:e})")
            }
            Error::NotSplitting { residual } => {
                write!(f, "sextic does not split into cubics (residual {residual:e})")
            }
            Error::DegenerateCurve { nullity } => {
                write!(f, "cubics through the sample have dimension {nullity}, expected 4")
            }
            Error::SyzygyDefect { nullity } => {
                write!(f, "linear syzygies have dimension {nullity}, expected 3")
            }
            Error::NotInIdeal { residual } => {
                write!(f, "quartic is not in the cubic ideal (residual {residual:e})")
            }
            Error::SymmetrizationFailed => {
                f.write_str("no invertible symmetrizing matrix in the solution space")
            }
            Error::SamplingFailed(msg) => write!(f, "sampling failed: {msg}"),
            Error::Inconclusive(msg) => write!(f, "inconclusive: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
