//! The `sosnag` command line: one subcommand per computation, JSON results
//! on stdout or `--out`, diagnostics on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C;
use serde::Serialize;
use serde_json::{json, Value};
use sosnag_core::boundary::{
    binary_analogue_system, brute_force_degree, quartic_system, random_pencil, sextic_system, BinaryPencil,
    BoundarySystem,
};
use sosnag_core::enumerative::{
    boundary_degree_from_nl, delta_exponent, discriminant_degree, kontsevich_manin, NLData, NlCase,
};
use sosnag_core::rankloci::{
    build_hankel, coefficient_label, hankel_rank_locus, harris_tu_degree, rank_deficiency_system,
    symmetric_generic, HankelCase, HankelSpec, LocusMode,
};
use sosnag_core::solver::{linear_product_start, solve_sampled, solve_total_degree, PathCounts, SolverConfig};
use sosnag_core::symmetroid::{clr_quartic, determinantal_representation, QuarticSurface, SymmetroidConfig};
use sosnag_core::witness::{membership, numerical_decomposition, WitnessConfig};
use sosnag_core::Seed;

use crate::error::CliError;
use crate::exec::Rayon;
use crate::format::{point_from_json, ComplexJson, DetRepJson, PolyJson, SolutionJson, SystemJson, WitnessSetJson};

#[derive(Debug, Parser)]
#[command(name = "sosnag", version, about = "Numerical algebraic geometry for sums-of-squares boundaries")]
pub struct Cli {
    /// Seed for every random choice; equal seeds give identical output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for path tracking (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Residual tolerance for accepting solutions.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the result here instead of stdout; a manifest goes next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Refuse runs that would track more paths than this.
    #[arg(long = "paths-limit", global = true)]
    pub paths_limit: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a square polynomial system by total-degree homotopy.
    Solve {
        #[arg(long)]
        input: PathBuf,
    },
    /// Witness sets of a system, of a symmetric rank locus, or a membership query.
    Witness(WitnessArgs),
    /// Hankel matrix layout and rank-locus degree.
    Hankel(HankelArgs),
    /// Boundary systems for the sums-of-squares cones.
    Boundary {
        /// sextic, quartic or binary:K
        #[arg(long)]
        case: String,
        /// Track this many random orbits instead of only building the system.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Symmetric determinantal representation of a 10-nodal quartic surface.
    Symmetroid {
        /// Quartic in four variables, polynomial JSON.
        #[arg(long, conflicts_with = "clr")]
        input: Option<PathBuf>,
        /// Use the Choi-Lam-Reznick quartic with this parameter.
        #[arg(long)]
        clr: Option<f64>,
        #[arg(long = "node-index", default_value_t = 0)]
        node_index: usize,
    },
    /// Number of rational plane curves of a given degree through 3d-1 points.
    Gw {
        #[arg(long)]
        degree: u32,
    },
    /// Boundary degree from theta-series coefficients.
    Nl {
        #[arg(long, value_enum)]
        case: NlArg,
    },
    /// Degree of the discriminant of forms of degree 2d in n variables.
    Disc {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Degree and codimension of symmetric matrices of bounded rank.
    Ht {
        /// Matrix size (or use --size).
        size_pos: Option<u32>,
        /// Rank bound (or use --rank).
        rank_pos: Option<u32>,
        #[arg(long)]
        size: Option<u32>,
        #[arg(long)]
        rank: Option<u32>,
    },
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// System JSON ({"nvars", "equations"}).
    #[arg(long, requires = "dim")]
    pub input: Option<PathBuf>,
    /// Dimension to decompose.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Size of a generic symmetric matrix whose rank locus to decompose.
    #[arg(long, requires = "rank", conflicts_with = "input")]
    pub symmetric: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Previously written witness set, for a membership query.
    #[arg(long, requires = "point", conflicts_with_all = ["input", "symmetric"])]
    pub load: Option<PathBuf>,
    /// Point JSON (list of {re, im}) in the witness set's slice coordinates.
    #[arg(long)]
    pub point: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HankelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub rank: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeArg::Formula)]
    pub mode: ModeArg,
    /// Print the matrix of coefficient labels instead.
    #[arg(long)]
    pub layout: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Formula,
    Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NlArg {
    Sextic,
    Quartic,
}

/// Result of a command plus what the manifest needs.
pub struct Outcome {
    pub result: Value,
    pub path_counts: Option<PathCounts>,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Outcome { result, path_counts: None }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a [String],
    seed: u64,
    threads: usize,
    config: &'a SolverConfig,
    wall_time_s: f64,
    path_counts: Option<PathCounts>,
    version: &'static str,
}

impl Cli {
    fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig { seed: Seed(self.seed), paths_limit: self.paths_limit, ..SolverConfig::default() };
        if let Some(t) = self.tol {
            cfg.residual_tol = t;
        }
        cfg
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

/// Exact integer as a JSON number of any size.
fn big_number(digits: &str) -> Value {
    serde_json::from_str(digits).expect("decimal digits")
}

fn c_json(c: C) -> ComplexJson {
    c.into()
}

pub fn run(cli: &Cli, exec: &Rayon) -> Result<Outcome, CliError> {
    let cfg = cli.solver_config();
    match &cli.command {
        Command::Solve { input } => {
            let sys = read_json::<SystemJson>(input)?.to_system()?;
            let sols = solve_total_degree(&sys, &cfg, exec)?;
            Ok(Outcome { result: to_value(&SolutionJson::from_set(&sols)), path_counts: Some(sols.counts) })
        }
        Command::Witness(args) => witness(args, &cfg, exec),
        Command::Hankel(args) => hankel(args, &cfg, exec),
        Command::Boundary { case, sample } => boundary(case, *sample, &cfg, exec),
        Command::Symmetroid { input, clr, node_index } => {
            let surface = match (input, clr) {
                (Some(path), None) => QuarticSurface::new(read_json::<PolyJson>(path)?.to_poly()?)?,
                (None, Some(b)) => clr_quartic(*b),
                _ => return Err(CliError::Usage("symmetroid needs exactly one of --input or --clr".into())),
            };
            let scfg = SymmetroidConfig { solver: cfg.clone(), node_index: *node_index, seed: Seed(cli.seed), ..SymmetroidConfig::default() };
            let report = determinantal_representation(&surface, &scfg, exec)?;
            let nodes: Vec<Vec<C>> = report.nodes.nodes.iter().map(|n| n.point.clone()).collect();
            Ok(Outcome::plain(to_value(&DetRepJson::from_detrep(&report.detrep, &nodes))))
        }
        Command::Gw { degree } => {
            if *degree == 0 {
                return Err(CliError::Usage("--degree must be positive".into()));
            }
            Ok(Outcome::plain(json!({ "N": big_number(&kontsevich_manin(*degree).to_string()) })))
        }
        Command::Nl { case } => {
            let (name, case) = match case {
                NlArg::Sextic => ("sextic", NlCase::Sextic),
                NlArg::Quartic => ("quartic", NlCase::Quartic),
            };
            let data = NLData::for_case(case);
            let delta = delta_exponent(data.l, data.curve.0, data.curve.1);
            let degree = boundary_degree_from_nl(&data)?;
            Ok(Outcome::plain(json!({
                "case": name,
                "l": data.l,
                "delta": delta.to_string(),
                "coefficient": data.coefficient(delta),
                "divisor": data.divisor,
                "degree": degree,
            })))
        }
        Command::Disc { n, d } => {
            if *n == 0 || *d == 0 {
                return Err(CliError::Usage("--n and --d must be positive".into()));
            }
            Ok(Outcome::plain(json!({ "degree": big_number(&discriminant_degree(*n, *d).to_string()) })))
        }
        Command::Ht { size_pos, rank_pos, size, rank } => {
            let n = size.or(*size_pos).ok_or_else(|| CliError::Usage("ht needs a matrix size".into()))?;
            let r = rank.or(*rank_pos).ok_or_else(|| CliError::Usage("ht needs a rank bound".into()))?;
            let ht = harris_tu_degree(n, r)?;
            Ok(Outcome::plain(json!({ "degree": big_number(&ht.degree.to_string()), "codim": ht.codim })))
        }
    }
}

fn witness(args: &WitnessArgs, cfg: &SolverConfig, exec: &Rayon) -> Result<Outcome, CliError> {
    let wcfg = WitnessConfig { solver: cfg.clone(), ..WitnessConfig::default() };
    if let (Some(load), Some(point)) = (&args.load, &args.point) {
        let ws = read_json::<WitnessSetJson>(load)?.to_set()?;
        let q = point_from_json(&read_json::<Vec<ComplexJson>>(point)?);
        let member = membership(&q, &ws, &wcfg, exec)?;
        return Ok(Outcome::plain(json!({ "member": member })));
    }
    let (system, dim, wcfg, expected) = if let (Some(n), Some(r)) = (args.symmetric, args.rank) {
        let rs = rank_deficiency_system(&symmetric_generic(n), r, cfg.seed.derive(0x77))?;
        let ht = harris_tu_degree(n as u32, r as u32)?;
        let dim = rs
            .x_vars
            .checked_sub(ht.codim as usize)
            .ok_or_else(|| CliError::Usage("rank locus is empty".into()))?;
        let wcfg = WitnessConfig { slice_vars: Some(rs.slice_vars()), ..wcfg };
        (rs.system, dim, wcfg, Some(ht.degree.to_string()))
    } else if let (Some(input), Some(dim)) = (&args.input, args.dim) {
        (read_json::<SystemJson>(input)?.to_system()?, dim, wcfg, None)
    } else {
        return Err(CliError::Usage("witness needs --input and --dim, --symmetric and --rank, or --load and --point".into()));
    };
    let dec = numerical_decomposition(&system, &[dim], &wcfg, exec)?;
    let mut result = json!({
        "dim": dim,
        "degrees": dec.components.iter().map(|w| w.degree).collect::<Vec<_>>(),
        "components": dec.components.iter().map(WitnessSetJson::from_set).collect::<Vec<_>>(),
        "uncertified": dec.uncertified.len(),
        "path_counts": dec.path_counts,
    });
    if let Some(e) = expected {
        result["formula_degree"] = big_number(&e);
    }
    Ok(Outcome { result, path_counts: Some(dec.path_counts) })
}

fn hankel(args: &HankelArgs, cfg: &SolverConfig, exec: &Rayon) -> Result<Outcome, CliError> {
    if args.n == 0 || args.d == 0 {
        return Err(CliError::Usage("--n and --d must be positive".into()));
    }
    if args.layout {
        let spec = HankelSpec::new(args.n, args.d);
        let labels = build_hankel(&spec, |e| Some(coefficient_label(e)))?;
        return Ok(Outcome::plain(json!({ "n": args.n, "d": args.d, "rows": labels })));
    }
    let rank = args.rank.ok_or_else(|| CliError::Usage("hankel needs --rank unless --layout is given".into()))?;
    let case = HankelCase { n: args.n, d: args.d, rank };
    let mode = match args.mode {
        ModeArg::Formula => LocusMode::Formula,
        ModeArg::Witness => LocusMode::Witness,
    };
    let wcfg = WitnessConfig { solver: cfg.clone(), ..WitnessConfig::default() };
    let report = hankel_rank_locus(case, mode, &wcfg, exec)?;
    Ok(Outcome { path_counts: report.path_counts, result: to_value(&report) })
}

fn census_json(sys: &BoundarySystem) -> Value {
    let (linear, quadratic) = sys.census();
    json!({
        "unknowns": sys.system.nvars(),
        "equations": sys.system.len(),
        "linear": linear,
        "quadratic": quadratic,
        "normalizations": sys.normalizations.iter().map(|(name, v)| json!({ "coefficient": name, "value": c_json(*v) })).collect::<Vec<_>>(),
    })
}

fn boundary(case: &str, sample: Option<u64>, cfg: &SolverConfig, exec: &Rayon) -> Result<Outcome, CliError> {
    let seed = cfg.seed;
    if let Some(k) = case.strip_prefix("binary:") {
        let k: u32 = k.parse().map_err(|_| CliError::Usage(format!("bad binary degree in {case:?}")))?;
        if k == 0 {
            return Err(CliError::Usage("binary degree must be positive".into()));
        }
        let pencil = BinaryPencil::random(k, seed.derive(0x70));
        let sys = binary_analogue_system(&pencil)?;
        let oracle = if k <= 3 { Some(brute_force_degree(&sys)?) } else { None };
        let sols = solve_total_degree(&sys.system, cfg, exec)?;
        let s = sys.distinct_s(&sols, 1e-6);
        let result = json!({
            "case": case,
            "census": census_json(&sys),
            "distinct_s": s.len(),
            "s_values": s.iter().map(|&v| c_json(v)).collect::<Vec<_>>(),
            "oracle_degree": oracle.as_ref().map(|o| o.degree),
            "oracle_degenerate": oracle.as_ref().map(|o| o.degenerate),
            "path_counts": sols.counts,
        });
        return Ok(Outcome { result, path_counts: Some(sols.counts) });
    }
    let (sys, nl) = match case {
        "sextic" => {
            let (p, q) = random_pencil(3, 6, seed.derive(0x70));
            (sextic_system(&p, &q)?, NlCase::Sextic)
        }
        "quartic" => {
            let (p, q) = random_pencil(4, 4, seed.derive(0x70));
            (quartic_system(&p, &q)?, NlCase::Quartic)
        }
        other => return Err(CliError::Usage(format!("unknown boundary case {other:?}"))),
    };
    let mut result = json!({
        "case": case,
        "census": census_json(&sys),
        "expected_degree": boundary_degree_from_nl(&NLData::for_case(nl))?,
    });
    let Some(count) = sample else {
        return Ok(Outcome::plain(result));
    };
    if let Some(limit) = cfg.paths_limit {
        if count > limit {
            return Err(sosnag_core::Error::PathBudgetExceeded { requested: count as u128, limit }.into());
        }
    }
    let start = linear_product_start(&sys.system, &sys.groupings, sys.symmetry.as_ref(), seed.derive(0x73))?;
    let run = solve_sampled(&sys.system, &start, sys.symmetry.as_ref(), count, cfg, exec)?;
    let s = sys.distinct_s(&run.solutions, 1e-6);
    result["sample"] = json!({
        "tracked": run.tracked,
        "total_orbits": big_number(&run.total_orbits.to_string()),
        "path_counts": run.solutions.counts,
        "distinct_s": s.len(),
        "s_values": s.iter().map(|&v| c_json(v)).collect::<Vec<_>>(),
    });
    Ok(Outcome { result, path_counts: Some(run.solutions.counts) })
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch_to<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let command: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let exec = match Rayon::new(cli.threads) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    let started = Instant::now();
    let outcome = match run(&cli, &exec) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let mut text = serde_json::to_string_pretty(&outcome.result).expect("json");
    text.push('\n');
    let manifest = Manifest {
        command: &command,
        seed: cli.seed,
        threads: exec.threads(),
        config: &cli.solver_config(),
        wall_time_s: started.elapsed().as_secs_f64(),
        path_counts: outcome.path_counts,
        version: env!("CARGO_PKG_VERSION"),
    };
    let manifest_text = serde_json::to_string_pretty(&manifest).expect("json");
    let written = write_output(cli.out.as_deref(), &text, stdout).and_then(|_| match &cli.out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".manifest.json");
            std::fs::write(PathBuf::from(name), manifest_text + "\n").map_err(CliError::from)
        }
        None => writeln!(stderr, "{}", serde_json::to_string(&manifest).expect("json")).map_err(CliError::from),
    });
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    dispatch_to(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
