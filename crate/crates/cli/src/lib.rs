//! The `exgamble` command line: argument parsing, file handling and
//! dispatch to the library.

pub mod matrix_file;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exgamble::{
    condition_density, credal_feasible, dutch_book_witness_search, exchangeability_residuals, is_exchangeable_density,
    outcome_probability, projected_mixture_decomposition, symmetrizer, AssessmentSet, DecompositionOutcome, Error,
    FeasibilityStatus, Measurement, SolverOptions, StarFlag, WitnessConfig, WitnessOutcome,
};
use serde_json::{json, Value};

pub use matrix_file::{Kind, Loaded, MatrixFile};
pub use report::{InputDigest, RunReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;
pub const EXIT_INCOMPATIBLE: u8 = 4;

/// Tolerance of the `exchangeable` verdict of `check`.
const EXCHANGEABLE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "exgamble", version, about = "Desirable gambles for indistinguishable particles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StarArg {
    Sym,
    Anti,
    None,
}

impl StarArg {
    fn flag(self) -> Option<StarFlag> {
        match self {
            StarArg::Sym => Some(StarFlag::Sym),
            StarArg::Anti => Some(StarFlag::Anti),
            StarArg::None => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Feasibility tolerance.
    #[arg(long, default_value_t = SolverOptions::default().tol)]
    pub tol: f64,
    /// Iteration cap of the feasibility solver.
    #[arg(long = "iter-cap", default_value_t = SolverOptions::default().iter_cap)]
    pub iter_cap: usize,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, iter_cap: self.iter_cap }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a gamble (Π†GΠ) or a vector (Πz) onto the exchangeable subspace.
    Symmetrize {
        input: PathBuf,
        #[arg(long, value_enum)]
        star: StarArg,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Exchangeability of a density file, or coherence of gamble files.
    Check {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "none")]
        star: StarArg,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Condition a density on the first outcome of the measurement {Π, I − Π}.
    Condition {
        rho: PathBuf,
        projector: PathBuf,
        /// Number of leading particles the projector acts on.
        #[arg(long)]
        measured: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Look for a product-mixture decomposition, then for a Dutch-book witness.
    Entangle {
        rho: PathBuf,
        #[arg(long, value_enum, default_value = "none")]
        star: StarArg,
        /// Haar product states drawn for the decomposition.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sidecar file for atoms or witness; defaults to `<rho>.entangle.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone)]
pub struct Execution {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IncompatibleOutcome { .. } => EXIT_INCOMPATIBLE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Success {
    code: u8,
    text: Vec<String>,
    result: Value,
}

struct Context {
    inputs: Vec<InputDigest>,
}

impl Context {
    fn load(&mut self, path: &Path) -> Result<Loaded, Failure> {
        let bytes = fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest::of(path, &bytes));
        let text = String::from_utf8(bytes).map_err(|_| input_error(format!("{}: not UTF-8", path.display())))?;
        let file = MatrixFile::parse(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        file.validate().map_err(|e| input_error(format!("{}: {e}", path.display())))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn complex_list<'a>(it: impl Iterator<Item = &'a exgamble::Complex64>) -> Value {
    Value::Array(it.map(|z| json!([z.re, z.im])).collect())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution { code, stdout: String::new(), stderr: text }
            } else {
                Execution { code, stdout: text, stderr: String::new() }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Execution {
    let start = Instant::now();
    let mut ctx = Context { inputs: Vec::new() };
    let (name, seed, solver) = match &cli.command {
        Command::Symmetrize { solver, .. } => ("symmetrize", None, solver),
        Command::Check { solver, .. } => ("check", None, solver),
        Command::Condition { solver, .. } => ("condition", None, solver),
        Command::Entangle { seed, solver, .. } => ("entangle", Some(*seed), solver),
    };
    let outcome = match &cli.command {
        Command::Symmetrize { input, star, out, .. } => symmetrize(&mut ctx, input, *star, out),
        Command::Check { inputs, star, solver } => check(&mut ctx, inputs, *star, solver.options()),
        Command::Condition { rho, projector, measured, out, .. } => {
            condition(&mut ctx, rho, projector, *measured, out.as_deref())
        }
        Command::Entangle { rho, star, samples, seed, out, .. } => {
            entangle(&mut ctx, rho, *star, *samples, *seed, out.as_deref())
        }
    };
    match outcome {
        Err(f) => Execution { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
        Ok(s) => {
            let report = RunReport {
                command: name.to_string(),
                inputs: ctx.inputs,
                seed,
                tol: solver.tol,
                iter_cap: solver.iter_cap,
                result: s.result,
                elapsed_seconds: start.elapsed().as_secs_f64(),
            };
            let mut stdout = String::new();
            for line in s.text {
                stdout.push_str(&line);
                stdout.push('\n');
            }
            stdout.push_str(&report.to_json_line());
            stdout.push('\n');
            Execution { code: s.code, stdout, stderr: String::new() }
        }
    }
}

fn symmetrize(ctx: &mut Context, input: &Path, star: StarArg, out: &Path) -> Result<Success, Failure> {
    let star = star.flag().ok_or_else(|| input_error("symmetrize needs --star sym or --star anti"))?;
    let loaded = ctx.load(input)?;
    match loaded {
        Loaded::Gamble(g) => {
            let ex = g.exchange_projection(star)?;
            write_file(out, &MatrixFile::from_matrix(g.shape(), Kind::Gamble, ex.matrix()).to_json())?;
            Ok(Success {
                code: EXIT_OK,
                text: vec![format!("symmetrized gamble written to {}", out.display())],
                result: json!({ "kind": "gamble", "star": star.to_string(), "out": out.display().to_string() }),
            })
        }
        Loaded::Vector(shape, z) => {
            let v = symmetrizer(shape, star)? * z;
            let norm = v.norm();
            write_file(out, &MatrixFile::from_vector(shape, &v).to_json())?;
            Ok(Success {
                code: EXIT_OK,
                text: vec![format!("norm: {norm}"), format!("projected vector written to {}", out.display())],
                result: json!({
                    "kind": "vector", "star": star.to_string(), "norm": norm, "out": out.display().to_string()
                }),
            })
        }
        _ => Err(input_error(format!("{}: symmetrize expects a gamble or a vector", input.display()))),
    }
}

fn check(ctx: &mut Context, inputs: &[PathBuf], star: StarArg, opts: SolverOptions) -> Result<Success, Failure> {
    let loaded = inputs.iter().map(|p| ctx.load(p)).collect::<Result<Vec<_>, _>>()?;
    if let [Loaded::Density(rho)] = loaded.as_slice() {
        let star = star.flag().ok_or_else(|| input_error("checking a density needs --star sym or --star anti"))?;
        let r = exchangeability_residuals(rho, star)?;
        let verdict = is_exchangeable_density(rho, star, EXCHANGEABLE_TOL)?;
        return Ok(Success {
            code: EXIT_OK,
            text: vec![
                format!("exchangeable: {verdict}"),
                format!("projector residual: {}, pairwise residual: {}", r.projector, r.pairwise),
            ],
            result: json!({
                "exchangeable": verdict, "star": star.to_string(),
                "projector_residual": r.projector, "pairwise_residual": r.pairwise
            }),
        });
    }
    let mut gambles = Vec::new();
    for (l, p) in loaded.into_iter().zip(inputs) {
        match l {
            Loaded::Gamble(g) => gambles.push(g),
            _ => {
                return Err(input_error(format!(
                    "{}: check expects one density file or one or more gamble files",
                    p.display()
                )))
            }
        }
    }
    let shape = gambles[0].shape();
    let set = AssessmentSet::new(shape, gambles, star.flag())?;
    let res = credal_feasible(&set, opts)?;
    let mut text = vec![
        format!("coherent: {}", res.status),
        format!("residual: {}, iterations: {}", res.residual, res.iterations),
    ];
    let mut result = json!({
        "coherent": res.status.to_string(),
        "star": star.flag().map(|s| s.to_string()),
        "residual": res.residual,
        "iterations": res.iterations,
    });
    if let Some(w) = &res.witness {
        result["witness"] = complex_list(exgamble::linalg::to_row_major(w.matrix()).iter());
    }
    if let Some(s) = &res.sure_loss {
        text.push(format!("sure-loss multipliers: {:?}", s.multipliers));
        result["sure_loss"] = json!({ "multipliers": s.multipliers, "max_eigenvalue": s.max_eigenvalue });
    }
    let code = if res.status == FeasibilityStatus::Undecided { EXIT_UNDECIDED } else { EXIT_OK };
    Ok(Success { code, text, result })
}

fn condition(
    ctx: &mut Context,
    rho_path: &Path,
    projector_path: &Path,
    measured: usize,
    out: Option<&Path>,
) -> Result<Success, Failure> {
    let Loaded::Density(rho) = ctx.load(rho_path)? else {
        return Err(input_error(format!("{}: expected a density file", rho_path.display())));
    };
    let (pshape, p) = match ctx.load(projector_path)? {
        Loaded::Operator(s, p) => (s, p),
        Loaded::Gamble(g) => (g.shape(), g.matrix().clone()),
        _ => return Err(input_error(format!("{}: expected an operator file", projector_path.display()))),
    };
    let shape = rho.shape();
    if pshape.n() != shape.n() || pshape.m() != measured {
        return Err(input_error(format!(
            "projector has n = {}, m = {}; expected n = {}, m = {measured}",
            pshape.n(),
            pshape.m(),
            shape.n()
        )));
    }
    let meas = Measurement::binary(shape, measured, p)?;
    let probability = outcome_probability(&rho, &meas, 0)?;
    let post = condition_density(&rho, &meas, 0)?;
    let file = MatrixFile::from_matrix(shape, Kind::Density, post.matrix());
    let mut text = vec![format!("probability: {probability}")];
    let mut result = json!({ "probability": probability });
    match out {
        Some(path) => {
            write_file(path, &file.to_json())?;
            text.push(format!("conditioned density written to {}", path.display()));
            result["out"] = json!(path.display().to_string());
        }
        None => result["density"] = serde_json::to_value(&file).expect("matrix files serialize"),
    }
    Ok(Success { code: EXIT_OK, text, result })
}

fn entangle(
    ctx: &mut Context,
    rho_path: &Path,
    star: StarArg,
    samples: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<Success, Failure> {
    let Loaded::Density(rho) = ctx.load(rho_path)? else {
        return Err(input_error(format!("{}: expected a density file", rho_path.display())));
    };
    let sidecar = out.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut s = rho_path.as_os_str().to_owned();
        s.push(".entangle.json");
        PathBuf::from(s)
    });
    let star_flag = star.flag();
    let star_name = star_flag.map_or("none".to_string(), |s| s.to_string());

    let (code, text, mut result) = match projected_mixture_decomposition(&rho, star_flag, samples, seed)? {
        DecompositionOutcome::Found(d) => {
            let atoms: Vec<Value> = d
                .atoms()
                .iter()
                .map(|a| {
                    let factors: Vec<Value> = a.state.factors().iter().map(|f| complex_list(f.iter())).collect();
                    json!({ "weight": a.weight, "factors": factors })
                })
                .collect();
            (
                EXIT_OK,
                format!("separable (decomposition found, residual={})", d.residual()),
                json!({ "verdict": "separable", "residual": d.residual(), "atoms": atoms }),
            )
        }
        DecompositionOutcome::Inconclusive { residual } => {
            let cfg = WitnessConfig { seed, ..WitnessConfig::default() };
            match dutch_book_witness_search(&rho, star_flag, &cfg)? {
                WitnessOutcome::Found(w) => {
                    let file = MatrixFile::from_matrix(rho.shape(), Kind::Gamble, w.gamble.matrix());
                    (
                        EXIT_OK,
                        format!("entangled (witness found, max={}, trace={})", w.estimated_max, w.trace_value),
                        json!({
                            "verdict": "entangled",
                            "decomposition_residual": residual,
                            "witness": {
                                "gamble": serde_json::to_value(&file).expect("matrix files serialize"),
                                "estimated_max": w.estimated_max,
                                "trace_value": w.trace_value,
                                "samples": w.samples,
                                "margin": w.margin,
                            }
                        }),
                    )
                }
                WitnessOutcome::NoneFound => (
                    EXIT_UNDECIDED,
                    "inconclusive".to_string(),
                    json!({ "verdict": "inconclusive", "decomposition_residual": residual }),
                ),
            }
        }
    };
    result["star"] = json!(star_name);
    result["samples"] = json!(samples);
    let mut body = serde_json::to_string_pretty(&result).expect("values serialize");
    body.push('\n');
    write_file(&sidecar, &body)?;
    result["sidecar"] = json!(sidecar.display().to_string());
    Ok(Success { code, text: vec![text, format!("details written to {}", sidecar.display())], result })
}

