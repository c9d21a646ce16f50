//! Command-line front end, file formats, and result/trace output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::admm_matrix::{self, SolverConfig};
use crate::admm_vector;
use crate::diagnostics::TraceRow;
use crate::error::{Error, Result};
use crate::linalg::SymSparse;
use crate::problems::{self, Cost, Image, Kernel, ProblemInstance, SegmentationMode};
use crate::rounding::{self, DEFAULT_MAX_COLUMNS};
use crate::sdr::{self, DrsConfig, DrsVariant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONVERGED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const DEFAULT_RHO0: f64 = 1.0;
/// The least-squares objective has L_f = 2; small penalties make the
/// linearized iteration oscillate and diverge.
const FACTORIZE_RHO0: f64 = 50.0;
const DEFAULT_GAMMA: f64 = 1.05;
/// A growing penalty freezes the factorization iterates before the fit is good.
const FACTORIZE_GAMMA: f64 = 1.0;

#[derive(Debug, Parser)]
#[command(name = "lowrank-admm", version, about = "Low-rank ADMM solvers for SDP-type combinatorial problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// MAX-CUT on a graph in Gset format.
    Maxcut {
        /// Graph file ("n m" header, then "i j w" lines, 1-based).
        input: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Two-community detection, on a Gset graph or a generated block model.
    Community {
        /// Graph file; omit when using --sbm.
        input: Option<PathBuf>,
        /// Generate a two-block model with this many nodes instead of reading a file.
        #[arg(long, conflicts_with = "input")]
        sbm: Option<usize>,
        /// Within-community edge probability (defaults to the mean weight shift when p, q are absent).
        #[arg(long, requires = "q")]
        p: Option<f64>,
        /// Between-community edge probability.
        #[arg(long, requires = "p")]
        q: Option<f64>,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Two-way segmentation of a PPM image.
    Segment {
        input: PathBuf,
        /// Weight of pixel position against color.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        c_weight: f64,
        /// `raw` (squared distances) or `gaussian:<sigma>`.
        #[arg(long, default_value = "raw")]
        kernel: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Community)]
        mode: ModeArg,
        /// Largest accepted pixel count.
        #[arg(long, default_value_t = problems::DEFAULT_PIXEL_BUDGET)]
        max_pixels: usize,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Nonnegative factorization from partially observed entries.
    Factorize {
        /// Observation file ("n m" header, then "i j v" lines, 1-based, diagonal included).
        input: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    V,
    Mr1,
    Mrr,
    Sdr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Maxcut,
    Community,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Literal,
    Reflected,
}

#[derive(Debug, Clone, Args)]
struct SolveOpts {
    #[arg(long, value_enum, default_value_t = SolverArg::Mrr)]
    solver: SolverArg,
    /// Initial penalty [default: 1, 50 for factorize].
    #[arg(long, allow_negative_numbers = true)]
    rho0: Option<f64>,
    /// Penalty growth factor [default: 1.05, 1 for factorize].
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 10000.0, allow_negative_numbers = true)]
    rho_max: f64,
    /// Stopping tolerance [default: 1e-3, 1e-5 for sdr].
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rounding trials per width.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Factor width [default: ceil(sqrt(2n)) for mrr, 5 for factorize].
    #[arg(long)]
    r: Option<usize>,
    /// Per-iteration CSV trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Result record path; a JSON copy is written next to it with a `.json` suffix.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall time in the result record (otherwise only printed to stderr).
    #[arg(long)]
    record_time: bool,
    /// Consensus step of the relaxation baseline.
    #[arg(long, value_enum, default_value_t = VariantArg::Reflected)]
    drs_variant: VariantArg,
}

/// Result fields in output order.
#[derive(Debug, Default)]
struct Record {
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    fn push<V: Into<Value>>(&mut self, key: &'static str, v: V) {
        self.fields.push((key, v.into()));
    }

    fn key_value_line(&self) -> String {
        let mut line = String::new();
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            let text = match v {
                Value::String(s) => s.replace(' ', "_"),
                other => other.to_string(),
            };
            let _ = write!(line, "{k}={text}");
        }
        line
    }

    fn json(&self) -> String {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            map.insert((*k).to_string(), v.clone());
        }
        serde_json::to_string_pretty(&Value::Object(map)).expect("record values are serializable")
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Parses arguments, runs the solve, writes outputs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(converged) => {
            if converged {
                EXIT_OK
            } else {
                EXIT_NOT_CONVERGED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

struct Outcome {
    trace: Vec<TraceRow>,
    converged: bool,
    record: Record,
}

fn execute(cmd: Command) -> Result<bool> {
    let start = Instant::now();
    let (opts, label, outcome) = match cmd {
        Command::Maxcut { input, opts } => {
            let a = parse_gset(&read_text(&input)?)?;
            let inst = problems::build_maxcut(&a)?;
            let out = solve_binary(&inst, &opts, None)?;
            (opts, "maxcut", out)
        }
        Command::Community {
            input,
            sbm,
            p,
            q,
            opts,
        } => {
            let (a, truth) = match (input, sbm) {
                (Some(path), None) => (parse_gset(&read_text(&path)?)?, None),
                (None, Some(n)) => {
                    let (p, q) = p.zip(q).ok_or_else(|| {
                        Error::InvalidInput("--sbm needs --p and --q".into())
                    })?;
                    let (a, t) = problems::generate_sbm(n, p, q, opts.seed)?;
                    (a, Some(t))
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "community needs an input graph or --sbm".into(),
                    ))
                }
            };
            let inst = match (p, q) {
                (Some(p), Some(q)) => problems::build_community(&a, p, q)?,
                _ => problems::build_community_mean(&a)?,
            };
            let out = solve_binary(&inst, &opts, truth.as_deref())?;
            (opts, "community", out)
        }
        Command::Segment {
            input,
            c_weight,
            kernel,
            mode,
            max_pixels,
            opts,
        } => {
            let bytes = std::fs::read(&input)
                .map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
            let img = parse_ppm(&bytes)?;
            let kernel = parse_kernel(&kernel)?;
            let mode = match mode {
                ModeArg::Maxcut => SegmentationMode::MaxCut,
                ModeArg::Community => SegmentationMode::Community,
            };
            let inst = problems::build_segmentation(&img, c_weight, kernel, mode, max_pixels)?;
            let mut out = solve_binary(&inst, &opts, None)?;
            out.record.push("width", img.width);
            out.record.push("height", img.height);
            (opts, "segment", out)
        }
        Command::Factorize { input, opts } => {
            let c = parse_observations(&read_text(&input)?)?;
            let out = solve_factorize(&c, &opts)?;
            (opts, "factorize", out)
        }
    };
    let Outcome {
        trace,
        converged,
        mut record,
    } = outcome;
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("wall_time_s={elapsed:.3}");
    if opts.record_time {
        record.push("wall_time_s", num(elapsed));
    }
    record.fields.insert(0, ("command", Value::from(label)));
    if let Some(path) = &opts.trace {
        write_file(path, &trace_csv(&trace))?;
    }
    let line = record.key_value_line();
    match &opts.out {
        Some(path) => {
            write_file(path, &format!("{line}\n"))?;
            write_file(&json_path(path), &format!("{}\n", record.json()))?;
        }
        None => println!("{line}"),
    }
    Ok(converged)
}

fn json_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn matrix_config(opts: &SolveOpts, default_rho0: f64, default_gamma: f64) -> Result<SolverConfig> {
    let cfg = SolverConfig {
        rho0: opts.rho0.unwrap_or(default_rho0),
        gamma: opts.gamma.unwrap_or(default_gamma),
        rho_max: opts.rho_max,
        eps: opts.eps.unwrap_or(1e-3),
        max_iter: opts.max_iters.unwrap_or(1000),
        seed: opts.seed,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    if opts.trials == 0 {
        return Err(Error::InvalidInput("--trials must be at least 1".into()));
    }
    Ok(cfg)
}

fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize).max(1)
}

fn push_common(record: &mut Record, inst: &ProblemInstance, solver: &str, seed: u64) {
    record.push("solver", solver);
    record.push("n", inst.n);
    record.push("density", num(inst.density));
    record.push("seed", seed);
}

fn push_trace_summary(record: &mut Record, trace: &[TraceRow], iterations: usize, converged: bool) {
    record.push("iterations", iterations);
    record.push("converged", converged);
    if let Some(last) = trace.last() {
        record.push("primal_residual", num(last.primal_residual));
        record.push("dual_residual", num(last.dual_residual));
        record.push("rho", num(last.rho));
        record.push("dual_norm", num(last.dual_norm));
    }
}

/// MAX-CUT, community and segmentation: solve, round to ±1, report.
fn solve_binary(inst: &ProblemInstance, opts: &SolveOpts, truth: Option<&[f64]>) -> Result<Outcome> {
    let cfg = matrix_config(opts, DEFAULT_RHO0, DEFAULT_GAMMA)?;
    let cost = inst
        .linear_cost()
        .ok_or_else(|| Error::InvalidInput("binary problems need a linear cost".into()))?;
    let mut record = Record::default();
    let solver_name = format!("{:?}", opts.solver).to_lowercase();
    push_common(&mut record, inst, &solver_name, opts.seed);
    for w in &inst.warnings {
        eprintln!("warning: {w}");
    }
    let (x, trace, converged, iterations) = match opts.solver {
        SolverArg::V => {
            let problem = inst.vector_problem()?;
            let res = admm_vector::solve(&problem, &cfg)?;
            record.push("r", 1);
            record.push("inner_failures", res.inner_failures);
            record.push("indefinite_steps", res.indefinite_steps);
            (rounding::sign_round(&res.state.x), res.trace, res.converged, res.iterations)
        }
        SolverArg::Mr1 | SolverArg::Mrr => {
            let r = if opts.solver == SolverArg::Mr1 {
                1
            } else {
                opts.r.unwrap_or_else(|| default_rank(inst.n))
            };
            let inst = inst.clone().with_width(r)?;
            let problem = inst.matrix_problem()?;
            let res = admm_matrix::solve(&problem, &cfg)?;
            record.push("r", r);
            record.push("inner_failures", res.inner_failures);
            let x = if r == 1 {
                rounding::sign_round(res.state.x.data())
            } else {
                let f = rounding::factor_from_svd(&res.state.x);
                rounding::hyperplane_round(&f, cost, opts.trials, opts.seed, DEFAULT_MAX_COLUMNS)?.0
            };
            (x, res.trace, res.converged, res.iterations)
        }
        SolverArg::Sdr => {
            let dcfg = DrsConfig {
                eps: opts.eps.unwrap_or(DrsConfig::default().eps),
                max_iter: opts.max_iters.unwrap_or(DrsConfig::default().max_iter),
                variant: match opts.drs_variant {
                    VariantArg::Literal => DrsVariant::Literal,
                    VariantArg::Reflected => DrsVariant::Reflected,
                },
                ..DrsConfig::default()
            };
            let res = sdr::solve(&sdr::dense_cost(cost), &inst.map, &dcfg)?;
            let (f, clamped) = rounding::factor_from_eig(&res.y)?;
            let (x, _) = rounding::hyperplane_round(&f, cost, opts.trials, opts.seed, DEFAULT_MAX_COLUMNS)?;
            record.push("relaxation_objective", num(res.objective));
            record.push("affine_violation", num(res.affine_violation));
            record.push("psd_violation", num(res.psd_violation));
            record.push("clamped_eigenvalues", clamped);
            (x, res.trace, res.converged, res.iterations)
        }
    };
    push_trace_summary(&mut record, &trace, iterations, converged);
    record.push("objective", num(cost.quad_form(&x)));
    if let Some(a) = &inst.adjacency {
        record.push("cut", num(rounding::cut_value(a, &x)?));
    }
    if let Some(t) = truth {
        let same = x.iter().zip(t).filter(|(a, b)| a == b).count();
        let agree = same.max(x.len() - same) as f64 / x.len() as f64;
        record.push("agreement", num(agree));
    }
    let ones = x.iter().filter(|&&v| v > 0.0).count();
    record.push("positive", ones);
    Ok(Outcome {
        trace,
        converged,
        record,
    })
}

fn solve_factorize(c: &SymSparse, opts: &SolveOpts) -> Result<Outcome> {
    let cfg = matrix_config(opts, FACTORIZE_RHO0, FACTORIZE_GAMMA)?;
    let r = match opts.solver {
        SolverArg::Mr1 => 1,
        SolverArg::Mrr => opts.r.unwrap_or(5),
        other => {
            return Err(Error::InvalidInput(format!(
                "factorize runs the matrix solver (mr1 or mrr), not {other:?}"
            )))
        }
    };
    let inst = problems::build_partialobs(c, r)?;
    let problem = inst.matrix_problem()?;
    let res = admm_matrix::solve(&problem, &cfg)?;
    let mut record = Record::default();
    let solver_name = format!("{:?}", opts.solver).to_lowercase();
    push_common(&mut record, &inst, &solver_name, opts.seed);
    record.push("r", r);
    record.push("inner_failures", res.inner_failures);
    push_trace_summary(&mut record, &res.trace, res.iterations, res.converged);
    if let Cost::PartialObs(obs) = &inst.cost {
        record.push("objective", num(problem.objective.value(&res.state.z)));
        record.push("relative_error", num(problems::relative_error(&res.state.z, obs)?));
    }
    Ok(Outcome {
        trace: res.trace,
        converged: res.converged,
        record,
    })
}

fn parse_kernel(s: &str) -> Result<Kernel> {
    if s == "raw" {
        return Ok(Kernel::Raw);
    }
    if let Some(rest) = s.strip_prefix("gaussian:") {
        let sigma: f64 = rest
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad kernel width in '{s}'")))?;
        return Ok(Kernel::Gaussian(sigma));
    }
    Err(Error::InvalidInput(format!(
        "unknown kernel '{s}' (expected raw or gaussian:<sigma>)"
    )))
}

/// Trace CSV with header `k,P,D,rho,objective,lagrangian`.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut s = String::from("k,P,D,rho,objective,lagrangian\n");
    for t in trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            t.k, t.primal_residual, t.dual_residual, t.rho, t.objective, t.lagrangian
        );
    }
    s
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize)> {
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing 'n m' header"))?;
    let mut it = header.split_whitespace();
    let mut field = |name: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| parse_err(ln, format!("header is missing {name}")))?
            .parse()
            .map_err(|_| parse_err(ln, format!("header field {name} is not a count")))
    };
    let n = field("n")?;
    let m = field("m")?;
    if it.next().is_some() {
        return Err(parse_err(ln, "header has extra fields"));
    }
    Ok((n, m))
}

/// Reads `m` triplets `i j w` with 1-based indices, returns 0-based triplets.
fn parse_triplets<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    n: usize,
    m: usize,
) -> Result<Vec<(usize, usize, f64, usize)>> {
    let mut out = Vec::with_capacity(m);
    for (ln, line) in lines.by_ref() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(ln, format!("expected 'i j w', found '{line}'")));
        }
        let idx = |s: &str| -> Result<usize> {
            let v: usize = s
                .parse()
                .map_err(|_| parse_err(ln, format!("'{s}' is not a node index")))?;
            if v == 0 || v > n {
                return Err(parse_err(ln, format!("node index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let i = idx(parts[0])?;
        let j = idx(parts[1])?;
        let w: f64 = parts[2]
            .parse()
            .map_err(|_| parse_err(ln, format!("'{}' is not a number", parts[2])))?;
        if !w.is_finite() {
            return Err(parse_err(ln, "weight is not finite"));
        }
        out.push((i, j, w, ln));
    }
    if out.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} entries, found {}", out.len()),
        ));
    }
    Ok(out)
}

/// Gset graph: header `n m`, then `m` lines `i j w` (1-based). Duplicate edges
/// are summed; self-loops are rejected.
pub fn parse_gset(text: &str) -> Result<SymSparse> {
    let mut lines = data_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let trip = parse_triplets(&mut lines, n, m)?;
    if let Some(&(i, _, _, ln)) = trip.iter().find(|t| t.0 == t.1) {
        return Err(parse_err(ln, format!("self-loop at node {}", i + 1)));
    }
    let trip: Vec<(usize, usize, f64)> = trip.into_iter().map(|(i, j, w, _)| (i, j, w)).collect();
    SymSparse::from_triplets(n, &trip)
}

/// Canonical Gset text: edges with `i < j` in row-major order.
pub fn write_gset(a: &SymSparse) -> String {
    let edges: Vec<(usize, usize, f64)> = a
        .pattern()
        .entries()
        .iter()
        .zip(a.values())
        .filter(|(&(i, j), _)| i != j)
        .map(|(&(i, j), &v)| (i, j, v))
        .collect();
    let mut s = format!("{} {}\n", a.n(), edges.len());
    for (i, j, v) in edges {
        let _ = writeln!(s, "{} {} {}", i + 1, j + 1, v);
    }
    s
}

/// Observed entries of a symmetric matrix, same layout as Gset but with the
/// diagonal listed explicitly (every diagonal entry is required).
pub fn parse_observations(text: &str) -> Result<SymSparse> {
    let mut lines = data_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let trip = parse_triplets(&mut lines, n, m)?;
    let mut seen = vec![false; n];
    for &(i, j, _, _) in &trip {
        if i == j {
            seen[i] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidInput(format!(
            "observations must include every diagonal entry; ({0}, {0}) is missing",
            missing + 1
        )));
    }
    let trip: Vec<(usize, usize, f64)> = trip.into_iter().map(|(i, j, w, _)| (i, j, w)).collect();
    SymSparse::from_triplets(n, &trip)
}

/// PPM image (P3 or P6, maxval 255), channels scaled to `[0, 1]`.
pub fn parse_ppm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    let next_token = |pos: &mut usize| -> Result<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::InvalidInput("PPM data is truncated".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let magic = next_token(&mut pos)?;
    if magic != "P3" && magic != "P6" {
        return Err(Error::InvalidInput(format!(
            "unsupported image format '{magic}' (expected P3 or P6)"
        )));
    }
    let header_num = |pos: &mut usize, name: &str| -> Result<usize> {
        let t = next_token(pos)?;
        t.parse()
            .map_err(|_| Error::InvalidInput(format!("PPM {name} '{t}' is not a number")))
    };
    let width = header_num(&mut pos, "width")?;
    let height = header_num(&mut pos, "height")?;
    let maxval = header_num(&mut pos, "maxval")?;
    if maxval != 255 {
        return Err(Error::InvalidInput(format!(
            "unsupported PPM maxval {maxval} (only 255)"
        )));
    }
    let count = width * height;
    let mut samples = Vec::with_capacity(count * 3);
    if magic == "P3" {
        for _ in 0..count * 3 {
            let v = header_num(&mut pos, "sample")?;
            if v > 255 {
                return Err(Error::InvalidInput(format!("PPM sample {v} exceeds maxval")));
            }
            samples.push(v as u8);
        }
    } else {
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        let end = pos + count * 3;
        if end > bytes.len() {
            return Err(Error::InvalidInput(format!(
                "PPM raster is truncated: need {} bytes, have {}",
                count * 3,
                bytes.len().saturating_sub(pos)
            )));
        }
        samples.extend_from_slice(&bytes[pos..end]);
    }
    let pixels = samples
        .chunks(3)
        .map(|c| [c[0] as f64 / 255.0, c[1] as f64 / 255.0, c[2] as f64 / 255.0])
        .collect();
    Image::new(width, height, pixels)
}
