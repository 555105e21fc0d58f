//! Command-line harness: shape construction, resistance evaluation,
//! parameter sweeps, shape search, reproduction gates, and SVG export.
//!
//! Every run writes its outputs atomically (temp file, then rename) into
//! the `--out` directory and finishes with a `manifest.json` echoing the
//! invocation and the SHA-256 of each output, so a run can be verified and
//! repeated exactly.
//!
//! Exit codes: 0 success, 1 failed reproduction gate or internal error,
//! 2 unusable shape or arguments, 3 evaluation failure.

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use maxdrag::analytic::{arc_zigzag_resistance, mushroom_bound};
use maxdrag::geometry::{
    make_canonical_zigzag, make_mushroom, make_rectangle, make_symmetric_piecewise_quadratic,
    make_symmetric_polyline, make_two_segment_line, make_two_segment_quadratic,
};
use maxdrag::optimizer::{
    optimize, sweep_symmetric_slope, OptimizationProblem, SearchMethod, SearchSpace,
};
use maxdrag::pseudo::{evaluate_arc_limit, zigzag_convergence};
use maxdrag::reproduce::{format_report, run_suite, Suite};
use maxdrag::svg::svg_document;
use maxdrag::{evaluate_resistance, Cavity, EvalConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

static VERBOSE: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "maxdrag", version, about = "Resistance of slowly rotating rough bodies: evaluate, sweep, optimize, reproduce")]
struct Cli {
    /// Worker threads (default: all cores; MAXDRAG_THREADS also respected)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output files (default: out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with default knobs (keys: n1, n2, seed, threads, out);
    /// explicit flags win over config values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Echo every output file with its content hash
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

/// Optional defaults loaded from `--config`; any flag given on the command
/// line takes precedence over the value here.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n1: Option<usize>,
    n2: Option<usize>,
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<FileConfig, Failure> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the resistance of one cavity
    Eval {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Entry-point grid size (default 2000)
        #[arg(long)]
        n1: Option<usize>,
        /// Angle grid size (default 2000)
        #[arg(long)]
        n2: Option<usize>,
    },
    /// Search a shape family for its highest-resistance member
    Optimize {
        /// Search space: symmetric-two-segment-line, two-segment-line,
        /// symmetric-two-segment-quadratic, symmetric-polyline,
        /// symmetric-piecewise-quadratic, canonical-zigzag
        #[arg(long)]
        family: String,
        /// Segment count for the families that need one
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 400)]
        budget: usize,
        /// Search seed (default 42)
        #[arg(long)]
        seed: Option<u64>,
        /// Search method: restarts, nelder-mead, pattern-search
        #[arg(long, default_value = "restarts")]
        method: String,
        /// Entry-point grid size (default 300)
        #[arg(long)]
        n1: Option<usize>,
        /// Angle grid size (default 300)
        #[arg(long)]
        n2: Option<usize>,
    },
    /// Tabulate the closed-form arc-limit resistance over half-angles
    SweepPsi {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Tabulate symmetric two-segment resistance over slopes
    SweepAlpha {
        #[arg(long, default_value_t = 0.05)]
        alpha_min: f64,
        #[arg(long, default_value_t = 4.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 80)]
        count: usize,
        /// Entry-point grid size (default 500)
        #[arg(long)]
        n1: Option<usize>,
        /// Angle grid size (default 500)
        #[arg(long)]
        n2: Option<usize>,
    },
    /// Compare zigzag billiard resistance against its fine-tooth limit
    ZigzagConverge {
        #[arg(long)]
        psi: f64,
        /// Flank counts to evaluate
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        ms: Vec<usize>,
        /// Entry-point grid size (default 1000)
        #[arg(long)]
        n1: Option<usize>,
        /// Angle grid size (default 1000)
        #[arg(long)]
        n2: Option<usize>,
    },
    /// Evaluate mushroom cavities against their closed-form lower bounds
    Mushroom {
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.1,0.03,0.01")]
        eps: Vec<f64>,
        /// Entry-point grid size (default 1000)
        #[arg(long)]
        n1: Option<usize>,
        /// Angle grid size (default 1000)
        #[arg(long)]
        n2: Option<usize>,
    },
    /// Recompute the headline results and gate them
    Reproduce {
        /// analytic, numeric, properties, or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Render a cavity to a standalone SVG file
    ExportSvg {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 640.0)]
        width: f64,
    },
}

/// One cavity, either from a parametric family or a JSON file.
#[derive(Args)]
struct ShapeArgs {
    /// two-segment-line, two-segment-quadratic, symmetric-polyline,
    /// symmetric-piecewise-quadratic, canonical-zigzag, mushroom, rectangle
    #[arg(long)]
    family: Option<String>,
    /// Cavity JSON written by this tool or by hand
    #[arg(long)]
    shape_file: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    /// Rectangle depth
    #[arg(long)]
    height: Option<f64>,
    /// Knot heights for the polyline families
    #[arg(long, value_delimiter = ',')]
    heights: Option<Vec<f64>>,
    /// Span curvatures for the piecewise-quadratic family
    #[arg(long, value_delimiter = ',')]
    curvatures: Option<Vec<f64>>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn eval(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl ShapeArgs {
    fn resolve(&self) -> Result<Cavity, Failure> {
        if let Some(path) = &self.shape_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
            return Cavity::from_json(&text)
                .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())));
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| Failure::invalid("pass --family or --shape-file"))?;
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| Failure::invalid(format!("--family {family} needs --{flag}")))
        };
        let need_m = || {
            self.m
                .ok_or_else(|| Failure::invalid(format!("--family {family} needs --m")))
        };
        let built = match family {
            "two-segment-line" => {
                make_two_segment_line(need(self.alpha, "alpha")?, need(self.beta, "beta")?)
            }
            "two-segment-quadratic" => {
                // symmetric flanks a x^2 + b x joined at the midpoint
                let a = need(self.alpha, "alpha")?;
                let b = need(self.beta, "beta")?;
                make_two_segment_quadratic(a, b, a, b, 0.5)
            }
            "symmetric-polyline" => {
                let heights = self
                    .heights
                    .clone()
                    .ok_or_else(|| Failure::invalid("symmetric-polyline needs --heights"))?;
                make_symmetric_polyline(need_m()?, &heights)
            }
            "symmetric-piecewise-quadratic" => {
                let heights = self.heights.clone().ok_or_else(|| {
                    Failure::invalid("symmetric-piecewise-quadratic needs --heights")
                })?;
                let curvatures = self.curvatures.clone().ok_or_else(|| {
                    Failure::invalid("symmetric-piecewise-quadratic needs --curvatures")
                })?;
                make_symmetric_piecewise_quadratic(need_m()?, &heights, &curvatures)
            }
            "canonical-zigzag" => make_canonical_zigzag(need(self.psi, "psi")?, need_m()?, None),
            "mushroom" => make_mushroom(need(self.eps, "eps")?),
            "rectangle" => make_rectangle(need(self.height, "height")?),
            other => return Err(Failure::invalid(format!("unknown family '{other}'"))),
        };
        built.map_err(|e| Failure::invalid(e.to_string()))
    }
}

/// Collects outputs and finishes with the manifest.
struct RunDir {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
}

#[derive(Serialize)]
struct OutputRecord {
    path: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    argv: Vec<String>,
    seed: Option<u64>,
    outputs: &'a [OutputRecord],
}

impl RunDir {
    fn new(dir: &Path) -> Result<RunDir, Failure> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::internal(format!("cannot create {}: {e}", dir.display())))?;
        Ok(RunDir {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, content: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        write_atomic(&path, content.as_bytes())?;
        let sha256 = hex_digest(content.as_bytes());
        if VERBOSE.load(Ordering::Relaxed) {
            eprintln!("wrote {} ({} bytes, sha256 {sha256})", path.display(), content.len());
        }
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            sha256,
            bytes: content.len(),
        });
        Ok(())
    }

    fn finish(self, command: &str, seed: Option<u64>) -> Result<(), Failure> {
        let manifest = Manifest {
            command,
            argv: std::env::args().skip(1).collect(),
            seed,
            outputs: &self.outputs,
        };
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Failure::internal(e.to_string()))?;
        write_atomic(&self.dir.join("manifest.json"), text.as_bytes())
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)
        .and_then(|()| std::fs::rename(&tmp, path))
        .map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display())))
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// File-name slug for a cavity label.
fn slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

#[derive(Serialize)]
struct EvalRecord<'a> {
    shape_label: &'a str,
    n1: usize,
    n2: usize,
    value: f64,
    samples: usize,
    discarded: usize,
    discarded_fraction: f64,
    runtime_ms: u128,
}

fn cmd_eval(out: &Path, shape: &ShapeArgs, n1: usize, n2: usize) -> Result<(), Failure> {
    let cavity = shape.resolve()?;
    let start = Instant::now();
    let result = evaluate_resistance(&cavity, &EvalConfig::new(n1, n2))
        .map_err(|e| Failure::eval(e.to_string()))?;
    let runtime_ms = start.elapsed().as_millis();
    let record = EvalRecord {
        shape_label: cavity.label(),
        n1,
        n2,
        value: result.value,
        samples: result.samples,
        discarded: result.discarded,
        discarded_fraction: result.discarded_fraction(),
        runtime_ms,
    };
    let mut run = RunDir::new(out)?;
    run.write(
        "eval.json",
        &serde_json::to_string_pretty(&record).map_err(|e| Failure::internal(e.to_string()))?,
    )?;
    run.write(
        "eval.csv",
        &format!(
            "shape_label,n1,n2,F,discarded_fraction,runtime_ms\n\"{}\",{n1},{n2},{},{},{runtime_ms}\n",
            cavity.label(),
            result.value,
            result.discarded_fraction(),
        ),
    )?;
    run.finish("eval", None)?;
    println!(
        "{}: F = {} ({} samples, discarded fraction {})",
        cavity.label(),
        result.value,
        result.samples,
        result.discarded_fraction()
    );
    Ok(())
}

fn search_space(family: &str, m: Option<usize>) -> Result<SearchSpace, Failure> {
    let need_m =
        || m.ok_or_else(|| Failure::invalid(format!("--family {family} needs --m")));
    match family {
        "symmetric-two-segment-line" => Ok(SearchSpace::SymmetricTwoSegmentLine),
        "two-segment-line" => Ok(SearchSpace::TwoSegmentLine),
        "symmetric-two-segment-quadratic" => Ok(SearchSpace::SymmetricTwoSegmentQuadratic),
        "symmetric-polyline" => Ok(SearchSpace::SymmetricPolyline { m: need_m()? }),
        "symmetric-piecewise-quadratic" => {
            Ok(SearchSpace::SymmetricPiecewiseQuadratic { m: need_m()? })
        }
        "canonical-zigzag" => Ok(SearchSpace::CanonicalZigzag { m: need_m()? }),
        other => Err(Failure::invalid(format!("unknown search family '{other}'"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    out: &Path,
    family: &str,
    m: Option<usize>,
    budget: usize,
    seed: u64,
    method: &str,
    n1: usize,
    n2: usize,
) -> Result<(), Failure> {
    let space = search_space(family, m)?;
    let mut problem = OptimizationProblem::new(space, EvalConfig::new(n1, n2), budget, seed);
    problem.method = match method {
        "restarts" => SearchMethod::RandomRestartNelderMead,
        "nelder-mead" => SearchMethod::NelderMead,
        "pattern-search" => SearchMethod::PatternSearch,
        other => return Err(Failure::invalid(format!("unknown method '{other}'"))),
    };
    let report = optimize(&problem).map_err(|e| Failure::eval(e.to_string()))?;

    let best = space.to_shape(&report.best_params);
    let cavity = best
        .to_cavity()
        .map_err(|e| Failure::internal(format!("winning parameters do not build: {e}")))?;

    let mut history = String::from("eval,value");
    for k in 0..space.arity() {
        history.push_str(&format!(",p{k}"));
    }
    history.push('\n');
    for (i, (params, value)) in report.history.iter().enumerate() {
        history.push_str(&format!("{i},{value}"));
        for p in params {
            history.push_str(&format!(",{p}"));
        }
        history.push('\n');
    }

    let mut run = RunDir::new(out)?;
    run.write(
        "report.json",
        &serde_json::to_string_pretty(&report).map_err(|e| Failure::internal(e.to_string()))?,
    )?;
    run.write("history.csv", &history)?;
    run.write("best.svg", &svg_document(&cavity, 640.0))?;
    run.finish("optimize", Some(seed))?;
    println!(
        "best {}: F = {} after {} evaluations (converged: {})",
        cavity.label(),
        report.best_value,
        report.evaluations,
        report.converged
    );
    Ok(())
}

fn cmd_sweep_psi(out: &Path, count: usize) -> Result<(), Failure> {
    if count == 0 {
        return Err(Failure::invalid("--count must be positive"));
    }
    let mut csv = String::from("psi,F_analytic\n");
    for i in 0..count {
        let psi = (i as f64 + 0.5) * FRAC_PI_2 / count as f64;
        csv.push_str(&format!("{psi},{}\n", arc_zigzag_resistance(psi)));
    }
    let mut run = RunDir::new(out)?;
    run.write("sweep_psi.csv", &csv)?;
    run.finish("sweep-psi", None)?;
    println!("wrote {count} half-angle rows");
    Ok(())
}

fn cmd_sweep_alpha(
    out: &Path,
    alpha_min: f64,
    alpha_max: f64,
    count: usize,
    n1: usize,
    n2: usize,
) -> Result<(), Failure> {
    if count == 0 || !(alpha_min > 0.0) || !(alpha_max > alpha_min) {
        return Err(Failure::invalid(
            "need --count > 0 and 0 < --alpha-min < --alpha-max",
        ));
    }
    let alphas: Vec<f64> = (0..count)
        .map(|i| alpha_min + (alpha_max - alpha_min) * i as f64 / (count - 1).max(1) as f64)
        .collect();
    let rows = sweep_symmetric_slope(&alphas, &EvalConfig::new(n1, n2))
        .map_err(|e| Failure::eval(e.to_string()))?;
    let mut csv = String::from("alpha,F\n");
    for (alpha, f) in &rows {
        csv.push_str(&format!("{alpha},{f}\n"));
    }
    let mut run = RunDir::new(out)?;
    run.write("sweep_alpha.csv", &csv)?;
    run.finish("sweep-alpha", None)?;
    let peak = rows
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty sweep");
    println!("wrote {count} slope rows; peak F = {} at alpha = {}", peak.1, peak.0);
    Ok(())
}

fn cmd_zigzag_converge(
    out: &Path,
    psi: f64,
    ms: &[usize],
    n1: usize,
    n2: usize,
) -> Result<(), Failure> {
    let cfg = EvalConfig::new(n1, n2);
    let billiard = zigzag_convergence(psi, ms, &cfg).map_err(|e| Failure::eval(e.to_string()))?;
    let pseudo = evaluate_arc_limit(psi, n1, n2)
        .map_err(|e| Failure::eval(e.to_string()))?
        .value;
    let analytic = arc_zigzag_resistance(psi);
    let mut csv = String::from("psi,m,F_billiard,F_pseudo,F_analytic\n");
    for (m, f) in &billiard {
        csv.push_str(&format!("{psi},{m},{f},{pseudo},{analytic}\n"));
    }
    let mut run = RunDir::new(out)?;
    run.write("zigzag_converge.csv", &csv)?;
    run.finish("zigzag-converge", None)?;
    println!(
        "psi = {psi}: limit {analytic}, splinter estimate {pseudo}, {} flank counts",
        billiard.len()
    );
    Ok(())
}

fn cmd_mushroom(out: &Path, eps: &[f64], n1: usize, n2: usize) -> Result<(), Failure> {
    let mut csv = String::from("eps,stem_measure,lower_bound,F,discarded_fraction\n");
    for &e in eps {
        let cavity = make_mushroom(e).map_err(|err| Failure::invalid(err.to_string()))?;
        let (stem, bound) = mushroom_bound(e);
        let r = evaluate_resistance(&cavity, &EvalConfig::new(n1, n2))
            .map_err(|err| Failure::eval(err.to_string()))?;
        csv.push_str(&format!(
            "{e},{stem},{bound},{},{}\n",
            r.value,
            r.discarded_fraction()
        ));
        println!("eps = {e}: F = {} (lower bound {bound})", r.value);
    }
    let mut run = RunDir::new(out)?;
    run.write("mushroom.csv", &csv)?;
    run.finish("mushroom", None)?;
    Ok(())
}

fn cmd_reproduce(out: &Path, suite: &str) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(Failure::invalid)?;
    let outcomes = run_suite(suite);
    let table = format_report(&outcomes);
    print!("{table}");
    let mut run = RunDir::new(out)?;
    run.write(
        "reproduce.json",
        &serde_json::to_string_pretty(&outcomes).map_err(|e| Failure::internal(e.to_string()))?,
    )?;
    run.write("reproduce.txt", &table)?;
    run.finish("reproduce", None)?;
    if outcomes.iter().all(|c| c.pass()) {
        Ok(())
    } else {
        Err(Failure::internal("reproduction gates failed"))
    }
}

fn cmd_export_svg(out: &Path, shape: &ShapeArgs, width: f64) -> Result<(), Failure> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Failure::invalid("--width must be positive"));
    }
    let cavity = shape.resolve()?;
    let name = format!("{}.svg", slug(cavity.label()));
    let mut run = RunDir::new(out)?;
    run.write(&name, &svg_document(&cavity, width))?;
    run.finish("export-svg", None)?;
    println!("wrote {}", out.join(name).display());
    Ok(())
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("MAXDRAG_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Flag wins, then the config file, then the built-in default.
fn pick<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = FileConfig::load(cli.config.as_deref())?;
    init_threads(cli.threads.or(cfg.threads));
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    match &cli.command {
        Command::Eval { shape, n1, n2 } => cmd_eval(
            &out,
            shape,
            pick(*n1, cfg.n1, 2000),
            pick(*n2, cfg.n2, 2000),
        ),
        Command::Optimize {
            family,
            m,
            budget,
            seed,
            method,
            n1,
            n2,
        } => cmd_optimize(
            &out,
            family,
            *m,
            *budget,
            pick(*seed, cfg.seed, 42),
            method,
            pick(*n1, cfg.n1, 300),
            pick(*n2, cfg.n2, 300),
        ),
        Command::SweepPsi { count } => cmd_sweep_psi(&out, *count),
        Command::SweepAlpha {
            alpha_min,
            alpha_max,
            count,
            n1,
            n2,
        } => cmd_sweep_alpha(
            &out,
            *alpha_min,
            *alpha_max,
            *count,
            pick(*n1, cfg.n1, 500),
            pick(*n2, cfg.n2, 500),
        ),
        Command::ZigzagConverge { psi, ms, n1, n2 } => cmd_zigzag_converge(
            &out,
            *psi,
            ms,
            pick(*n1, cfg.n1, 1000),
            pick(*n2, cfg.n2, 1000),
        ),
        Command::Mushroom { eps, n1, n2 } => cmd_mushroom(
            &out,
            eps,
            pick(*n1, cfg.n1, 1000),
            pick(*n2, cfg.n2, 1000),
        ),
        Command::Reproduce { suite } => cmd_reproduce(&out, suite),
        Command::ExportSvg { shape, width } => cmd_export_svg(&out, shape, *width),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    VERBOSE.store(cli.verbose, Ordering::Relaxed);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
