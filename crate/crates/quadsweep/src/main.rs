use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use quadsweep::data::{generate_dataset, parse_hex_seed, parse_seed, read_csv_file, write_csv, write_csv_file};
use quadsweep::experiment::{
    run_optimality_experiment, run_separability_experiment, run_timing_experiment, ExperimentConfig, ExperimentKind,
    Method,
};
use quadsweep::parallel::{run_parallel, with_pool};
use quadsweep_core::oracle::{brute_force_select_within, lts_brute_force_within, DEFAULT_BUDGET};
use quadsweep_core::{
    check_partition, Frame, HullConfig, Hyperplane, Lift, Objective, QuadraticSweep, SweepResult,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "quadsweep", version = quadsweep::VERSION, about = "Exact k-subset selection by conic separation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal k-subset by hyperplane enumeration in lift space.
    Sweep(SweepArgs),
    /// Optimal k-subset (or least trimmed squares) by exhaustive search.
    Oracle(OracleArgs),
    /// Test whether a subset is linearly separable from its complement after lifting.
    Separability(SeparabilityArgs),
    /// Run a seeded experiment and write a JSON report.
    Experiment(ExperimentArgs),
    /// Write a seeded uniform dataset as CSV.
    Gen(GenArgs),
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse().map_err(|_| format!("unknown objective {s:?} (expected var, tv, dv, cov, r or r2)"))
}

fn parse_lift(s: &str) -> Result<Lift, String> {
    s.parse().map_err(|_| format!("unknown lift {s:?} (expected l2, l4 or l5)"))
}

fn parse_frame(s: &str) -> Result<Frame, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "xy" => Ok(Frame::Identity),
        "uv" => Ok(Frame::SumDifference),
        _ => Err(format!("unknown frame {s:?} (expected xy or uv)")),
    }
}

#[derive(Args)]
struct InputArgs {
    /// CSV with header `x,y`.
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    io: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "r2", value_parser = parse_objective)]
    objective: Objective,
    /// Override the objective's lift.
    #[arg(long, value_parser = parse_lift)]
    lift: Option<Lift>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    io: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "r2", value_parser = parse_objective)]
    objective: Objective,
    /// Minimize the least-squares residual instead (ignores --objective).
    #[arg(long)]
    lts: bool,
    /// Largest number of subsets to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args)]
struct SeparabilityArgs {
    #[command(flatten)]
    io: InputArgs,
    #[arg(long, default_value = "l5", value_parser = parse_lift)]
    lift: Lift,
    /// Coordinates to lift in; defaults to the objective's, else xy.
    #[arg(long, value_parser = parse_frame)]
    frame: Option<Frame>,
    /// 1-based inlier indices, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["k", "objective"])]
    inliers: Option<Vec<usize>>,
    /// Use the brute-force optimal k-subset of --objective as the inliers.
    #[arg(long, requires = "objective")]
    k: Option<usize>,
    #[arg(long, value_parser = parse_objective)]
    objective: Option<Objective>,
    #[arg(long, default_value_t = HullConfig::default().epsilon)]
    epsilon: f64,
    #[arg(long, default_value_t = HullConfig::default().max_iter)]
    max_iter: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    name: ExperimentKind,
    /// Trials per cell (default depends on the experiment).
    #[arg(long)]
    trials: Option<usize>,
    /// Primary seed, decimal or 0x-prefixed hex.
    #[arg(long, default_value = "123", value_parser = parse_seed_arg)]
    seed: u128,
    /// Comma-separated n values.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Fixed subset size instead of ⌈n/2⌉.
    #[arg(long)]
    k: Option<usize>,
    /// Separability only: comma-separated objectives.
    #[arg(long, value_delimiter = ',', value_parser = parse_objective)]
    objectives: Option<Vec<Objective>>,
    /// Optimality only: comma-separated methods.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// JSON report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Timing only: per-n summary CSV path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_seed_arg(s: &str) -> Result<u128, String> {
    parse_seed(s).map_err(|e| format!("{e:#}"))
}

fn parse_hex_seed_arg(s: &str) -> Result<u128, String> {
    parse_hex_seed(s).map_err(|e| format!("{e:#}"))
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// 128-bit seed in hex.
    #[arg(long, value_parser = parse_hex_seed_arg)]
    seed: u128,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BoundaryOut {
    lift: &'static str,
    frame: &'static str,
    coordinates: &'static [&'static str],
    w: Vec<f64>,
    b: f64,
}

impl BoundaryOut {
    fn new(h: &Hyperplane, lift: Lift, frame: Frame) -> Self {
        BoundaryOut {
            lift: lift.name(),
            frame: frame.name(),
            coordinates: lift.coordinate_names(),
            w: h.w().to_vec(),
            b: h.b,
        }
    }

    fn frame_note(&self) -> &'static str {
        match self.frame {
            "uv" => " where x, y stand for u = x + y, v = x - y",
            _ => "",
        }
    }
}

#[derive(Serialize)]
struct SelectionOut {
    n: usize,
    k: usize,
    objective: &'static str,
    /// 1-based.
    indices: Vec<usize>,
    score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary: Option<BoundaryOut>,
    tuples_examined: u64,
    candidates_scored: u64,
    degenerate_tuples: u64,
}

impl SelectionOut {
    fn new(n: usize, k: usize, objective: &'static str, r: &SweepResult, boundary: Option<BoundaryOut>) -> Self {
        SelectionOut {
            n,
            k,
            objective,
            indices: r.indices.iter().map(|i| i + 1).collect(),
            score: r.score.value(),
            boundary,
            tuples_examined: r.tuples_examined,
            candidates_scored: r.candidates_scored,
            degenerate_tuples: r.degenerate_tuples,
        }
    }

    fn print_text(&self, out: &mut impl Write) -> Result<()> {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        writeln!(out, "indices: {}", idx.join(" "))?;
        match self.score {
            Some(s) => writeln!(out, "{}: {s}", self.objective)?,
            None => writeln!(out, "{}: invalid", self.objective)?,
        }
        if let Some(b) = &self.boundary {
            writeln!(out, "boundary ({} over {}{}):", b.lift, b.coordinates.join(", "), b.frame_note())?;
            let w: Vec<String> = b.w.iter().map(|v| v.to_string()).collect();
            writeln!(out, "  w = [{}]", w.join(", "))?;
            writeln!(out, "  b = {}", b.b)?;
        }
        Ok(())
    }
}

fn emit<T: Serialize>(value: &T, json: bool, text: impl FnOnce(&mut std::io::StdoutLock) -> Result<()>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if json {
        serde_json::to_writer_pretty(&mut out, value)?;
        writeln!(out)?;
    } else {
        text(&mut out)?;
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let data = read_csv_file(&args.io.input)?;
    let lift = args.lift.unwrap_or(args.objective.lift());
    let sweep = QuadraticSweep::with_lift(&data, args.k, args.objective, lift)?;
    let result = with_pool(|| run_parallel(&sweep))??;
    let boundary = result
        .boundary
        .as_ref()
        .map(|h| BoundaryOut::new(h, lift, args.objective.frame()));
    let out = SelectionOut::new(data.len(), args.k, args.objective.name(), &result, boundary);
    emit(&out, args.io.json, |w| out.print_text(w))
}

fn oracle(args: OracleArgs) -> Result<()> {
    let data = read_csv_file(&args.io.input)?;
    let (name, result) = if args.lts {
        ("lts_sse", lts_brute_force_within(&data, args.k, args.budget)?)
    } else {
        (
            args.objective.name(),
            brute_force_select_within(&data, args.k, args.objective, args.budget)?,
        )
    };
    let out = SelectionOut::new(data.len(), args.k, name, &result, None);
    emit(&out, args.io.json, |w| out.print_text(w))
}

#[derive(Serialize)]
struct SeparabilityOut {
    inliers: Vec<usize>,
    lift: &'static str,
    frame: &'static str,
    separable: bool,
    distance_sq: f64,
    gap: f64,
    iterations: usize,
    converged: bool,
    epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<BoundaryOut>,
}

fn separability(args: SeparabilityArgs) -> Result<()> {
    let data = read_csv_file(&args.io.input)?;
    let frame = args
        .frame
        .or(args.objective.map(|o| o.frame()))
        .unwrap_or(Frame::Identity);
    let inliers: Vec<usize> = match (&args.inliers, args.k, args.objective) {
        (Some(list), _, _) => {
            if let Some(&bad) = list.iter().find(|&&i| i == 0 || i > data.len()) {
                bail!("inlier index {bad} is outside 1..={}", data.len());
            }
            list.iter().map(|i| i - 1).collect()
        }
        (None, Some(k), Some(o)) => brute_force_select_within(&data, k, o, DEFAULT_BUDGET)?.indices,
        _ => bail!("give either --inliers or both --k and --objective"),
    };
    let cfg = HullConfig {
        epsilon: args.epsilon,
        max_iter: args.max_iter,
        ..HullConfig::default()
    };
    let rep = check_partition(&data.in_frame(frame), &inliers, args.lift, &cfg)?;
    let out = SeparabilityOut {
        inliers: inliers.iter().map(|i| i + 1).collect(),
        lift: args.lift.name(),
        frame: frame.name(),
        separable: rep.separable,
        distance_sq: rep.distance_sq,
        gap: rep.gap,
        iterations: rep.iterations,
        converged: rep.converged,
        epsilon: cfg.epsilon,
        witness: rep.witness.as_ref().map(|h| BoundaryOut::new(h, args.lift, frame)),
    };
    emit(&out, args.io.json, |w| {
        writeln!(w, "separable: {}", out.separable)?;
        writeln!(w, "distance_sq: {:e}", out.distance_sq)?;
        writeln!(w, "gap: {:e} after {} iterations{}", out.gap, out.iterations, if out.converged { "" } else { " (not converged)" })?;
        if let Some(b) = &out.witness {
            let w_: Vec<String> = b.w.iter().map(|v| v.to_string()).collect();
            writeln!(w, "witness over {}{}: w = [{}], b = {}", b.coordinates.join(", "), b.frame_note(), w_.join(", "), b.b)?;
        }
        Ok(())
    })
}

fn write_report<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::for_kind(args.name);
    cfg.primary_seed = args.seed;
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(n) = args.n {
        cfg.n_values = n;
    }
    if args.k.is_some() {
        cfg.k = args.k;
    }
    if let Some(o) = args.objectives {
        if args.name != ExperimentKind::Separability {
            bail!("--objectives applies to the separability experiment only");
        }
        cfg.objectives = o;
    }
    if let Some(m) = args.methods {
        if args.name != ExperimentKind::Optimality {
            bail!("--methods applies to the optimality experiment only");
        }
        cfg.methods = m;
    }
    if let Some(e) = args.epsilon {
        cfg.epsilon = e;
    }
    if args.csv.is_some() && args.name != ExperimentKind::Timing {
        bail!("--csv applies to the timing experiment only");
    }
    let out = args.out.as_deref();
    let mut err = std::io::stderr().lock();
    match args.name {
        ExperimentKind::Separability => {
            let rep = run_separability_experiment(&cfg)?;
            write_report(&rep, out)?;
            for c in rep.cells.iter().chain(&rep.diagnostics) {
                writeln!(err, "{:>4} {} [{}]  rate {:.3}  min d² {:.3e}", c.objective.name(), c.lift, c.frame.name(), c.success_rate, c.min_distance_sq)?;
            }
        }
        ExperimentKind::Optimality => {
            let rep = run_optimality_experiment(&cfg)?;
            write_report(&rep, out)?;
            for c in &rep.cells {
                let rate = c.success_rate.map_or("-".to_owned(), |r| format!("{r:.3}"));
                let ratio = c.mean_score_ratio.map_or("-".to_owned(), |r| format!("{r:.3}"));
                let pred = c.mean_prediction_ratio.map_or(String::new(), |r| format!("  prediction ratio {r:.3}"));
                writeln!(err, "{:>9?} n={:<3} success {rate:>5}  ratio {ratio}{pred}", c.method, c.n)?;
            }
            for n in &rep.notices {
                writeln!(err, "notice: {n}")?;
            }
        }
        ExperimentKind::Timing => {
            let rep = run_timing_experiment(&cfg)?;
            write_report(&rep, out)?;
            if let Some(p) = &args.csv {
                std::fs::write(p, rep.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            for c in &rep.cells {
                writeln!(err, "n={:<3} mean {:.3} ms  median {:.3} ms", c.n, c.mean_ms, c.median_ms)?;
            }
            if let Some(s) = rep.loglog_slope {
                writeln!(err, "log-log slope {s:.2}")?;
            }
        }
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<()> {
    let data = generate_dataset(args.seed, args.n)?;
    match &args.out {
        Some(p) => write_csv_file(p, &data),
        None => write_csv(std::io::stdout().lock(), &data),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => oracle(a),
        Command::Separability(a) => separability(a),
        Command::Experiment(a) => experiment(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
