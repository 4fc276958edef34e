//! Seeded experiments: separability of optimal subsets, optimality of the
//! sweep against the baselines, and sweep timing.
//!
//! Trial `t` of the `i`-th entry of `n_values` has id `i·trials + t` and seed
//! [`trial_seed`]`(primary_seed, id)`, so every record depends only on the
//! config and its id, never on scheduling. Trials run on the worker pool
//! (see [`with_pool`]) except in the timing experiment, which is sequential.

use std::time::Instant;

use anyhow::{bail, ensure, Result};
use quadsweep_core::baselines::{
    prediction_r2, ransac_line, simulated_annealing_select, theil_sen, AnnealConfig, RansacConfig,
};
use quadsweep_core::oracle::{binomial, DEFAULT_BUDGET};
use quadsweep_core::rng::derive;
use quadsweep_core::{
    brute_force_select, check_partition, lts_brute_force, naive_quadratic_sweep, Dataset, Error,
    Frame, HullConfig, Lift, Objective, Score, SufficientStats,
};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::data::{format_seed, generate_dataset, trial_seed, DEFAULT_PRIMARY_SEED};
use crate::parallel::with_pool;
use crate::VERSION;

/// Score agreement required for a trial to count as a success.
pub const SUCCESS_TOLERANCE: f64 = 1e-9;

const ANNEAL_STREAM: u64 = 1;
const RANSAC_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Separability,
    Optimality,
    Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Sweep,
    Anneal,
    Lts,
    Ransac,
    TheilSen,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Sweep, Method::Anneal, Method::Lts, Method::Ransac, Method::TheilSen];

    /// Methods that return exactly k points get a success rate.
    pub fn fixed_k(self) -> bool {
        matches!(self, Method::Sweep | Method::Anneal | Method::Lts)
    }
}

fn ser_seed<S: Serializer>(seed: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_seed(*seed))
}

fn ser_objective<S: Serializer>(o: &Objective, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(o.name())
}

fn ser_objectives<S: Serializer>(os: &[Objective], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(os.iter().map(|o| o.name()))
}

fn ser_lift<S: Serializer>(l: &Lift, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(l.name())
}

fn ser_frame<S: Serializer>(f: &Frame, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.name())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_values: Vec<usize>,
    /// Fixed subset size; `None` means ⌈n/2⌉.
    pub k: Option<usize>,
    pub trials: usize,
    #[serde(serialize_with = "ser_seed")]
    pub primary_seed: u128,
    pub epsilon: f64,
    #[serde(serialize_with = "ser_objectives")]
    pub objectives: Vec<Objective>,
    pub methods: Vec<Method>,
    /// Timing only: trials up to this n are checked against the oracle.
    pub oracle_check_max_n: usize,
}

impl ExperimentConfig {
    pub fn separability() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Separability,
            n_values: vec![20],
            k: Some(10),
            trials: 100,
            primary_seed: DEFAULT_PRIMARY_SEED,
            epsilon: HullConfig::default().epsilon,
            objectives: vec![Objective::R, Objective::R2, Objective::Cov, Objective::Tv, Objective::Dv],
            methods: Vec::new(),
            oracle_check_max_n: 0,
        }
    }

    pub fn optimality() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Optimality,
            n_values: vec![15, 20, 25],
            k: None,
            trials: 200,
            objectives: vec![Objective::R2],
            methods: Method::ALL.to_vec(),
            ..Self::separability()
        }
    }

    pub fn timing() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Timing,
            n_values: vec![10, 14, 18, 22, 26, 30],
            k: None,
            trials: 100,
            objectives: vec![Objective::R2],
            oracle_check_max_n: 20,
            ..Self::separability()
        }
    }

    pub fn for_kind(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::Separability => Self::separability(),
            ExperimentKind::Optimality => Self::optimality(),
            ExperimentKind::Timing => Self::timing(),
        }
    }

    pub fn k_for(&self, n: usize) -> usize {
        self.k.unwrap_or(n.div_ceil(2))
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.trials >= 1, "trials must be at least 1");
        ensure!(!self.n_values.is_empty(), "no n values given");
        ensure!(self.epsilon >= 0.0, "epsilon must be nonnegative");
        for &n in &self.n_values {
            let k = self.k_for(n);
            ensure!(k <= n, "k = {k} exceeds n = {n}");
            for o in &self.objectives {
                ensure!(k >= o.min_subset(), "k = {k} is below the minimum {} for {o}", o.min_subset());
            }
        }
        match self.experiment {
            ExperimentKind::Separability => ensure!(!self.objectives.is_empty(), "no objectives given"),
            ExperimentKind::Optimality | ExperimentKind::Timing => {
                ensure!(
                    self.objectives == [Objective::R2],
                    "the {:?} experiment is defined for r2 only",
                    self.experiment
                )
            }
        }
        if self.experiment == ExperimentKind::Optimality {
            ensure!(!self.methods.is_empty(), "no methods given");
        }
        Ok(())
    }

    fn trial_id(&self, n_index: usize, t: usize) -> u64 {
        (n_index * self.trials + t) as u64
    }
}

fn elapsed_ns(start: Instant) -> u64 {
    start.elapsed().as_nanos().min(u64::MAX as u128) as u64
}

fn r2_of(data: &Dataset, indices: &[usize]) -> Result<Option<f64>> {
    if indices.len() < Objective::R2.min_subset() {
        return Ok(None);
    }
    let s = SufficientStats::from_subset(data, indices)?;
    Ok(Objective::R2.score_unchecked(&s).value())
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn median(values: &[f64]) -> Option<f64> {
    let mut v = values.to_vec();
    quadsweep_core::baselines::median(&mut v)
}

// ---------------------------------------------------------------- separability

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityRecord {
    pub trial_id: u64,
    #[serde(serialize_with = "ser_seed")]
    pub seed_128: u128,
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_objective")]
    pub objective: Objective,
    #[serde(serialize_with = "ser_lift")]
    pub lift: Lift,
    #[serde(serialize_with = "ser_frame")]
    pub frame: Frame,
    pub separable: bool,
    pub distance_sq: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityCell {
    #[serde(serialize_with = "ser_objective")]
    pub objective: Objective,
    #[serde(serialize_with = "ser_lift")]
    pub lift: Lift,
    #[serde(serialize_with = "ser_frame")]
    pub frame: Frame,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub separable: usize,
    pub success_rate: f64,
    pub min_distance_sq: f64,
    pub max_gap: f64,
    pub nonconverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityExperiment {
    pub version: &'static str,
    pub config: ExperimentConfig,
    /// One cell per objective × {L5, L4}, each lifted in the objective's frame.
    pub cells: Vec<SeparabilityCell>,
    /// Extra cells lifting in the raw (x, y) frame where that differs.
    pub diagnostics: Vec<SeparabilityCell>,
    pub trials: Vec<SeparabilityRecord>,
}

fn summarize_separability(records: &[&SeparabilityRecord], o: Objective, lift: Lift, frame: Frame, n: usize, k: usize) -> SeparabilityCell {
    let separable = records.iter().filter(|r| r.separable).count();
    SeparabilityCell {
        objective: o,
        lift,
        frame,
        n,
        k,
        trials: records.len(),
        separable,
        success_rate: separable as f64 / records.len() as f64,
        min_distance_sq: records.iter().map(|r| r.distance_sq).fold(f64::INFINITY, f64::min),
        max_gap: records.iter().map(|r| r.gap).fold(0.0, f64::max),
        nonconverged: records.iter().filter(|r| !r.converged).count(),
    }
}

/// For every trial and objective: brute-force the optimal subset, then test
/// whether it is linearly separable from its complement under L5 and L4.
pub fn run_separability_experiment(cfg: &ExperimentConfig) -> Result<SeparabilityExperiment> {
    cfg.validate()?;
    ensure!(cfg.experiment == ExperimentKind::Separability, "not a separability config");
    let hull = HullConfig {
        epsilon: cfg.epsilon,
        ..HullConfig::default()
    };
    const LIFTS: [Lift; 2] = [Lift::L5, Lift::L4];

    let mut records = Vec::new();
    for (ni, &n) in cfg.n_values.iter().enumerate() {
        let k = cfg.k_for(n);
        let per_trial: Vec<Result<Vec<SeparabilityRecord>>> = with_pool(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let trial_id = cfg.trial_id(ni, t);
                    let seed = trial_seed(cfg.primary_seed, trial_id);
                    let data = generate_dataset(seed, n)?;
                    let mut out = Vec::new();
                    for &o in &cfg.objectives {
                        let truth = brute_force_select(&data, k, o)?;
                        let mut frames = vec![o.frame()];
                        if o.frame() != Frame::Identity {
                            frames.push(Frame::Identity);
                        }
                        for &frame in &frames {
                            let framed = data.in_frame(frame);
                            for lift in LIFTS {
                                // raw-frame diagnostics only where the objective's lift applies
                                if frame != o.frame() && lift != o.lift() {
                                    continue;
                                }
                                let start = Instant::now();
                                let rep = check_partition(&framed, &truth.indices, lift, &hull)?;
                                out.push(SeparabilityRecord {
                                    trial_id,
                                    seed_128: seed,
                                    n,
                                    k,
                                    objective: o,
                                    lift,
                                    frame,
                                    separable: rep.separable,
                                    distance_sq: rep.distance_sq,
                                    gap: rep.gap,
                                    iterations: rep.iterations,
                                    converged: rep.converged,
                                    wall_time_ns: elapsed_ns(start),
                                });
                            }
                        }
                    }
                    Ok(out)
                })
                .collect()
        })?;
        for r in per_trial {
            records.extend(r?);
        }
    }

    let mut cells = Vec::new();
    let mut diagnostics = Vec::new();
    for &n in &cfg.n_values {
        let k = cfg.k_for(n);
        for &o in &cfg.objectives {
            for lift in LIFTS {
                for frame in [o.frame(), Frame::Identity] {
                    let rs: Vec<_> = records
                        .iter()
                        .filter(|r| r.n == n && r.objective == o && r.lift == lift && r.frame == frame)
                        .collect();
                    if rs.is_empty() {
                        continue;
                    }
                    let cell = summarize_separability(&rs, o, lift, frame, n, k);
                    if frame == o.frame() {
                        cells.push(cell);
                    } else {
                        diagnostics.push(cell);
                    }
                    if o.frame() == Frame::Identity {
                        break;
                    }
                }
            }
        }
    }
    Ok(SeparabilityExperiment {
        version: VERSION,
        config: cfg.clone(),
        cells,
        diagnostics,
        trials: records,
    })
}

// ------------------------------------------------------------------ optimality

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    #[serde(serialize_with = "ser_seed")]
    pub seed_128: u128,
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_objective")]
    pub objective: Objective,
    pub method: Method,
    /// Omitted for methods without a fixed-size output.
    pub success: Option<bool>,
    /// Objective value of the method's output over the optimum; `None` when
    /// the output has no valid score.
    pub score_ratio: Option<f64>,
    /// Line-fitting methods only: R² of the fitted line's predictions over
    /// the whole dataset (`1 − SSE/SST`, may be negative), over the optimum.
    pub prediction_ratio: Option<f64>,
    pub wall_time_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityCell {
    pub method: Method,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub success_rate: Option<f64>,
    pub mean_score_ratio: Option<f64>,
    /// Trials that contributed to `mean_score_ratio`.
    pub ratio_trials: usize,
    pub mean_prediction_ratio: Option<f64>,
    pub mean_wall_time_ns: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityExperiment {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub cells: Vec<OptimalityCell>,
    pub notices: Vec<String>,
    pub trials: Vec<TrialRecord>,
}

impl OptimalityExperiment {
    pub fn cell(&self, method: Method, n: usize) -> Option<&OptimalityCell> {
        self.cells.iter().find(|c| c.method == method && c.n == n)
    }
}

fn optimality_trial(cfg: &ExperimentConfig, trial_id: u64, n: usize, k: usize) -> Result<Vec<TrialRecord>> {
    let seed = trial_seed(cfg.primary_seed, trial_id);
    let data = generate_dataset(seed, n)?;
    let objective = Objective::R2;
    let optimum = match brute_force_select(&data, k, objective)?.score {
        Score::Valid(v) => v,
        Score::Invalid => bail!("trial {trial_id}: no valid subset"),
    };
    let mut out = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let start = Instant::now();
        let (score, prediction, subset_size_exact) = match method {
            Method::Sweep => (naive_quadratic_sweep(&data, k, objective)?.score.value(), None, true),
            Method::Anneal => {
                let acfg = AnnealConfig::with_seed(derive(seed, ANNEAL_STREAM));
                (simulated_annealing_select(&data, k, objective, &acfg)?.score.value(), None, true)
            }
            Method::Lts => {
                let lts = lts_brute_force(&data, k)?;
                (r2_of(&data, &lts.indices)?, None, true)
            }
            Method::Ransac => {
                let rcfg = RansacConfig::new(k, derive(seed, RANSAC_STREAM));
                let fit = ransac_line(&data, &rcfg)?;
                let prediction = prediction_r2(&data, fit.slope, fit.intercept);
                (r2_of(&data, &fit.consensus)?, prediction, false)
            }
            Method::TheilSen => {
                // no subset: the score is the line's prediction R² on all points
                let (m, c) = theil_sen(&data)?;
                let prediction = prediction_r2(&data, m, c);
                (prediction, prediction, false)
            }
        };
        let wall_time_ns = elapsed_ns(start);
        let success = subset_size_exact.then(|| score.is_some_and(|s| (s - optimum).abs() <= SUCCESS_TOLERANCE));
        out.push(TrialRecord {
            trial_id,
            seed_128: seed,
            n,
            k,
            objective,
            method,
            success,
            score_ratio: score.map(|s| s / optimum),
            prediction_ratio: prediction.map(|p| p / optimum),
            wall_time_ns,
        });
    }
    Ok(out)
}

/// Every method against the brute-force R² optimum on the same instances.
pub fn run_optimality_experiment(cfg: &ExperimentConfig) -> Result<OptimalityExperiment> {
    cfg.validate()?;
    ensure!(cfg.experiment == ExperimentKind::Optimality, "not an optimality config");
    let mut records = Vec::new();
    let mut cells = Vec::new();
    let mut notices = Vec::new();
    for (ni, &n) in cfg.n_values.iter().enumerate() {
        let k = cfg.k_for(n);
        let subsets = binomial(n, k);
        if subsets > DEFAULT_BUDGET {
            let err = Error::BudgetExceeded {
                subsets,
                budget: DEFAULT_BUDGET,
            };
            notices.push(format!("n = {n}, k = {k} skipped: {err}"));
            continue;
        }
        let per_trial: Vec<Result<Vec<TrialRecord>>> = with_pool(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| optimality_trial(cfg, cfg.trial_id(ni, t), n, k))
                .collect()
        })?;
        let mut batch = Vec::new();
        for r in per_trial {
            batch.extend(r?);
        }
        for &method in &cfg.methods {
            let rs: Vec<&TrialRecord> = batch.iter().filter(|r| r.method == method).collect();
            let successes = rs.iter().filter(|r| r.success == Some(true)).count();
            let ratios: Vec<f64> = rs.iter().filter_map(|r| r.score_ratio).collect();
            cells.push(OptimalityCell {
                method,
                n,
                k,
                trials: rs.len(),
                success_rate: method.fixed_k().then(|| successes as f64 / rs.len() as f64),
                mean_score_ratio: mean(ratios.iter().copied()),
                ratio_trials: ratios.len(),
                mean_prediction_ratio: mean(rs.iter().filter_map(|r| r.prediction_ratio)),
                mean_wall_time_ns: mean(rs.iter().map(|r| r.wall_time_ns as f64)).unwrap_or(0.0),
            });
        }
        records.extend(batch);
    }
    Ok(OptimalityExperiment {
        version: VERSION,
        config: cfg.clone(),
        cells,
        notices,
        trials: records,
    })
}

// ---------------------------------------------------------------------- timing

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRecord {
    pub trial_id: u64,
    #[serde(serialize_with = "ser_seed")]
    pub seed_128: u128,
    pub n: usize,
    pub k: usize,
    pub wall_time_ns: u64,
    /// Whether the sweep's score matched the oracle; `None` when unchecked.
    pub oracle_match: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingCell {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub oracle_checked: usize,
    pub oracle_matches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingExperiment {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub cells: Vec<TimingCell>,
    /// Least-squares slope of ln(mean time) against ln(n).
    pub loglog_slope: Option<f64>,
    pub trials: Vec<TimingRecord>,
}

impl TimingExperiment {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,k,trials,mean_ms,median_ms,min_ms,max_ms,oracle_checked,oracle_matches\n");
        for c in &self.cells {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                c.n, c.k, c.trials, c.mean_ms, c.median_ms, c.min_ms, c.max_ms, c.oracle_checked, c.oracle_matches
            ));
        }
        s
    }

    /// Number of adjacent pairs of n values whose mean time decreases.
    pub fn inversions(&self) -> usize {
        self.cells.windows(2).filter(|w| w[1].mean_ms <= w[0].mean_ms).count()
    }
}

/// Ordinary least-squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let mut s = SufficientStats::EMPTY;
    for (&x, &y) in xs.iter().zip(ys) {
        s.add(x, y);
    }
    quadsweep_core::stats::least_squares_line(&s).map(|(m, _)| m)
}

/// Times the sequential sweep on R² for each n. Runs one untimed warm-up per
/// n, and checks trials up to `oracle_check_max_n` against brute force
/// outside the timed region.
pub fn run_timing_experiment(cfg: &ExperimentConfig) -> Result<TimingExperiment> {
    cfg.validate()?;
    ensure!(cfg.experiment == ExperimentKind::Timing, "not a timing config");
    let objective = Objective::R2;
    let mut records = Vec::new();
    let mut cells = Vec::new();
    for (ni, &n) in cfg.n_values.iter().enumerate() {
        let k = cfg.k_for(n);
        let warmup = generate_dataset(trial_seed(cfg.primary_seed, cfg.trial_id(ni, 0)), n)?;
        std::hint::black_box(naive_quadratic_sweep(&warmup, k, objective)?);

        let mut times = Vec::with_capacity(cfg.trials);
        let (mut checked, mut matches) = (0, 0);
        for t in 0..cfg.trials {
            let trial_id = cfg.trial_id(ni, t);
            let seed = trial_seed(cfg.primary_seed, trial_id);
            let data = generate_dataset(seed, n)?;
            let start = Instant::now();
            let result = std::hint::black_box(naive_quadratic_sweep(&data, k, objective)?);
            let wall_time_ns = elapsed_ns(start);
            let oracle_match = if n <= cfg.oracle_check_max_n {
                let truth = brute_force_select(&data, k, objective)?;
                let ok = match (result.score.value(), truth.score.value()) {
                    (Some(a), Some(b)) => (a - b).abs() <= SUCCESS_TOLERANCE,
                    (None, None) => true,
                    _ => false,
                };
                checked += 1;
                matches += ok as usize;
                Some(ok)
            } else {
                None
            };
            times.push(wall_time_ns as f64 / 1e6);
            records.push(TimingRecord {
                trial_id,
                seed_128: seed,
                n,
                k,
                wall_time_ns,
                oracle_match,
            });
        }
        cells.push(TimingCell {
            n,
            k,
            trials: cfg.trials,
            mean_ms: mean(times.iter().copied()).unwrap_or(0.0),
            median_ms: median(&times).unwrap_or(0.0),
            min_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
            max_ms: times.iter().copied().fold(0.0, f64::max),
            oracle_checked: checked,
            oracle_matches: matches,
        });
    }
    let lx: Vec<f64> = cells.iter().map(|c| (c.n as f64).ln()).collect();
    let ly: Vec<f64> = cells.iter().map(|c| c.mean_ms.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(TimingExperiment {
        version: VERSION,
        config: cfg.clone(),
        cells,
        loglog_slope: ols_slope(&lx, &ly),
        trials: records,
    })
}
