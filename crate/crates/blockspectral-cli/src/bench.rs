//! The benchmark runner: sweep a perturbation grid or a twin coupling,
//! run the requested algorithms on every instance, and tabulate errors.
//!
//! Trials run in parallel but the output order never depends on the
//! schedule: records are keyed by grid and trial index, sorted, and only
//! then written. Each trial derives its own seed from the base seed and
//! its index, so a single trial can be reproduced without rerunning the
//! sweep. A trial that fails is recorded with its error category and the
//! sweep keeps going.

#[cfg(test)]
use std::io::BufRead;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use blockspectral::algo::{acyclicity_score, bas, bcs, rank_blocks, DetectOptions};
use blockspectral::baselines::{bib_cluster, svd_cluster};
use blockspectral::embedding::FilterMode;
use blockspectral::kmeans::KmeansOptions;
use blockspectral::metrics::{block_membership_error, nmi};
use blockspectral::synth::{
    combine_twin_sbm, sample_sbm, uniform_rho, union_perturb, LabeledGraph, SbmParams,
};

use crate::artifacts::{baseline_assignment, sig17};
use crate::error::{categorize, CliError, CliResult};

pub const RECORD_HEADER: &str = "command,family,n,k,epsilon,alpha,seed,algorithm,stat,status,\
                                 block_membership_error,one_minus_nmi,c_a,runtime_ms,version";

/// One CSV row: what ran, on which instance, and how it scored.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub command: String,
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    /// The derived per-trial seed; empty on aggregate rows.
    pub seed: Option<u64>,
    pub algorithm: String,
    /// `trial` or `median`.
    pub stat: String,
    /// `ok`, an error category, or `failed` for an aggregate with no
    /// successful trials.
    pub status: String,
    pub error: Option<f64>,
    pub one_minus_nmi: Option<f64>,
    pub c_a: Option<f64>,
    pub runtime_ms: Option<f64>,
    pub version: String,
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(sig17).unwrap_or_default()
}

fn opt_u64(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn records_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.command,
            r.family,
            r.n,
            r.k,
            opt_f64(r.epsilon),
            opt_f64(r.alpha),
            opt_u64(r.seed),
            r.algorithm,
            r.stat,
            r.status,
            opt_f64(r.error),
            opt_f64(r.one_minus_nmi),
            opt_f64(r.c_a),
            opt_f64(r.runtime_ms),
            r.version,
        ));
    }
    out
}

#[cfg(test)]
fn parse_opt_f64(field: &str, what: &str, row: usize) -> CliResult<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| CliError::parse(format!("record row {row}: bad {what} {field:?}")))
}

#[cfg(test)]
pub fn parse_records_csv(reader: impl BufRead) -> CliResult<Vec<RunRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::parse(format!("record header: {e}")))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::parse(format!("record header missing column {name:?}")))
    };
    let cols = [
        col("command")?,
        col("family")?,
        col("n")?,
        col("k")?,
        col("epsilon")?,
        col("alpha")?,
        col("seed")?,
        col("algorithm")?,
        col("stat")?,
        col("status")?,
        col("block_membership_error")?,
        col("one_minus_nmi")?,
        col("c_a")?,
        col("runtime_ms")?,
        col("version")?,
    ];
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::parse(format!("record row {row}: {e}")))?;
        let field = |c: usize| record.get(cols[c]).unwrap_or("").trim().to_string();
        let n: usize = field(2)
            .parse()
            .map_err(|_| CliError::parse(format!("record row {row}: bad n")))?;
        let k: usize = field(3)
            .parse()
            .map_err(|_| CliError::parse(format!("record row {row}: bad k")))?;
        let seed = {
            let s = field(6);
            if s.is_empty() {
                None
            } else {
                Some(
                    s.parse()
                        .map_err(|_| CliError::parse(format!("record row {row}: bad seed")))?,
                )
            }
        };
        out.push(RunRecord {
            command: field(0),
            family: field(1),
            n,
            k,
            epsilon: parse_opt_f64(&field(4), "epsilon", row)?,
            alpha: parse_opt_f64(&field(5), "alpha", row)?,
            seed,
            algorithm: field(7),
            stat: field(8),
            status: field(9),
            error: parse_opt_f64(&field(10), "error", row)?,
            one_minus_nmi: parse_opt_f64(&field(11), "one_minus_nmi", row)?,
            c_a: parse_opt_f64(&field(12), "c_a", row)?,
            runtime_ms: parse_opt_f64(&field(13), "runtime_ms", row)?,
            version: field(14),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    Cycle,
    Acyclic,
}

impl BenchFamily {
    fn token(self) -> &'static str {
        match self {
            BenchFamily::Cycle => "cycle",
            BenchFamily::Acyclic => "acyclic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgorithm {
    Bcs,
    Bas,
    Bib,
    Svd,
}

impl BenchAlgorithm {
    fn token(self) -> &'static str {
        match self {
            BenchAlgorithm::Bcs => "bcs",
            BenchAlgorithm::Bas => "bas",
            BenchAlgorithm::Bib => "bib",
            BenchAlgorithm::Svd => "svd",
        }
    }
}

/// Either a curve over perturbation strengths or a single twin-coupling
/// point.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchMode {
    EpsGrid(Vec<f64>),
    TwinAlpha(f64),
}

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub family: BenchFamily,
    pub mode: BenchMode,
    /// Node count; in twin mode this is the size of each half.
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub rho: Vec<f64>,
    pub seeds: usize,
    pub base_seed: u64,
    pub algorithms: Vec<BenchAlgorithm>,
    pub filter: FilterMode,
    pub tol: f64,
    pub restarts: usize,
    pub dense_cap: usize,
    pub timings: bool,
}

fn median_of(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn median_field(trials: &[&RunRecord], pick: fn(&RunRecord) -> Option<f64>) -> Option<f64> {
    let values: Vec<f64> = trials.iter().filter_map(|r| pick(r)).collect();
    (!values.is_empty()).then(|| median_of(&values))
}

/// Labels from one algorithm on one instance, reduced to the three
/// reported metrics.
fn run_algorithm(
    cfg: &BenchmarkConfig,
    alg: BenchAlgorithm,
    instance: &LabeledGraph,
    seed: u64,
) -> blockspectral::Result<(f64, f64, f64)> {
    let g = &instance.graph;
    let k = cfg.k;
    let detect = DetectOptions {
        seed,
        tol: cfg.tol,
        filter: cfg.filter,
        kmeans_restarts: cfg.restarts,
        ..Default::default()
    };
    let kopts = KmeansOptions { restarts: cfg.restarts, max_iter: 300, seed };
    let assignment = match alg {
        BenchAlgorithm::Bcs => bcs(g, k, &detect)?,
        BenchAlgorithm::Bas => bas(g, k, &detect)?,
        BenchAlgorithm::Bib => {
            let r = bib_cluster(g, k, 0.5, &kopts, cfg.dense_cap)?;
            baseline_assignment(r.labels, k, "bib", seed)
        }
        BenchAlgorithm::Svd => {
            let d = match cfg.family {
                BenchFamily::Cycle => k,
                BenchFamily::Acyclic => (k - 1).max(1),
            };
            let r = svd_cluster(g, d, k, &kopts, cfg.dense_cap)?;
            baseline_assignment(r.labels, k, "svd", seed)
        }
    };
    let err = block_membership_error(&instance.labels, &assignment.labels, k)?;
    let one_minus = 1.0 - nmi(&instance.labels, &assignment.labels)?;
    let ranked = rank_blocks(g, &assignment)?;
    let c_a = acyclicity_score(g, &ranked.labels)?;
    Ok((err, one_minus, c_a))
}

fn blank_record(cfg: &BenchmarkConfig, point: (Option<f64>, Option<f64>)) -> RunRecord {
    let n_total = match cfg.mode {
        BenchMode::EpsGrid(_) => cfg.n,
        BenchMode::TwinAlpha(_) => 2 * cfg.n,
    };
    RunRecord {
        command: "benchmark".into(),
        family: cfg.family.token().into(),
        n: n_total,
        k: cfg.k,
        epsilon: point.0,
        alpha: point.1,
        seed: None,
        algorithm: String::new(),
        stat: "trial".into(),
        status: "ok".into(),
        error: None,
        one_minus_nmi: None,
        c_a: None,
        runtime_ms: None,
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

/// One instance, all algorithms, in configuration order.
fn run_trial(
    cfg: &BenchmarkConfig,
    params: &SbmParams,
    point: (Option<f64>, Option<f64>),
    trial_seed: u64,
) -> Vec<RunRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let graph_seed = rng.random::<u64>();
    let q_seed = rng.random::<u64>();
    let overlay_seed = rng.random::<u64>();
    let instance = match point {
        (Some(eps), None) => sample_sbm(params, cfg.n, graph_seed).and_then(|base| {
            let noise = SbmParams::random_noise(cfg.k, eps, uniform_rho(cfg.k), q_seed)?;
            union_perturb(&base, &noise, overlay_seed)
        }),
        (None, Some(alpha)) => combine_twin_sbm(params, cfg.n, alpha, graph_seed),
        _ => unreachable!("a grid point is either an epsilon or an alpha"),
    };
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let mut record = blank_record(cfg, point);
            record.seed = Some(trial_seed);
            record.algorithm = alg.token().into();
            match &instance {
                Err(e) => record.status = categorize(e).token().into(),
                Ok(instance) => {
                    let started = Instant::now();
                    match run_algorithm(cfg, alg, instance, trial_seed) {
                        Ok((err, one_minus, c_a)) => {
                            record.error = Some(err);
                            record.one_minus_nmi = Some(one_minus);
                            record.c_a = Some(c_a);
                            if cfg.timings {
                                record.runtime_ms =
                                    Some(started.elapsed().as_secs_f64() * 1000.0);
                            }
                        }
                        Err(e) => {
                            eprintln!(
                                "warning: {} on trial seed {trial_seed} failed: {e}",
                                alg.token()
                            );
                            record.status = categorize(&e).token().into();
                        }
                    }
                }
            }
            record
        })
        .collect()
}

/// Runs the whole sweep and returns trial rows in (grid point, trial,
/// algorithm) order followed by one median row per (grid point,
/// algorithm).
pub fn run_benchmark(cfg: &BenchmarkConfig) -> CliResult<Vec<RunRecord>> {
    if cfg.seeds == 0 {
        return Err(CliError::usage("benchmark needs at least one seed"));
    }
    if cfg.algorithms.is_empty() {
        return Err(CliError::usage("benchmark needs at least one algorithm"));
    }
    let grid: Vec<(Option<f64>, Option<f64>)> = match &cfg.mode {
        BenchMode::EpsGrid(eps) => {
            if eps.is_empty() {
                return Err(CliError::usage("the perturbation grid is empty"));
            }
            eps.iter().map(|&e| (Some(e), None)).collect()
        }
        BenchMode::TwinAlpha(a) => vec![(None, Some(*a))],
    };
    let params = match cfg.family {
        BenchFamily::Cycle => SbmParams::cycle(cfg.k, cfg.p, cfg.rho.clone())?,
        BenchFamily::Acyclic => SbmParams::acyclic(cfg.k, cfg.p, cfg.rho.clone())?,
    };
    let trial_seeds: Vec<u64> = {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed);
        (0..cfg.seeds).map(|_| rng.random()).collect()
    };

    let tasks: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|g| (0..cfg.seeds).map(move |t| (g, t)))
        .collect();
    let mut finished: Vec<(usize, usize, Vec<RunRecord>)> = tasks
        .par_iter()
        .map(|&(g, t)| (g, t, run_trial(cfg, &params, grid[g], trial_seeds[t])))
        .collect();
    finished.sort_by_key(|&(g, t, _)| (g, t));

    let mut records: Vec<RunRecord> = Vec::new();
    let mut groups: Vec<Vec<RunRecord>> = vec![Vec::new(); grid.len() * cfg.algorithms.len()];
    for (g, _, trial_records) in finished {
        for (a, record) in trial_records.into_iter().enumerate() {
            groups[g * cfg.algorithms.len() + a].push(record.clone());
            records.push(record);
        }
    }
    for (slot, group) in groups.iter().enumerate() {
        let g = slot / cfg.algorithms.len();
        let a = slot % cfg.algorithms.len();
        let ok: Vec<&RunRecord> = group.iter().filter(|r| r.status == "ok").collect();
        let mut agg = blank_record(cfg, grid[g]);
        agg.algorithm = cfg.algorithms[a].token().into();
        agg.stat = "median".into();
        if ok.is_empty() {
            agg.status = "failed".into();
        } else {
            agg.error = median_field(&ok, |r| r.error);
            agg.one_minus_nmi = median_field(&ok, |r| r.one_minus_nmi);
            agg.c_a = median_field(&ok, |r| r.c_a);
            agg.runtime_ms = median_field(&ok, |r| r.runtime_ms);
        }
        records.push(agg);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use blockspectral::synth::benchmark_rho;

    fn small_config(mode: BenchMode, algorithms: Vec<BenchAlgorithm>) -> BenchmarkConfig {
        BenchmarkConfig {
            family: BenchFamily::Cycle,
            mode,
            n: 45,
            k: 3,
            p: 0.9,
            rho: uniform_rho(3),
            seeds: 2,
            base_seed: 11,
            algorithms,
            filter: FilterMode::PositiveImaginary,
            tol: 1e-8,
            restarts: 10,
            dense_cap: 2000,
            timings: false,
        }
    }

    #[test]
    fn record_csv_round_trip() {
        let mut a = RunRecord {
            command: "benchmark".into(),
            family: "cycle".into(),
            n: 100,
            k: 4,
            epsilon: Some(0.35),
            alpha: None,
            seed: Some(u64::MAX),
            algorithm: "bcs".into(),
            stat: "trial".into(),
            status: "ok".into(),
            error: Some(1.0 / 3.0),
            one_minus_nmi: Some(0.0),
            c_a: Some(0.75),
            runtime_ms: None,
            version: "0.1.0".into(),
        };
        let mut b = a.clone();
        b.stat = "median".into();
        b.seed = None;
        b.status = "failed".into();
        b.error = None;
        a.runtime_ms = Some(12.5);
        let records = vec![a, b];
        let parsed = parse_records_csv(records_csv(&records).as_bytes()).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn record_count_is_grid_times_seeds_times_algorithms_plus_medians() {
        let cfg = small_config(
            BenchMode::EpsGrid(vec![0.0, 0.3]),
            vec![BenchAlgorithm::Bcs, BenchAlgorithm::Svd],
        );
        let records = run_benchmark(&cfg).unwrap();
        assert_eq!(records.len(), 2 * 2 * 2 + 2 * 2);
        assert_eq!(records.iter().filter(|r| r.stat == "trial").count(), 8);
        assert_eq!(records.iter().filter(|r| r.stat == "median").count(), 4);
    }

    #[test]
    fn unperturbed_cycle_error_column_is_zero() {
        let cfg = small_config(BenchMode::EpsGrid(vec![0.0]), vec![BenchAlgorithm::Bcs]);
        let records = run_benchmark(&cfg).unwrap();
        for r in &records {
            assert_eq!(r.status, "ok");
            assert_eq!(r.error, Some(0.0), "{:?}", r);
        }
    }

    #[test]
    fn same_config_same_records() {
        let cfg = small_config(BenchMode::EpsGrid(vec![0.0, 0.5]), vec![BenchAlgorithm::Bcs]);
        assert_eq!(run_benchmark(&cfg).unwrap(), run_benchmark(&cfg).unwrap());
    }

    #[test]
    fn twin_cycle_table_row_is_recovered_by_bcs() {
        let cfg = BenchmarkConfig {
            family: BenchFamily::Cycle,
            mode: BenchMode::TwinAlpha(0.1),
            n: 500,
            k: 8,
            p: 0.7,
            rho: benchmark_rho(),
            seeds: 1,
            base_seed: 5,
            algorithms: vec![BenchAlgorithm::Bcs],
            filter: FilterMode::AllK,
            tol: 1e-8,
            restarts: 10,
            dense_cap: 2000,
            timings: false,
        };
        let records = run_benchmark(&cfg).unwrap();
        let trial = &records[0];
        assert_eq!(trial.n, 1000);
        assert_eq!(trial.status, "ok");
        assert!(trial.error.unwrap() <= 0.02, "error {:?}", trial.error);
    }
}
