//! One function per subcommand, plus the flag structures clap builds
//! them from.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write as _};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use blockspectral::algo::{
    acyclicity_score, bas, bcs, inversion_error, rank_blocks, refine_assignment, trophic_levels,
    DetectOptions, TrophicMode,
};
use blockspectral::baselines::{bib_cluster, svd_cluster};
use blockspectral::embedding::FilterMode;
use blockspectral::graph::TransitionOperator;
use blockspectral::kmeans::KmeansOptions;
use blockspectral::metrics::{block_membership_error, nmi};
use blockspectral::spectral::{top_modulus_eigenpairs, ArnoldiOptions};
use blockspectral::synth::{
    benchmark_rho, combine_twin_sbm, nested_block_cycle, sample_sbm, uniform_rho, union_perturb,
    LabeledGraph, SbmParams,
};

use crate::artifacts::{
    baseline_assignment, levels_csv, parse_scores, spectrum_csv, AssignmentDoc,
};
use crate::bench::{
    records_csv, run_benchmark, BenchAlgorithm, BenchFamily, BenchMode, BenchmarkConfig,
};
use crate::error::{Category, CliError, CliResult};
use crate::io::{
    edge_list_string, parse_as_rel, parse_edge_list, EdgeFormat, EdgeListOptions, IdMap, IdMode,
    ParsedGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Tsv,
    Csv,
    /// Any run of spaces or tabs separates fields
    Ws,
    /// CAIDA relationship lines; loading keeps only the asymmetric part
    AsRel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum IdModeArg {
    /// Ids must be the integers 0..n-1, or they are remapped with a warning
    Integer,
    /// Ids are names, interned in order of first appearance
    String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FilterArg {
    /// Cluster on eigenvectors of positive-imaginary eigenvalues only
    Posimag,
    /// Cluster on all k leading eigenvectors
    All,
}

impl From<FilterArg> for FilterMode {
    fn from(f: FilterArg) -> FilterMode {
        match f {
            FilterArg::Posimag => FilterMode::PositiveImaginary,
            FilterArg::All => FilterMode::AllK,
        }
    }
}

/// Flags shared by every command that reads a graph file.
#[derive(Debug, Clone, clap::Args)]
pub struct GraphArgs {
    /// Graph file to read
    #[arg(long)]
    pub input: PathBuf,
    /// Input format
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: FormatArg,
    /// Read a third column as the edge weight
    #[arg(long)]
    pub weighted: bool,
    /// Node id handling (not used by as-rel, which always remaps)
    #[arg(long, value_enum, default_value = "integer")]
    pub ids: IdModeArg,
}

pub fn load_graph(args: &GraphArgs) -> CliResult<ParsedGraph> {
    let file = File::open(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let reader = BufReader::new(file);
    match args.format {
        FormatArg::AsRel => {
            if args.weighted {
                return Err(CliError::usage("as-rel lines carry no weights; drop --weighted"));
            }
            let parsed = parse_as_rel(reader)?;
            Ok(ParsedGraph { graph: parsed.graph.asymmetric_part(), ids: parsed.ids })
        }
        other => parse_edge_list(
            reader,
            &EdgeListOptions {
                format: match other {
                    FormatArg::Tsv => EdgeFormat::Tab,
                    FormatArg::Csv => EdgeFormat::Comma,
                    _ => EdgeFormat::Whitespace,
                },
                weighted: args.weighted,
                id_mode: match args.ids {
                    IdModeArg::Integer => IdMode::Integer,
                    IdModeArg::String => IdMode::String,
                },
            },
        ),
    }
}

fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError { category: Category::Io, message: format!("stdout: {e}") }),
    }
}

fn read_assignment(path: &Path) -> CliResult<AssignmentDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    AssignmentDoc::from_json(&text)
}

fn resolve_rho(arg: RhoArg, k: usize) -> CliResult<Vec<f64>> {
    match arg {
        RhoArg::Uniform => Ok(uniform_rho(k)),
        RhoArg::Benchmark => {
            if k == 8 {
                Ok(benchmark_rho())
            } else {
                Err(CliError::usage("the benchmark block profile is defined for k = 8"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyArg {
    /// Blocks in a ring, every edge to the successor block
    Cycle,
    /// Blocks in a hierarchy, every edge to a later block
    Acyclic,
    /// Two coupled copies of the cycle model
    TwinCycle,
    /// Two coupled copies of the acyclic model
    TwinAcyclic,
    /// A block-cycle with extra downhill edges appended
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RhoArg {
    /// Equal block sizes
    Uniform,
    /// The unbalanced 8-block benchmark profile
    Benchmark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormatArg {
    Tsv,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    /// Graph family
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Block count
    #[arg(long)]
    pub k: usize,
    /// Node count (cycle, acyclic, nested)
    #[arg(long)]
    pub n: Option<usize>,
    /// Nodes in each twin half (twin families)
    #[arg(long)]
    pub n_each: Option<usize>,
    /// Structural edge probability; defaults 0.7 cyclic, 0.5 acyclic, 0.1 nested
    #[arg(long)]
    pub p: Option<f64>,
    /// Block size profile
    #[arg(long, value_enum, default_value = "uniform")]
    pub rho: RhoArg,
    /// Cross-twin coupling in [0, 1] (twin families)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Appended downhill edges (nested family)
    #[arg(long, default_value_t = 0)]
    pub extra_edges: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output delimiter
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: OutFormatArg,
    /// Edge list destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ground-truth labels destination (JSON); skipped when omitted
    #[arg(long)]
    pub labels_out: Option<PathBuf>,
}

pub fn generate(args: &GenerateArgs) -> CliResult<()> {
    let twin = matches!(args.family, FamilyArg::TwinCycle | FamilyArg::TwinAcyclic);
    if twin && args.n.is_some() {
        return Err(CliError::usage("twin families size their halves with --n-each, not --n"));
    }
    if !twin && (args.n_each.is_some() || args.alpha.is_some()) {
        return Err(CliError::usage("--n-each and --alpha only apply to twin families"));
    }
    if args.extra_edges > 0 && args.family != FamilyArg::Nested {
        return Err(CliError::usage("--extra-edges only applies to the nested family"));
    }
    let n = || args.n.ok_or_else(|| CliError::usage("this family needs --n"));
    let n_each = || args.n_each.ok_or_else(|| CliError::usage("twin families need --n-each"));
    let alpha = || args.alpha.ok_or_else(|| CliError::usage("twin families need --alpha"));
    let rho = resolve_rho(args.rho, args.k)?;
    let lg: LabeledGraph = match args.family {
        FamilyArg::Cycle => {
            let params = SbmParams::cycle(args.k, args.p.unwrap_or(0.7), rho)?;
            sample_sbm(&params, n()?, args.seed)?
        }
        FamilyArg::Acyclic => {
            let params = SbmParams::acyclic(args.k, args.p.unwrap_or(0.5), rho)?;
            sample_sbm(&params, n()?, args.seed)?
        }
        FamilyArg::TwinCycle => {
            let params = SbmParams::cycle(args.k, args.p.unwrap_or(0.7), rho)?;
            combine_twin_sbm(&params, n_each()?, alpha()?, args.seed)?
        }
        FamilyArg::TwinAcyclic => {
            let params = SbmParams::acyclic(args.k, args.p.unwrap_or(0.5), rho)?;
            combine_twin_sbm(&params, n_each()?, alpha()?, args.seed)?
        }
        FamilyArg::Nested => {
            if args.rho == RhoArg::Benchmark {
                return Err(CliError::usage("the nested family always uses uniform blocks"));
            }
            nested_block_cycle(args.k, n()?, args.p.unwrap_or(0.1), args.extra_edges, args.seed)?
        }
    };
    let ids = IdMap::from_names((0..lg.graph.node_count()).map(|i| i.to_string()).collect());
    let delimiter = match args.format {
        OutFormatArg::Tsv => '\t',
        OutFormatArg::Csv => ',',
    };
    write_output(args.out.as_deref(), &edge_list_string(&lg.graph, &ids, delimiter, false))?;
    if let Some(path) = &args.labels_out {
        let truth = baseline_assignment(lg.labels, lg.k, "generate", args.seed);
        write_output(Some(path), &AssignmentDoc::new(&truth, &ids, None).to_json())?;
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Ground-truth labels of the base graph
    #[arg(long)]
    pub labels: PathBuf,
    /// Noise strength in [0, 1]; the noise law is epsilon times a random
    /// block matrix evaluated on the base partition
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturbed edge list destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn perturb(args: &PerturbArgs) -> CliResult<()> {
    let delimiter = match args.graph.format {
        FormatArg::Tsv | FormatArg::Ws => '\t',
        FormatArg::Csv => ',',
        FormatArg::AsRel => {
            return Err(CliError::usage("perturb writes edge lists; as-rel input is not supported"))
        }
    };
    let parsed = load_graph(&args.graph)?;
    let doc = read_assignment(&args.labels)?;
    let labels = doc.labels_for(&parsed.ids)?;
    let base = LabeledGraph { graph: parsed.graph, labels, k: doc.k };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let q_seed = rng.random::<u64>();
    let overlay_seed = rng.random::<u64>();
    let noise = SbmParams::random_noise(doc.k, args.epsilon, uniform_rho(doc.k), q_seed)?;
    let perturbed = union_perturb(&base, &noise, overlay_seed)?;
    write_output(
        args.out.as_deref(),
        &edge_list_string(&perturbed.graph, &parsed.ids, delimiter, args.graph.weighted),
    )
}

#[derive(Debug, clap::Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Number of blocks to find
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Eigensolver residual target
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Which of the k leading eigenvectors feed the clustering
    #[arg(long, value_enum, default_value = "posimag")]
    pub filter: FilterArg,
    /// K-means restarts; best inertia wins
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Assignment JSON destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn detect(args: &DetectArgs, acyclic: bool) -> CliResult<()> {
    let parsed = load_graph(&args.graph)?;
    let opts = DetectOptions {
        seed: args.seed,
        tol: args.tol,
        filter: args.filter.into(),
        kmeans_restarts: args.restarts,
        ..Default::default()
    };
    let assignment = if acyclic {
        bas(&parsed.graph, args.k, &opts)?
    } else {
        bcs(&parsed.graph, args.k, &opts)?
    };
    for w in &assignment.provenance.warnings {
        eprintln!("warning: {w}");
    }
    write_output(args.out.as_deref(), &AssignmentDoc::new(&assignment, &parsed.ids, None).to_json())
}

#[derive(Debug, clap::Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Assignment to order
    #[arg(long)]
    pub assignment: PathBuf,
    /// Ranked assignment destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn rank(args: &RankArgs) -> CliResult<()> {
    let parsed = load_graph(&args.graph)?;
    let doc = read_assignment(&args.assignment)?;
    let ranked = rank_blocks(&parsed.graph, &doc.to_assignment(&parsed.ids)?)?;
    let dropped = ranked.provenance.deleted_block_edges.len();
    if dropped > 0 {
        eprintln!("warning: block graph had cycles; dropped {dropped} edge(s) to order it");
    }
    let c_a = acyclicity_score(&parsed.graph, &ranked.labels)?;
    write_output(args.out.as_deref(), &AssignmentDoc::new(&ranked, &parsed.ids, Some(c_a)).to_json())
}

#[derive(Debug, clap::Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Ranked assignment to improve
    #[arg(long)]
    pub assignment: PathBuf,
    /// Seeds the node visiting order
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refined assignment destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn refine(args: &RefineArgs) -> CliResult<()> {
    let parsed = load_graph(&args.graph)?;
    let doc = read_assignment(&args.assignment)?;
    if !doc.ranked {
        return Err(CliError::data("refine needs a ranked assignment; run rank first"));
    }
    let refined = refine_assignment(&parsed.graph, &doc.to_assignment(&parsed.ids)?, args.seed)?;
    let c_a = acyclicity_score(&parsed.graph, &refined.labels)?;
    write_output(
        args.out.as_deref(),
        &AssignmentDoc::new(&refined, &parsed.ids, Some(c_a)).to_json(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TrophicModeArg {
    /// Fixed point of T = 1 + D T with in-normalized diet fractions
    DietFraction,
    /// Least-squares solve of the same system
    Pseudoinverse,
}

#[derive(Debug, clap::Args)]
pub struct TrophicArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Which defining equation to solve
    #[arg(long, value_enum, default_value = "diet-fraction")]
    pub mode: TrophicModeArg,
    /// Levels CSV destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn trophic(args: &TrophicArgs) -> CliResult<()> {
    let parsed = load_graph(&args.graph)?;
    let mode = match args.mode {
        TrophicModeArg::DietFraction => TrophicMode::DietFraction,
        TrophicModeArg::Pseudoinverse => TrophicMode::TransitionPseudoinverse,
    };
    let result = trophic_levels(&parsed.graph, mode)?;
    if result.used_fallback {
        eprintln!("warning: fixed point did not settle; levels come from the least-squares solve");
    }
    write_output(args.out.as_deref(), &levels_csv(&parsed.ids, &result.levels))
}

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    /// Ground-truth assignment (needs --predicted)
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Estimated assignment compared against --truth
    #[arg(long)]
    pub predicted: Option<PathBuf>,
    /// Assignment scored against --scores and/or --input
    #[arg(long)]
    pub assignment: Option<PathBuf>,
    /// id,value table; reports the inversion error of the ranked assignment
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Graph file; reports the acyclicity of the assignment's labels
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: FormatArg,
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, value_enum, default_value = "integer")]
    pub ids: IdModeArg,
    /// Metrics JSON destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn evaluate(args: &EvaluateArgs) -> CliResult<()> {
    let mut metrics: BTreeMap<String, f64> = BTreeMap::new();
    match (&args.truth, &args.predicted) {
        (Some(truth), Some(predicted)) => {
            let t = read_assignment(truth)?;
            let p = read_assignment(predicted)?;
            if t.labels.len() != p.labels.len() {
                return Err(CliError::data(format!(
                    "assignments cover {} and {} nodes",
                    t.labels.len(),
                    p.labels.len()
                )));
            }
            let mut tv = Vec::with_capacity(t.labels.len());
            let mut pv = Vec::with_capacity(t.labels.len());
            for (id, &tl) in &t.labels {
                let &pl = p.labels.get(id).ok_or_else(|| {
                    CliError::data(format!("predicted assignment has no label for node {id:?}"))
                })?;
                tv.push(tl);
                pv.push(pl);
            }
            let k = t.k.max(p.k);
            metrics.insert("block_membership_error".into(), block_membership_error(&tv, &pv, k)?);
            metrics.insert("one_minus_nmi".into(), 1.0 - nmi(&tv, &pv)?);
        }
        (None, None) => {}
        _ => return Err(CliError::usage("--truth and --predicted go together")),
    }
    if args.assignment.is_none() && (args.scores.is_some() || args.input.is_some()) {
        return Err(CliError::usage("--scores and --input need --assignment"));
    }
    if let Some(path) = &args.assignment {
        if args.scores.is_none() && args.input.is_none() {
            return Err(CliError::usage("--assignment needs --scores or --input to score against"));
        }
        let doc = read_assignment(path)?;
        if let Some(scores_path) = &args.scores {
            if !doc.ranked {
                return Err(CliError::data("inversion error needs a ranked assignment"));
            }
            let file = File::open(scores_path).map_err(|e| CliError::io(scores_path, e))?;
            let scores = parse_scores(BufReader::new(file))?;
            let mut ranks = Vec::with_capacity(doc.labels.len());
            let mut values = Vec::with_capacity(doc.labels.len());
            for (id, &label) in &doc.labels {
                let &value = scores
                    .get(id)
                    .ok_or_else(|| CliError::data(format!("no score for node {id:?}")))?;
                ranks.push(label);
                values.push(value);
            }
            metrics.insert("inversion_error".into(), inversion_error(&ranks, &values)?);
        }
        if let Some(input) = &args.input {
            let parsed = load_graph(&GraphArgs {
                input: input.clone(),
                format: args.format,
                weighted: args.weighted,
                ids: args.ids,
            })?;
            let labels = doc.labels_for(&parsed.ids)?;
            metrics.insert("acyclicity".into(), acyclicity_score(&parsed.graph, &labels)?);
        }
    }
    if metrics.is_empty() {
        return Err(CliError::usage(
            "nothing to evaluate; pass --truth with --predicted, or --assignment with --scores or --input",
        ));
    }
    let mut json = serde_json::to_string_pretty(&metrics).expect("float map serializes");
    json.push('\n');
    write_output(args.out.as_deref(), &json)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OperatorArg {
    /// Row-stochastic transition matrix; rejects sink nodes
    Bcs,
    /// Transition matrix with sink rows completed to uniform
    Bas,
}

#[derive(Debug, clap::Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// How many largest-modulus eigenpairs to report
    #[arg(long)]
    pub k: usize,
    /// Whose transition matrix to use
    #[arg(long, value_enum, default_value = "bcs")]
    pub algorithm: OperatorArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Spectrum CSV destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let parsed = load_graph(&args.graph)?;
    let op = match args.algorithm {
        OperatorArg::Bcs => {
            if let Some(node) = parsed.graph.first_dangling_node() {
                return Err(blockspectral::Error::ZeroOutDegree { node }.into());
            }
            TransitionOperator::row_stochastic(&parsed.graph)
        }
        OperatorArg::Bas => TransitionOperator::dangling_uniform(&parsed.graph),
    };
    let result = top_modulus_eigenpairs(
        &op,
        args.k,
        &ArnoldiOptions { tol: args.tol, max_restarts: 400, seed: args.seed, subspace: None },
    )?;
    if !result.converged {
        eprintln!("warning: eigensolver stopped before tolerance; residual column tells how far");
    }
    write_output(args.out.as_deref(), &spectrum_csv(&result))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchFamilyArg {
    Cycle,
    Acyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgArg {
    Bcs,
    Bas,
    Bib,
    Svd,
}

impl From<AlgArg> for BenchAlgorithm {
    fn from(a: AlgArg) -> BenchAlgorithm {
        match a {
            AlgArg::Bcs => BenchAlgorithm::Bcs,
            AlgArg::Bas => BenchAlgorithm::Bas,
            AlgArg::Bib => BenchAlgorithm::Bib,
            AlgArg::Svd => BenchAlgorithm::Svd,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct BenchmarkArgs {
    /// Generator family
    #[arg(long, value_enum)]
    pub family: BenchFamilyArg,
    /// Node count in grid mode; defaults 1000 cycle, 500 acyclic
    #[arg(long)]
    pub n: Option<usize>,
    /// Nodes per twin half in alpha mode [default: 500]
    #[arg(long)]
    pub n_each: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Structural edge probability; defaults 0.7 cycle, 0.5 acyclic
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_enum, default_value = "benchmark")]
    pub rho: RhoArg,
    /// Comma-separated perturbation strengths, e.g. 0,0.2,0.4
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Twin coupling strength; replaces the perturbation grid
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Trials per grid point
    #[arg(long, default_value_t = 5)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    /// Comma-separated subset of bcs,bas,bib,svd; defaults to the
    /// family's own detector
    #[arg(long, value_delimiter = ',', value_enum)]
    pub algorithms: Vec<AlgArg>,
    #[arg(long, value_enum, default_value = "posimag")]
    pub filter: FilterArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Node limit for the dense baselines
    #[arg(long, default_value_t = 2000)]
    pub dense_cap: usize,
    /// Record wall-clock per trial; makes reruns differ byte-wise
    #[arg(long)]
    pub timings: bool,
    /// Records CSV destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn benchmark(args: &BenchmarkArgs) -> CliResult<()> {
    let family = match args.family {
        BenchFamilyArg::Cycle => BenchFamily::Cycle,
        BenchFamilyArg::Acyclic => BenchFamily::Acyclic,
    };
    let (mode, n) = match (args.eps.is_empty(), args.alpha) {
        (false, None) => {
            if args.n_each.is_some() {
                return Err(CliError::usage("--n-each only applies to --alpha mode"));
            }
            let default_n = match family {
                BenchFamily::Cycle => 1000,
                BenchFamily::Acyclic => 500,
            };
            (BenchMode::EpsGrid(args.eps.clone()), args.n.unwrap_or(default_n))
        }
        (true, Some(alpha)) => {
            if args.n.is_some() {
                return Err(CliError::usage("--alpha mode sizes its halves with --n-each"));
            }
            (BenchMode::TwinAlpha(alpha), args.n_each.unwrap_or(500))
        }
        (true, None) => return Err(CliError::usage("give --eps or --alpha")),
        (false, Some(_)) => return Err(CliError::usage("--eps and --alpha are exclusive")),
    };
    let p = args.p.unwrap_or(match family {
        BenchFamily::Cycle => 0.7,
        BenchFamily::Acyclic => 0.5,
    });
    let algorithms: Vec<BenchAlgorithm> = if args.algorithms.is_empty() {
        vec![match family {
            BenchFamily::Cycle => BenchAlgorithm::Bcs,
            BenchFamily::Acyclic => BenchAlgorithm::Bas,
        }]
    } else {
        args.algorithms.iter().map(|&a| a.into()).collect()
    };
    let cfg = BenchmarkConfig {
        family,
        mode,
        n,
        k: args.k,
        p,
        rho: resolve_rho(args.rho, args.k)?,
        seeds: args.seeds,
        base_seed: args.base_seed,
        algorithms,
        filter: args.filter.into(),
        tol: args.tol,
        restarts: args.restarts,
        dense_cap: args.dense_cap,
        timings: args.timings,
    };
    let records = run_benchmark(&cfg)?;
    write_output(args.out.as_deref(), &records_csv(&records))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    /// Spectral clustering of bibliometric similarity
    Bib,
    /// K-means in a truncated SVD embedding
    Svd,
}

#[derive(Debug, clap::Args)]
pub struct BaselinesArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Number of clusters
    #[arg(long)]
    pub k: usize,
    /// Co-citation vs co-reference blend (bib)
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Singular triplets to keep (svd); defaults to k
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Node limit before the dense matrices get too big
    #[arg(long, default_value_t = 2000)]
    pub dense_cap: usize,
    /// Assignment JSON destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn baselines(args: &BaselinesArgs) -> CliResult<()> {
    let parsed = load_graph(&args.graph)?;
    let kopts = KmeansOptions { restarts: args.restarts, seed: args.seed, ..Default::default() };
    let (labels, name) = match args.method {
        MethodArg::Bib => {
            let r = bib_cluster(&parsed.graph, args.k, args.alpha, &kopts, args.dense_cap)?;
            (r.labels, "bib")
        }
        MethodArg::Svd => {
            let r = svd_cluster(
                &parsed.graph,
                args.dims.unwrap_or(args.k),
                args.k,
                &kopts,
                args.dense_cap,
            )?;
            if r.truncated {
                eprintln!("warning: embedding truncated to the numerical rank of the graph");
            }
            (r.labels, "svd")
        }
    };
    let assignment = baseline_assignment(labels, args.k, name, args.seed);
    write_output(args.out.as_deref(), &AssignmentDoc::new(&assignment, &parsed.ids, None).to_json())
}
