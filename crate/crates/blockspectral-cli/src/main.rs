mod artifacts;
mod bench;
mod commands;
mod error;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    BaselinesArgs, BenchmarkArgs, DetectArgs, EvaluateArgs, GenerateArgs, PerturbArgs, RankArgs,
    RefineArgs, SpectrumArgs, TrophicArgs,
};

/// Block-cyclic and block-acyclic structure in directed graphs.
#[derive(Parser)]
#[command(name = "blockspectral", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic benchmark graph, optionally with its true labels
    Generate(GenerateArgs),
    /// Overlay random-SBM noise of strength epsilon on a labeled graph
    Perturb(PerturbArgs),
    /// Detect block-cyclic groups from the transition matrix spectrum
    Bcs(DetectArgs),
    /// Detect block-acyclic groups; sinks allowed
    Bas(DetectArgs),
    /// Topologically order the blocks of an assignment
    Rank(RankArgs),
    /// Greedily move nodes between ranked blocks to raise acyclicity
    Refine(RefineArgs),
    /// Trophic levels of a (food web style) directed graph
    Trophic(TrophicArgs),
    /// Compare assignments, or score one against levels or a graph
    Evaluate(EvaluateArgs),
    /// Largest-modulus eigenpairs of a graph's transition matrix
    Spectrum(SpectrumArgs),
    /// Accuracy sweep over a perturbation grid or a twin coupling
    Benchmark(BenchmarkArgs),
    /// Bibliometric and SVD clustering for comparison
    Baselines(BaselinesArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Perturb(args) => commands::perturb(&args),
        Command::Bcs(args) => commands::detect(&args, false),
        Command::Bas(args) => commands::detect(&args, true),
        Command::Rank(args) => commands::rank(&args),
        Command::Refine(args) => commands::refine(&args),
        Command::Trophic(args) => commands::trophic(&args),
        Command::Evaluate(args) => commands::evaluate(&args),
        Command::Spectrum(args) => commands::spectrum(&args),
        Command::Benchmark(args) => commands::benchmark(&args),
        Command::Baselines(args) => commands::baselines(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.category.exit_code())
        }
    }
}
