//! Command-line surface: feature extraction, ranking, exhaustive subset
//! search, effectiveness computation, reporting, and synthetic data for
//! self-contained verification.

mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "firank", version, about = "Feature importance ranking toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 15 lesion features from paired image/mask files
    Extract {
        /// Directory of grayscale images (.pgm or matrix .csv)
        #[arg(long)]
        images: PathBuf,
        /// Directory of masks matched to images by filename stem
        #[arg(long)]
        masks: PathBuf,
        /// Sidecar CSV of `stem,label` pairs (0 = benign, 1 = malignant)
        #[arg(long)]
        labels: PathBuf,
        /// Output feature CSV
        #[arg(long)]
        out: PathBuf,
        /// Physical pixel size (mm/pixel); area and perimeter rescale
        #[arg(long)]
        spacing: Option<f64>,
    },
    /// Rank features with one or more methods
    Rank {
        /// Input feature CSV
        #[arg(long)]
        data: PathBuf,
        /// Comma-separated method names, or `all`
        #[arg(long, default_value = "all")]
        methods: String,
        /// Output ranking CSV
        #[arg(long)]
        out: PathBuf,
        /// ReliefF neighbor count
        #[arg(long, default_value_t = 10)]
        relieff_k: usize,
        /// Laplacian-score kNN graph size
        #[arg(long, default_value_t = 5)]
        lap_k: usize,
        /// Heat-kernel bandwidth (default: mean squared pairwise distance)
        #[arg(long)]
        lap_t: Option<f64>,
        /// Equal-frequency bins for the Gini reduction
        #[arg(long, default_value_t = 10)]
        gini_bins: usize,
        /// Relevancy/redundancy mixing weight for the graph rankers
        #[arg(long, default_value_t = 0.5)]
        graph_alpha: f64,
        /// Lasso penalty grid length
        #[arg(long, default_value_t = 100)]
        lasso_grid_count: usize,
        /// Smallest lasso penalty as a fraction of lambda_max
        #[arg(long, default_value_t = 1e-4)]
        lasso_grid_min_ratio: f64,
    },
    /// Exhaustive subset search with a cross-validated linear SVM
    Search {
        /// Input feature CSV
        #[arg(long)]
        data: PathBuf,
        /// Largest subset size to enumerate
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        /// Number of stratified folds
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Seed for the fold assignment
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// SVM penalty parameter
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        /// Cap on parallel workers (does not affect results)
        #[arg(long)]
        threads: Option<usize>,
        /// Output result file
        #[arg(long)]
        out: PathBuf,
    },
    /// Effectiveness of each ranking against an optimal subset
    Eff {
        /// Ranking CSV (as written by `rank`)
        #[arg(long)]
        ranking: PathBuf,
        /// Comma-separated 1-based optimal feature indices, e.g. 2,7,13
        #[arg(long)]
        optimal: String,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded synthetic dataset
    Synth {
        /// Sample count
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Feature count
        #[arg(long, default_value_t = 15)]
        d: usize,
        /// Comma-separated 1-based informative feature indices
        #[arg(long, default_value = "2,7,13")]
        informative: String,
        /// Label noise level
        #[arg(long, default_value_t = 0.5)]
        noise: f64,
        /// Generator seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output feature CSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Table of rankings with their eff fractions
    Report {
        /// Ranking CSV (as written by `rank`)
        #[arg(long)]
        ranking: PathBuf,
        /// Comma-separated 1-based optimal feature indices
        #[arg(long)]
        optimal: String,
        /// Output prefix; writes <prefix>.csv and <prefix>.txt
        /// (default: text table to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Extract {
            images,
            masks,
            labels,
            out,
            spacing,
        } => commands::extract(&images, &masks, &labels, &out, spacing),
        Command::Rank {
            data,
            methods,
            out,
            relieff_k,
            lap_k,
            lap_t,
            gini_bins,
            graph_alpha,
            lasso_grid_count,
            lasso_grid_min_ratio,
        } => {
            let params = firank::rankers::MethodParams {
                relieff_k,
                lap_k,
                lap_t,
                gini_bins,
                graph_alpha,
                lasso_grid_count,
                lasso_grid_min_ratio,
                ..Default::default()
            };
            commands::rank(&data, &methods, &out, &params)
        }
        Command::Search {
            data,
            kmax,
            folds,
            seed,
            c,
            threads,
            out,
        } => commands::search(&data, kmax, folds, seed, c, threads, &out),
        Command::Eff {
            ranking,
            optimal,
            out,
        } => commands::eff(&ranking, &optimal, out.as_deref()),
        Command::Synth {
            n,
            d,
            informative,
            noise,
            seed,
            out,
        } => commands::synth(n, d, &informative, noise, seed, &out),
        Command::Report {
            ranking,
            optimal,
            out,
        } => commands::report(&ranking, &optimal, out.as_deref()),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
