use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use percolab::analysis::{HostKind, KappaMode, Variant};
use percolab::harness::{run, Experiment, ExperimentConfig};
use percolab::percolation::ArmKind;
use percolab::weights::P_C;

#[derive(Parser)]
#[command(name = "percolab", version, about = "Percolation and random-walk experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory (default: $PERCOLAB_OUT or ./percolab-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Emit a gnuplot script and SVG plots of the fits.
    #[arg(long, global = true)]
    plots: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML file.
    Run { config: PathBuf },
    /// One-arm, two-arm and four-arm probability scans.
    Arms {
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<ArmKind>>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<i64>,
        #[arg(long, default_value_t = P_C)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
    },
    /// Correlation lengths and the near-critical scaling relation.
    Corrlen {
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, default_value_t = percolab::analysis::DEFAULT_EPS)]
        eps: f64,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
        /// Replicas for the four-arm probability; 0 skips the scaling relation.
        #[arg(long, default_value_t = 1000)]
        pi4_replicas: usize,
    },
    /// Grow invasion clusters and write snapshots.
    Invade {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        clusters: usize,
        #[arg(long)]
        no_snapshots: bool,
    },
    /// Chemical distance from the origin to the box boundary on invasion clusters.
    Chemdist {
        #[arg(long, value_delimiter = ',')]
        n: Vec<i64>,
        #[arg(long, default_value_t = 20)]
        environments: usize,
    },
    /// Quenched exit times and their exponent fit.
    ExitScan {
        #[arg(long, default_value = "ipc")]
        host: HostKind,
        #[arg(long, value_delimiter = ',')]
        n: Vec<i64>,
        #[arg(long, default_value_t = 20)]
        environments: usize,
        #[arg(long, default_value_t = 20)]
        walks: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Backbone volume statistics and the Kesten comparison.
    BackboneStats {
        #[arg(long)]
        m: i64,
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<i64>>,
        #[arg(long, default_value_t = 50)]
        clusters: usize,
        #[arg(long, default_value_t = 1)]
        walks: usize,
        #[arg(long, default_value_t = 1.0)]
        l0: f64,
        #[arg(long, default_value_t = 1000)]
        rho_replicas: usize,
    },
    /// Exact exponent arithmetic.
    Kappa {
        #[arg(long)]
        eta1: String,
        #[arg(long)]
        eta2: String,
        #[arg(long, default_value = "hexagonal")]
        variant: Variant,
        #[arg(long, default_value = "standard")]
        mode: KappaMode,
    },
    /// Rejection sampler for the incipient infinite cluster.
    Iic {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_attempts: u64,
    },
}

fn config(cli: Cli) -> percolab::Result<ExperimentConfig> {
    let experiment = match cli.command {
        Command::Run { config } => {
            let mut cfg = ExperimentConfig::load(config)?;
            if cli.common.out.is_some() {
                cfg.output = cli.common.out;
            }
            return Ok(cfg);
        }
        Command::Arms { kinds, n, p, replicas } => {
            Experiment::Arms { kinds: kinds.unwrap_or_else(|| ArmKind::ALL.to_vec()), radii: n, p, replicas }
        }
        Command::Corrlen { p, eps, grid, replicas, pi4_replicas } => Experiment::Corrlen {
            ps: p,
            eps,
            grid: grid.unwrap_or_else(percolab::analysis::default_grid),
            replicas,
            pi4_replicas,
        },
        Command::Invade { n, clusters, no_snapshots } => {
            Experiment::Invade { radius: n, clusters, stop: None, snapshots: !no_snapshots }
        }
        Command::Chemdist { n, environments } => Experiment::Chemdist { radii: n, environments, stop: None },
        Command::ExitScan { host, n, environments, walks, cap } => Experiment::ExitScan {
            host,
            radii: n,
            environments,
            walks,
            stop: None,
            cap,
            iic_factor: 2,
            iic_max_attempts: 1_000_000,
        },
        Command::BackboneStats { m, q, clusters, walks, l0, rho_replicas } => Experiment::BackboneStats {
            m,
            qs: q.unwrap_or_else(|| vec![4, 8, 16]),
            clusters,
            walks,
            cap: None,
            l0,
            rho_replicas,
            c_grid: vec![1.0, 2.0, 5.0, 10.0, 20.0],
            stop: None,
        },
        Command::Kappa { eta1, eta2, variant, mode } => Experiment::Kappa { eta1, eta2, variant, mode },
        Command::Iic { l, n, samples, max_attempts } => Experiment::Iic { l, n, samples, max_attempts },
    };
    Ok(ExperimentConfig {
        seed: cli.common.seed,
        output: cli.common.out,
        threads: cli.common.threads,
        plots: cli.common.plots,
        experiment,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(report) => {
            for line in &report.outcome.stdout {
                println!("{line}");
            }
            eprintln!(
                "{}: wrote {} ({} failures)",
                report.manifest.experiment,
                report.dir.display(),
                report.manifest.failures
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
