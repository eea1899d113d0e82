use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qiforge::cli::{execute, Command, ExperimentConfig};
use qiforge::error::{Error, Result};

#[derive(Parser)]
#[command(name = "qiforge", version, about = "Coarse-geometry experiments on word metrics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Global {
    /// JSON experiment config; flags given on the command line override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ball element budget
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate a word-metric ball
    Ball { group: String, radius: u32 },
    /// Følner profile of the standard family (word balls for free groups)
    Folner {
        group: String,
        i_max: Option<u32>,
    },
    /// Følner vanishing statistic of a chain
    UfTest {
        chain: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 40)]
        i_max: u32,
    },
    /// Exhaustive distortion audit of a map on a ball
    QiAudit {
        /// Map spec, e.g. floor:2:Z or fc:2:2
        map: String,
        radius: u32,
        /// Additive constant for fitting K (defaults to the claimed C)
        #[arg(long)]
        c_fixed: Option<i64>,
    },
    /// Minimal matching displacement over window scales
    Rstar {
        /// Map spec, e.g. incl:2Z
        map: String,
        /// Window scales, comma separated
        #[arg(long, value_delimiter = ',', default_value = "40,80,160")]
        scales: Vec<u32>,
        /// Largest displacement tried at each scale (defaults to 2L)
        #[arg(long)]
        r_max: Option<u32>,
    },
    /// Run a bundled experiment
    Reproduce { experiment: String },
    /// Run the config given by --config as is
    Run,
}

fn resolve(cli: Cli) -> Result<ExperimentConfig> {
    let base = match &cli.global.config {
        Some(path) => Some(ExperimentConfig::load(path)?),
        None => None,
    };
    let fresh = |c: Command| base.clone().map(|mut b| {
        b.command = c.clone();
        b
    }).unwrap_or_else(|| ExperimentConfig::new(c));
    let mut cfg = match cli.command {
        Cmd::Ball { group, radius } => {
            let mut c = fresh(Command::Ball);
            c.group = Some(group);
            c.radius = Some(radius);
            c
        }
        Cmd::Folner { group, i_max } => {
            let mut c = fresh(Command::Folner);
            c.group = Some(group);
            c.i_max = i_max.or(c.i_max);
            c
        }
        Cmd::UfTest { chain, group, i_max } => {
            let mut c = fresh(Command::UfTest);
            c.chain = Some(chain);
            c.group = group.or(c.group);
            c.i_max = Some(i_max);
            c
        }
        Cmd::QiAudit { map, radius, c_fixed } => {
            let mut c = fresh(Command::QiAudit);
            c.map = Some(map);
            c.radius = Some(radius);
            c.c_fixed = c_fixed.or(c.c_fixed);
            c
        }
        Cmd::Rstar { map, scales, r_max } => {
            let mut c = fresh(Command::Rstar);
            c.map = Some(map);
            c.scales = Some(scales);
            c.r_max = r_max.or(c.r_max);
            c
        }
        Cmd::Reproduce { experiment } => {
            let mut c = fresh(Command::Reproduce);
            c.experiment = Some(experiment);
            c
        }
        Cmd::Run => base.ok_or_else(|| Error::Config("run needs --config".into()))?,
    };
    cfg.apply_env()?;
    if let Some(b) = cli.global.budget {
        cfg.limits.ball_elements = b;
    }
    if let Some(out) = cli.global.out {
        cfg.out = out;
    }
    if let Some(t) = cli.global.threads {
        cfg.threads = Some(t);
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = resolve(cli)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let outcome = execute(&cfg)?;
    if !outcome.summary.is_empty() {
        println!("{}", outcome.summary);
    }
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(outcome.inconclusive)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(1)
        }
    }
}
