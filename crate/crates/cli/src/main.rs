//! `orlicz-lab` command-line front end.
//!
//! Exit codes: 0 success, 1 other failure (including failed regression
//! rows), 2 hypothesis-failed verdicts with no admissible route, 3 numeric
//! nonconvergence, 4 parse or configuration error.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Emit, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "orlicz-lab", version, about = "Orlicz-space norms, weight admissibility and radial eigenvalues")]
struct Cli {
    /// TOML file overriding the built-in defaults; flags override the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Space dimension N.
    #[arg(long, global = true)]
    dim: Option<u32>,
    /// Domain measure |Omega|: a number or `inf`.
    #[arg(long, global = true)]
    omega: Option<String>,
    /// Worker threads.
    #[arg(long, global = true, env = "ORLICZ_LAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Functions {
    /// Young function, e.g. `pow:p=2`, `sumpow:p=2,q=3`, `table:phi.csv`.
    #[arg(long)]
    phi: Option<String>,
    /// Second Young function; defaults to phi.
    #[arg(long)]
    psi: Option<String>,
    /// Weight, e.g. `hardy:a=2`, `const:c=1,m=2`, `radial:g.csv`.
    #[arg(long)]
    weight: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sobolev conjugate, B_Phi and its complement.
    Conjugate {
        #[command(flatten)]
        f: Functions,
    },
    /// Weight norms.
    Norm {
        #[command(flatten)]
        f: Functions,
        /// Norms to compute (repeatable); all by default.
        #[arg(long, value_enum)]
        kind: Vec<commands::NormChoice>,
    },
    /// Admissibility report over all theorem routes.
    Check {
        #[command(flatten)]
        f: Functions,
        /// Also evaluate the Muckenhoupt-type sup.
        #[arg(long)]
        muckenhoupt: bool,
        /// Also evaluate the capacity criterion.
        #[arg(long)]
        capacity: bool,
        /// Outer radius for the capacity criterion.
        #[arg(long = "R")]
        radius: Option<f64>,
        /// Inner radii `lo:hi:n` for the capacity criterion.
        #[arg(long)]
        a_grid: Option<String>,
    },
    /// Test the modular inequality on radial test-function families.
    Verify {
        #[command(flatten)]
        f: Functions,
        /// `cones`, `bumps`, `dilate`, `amplitude` or `all`.
        #[arg(long)]
        family: Option<String>,
        /// Route whose constant is compared, e.g. `T1.3`.
        #[arg(long)]
        route: Option<String>,
    },
    /// Radial first eigenvalue on a ball.
    Eigen {
        #[command(flatten)]
        f: Functions,
        /// Ball radius.
        #[arg(long = "R")]
        radius: Option<f64>,
        /// Level r, or a log sweep `lo:hi:n`.
        #[arg(long = "r")]
        level: Option<String>,
        /// Radial grid nodes.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Regression table of the worked examples.
    Examples,
}

/// An input that could not be parsed or validated.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow::Error::new(InputError(e.to_string()))
}

fn apply_flags(cli: &Cli, cfg: &mut RunConfig) {
    if let Some(e) = cli.emit {
        cfg.emit = e;
    }
    if let Some(o) = &cli.output {
        cfg.output = Some(o.clone());
    }
    if let Some(d) = cli.dim {
        cfg.dim = d;
    }
    if let Some(o) = &cli.omega {
        cfg.omega = o.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    let f = match &cli.command {
        Command::Conjugate { f } | Command::Norm { f, .. } | Command::Check { f, .. } | Command::Verify { f, .. } | Command::Eigen { f, .. } => Some(f),
        Command::Examples => None,
    };
    if let Some(f) = f {
        if let Some(p) = &f.phi {
            cfg.phi = p.clone();
        }
        if let Some(p) = &f.psi {
            cfg.psi = Some(p.clone());
        }
        if let Some(w) = &f.weight {
            cfg.weight = w.clone();
        }
    }
    match &cli.command {
        Command::Check { muckenhoupt, capacity, radius, a_grid, .. } => {
            cfg.muckenhoupt_enabled |= muckenhoupt;
            cfg.capacity.enabled |= capacity;
            if let Some(r) = radius {
                cfg.capacity.radius = *r;
            }
            if let Some(g) = a_grid {
                cfg.capacity.a_grid = g.clone();
            }
        }
        Command::Verify { family, route, .. } => {
            if let Some(fam) = family {
                cfg.verify.family = fam.clone();
            }
            if route.is_some() {
                cfg.verify.route = route.clone();
            }
        }
        Command::Eigen { radius, level, nodes, .. } => {
            if let Some(r) = radius {
                cfg.eigen.radius = *r;
            }
            if let Some(l) = level {
                cfg.eigen.level = l.clone();
            }
            if let Some(n) = nodes {
                cfg.eigen.nodes = *n;
            }
        }
        _ => {}
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InputError>().is_some() {
        return 4;
    }
    match err.downcast_ref::<orlicz_lab::Error>() {
        Some(orlicz_lab::Error::Parse(_) | orlicz_lab::Error::Table { .. }) => 4,
        Some(orlicz_lab::Error::NonConvergence { .. } | orlicz_lab::Error::EigenNotConverged(_)) => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let mut cfg = RunConfig::load(cli.config.as_deref()).map_err(|e| input_error(format!("{e:#}")))?;
    apply_flags(cli, &mut cfg);
    cfg.validate().map_err(input_error)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = match &cli.command {
        Command::Conjugate { .. } => commands::conjugate(&cfg)?,
        Command::Norm { kind, .. } => commands::norm(&cfg, kind)?,
        Command::Check { .. } => commands::check(&cfg)?,
        Command::Verify { .. } => commands::verify(&cfg)?,
        Command::Eigen { .. } => commands::eigen(&cfg)?,
        Command::Examples => commands::examples(&cfg)?,
    };
    let mut sink: Box<dyn Write> = match &cfg.output {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display()))?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match cfg.emit {
        Emit::Json => {
            serde_json::to_writer_pretty(&mut sink, &out.json)?;
            writeln!(sink)?;
        }
        Emit::Csv => sink.write_all(&out.csv)?,
    }
    sink.flush()?;
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
