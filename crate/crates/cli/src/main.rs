//! `twosite`: figure-data generator for the two-site Hubbard library.

mod commands;
mod config;
mod output;
mod presets;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twosite::dynamics::InitialCondition;
use twosite::hubbard::Model;

use config::{Format, Quantity, RunConfig, SweepSection};
use output::Document;

/// Environment variable naming the default output directory.
const OUT_ENV: &str = "TWOSITE_OUT";

#[derive(Debug)]
pub enum Failure {
    Config { field: String, reason: String },
    Numeric(String),
    Io(String),
}

impl Failure {
    pub fn config(field: &str, reason: impl Into<String>) -> Self {
        Failure::Config {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config { .. } => 2,
            Failure::Numeric(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config { field, reason } => write!(f, "invalid config: {field}: {reason}"),
            Failure::Numeric(m) => write!(f, "{m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<twosite::Error> for Failure {
    fn from(e: twosite::Error) -> Self {
        match e {
            twosite::Error::Domain { field, reason } => Failure::config(field, reason),
            e @ twosite::Error::Numeric { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Trap,
    Scatter,
    Params,
    Pair,
    Spectrum,
    Dynamics,
    Entropy,
    Fluct,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Trap => "trap",
            Command::Scatter => "scatter",
            Command::Params => "params",
            Command::Pair => "pair",
            Command::Spectrum => "spectrum",
            Command::Dynamics => "dynamics",
            Command::Entropy => "entropy",
            Command::Fluct => "fluct",
        }
    }
}

#[derive(Parser)]
#[command(
    name = "twosite",
    version,
    about = "Two-site Hubbard model data for a pair of atoms in a double well"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Trap scales and the single-particle doublet.
    Trap(RunArgs),
    /// Phase shifts and effective-range fit of a Jost-Kohn potential.
    Scatter(RunArgs),
    /// Hubbard parameters J, U, U_i, I, K from the trap and potential.
    Params(RunArgs),
    /// On-site U from the interacting pair in an isotropic trap.
    Pair(RunArgs),
    /// Two-particle eigenenergies.
    Spectrum(RunArgs),
    /// Occupations and tunneling probabilities in time, or their averages over a sweep.
    Dynamics(RunArgs),
    /// Entropies and Q parameters in time, or eigenstate entropies over a sweep.
    Entropy(RunArgs),
    /// Ground-state phase and number fluctuations.
    Fluct(RunArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in run; `twosite presets` lists them.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (default: [output].dir, then $TWOSITE_OUT, then the working directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    #[arg(long, value_parser = parse_init)]
    init: Option<InitialCondition>,
    /// VAR=start:stop:step with VAR one of U/J, a_s/a_z, a_s/nm, V0/hbar_omega_z.
    #[arg(long)]
    sweep: Option<String>,
    /// Final time in units of 1/J.
    #[arg(long)]
    t_max: Option<f64>,
    /// Time step in units of 1/J.
    #[arg(long)]
    dt: Option<f64>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "fermion" => Ok(Model::Fermion),
        "boson" => Ok(Model::Boson),
        _ => Err("expected fermion or boson".into()),
    }
}

fn parse_init(s: &str) -> Result<InitialCondition, String> {
    match s {
        "same-site" => Ok(InitialCondition::SameSite),
        "split" => Ok(InitialCondition::Split),
        "split-antisymmetric" => Ok(InitialCondition::SplitAntisymmetric),
        _ => Err("expected same-site, split or split-antisymmetric".into()),
    }
}

struct Run {
    tag: Option<String>,
    config: RunConfig,
}

struct Resolved {
    preset: Option<&'static str>,
    runs: Vec<Run>,
    /// [output].dir, if any run sets it.
    dir: Option<String>,
}

fn resolve_runs(command: Command, args: &RunArgs) -> Result<Resolved, Failure> {
    let preset = match &args.preset {
        None => None,
        Some(name) => {
            let p = presets::preset(name).ok_or_else(|| {
                Failure::config(
                    "--preset",
                    format!("unknown preset `{name}`; known: {:?}", presets::NAMES),
                )
            })?;
            if p.command != command {
                return Err(Failure::config(
                    "--preset",
                    format!("`{name}` is a `{}` preset, not `{}`", p.command.name(), command.name()),
                ));
            }
            Some(p)
        }
    };
    let file = match &args.config {
        None => None,
        Some(path) => {
            let source = path.display().to_string();
            let text =
                std::fs::read_to_string(path).map_err(|e| Failure::config("--config", format!("{source}: {e}")))?;
            Some((source.clone(), config::parse_table(&source, &text)?))
        }
    };
    let bases: Vec<(Option<String>, String, toml::Table)> = match &preset {
        Some(p) => p
            .runs
            .iter()
            .map(|r| {
                Ok((
                    r.tag.clone(),
                    format!("preset {}", p.name),
                    config::parse_table(p.name, &r.config)?,
                ))
            })
            .collect::<Result<_, Failure>>()?,
        None => vec![(None, "config".to_string(), toml::Table::new())],
    };
    let mut runs = Vec::new();
    let mut dir = None;
    for (tag, source, mut table) in bases {
        let source = match &file {
            Some((name, t)) => {
                config::merge(&mut table, t.clone());
                name.clone()
            }
            None => source,
        };
        let mut cfg = config::from_table(&source, table)?;
        apply_flags(&mut cfg, args)?;
        let mut cfg = cfg.with_defaults(command);
        // the output directory is not part of the result
        if let Some(d) = cfg.output.as_mut().and_then(|o| o.dir.take()) {
            dir.get_or_insert(d);
        }
        commands::validate(command, &cfg)?;
        runs.push(Run { tag, config: cfg });
    }
    Ok(Resolved {
        preset: preset.map(|p| p.name),
        runs,
        dir,
    })
}

fn apply_flags(cfg: &mut RunConfig, args: &RunArgs) -> Result<(), Failure> {
    if let Some(m) = args.model {
        cfg.model.get_or_insert_with(Default::default).statistics = Some(m);
    }
    if let Some(i) = args.init {
        cfg.dynamics.get_or_insert_with(Default::default).init = Some(i);
    }
    if let Some(t) = args.t_max {
        cfg.dynamics.get_or_insert_with(Default::default).t_max = Some(Quantity::new(t, "J"));
    }
    if let Some(dt) = args.dt {
        cfg.dynamics.get_or_insert_with(Default::default).dt = Some(Quantity::new(dt, "J"));
    }
    if let Some(s) = &args.sweep {
        cfg.sweep = Some(SweepSection::parse(s)?);
    }
    if let Some(f) = args.format {
        cfg.output.get_or_insert_with(Default::default).format = Some(f);
    }
    Ok(())
}

fn out_dir(args: &RunArgs, config_dir: Option<String>) -> PathBuf {
    args.out
        .clone()
        .or(config_dir.map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn execute(command: Command, args: &RunArgs) -> Result<Vec<PathBuf>, Failure> {
    let Resolved { preset, runs, dir } = resolve_runs(command, args)?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = args.threads {
            if n == 0 {
                return Err(Failure::config("--threads", "must be at least 1"));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| Failure::Io(e.to_string()))?
    };
    let base = preset.unwrap_or(command.name());
    let tables = pool.install(|| {
        runs.iter()
            .map(|r| {
                let name = match &r.tag {
                    Some(t) => format!("{base}-{t}"),
                    None => base.to_string(),
                };
                log::info!("computing {name}");
                commands::compute(command, &r.config, &name)
            })
            .collect::<Result<Vec<_>, Failure>>()
    })?;
    let files: Vec<(String, String)> = runs
        .iter()
        .zip(&tables)
        .map(|(r, t)| {
            let format = r.config.output.as_ref().and_then(|o| o.format).unwrap_or(Format::Csv);
            let doc = Document {
                command: command.name(),
                preset,
                tag: r.tag.as_deref(),
                config: &r.config,
                table: t,
            };
            (doc.file_name(format), doc.render(format))
        })
        .collect();
    output::write_all(&out_dir(args, dir), &files)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Trap(a) => (Command::Trap, a),
        Sub::Scatter(a) => (Command::Scatter, a),
        Sub::Params(a) => (Command::Params, a),
        Sub::Pair(a) => (Command::Pair, a),
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Dynamics(a) => (Command::Dynamics, a),
        Sub::Entropy(a) => (Command::Entropy, a),
        Sub::Fluct(a) => (Command::Fluct, a),
        Sub::Presets => {
            for name in presets::NAMES {
                let p = presets::preset(name).expect("listed preset");
                println!("{name:8} {:9} {}", p.command.name(), p.about);
            }
            return ExitCode::SUCCESS;
        }
    };
    match execute(command, &args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("twosite: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
