//! The `fqlab` command-line driver: argument parsing, configuration precedence,
//! manifests and the per-subcommand pipelines.

pub mod args;
pub mod commands;
pub mod error;
pub mod experiment;
pub mod io;
pub mod manifest;
pub mod params;

use std::ffi::OsString;
use std::path::Path;

use clap::{CommandFactory, Parser};
use serde_json::Value;

use args::{Cli, Command};
use commands::Outcome;
use error::{CliError, CliResult, EXIT_NUMERICAL, EXIT_VALIDATION};
use manifest::Manifest;
use params::{resolve, CostParams, EvolveParams, ExperimentParams, PrepParams, ShadowsParams, TdhfParams};

/// A fully resolved subcommand.
#[derive(Debug, Clone)]
pub enum Job {
    Evolve(EvolveParams),
    Tdhf(TdhfParams),
    Prep(PrepParams),
    Shadows(ShadowsParams),
    Cost(CostParams),
    Experiment(ExperimentParams),
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Evolve(_) => "evolve",
            Job::Tdhf(_) => "tdhf",
            Job::Prep(_) => "prep",
            Job::Shadows(_) => "shadows",
            Job::Cost(_) => "cost",
            Job::Experiment(_) => "experiment",
        }
    }

    fn from_command(cmd: &Command, config: Option<&Value>) -> CliResult<Self> {
        Ok(match cmd {
            Command::Evolve(a) => Job::Evolve(resolve("evolve", config, a)?),
            Command::Tdhf(a) => Job::Tdhf(resolve("tdhf", config, a)?),
            Command::Prep(a) => Job::Prep(resolve("prep", config, a)?),
            Command::Shadows(a) => Job::Shadows(resolve("shadows", config, a)?),
            Command::Cost(a) => Job::Cost(resolve("cost", config, a)?),
            Command::Experiment(a) => Job::Experiment(resolve("experiment", config, a)?),
        })
    }

    pub fn from_params(subcommand: &str, params: Value) -> CliResult<Self> {
        let bad = |e: serde_json::Error| CliError::usage(format!("manifest parameters for `{subcommand}`: {e}"));
        Ok(match subcommand {
            "evolve" => Job::Evolve(serde_json::from_value(params).map_err(bad)?),
            "tdhf" => Job::Tdhf(serde_json::from_value(params).map_err(bad)?),
            "prep" => Job::Prep(serde_json::from_value(params).map_err(bad)?),
            "shadows" => Job::Shadows(serde_json::from_value(params).map_err(bad)?),
            "cost" => Job::Cost(serde_json::from_value(params).map_err(bad)?),
            "experiment" => Job::Experiment(serde_json::from_value(params).map_err(bad)?),
            other => return Err(CliError::usage(format!("unknown subcommand `{other}`"))),
        })
    }

    pub fn params(&self) -> CliResult<Value> {
        Ok(match self {
            Job::Evolve(p) => serde_json::to_value(p)?,
            Job::Tdhf(p) => serde_json::to_value(p)?,
            Job::Prep(p) => serde_json::to_value(p)?,
            Job::Shadows(p) => serde_json::to_value(p)?,
            Job::Cost(p) => serde_json::to_value(p)?,
            Job::Experiment(p) => serde_json::to_value(p)?,
        })
    }

    pub fn run(&mut self) -> CliResult<Outcome> {
        match self {
            Job::Evolve(p) => commands::evolve(p),
            Job::Tdhf(p) => commands::tdhf(p),
            Job::Prep(p) => commands::prep(p),
            Job::Shadows(p) => commands::shadows(p),
            Job::Cost(p) => commands::cost(p),
            Job::Experiment(p) => experiment::experiment(p),
        }
    }

    /// Runs the job and writes a manifest next to each output.
    pub fn execute(mut self) -> CliResult<Manifest> {
        let outcome = self.run()?;
        let manifest = Manifest::build(self.name(), self.params()?, &outcome.inputs, &outcome.outputs)?;
        manifest.write_alongside()?;
        Ok(manifest)
    }
}

fn replay(path: &Path, replay_dir: Option<&Path>) -> CliResult<()> {
    let recorded = Manifest::load(path)?;
    let changed = recorded.changed_inputs()?;
    if !changed.is_empty() {
        return Err(CliError::usage(format!("inputs changed since the manifest was written: {}", changed.join(", "))));
    }
    let mut params = recorded.params.clone();
    if let Some(dir) = replay_dir {
        std::fs::create_dir_all(dir)?;
        params::redirect_outputs(&mut params, dir);
    }
    let fresh = Job::from_params(&recorded.subcommand, params)?.execute()?;
    let mismatched: Vec<String> = recorded
        .outputs
        .iter()
        .zip(&fresh.outputs)
        .filter(|((_, a), (_, b))| a != b)
        .map(|((p, _), _)| p.clone())
        .collect();
    if !mismatched.is_empty() || recorded.outputs.len() != fresh.outputs.len() {
        return Err(CliError::numerical(format!("replay produced different outputs: {}", mismatched.join(", "))));
    }
    eprintln!("replay: {} output(s) reproduced byte-for-byte", fresh.outputs.len());
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    if let Some(path) = &cli.manifest {
        if cli.command.is_some() || cli.config.is_some() {
            return Err(CliError::usage("--manifest replays a recorded run; it takes no subcommand or --config"));
        }
        return replay(path, cli.replay_dir.as_deref());
    }
    let Some(cmd) = &cli.command else {
        return Err(CliError::usage(Cli::command().render_help().to_string()));
    };
    let config = match &cli.config {
        Some(p) => Some(serde_json::from_str::<Value>(&io::read_text(p)?)?),
        None => None,
    };
    Job::from_command(cmd, config.as_ref())?.execute().map(drop)
}

/// Parses `args` (including the program name) and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::usage("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Err(CliError::usage(format!("thread pool: {e}"))),
        },
        None => dispatch(cli),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            debug_assert!(e.code == EXIT_VALIDATION || e.code == EXIT_NUMERICAL);
            e.code
        }
    }
}
