//! Command-line front end for `qwskel`.
//!
//! [`run`] parses arguments, resolves the configuration (flags over `--config` file over
//! defaults), executes the command and writes its body, side tables and manifest.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use args::Cli;
use commands::{Body, CommandOutput};
use config::{ConfigFile, RunConfig, SEED_ENV};
use error::{CliError, CliResult};
use table::{Format, Table};

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub results: &'a Value,
    pub elapsed_ms: u128,
}

/// Where the manifest goes: `--manifest`, else `<out>.manifest.json`, else nowhere.
pub fn manifest_path(cfg: &RunConfig) -> Option<PathBuf> {
    cfg.manifest.clone().or_else(|| {
        cfg.out.as_ref().map(|out| {
            let mut name = out.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    })
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(e, &format!("creating {}", path.display())))
}

fn write_body<W: Write + ?Sized>(body: &Body, format: Format, out: &mut W) -> std::io::Result<()> {
    match body {
        Body::Table(t) => t.write(format, out),
        Body::Json(v) => {
            serde_json::to_writer_pretty(&mut *out, v)?;
            writeln!(out)
        }
    }
}

fn write_table_file(path: &Path, table: &Table, format: Format) -> CliResult<()> {
    let mut w = create(path)?;
    table
        .write(format, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(e, &format!("writing {}", path.display())))
}

/// Resolves the configuration for an already parsed command line.
pub fn resolve(cli: Cli) -> CliResult<RunConfig> {
    let inv = cli.into_invocation();
    let file = match &inv.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    RunConfig::resolve(inv.command, &inv.flags, &file, env_seed.as_deref())
}

/// Executes `cfg` and writes everything it produces. Returns the in-memory output too.
pub fn run_config(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<CommandOutput> {
    let started = Instant::now();
    let output = commands::execute(cfg)?;
    let elapsed_ms = started.elapsed().as_millis();

    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            write_body(&output.body, cfg.format, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(e, &format!("writing {}", path.display())))?;
        }
        None => write_body(&output.body, cfg.format, stdout)
            .map_err(|e| CliError::io(e, "writing stdout"))?,
    }
    for (path, table) in &output.side_tables {
        write_table_file(path, table, Format::Csv)?;
    }
    if let Some(path) = manifest_path(cfg) {
        let manifest = Manifest {
            tool: "qwskel",
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            results: &output.results,
            elapsed_ms,
        };
        let mut w = create(&path)?;
        serde_json::to_writer_pretty(&mut w, &manifest)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(w))
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(e, &format!("writing {}", path.display())))?;
    }
    if let Some(msg) = &output.failure {
        return Err(CliError::verification(msg.clone()));
    }
    Ok(output)
}

/// Full entry point: `args` includes the program name. Help and version go to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                write!(stdout, "{}", e.render()).map_err(|e| CliError::io(e, "writing stdout"))?;
                return Ok(());
            }
            _ => {
                let text = e.render().to_string();
                let line = text
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .unwrap_or("invalid arguments")
                    .trim_start_matches("error: ")
                    .to_string();
                return Err(CliError::usage(line));
            }
        },
    };
    let cfg = resolve(cli)?;
    run_config(&cfg, stdout).map(|_| ())
}
