//! Command-line grammar. Every value is taken as text and parsed later, so flags and
//! config-file entries go through the same validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, RawSettings};

#[derive(Debug, Parser)]
#[command(
    name = "qwskel",
    version,
    about = "Quantum walks, their replicating random walks and skeletons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Top,
}

#[derive(Debug, Subcommand)]
pub enum Top {
    /// Exact quantum-walk evolution.
    Qw {
        #[command(subcommand)]
        cmd: QwCmd,
    },
    /// Quantum-walk-replicating random walk.
    Qwrw {
        #[command(subcommand)]
        cmd: QwrwCmd,
    },
    /// Random walk driven by the skeleton.
    Qsrw {
        #[command(subcommand)]
        cmd: QsrwCmd,
    },
    /// The skeleton function itself.
    Skeleton {
        #[command(subcommand)]
        cmd: SkeletonCmd,
    },
    /// Transition probabilities at time N next to the skeleton: `x,s,p_n,tau,defined`.
    Compare(CommonArgs),
    /// Identity checks and the oscillatory-integral decay sweep; exits 1 on failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum QwCmd {
    /// Position distribution after `--steps` steps: `n,x,mu`.
    Run(QwRunArgs),
}

#[derive(Debug, Subcommand)]
pub enum QwrwCmd {
    /// Transition field for n = 0..=steps: `n,x,p,q,defined`.
    Field(CommonArgs),
    /// Endpoint histogram of sampled trajectories: `x,count`.
    Sample(SampleArgs),
}

#[derive(Debug, Subcommand)]
pub enum QsrwCmd {
    /// Endpoint histogram of sampled trajectories: `x,count`.
    Sample(SampleArgs),
}

#[derive(Debug, Subcommand)]
pub enum SkeletonCmd {
    /// Skeleton values on a grid of s: `s,tau`.
    Eval(SkeletonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// `hadamard`, `a_re,a_im,b_re,b_im,delta`, or key=value overrides such as `a=0.6,b_im=0.8`.
    #[arg(long, allow_hyphen_values = true)]
    pub coin: Option<String>,
    /// `left`, `right`, `symmetric` or `Re φL,Im φL,Re φR,Im φR`.
    #[arg(long, allow_hyphen_values = true)]
    pub init: Option<String>,
    #[arg(long, value_name = "N")]
    pub steps: Option<String>,
    /// Defaults to $QWSKEL_SEED, then 0.
    #[arg(long)]
    pub seed: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Manifest file; defaults to `<out>.manifest.json` when `--out` is given.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct QwRunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `ambainis` (U = SC) or `gudder` (U = CS).
    #[arg(long)]
    pub convention: Option<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub trials: Option<String>,
    /// Caps the worker count; results do not depend on it.
    #[arg(long)]
    pub threads: Option<String>,
}

#[derive(Debug, Args)]
pub struct SkeletonArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `auto`, `inside` or `outside`.
    #[arg(long)]
    pub branch: Option<String>,
    /// Explicit comma-separated s values.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Number of evenly spaced interior points of (-1, 1) when `--s` is absent.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Times n for the oscillatory-integral sweep.
    #[arg(long)]
    pub rl_n: Option<String>,
    /// Random coins in the identity suite, besides `--coin`.
    #[arg(long)]
    pub lemma_coins: Option<String>,
    /// Largest n in the identity suite.
    #[arg(long)]
    pub lemma_n: Option<String>,
    /// Times n at which to report the weak residual.
    #[arg(long)]
    pub residual_n: Option<String>,
    /// Residual window `l,r`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Also write `n,abs_In,err_est` here.
    #[arg(long, value_name = "FILE")]
    pub rl_csv: Option<String>,
    /// Also write `n,residual` here.
    #[arg(long, value_name = "FILE")]
    pub residual_csv: Option<String>,
}

impl CommonArgs {
    fn collect(&self, raw: &mut RawSettings) -> Option<PathBuf> {
        raw.set("coin", self.coin.clone());
        raw.set("init", self.init.clone());
        raw.set("steps", self.steps.clone());
        raw.set("seed", self.seed.clone());
        raw.set("out", self.out.as_ref().map(|p| p.display().to_string()));
        raw.set(
            "manifest",
            self.manifest.as_ref().map(|p| p.display().to_string()),
        );
        raw.set("format", self.format.clone());
        self.config.clone()
    }
}

impl SampleArgs {
    fn collect(&self, raw: &mut RawSettings) -> Option<PathBuf> {
        raw.set("trials", self.trials.clone());
        raw.set("threads", self.threads.clone());
        self.common.collect(raw)
    }
}

/// What the parsed command line amounts to: the command, its flag values and the config file.
pub struct Invocation {
    pub command: Command,
    pub flags: RawSettings,
    pub config: Option<PathBuf>,
}

impl Cli {
    pub fn into_invocation(self) -> Invocation {
        let mut raw = RawSettings::default();
        let (command, config) = match &self.command {
            Top::Qw { cmd: QwCmd::Run(a) } => {
                raw.set("convention", a.convention.clone());
                (Command::QwRun, a.common.collect(&mut raw))
            }
            Top::Qwrw {
                cmd: QwrwCmd::Field(a),
            } => (Command::QwrwField, a.collect(&mut raw)),
            Top::Qwrw {
                cmd: QwrwCmd::Sample(a),
            } => (Command::QwrwSample, a.collect(&mut raw)),
            Top::Qsrw {
                cmd: QsrwCmd::Sample(a),
            } => (Command::QsrwSample, a.collect(&mut raw)),
            Top::Skeleton {
                cmd: SkeletonCmd::Eval(a),
            } => {
                raw.set("branch", a.branch.clone());
                raw.set("s", a.s.clone());
                raw.set("grid", a.grid.clone());
                (Command::SkeletonEval, a.common.collect(&mut raw))
            }
            Top::Compare(a) => (Command::Compare, a.collect(&mut raw)),
            Top::Verify(a) => {
                raw.set("rl-n", a.rl_n.clone());
                raw.set("lemma-coins", a.lemma_coins.clone());
                raw.set("lemma-n", a.lemma_n.clone());
                raw.set("residual-n", a.residual_n.clone());
                raw.set("window", a.window.clone());
                raw.set("rl-csv", a.rl_csv.clone());
                raw.set("residual-csv", a.residual_csv.clone());
                (Command::Verify, a.common.collect(&mut raw))
            }
        };
        Invocation {
            command,
            flags: raw,
            config,
        }
    }
}
