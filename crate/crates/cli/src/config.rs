//! Run configuration: flags, flat `key = value` files and their validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qwskel::coin::CoinParams;
use qwskel::skeleton::Branch;
use qwskel::{CoinSpec, Convention, InitialState};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::table::Format;

/// Environment variable consulted when neither a flag nor the config file sets `seed`.
pub const SEED_ENV: &str = "QWSKEL_SEED";

/// Keys accepted in config files; each mirrors the long flag of the same name.
pub const KNOWN_KEYS: &[&str] = &[
    "coin",
    "init",
    "steps",
    "trials",
    "seed",
    "threads",
    "out",
    "manifest",
    "format",
    "convention",
    "branch",
    "s",
    "grid",
    "rl-n",
    "lemma-coins",
    "lemma-n",
    "residual-n",
    "window",
    "rl-csv",
    "residual-csv",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    QwRun,
    QwrwField,
    QwrwSample,
    QsrwSample,
    SkeletonEval,
    Compare,
    Verify,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile(BTreeMap<String, String>);

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::usage(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile(map))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(e, &format!("reading {}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

/// Raw, unparsed settings as they arrive from flags; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct RawSettings {
    pub values: BTreeMap<&'static str, String>,
}

impl RawSettings {
    pub fn set(&mut self, key: &'static str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key, v);
        }
    }
}

/// Looks a key up in flags first, then in the file.
struct Lookup<'a> {
    flags: &'a RawSettings,
    file: &'a ConfigFile,
}

impl Lookup<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.flags
            .values
            .get(key)
            .map(String::as_str)
            .or_else(|| self.file.get(key))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::usage(format!("--{key} `{v}`: {e}")))
            })
            .transpose()
    }
}

/// A fully resolved and validated configuration; serialised verbatim into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub coin: CoinParams,
    /// `(Re φ_L, Im φ_L, Re φ_R, Im φ_R)`.
    pub phi: [f64; 4],
    pub steps: usize,
    pub trials: u64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub format: Format,
    pub convention: Convention,
    pub branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    pub grid: usize,
    pub rl_n: Vec<u64>,
    pub lemma_coins: usize,
    pub lemma_n: usize,
    pub residual_n: Vec<usize>,
    pub window: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rl_csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_csv: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for `command`, before any flags or file.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            coin: CoinParams::HADAMARD,
            phi: [1.0, 0.0, 0.0, 0.0],
            steps: 100,
            trials: 10_000,
            seed: 0,
            threads: None,
            out: None,
            manifest: None,
            format: Format::Csv,
            convention: Convention::Ambainis,
            branch: Branch::Auto,
            s: None,
            grid: 201,
            rl_n: vec![10, 100, 1000],
            lemma_coins: 10,
            lemma_n: 50,
            residual_n: Vec::new(),
            window: (-0.5, 0.5),
            rl_csv: None,
            residual_csv: None,
        }
    }

    /// Merges flags over the file over the defaults, then validates the result.
    pub fn resolve(
        command: Command,
        flags: &RawSettings,
        file: &ConfigFile,
        env_seed: Option<&str>,
    ) -> CliResult<Self> {
        let look = Lookup { flags, file };
        let mut cfg = RunConfig::new(command);
        if let Some(c) = look.raw("coin") {
            cfg.coin = parse_coin(c)?;
        }
        if let Some(p) = look.raw("init") {
            cfg.phi = parse_init(p)?;
        }
        if let Some(v) = look.parse("steps")? {
            cfg.steps = v;
        }
        if let Some(v) = look.parse("trials")? {
            cfg.trials = v;
        }
        match look.parse::<u64>("seed")? {
            Some(v) => cfg.seed = v,
            None => {
                if let Some(v) = env_seed {
                    cfg.seed = v
                        .trim()
                        .parse()
                        .map_err(|e| CliError::usage(format!("{SEED_ENV} `{v}`: {e}")))?;
                }
            }
        }
        cfg.threads = look.parse("threads")?;
        if cfg.threads == Some(0) {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        cfg.out = look.raw("out").map(PathBuf::from);
        cfg.manifest = look.raw("manifest").map(PathBuf::from);
        if let Some(v) = look.parse("format")? {
            cfg.format = v;
        }
        if let Some(v) = look.raw("convention") {
            cfg.convention = match v {
                "ambainis" => Convention::Ambainis,
                "gudder" => Convention::Gudder,
                other => {
                    return Err(CliError::usage(format!(
                        "unknown convention `{other}` (ambainis|gudder)"
                    )))
                }
            };
        }
        if let Some(v) = look.raw("branch") {
            cfg.branch = v
                .parse()
                .map_err(|e: qwskel::Error| CliError::usage(e.to_string()))?;
        }
        if let Some(v) = look.raw("s") {
            cfg.s = Some(parse_list("s", v)?);
        }
        if let Some(v) = look.parse("grid")? {
            cfg.grid = v;
        }
        if let Some(v) = look.raw("rl-n") {
            cfg.rl_n = parse_list("rl-n", v)?;
        }
        if let Some(v) = look.parse("lemma-coins")? {
            cfg.lemma_coins = v;
        }
        if let Some(v) = look.parse("lemma-n")? {
            cfg.lemma_n = v;
        }
        if let Some(v) = look.raw("residual-n") {
            cfg.residual_n = parse_list("residual-n", v)?;
        }
        if let Some(v) = look.raw("window") {
            match parse_list::<f64>("window", v)?[..] {
                [l, r] => cfg.window = (l, r),
                _ => return Err(CliError::usage("--window takes two numbers `l,r`")),
            }
        }
        cfg.rl_csv = look.raw("rl-csv").map(PathBuf::from);
        cfg.residual_csv = look.raw("residual-csv").map(PathBuf::from);

        // surface coin and state errors before any work starts
        cfg.coin_spec()?;
        cfg.initial_state()?;
        Ok(cfg)
    }

    pub fn coin_spec(&self) -> CliResult<CoinSpec> {
        Ok(CoinSpec::from_params(&self.coin)?)
    }

    pub fn initial_state(&self) -> CliResult<InitialState> {
        let [a, b, c, d] = self.phi;
        Ok(InitialState::from_reals(a, b, c, d)?)
    }
}

fn parse_real(key: &str, v: &str) -> CliResult<f64> {
    let v = v.trim();
    match v {
        "pi" => Ok(std::f64::consts::PI),
        "-pi" => Ok(-std::f64::consts::PI),
        _ => v
            .parse()
            .map_err(|e| CliError::usage(format!("{key}: `{v}`: {e}"))),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    v.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|e| CliError::usage(format!("--{key} `{item}`: {e}")))
        })
        .collect()
}

/// `hadamard`, five reals `a_re,a_im,b_re,b_im,delta`, or `key=value` overrides of the
/// Hadamard preset (`a`, `b` set a real entry; `a_re`, `a_im`, `b_re`, `b_im`, `delta`).
pub fn parse_coin(spec: &str) -> CliResult<CoinParams> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("hadamard") {
        return Ok(CoinParams::HADAMARD);
    }
    if spec.contains('=') {
        let mut p = CoinParams::HADAMARD;
        for pair in spec.split(',') {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                CliError::usage(format!("--coin: expected key=value, got `{pair}`"))
            })?;
            let v = parse_real("--coin", v)?;
            match k.trim() {
                "a" => (p.a_re, p.a_im) = (v, 0.0),
                "b" => (p.b_re, p.b_im) = (v, 0.0),
                "a_re" => p.a_re = v,
                "a_im" => p.a_im = v,
                "b_re" => p.b_re = v,
                "b_im" => p.b_im = v,
                "delta" => p.delta = v,
                other => return Err(CliError::usage(format!("--coin: unknown key `{other}`"))),
            }
        }
        return Ok(p);
    }
    let parts = spec
        .split(',')
        .map(|v| parse_real("--coin", v))
        .collect::<CliResult<Vec<f64>>>()?;
    match parts[..] {
        [a_re, a_im, b_re, b_im, delta] => Ok(CoinParams {
            a_re,
            a_im,
            b_re,
            b_im,
            delta,
        }),
        _ => Err(CliError::usage(format!(
            "--coin takes `hadamard`, five reals or key=value pairs, got `{spec}`"
        ))),
    }
}

/// `left`, `right`, `symmetric` (`(1, i)/√2`) or four reals `Re φ_L, Im φ_L, Re φ_R, Im φ_R`.
pub fn parse_init(spec: &str) -> CliResult<[f64; 4]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match spec.trim() {
        "left" => return Ok([1.0, 0.0, 0.0, 0.0]),
        "right" => return Ok([0.0, 0.0, 1.0, 0.0]),
        "symmetric" => return Ok([h, 0.0, 0.0, h]),
        _ => {}
    }
    let parts = spec
        .split(',')
        .map(|v| parse_real("--init", v))
        .collect::<CliResult<Vec<f64>>>()?;
    parts
        .try_into()
        .map_err(|_| CliError::usage(format!("--init takes four reals, got `{spec}`")))
}
