//! Effective run configuration: built-in figure defaults, overridden by a
//! flat `key = value` config file, overridden by command-line flags. The
//! effective values are echoed into every output file so a run can be
//! reproduced from its artifacts.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

/// The four computational subcommands (`fig` expands to these).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcmd {
    EntropySweep,
    Distribution,
    Dynamics,
    SeCurve,
}

impl Subcmd {
    pub fn name(self) -> &'static str {
        match self {
            Subcmd::EntropySweep => "entropy-sweep",
            Subcmd::Distribution => "distribution",
            Subcmd::Dynamics => "dynamics",
            Subcmd::SeCurve => "se-curve",
        }
    }

    fn from_name(s: &str) -> Result<Self> {
        match s {
            "entropy-sweep" => Ok(Subcmd::EntropySweep),
            "distribution" => Ok(Subcmd::Distribution),
            "dynamics" => Ok(Subcmd::Dynamics),
            "se-curve" => Ok(Subcmd::SeCurve),
            other => bail!("unknown subcommand '{other}'"),
        }
    }
}

/// Raw option values before precedence resolution; every field mirrors a
/// command-line flag and a config-file key.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub length: Option<f64>,
    pub mass: Option<f64>,
    pub temperature: Option<f64>,
    pub n_max: Option<Option<usize>>,
    pub gamma: Option<f64>,
    pub ratios: Option<Vec<f64>>,
    pub temps: Option<Vec<f64>>,
    pub nx: Option<usize>,
    pub nt: Option<usize>,
    pub emit_plots: Option<bool>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Later sources win field-by-field.
    fn overlay(self, over: Overrides) -> Overrides {
        Overrides {
            length: over.length.or(self.length),
            mass: over.mass.or(self.mass),
            temperature: over.temperature.or(self.temperature),
            n_max: over.n_max.or(self.n_max),
            gamma: over.gamma.or(self.gamma),
            ratios: over.ratios.or(self.ratios),
            temps: over.temps.or(self.temps),
            nx: over.nx.or(self.nx),
            nt: over.nt.or(self.nt),
            emit_plots: over.emit_plots.or(self.emit_plots),
            workers: over.workers.or(self.workers),
            out: over.out.or(self.out),
        }
    }
}

/// Fully resolved, validated configuration of one subcommand run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: Subcmd,
    pub length: f64,
    pub mass: f64,
    pub temperature: f64,
    pub n_max: Option<usize>,
    pub gamma: f64,
    pub ratios: Vec<f64>,
    pub temps: Vec<f64>,
    pub nx: usize,
    pub nt: usize,
    pub emit_plots: bool,
    pub workers: usize,
    pub out: PathBuf,
}

/// Time windows of the dynamics figures, in units of `hbar/alpha`.
pub const DYNAMICS_WINDOWS: [(f64, f64); 2] = [(0.0, 5.0), (35.0, 40.0)];

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (lo.log10(), hi.log10());
    let mut grid: Vec<f64> =
        (0..n).map(|i| 10f64.powf(la + (lb - la) * (i as f64) / ((n - 1) as f64))).collect();
    // pin the endpoints against log/exp rounding
    grid[0] = lo;
    grid[n - 1] = hi;
    grid
}

fn default_ratios(subcommand: Subcmd) -> Vec<f64> {
    match subcommand {
        Subcmd::EntropySweep => log_grid(0.05, 100.0, 60),
        _ => Vec::new(),
    }
}

fn default_temps(subcommand: Subcmd) -> Vec<f64> {
    match subcommand {
        Subcmd::Distribution => vec![1.0, 100.0, 1000.0],
        Subcmd::Dynamics => vec![1.0, 100.0],
        Subcmd::SeCurve => {
            let mut t = vec![0.0];
            t.extend(log_grid(0.1, 1e4, 49));
            t
        }
        Subcmd::EntropySweep => Vec::new(),
    }
}

impl RunConfig {
    /// Resolves defaults < config file < explicit flags, then validates
    /// every numeric parameter before any computation starts.
    pub fn resolve(subcommand: Subcmd, flags: Overrides, config_file: Option<&Path>) -> Result<Self> {
        let mut merged = Overrides::default();
        if let Some(path) = config_file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            merged = merged.overlay(parse_config_text(&text, subcommand)?);
        }
        merged = merged.overlay(flags);

        let out = merged
            .out
            .or_else(|| std::env::var_os("BOXGAS_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let cfg = RunConfig {
            subcommand,
            length: merged.length.unwrap_or(1.0),
            mass: merged.mass.unwrap_or(1.0),
            temperature: merged.temperature.unwrap_or(1.0),
            n_max: merged.n_max.unwrap_or(None),
            gamma: merged.gamma.unwrap_or(0.1),
            ratios: merged.ratios.unwrap_or_else(|| default_ratios(subcommand)),
            temps: merged.temps.unwrap_or_else(|| default_temps(subcommand)),
            nx: merged.nx.unwrap_or(401),
            nt: merged.nt.unwrap_or(250),
            emit_plots: merged.emit_plots.unwrap_or(false),
            workers: merged.workers.unwrap_or_else(num_cpus),
            out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                bail!("{name} must be finite and > 0, got {v}")
            }
        };
        pos("L", self.length)?;
        pos("M", self.mass)?;
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            bail!("T must be finite and >= 0, got {}", self.temperature);
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            bail!("gamma must be finite and >= 0, got {}", self.gamma);
        }
        if let Some(n) = self.n_max {
            if n < 4 {
                bail!("n_max must be >= 4, got {n}");
            }
        }
        if self.workers == 0 {
            bail!("workers must be >= 1");
        }
        match self.subcommand {
            Subcmd::EntropySweep => {
                if self.ratios.is_empty() {
                    bail!("ratio grid is empty");
                }
                if !self.ratios.iter().all(|r| r.is_finite() && *r > 0.0) {
                    bail!("ratios must be finite and positive");
                }
                if !self.ratios.windows(2).all(|w| w[1] > w[0]) {
                    bail!("ratios must be strictly increasing");
                }
                if self.temperature == 0.0 {
                    bail!("entropy-sweep varies L at fixed T and needs T > 0");
                }
            }
            Subcmd::Distribution | Subcmd::Dynamics => {
                if self.temps.is_empty() {
                    bail!("temperature list is empty");
                }
                if !self.temps.iter().all(|t| t.is_finite() && *t >= 0.0) {
                    bail!("temperatures must be finite and >= 0");
                }
                if self.nx < 3 || self.nt < 2 {
                    bail!("grid too small: nx={}, nt={}", self.nx, self.nt);
                }
            }
            Subcmd::SeCurve => {
                if self.temps.is_empty() {
                    bail!("temperature grid is empty");
                }
                if !self.temps.iter().all(|t| t.is_finite() && *t >= 0.0) {
                    bail!("temperatures must be finite and >= 0");
                }
                if !self.temps.windows(2).all(|w| w[1] > w[0]) {
                    bail!("temperatures must be strictly increasing");
                }
            }
        }
        Ok(())
    }

    /// The `key = value` lines echoed into every output file: exactly the
    /// parameters the subcommand reads, so the echo is a complete recipe
    /// for the bytes that follow. `out`, `workers` and `emit_plots` change
    /// where and how results land, never what they contain.
    pub fn echo_lines(&self) -> Vec<String> {
        let fmt_list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let n_max = self.n_max.map_or_else(|| "auto".to_string(), |n| n.to_string());
        let mut lines = vec![format!("subcommand = {}", self.subcommand.name())];
        match self.subcommand {
            Subcmd::EntropySweep => {
                lines.push(format!("M = {}", self.mass));
                lines.push(format!("T = {}", self.temperature));
                lines.push(format!("n_max = {n_max}"));
                lines.push(format!("ratios = {}", fmt_list(&self.ratios)));
            }
            Subcmd::Distribution | Subcmd::SeCurve => {
                lines.push(format!("L = {}", self.length));
                lines.push(format!("M = {}", self.mass));
                lines.push(format!("n_max = {n_max}"));
                lines.push(format!("temps = {}", fmt_list(&self.temps)));
            }
            Subcmd::Dynamics => {
                lines.push(format!("L = {}", self.length));
                lines.push(format!("M = {}", self.mass));
                lines.push(format!("n_max = {n_max}"));
                lines.push(format!("gamma = {}", self.gamma));
                lines.push(format!("temps = {}", fmt_list(&self.temps)));
                lines.push(format!("nx = {}", self.nx));
                lines.push(format!("nt = {}", self.nt));
            }
        }
        lines
    }
}

fn num_cpus() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("bad number '{s}': {e}")))
        .collect()
}

/// Parses the flat `key = value` format: UTF-8 text, `#` comment lines,
/// blank lines ignored, unknown keys rejected.
pub fn parse_config_text(text: &str, subcommand: Subcmd) -> Result<Overrides> {
    let mut seen: HashMap<&str, ()> = HashMap::new();
    let mut over = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected 'key = value', got '{line}'", idx + 1))?;
        let key = key.trim();
        let value = value.trim();
        if seen.insert(key_str(key)?, ()).is_some() {
            bail!("line {}: duplicate key '{key}'", idx + 1);
        }
        match key {
            "subcommand" => {
                let named = Subcmd::from_name(value)?;
                if named != subcommand {
                    bail!(
                        "config file is for '{}' but the invoked subcommand is '{}'",
                        value,
                        subcommand.name()
                    );
                }
            }
            "L" => over.length = Some(value.parse()?),
            "M" => over.mass = Some(value.parse()?),
            "T" => over.temperature = Some(value.parse()?),
            "n_max" => {
                over.n_max = Some(if value == "auto" { None } else { Some(value.parse()?) })
            }
            "gamma" => over.gamma = Some(value.parse()?),
            "ratios" => over.ratios = Some(parse_list(value)?),
            "temps" => over.temps = Some(parse_list(value)?),
            "nx" => over.nx = Some(value.parse()?),
            "nt" => over.nt = Some(value.parse()?),
            "emit_plots" => over.emit_plots = Some(value.parse()?),
            "workers" => over.workers = Some(value.parse()?),
            "out" => over.out = Some(PathBuf::from(value)),
            _ => unreachable!("key_str vetted the key"),
        }
    }
    Ok(over)
}

fn key_str(key: &str) -> Result<&'static str> {
    const KEYS: [&str; 13] = [
        "subcommand",
        "L",
        "M",
        "T",
        "n_max",
        "gamma",
        "ratios",
        "temps",
        "nx",
        "nt",
        "emit_plots",
        "workers",
        "out",
    ];
    KEYS.iter().find(|k| **k == key).copied().ok_or_else(|| anyhow!("unknown key '{key}'"))
}
