//! Effective run configuration: flags layered over an optional config file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use qslcv::spectrum::BranchCut;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Auto,
    Fixed(f64),
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "auto" {
            return Ok(Step::Auto);
        }
        let h: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("step must be \"auto\" or a number, got {s:?}"))?;
        if !(h > 0.0 && h.is_finite()) {
            return Err(format!("step must be > 0, got {h}"));
        }
        Ok(Step::Fixed(h))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Auto => write!(f, "auto"),
            Step::Fixed(h) => write!(f, "{h}"),
        }
    }
}

/// `START:STOP:COUNT`, with an optional `:log` suffix for geometric spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Sweep {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            log: false,
        }
    }

    pub fn geometric(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            log: true,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                if self.log {
                    (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + f * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || format!("sweep must look like START:STOP:COUNT[:log], got {s:?}");
        if !(parts.len() == 3 || parts.len() == 4) {
            return Err(bad());
        }
        let start: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(_) => return Err(bad()),
        };
        if count < 2 {
            return Err(format!("sweep count must be >= 2, got {count}"));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(bad());
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err("a log sweep needs positive end points".into());
        }
        Ok(Sweep {
            start,
            stop,
            count,
            log,
        })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Volterra solve of the exact amplitude equation.
    Exact,
    /// Born–Markov exponential decay.
    Markov,
    /// Pole term plus the optional branch-cut integral.
    BoundState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cut {
    Off,
    Standard,
    Doubled,
}

impl From<Cut> for BranchCut {
    fn from(c: Cut) -> Self {
        match c {
            Cut::Off => BranchCut::Off,
            Cut::Standard => BranchCut::Standard,
            Cut::Doubled => BranchCut::DoubledWidth,
        }
    }
}

fn value_name<V: ValueEnum>(v: V) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to per-command defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Coupling strength η (>= 0).
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Ohmicity s (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Cutoff frequency ω_c in units of ω₀ (> 0).
    #[arg(long = "omega-c", allow_negative_numbers = true)]
    pub omega_c: Option<f64>,
    /// Coherent amplitude |α| (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Horizon ω₀τ (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Solver step: "auto" or a positive number.
    #[arg(long)]
    pub step: Option<Step>,
    /// Output file; standard output when absent. fig2 treats it as a stem.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// evolve: integrate a discretized bath instead of the Volterra equation.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub oracle: Option<bool>,
    /// Continuum term for the bound-state model.
    #[arg(long = "branch-cut", value_enum)]
    pub branch_cut: Option<Cut>,
    /// Include the Lamb shift Δ(ω₀) in the Markov model.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub shift: Option<bool>,
    /// Amplitude model for evolve and qsl.
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Sweep over η.
    #[arg(long = "eta-sweep")]
    pub eta_sweep: Option<Sweep>,
    /// Sweep over s.
    #[arg(long = "s-sweep")]
    pub s_sweep: Option<Sweep>,
    /// Sweep over ω_c.
    #[arg(long = "omega-c-sweep")]
    pub omega_c_sweep: Option<Sweep>,
    /// Sweep over horizons ω₀τ.
    #[arg(long = "tau-sweep")]
    pub tau_sweep: Option<Sweep>,
}

/// Per-command fallbacks for keys that neither flag nor file set.
#[derive(Debug, Clone, Default)]
pub struct Defaults {
    pub step: Option<Step>,
    pub eta_sweep: Option<Sweep>,
    pub s_sweep: Option<Sweep>,
    pub omega_c_sweep: Option<Sweep>,
    pub tau_sweep: Option<Sweep>,
    /// Drop a default sweep when its scalar (`s`, `omega-c`) is set explicitly.
    pub scalar_overrides_sweep: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub eta: f64,
    pub s: f64,
    pub omega_c: f64,
    pub alpha: f64,
    pub tau: f64,
    pub step: Step,
    pub out: Option<PathBuf>,
    pub oracle: bool,
    pub branch_cut: Cut,
    pub shift: bool,
    pub model: Model,
    pub eta_sweep: Option<Sweep>,
    pub s_sweep: Option<Sweep>,
    pub omega_c_sweep: Option<Sweep>,
    pub tau_sweep: Option<Sweep>,
}

const KEYS: &[&str] = &[
    "eta",
    "s",
    "omega-c",
    "alpha",
    "tau",
    "step",
    "out",
    "oracle",
    "branch-cut",
    "shift",
    "model",
    "eta-sweep",
    "s-sweep",
    "omega-c-sweep",
    "tau-sweep",
];

/// Parses `key = value` lines. Keys are flag names without dashes; `_` and
/// `-` are interchangeable.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", n + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key {:?}",
                n + 1,
                k.trim()
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn pick<V: FromStr>(
    flag: Option<V>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<V>, CliError>
where
    V::Err: fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
    }
}

fn pick_enum<V: ValueEnum>(
    flag: Option<V>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<V>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(v) => V::from_str(v, false)
            .map(Some)
            .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
    }
}

impl RunConfig {
    pub fn resolve(command: &str, flags: &Flags, defaults: Defaults) -> Result<Self, CliError> {
        let file = match &flags.config {
            None => BTreeMap::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse_config_file(&text)?
            }
        };
        let s = pick(flags.s, &file, "s")?;
        let omega_c = pick(flags.omega_c, &file, "omega-c")?;
        let mut defaults = defaults;
        if defaults.scalar_overrides_sweep {
            if s.is_some() {
                defaults.s_sweep = None;
            }
            if omega_c.is_some() {
                defaults.omega_c_sweep = None;
            }
        }
        let cfg = RunConfig {
            command: command.to_string(),
            eta: pick(flags.eta, &file, "eta")?.unwrap_or(0.12),
            s: s.unwrap_or(1.0),
            omega_c: omega_c.unwrap_or(10.0),
            alpha: pick(flags.alpha, &file, "alpha")?.unwrap_or(10.0),
            tau: pick(flags.tau, &file, "tau")?.unwrap_or(400.0),
            step: pick(flags.step, &file, "step")?
                .or(defaults.step)
                .unwrap_or(Step::Auto),
            out: pick(flags.out.clone(), &file, "out")?,
            oracle: pick(flags.oracle, &file, "oracle")?.unwrap_or(false),
            branch_cut: pick_enum(flags.branch_cut, &file, "branch-cut")?.unwrap_or(Cut::Off),
            shift: pick(flags.shift, &file, "shift")?.unwrap_or(false),
            model: pick_enum(flags.model, &file, "model")?.unwrap_or(Model::Exact),
            eta_sweep: pick(flags.eta_sweep, &file, "eta-sweep")?.or(defaults.eta_sweep),
            s_sweep: pick(flags.s_sweep, &file, "s-sweep")?.or(defaults.s_sweep),
            omega_c_sweep: pick(flags.omega_c_sweep, &file, "omega-c-sweep")?
                .or(defaults.omega_c_sweep),
            tau_sweep: pick(flags.tau_sweep, &file, "tau-sweep")?.or(defaults.tau_sweep),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let check = |name: &str, v: f64, ok: bool| {
            if ok && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} out of range: {v}")))
            }
        };
        check("eta (must be >= 0)", self.eta, self.eta >= 0.0)?;
        check("s (must be > 0)", self.s, self.s > 0.0)?;
        check("omega-c (must be > 0)", self.omega_c, self.omega_c > 0.0)?;
        check("alpha (must be > 0)", self.alpha, self.alpha > 0.0)?;
        check("tau (must be > 0)", self.tau, self.tau > 0.0)?;
        let positive = |name: &str, sw: &Option<Sweep>, allow_zero: bool| match sw {
            Some(sw)
                if sw
                    .values()
                    .iter()
                    .any(|&v| v < 0.0 || (!allow_zero && v == 0.0)) =>
            {
                Err(CliError::Usage(format!(
                    "{name} sweep {sw} leaves the allowed range"
                )))
            }
            _ => Ok(()),
        };
        positive("eta", &self.eta_sweep, true)?;
        positive("s", &self.s_sweep, false)?;
        positive("omega-c", &self.omega_c_sweep, false)?;
        positive("tau", &self.tau_sweep, false)
    }

    /// Echo of every effective setting, in a fixed order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let opt = |s: &Option<Sweep>| s.map_or("none".to_string(), |s| s.to_string());
        vec![
            ("command".into(), self.command.clone()),
            ("eta".into(), self.eta.to_string()),
            ("s".into(), self.s.to_string()),
            ("omega-c".into(), self.omega_c.to_string()),
            ("alpha".into(), self.alpha.to_string()),
            ("tau".into(), self.tau.to_string()),
            ("step".into(), self.step.to_string()),
            ("model".into(), value_name(self.model)),
            ("shift".into(), self.shift.to_string()),
            ("branch-cut".into(), value_name(self.branch_cut)),
            ("oracle".into(), self.oracle.to_string()),
            ("eta-sweep".into(), opt(&self.eta_sweep)),
            ("s-sweep".into(), opt(&self.s_sweep)),
            ("omega-c-sweep".into(), opt(&self.omega_c_sweep)),
            ("tau-sweep".into(), opt(&self.tau_sweep)),
        ]
    }
}
