use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::drive::{Angle, DriveRule};
use crate::error::{QtmError, Result};
use crate::metrics::Subsystem;
use crate::statevec::{NetworkState, TapeSpin};

/// The experiments the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Pattern,
    Bures,
    Stability,
    Table1,
    Simulate,
    OrbitSearch,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Pattern => "pattern",
            ExperimentKind::Bures => "bures",
            ExperimentKind::Stability => "stability",
            ExperimentKind::Table1 => "table1",
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::OrbitSearch => "orbit-search",
        })
    }
}

impl FromStr for ExperimentKind {
    type Err = QtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "pattern" => Ok(ExperimentKind::Pattern),
            "bures" => Ok(ExperimentKind::Bures),
            "stability" => Ok(ExperimentKind::Stability),
            "table1" => Ok(ExperimentKind::Table1),
            "simulate" => Ok(ExperimentKind::Simulate),
            "orbit-search" => Ok(ExperimentKind::OrbitSearch),
            other => Err(QtmError::InvalidArgument(format!("unknown experiment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = QtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(QtmError::InvalidArgument(format!(
                "format `{other}` (expected csv or json)"
            ))),
        }
    }
}

/// Initial product state: a head angle followed by one token per tape spin,
/// e.g. `0,0`, `0,+` or `1/2 pi,-,1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialSpec {
    pub head: Angle,
    pub tape: Vec<TapeSpin>,
}

impl InitialSpec {
    pub fn ground() -> Self {
        InitialSpec {
            head: Angle::zero(),
            tape: vec![TapeSpin::Zero],
        }
    }

    pub fn state(&self) -> Result<NetworkState> {
        NetworkState::product(self.head.radians(), &self.tape)
    }

    /// The same initial state with the head angle shifted by `delta` radians.
    pub fn shifted_state(&self, delta: f64) -> Result<NetworkState> {
        NetworkState::product(self.head.radians() + delta, &self.tape)
    }

    /// `|0⟩ ⊗ |0⟩`.
    pub fn is_ground(&self) -> bool {
        self.head.radians() == 0.0 && self.tape == [TapeSpin::Zero]
    }
}

impl FromStr for InitialSpec {
    type Err = QtmError;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',');
        let head: Angle = parts.next().unwrap_or_default().parse()?;
        let tape = parts.map(str::parse).collect::<Result<Vec<TapeSpin>>>()?;
        if tape.is_empty() {
            return Err(QtmError::InvalidArgument(format!(
                "initial state `{s}` needs a head angle and at least one tape spin"
            )));
        }
        Ok(InitialSpec { head, tape })
    }
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for t in &self.tape {
            write!(f, ",{t}")?;
        }
        Ok(())
    }
}

/// Everything one run needs. Runs are deterministic: the same config gives
/// byte-identical output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub alpha1: Angle,
    pub delta: f64,
    pub steps: usize,
    pub driver: DriveRule,
    pub initial: InitialSpec,
    pub subsystem: Subsystem,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub m_max: Option<u64>,
}

/// Keys accepted in config files and as `--key value` flags.
pub const CONFIG_KEYS: [&str; 10] = [
    "experiment",
    "alpha1",
    "delta",
    "steps",
    "driver",
    "initial",
    "subsystem",
    "out",
    "format",
    "m-max",
];

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            alpha1: Angle::exact(2, 5).expect("valid default angle"),
            delta: 1e-3,
            steps: 100,
            driver: DriveRule::Fibonacci,
            initial: InitialSpec::ground(),
            subsystem: Subsystem::Head,
            out: None,
            format: OutputFormat::Csv,
            m_max: None,
        }
    }

    /// Sets one key from its text form. Keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| QtmError::InvalidArgument(format!("{what} `{value}`"));
        match key.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "experiment" => self.experiment = value.parse()?,
            "alpha1" => self.alpha1 = value.parse()?,
            "delta" => {
                let delta: f64 = value.parse().map_err(|_| bad("delta"))?;
                if !delta.is_finite() {
                    return Err(bad("delta"));
                }
                self.delta = delta;
            }
            "steps" => self.steps = value.parse().map_err(|_| bad("steps"))?,
            "driver" => self.driver = value.parse()?,
            "initial" => self.initial = value.parse()?,
            "subsystem" => self.subsystem = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "m-max" => self.m_max = Some(value.parse().map_err(|_| bad("m-max"))?),
            other => return Err(QtmError::InvalidArgument(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parses flat `key = value` lines; `#` starts a comment. The
    /// `experiment` key is required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| QtmError::InvalidArgument(format!("line {}: expected key = value", lineno + 1)))?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        Self::from_pairs(pairs)
    }

    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let pairs: Vec<(K, V)> = pairs.into_iter().collect();
        let kind = pairs
            .iter()
            .rev()
            .find(|(k, _)| k.as_ref().trim().eq_ignore_ascii_case("experiment"))
            .ok_or_else(|| QtmError::InvalidArgument("missing `experiment` key".into()))?
            .1
            .as_ref()
            .parse()?;
        let mut config = Self::new(kind);
        for (k, v) in &pairs {
            config.set(k.as_ref(), v.as_ref())?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| QtmError::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
