//! Run configuration: a TOML file plus command-line overrides.
//!
//! ```toml
//! [model]
//! L = 3
//! gamma = [0.41, 0.07]
//! mu = [[0.1, 0.05], [-0.2, 0.1], [0.15, -0.1]]   # optional; random per sample if absent
//! regime = { kind = "elliptic", nome = [0.2, 0.0] } # or { kind = "trigonometric" }
//! tolerances = { fx = 1e-9 }                        # per-check overrides
//!
//! [run]
//! seed = 42
//! samples = 10
//! threads = 1
//! checks = ["dybe", "fx"]
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use ybalg::model::MAX_CHAIN;
use ybalg::special::MAX_NOME;
use ybalg::{Regime, C64};

use crate::checks::Check;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("config parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegimeSpec {
    Elliptic { nome: [f64; 2] },
    Trigonometric,
}

impl Default for RegimeSpec {
    fn default() -> Self {
        RegimeSpec::Elliptic { nome: [0.2, 0.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(rename = "L", default = "default_l")]
    pub l: usize,
    #[serde(default = "default_gamma")]
    pub gamma: [f64; 2],
    #[serde(default)]
    pub mu: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub regime: RegimeSpec,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn default_l() -> usize {
    2
}

fn default_gamma() -> [f64; 2] {
    [0.41, 0.07]
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            l: default_l(),
            gamma: default_gamma(),
            mu: None,
            regime: RegimeSpec::default(),
            tolerances: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Worker threads; 0 picks the number of cores.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub checks: Option<Vec<String>>,
}

fn default_seed() -> u64 {
    42
}

fn default_samples() -> usize {
    10
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            seed: default_seed(),
            samples: default_samples(),
            threads: 0,
            checks: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub run: RunSection,
}

impl ConfigFile {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        toml::from_str(s).map_err(|e| {
            let line = e
                .span()
                .map(|sp| s[..sp.start.min(s.len())].matches('\n').count() + 1);
            ConfigError::Parse {
                line,
                message: e.message().to_string(),
            }
        })
    }

    pub fn from_path(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.into(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub l: Option<usize>,
    pub gamma: Option<String>,
    pub nome: Option<String>,
    pub trig: bool,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub threads: Option<usize>,
    pub checks: Option<String>,
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub l: usize,
    pub gamma: C64,
    /// Fixed inhomogeneities; drawn per sample when `None`.
    pub mu: Option<Vec<C64>>,
    pub regime: Regime,
    pub seed: u64,
    pub samples: usize,
    pub threads: usize,
    pub checks: Vec<Check>,
    pub tolerances: BTreeMap<Check, f64>,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, ov: &Overrides) -> Result<Self, ConfigError> {
        let m = file.model;
        let l = ov.l.unwrap_or(m.l);
        if l == 0 || l > MAX_CHAIN {
            return Err(ConfigError::field(
                "model.L",
                format!("must be in 1..={MAX_CHAIN}, got {l}"),
            ));
        }
        let gamma = match &ov.gamma {
            Some(s) => parse_complex_pair(s).map_err(|e| ConfigError::field("gamma", e))?,
            None => pair("model.gamma", m.gamma)?,
        };
        let mu = match m.mu {
            Some(v) if v.len() != l => {
                return Err(ConfigError::field(
                    "model.mu",
                    format!("has {} entries but L = {l}", v.len()),
                ))
            }
            Some(v) => Some(
                v.into_iter()
                    .map(|p| pair("model.mu", p))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let regime = if ov.trig {
            Regime::Trigonometric
        } else if let Some(s) = &ov.nome {
            nome_regime(
                "nome",
                parse_complex_pair(s).map_err(|e| ConfigError::field("nome", e))?,
            )?
        } else {
            match m.regime {
                RegimeSpec::Trigonometric => Regime::Trigonometric,
                RegimeSpec::Elliptic { nome } => {
                    nome_regime("model.regime.nome", pair("model.regime.nome", nome)?)?
                }
            }
        };
        let names: Vec<String> = match (&ov.checks, file.run.checks) {
            (Some(list), _) => list
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
            (None, Some(v)) => v,
            (None, None) => Check::ALL.iter().map(|c| c.name().to_string()).collect(),
        };
        let checks = names
            .iter()
            .map(|n| {
                Check::parse(n)
                    .ok_or_else(|| ConfigError::field("checks", format!("unknown check `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if checks.is_empty() {
            return Err(ConfigError::field("checks", "no checks selected"));
        }
        let mut tolerances = BTreeMap::new();
        for (name, &tol) in &m.tolerances {
            let field = format!("model.tolerances.{name}");
            let check =
                Check::parse(name).ok_or_else(|| ConfigError::field(&field, "unknown check"))?;
            if tol.is_nan() || tol < 0.0 {
                return Err(ConfigError::field(&field, "must be a non-negative number"));
            }
            tolerances.insert(check, tol);
        }
        let samples = ov.samples.unwrap_or(file.run.samples);
        if samples == 0 {
            return Err(ConfigError::field("samples", "must be at least 1"));
        }
        Ok(RunConfig {
            l,
            gamma,
            mu,
            regime,
            seed: ov.seed.unwrap_or(file.run.seed),
            samples,
            threads: ov.threads.unwrap_or(file.run.threads),
            checks,
            tolerances,
        })
    }

    pub fn tolerance(&self, check: Check) -> f64 {
        self.tolerances
            .get(&check)
            .copied()
            .unwrap_or(check.default_tolerance())
    }

    /// The model with `regime` replaced by the six-vertex limit.
    pub fn trigonometric(&self) -> RunConfig {
        RunConfig {
            regime: Regime::Trigonometric,
            ..self.clone()
        }
    }
}

fn pair(field: &str, p: [f64; 2]) -> Result<C64, ConfigError> {
    if p.iter().all(|v| v.is_finite()) {
        Ok(C64::new(p[0], p[1]))
    } else {
        Err(ConfigError::field(field, "components must be finite"))
    }
}

fn nome_regime(field: &str, nome: C64) -> Result<Regime, ConfigError> {
    if nome.norm() >= MAX_NOME {
        return Err(ConfigError::field(
            field,
            format!("|nome| = {} must be below {MAX_NOME}", nome.norm()),
        ));
    }
    Regime::elliptic(nome).map_err(|e| ConfigError::field(field, e.to_string()))
}

/// Parses `"RE,IM"` into a complex number.
pub fn parse_complex_pair(s: &str) -> Result<C64, String> {
    let mut parts = s.split(',');
    let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("expected RE,IM but got `{s}`"));
    };
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a number", t.trim()))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("`{}` is not finite", t.trim()))
        }
    };
    Ok(C64::new(num(re)?, num(im)?))
}

/// Parses `"RE,IM;RE,IM;..."`. An empty string is an empty list.
pub fn parse_complex_list(s: &str) -> Result<Vec<C64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(parse_complex_pair).collect()
}
