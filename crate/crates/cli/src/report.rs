//! Report records: one JSON object per line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use ybalg::{Regime, C64};

/// Inputs of a single sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "L")]
    pub l: usize,
    pub gamma: [f64; 2],
    pub regime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nome: Option<[f64; 2]>,
    #[serde(default)]
    pub mu: Vec<[f64; 2]>,
    /// Sampled spectral and dynamical arguments, keyed by role.
    #[serde(default)]
    pub points: BTreeMap<String, Vec<[f64; 2]>>,
}

impl Params {
    pub fn new(l: usize, gamma: C64, regime: &Regime, mu: &[C64]) -> Self {
        let (name, nome) = match regime {
            Regime::Trigonometric => ("trigonometric", None),
            Regime::Elliptic(p) => ("elliptic", Some(pair(p.nome))),
        };
        Params {
            l,
            gamma: pair(gamma),
            regime: name.into(),
            nome,
            mu: mu.iter().map(|&m| pair(m)).collect(),
            points: BTreeMap::new(),
        }
    }

    pub fn point(&mut self, key: &str, values: &[C64]) {
        self.points
            .insert(key.into(), values.iter().map(|&v| pair(v)).collect());
    }
}

pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    pub seed: u64,
    pub sample_index: usize,
    pub params: Params,
    /// `None` when the sample raised an error.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_ms: f64,
    /// Check-specific auxiliary values.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, serde_json::Value>,
}

impl ReportRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report records always serialize")
    }
}

/// Parses one line of a report stream.
pub fn parse_record(line: &str) -> Result<ReportRecord, serde_json::Error> {
    serde_json::from_str(line)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ReportRecord {
        let mut params = Params::new(
            2,
            C64::new(0.4, 0.1),
            &Regime::Trigonometric,
            &[C64::new(0.1, 0.0); 2],
        );
        params.point("lambda", &[C64::new(0.3, -0.2)]);
        ReportRecord {
            check: "dybe".into(),
            seed: 7,
            sample_index: 3,
            params,
            residual: Some(1.5e-15),
            tolerance: 1e-9,
            pass: true,
            error: None,
            wall_time_ms: 0.25,
            values: BTreeMap::from([("rel_diff".to_string(), serde_json::json!(1e-14))]),
        }
    }

    #[test]
    fn roundtrip() {
        let r = record();
        let line = r.to_line();
        assert!(!line.contains('\n'));
        assert_eq!(parse_record(&line).unwrap(), r);
    }

    #[test]
    fn error_records_have_null_residual() {
        let mut r = record();
        r.residual = None;
        r.pass = false;
        r.error = Some("dynamical pole".into());
        let line = r.to_line();
        assert!(line.contains("\"residual\":null"));
        assert_eq!(parse_record(&line).unwrap(), r);
    }

    #[test]
    fn truncated_line_is_rejected() {
        let line = record().to_line();
        assert!(parse_record(&line[..line.len() / 2]).is_err());
    }
}
