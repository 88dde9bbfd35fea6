//! Executes the configured checks and streams report records.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::checks::{evaluate, Check};
use crate::config::RunConfig;
use crate::report::{Params, ReportRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub records: usize,
    pub failed: usize,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// A sample passes only with a finite residual within tolerance.
pub fn passes(residual: Option<f64>, tolerance: f64) -> bool {
    residual.is_some_and(|r| r <= tolerance)
}

pub fn sample_record(check: Check, cfg: &RunConfig, sample_index: usize) -> ReportRecord {
    let start = Instant::now();
    let mut params = Params::default();
    let mut values = BTreeMap::new();
    let outcome = evaluate(check, cfg, sample_index, &mut params, &mut values);
    let tolerance = cfg.tolerance(check);
    let (residual, error) = match outcome {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ReportRecord {
        check: check.name().into(),
        seed: cfg.seed,
        sample_index,
        params,
        residual,
        tolerance,
        pass: passes(residual, tolerance),
        error,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        values,
    }
}

/// Runs every configured check, one record per sample, in (check, sample)
/// order. Samples of a check are evaluated in parallel; records are written
/// by the calling thread only.
pub fn run<W: Write>(cfg: &RunConfig, out: &mut W) -> io::Result<RunSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(io::Error::other)?;
    let mut summary = RunSummary::default();
    for &check in &cfg.checks {
        let records: Vec<ReportRecord> = pool.install(|| {
            (0..cfg.samples)
                .into_par_iter()
                .map(|i| sample_record(check, cfg, i))
                .collect()
        });
        for r in records {
            summary.records += 1;
            if !r.pass {
                summary.failed += 1;
            }
            writeln!(out, "{}", r.to_line())?;
        }
        out.flush()?;
    }
    Ok(summary)
}
