//! One module per command; each turns a [`RunConfig`] into a [`Report`].

mod bell;
mod discrim;
mod ontic;
mod sample;

use rand::Rng;
use rayon::prelude::*;

use crate::config::{CommandKind, RunConfig};
use crate::error::Result;
use crate::report::Report;

pub use bell::{ScenarioInput, BELL_TOL};
pub use sample::COVERAGE_TARGET;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// True when any certification in the report failed its tolerance.
    pub failed: bool,
    /// Summary lines for stderr; never part of the report.
    pub notes: Vec<String>,
}

impl Outcome {
    fn from_report(report: Report) -> Self {
        let failed_rows = report.failed_rows();
        let notes = vec![format!("{} rows, {failed_rows} failed", report.rows.len())];
        Self {
            report,
            failed: failed_rows > 0,
            notes,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Discrim => discrim::run(cfg).map(Outcome::from_report),
        CommandKind::OnticBound => ontic::run_bound(cfg).map(Outcome::from_report),
        CommandKind::OnticSearch => ontic::run_search(cfg).map(Outcome::from_report),
        CommandKind::BellVerify => bell::run_verify(cfg).map(Outcome::from_report),
        CommandKind::BellSweep => bell::run_sweep(cfg).map(Outcome::from_report),
        CommandKind::Sample => sample::run(cfg),
    }
}

/// Evaluates `f(index, item)` on every item concurrently, keeping input order.
fn par_rows<T: Sync, R: Send>(items: &[T], f: impl Fn(u64, &T) -> Result<R> + Sync) -> Result<Vec<R>> {
    items
        .par_iter()
        .enumerate()
        .map(|(i, item)| f(i as u64, item))
        .collect()
}

/// Per-row seed drawn from stream `row` of the run seed.
fn row_seed(seed: u64, row: u64) -> u64 {
    discrimlab_core::sampling::stream_rng(seed, row).random()
}

fn cartesian(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}
