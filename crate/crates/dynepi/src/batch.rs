//! Many seeded runs of one protocol, in parallel or in order.

use dynepi_core::prisoners::{run_seed, simulate, Protocol, RunOutcome, SimError, DAYS_PER_YEAR};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: u64,
    pub seed: u64,
    /// `None` when the run hit the step cap.
    pub escape_day: Option<u64>,
    /// Days simulated, equal to the escape day or the cap.
    pub days: u64,
}

impl RunRecord {
    pub fn capped(&self) -> bool {
        self.escape_day.is_none()
    }
}

/// Summary of a batch. Statistics are over the runs that terminated; capped
/// runs are only counted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub protocol: String,
    pub n: u32,
    pub runs: u64,
    pub seed: u64,
    pub cap: u64,
    pub terminated: u64,
    pub capped: u64,
    pub mean_days: Option<f64>,
    /// Sample standard deviation; zero for a single run.
    pub std_dev_days: Option<f64>,
    pub std_error_days: Option<f64>,
    pub min_days: Option<u64>,
    pub max_days: Option<u64>,
    pub mean_years: Option<f64>,
    pub safety_violations: u64,
}

#[derive(Clone, Debug)]
pub struct Batch {
    pub records: Vec<RunRecord>,
    pub report: SimulationReport,
}

fn one_run<P: Protocol + ?Sized>(
    protocol: &P,
    n: u32,
    seed: u64,
    cap: u64,
    run: u64,
) -> Result<RunRecord, SimError> {
    let seed = run_seed(seed, run);
    let outcome = simulate(protocol, n, seed, cap)?;
    let (escape_day, days) = match outcome {
        RunOutcome::Escaped { day } => (Some(day), day),
        RunOutcome::CapExceeded { days } => (None, days),
    };
    Ok(RunRecord {
        run,
        seed,
        escape_day,
        days,
    })
}

fn check_args(runs: u64, cap: u64, n: u32) -> Result<(), SimError> {
    if runs == 0 {
        return Err(SimError::Setup("need at least one run"));
    }
    if cap == 0 {
        return Err(SimError::Setup("step cap must be at least 1"));
    }
    if n < 2 {
        return Err(SimError::Setup("need at least two prisoners"));
    }
    Ok(())
}

/// Runs `runs` simulations on the rayon pool. Run `i` uses seed
/// `seed + i`, so the result does not depend on scheduling.
pub fn run_batch<P: Protocol + ?Sized>(
    protocol: &P,
    n: u32,
    runs: u64,
    seed: u64,
    cap: u64,
) -> Result<Batch, SimError> {
    check_args(runs, cap, n)?;
    let records = (0..runs)
        .into_par_iter()
        .map(|run| one_run(protocol, n, seed, cap, run))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(protocol.id(), n, seed, cap, records))
}

/// Same as [`run_batch`] on the calling thread.
pub fn run_batch_serial<P: Protocol + ?Sized>(
    protocol: &P,
    n: u32,
    runs: u64,
    seed: u64,
    cap: u64,
) -> Result<Batch, SimError> {
    check_args(runs, cap, n)?;
    let records = (0..runs)
        .map(|run| one_run(protocol, n, seed, cap, run))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(protocol.id(), n, seed, cap, records))
}

fn summarize(id: &str, n: u32, seed: u64, cap: u64, records: Vec<RunRecord>) -> Batch {
    let days: Vec<u64> = records.iter().filter_map(|r| r.escape_day).collect();
    let k = days.len() as u64;
    let (mut mean, mut sd, mut se, mut min, mut max) = (None, None, None, None, None);
    if k > 0 {
        let total: u128 = days.iter().map(|&d| d as u128).sum();
        let m = total as f64 / k as f64;
        let var = if k > 1 {
            days.iter().map(|&d| (d as f64 - m).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        mean = Some(m);
        sd = Some(var.sqrt());
        se = Some((var / k as f64).sqrt());
        min = days.iter().copied().min();
        max = days.iter().copied().max();
    }
    let report = SimulationReport {
        protocol: id.to_string(),
        n,
        runs: records.len() as u64,
        seed,
        cap,
        terminated: k,
        capped: records.len() as u64 - k,
        mean_days: mean,
        std_dev_days: sd,
        std_error_days: se,
        min_days: min,
        max_days: max,
        mean_years: mean.map(|m| m / DAYS_PER_YEAR),
        // a false announcement aborts the batch, so a finished report has none
        safety_violations: 0,
    };
    Batch { records, report }
}
