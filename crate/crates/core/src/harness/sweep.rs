use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::model::{generate, make_signal, SignalSpec};
use crate::rng::derive_seed;
use crate::solver::{recover, RecoveryReport, REPORT_CSV_HEADER};

/// Per-trial solver summary, without the solution matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub error_up_to_sign: f64,
    pub frobenius_error: f64,
    pub objective: f64,
    pub iters: usize,
    pub converged: bool,
    pub degenerate: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub eigengap: f64,
}

impl TrialSummary {
    fn from_report(r: &RecoveryReport) -> Self {
        Self {
            error_up_to_sign: r.error_up_to_sign.unwrap_or(f64::NAN),
            frobenius_error: r.frobenius_error.unwrap_or(f64::NAN),
            objective: r.objective,
            iters: r.iters,
            converged: r.converged,
            degenerate: r.degenerate,
            primal_residual: r.primal_residual,
            dual_residual: r.dual_residual,
            eigengap: r.eigengap,
        }
    }

    // Same order as REPORT_CSV_HEADER.
    fn csv_cells(&self) -> [String; 9] {
        [
            self.error_up_to_sign.to_string(),
            self.frobenius_error.to_string(),
            self.objective.to_string(),
            self.iters.to_string(),
            self.converged.to_string(),
            self.degenerate.to_string(),
            self.primal_residual.to_string(),
            self.dual_residual.to_string(),
            self.eigengap.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub distribution: String,
    pub link: String,
    /// `None` when the trial failed; see `failure`.
    pub summary: Option<TrialSummary>,
    pub failure: Option<String>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub base_seed: u64,
    #[serde(skip)]
    pub wall_time_column: bool,
}

pub const SWEEP_KEY_COLUMNS: [&str; 7] = ["n", "s", "m", "trial", "seed", "distribution", "link"];

impl SweepResult {
    pub fn csv_header(&self) -> Vec<&'static str> {
        let mut h: Vec<&str> = SWEEP_KEY_COLUMNS.to_vec();
        h.extend(REPORT_CSV_HEADER);
        if self.wall_time_column {
            h.push("wall_time_s");
        }
        h.push("failure");
        h
    }

    /// One header row and one row per trial, in grid order. Floats use the
    /// shortest representation that round-trips.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.csv_header())?;
        for row in &self.rows {
            let mut rec = vec![
                row.n.to_string(),
                row.s.to_string(),
                row.m.to_string(),
                row.trial.to_string(),
                row.seed.to_string(),
                row.distribution.clone(),
                row.link.clone(),
            ];
            match &row.summary {
                Some(t) => rec.extend(t.csv_cells()),
                None => rec.extend(std::iter::repeat_n(String::new(), REPORT_CSV_HEADER.len())),
            }
            if self.wall_time_column {
                rec.push(row.wall_time.to_string());
            }
            rec.push(row.failure.clone().unwrap_or_default());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| {
            std::io::Error::new(e.kind(), format!("cannot create {}: {e}", path.display()))
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Errors up to sign of the successful trials of each cell, in grid order.
    pub fn cell_errors(&self) -> Vec<((usize, usize, usize), Vec<f64>)> {
        let mut out: Vec<((usize, usize, usize), Vec<f64>)> = Vec::new();
        for row in &self.rows {
            let key = (row.n, row.s, row.m);
            if out.last().is_none_or(|(k, _)| *k != key) {
                out.push((key, Vec::new()));
            }
            if let Some(t) = &row.summary {
                out.last_mut().unwrap().1.push(t.error_up_to_sign);
            }
        }
        out
    }
}

/// Median of a non-empty sample; NaN when empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Runs every `(cell, trial)` pair on the current rayon pool and returns the
/// rows in grid order. A failing trial becomes a row with its error message.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize, usize, usize)> = cfg
        .cells()
        .into_iter()
        .flat_map(|(n, s, m)| (0..cfg.trials).map(move |t| (n, s, m, t)))
        .collect();
    log::info!("sweep: {} trials on {} threads", jobs.len(), rayon::current_num_threads());
    let rows = jobs
        .into_par_iter()
        .map(|(n, s, m, trial)| run_trial(cfg, n, s, m, trial))
        .collect();
    Ok(SweepResult {
        rows,
        base_seed: cfg.base_seed,
        wall_time_column: cfg.output.wall_time,
    })
}

fn run_trial(cfg: &ExperimentConfig, n: usize, s: usize, m: usize, trial: usize) -> SweepRow {
    let seed = derive_seed(cfg.base_seed, &[n as u64, s as u64, m as u64, trial as u64]);
    let start = Instant::now();
    let outcome = (|| {
        let spec = SignalSpec {
            dim: n,
            kind: cfg.signal.kind(s),
        };
        let x = make_signal(&spec, seed)?;
        let data = generate(&x, &cfg.distribution, &cfg.link, m, seed)?;
        recover(&data, &cfg.solver.for_sparsity(s), Some(&x))
    })();
    let wall_time = start.elapsed().as_secs_f64();
    let (summary, failure) = match outcome {
        Ok(report) => {
            if !report.converged {
                log::warn!("n={n} s={s} m={m} trial={trial}: solver hit max_iters");
            }
            (Some(TrialSummary::from_report(&report)), None)
        }
        Err(e) => {
            log::warn!("n={n} s={s} m={m} trial={trial}: {e}");
            (None, Some(e.to_string()))
        }
    };
    SweepRow {
        n,
        s,
        m,
        trial,
        seed,
        distribution: cfg.distribution.tag().to_string(),
        link: cfg.link.tag(),
        summary,
        failure,
        wall_time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn small_sweep_is_reproducible() {
        let cfg = ExperimentConfig::from_json(
            r#"{"n": [6], "s": [2], "m": [200], "distribution": "gaussian",
                "link": "quadratic", "trials": 3, "base_seed": 9}"#,
        )
        .unwrap();
        let a = run_sweep(&cfg).unwrap();
        assert_eq!(a.rows.len(), 3);
        let mut csv_a = Vec::new();
        a.write_csv(&mut csv_a).unwrap();
        let mut csv_b = Vec::new();
        run_sweep(&cfg).unwrap().write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
        let text = String::from_utf8(csv_a).unwrap();
        assert!(text.starts_with("n,s,m,trial,seed,distribution,link,error_up_to_sign,"));
        assert_eq!(text.lines().count(), 4);
    }
}
