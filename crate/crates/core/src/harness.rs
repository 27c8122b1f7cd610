//! Monte Carlo experiment engine: bias and RMSE of each estimator over many
//! replicates per (parameters, n) cell, with deterministic parallel
//! execution.
//!
//! Every replicate draws its data from an [`RngStream`] keyed by
//! `(master_seed, cell_index, replicate_index)`, and the per-replicate
//! results are reduced in replicate order, so reports are bit-identical
//! across thread counts. Both estimators see the same dataset within a
//! replicate, as a comparison study should.

use crate::distributions::{GMLParams, MLParams};
use crate::error::{Error, Result};
use crate::estimators::{
    estimate_gml_fractional, estimate_gml_logmoment, estimate_ml_fractional,
    estimate_ml_logmoment, log_summary, Method, GML_FRACTIONAL_Q,
};
use crate::sampling::{sample_gml, sample_ml, RngStream};
use crate::special::PsiMode;

/// Which law an experiment simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    Ml,
    Gml,
}

/// One table cell: true parameters and the sample size per replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub param1: f64,
    pub param2: f64,
    pub n: usize,
}

/// Full experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub distribution: Distribution,
    pub cells: Vec<Cell>,
    pub replicates: usize,
    pub master_seed: u64,
    pub estimators: Vec<Method>,
    pub psi_mode: PsiMode,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::domain("replicates must be at least 1"));
        }
        if self.cells.is_empty() {
            return Err(Error::domain("experiment needs at least one cell"));
        }
        if self.estimators.is_empty() {
            return Err(Error::domain("experiment needs at least one estimator"));
        }
        if self.estimators.len() > 2 {
            return Err(Error::domain(
                "at most one log-moment and one fractional-moment estimator per run",
            ));
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.n < 2 {
                return Err(Error::domain(format!(
                    "cell {i}: sample size must be ≥ 2, got {}",
                    cell.n
                )));
            }
            match self.distribution {
                Distribution::Ml => {
                    MLParams::new(cell.param1, cell.param2)
                        .map_err(|e| Error::domain(format!("cell {i}: {e}")))?;
                }
                Distribution::Gml => {
                    GMLParams::new(cell.param1, cell.param2)
                        .map_err(|e| Error::domain(format!("cell {i}: {e}")))?;
                }
            }
        }
        Ok(())
    }
}

/// Bias/RMSE block for one estimator within a cell.
///
/// `failures` counts replicates where this estimator's solver did not
/// converge (or found no root); those replicates are excluded from the
/// averages rather than silently mixed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorStats {
    pub method: Method,
    pub bias_p1: f64,
    pub se_bias_p1: f64,
    pub rmse_p1: f64,
    pub bias_p2: f64,
    pub se_bias_p2: f64,
    pub rmse_p2: f64,
    pub failures: usize,
}

/// Report for one cell: stats per estimator in config order.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub cell: Cell,
    pub stats: Vec<EstimatorStats>,
}

impl CellReport {
    /// Total non-converged replicates across estimators.
    pub fn failures(&self) -> usize {
        self.stats.iter().map(|s| s.failures).sum()
    }
}

/// At most two estimators per run; a fixed-size slot array keeps the
/// per-replicate bookkeeping allocation-free.
type ReplicateOutcome = [Option<(f64, f64)>; 2];

fn run_replicate(cfg: &ExperimentConfig, cell: &Cell, cell_index: usize, rep: usize) -> ReplicateOutcome {
    let mut rng = RngStream::new(cfg.master_seed, cell_index as u64, rep as u64);
    let mut out: ReplicateOutcome = [None, None];

    match cfg.distribution {
        Distribution::Ml => {
            let params = MLParams::new(cell.param1, cell.param2).expect("validated");
            let data: Vec<f64> = (0..cell.n).map(|_| sample_ml(&mut rng, &params)).collect();
            for (slot, est) in cfg.estimators.iter().enumerate() {
                out[slot] = match est {
                    Method::LogMoment => {
                        let s = log_summary(&data).expect("positive data").bessel_corrected();
                        let fit = estimate_ml_logmoment(&s);
                        Some((fit.raw_param1, fit.param2))
                    }
                    Method::FractionalMoment => estimate_ml_fractional(&data)
                        .ok()
                        .filter(|f| f.converged)
                        .map(|f| (f.raw_param1, f.param2)),
                };
            }
        }
        Distribution::Gml => {
            let params = GMLParams::new(cell.param1, cell.param2).expect("validated");
            let data: Vec<f64> = (0..cell.n).map(|_| sample_gml(&mut rng, &params)).collect();
            for (slot, est) in cfg.estimators.iter().enumerate() {
                out[slot] = match est {
                    Method::LogMoment => {
                        let s = log_summary(&data).expect("positive data").bessel_corrected();
                        estimate_gml_logmoment(&s, cfg.psi_mode)
                            .ok()
                            .filter(|f| f.converged)
                            .map(|f| (f.raw_param1, f.param2))
                    }
                    Method::FractionalMoment => {
                        let (q1, q2) = GML_FRACTIONAL_Q;
                        estimate_gml_fractional(&data, q1, q2)
                            .ok()
                            .filter(|f| f.converged)
                            .map(|f| (f.raw_param1, f.param2))
                    }
                };
            }
        }
    }
    out
}

/// Runs one cell: `replicates` datasets, each fitted by every selected
/// estimator; bias is the mean error, RMSE the root mean squared error,
/// both over the converged replicates only. `se_bias_*` is the Monte Carlo
/// standard error of the bias estimate (sample SD of the errors / √R).
pub fn run_cell(cfg: &ExperimentConfig, cell_index: usize, threads: usize) -> Result<CellReport> {
    cfg.validate()?;
    let cell = *cfg
        .cells
        .get(cell_index)
        .ok_or_else(|| Error::domain(format!("cell index {cell_index} out of range")))?;

    let reps = cfg.replicates;
    let outcomes: Vec<ReplicateOutcome> = if threads <= 1 || reps < 2 {
        (0..reps)
            .map(|r| run_replicate(cfg, &cell, cell_index, r))
            .collect()
    } else {
        let workers = threads.min(reps);
        let chunk = reps.div_ceil(workers);
        let mut parts: Vec<Vec<ReplicateOutcome>> = Vec::with_capacity(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(reps);
                    scope.spawn(move || {
                        (lo..hi)
                            .map(|r| run_replicate(cfg, &cell, cell_index, r))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                parts.push(h.join().expect("worker panicked"));
            }
        });
        // Workers were spawned over contiguous ascending ranges, so the
        // concatenation is already in replicate order.
        parts.into_iter().flatten().collect()
    };

    let stats = cfg
        .estimators
        .iter()
        .enumerate()
        .map(|(slot, &method)| reduce_slot(method, &outcomes, slot, cell))
        .collect();
    Ok(CellReport { cell, stats })
}

fn reduce_slot(
    method: Method,
    outcomes: &[ReplicateOutcome],
    slot: usize,
    cell: Cell,
) -> EstimatorStats {
    let mut count = 0usize;
    let mut sum_e1 = 0.0;
    let mut sum_e2 = 0.0;
    let mut sum_sq1 = 0.0;
    let mut sum_sq2 = 0.0;
    for outcome in outcomes {
        if let Some((p1, p2)) = outcome[slot] {
            let e1 = p1 - cell.param1;
            let e2 = p2 - cell.param2;
            count += 1;
            sum_e1 += e1;
            sum_e2 += e2;
            sum_sq1 += e1 * e1;
            sum_sq2 += e2 * e2;
        }
    }
    let failures = outcomes.len() - count;
    if count == 0 {
        return EstimatorStats {
            method,
            bias_p1: f64::NAN,
            se_bias_p1: f64::NAN,
            rmse_p1: f64::NAN,
            bias_p2: f64::NAN,
            se_bias_p2: f64::NAN,
            rmse_p2: f64::NAN,
            failures,
        };
    }
    let nf = count as f64;
    let bias_p1 = sum_e1 / nf;
    let bias_p2 = sum_e2 / nf;
    let msq1 = sum_sq1 / nf;
    let msq2 = sum_sq2 / nf;
    let var1 = (msq1 - bias_p1 * bias_p1).max(0.0);
    let var2 = (msq2 - bias_p2 * bias_p2).max(0.0);
    let bessel = if count > 1 { nf / (nf - 1.0) } else { 1.0 };
    EstimatorStats {
        method,
        bias_p1,
        se_bias_p1: (var1 * bessel / nf).sqrt(),
        rmse_p1: msq1.sqrt(),
        bias_p2,
        se_bias_p2: (var2 * bessel / nf).sqrt(),
        rmse_p2: msq2.sqrt(),
        failures,
    }
}

/// Runs every cell in config order. Reports are bit-identical for any
/// `threads ≥ 1`.
pub fn run_experiment(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<CellReport>> {
    cfg.validate()?;
    (0..cfg.cells.len())
        .map(|i| run_cell(cfg, i, threads))
        .collect()
}

/// Sample sizes used by the reference comparison tables.
pub const TABLE_SAMPLE_SIZES: [usize; 5] = [25, 50, 100, 500, 25_000];

/// Parameter blocks of the ML comparison table, in row order.
pub const TABLE1_PARAMS: [(f64, f64); 5] =
    [(0.5, 0.5), (0.6, 5.0), (0.7, 1.0), (0.8, 100.0), (0.9, 0.1)];

/// Parameter blocks of the GML comparison table, in row order.
pub const TABLE2_PARAMS: [(f64, f64); 5] =
    [(0.5, 20.0), (0.6, 15.0), (0.7, 10.0), (0.8, 5.0), (0.9, 1.0)];

fn table_cells(params: &[(f64, f64)]) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(params.len() * TABLE_SAMPLE_SIZES.len());
    for &(p1, p2) in params {
        for &n in &TABLE_SAMPLE_SIZES {
            cells.push(Cell {
                param1: p1,
                param2: p2,
                n,
            });
        }
    }
    cells
}

/// Preset reproducing the ML comparison table grid.
pub fn table1_config(replicates: usize, master_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        distribution: Distribution::Ml,
        cells: table_cells(&TABLE1_PARAMS),
        replicates,
        master_seed,
        estimators: vec![Method::LogMoment, Method::FractionalMoment],
        psi_mode: PsiMode::Accurate,
    }
}

/// Preset reproducing the GML comparison table grid.
pub fn table2_config(replicates: usize, master_seed: u64, psi_mode: PsiMode) -> ExperimentConfig {
    ExperimentConfig {
        distribution: Distribution::Gml,
        cells: table_cells(&TABLE2_PARAMS),
        replicates,
        master_seed,
        estimators: vec![Method::LogMoment, Method::FractionalMoment],
        psi_mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ml_config() -> ExperimentConfig {
        ExperimentConfig {
            distribution: Distribution::Ml,
            cells: vec![
                Cell {
                    param1: 0.7,
                    param2: 1.0,
                    n: 50,
                },
                Cell {
                    param1: 0.5,
                    param2: 0.5,
                    n: 25,
                },
            ],
            replicates: 200,
            master_seed: 424242,
            estimators: vec![Method::LogMoment, Method::FractionalMoment],
            psi_mode: PsiMode::Accurate,
        }
    }

    #[test]
    fn validation_catches_bad_configs() {
        let mut cfg = small_ml_config();
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = small_ml_config();
        cfg.cells[0].n = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = small_ml_config();
        cfg.cells[0].param1 = 1.5;
        assert!(cfg.validate().is_err());

        let mut cfg = small_ml_config();
        cfg.estimators.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = small_ml_config();
        let serial = run_experiment(&cfg, 1).unwrap();
        let par4 = run_experiment(&cfg, 4).unwrap();
        let par8 = run_experiment(&cfg, 8).unwrap();
        assert_eq!(serial, par4);
        assert_eq!(serial, par8);
    }

    #[test]
    fn rmse_bounds_bias() {
        let cfg = small_ml_config();
        for report in run_experiment(&cfg, 2).unwrap() {
            for s in &report.stats {
                assert!(s.rmse_p1 >= s.bias_p1.abs() - 1e-12);
                assert!(s.rmse_p2 >= s.bias_p2.abs() - 1e-12);
                assert!(s.failures <= cfg.replicates);
            }
        }
    }

    #[test]
    fn single_replicate_rmse_equals_abs_bias() {
        let mut cfg = small_ml_config();
        cfg.replicates = 1;
        cfg.estimators = vec![Method::LogMoment];
        for report in run_experiment(&cfg, 1).unwrap() {
            let s = &report.stats[0];
            assert!((s.rmse_p1 - s.bias_p1.abs()).abs() < 1e-12);
            assert!((s.rmse_p2 - s.bias_p2.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn reruns_are_identical() {
        let cfg = small_ml_config();
        let a = run_experiment(&cfg, 3).unwrap();
        let b = run_experiment(&cfg, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn doubling_replicates_shifts_bias_within_monte_carlo_error() {
        let mut cfg = ExperimentConfig {
            distribution: Distribution::Ml,
            cells: vec![Cell {
                param1: 0.7,
                param2: 1.0,
                n: 100,
            }],
            replicates: 1000,
            master_seed: 31337,
            estimators: vec![Method::LogMoment],
            psi_mode: PsiMode::Accurate,
        };
        let small = run_cell(&cfg, 0, 1).unwrap().stats[0];
        cfg.replicates = 2000;
        let large = run_cell(&cfg, 0, 1).unwrap().stats[0];
        // new substreams change the numbers...
        assert_ne!(small.bias_p1, large.bias_p1);
        // ...but only within Monte Carlo noise
        let band = 4.0 * (small.se_bias_p1.powi(2) + large.se_bias_p1.powi(2)).sqrt();
        assert!(
            (small.bias_p1 - large.bias_p1).abs() <= band,
            "bias moved {} > {band}",
            (small.bias_p1 - large.bias_p1).abs()
        );
    }

    #[test]
    fn gml_cells_run() {
        let cfg = ExperimentConfig {
            distribution: Distribution::Gml,
            cells: vec![Cell {
                param1: 0.9,
                param2: 1.0,
                n: 25,
            }],
            replicates: 100,
            master_seed: 7,
            estimators: vec![Method::LogMoment, Method::FractionalMoment],
            psi_mode: PsiMode::Accurate,
        };
        let reports = run_experiment(&cfg, 2).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].stats.len(), 2);
        // most replicates should converge at this benign cell
        for s in &reports[0].stats {
            assert!(s.failures < 50, "unexpected failure count {}", s.failures);
        }
    }

    #[test]
    fn table_presets_have_expected_shape() {
        let t1 = table1_config(10, 1);
        assert_eq!(t1.cells.len(), 25);
        assert_eq!(t1.cells[0].n, 25);
        assert_eq!(t1.cells[4].n, 25_000);
        assert!((t1.cells[5].param1 - 0.6).abs() < 1e-15);
        let t2 = table2_config(10, 1, PsiMode::Accurate);
        assert_eq!(t2.cells.len(), 25);
        assert!((t2.cells[0].param2 - 20.0).abs() < 1e-15);
    }
}
