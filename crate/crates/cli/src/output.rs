//! CSV / JSON / pretty-table renderers for fit results and Monte Carlo
//! reports. All numeric CSV and JSON fields round-trip through parse at
//! 17 significant digits.

use crate::fmt::sig;
use mlefit::estimators::{FitResult, MlConfidenceIntervals};
use mlefit::harness::CellReport;
use mlefit::LogMomentSet;

/// Versioned column schema marker for mc CSV output.
pub const MC_SCHEMA: &str = "# mlefit-mc v1";

const MC_COLUMNS: &str =
    "alpha_true,param2_true,n,estimator,bias_p1,se_bias_p1,rmse_p1,bias_p2,se_bias_p2,rmse_p2,failures";

fn num(x: f64) -> String {
    sig(x, 17)
}

pub fn fit_json(fit: &FitResult, ci: Option<&MlConfidenceIntervals>) -> String {
    let mut s = String::from("{");
    s.push_str(&format!("\"alpha\": {}", num(fit.param1)));
    s.push_str(&format!(", \"second_param\": {}", num(fit.param2)));
    s.push_str(&format!(", \"method\": \"{}\"", fit.method.tag()));
    s.push_str(&format!(", \"clamped\": {}", fit.clamped));
    s.push_str(&format!(", \"converged\": {}", fit.converged));
    if fit.clamped {
        s.push_str(&format!(", \"alpha_raw\": {}", num(fit.raw_param1)));
    }
    if let Some(ci) = ci {
        s.push_str(&format!(
            ", \"ci\": {{\"level\": {}, \"alpha\": [{}, {}], \"delta\": [{}, {}]}}",
            num(ci.alpha.level),
            num(ci.alpha.lower),
            num(ci.alpha.upper),
            num(ci.delta.lower),
            num(ci.delta.upper)
        ));
    }
    s.push('}');
    s
}

pub fn fit_error_json(method: &str, err: &mlefit::Error) -> String {
    format!(
        "{{\"alpha\": null, \"second_param\": null, \"method\": \"{method}\", \
         \"clamped\": false, \"converged\": false, \"error\": \"{}\"}}",
        err.to_string().replace('"', "'")
    )
}

pub fn ml_log_moments_json(m: &LogMomentSet) -> String {
    format!(
        "{{\"mean\": {}, \"variance\": {}, \"third_central\": {}, \"fourth_central\": {}}}",
        num(m.mean),
        num(m.variance),
        num(m.third_central),
        num(m.fourth_central)
    )
}

pub fn gml_log_moments_json(mean: f64, variance: f64, third_noncentral: f64) -> String {
    format!(
        "{{\"mean\": {}, \"variance\": {}, \"third_noncentral\": {}}}",
        num(mean),
        num(variance),
        num(third_noncentral)
    )
}

/// Wide CSV: one row per (cell × estimator), rows in experiment order.
pub fn reports_csv(reports: &[CellReport]) -> String {
    let mut out = String::new();
    out.push_str(MC_SCHEMA);
    out.push('\n');
    out.push_str(MC_COLUMNS);
    out.push('\n');
    for report in reports {
        for s in &report.stats {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                num(report.cell.param1),
                num(report.cell.param2),
                report.cell.n,
                s.method.tag(),
                num(s.bias_p1),
                num(s.se_bias_p1),
                num(s.rmse_p1),
                num(s.bias_p2),
                num(s.se_bias_p2),
                num(s.rmse_p2),
                s.failures
            ));
        }
    }
    out
}

/// Tidy long-format CSV for plotting: one (cell, estimator, metric) per row.
pub fn reports_plot_csv(reports: &[CellReport]) -> String {
    let mut out = String::new();
    out.push_str(MC_SCHEMA);
    out.push('\n');
    out.push_str("alpha_true,param2_true,n,estimator,metric,value\n");
    for report in reports {
        for s in &report.stats {
            let metrics = [
                ("bias_p1", s.bias_p1),
                ("se_bias_p1", s.se_bias_p1),
                ("rmse_p1", s.rmse_p1),
                ("bias_p2", s.bias_p2),
                ("se_bias_p2", s.se_bias_p2),
                ("rmse_p2", s.rmse_p2),
                ("failures", s.failures as f64),
            ];
            for (name, value) in metrics {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    num(report.cell.param1),
                    num(report.cell.param2),
                    report.cell.n,
                    s.method.tag(),
                    name,
                    num(value)
                ));
            }
        }
    }
    out
}

pub fn reports_json(reports: &[CellReport]) -> String {
    let mut rows = Vec::new();
    for report in reports {
        for s in &report.stats {
            rows.push(format!(
                "{{\"alpha_true\": {}, \"param2_true\": {}, \"n\": {}, \"estimator\": \"{}\", \
                 \"bias_p1\": {}, \"se_bias_p1\": {}, \"rmse_p1\": {}, \
                 \"bias_p2\": {}, \"se_bias_p2\": {}, \"rmse_p2\": {}, \"failures\": {}}}",
                num(report.cell.param1),
                num(report.cell.param2),
                report.cell.n,
                s.method.tag(),
                json_num(s.bias_p1),
                json_num(s.se_bias_p1),
                json_num(s.rmse_p1),
                json_num(s.bias_p2),
                json_num(s.se_bias_p2),
                json_num(s.rmse_p2),
                s.failures
            ));
        }
    }
    format!(
        "{{\"schema\": \"mlefit-mc v1\", \"rows\": [\n{}\n]}}\n",
        rows.join(",\n")
    )
}

/// JSON has no NaN literal; all-failed cells serialize their stats as null.
fn json_num(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        "null".to_string()
    }
}

pub fn reports_pretty(reports: &[CellReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>8} {:>10} {:>7} {:>5} {:>10} {:>10} {:>10} {:>10} {:>8}\n",
        "alpha", "param2", "n", "est", "bias_p1", "rmse_p1", "bias_p2", "rmse_p2", "failures"
    ));
    for report in reports {
        for s in &report.stats {
            out.push_str(&format!(
                "{:>8} {:>10} {:>7} {:>5} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>8}\n",
                report.cell.param1,
                report.cell.param2,
                report.cell.n,
                s.method.tag(),
                s.bias_p1,
                s.rmse_p1,
                s.bias_p2,
                s.rmse_p2,
                s.failures
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mlefit::estimators::Method;
    use mlefit::harness::{Cell, EstimatorStats};

    fn sample_report() -> CellReport {
        CellReport {
            cell: Cell {
                param1: 0.5,
                param2: 0.5,
                n: 25,
            },
            stats: vec![EstimatorStats {
                method: Method::LogMoment,
                bias_p1: 0.0201,
                se_bias_p1: 0.0009,
                rmse_p1: 0.0874,
                bias_p2: 0.131,
                se_bias_p2: 0.005,
                rmse_p2: 0.501,
                failures: 0,
            }],
        }
    }

    #[test]
    fn csv_has_schema_header_and_row() {
        let csv = reports_csv(&[sample_report()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), MC_SCHEMA);
        assert!(lines.next().unwrap().starts_with("alpha_true,"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.5,0.5,25,log,"));
        assert_eq!(row.split(',').count(), 11);
    }

    #[test]
    fn plot_csv_is_long_format() {
        let csv = reports_plot_csv(&[sample_report()]);
        // 7 metric rows per estimator
        assert_eq!(csv.lines().count(), 2 + 7);
        assert!(csv.contains("log,rmse_p1,"));
    }

    #[test]
    fn json_rows_parse_shape() {
        let j = reports_json(&[sample_report()]);
        assert!(j.contains("\"schema\": \"mlefit-mc v1\""));
        assert!(j.contains("\"estimator\": \"log\""));
    }
}
