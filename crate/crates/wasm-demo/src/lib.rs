//! Interactive browser demo for the ML(α, δ) and GML(α, β) laws.
//!
//! Three operations are exposed to JavaScript, all pure functions of their
//! arguments so every view is fully reproducible from the controls:
//!
//! - theoretical curves: [`ml_density_curve`], [`gml_cdf_curve`];
//! - simulated data: [`ml_histogram`], [`gml_empirical_cdf`];
//! - estimation: [`simulate_and_fit`], drawing a sample and fitting it with
//!   the selected estimator (JSON result, confidence intervals for ML).
//!
//! Build with `wasm-pack build crates/wasm-demo --target web` and serve the
//! `www/` directory; see the README. Points where a series evaluation is
//! refused (cancellation guard) come back as NaN and are skipped when
//! drawing.

use mlefit::distributions::{gml_cdf, ml_pdf, GMLParams, MLParams};
use mlefit::estimators::{
    estimate_gml_fractional, estimate_gml_logmoment, estimate_ml_fractional,
    estimate_ml_logmoment, log_summary, ml_confidence_intervals, FitResult, GML_FRACTIONAL_Q,
};
use mlefit::sampling::{sample_gml, sample_ml, RngStream};
use mlefit::special::PsiMode;
use wasm_bindgen::prelude::*;

/// ML(α, δ) density sampled at `points` equally spaced x in (0, x_max].
#[wasm_bindgen]
pub fn ml_density_curve(alpha: f64, delta: f64, x_max: f64, points: usize) -> Vec<f64> {
    let params = match MLParams::new(alpha, delta) {
        Ok(p) => p,
        Err(_) => return vec![f64::NAN; points],
    };
    (1..=points)
        .map(|i| {
            let x = x_max * i as f64 / points as f64;
            ml_pdf(params, x).unwrap_or(f64::NAN)
        })
        .collect()
}

/// GML(α, β) CDF sampled at `points` equally spaced x in (0, x_max].
#[wasm_bindgen]
pub fn gml_cdf_curve(alpha: f64, beta: f64, x_max: f64, points: usize) -> Vec<f64> {
    let params = match GMLParams::new(alpha, beta) {
        Ok(p) => p,
        Err(_) => return vec![f64::NAN; points],
    };
    (1..=points)
        .map(|i| {
            let x = x_max * i as f64 / points as f64;
            gml_cdf(params, x).unwrap_or(f64::NAN)
        })
        .collect()
}

/// Histogram of `n` ML(α, δ) draws on (0, x_max), normalized to density
/// scale so it overlays [`ml_density_curve`]. Values past x_max fall into
/// the last bin's out-of-range count, which is dropped.
#[wasm_bindgen]
pub fn ml_histogram(alpha: f64, delta: f64, n: usize, seed: u32, bins: usize, x_max: f64) -> Vec<f64> {
    let params = match MLParams::new(alpha, delta) {
        Ok(p) => p,
        Err(_) => return vec![f64::NAN; bins],
    };
    if bins == 0 || n == 0 || x_max <= 0.0 || x_max.is_nan() {
        return Vec::new();
    }
    let mut rng = RngStream::from_seed(seed as u64);
    let mut counts = vec![0usize; bins];
    for _ in 0..n {
        let t = sample_ml(&mut rng, &params);
        if t < x_max {
            counts[(t / x_max * bins as f64) as usize] += 1;
        }
    }
    let bin_width = x_max / bins as f64;
    counts
        .into_iter()
        .map(|c| c as f64 / (n as f64 * bin_width))
        .collect()
}

/// Empirical CDF of `n` GML(α, β) draws at `points` grid positions on
/// (0, x_max], for overlay on [`gml_cdf_curve`].
#[wasm_bindgen]
pub fn gml_empirical_cdf(
    alpha: f64,
    beta: f64,
    n: usize,
    seed: u32,
    points: usize,
    x_max: f64,
) -> Vec<f64> {
    let params = match GMLParams::new(alpha, beta) {
        Ok(p) => p,
        Err(_) => return vec![f64::NAN; points],
    };
    let mut rng = RngStream::from_seed(seed as u64);
    let mut draws: Vec<f64> = (0..n).map(|_| sample_gml(&mut rng, &params)).collect();
    draws.sort_by(f64::total_cmp);
    (1..=points)
        .map(|i| {
            let x = x_max * i as f64 / points as f64;
            let hits = draws.partition_point(|&d| d <= x);
            hits as f64 / n as f64
        })
        .collect()
}

fn fit_json(truth1: f64, truth2: f64, n: usize, fit: &FitResult, ci: Option<(f64, f64, f64, f64)>) -> String {
    let mut s = format!(
        "{{\"true_alpha\": {truth1}, \"true_param2\": {truth2}, \"n\": {n}, \
         \"alpha\": {}, \"second_param\": {}, \"method\": \"{}\", \
         \"clamped\": {}, \"converged\": {}",
        fit.param1,
        fit.param2,
        fit.method.tag(),
        fit.clamped,
        fit.converged
    );
    if let Some((al, au, dl, du)) = ci {
        s.push_str(&format!(
            ", \"ci\": {{\"alpha\": [{al}, {au}], \"delta\": [{dl}, {du}]}}"
        ));
    }
    s.push('}');
    s
}

/// Draws `n` variates from the selected law and fits them back with the
/// selected method. `dist` is "ml" or "gml", `method` is "log" or "frac".
/// Returns a JSON object; on error, `{"error": "..."}`.
#[wasm_bindgen]
pub fn simulate_and_fit(
    dist: &str,
    alpha: f64,
    param2: f64,
    n: usize,
    seed: u32,
    method: &str,
) -> String {
    let err = |msg: String| format!("{{\"error\": \"{}\"}}", msg.replace('"', "'"));
    if n < 2 {
        return err("need n >= 2".to_string());
    }
    let mut rng = RngStream::from_seed(seed as u64);
    match dist {
        "ml" => {
            let params = match MLParams::new(alpha, param2) {
                Ok(p) => p,
                Err(e) => return err(e.to_string()),
            };
            let data: Vec<f64> = (0..n).map(|_| sample_ml(&mut rng, &params)).collect();
            let fit = match method {
                "log" => Ok(estimate_ml_logmoment(&log_summary(&data).expect("positive"))),
                "frac" => estimate_ml_fractional(&data),
                other => return err(format!("unknown method {other}")),
            };
            match fit {
                Ok(fit) => {
                    let ci = ml_confidence_intervals(&fit, n, 0.95).ok().map(|c| {
                        (c.alpha.lower, c.alpha.upper, c.delta.lower, c.delta.upper)
                    });
                    fit_json(alpha, param2, n, &fit, ci)
                }
                Err(e) => err(e.to_string()),
            }
        }
        "gml" => {
            let params = match GMLParams::new(alpha, param2) {
                Ok(p) => p,
                Err(e) => return err(e.to_string()),
            };
            let data: Vec<f64> = (0..n).map(|_| sample_gml(&mut rng, &params)).collect();
            let fit = match method {
                "log" => log_summary(&data)
                    .and_then(|s| estimate_gml_logmoment(&s, PsiMode::Accurate)),
                "frac" => {
                    let (q1, q2) = GML_FRACTIONAL_Q;
                    estimate_gml_fractional(&data, q1, q2)
                }
                other => return err(format!("unknown method {other}")),
            };
            match fit {
                Ok(fit) => fit_json(alpha, param2, n, &fit, None),
                Err(e) => err(e.to_string()),
            }
        }
        other => err(format!("unknown distribution {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_curve_is_positive_and_finite_in_range() {
        let curve = ml_density_curve(0.7, 1.0, 6.0, 200);
        assert_eq!(curve.len(), 200);
        assert!(curve.iter().all(|v| v.is_nan() || *v >= 0.0));
        assert!(curve.iter().filter(|v| v.is_finite()).count() > 150);
    }

    #[test]
    fn cdf_curves_agree_with_empirical() {
        let theory = gml_cdf_curve(0.8, 2.0, 4.0, 40);
        let empirical = gml_empirical_cdf(0.8, 2.0, 200_000, 42, 40, 4.0);
        for (t, e) in theory.iter().zip(&empirical) {
            if t.is_finite() {
                assert!((t - e).abs() < 0.01, "theory {t} vs empirical {e}");
            }
        }
    }

    #[test]
    fn histogram_mass_is_bounded_by_one() {
        let bins = ml_histogram(0.9, 1.0, 50_000, 7, 60, 8.0);
        let width = 8.0 / 60.0;
        let mass: f64 = bins.iter().map(|d| d * width).sum();
        assert!(mass > 0.5 && mass <= 1.0 + 1e-12);
    }

    #[test]
    fn simulate_and_fit_round_trips() {
        let json = simulate_and_fit("ml", 0.7, 1.0, 20_000, 9, "log");
        assert!(json.contains("\"converged\": true"), "{json}");
        assert!(json.contains("\"ci\""));
        let json = simulate_and_fit("gml", 0.6, 3.0, 20_000, 9, "log");
        assert!(json.contains("\"converged\": true"), "{json}");
        let json = simulate_and_fit("ml", 1.4, 1.0, 100, 9, "log");
        assert!(json.contains("error"), "{json}");
    }

    #[test]
    fn same_seed_same_view() {
        assert_eq!(
            ml_histogram(0.6, 2.0, 10_000, 3, 40, 10.0),
            ml_histogram(0.6, 2.0, 10_000, 3, 40, 10.0)
        );
        assert_eq!(
            simulate_and_fit("gml", 0.5, 20.0, 5_000, 1, "frac"),
            simulate_and_fit("gml", 0.5, 20.0, 5_000, 1, "frac")
        );
    }
}
