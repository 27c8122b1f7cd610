//! Deterministic, splittable variate generation.
//!
//! [`RngStream`] is a small splitmix64-style generator whose state is
//! derived by hashing `(master_seed, cell_id, replicate_id)`, so a Monte
//! Carlo replicate's entire variate sequence is a pure function of that
//! triple — independent of thread scheduling.
//!
//! The composite laws are sampled through their mixture representations:
//! `T = δ·Z·R^{1/α}` for ML(α, δ) and `X = W^{1/α}·S_α` for GML(α, β),
//! where Z is standard exponential, W is gamma(β), R has the arctangent-law
//! density `sin(πα)/(απ[r² + 2r·cos(απ) + 1])`, and S_α is the one-sided
//! α-stable law with Laplace transform `exp(−λ^α)`.

use crate::distributions::{GMLParams, MLParams};
use crate::error::{Error, Result};

use std::f64::consts::PI;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Splittable deterministic random stream.
///
/// Streams are single-owner: one stream is never used from two threads at
/// once, but may be created on one thread and moved to another. Equal
/// `(master_seed, cell_id, replicate_id)` triples yield identical variate
/// sequences; distinct triples yield statistically independent streams for
/// test purposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    /// Derives the stream keyed by `(master_seed, cell_id, replicate_id)`.
    pub fn new(master_seed: u64, cell_id: u64, replicate_id: u64) -> Self {
        let mut s = mix64(master_seed ^ GOLDEN);
        s = mix64(s ^ cell_id.wrapping_mul(0xd134_2543_de82_ef95));
        s = mix64(s ^ replicate_id.wrapping_mul(0xda94_2042_e4dd_58b5));
        RngStream { state: s }
    }

    /// Stream with an empty path; used for one-off sampling runs.
    pub fn from_seed(seed: u64) -> Self {
        RngStream::new(seed, 0, 0)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform on the open interval (0, 1): 53-bit resolution, both
    /// endpoints excluded so logs and inverse CDFs never hit a pole.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Inverse CDF of the standard exponential: `−log(1−u)`.
///
/// Uses `ln_1p` so that u near either end maps to a strictly positive value.
#[inline]
pub fn exp_inverse_cdf(u: f64) -> f64 {
    -(-u).ln_1p()
}

/// Standard exponential variate.
pub fn sample_exp(rng: &mut RngStream) -> f64 {
    exp_inverse_cdf(rng.next_open01())
}

/// Standard normal variate via Box-Muller (consumes two uniforms).
fn sample_normal(rng: &mut RngStream) -> f64 {
    let u1 = rng.next_open01();
    let u2 = rng.next_open01();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Gamma(shape β, scale 1) variate.
///
/// Shape ≥ 1 uses the Marsaglia-Tsang squeeze; shape < 1 uses the boost
/// identity `gamma(β) = gamma(β+1)·U^{1/β}` (gamma draw first, then U).
pub fn sample_gamma(rng: &mut RngStream, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!(
            "gamma shape must satisfy β > 0, got {beta}"
        )));
    }
    if beta < 1.0 {
        let g = sample_gamma_ge1(rng, beta + 1.0);
        let u = rng.next_open01();
        return Ok(g * u.powf(1.0 / beta));
    }
    Ok(sample_gamma_ge1(rng, beta))
}

fn sample_gamma_ge1(rng: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = sample_normal(rng);
        let v = (1.0 + c * x).powi(3);
        if v <= 0.0 {
            continue;
        }
        let u = rng.next_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// One-sided (totally skewed positive) α-stable variate with Laplace
/// transform `exp(−λ^α)`, via the Kanter transform:
///
/// ```text
/// S = (a(θ)/W)^{(1−α)/α},
/// a(θ) = sin(αθ)^{α/(1−α)} · sin((1−α)θ) / sin(θ)^{1/(1−α)},
/// ```
///
/// with θ uniform on (0, π) and W standard exponential (θ drawn first).
/// The transform is evaluated in log space. α = 1 returns the constant 1
/// (`exp(−λ)` is the transform of a point mass at 1).
pub fn sample_positive_stable(rng: &mut RngStream, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "stable index must satisfy 0 < α ≤ 1, got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(1.0);
    }
    let theta = PI * rng.next_open01();
    let w = sample_exp(rng);
    let ln_a = alpha / (1.0 - alpha) * (alpha * theta).sin().ln()
        + ((1.0 - alpha) * theta).sin().ln()
        - theta.sin().ln() / (1.0 - alpha);
    Ok(((1.0 - alpha) / alpha * (ln_a - w.ln())).exp())
}

/// Inverse CDF of the R law with density
/// `f_R(r) = sin(πα)/(απ[r² + 2r·cos(απ) + 1])`, r > 0.
///
/// Setting θ = απ, the CDF is
/// `F_R(r) = [arctan((r + cos θ)/sin θ) − (π/2 − θ)]/(απ)`, whose inverse
/// `r(u) = sin θ·tan(απu + π/2 − θ) − cos θ` simplifies (via the angle sum
/// `cos(απu + π/2) = −sin(απu)`) to the cancellation-free form used here:
///
/// ```text
/// r(u) = sin(απu) / sin(απ(1−u))
/// ```
///
/// which is strictly positive on u ∈ (0, 1) and maps u ↔ 1−u to r ↔ 1/r.
#[inline]
pub fn r_inverse_cdf(alpha: f64, u: f64) -> f64 {
    (alpha * PI * u).sin() / (alpha * PI * (1.0 - u)).sin()
}

/// Variate of the R law above for α ∈ (0, 1) (one uniform).
pub fn sample_r(rng: &mut RngStream, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "sample_r requires 0 < α < 1, got {alpha}"
        )));
    }
    Ok(r_inverse_cdf(alpha, rng.next_open01()))
}

/// ML(α, δ) variate via `T = δ·Z·R^{1/α}` (Z drawn first, then R).
/// At α = 1 the R factor degenerates to 1 and `T = δ·Z`.
pub fn sample_ml(rng: &mut RngStream, params: &MLParams) -> f64 {
    let alpha = params.alpha();
    let z = sample_exp(rng);
    if alpha == 1.0 {
        return params.delta() * z;
    }
    let r = r_inverse_cdf(alpha, rng.next_open01());
    params.delta() * z * r.powf(1.0 / alpha)
}

/// GML(α, β) variate via `X = W^{1/α}·S_α` (W drawn first, then S).
/// At α = 1 the stable factor degenerates to 1 and `X = W`.
pub fn sample_gml(rng: &mut RngStream, params: &GMLParams) -> f64 {
    let alpha = params.alpha();
    let w = sample_gamma(rng, params.beta()).expect("beta validated");
    if alpha == 1.0 {
        return w;
    }
    let s = sample_positive_stable(rng, alpha).expect("alpha validated");
    w.powf(1.0 / alpha) * s
}
