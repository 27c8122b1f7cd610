//! Generic numeric plumbing: bracketed scalar root-finding and
//! derivative-free 2-D minimization. Both are deterministic given their
//! inputs; all scratch state is per-call.

use crate::error::{Error, Result};

/// Convergence knobs shared by the solvers.
///
/// The default tolerance of 1e-6 mirrors the tolerance the reference
/// experiments were run with; estimator code passes tighter values where a
/// round-trip guarantee requires it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-6,
            max_iterations: 200,
        }
    }
}

impl SolverConfig {
    pub fn new(tolerance: f64, max_iterations: usize) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::domain(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        if max_iterations == 0 {
            return Err(Error::domain("max_iterations must be at least 1"));
        }
        Ok(SolverConfig {
            tolerance,
            max_iterations,
        })
    }
}

/// Result of a successful root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub iterations: usize,
}

/// Brent-style bracketed root-finding: bisection combined with secant and
/// inverse-quadratic interpolation steps.
///
/// Requires `f(lo)·f(hi) <= 0`. Terminates when the bracket half-width drops
/// below `tolerance` (plus a floating-point floor) or an iterate hits an
/// exact zero. Fails with [`Error::NoSignChange`] or [`Error::Budget`].
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, config: &SolverConfig) -> Result<RootResult>
where
    F: FnMut(f64) -> f64,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(RootResult {
            root: a,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            root: b,
            iterations: 0,
        });
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=config.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * config.tolerance;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(RootResult {
                root: b,
                iterations: iter,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt interpolation: secant when a == c, inverse quadratic else.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += if xm >= 0.0 { tol1 } else { -tol1 };
        }
        fb = f(b);
        if fb == 0.0 {
            return Ok(RootResult {
                root: b,
                iterations: iter,
            });
        }
        if fb.is_nan() {
            return Err(Error::convergence(format!(
                "objective returned NaN at {b} during root search"
            )));
        }
    }
    Err(Error::Budget(config.max_iterations))
}

/// Rectangular bounds for [`minimize_2d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds2 {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Bounds2 {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if !(x.0 < x.1 && y.0 < y.1) {
            return Err(Error::domain(format!(
                "degenerate box: x=({}, {}), y=({}, {})",
                x.0, x.1, y.0, y.1
            )));
        }
        Ok(Bounds2 { x, y })
    }

    fn project(&self, p: (f64, f64)) -> (f64, f64) {
        (
            p.0.clamp(self.x.0, self.x.1),
            p.1.clamp(self.y.0, self.y.1),
        )
    }

    fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.x.0 && p.0 <= self.x.1 && p.1 >= self.y.0 && p.1 <= self.y.1
    }
}

/// Result of a 2-D minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeResult {
    pub point: (f64, f64),
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Nelder-Mead simplex descent over a rectangular box.
///
/// Candidate points are projected onto the box before evaluation.
/// Convergence means the simplex diameter (max vertex distance from the
/// best vertex, ∞-norm) fell below `config.tolerance`. If the iteration
/// budget runs out, the simplex is rebuilt once around the best point and
/// the search repeats; exhausting the budget again reports
/// `converged = false` rather than an error — the caller decides.
pub fn minimize_2d<F>(
    mut f: F,
    start: (f64, f64),
    bounds: Bounds2,
    config: &SolverConfig,
) -> MinimizeResult
where
    F: FnMut(f64, f64) -> f64,
{
    let start = bounds.project(start);
    let first = nelder_mead(&mut f, start, bounds, config);
    if first.converged {
        return first;
    }
    // One restart with a fresh simplex around the best point found so far.
    let second = nelder_mead(&mut f, first.point, bounds, config);
    let best = if second.value <= first.value {
        second
    } else {
        MinimizeResult {
            iterations: first.iterations + second.iterations,
            ..first
        }
    };
    MinimizeResult {
        iterations: first.iterations + second.iterations,
        ..best
    }
}

fn nelder_mead<F>(
    f: &mut F,
    start: (f64, f64),
    bounds: Bounds2,
    config: &SolverConfig,
) -> MinimizeResult
where
    F: FnMut(f64, f64) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    // Initial steps scale with the coordinate magnitude but never collapse.
    let hx = (0.05 * start.0.abs()).max(0.05 * (bounds.x.1 - bounds.x.0).min(1.0));
    let hy = (0.05 * start.1.abs()).max(0.05 * (bounds.y.1 - bounds.y.0).min(1.0));

    let mut verts = [
        start,
        bounds.project((start.0 + hx, start.1)),
        bounds.project((start.0, start.1 + hy)),
    ];
    // Degenerate vertex (start on the boundary): step the other way.
    if verts[1] == verts[0] {
        verts[1] = bounds.project((start.0 - hx, start.1));
    }
    if verts[2] == verts[0] {
        verts[2] = bounds.project((start.0, start.1 - hy));
    }
    let mut vals = [
        f(verts[0].0, verts[0].1),
        f(verts[1].0, verts[1].1),
        f(verts[2].0, verts[2].1),
    ];

    let mut iterations = 0;
    loop {
        // Order: index 0 best, 2 worst.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
        let sorted_v = [verts[order[0]], verts[order[1]], verts[order[2]]];
        let sorted_f = [vals[order[0]], vals[order[1]], vals[order[2]]];
        verts = sorted_v;
        vals = sorted_f;

        let diameter = verts
            .iter()
            .skip(1)
            .map(|v| (v.0 - verts[0].0).abs().max((v.1 - verts[0].1).abs()))
            .fold(0.0_f64, f64::max);
        if diameter < config.tolerance {
            return MinimizeResult {
                point: verts[0],
                value: vals[0],
                converged: true,
                iterations,
            };
        }
        if iterations >= config.max_iterations {
            return MinimizeResult {
                point: verts[0],
                value: vals[0],
                converged: false,
                iterations,
            };
        }
        iterations += 1;

        let centroid = (
            0.5 * (verts[0].0 + verts[1].0),
            0.5 * (verts[0].1 + verts[1].1),
        );
        let reflect = bounds.project((
            centroid.0 + ALPHA * (centroid.0 - verts[2].0),
            centroid.1 + ALPHA * (centroid.1 - verts[2].1),
        ));
        let fr = f(reflect.0, reflect.1);

        if fr < vals[0] {
            let expand = bounds.project((
                centroid.0 + GAMMA * (reflect.0 - centroid.0),
                centroid.1 + GAMMA * (reflect.1 - centroid.1),
            ));
            let fe = f(expand.0, expand.1);
            if fe < fr {
                verts[2] = expand;
                vals[2] = fe;
            } else {
                verts[2] = reflect;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            verts[2] = reflect;
            vals[2] = fr;
        } else {
            let contract = if fr < vals[2] {
                bounds.project((
                    centroid.0 + RHO * (reflect.0 - centroid.0),
                    centroid.1 + RHO * (reflect.1 - centroid.1),
                ))
            } else {
                bounds.project((
                    centroid.0 + RHO * (verts[2].0 - centroid.0),
                    centroid.1 + RHO * (verts[2].1 - centroid.1),
                ))
            };
            let fc = f(contract.0, contract.1);
            if fc < vals[2].min(fr) {
                verts[2] = contract;
                vals[2] = fc;
            } else {
                // Shrink toward the best vertex.
                for i in 1..3 {
                    verts[i] = bounds.project((
                        verts[0].0 + SIGMA * (verts[i].0 - verts[0].0),
                        verts[0].1 + SIGMA * (verts[i].1 - verts[0].1),
                    ));
                    vals[i] = f(verts[i].0, verts[i].1);
                }
            }
        }
        debug_assert!(verts.iter().all(|&v| bounds.contains(v)));
    }
}
