//! Dormand–Prince 5(4) integrator with step-size control and Hermite dense output.

use serde::Serialize;

use crate::error::IntegratorError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorOptions {
    /// Relative and absolute per-step tolerance.
    pub tol: f64,
    /// `None` means a tenth of the integration span.
    pub max_step: Option<f64>,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_step: None, initial_step: 1e-3, max_steps: 1_000_000 }
    }
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), IntegratorError> {
        if !(1e-13..=1e-3).contains(&self.tol) {
            return Err(IntegratorError::InvalidTolerance { tol: self.tol });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejections: usize,
    pub evaluations: usize,
    /// Largest normalised error estimate among accepted steps (≤ 1).
    pub max_error_estimate: f64,
}

/// An accepted point with its derivative, used for dense output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<const N: usize> {
    pub nodes: Vec<Node<N>>,
    pub stats: IntegratorStats,
}

impl<const N: usize> Solution<N> {
    /// State at an accepted node whose time equals `t` exactly.
    pub fn at_node(&self, t: f64) -> Option<&[f64; N]> {
        self.nodes
            .binary_search_by(|n| n.t.total_cmp(&t))
            .ok()
            .map(|i| &self.nodes[i].y)
    }

    /// Cubic Hermite interpolation between the bracketing accepted nodes.
    /// `None` outside the integrated span.
    pub fn interpolate(&self, t: f64) -> Option<[f64; N]> {
        let first = self.nodes.first()?;
        let last = self.nodes.last()?;
        if !(t >= first.t && t <= last.t) {
            return None;
        }
        let i = match self.nodes.binary_search_by(|n| n.t.total_cmp(&t)) {
            Ok(i) => return Some(self.nodes[i].y),
            Err(i) => i,
        };
        let (a, b) = (&self.nodes[i - 1], &self.nodes[i]);
        Some(hermite(a, b, t))
    }
}

fn hermite<const N: usize>(a: &Node<N>, b: &Node<N>, t: f64) -> [f64; N] {
    let h = b.t - a.t;
    let s = (t - a.t) / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    std::array::from_fn(|j| h00 * a.y[j] + h10 * h * a.dy[j] + h01 * b.y[j] + h11 * h * b.dy[j])
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|j| y[j] + h * terms.iter().map(|(c, k)| c * k[j]).sum::<f64>())
}

/// Integrates `dy/dt = f(t, y)` from `t0` through every time in `stops`,
/// landing on each one exactly. `stops` must be increasing and ≥ `t0`.
pub fn dopri5<F, const N: usize>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    stops: &[f64],
    opts: &IntegratorOptions,
) -> Result<Solution<N>, IntegratorError>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], IntegratorError>,
{
    opts.validate()?;
    let mut prev = t0;
    for &s in stops {
        if !(s.is_finite() && s >= prev) {
            return Err(IntegratorError::InvalidGrid);
        }
        prev = s;
    }
    let t_end = prev;
    let max_step = opts.max_step.unwrap_or(((t_end - t0) / 10.0).max(f64::MIN_POSITIVE));
    let tol = opts.tol;

    let mut stats = IntegratorStats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    stats.evaluations += 1;
    let mut nodes = vec![Node { t, y, dy: k1 }];
    let mut h = opts.initial_step.min(max_step);
    let mut stop_iter = stops.iter().copied().filter(|&s| s > t0).peekable();

    while let Some(&target) = stop_iter.peek() {
        if target <= t {
            stop_iter.next();
            continue;
        }
        if stats.steps + stats.rejections >= opts.max_steps {
            return Err(IntegratorError::TooManySteps { t, max_steps: opts.max_steps });
        }
        let remaining = target - t;
        let lands = h >= remaining;
        let step = if lands { remaining } else { h };
        if step < 1e-14 * t.abs().max(1.0) && !lands {
            return Err(IntegratorError::StepUnderflow { t, h: step });
        }

        let k2 = f(t + C2 * step, &combine(&y, step, &[(A21, &k1)]))?;
        let k3 = f(t + C3 * step, &combine(&y, step, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(t + C4 * step, &combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = f(t + C5 * step, &combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = f(
            t + step,
            &combine(&y, step, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )?;
        let y_new = combine(&y, step, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if lands { target } else { t + step };
        let k7 = f(t_new, &y_new)?;
        stats.evaluations += 6;

        let mut acc = 0.0;
        for j in 0..N {
            let e = step * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]);
            let sc = tol + tol * y[j].abs().max(y_new[j].abs());
            acc += (e / sc) * (e / sc);
        }
        let err = (acc / N.max(1) as f64).sqrt();
        // Non-finite trial stages count as a failed step.
        let err = if err.is_finite() && y_new.iter().all(|v| v.is_finite()) { err } else { f64::INFINITY };

        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t = t_new;
            y = y_new;
            k1 = k7;
            stats.steps += 1;
            stats.max_error_estimate = stats.max_error_estimate.max(err);
            nodes.push(Node { t, y, dy: k1 });
            if lands {
                stop_iter.next();
                // A forced landing says nothing about the natural step size.
                h = h.max(step);
            } else {
                h = step * factor;
            }
            h = h.min(max_step);
        } else {
            stats.rejections += 1;
            h = step * factor.min(1.0);
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(IntegratorError::StepUnderflow { t, h });
            }
        }
    }
    Ok(Solution { nodes, stats })
}
