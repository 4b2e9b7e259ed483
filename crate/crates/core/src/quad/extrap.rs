//! Limits along geometric radius schedules.
//!
//! A sequence `I(ε_m)` with `ε_m = ε₀·q^m` is extrapolated to `ε → 0` by
//! Richardson elimination of the `ε` and `ε²` terms. Before extrapolating, the
//! successive differences are inspected: if they stop shrinking the limit is
//! reported as divergent (when they keep a common phase) or unstable.

use crate::Complex;

/// Geometric schedule `ε_m = eps0·ratio^m`, `m = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiiSchedule {
    pub eps0: f64,
    pub ratio: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid radii schedule: {0}")]
pub struct ScheduleError(pub String);

impl RadiiSchedule {
    pub const MIN_STEPS: usize = 3;

    pub fn new(eps0: f64, ratio: f64, steps: usize) -> Result<RadiiSchedule, ScheduleError> {
        let s = RadiiSchedule { eps0, ratio, steps };
        s.validate()?;
        Ok(s)
    }

    /// `ε₀ = eps0`, `q = 1/2`, eight halvings.
    pub fn halving(eps0: f64) -> RadiiSchedule {
        RadiiSchedule {
            eps0,
            ratio: 0.5,
            steps: 8,
        }
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return Err(ScheduleError(format!(
                "eps0 must be positive, got {}",
                self.eps0
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(ScheduleError(format!(
                "ratio must lie in (0, 1), got {}",
                self.ratio
            )));
        }
        if self.steps < Self::MIN_STEPS {
            return Err(ScheduleError(format!(
                "at least {} steps are required",
                Self::MIN_STEPS
            )));
        }
        Ok(())
    }

    pub fn radius(&self, m: usize) -> f64 {
        self.eps0 * self.ratio.powi(m as i32)
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..=self.steps).map(|m| self.radius(m)).collect()
    }

    pub fn smallest(&self) -> f64 {
        self.radius(self.steps)
    }

    /// Same ratio and length, starting at `eps0`.
    pub fn with_start(&self, eps0: f64) -> RadiiSchedule {
        RadiiSchedule { eps0, ..*self }
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub step: usize,
    pub param: f64,
    pub value: Complex,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite {
        value: Complex,
        error: f64,
    },
    /// Grows without bound; `direction` has unit modulus.
    Divergent {
        direction: Complex,
    },
    /// Neither settles nor grows steadily.
    Unstable {
        best: Complex,
        error: f64,
    },
}

impl Limit {
    pub fn finite(&self) -> Option<Complex> {
        match *self {
            Limit::Finite { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub limit: Limit,
    pub table: Vec<TableRow>,
}

/// Ratio of successive differences above which the sequence is taken to be
/// growing rather than settling.
const GROWTH_RATIO: f64 = 0.9;

/// Richardson levels: `ε` and `ε²` are always removed, up to two more terms
/// when the schedule is long enough and they help.
const MIN_LEVEL: usize = 2;
const MAX_LEVEL: usize = 4;

/// Extrapolates `values[m] ≈ I(ε₀·q^m)` to ε → 0.
///
/// `errors[m]` are the absolute errors of the inputs; they set the noise level
/// below which differences are not interpreted.
pub fn richardson(values: &[Complex], errors: &[f64], ratio: f64, params: &[f64]) -> Extrapolation {
    assert!(values.len() >= 3 && values.len() == errors.len() && values.len() == params.len());
    let n = values.len();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let input_noise = errors.iter().cloned().fold(0.0, f64::max);
    let noise = 1e-13 * scale + input_noise;

    let diffs: Vec<Complex> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let growing = diffs.len() >= 3
        && diffs[diffs.len() - 3..]
            .windows(2)
            .all(|w| w[1].norm() >= GROWTH_RATIO * w[0].norm())
        && diffs[diffs.len() - 1].norm() > 1e3 * noise.max(1e-300);

    // Richardson table. The ε and ε² terms are always eliminated; further
    // levels are kept only when they shrink the last difference.
    let max_level = MIN_LEVEL.max((n - 2).min(MAX_LEVEL));
    let mut levels = vec![values.to_vec()];
    for k in 1..=max_level {
        let qk = ratio.powi(k as i32);
        let prev = &levels[k - 1];
        let mut next = vec![Complex::new(0.0, 0.0); n];
        for m in k..n {
            next[m] = (prev[m] - qk * prev[m - 1]) / (1.0 - qk);
        }
        levels.push(next);
    }
    let mut best = MIN_LEVEL;
    let last_change = |k: usize| (levels[k][n - 1] - levels[k][n - 2]).norm();
    for k in MIN_LEVEL + 1..=max_level {
        if k + 1 < n && last_change(k) < last_change(best) {
            best = k;
        }
    }
    let top = &levels[best];
    let value = top[n - 1];
    let change = last_change(best);
    // Divided differences amplify input errors by a bounded factor.
    let amplification: f64 = (1..=best)
        .map(|k| (1.0 + ratio.powi(k as i32)) / (1.0 - ratio.powi(k as i32)))
        .product();
    let error = change + amplification * input_noise + 4.0 * f64::EPSILON * scale;

    let table = (0..n)
        .map(|m| TableRow {
            step: m,
            param: params[m],
            value: values[m],
            error: match m {
                0 => errors[0],
                1 | 2 => (values[m] - values[m - 1]).norm(),
                _ => (levels[MIN_LEVEL][m] - levels[MIN_LEVEL][m - 1]).norm(),
            },
        })
        .collect();

    let limit = if growing {
        let d = diffs[diffs.len() - 1];
        Limit::Divergent {
            direction: d / d.norm(),
        }
    } else {
        let variation = diffs.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let settled = change <= 0.1 * variation || change <= 1e3 * noise;
        if settled && value.re.is_finite() && value.im.is_finite() {
            Limit::Finite { value, error }
        } else {
            Limit::Unstable { best: value, error }
        }
    };
    Extrapolation { limit, table }
}
