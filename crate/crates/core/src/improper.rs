//! Principal, singular and total values of improper integrals on a real
//! segment.
//!
//! The input is an antiderivative `F`; the integrand is its derivative along
//! the real axis. For interior points `c₁ < … < c_n` of `[a, b]`:
//!
//! ```text
//! v.p. = lim  ∫_{[a,b] minus (c_j − Δ, c_j + Δ)} F′(x) dx
//! v.s. = lim  Σ [F(c_j + Δ) − F(c_j − Δ)]
//! v.t. = F(b) − F(a)
//! ```
//!
//! `v.p.` and `v.s.` may diverge separately while their sum at a common `Δ`
//! stays equal to `F(b) − F(a)`.

use crate::expr::Expr;
use crate::quad::gk::{self, Estimate};
use crate::quad::{richardson, Limit, QuadError, RadiiSchedule, ScheduleError, TableRow};
use crate::Complex;

/// A complex number or a point at infinity approached along `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex),
    Infinite { direction: Complex },
}

impl ExtendedComplex {
    pub fn infinite(direction: Complex) -> ExtendedComplex {
        ExtendedComplex::Infinite {
            direction: direction / direction.norm(),
        }
    }

    pub fn finite(&self) -> Option<Complex> {
        match *self {
            ExtendedComplex::Finite(v) => Some(v),
            ExtendedComplex::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedComplex::Finite(_))
    }
}

impl std::fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedComplex::Finite(v) => write!(f, "{v}"),
            ExtendedComplex::Infinite { direction } => write!(f, "∞·({direction})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ImproperError {
    #[error("antiderivative is not defined at endpoint x = {0}")]
    EndpointSingular(f64),
    #[error("{0} neither converges nor diverges steadily")]
    Oscillatory(&'static str),
    #[error("invalid singular points: {0}")]
    InvalidSingularities(String),
    #[error("antiderivative is not defined at x = {0} on the excision schedule")]
    NotEvaluable(f64),
    #[error("total value routes disagree: {vt} vs {vt_check} (gap {gap:e})")]
    MismatchBeyondTolerance {
        vt: Complex,
        vt_check: Complex,
        gap: f64,
    },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("invalid radius schedule: {0}")]
    Schedule(#[from] ScheduleError),
}

/// One schedule step of the matched-radius regularization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedRow {
    pub step: usize,
    pub delta: f64,
    pub excised: Complex,
    pub jumps: Complex,
    /// `excised + jumps`, equal to `F(b) − F(a)` up to quadrature error.
    pub total: Complex,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImproperResult {
    pub vp: ExtendedComplex,
    pub vs: ExtendedComplex,
    /// `F(b) − F(a)`.
    pub vt: Complex,
    /// Limit of the matched-radius sums.
    pub vt_check: Complex,
    pub agreement: f64,
    pub table: Vec<MatchedRow>,
}

impl ImproperResult {
    /// Table of the matched sums in the generic convergence-table layout.
    pub fn convergence_table(&self) -> Vec<TableRow> {
        self.table
            .iter()
            .map(|r| TableRow {
                step: r.step,
                param: r.delta,
                value: r.total,
                error: r.error,
            })
            .collect()
    }
}

fn at(f: &Expr, x: f64) -> Result<Complex, ImproperError> {
    f.eval(Complex::new(x, 0.0))
        .map_err(|_| ImproperError::NotEvaluable(x))
}

fn extended(limit: Limit, what: &'static str) -> Result<ExtendedComplex, ImproperError> {
    match limit {
        Limit::Finite { value, .. } => Ok(ExtendedComplex::Finite(value)),
        Limit::Divergent { direction } => Ok(ExtendedComplex::infinite(direction)),
        Limit::Unstable { .. } => Err(ImproperError::Oscillatory(what)),
    }
}

/// Default schedule: `Δ₀` a quarter of the smallest gap between consecutive
/// points of `a, sing…, b`, halving eight times.
pub fn default_schedule(a: f64, b: f64, sing: &[f64]) -> RadiiSchedule {
    let mut pts = vec![a];
    pts.extend_from_slice(sing);
    pts.push(b);
    let gap = pts
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    RadiiSchedule::halving(0.25 * gap)
}

fn check_points(a: f64, b: f64, sing: &[f64], delta0: f64) -> Result<(), ImproperError> {
    if !(a < b) {
        return Err(ImproperError::InvalidSingularities(format!(
            "empty interval [{a}, {b}]"
        )));
    }
    let mut prev = a;
    for &c in sing {
        if !(c > prev) || !(c < b) {
            return Err(ImproperError::InvalidSingularities(
                "points must be strictly increasing and strictly inside the interval".into(),
            ));
        }
        let room = if prev == a { c - a } else { (c - prev) / 2.0 };
        if delta0 >= room {
            return Err(ImproperError::InvalidSingularities(format!(
                "excision radius {delta0} overlaps a neighbouring point or endpoint near x = {c}"
            )));
        }
        prev = c;
    }
    if let Some(&last) = sing.last() {
        if delta0 >= b - last {
            return Err(ImproperError::InvalidSingularities(format!(
                "excision radius {delta0} reaches the endpoint b = {b}"
            )));
        }
    }
    Ok(())
}

/// Two-sided jump `lim [F(c + Δ) − F(c − Δ)]`.
pub fn jump_term(
    f: &Expr,
    c: f64,
    schedule: &RadiiSchedule,
) -> Result<ExtendedComplex, ImproperError> {
    schedule.validate()?;
    let radii = schedule.radii();
    let mut values = Vec::with_capacity(radii.len());
    for &d in &radii {
        values.push(at(f, c + d)? - at(f, c - d)?);
    }
    let errors = vec![0.0; values.len()];
    extended(
        richardson(&values, &errors, schedule.ratio, &radii).limit,
        "jump",
    )
}

// ∫ F′ over [a, b] with the windows (c_j − Δ, c_j + Δ) removed.
fn excised(
    dfx: &Expr,
    a: f64,
    b: f64,
    sing: &[f64],
    delta: f64,
    tol: f64,
) -> Result<Estimate, ImproperError> {
    let mut pieces = Vec::with_capacity(sing.len() + 1);
    let mut lo = a;
    for &c in sing {
        pieces.push((lo, c - delta));
        lo = c + delta;
    }
    pieces.push((lo, b));
    let share = tol / pieces.len() as f64;
    let mut acc = Estimate::zero();
    for (u, v) in pieces {
        let est = gk::integrate(
            |x| {
                dfx.eval(Complex::new(x, 0.0))
                    .map_err(|e| QuadError::SingularityOnPath(e.point()))
            },
            u,
            v,
            share,
        )?;
        acc = acc.add(est);
    }
    Ok(acc)
}

/// Principal value `v.p. ∫_a^b F′(x) dx` with symmetric excision around `sing`.
pub fn vp_1d(
    f: &Expr,
    a: f64,
    b: f64,
    sing: &[f64],
    schedule: &RadiiSchedule,
    tol: f64,
) -> Result<ExtendedComplex, ImproperError> {
    Ok(vt_1d(f, a, b, sing, schedule, tol)?.vp)
}

/// Total value with both routes and the per-step matched-radius table.
pub fn vt_1d(
    f: &Expr,
    a: f64,
    b: f64,
    sing: &[f64],
    schedule: &RadiiSchedule,
    tol: f64,
) -> Result<ImproperResult, ImproperError> {
    let fa = f
        .eval(Complex::new(a, 0.0))
        .map_err(|_| ImproperError::EndpointSingular(a))?;
    let fb = f
        .eval(Complex::new(b, 0.0))
        .map_err(|_| ImproperError::EndpointSingular(b))?;
    let vt = fb - fa;
    let dfx = f.real_derivative();

    if sing.is_empty() {
        let est = excised(&dfx, a, b, sing, 0.0, tol)?;
        let agreement = (est.value - vt).norm();
        let row = MatchedRow {
            step: 0,
            delta: 0.0,
            excised: est.value,
            jumps: Complex::new(0.0, 0.0),
            total: est.value,
            error: est.error,
        };
        check_agreement(vt, est.value, agreement, est.error, tol)?;
        return Ok(ImproperResult {
            vp: ExtendedComplex::Finite(est.value),
            vs: ExtendedComplex::Finite(Complex::new(0.0, 0.0)),
            vt,
            vt_check: est.value,
            agreement,
            table: vec![row],
        });
    }

    schedule.validate()?;
    check_points(a, b, sing, schedule.eps0)?;
    let radii = schedule.radii();
    let mut table = Vec::with_capacity(radii.len());
    for (step, &delta) in radii.iter().enumerate() {
        let ex = excised(&dfx, a, b, sing, delta, tol)?;
        let mut jumps = Complex::new(0.0, 0.0);
        for &c in sing {
            jumps += at(f, c + delta)? - at(f, c - delta)?;
        }
        table.push(MatchedRow {
            step,
            delta,
            excised: ex.value,
            jumps,
            total: ex.value + jumps,
            error: ex.error,
        });
    }

    let ex_values: Vec<Complex> = table.iter().map(|r| r.excised).collect();
    let ex_errors: Vec<f64> = table.iter().map(|r| r.error).collect();
    let jump_values: Vec<Complex> = table.iter().map(|r| r.jumps).collect();
    let totals: Vec<Complex> = table.iter().map(|r| r.total).collect();
    let zeros = vec![0.0; radii.len()];

    let vp = extended(
        richardson(&ex_values, &ex_errors, schedule.ratio, &radii).limit,
        "principal value",
    )?;
    let vs = extended(
        richardson(&jump_values, &zeros, schedule.ratio, &radii).limit,
        "singular value",
    )?;
    let (vt_check, check_err) = match richardson(&totals, &ex_errors, schedule.ratio, &radii).limit
    {
        Limit::Finite { value, error } => (value, error),
        _ => return Err(ImproperError::Oscillatory("matched-radius total")),
    };
    let agreement = (vt - vt_check).norm();
    let worst = ex_errors.iter().cloned().fold(check_err, f64::max);
    check_agreement(vt, vt_check, agreement, worst, tol)?;
    Ok(ImproperResult {
        vp,
        vs,
        vt,
        vt_check,
        agreement,
        table,
    })
}

fn check_agreement(
    vt: Complex,
    vt_check: Complex,
    gap: f64,
    err: f64,
    tol: f64,
) -> Result<(), ImproperError> {
    let allowed = 100.0 * (tol + err) + 1e-10 * (1.0 + vt.norm());
    if gap > allowed {
        return Err(ImproperError::MismatchBeyondTolerance { vt, vt_check, gap });
    }
    Ok(())
}
