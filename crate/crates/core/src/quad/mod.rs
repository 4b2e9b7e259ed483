//! Path and area integration, plain and with principal-value excision.
//!
//! Area integrals are taken with respect to the form `dz̄ dz = 2i dx dy`; the
//! factor `2i` is applied by every area routine in this module.

mod area;
pub mod extrap;
pub mod gk;

use crate::expr::{EvalError, Expr};
use crate::geometry::{Contour, GeometryError, PathSegment};
use crate::Complex;

pub use area::{
    area_dxdy, holed_area_dxdy, integrate_area, integrate_area_fn, shell_dxdy, vp_integrate_area,
    AREA_FORM,
};
pub use extrap::{richardson, Extrapolation, Limit, RadiiSchedule, ScheduleError, TableRow};
pub use gk::Estimate;

/// Which differential multiplies the integrand along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Dz,
    Dzbar,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Dz => "dz",
            Measure::Dzbar => "dzbar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// False when the requested tolerance was not reached; `value` is then the
    /// best available estimate.
    pub converged: bool,
}

impl From<Estimate> for QuadResult {
    fn from(e: Estimate) -> QuadResult {
        QuadResult {
            value: e.value,
            abs_error_estimate: e.error,
            evaluations: e.evaluations.max(1),
            converged: e.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("integrand is singular on the path at {0}")]
    SingularityOnPath(Complex),
    #[error("integrand is singular inside the domain at {0}")]
    SingularityInDomain(Complex),
    #[error("excision limit does not converge (best estimate {best})")]
    NonConvergent {
        best: Complex,
        direction: Option<Complex>,
    },
    #[error("invalid excision: {0}")]
    InvalidExcision(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Points to excise and the radii at which to excise them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcisionSpec {
    pub points: Vec<Complex>,
    pub schedule: RadiiSchedule,
}

impl ExcisionSpec {
    pub fn new(points: Vec<Complex>, schedule: RadiiSchedule) -> ExcisionSpec {
        ExcisionSpec { points, schedule }
    }
}

/// Outcome of an excision limit together with its convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcisedIntegral {
    pub limit: Limit,
    pub table: Vec<TableRow>,
    pub evaluations: usize,
}

impl ExcisedIntegral {
    /// The finite limit, or `NonConvergent` carrying the growth direction.
    pub fn result(&self) -> Result<QuadResult, QuadError> {
        match self.limit {
            Limit::Finite { value, error } => Ok(QuadResult {
                value,
                abs_error_estimate: error,
                evaluations: self.evaluations.max(1),
                converged: true,
            }),
            Limit::Divergent { direction } => Err(QuadError::NonConvergent {
                best: self.table.last().map(|r| r.value).unwrap_or_default(),
                direction: Some(direction),
            }),
            Limit::Unstable { best, .. } => Err(QuadError::NonConvergent {
                best,
                direction: None,
            }),
        }
    }

    pub(crate) fn from_sequence(
        values: &[Complex],
        errors: &[f64],
        schedule: &RadiiSchedule,
        evaluations: usize,
    ) -> Self {
        let params = schedule.radii();
        let ex = richardson(values, errors, schedule.ratio, &params);
        ExcisedIntegral {
            limit: ex.limit,
            table: ex.table,
            evaluations,
        }
    }
}

/// Integrates `g(z)·dz` (or `g(z)·dz̄`) over the parameter range `[t0, t1]` of
/// one segment.
pub fn integrate_segment_fn(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    seg: &PathSegment,
    measure: Measure,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Estimate, QuadError> {
    gk::integrate(
        |t| {
            let z = seg.point(t);
            let d = seg.derivative(t);
            let d = match measure {
                Measure::Dz => d,
                Measure::Dzbar => d.conj(),
            };
            g(z).map(|v| v * d)
                .map_err(|e| QuadError::SingularityOnPath(e.point()))
        },
        t0,
        t1,
        tol,
    )
}

/// Closure form of [`integrate_path`].
pub fn integrate_path_fn(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    path: &[PathSegment],
    measure: Measure,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    let total: f64 = path.iter().map(PathSegment::length).sum();
    let mut acc = Estimate::zero();
    for seg in path {
        let share = if total > 0.0 {
            tol * seg.length() / total
        } else {
            tol
        };
        acc = acc.add(integrate_segment_fn(g, seg, measure, 0.0, 1.0, share)?);
    }
    Ok(acc.into())
}

/// `∫ f dz` or `∫ f dz̄` along a path (a contour or any list of segments).
pub fn integrate_path(
    f: &Expr,
    path: &impl AsRef<[PathSegment]>,
    measure: Measure,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    integrate_path_fn(&|z| f.eval(z), path.as_ref(), measure, tol)
}

impl AsRef<[PathSegment]> for Contour {
    fn as_ref(&self) -> &[PathSegment] {
        self.segments()
    }
}

// Arclength bookkeeping for one loop of a contour.
pub(crate) struct LoopArc<'a> {
    segs: &'a [PathSegment],
    start: Vec<f64>,
    pub(crate) total: f64,
    periodic: bool,
}

impl<'a> LoopArc<'a> {
    pub(crate) fn new(segs: &'a [PathSegment], periodic: bool) -> Self {
        let mut start = Vec::with_capacity(segs.len());
        let mut s = 0.0;
        for seg in segs {
            start.push(s);
            s += seg.length();
        }
        LoopArc {
            segs,
            start,
            total: s,
            periodic,
        }
    }

    pub(crate) fn position(&self, k: usize, t: f64) -> f64 {
        self.start[k] + t * self.segs[k].length()
    }

    // Point at arclength `s`, wrapping on closed loops.
    pub(crate) fn point(&self, s: f64) -> Complex {
        let s = if self.periodic {
            s.rem_euclid(self.total)
        } else {
            s.clamp(0.0, self.total)
        };
        let k = self.start.partition_point(|&x| x <= s).saturating_sub(1);
        let len = self.segs[k].length();
        self.segs[k].point(((s - self.start[k]) / len).clamp(0.0, 1.0))
    }

    // Segment pieces `(index, t0, t1)` covering arclength `[a, b]`, `a ≤ b`,
    // wrapping around a closed loop.
    pub(crate) fn pieces(&self, a: f64, b: f64) -> Result<Vec<(usize, f64, f64)>, QuadError> {
        let mut ranges = Vec::new();
        if self.periodic {
            let a0 = a.rem_euclid(self.total);
            let b0 = a0 + (b - a);
            if b0 > self.total {
                ranges.push((a0, self.total));
                ranges.push((0.0, b0 - self.total));
            } else {
                ranges.push((a0, b0));
            }
        } else {
            if a < 0.0 || b > self.total {
                return Err(QuadError::InvalidExcision(
                    "excision window extends past the end of the path".into(),
                ));
            }
            ranges.push((a, b));
        }
        let mut out = Vec::new();
        for (u, v) in ranges {
            for (k, seg) in self.segs.iter().enumerate() {
                let len = seg.length();
                let lo = u.max(self.start[k]);
                let hi = v.min(self.start[k] + len);
                if hi > lo {
                    out.push((k, (lo - self.start[k]) / len, (hi - self.start[k]) / len));
                }
            }
        }
        Ok(out)
    }
}

/// Principal value of `∮ f dz` (or `dz̄`) with symmetric arclength windows of
/// half-width `ε_m` removed around each point of `sing`.
pub fn vp_integrate_path(
    f: &Expr,
    path: &Contour,
    sing: &[Complex],
    measure: Measure,
    schedule: &RadiiSchedule,
    tol: f64,
) -> Result<ExcisedIntegral, QuadError> {
    vp_integrate_path_fn(&|z| f.eval(z), path, sing, measure, schedule, tol)
}

pub fn vp_integrate_path_fn(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    path: &Contour,
    sing: &[Complex],
    measure: Measure,
    schedule: &RadiiSchedule,
    tol: f64,
) -> Result<ExcisedIntegral, QuadError> {
    schedule.validate()?;
    let on_path_tol = 1e-8 * path.scale();
    let eps0 = schedule.eps0;
    // (loop index, arclength position) of each excised point.
    let mut marks: Vec<(usize, f64)> = Vec::new();
    for &p in sing {
        let (k, t, d) = path.nearest(p);
        if d > on_path_tol {
            return Err(QuadError::InvalidExcision(format!(
                "point {p} is not on the path"
            )));
        }
        let li = path.loops().iter().position(|r| r.contains(&k)).unwrap();
        let range = path.loops()[li].clone();
        let arc = LoopArc::new(&path.segments()[range.clone()], true);
        marks.push((
            li,
            arc.start[k - range.start] + t * path.segments()[k].length(),
        ));
    }

    let loops: Vec<LoopArc> = path
        .loops()
        .iter()
        .map(|r| LoopArc::new(&path.segments()[r.clone()], path.is_closed()))
        .collect();
    let closed = path.is_closed();
    for (li, arc) in loops.iter().enumerate() {
        let mut pos: Vec<f64> = marks.iter().filter(|m| m.0 == li).map(|m| m.1).collect();
        pos.sort_by(f64::total_cmp);
        for w in pos.windows(2) {
            if w[1] - w[0] <= 2.0 * eps0 {
                return Err(QuadError::InvalidExcision(
                    "excision windows overlap".into(),
                ));
            }
        }
        if closed && !pos.is_empty() && pos[0] + arc.total - pos[pos.len() - 1] <= 2.0 * eps0 {
            return Err(QuadError::InvalidExcision(
                "excision windows overlap".into(),
            ));
        }
    }

    let total_len = path.length();
    let per_len = tol / total_len.max(1e-300);
    let integrate_pieces =
        |arc: &LoopArc, pieces: &[(usize, f64, f64)]| -> Result<Estimate, QuadError> {
            let mut acc = Estimate::zero();
            for &(k, t0, t1) in pieces {
                let seg = &arc.segs[k];
                let share = per_len * seg.length() * (t1 - t0);
                acc = acc.add(integrate_segment_fn(g, seg, measure, t0, t1, share)?);
            }
            Ok(acc)
        };

    // Base integral with the ε₀ windows removed.
    let mut base = Estimate::zero();
    for (li, arc) in loops.iter().enumerate() {
        let mut pos: Vec<f64> = marks.iter().filter(|m| m.0 == li).map(|m| m.1).collect();
        pos.sort_by(f64::total_cmp);
        if pos.is_empty() {
            base = base.add(integrate_pieces(arc, &arc.pieces(0.0, arc.total)?)?);
            continue;
        }
        let n = pos.len();
        for j in 0..n {
            let a = pos[j] + eps0;
            let b = if j + 1 < n {
                pos[j + 1] - eps0
            } else if closed {
                pos[0] + arc.total - eps0
            } else {
                arc.total
            };
            base = base.add(integrate_pieces(arc, &arc.pieces(a, b)?)?);
        }
        if !closed {
            base = base.add(integrate_pieces(arc, &arc.pieces(0.0, pos[0] - eps0)?)?);
        }
    }

    let mut values = vec![base.value];
    let mut errors = vec![base.error];
    let mut evaluations = base.evaluations;
    let mut current = base;
    for m in 0..schedule.steps {
        let (outer, inner) = (schedule.radius(m), schedule.radius(m + 1));
        for &(li, s0) in &marks {
            let arc = &loops[li];
            let mut pieces = arc.pieces(s0 - outer, s0 - inner)?;
            pieces.extend(arc.pieces(s0 + inner, s0 + outer)?);
            let shell = integrate_pieces(arc, &pieces)?;
            evaluations += shell.evaluations;
            current = current.add(shell);
        }
        values.push(current.value);
        errors.push(current.error);
    }
    Ok(ExcisedIntegral::from_sequence(
        &values,
        &errors,
        schedule,
        evaluations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_keyhole, Orientation};
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn unit() -> Contour {
        Contour::circle(c(0.0, 0.0), 1.0).unwrap()
    }

    #[test]
    fn cauchy_integral() {
        let r = integrate_path(&e("1/z"), &unit(), Measure::Dz, 1e-12).unwrap();
        assert!((r.value - c(0.0, TAU)).norm() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn conjugate_measure() {
        let r = integrate_path(&e("1/conj(z)"), &unit(), Measure::Dzbar, 1e-12).unwrap();
        assert!((r.value - c(0.0, -TAU)).norm() < 1e-12);
    }

    #[test]
    fn entire_function_on_closed_contours() {
        let sq = Contour::rectangle(-1.0, 2.0, -0.5, 0.7).unwrap();
        let key = make_keyhole(c(0.0, 0.0), 1.0, 0.1, PI, 0.01).unwrap();
        for path in [unit(), sq, key] {
            let r = integrate_path(&e("z^2"), &path, Measure::Dz, 1e-12).unwrap();
            assert!(r.value.norm() < 1e-12);
        }
    }

    #[test]
    fn singularity_on_path_is_reported() {
        let seg = [PathSegment::segment(c(-1.0, 0.0), c(1.0, 0.0))];
        assert_eq!(
            integrate_path(&e("1/z"), &seg, Measure::Dz, 1e-10),
            Err(QuadError::SingularityOnPath(c(0.0, 0.0)))
        );
    }

    #[test]
    fn half_residue_on_smooth_boundary() {
        let s = RadiiSchedule::halving(0.1);
        let r = vp_integrate_path(
            &e("1/(z-1)"),
            &unit(),
            &[c(1.0, 0.0)],
            Measure::Dz,
            &s,
            1e-12,
        )
        .unwrap();
        let v = r.result().unwrap();
        assert!((v.value - c(0.0, PI)).norm() < 1e-9, "{v:?}");
    }

    #[test]
    fn excising_a_regular_point_changes_nothing() {
        let s = RadiiSchedule::halving(0.1);
        let r =
            vp_integrate_path(&e("z"), &unit(), &[c(1.0, 0.0)], Measure::Dz, &s, 1e-12).unwrap();
        assert!(r.result().unwrap().value.norm() < 1e-10, "{r:?}");
    }

    #[test]
    fn double_pole_on_path_diverges() {
        let s = RadiiSchedule::halving(0.1);
        let r = vp_integrate_path(
            &e("1/(z-i)^2"),
            &unit(),
            &[c(0.0, 1.0)],
            Measure::Dz,
            &s,
            1e-12,
        )
        .unwrap();
        assert!(matches!(
            r.result(),
            Err(QuadError::NonConvergent {
                direction: Some(_),
                ..
            })
        ));
    }

    #[test]
    fn reversal_and_additivity() {
        let f = e("exp(z)*conj(z) + 1/(z-3)");
        let arc1 = PathSegment::arc(c(0.0, 0.0), 1.0, 0.0, 2.0);
        let arc2 = PathSegment::arc(c(0.0, 0.0), 1.0, 2.0, 5.0);
        let whole = PathSegment::arc(c(0.0, 0.0), 1.0, 0.0, 5.0);
        let tol = 1e-11;
        let a = integrate_path(&f, &[arc1], Measure::Dz, tol).unwrap().value;
        let b = integrate_path(&f, &[arc2], Measure::Dz, tol).unwrap().value;
        let w = integrate_path(&f, &[whole], Measure::Dz, tol)
            .unwrap()
            .value;
        assert!((a + b - w).norm() <= 2.0 * tol);
        let back = integrate_path(&f, &[whole.reversed()], Measure::Dzbar, tol)
            .unwrap()
            .value;
        let fwd = integrate_path(&f, &[whole], Measure::Dzbar, tol)
            .unwrap()
            .value;
        assert!((back + fwd).norm() <= 2.0 * tol);
        let cw = [PathSegment::circle(c(0.0, 0.0), 1.0, Orientation::Cw)];
        let r = integrate_path(&e("1/z"), &cw, Measure::Dz, tol)
            .unwrap()
            .value;
        assert!((r + c(0.0, TAU)).norm() < 1e-12);
    }
}
