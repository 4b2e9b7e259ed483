//! Classical and conjugate residues.
//!
//! For a point `z_N`,
//!
//! ```text
//! Res  f = lim  (1/2πi) ∮ f dz
//! Res* f = lim −(1/2πi) ∮ f dz̄
//! ```
//!
//! over circles `|z − z_N| = ε` with `ε → 0`. So `Res(1/z) = 1` and
//! `Res*(1/conj(z)) = 1`. Sector limits split the same circle into angular
//! sectors and average the weighted values `(z − C)·f` and `−conj(z − C)·f`
//! over each sector arc.

use std::f64::consts::TAU;

use crate::expr::{EvalError, Expr};
use crate::geometry::{Orientation, PathSegment, SectorDecomposition};
use crate::quad::gk::{self, Estimate};
use crate::quad::{
    integrate_path_fn, richardson, Limit, Measure, QuadError, RadiiSchedule, TableRow,
};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// Absolute quadrature tolerance for each circle integral.
const CIRCLE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResiduePair {
    pub res: Complex,
    pub res_star: Complex,
}

impl ResiduePair {
    pub fn new(res: Complex, res_star: Complex) -> ResiduePair {
        ResiduePair { res, res_star }
    }

    pub fn scale(self, k: Complex) -> ResiduePair {
        ResiduePair {
            res: self.res * k,
            res_star: self.res_star * k,
        }
    }

    pub fn add(self, other: ResiduePair) -> ResiduePair {
        ResiduePair {
            res: self.res + other.res,
            res_star: self.res_star + other.res_star,
        }
    }

    pub fn distance(&self, other: &ResiduePair) -> f64 {
        (self.res - other.res)
            .norm()
            .max((self.res_star - other.res_star).norm())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResidueError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("{component} limit does not converge along the radius schedule")]
    NonConvergent {
        component: &'static str,
        best: Complex,
    },
    #[error("sector {0} limit does not converge")]
    SectorNonConvergent(usize),
    #[error("residue at infinity routes disagree: {primary} vs {secondary} (gap {gap:e})")]
    InversionMismatch {
        primary: Complex,
        secondary: Complex,
        gap: f64,
    },
    #[error("invalid radius schedule: {0}")]
    Schedule(#[from] crate::quad::ScheduleError),
}

/// A residue pair with its extrapolation error and convergence tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueEstimate {
    pub pair: ResiduePair,
    pub error: f64,
    pub method: &'static str,
    pub table_res: Vec<TableRow>,
    pub table_res_star: Vec<TableRow>,
}

/// Default radii about `z_n`: `ε₀ = 0.1·min(1, distance to the nearest other
/// singular point)`, halving eight times.
pub fn default_schedule(z_n: Complex, others: &[Complex]) -> RadiiSchedule {
    let d = others
        .iter()
        .filter(|&&p| p != z_n)
        .map(|&p| (p - z_n).norm())
        .fold(1.0, f64::min);
    RadiiSchedule::halving(0.1 * d)
}

fn circle_integral(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    center: Complex,
    radius: f64,
    measure: Measure,
) -> Result<Estimate, QuadError> {
    let seg = [PathSegment::circle(center, radius, Orientation::Ccw)];
    let r = integrate_path_fn(g, &seg, measure, CIRCLE_TOL)?;
    Ok(Estimate {
        value: r.value,
        error: r.abs_error_estimate,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

fn finite_limit(
    component: &'static str,
    values: &[Complex],
    errors: &[f64],
    s: &RadiiSchedule,
) -> Result<(Complex, f64, Vec<TableRow>), ResidueError> {
    let ex = richardson(values, errors, s.ratio, &s.radii());
    match ex.limit {
        Limit::Finite { value, error } => Ok((value, error, ex.table)),
        Limit::Divergent { .. } | Limit::Unstable { .. } => Err(ResidueError::NonConvergent {
            component,
            best: *values.last().unwrap(),
        }),
    }
}

/// Residue pair of `f` at `z_n` from shrinking circles.
pub fn residue_small_circle(
    f: &Expr,
    z_n: Complex,
    schedule: &RadiiSchedule,
) -> Result<ResidueEstimate, ResidueError> {
    residue_small_circle_fn(&|z| f.eval(z), z_n, schedule)
}

pub fn residue_small_circle_fn(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    z_n: Complex,
    schedule: &RadiiSchedule,
) -> Result<ResidueEstimate, ResidueError> {
    schedule.validate()?;
    let mut res = Vec::new();
    let mut res_err = Vec::new();
    let mut star = Vec::new();
    let mut star_err = Vec::new();
    for eps in schedule.radii() {
        let a = circle_integral(g, z_n, eps, Measure::Dz)?;
        let b = circle_integral(g, z_n, eps, Measure::Dzbar)?;
        res.push(a.value / (TAU * I));
        res_err.push(a.error / TAU);
        star.push(-b.value / (TAU * I));
        star_err.push(b.error / TAU);
    }
    let (r, er, table_res) = finite_limit("Res", &res, &res_err, schedule)?;
    let (s, es, table_res_star) = finite_limit("Res*", &star, &star_err, schedule)?;
    Ok(ResidueEstimate {
        pair: ResiduePair::new(r, s),
        error: er.max(es),
        method: "small_circle",
        table_res,
        table_res_star,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitPoint {
    Zero,
    Infinity,
}

/// Limits of the weighted values in one sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorLimit {
    /// Sector mean of `(z − C)·f`.
    pub z_component: Complex,
    /// Sector mean of `−conj(z − C)·f`.
    pub zbar_component: Complex,
    pub error: f64,
    /// The same limits sampled along the bisector ray only, when they exist.
    pub bisector: Option<(Complex, Complex)>,
    /// True when the bisector limit exists and matches the sector mean for the
    /// z component, i.e. `(z − C)·f` tends to a constant inside the sector.
    pub uniform_z: bool,
    /// The same for the z̄ component.
    pub uniform_zbar: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorLimits {
    pub decomposition: SectorDecomposition,
    pub limits: Vec<SectorLimit>,
    pub at: LimitPoint,
}

// Radius of the sampling circle for schedule parameter `eps`.
fn radius_for(at: LimitPoint, eps: f64) -> f64 {
    match at {
        LimitPoint::Zero => eps,
        LimitPoint::Infinity => 1.0 / eps,
    }
}

fn weighted(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    center: Complex,
    r: f64,
    theta: f64,
) -> Result<(Complex, Complex), EvalError> {
    let w = Complex::from_polar(r, theta);
    let v = g(center + w)?;
    Ok((w * v, -w.conj() * v))
}

/// Per-sector limits at `d.center()` (or at infinity, with radii `1/ε_m`).
pub fn sector_limits(
    f: &Expr,
    d: &SectorDecomposition,
    at: LimitPoint,
    radii: &RadiiSchedule,
) -> Result<SectorLimits, ResidueError> {
    sector_limits_fn(&|z| f.eval(z), d, at, radii)
}

pub fn sector_limits_fn(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    d: &SectorDecomposition,
    at: LimitPoint,
    radii: &RadiiSchedule,
) -> Result<SectorLimits, ResidueError> {
    radii.validate()?;
    let center = d.center();
    let mut limits = Vec::with_capacity(d.len());
    for k in 0..d.len() {
        let (lo, hi) = d.bounds(k);
        let width = hi - lo;
        let mut zc = Vec::new();
        let mut zb = Vec::new();
        let mut errs = Vec::new();
        let mut bis_z = Vec::new();
        let mut bis_b = Vec::new();
        for eps in radii.radii() {
            let r = radius_for(at, eps);
            let on_path = |e: EvalError| QuadError::SingularityOnPath(e.point());
            let mean_z = gk::integrate(
                |t| weighted(g, center, r, t).map(|v| v.0).map_err(on_path),
                lo,
                hi,
                CIRCLE_TOL,
            )?;
            let mean_b = gk::integrate(
                |t| weighted(g, center, r, t).map(|v| v.1).map_err(on_path),
                lo,
                hi,
                CIRCLE_TOL,
            )?;
            zc.push(mean_z.value / width);
            zb.push(mean_b.value / width);
            errs.push((mean_z.error + mean_b.error) / width);
            let (bz, bb) = weighted(g, center, r, d.bisector(k)).map_err(on_path)?;
            bis_z.push(bz);
            bis_b.push(bb);
        }
        let params = radii.radii();
        let ez = richardson(&zc, &errs, radii.ratio, &params);
        let eb = richardson(&zb, &errs, radii.ratio, &params);
        let (
            Limit::Finite {
                value: z_component,
                error: e1,
            },
            Limit::Finite {
                value: zbar_component,
                error: e2,
            },
        ) = (ez.limit, eb.limit)
        else {
            return Err(ResidueError::SectorNonConvergent(k));
        };
        let zeros = vec![0.0; bis_z.len()];
        let bz = richardson(&bis_z, &zeros, radii.ratio, &params)
            .limit
            .finite();
        let bb = richardson(&bis_b, &zeros, radii.ratio, &params)
            .limit
            .finite();
        let bisector = bz.zip(bb);
        let tol = 1e-6 * (1.0 + z_component.norm() + zbar_component.norm());
        let uniform_z = bz.is_some_and(|a| (a - z_component).norm() <= tol);
        let uniform_zbar = bb.is_some_and(|b| (b - zbar_component).norm() <= tol);
        limits.push(SectorLimit {
            z_component,
            zbar_component,
            error: e1.max(e2),
            bisector,
            uniform_z,
            uniform_zbar,
        });
    }
    Ok(SectorLimits {
        decomposition: d.clone(),
        limits,
        at,
    })
}

/// Assembles a residue pair from sector limits: `Res = (1/2π) Σ α_k a_k`,
/// `Res* = −(1/2π) Σ α_k b_k` with `a_k`, `b_k` the z and z̄ components.
/// Both signs flip for limits at infinity.
pub fn residue_from_sectors(limits: &SectorLimits) -> ResiduePair {
    let mut res = Complex::new(0.0, 0.0);
    let mut star = Complex::new(0.0, 0.0);
    for (k, l) in limits.limits.iter().enumerate() {
        let alpha = limits.decomposition.width(k);
        res += alpha * l.z_component;
        star -= alpha * l.zbar_component;
    }
    let sign = match limits.at {
        LimitPoint::Zero => 1.0,
        LimitPoint::Infinity => -1.0,
    };
    ResiduePair::new(sign * res / TAU, sign * star / TAU)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueAtInfinity {
    /// Minus the sum of the finite residues.
    pub primary: ResiduePair,
    pub primary_error: f64,
    /// From circles of radius `1/ε_m` about the origin, equivalently small
    /// circles after the inversion `z = 1/w`. `None` when that limit cannot be
    /// computed (for example because `f` overflows on large circles).
    pub secondary: Option<ResidueEstimate>,
    pub discrepancy: Option<f64>,
}

/// Default inverted-radius schedule: the first circle has radius
/// `2·(1 + max |s|)` so it encloses every listed singular point.
pub fn default_infinity_schedule(finite_singularities: &[Complex]) -> RadiiSchedule {
    let m = finite_singularities
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max);
    RadiiSchedule::halving(0.5 / (1.0 + m))
}

/// Residue pair at infinity, computed both as `−Σ` of the finite residues and
/// by inversion; disagreement beyond the combined error signals a missed
/// finite singularity.
pub fn residue_at_infinity(
    f: &Expr,
    finite_singularities: &[Complex],
    inversion_schedule: &RadiiSchedule,
) -> Result<ResidueAtInfinity, ResidueError> {
    let g = |z: Complex| f.eval(z);
    let mut primary = ResiduePair::default();
    let mut primary_error = 0.0;
    for &p in finite_singularities {
        let est = residue_small_circle_fn(&g, p, &default_schedule(p, finite_singularities))?;
        primary = primary.add(est.pair);
        primary_error += est.error;
    }
    primary = primary.scale(Complex::new(-1.0, 0.0));

    // Large circle |z| = 1/ε, i.e. the small circle |w| = ε of f(1/w)·w⁻².
    let secondary = (|| {
        let s = inversion_schedule;
        s.validate()?;
        let mut res = Vec::new();
        let mut star = Vec::new();
        let mut errs = Vec::new();
        for eps in s.radii() {
            let a = circle_integral(&g, Complex::new(0.0, 0.0), 1.0 / eps, Measure::Dz)?;
            let b = circle_integral(&g, Complex::new(0.0, 0.0), 1.0 / eps, Measure::Dzbar)?;
            res.push(-a.value / (TAU * I));
            star.push(b.value / (TAU * I));
            errs.push(a.error.max(b.error) / TAU);
        }
        let (r, er, table_res) = finite_limit("Res", &res, &errs, s)?;
        let (st, es, table_res_star) = finite_limit("Res*", &star, &errs, s)?;
        Ok::<_, ResidueError>(ResidueEstimate {
            pair: ResiduePair::new(r, st),
            error: er.max(es),
            method: "inversion",
            table_res,
            table_res_star,
        })
    })()
    .ok();

    let discrepancy = secondary.as_ref().map(|s| s.pair.distance(&primary));
    if let (Some(sec), Some(gap)) = (&secondary, discrepancy) {
        let allowed = 10.0 * (primary_error + sec.error)
            + 1e-9 * (1.0 + primary.res.norm() + primary.res_star.norm());
        if gap > allowed.max(1e-9) {
            let (p, q) = if (sec.pair.res - primary.res).norm()
                >= (sec.pair.res_star - primary.res_star).norm()
            {
                (primary.res, sec.pair.res)
            } else {
                (primary.res_star, sec.pair.res_star)
            };
            return Err(ResidueError::InversionMismatch {
                primary: p,
                secondary: q,
                gap,
            });
        }
    }
    Ok(ResidueAtInfinity {
        primary,
        primary_error,
        secondary,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn origin() -> Complex {
        c(0.0, 0.0)
    }

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn simple_pole() {
        let r = residue_small_circle(&e("1/z"), origin(), &RadiiSchedule::halving(0.1)).unwrap();
        assert!(close(r.pair.res, c(1.0, 0.0), 1e-12));
        assert!(close(r.pair.res_star, origin(), 1e-12));
    }

    #[test]
    fn conjugate_pole() {
        let r =
            residue_small_circle(&e("1/conj(z)"), origin(), &RadiiSchedule::halving(0.1)).unwrap();
        assert!(close(r.pair.res, origin(), 1e-12));
        assert!(close(r.pair.res_star, c(1.0, 0.0), 1e-12));
    }

    #[test]
    fn double_pole_has_no_residue() {
        let r = residue_small_circle(&e("1/z^2"), origin(), &RadiiSchedule::halving(0.1)).unwrap();
        assert!(r.pair.res.norm() < 1e-10 && r.pair.res_star.norm() < 1e-10);
    }

    #[test]
    fn area_terms_vanish_in_the_limit() {
        // ∮ z·conj(z)/z dz = ∮ conj(z) dz = 2πi ε², which extrapolates away.
        let r =
            residue_small_circle(&e("conj(z)"), c(0.3, 0.1), &RadiiSchedule::halving(0.1)).unwrap();
        assert!(r.pair.res.norm() < 1e-12, "{r:?}");
    }

    #[test]
    fn whole_plane_sector() {
        let s = RadiiSchedule::halving(0.1);
        let l = sector_limits(
            &e("1/z"),
            &SectorDecomposition::whole(origin()),
            LimitPoint::Zero,
            &s,
        )
        .unwrap();
        assert!(close(l.limits[0].z_component, c(1.0, 0.0), 1e-12));
        assert!(l.limits[0].uniform_z);
        // −conj(z)/z = −e^{−2iθ} averages to zero but is not constant.
        assert!(!l.limits[0].uniform_zbar);
        assert!(close(residue_from_sectors(&l).res, c(1.0, 0.0), 1e-12));
    }

    #[test]
    fn log_sector_limit_vanishes() {
        let s = RadiiSchedule::new(0.1, 0.25, 12).unwrap();
        let l = sector_limits(
            &e("log(z)"),
            &SectorDecomposition::whole(origin()),
            LimitPoint::Zero,
            &s,
        )
        .unwrap();
        assert!(l.limits[0].z_component.norm() < 1e-6, "{:?}", l.limits[0]);
        assert!(l.limits[0].zbar_component.norm() < 1e-6);
    }

    #[test]
    fn two_half_planes() {
        let d = SectorDecomposition::new(origin(), vec![0.0, PI]).unwrap();
        let l = sector_limits(
            &e("1/z"),
            &d,
            LimitPoint::Zero,
            &RadiiSchedule::halving(0.1),
        )
        .unwrap();
        for lim in &l.limits {
            assert!(close(lim.z_component, c(1.0, 0.0), 1e-12));
        }
        assert!(close(residue_from_sectors(&l).res, c(1.0, 0.0), 1e-12));
    }

    #[test]
    fn assembly_from_given_limits() {
        let d = SectorDecomposition::whole(origin());
        let one = SectorLimit {
            z_component: c(1.0, 0.0),
            zbar_component: origin(),
            error: 0.0,
            bisector: None,
            uniform_z: false,
            uniform_zbar: false,
        };
        let l = SectorLimits {
            decomposition: d.clone(),
            limits: vec![one],
            at: LimitPoint::Zero,
        };
        assert_eq!(residue_from_sectors(&l).res, c(1.0, 0.0));
        let zero = SectorLimit {
            z_component: origin(),
            ..one
        };
        let l = SectorLimits {
            decomposition: d,
            limits: vec![zero],
            at: LimitPoint::Zero,
        };
        assert_eq!(residue_from_sectors(&l), ResiduePair::default());
    }

    #[test]
    fn residue_at_infinity_routes() {
        let sched = default_infinity_schedule(&[origin()]);
        let r = residue_at_infinity(&e("1/z"), &[origin()], &sched).unwrap();
        assert!(close(r.primary.res, c(-1.0, 0.0), 1e-12));
        assert!(r.discrepancy.unwrap() < 1e-10);
        let poles = [c(0.0, 1.0), c(0.0, -1.0)];
        let r = residue_at_infinity(&e("1/(z^2+1)"), &poles, &default_infinity_schedule(&poles))
            .unwrap();
        assert!(r.primary.res.norm() < 1e-10);
        let r = residue_at_infinity(&e("z"), &[], &default_infinity_schedule(&[])).unwrap();
        assert!(r.primary.res.norm() == 0.0);
    }

    #[test]
    fn missed_singularity_is_detected() {
        let r = residue_at_infinity(
            &e("1/z + 1/(z-0.5)"),
            &[origin()],
            &default_infinity_schedule(&[c(0.5, 0.0)]),
        );
        assert!(
            matches!(r, Err(ResidueError::InversionMismatch { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn conjugate_residue_at_infinity() {
        let sched = default_infinity_schedule(&[origin()]);
        let r = residue_at_infinity(&e("1/conj(z)"), &[origin()], &sched).unwrap();
        assert!(close(r.primary.res_star, c(-1.0, 0.0), 1e-12));
        assert!(close(
            r.secondary.unwrap().pair.res_star,
            c(-1.0, 0.0),
            1e-10
        ));
        let l = sector_limits(
            &e("1/conj(z)"),
            &SectorDecomposition::whole(origin()),
            LimitPoint::Infinity,
            &sched,
        )
        .unwrap();
        assert!(close(
            residue_from_sectors(&l).res_star,
            c(-1.0, 0.0),
            1e-10
        ));
    }
}
