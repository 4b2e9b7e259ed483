//! Area integrals over discs, annuli, annular sectors and rectangles.
//!
//! Curved domains are integrated in polar coordinates about their center,
//! rectangles in Cartesian coordinates. Excised discs cut the inner interval
//! exactly; the outer variable is split where it becomes tangent to a disc and
//! each piece is mapped through a smoothstep so the square-root behaviour of
//! the chord length at tangency does not slow convergence.

use std::f64::consts::TAU;

use super::gk::{self, Estimate};
use super::{ExcisedIntegral, ExcisionSpec, QuadError, QuadResult};
use crate::expr::{EvalError, Expr};
use crate::geometry::PlanarDomain;
use crate::Complex;

/// `dz̄ dz = AREA_FORM · dx dy`.
pub const AREA_FORM: Complex = Complex::new(0.0, 2.0);

type Hole = (Complex, f64);

fn smoothstep(s: f64) -> (f64, f64) {
    (s * s * (3.0 - 2.0 * s), 6.0 * s * (1.0 - s))
}

// Integrates `h` over `[a, b]` through the smoothstep substitution.
fn integrate_smooth(
    h: &mut impl FnMut(f64) -> Result<Complex, QuadError>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Estimate, QuadError> {
    let w = b - a;
    gk::integrate(
        |s| {
            let (u, du) = smoothstep(s);
            if du == 0.0 {
                return Ok(Complex::new(0.0, 0.0));
            }
            Ok(h(a + w * u)? * (w * du))
        },
        0.0,
        1.0,
        tol,
    )
}

fn subtract_intervals(lo: f64, hi: f64, mut cuts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::new();
    let mut cur = lo;
    for (a, b) in cuts {
        if b <= cur {
            continue;
        }
        if a > cur {
            out.push((cur, a.min(hi)));
        }
        cur = cur.max(b);
        if cur >= hi {
            break;
        }
    }
    if cur < hi {
        out.push((cur, hi));
    }
    out.retain(|(a, b)| b > a);
    out
}

fn breakpoints(lo: f64, hi: f64, mut pts: Vec<f64>) -> Vec<f64> {
    pts.retain(|&t| t > lo && t < hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
    pts
}

fn in_domain(e: EvalError) -> QuadError {
    QuadError::SingularityInDomain(e.point())
}

/// `∬ g dx dy` over `dom` minus the discs in `holes`.
fn region_dxdy(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    dom: &PlanarDomain,
    holes: &[Hole],
    tol: f64,
) -> Result<Estimate, QuadError> {
    match *dom {
        PlanarDomain::Rectangle {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        } => {
            let width = x_hi - x_lo;
            let inner_tol = 0.1 * tol / width;
            let mut inner_err = 0.0f64;
            let mut evals = 0;
            let mut h = |x: f64| -> Result<Complex, QuadError> {
                let cuts = holes
                    .iter()
                    .filter_map(|&(p, r)| {
                        let d = r * r - (x - p.re) * (x - p.re);
                        (d > 0.0).then(|| (p.im - d.sqrt(), p.im + d.sqrt()))
                    })
                    .collect();
                let mut acc = Estimate::zero();
                for (a, b) in subtract_intervals(y_lo, y_hi, cuts) {
                    acc = acc.add(gk::integrate(
                        |y| g(Complex::new(x, y)).map_err(in_domain),
                        a,
                        b,
                        inner_tol,
                    )?);
                }
                inner_err = inner_err.max(acc.error);
                evals += acc.evaluations;
                Ok(acc.value)
            };
            let brk = breakpoints(
                x_lo,
                x_hi,
                holes
                    .iter()
                    .flat_map(|&(p, r)| [p.re - r, p.re + r])
                    .collect(),
            );
            let mut total = Estimate::zero();
            for w in brk.windows(2) {
                total = total.add(integrate_smooth(
                    &mut h,
                    w[0],
                    w[1],
                    tol * (w[1] - w[0]) / width,
                )?);
            }
            total.error += inner_err * width;
            total.evaluations += evals;
            Ok(total)
        }
        _ => {
            let (center, r_in, r_out, lo, hi) = match *dom {
                PlanarDomain::Disc { center, radius } => (center, 0.0, radius, 0.0, TAU),
                PlanarDomain::Annulus {
                    center,
                    inner,
                    outer,
                } => (center, inner, outer, 0.0, TAU),
                PlanarDomain::AnnularSector {
                    center,
                    inner,
                    outer,
                    phi_lo,
                    phi_hi,
                } => (center, inner, outer, phi_lo, phi_hi),
                PlanarDomain::Rectangle { .. } => unreachable!(),
            };
            polar_dxdy(g, center, r_in, r_out, lo, hi, holes, tol)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn polar_dxdy(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    center: Complex,
    r_in: f64,
    r_out: f64,
    lo: f64,
    hi: f64,
    holes: &[Hole],
    tol: f64,
) -> Result<Estimate, QuadError> {
    let span = hi - lo;
    let inner_tol = 0.1 * tol / span;
    let mut inner_err = 0.0f64;
    let mut evals = 0;
    let mut h = |theta: f64| -> Result<Complex, QuadError> {
        let u = Complex::from_polar(1.0, theta);
        let cuts = holes
            .iter()
            .filter_map(|&(p, r)| {
                let w = p - center;
                let b = (u.conj() * w).re;
                let disc = b * b - w.norm_sqr() + r * r;
                (disc > 0.0).then(|| (b - disc.sqrt(), b + disc.sqrt()))
            })
            .collect();
        let mut acc = Estimate::zero();
        for (a, b) in subtract_intervals(r_in, r_out, cuts) {
            acc = acc.add(gk::integrate(
                |rho| g(center + u * rho).map(|v| v * rho).map_err(in_domain),
                a,
                b,
                inner_tol,
            )?);
        }
        inner_err = inner_err.max(acc.error);
        evals += acc.evaluations;
        Ok(acc.value)
    };
    let mut tangents = Vec::new();
    for &(p, r) in holes {
        let w = p - center;
        let d = w.norm();
        if d > r {
            let base = w.im.atan2(w.re);
            let half = (r / d).asin();
            for t in [base - half, base + half, base] {
                // Bring each angle into [lo, lo + 2π).
                tangents.push(lo + (t - lo).rem_euclid(TAU));
            }
        }
    }
    let brk = breakpoints(lo, hi, tangents);
    let mut total = Estimate::zero();
    for w in brk.windows(2) {
        total = total.add(integrate_smooth(
            &mut h,
            w[0],
            w[1],
            tol * (w[1] - w[0]) / span,
        )?);
    }
    total.error += inner_err * span;
    total.evaluations += evals;
    Ok(total)
}

/// `∬ g dx dy` over the annulus `inner < |z − p| < outer`.
pub fn shell_dxdy(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    p: Complex,
    inner: f64,
    outer: f64,
    tol: f64,
) -> Result<Estimate, QuadError> {
    polar_dxdy(g, p, inner, outer, 0.0, TAU, &[], tol)
}

/// `∬ g dx dy` over a domain (no excision).
pub fn area_dxdy(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    dom: &PlanarDomain,
    tol: f64,
) -> Result<Estimate, QuadError> {
    dom.validate()?;
    region_dxdy(g, dom, &[], tol)
}

/// `∬ g dx dy` over `dom` with the discs `|z − p| < r` of `holes` removed.
/// Holes must lie inside the domain and not overlap.
pub fn holed_area_dxdy(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    dom: &PlanarDomain,
    holes: &[(Complex, f64)],
    tol: f64,
) -> Result<Estimate, QuadError> {
    dom.validate()?;
    region_dxdy(g, dom, holes, tol)
}

/// Closure form of [`integrate_area`].
pub fn integrate_area_fn(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    dom: &PlanarDomain,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    let e = area_dxdy(g, dom, 0.5 * tol)?;
    Ok(e.scale(AREA_FORM).into())
}

/// `∬ g dz̄ dz = 2i ∬ g dx dy`.
pub fn integrate_area(g: &Expr, dom: &PlanarDomain, tol: f64) -> Result<QuadResult, QuadError> {
    if g.is_zero() {
        dom.validate()?;
        return Ok(QuadResult {
            value: Complex::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            evaluations: 1,
            converged: true,
        });
    }
    integrate_area_fn(&|z| g.eval(z), dom, tol)
}

fn validate_excision(dom: &PlanarDomain, exc: &ExcisionSpec) -> Result<(), QuadError> {
    dom.validate()?;
    exc.schedule.validate()?;
    let eps0 = exc.schedule.eps0;
    for (i, &p) in exc.points.iter().enumerate() {
        if !dom.contains_strictly(p, eps0) {
            return Err(QuadError::InvalidExcision(format!(
                "disc of radius {eps0} about {p} is not inside the domain"
            )));
        }
        for &q in &exc.points[..i] {
            if (p - q).norm() <= 2.0 * eps0 {
                return Err(QuadError::InvalidExcision(format!(
                    "excisions about {q} and {p} overlap"
                )));
            }
        }
    }
    Ok(())
}

/// Principal value of `∬ g dz̄ dz`: the limit of the integral over `dom`
/// with discs of radius `ε_m` removed about each excision point.
///
/// The sequence is built incrementally: the integral outside the `ε₀` discs
/// plus, for each later radius, the thin annuli between successive radii,
/// integrated in polar coordinates about the excised point.
pub fn vp_integrate_area(
    g: &Expr,
    dom: &PlanarDomain,
    exc: &ExcisionSpec,
    tol: f64,
) -> Result<ExcisedIntegral, QuadError> {
    validate_excision(dom, exc)?;
    let s = &exc.schedule;
    if g.is_zero() {
        let zeros = vec![Complex::new(0.0, 0.0); s.steps + 1];
        return Ok(ExcisedIntegral::from_sequence(
            &zeros,
            &vec![0.0; s.steps + 1],
            s,
            1,
        ));
    }
    let f = |z: Complex| g.eval(z);
    let holes: Vec<Hole> = exc.points.iter().map(|&p| (p, s.eps0)).collect();
    let dxdy_tol = 0.25 * tol;
    let base = region_dxdy(&f, dom, &holes, dxdy_tol)?;
    let mut current = base;
    let mut values = vec![base.value * AREA_FORM];
    let mut errors = vec![2.0 * base.error];
    let shell_tol = dxdy_tol / (s.steps.max(1) * exc.points.len().max(1)) as f64;
    for m in 0..s.steps {
        for &p in &exc.points {
            current = current.add(shell_dxdy(&f, p, s.radius(m + 1), s.radius(m), shell_tol)?);
        }
        values.push(current.value * AREA_FORM);
        errors.push(2.0 * current.error);
    }
    Ok(ExcisedIntegral::from_sequence(
        &values,
        &errors,
        s,
        current.evaluations,
    ))
}
