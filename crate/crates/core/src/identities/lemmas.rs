//! Sector lemmas: arcs of small and large circles, and the total value along
//! the rays bounding a sector.

use std::f64::consts::{PI, TAU};

use super::{
    finite_limit, quad_tol, residue_pair, Builder, IdentityError, Side, VerificationReport,
};
use crate::expr::Expr;
use crate::geometry::{PathSegment, PlanarDomain, SectorDecomposition};
use crate::quad::{
    holed_area_dxdy, integrate_path, integrate_segment_fn, richardson, Limit, Measure,
    RadiiSchedule, AREA_FORM,
};
use crate::residue::{residue_small_circle, sector_limits, LimitPoint};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// Rays sampled per sector when testing the limit condition.
const RAYS: usize = 5;

// Checks that (z − C)·f and −conj(z − C)·f have limits along rays spread over
// the closed sector `k`. Returns the reason when they do not.
fn ray_condition(
    f: &Expr,
    d: &SectorDecomposition,
    k: usize,
    at: LimitPoint,
    radii: &RadiiSchedule,
    must_vanish: bool,
) -> Option<String> {
    let (lo, hi) = d.bounds(k);
    let center = d.center();
    let params = radii.radii();
    for j in 0..RAYS {
        let theta = lo + (hi - lo) * j as f64 / (RAYS - 1) as f64;
        let mut wz = Vec::with_capacity(params.len());
        let mut wb = Vec::with_capacity(params.len());
        for &eps in &params {
            let r = match at {
                LimitPoint::Zero => eps,
                LimitPoint::Infinity => 1.0 / eps,
            };
            let w = Complex::from_polar(r, theta);
            let Ok(v) = f.eval(center + w) else {
                return Some(format!("f is undefined on the ray at angle {theta}"));
            };
            wz.push(w * v);
            wb.push(-w.conj() * v);
        }
        let zeros = vec![0.0; params.len()];
        for seq in [&wz, &wb] {
            match richardson(seq, &zeros, radii.ratio, &params).limit {
                Limit::Finite { value, .. } => {
                    if must_vanish && value.norm() > 1e-6 {
                        return Some(format!(
                            "limit along the ray at angle {theta} is {value}, not zero"
                        ));
                    }
                }
                _ => return Some(format!("no limit along the ray at angle {theta}")),
            }
        }
    }
    None
}

fn arc_sequence(
    f: &Expr,
    d: &SectorDecomposition,
    sectors: &[usize],
    radius: impl Fn(f64) -> f64,
    radii: &RadiiSchedule,
    tol: f64,
) -> Result<(Vec<Complex>, Vec<Complex>, Vec<f64>), IdentityError> {
    let mut dz = Vec::new();
    let mut dzbar = Vec::new();
    let mut errs = Vec::new();
    for eps in radii.radii() {
        let r = radius(eps);
        let segs: Vec<PathSegment> = sectors
            .iter()
            .map(|&k| {
                let (lo, hi) = d.bounds(k);
                PathSegment::arc(d.center(), r, lo, hi)
            })
            .collect();
        let a = integrate_path(f, &segs, Measure::Dz, tol)?;
        let b = integrate_path(f, &segs, Measure::Dzbar, tol)?;
        dz.push(a.value);
        dzbar.push(-b.value);
        errs.push(a.abs_error_estimate.max(b.abs_error_estimate));
    }
    Ok((dz, dzbar, errs))
}

// Sector 1 is removed from the circle unless the decomposition has one sector.
fn kept_sectors(d: &SectorDecomposition) -> (Vec<usize>, Vec<usize>) {
    if d.len() == 1 {
        (vec![0], vec![])
    } else {
        ((1..d.len()).collect(), vec![0])
    }
}

/// `∫_{arc of radius δ over sector 2} f dz → 2πi·Res − α₁·i·A₀₁` as `δ → 0`,
/// with the z̄-form `−∫ f dz̄ → 2πi·Res* + α₁·i·B₀₁`. `A` and `B` are the sector
/// limits of `(z − C)·f` and `−conj(z − C)·f`. With a single sector this is the
/// definition of the small-circle residue.
pub fn check_lemma_small_circle(
    f: &Expr,
    d: &SectorDecomposition,
    deltas: &RadiiSchedule,
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    let name = "lemma_small_circle";
    deltas.validate()?;
    let (kept, removed) = kept_sectors(d);
    for &k in &removed {
        if let Some(reason) = ray_condition(f, d, k, LimitPoint::Zero, deltas, false) {
            return Ok(VerificationReport::not_applicable(name, reason, tol));
        }
    }
    let limits = match sector_limits(f, d, LimitPoint::Zero, deltas) {
        Ok(l) => l,
        Err(e) => return Ok(VerificationReport::not_applicable(name, e.to_string(), tol)),
    };
    let qt = quad_tol(tol);
    let (dz, dzbar, errs) = arc_sequence(f, d, &kept, |e| e, deltas, qt)?;
    let params = deltas.radii();
    let lhs = finite_limit(
        richardson(&dz, &errs, deltas.ratio, &params).limit,
        "arc integral",
    )?;
    let lhs_conj = finite_limit(
        richardson(&dzbar, &errs, deltas.ratio, &params).limit,
        "arc integral",
    )?;
    let res = residue_small_circle(f, d.center(), deltas)?.pair;

    let mut b = Builder::new(name);
    b.term(Side::Lhs, "arc_dz", lhs)
        .term(Side::Rhs, "two_pi_i_res", TAU * I * res.res)
        .term(Side::ConjLhs, "minus_arc_dzbar", lhs_conj)
        .term(Side::ConjRhs, "two_pi_i_res_star", TAU * I * res.res_star);
    for &k in &removed {
        let alpha = d.width(k);
        let l = &limits.limits[k];
        b.term(Side::Info, format!("A0_{}", k + 1), l.z_component);
        b.term(Side::Info, format!("B0_{}", k + 1), l.zbar_component);
        b.term(
            Side::Rhs,
            format!("minus_alpha_i_A0_{}", k + 1),
            -alpha * I * l.z_component,
        );
        b.term(
            Side::ConjRhs,
            format!("plus_alpha_i_B0_{}", k + 1),
            alpha * I * l.zbar_component,
        );
    }
    Ok(b.finish(tol))
}

/// `∫_{arc of radius R over sector 2} f dz → 2πi·Σ Res − α₁·i·A_∞1` as
/// `R = 1/ε → ∞`, and the z̄-form, for circles enclosing every point of `sing`.
pub fn check_lemma_large_circle(
    f: &Expr,
    d: &SectorDecomposition,
    sing: &[Complex],
    r_schedule: &RadiiSchedule,
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    let name = "lemma_large_circle";
    r_schedule.validate()?;
    let reach = sing
        .iter()
        .map(|&s| (s - d.center()).norm())
        .fold(0.0, f64::max);
    if 1.0 / r_schedule.eps0 <= 2.0 * reach {
        return Err(IdentityError::Invalid(
            "the first circle must enclose every singular point with margin".into(),
        ));
    }
    let (kept, removed) = kept_sectors(d);
    for &k in &removed {
        if let Some(reason) = ray_condition(f, d, k, LimitPoint::Infinity, r_schedule, false) {
            return Ok(VerificationReport::not_applicable(name, reason, tol));
        }
    }
    let limits = match sector_limits(f, d, LimitPoint::Infinity, r_schedule) {
        Ok(l) => l,
        Err(e) => return Ok(VerificationReport::not_applicable(name, e.to_string(), tol)),
    };
    let qt = quad_tol(tol);
    let (dz, dzbar, errs) = arc_sequence(f, d, &kept, |e| 1.0 / e, r_schedule, qt)?;
    let params = r_schedule.radii();
    let lhs = finite_limit(
        richardson(&dz, &errs, r_schedule.ratio, &params).limit,
        "arc integral",
    )?;
    let lhs_conj = finite_limit(
        richardson(&dzbar, &errs, r_schedule.ratio, &params).limit,
        "arc integral",
    )?;

    let mut b = Builder::new(name);
    b.term(Side::Lhs, "arc_dz", lhs)
        .term(Side::ConjLhs, "minus_arc_dzbar", lhs_conj);
    for &s in sing {
        let r = residue_pair(f, s, sing)?;
        b.term(
            Side::Rhs,
            format!("two_pi_i_res@{}{:+}i", s.re, s.im),
            TAU * I * r.res,
        );
        b.term(
            Side::ConjRhs,
            format!("two_pi_i_res_star@{}{:+}i", s.re, s.im),
            TAU * I * r.res_star,
        );
    }
    for &k in &removed {
        let alpha = d.width(k);
        let l = &limits.limits[k];
        b.term(Side::Info, format!("Ainf_{}", k + 1), l.z_component);
        b.term(Side::Info, format!("Binf_{}", k + 1), l.zbar_component);
        b.term(
            Side::Rhs,
            format!("minus_alpha_i_Ainf_{}", k + 1),
            -alpha * I * l.z_component,
        );
        b.term(
            Side::ConjRhs,
            format!("plus_alpha_i_Binf_{}", k + 1),
            alpha * I * l.zbar_component,
        );
    }
    Ok(b.finish(tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Placement {
    Vertex,
    OnRay { ray: usize, t: f64 },
    Inside,
    Outside,
}

fn place(s: Complex, center: Complex, lo: f64, hi: f64, tol: f64) -> Placement {
    let w = s - center;
    let r = w.norm();
    if r <= tol {
        return Placement::Vertex;
    }
    for (ray, phi) in [lo, hi].into_iter().enumerate() {
        let u = Complex::from_polar(1.0, phi);
        let along = (w * u.conj()).re;
        if along > 0.0 && (w - along * u).norm() <= tol {
            return Placement::OnRay { ray, t: along };
        }
    }
    let rel = (w.im.atan2(w.re) - lo).rem_euclid(TAU);
    if rel < hi - lo {
        Placement::Inside
    } else {
        Placement::Outside
    }
}

/// Total value along the two rays bounding sector 2 (the last sector) minus
/// the principal value of the area term over the wedge, against `Σ p·Res` over
/// the singular points in the closed wedge. Points inside weigh `2πi`, points
/// on a ray `iπ`, a singular vertex `iα₂`.
///
/// The wedge is truncated at `R_m = 1/ε_m` and singular points are excised
/// with radius `δ_m`; both are advanced together and the sequence is
/// extrapolated in `m`. The closing arc is dropped, which needs the limit of
/// `(z − C)·f` at infinity to vanish in sector 2.
pub fn check_lemma_vt_sector(
    f: &Expr,
    d: &SectorDecomposition,
    sing: &[Complex],
    r_schedule: &RadiiSchedule,
    deltas: &RadiiSchedule,
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    let name = "lemma_vt_sector";
    r_schedule.validate()?;
    deltas.validate()?;
    if r_schedule.steps != deltas.steps || (r_schedule.ratio - deltas.ratio).abs() > 1e-15 {
        return Err(IdentityError::Invalid(
            "R and δ schedules must share ratio and length".into(),
        ));
    }
    if d.len() < 2 {
        return Err(IdentityError::Invalid(
            "the sector lemma needs at least two sectors".into(),
        ));
    }
    let k2 = d.len() - 1;
    if let Some(reason) = ray_condition(f, d, k2, LimitPoint::Infinity, r_schedule, true) {
        return Ok(VerificationReport::not_applicable(name, reason, tol));
    }
    let center = d.center();
    let (lo, hi) = d.bounds(k2);
    let alpha = hi - lo;
    let geo_tol = 1e-9 * (1.0 + center.norm());
    let placed: Vec<(Complex, Placement)> = sing
        .iter()
        .map(|&s| (s, place(s, center, lo, hi, geo_tol)))
        .collect();
    let reach = sing
        .iter()
        .map(|&s| (s - center).norm())
        .fold(0.0, f64::max);
    if 1.0 / r_schedule.eps0 <= 2.0 * reach {
        return Err(IdentityError::Invalid(
            "the first truncation radius must exceed twice every |s − C|".into(),
        ));
    }
    for (i, &(s, _)) in placed.iter().enumerate() {
        for &(q, _) in &placed[..i] {
            if (s - q).norm() <= 2.0 * deltas.eps0 {
                return Err(IdentityError::Invalid("excision discs overlap".into()));
            }
        }
    }
    let vertex_singular = placed.iter().any(|(_, p)| *p == Placement::Vertex);
    for &(s, p) in &placed {
        if p == Placement::Inside {
            let dist = ray_distance(s - center, lo).min(ray_distance(s - center, hi));
            if dist <= deltas.eps0 {
                return Err(IdentityError::Invalid(
                    "excision disc crosses a bounding ray".into(),
                ));
            }
        }
    }

    let qt = quad_tol(tol);
    let g = |z: Complex| f.eval(z);
    let dzbar_f = f.wirtinger_dzbar();
    let dz_f = f.wirtinger_dz();
    let r_radii: Vec<f64> = r_schedule.radii().iter().map(|e| 1.0 / e).collect();
    let d_radii = deltas.radii();
    let areas = wedge_area_sequence(
        &dzbar_f,
        &dz_f,
        center,
        (lo, hi),
        vertex_singular,
        &r_radii,
        &d_radii,
        &placed,
        qt,
    )?;
    let mut seq = Vec::new();
    let mut seq_conj = Vec::new();
    let mut errs = Vec::new();
    for (m, (eps, delta)) in r_schedule
        .radii()
        .into_iter()
        .zip(deltas.radii())
        .enumerate()
    {
        let r_max = 1.0 / eps;
        let r_min = if vertex_singular { delta } else { 0.0 };
        let mut rays = [Complex::new(0.0, 0.0); 2];
        let mut err = 0.0;
        for (ray, phi) in [lo, hi].into_iter().enumerate() {
            let u = Complex::from_polar(1.0, phi);
            // Radial windows excised around on-ray points.
            let mut cuts: Vec<f64> = placed
                .iter()
                .filter_map(|&(_, p)| match p {
                    Placement::OnRay { ray: r, t } if r == ray => Some(t),
                    _ => None,
                })
                .collect();
            cuts.sort_by(f64::total_cmp);
            let mut pieces = Vec::new();
            let mut a = r_min;
            for t in cuts {
                pieces.push((a, t - delta));
                a = t + delta;
            }
            pieces.push((a, r_max));
            let seg = PathSegment::segment(center, center + r_max * u);
            for (a, b) in pieces {
                let (t0, t1) = (a / r_max, b / r_max);
                let pz = integrate_segment_fn(&g, &seg, Measure::Dz, t0, t1, qt)?;
                let pb = integrate_segment_fn(&g, &seg, Measure::Dzbar, t0, t1, qt)?;
                // The second ray is traversed inwards.
                let sign = if ray == 0 { 1.0 } else { -1.0 };
                rays[0] += sign * pz.value;
                rays[1] += sign * pb.value;
                err += pz.error + pb.error;
            }
        }
        let ([area_z, area_b], area_err) = areas[m];
        seq.push(rays[0] - area_z);
        seq_conj.push(-rays[1] - area_b);
        errs.push(err + area_err);
    }
    let params = r_schedule.radii();
    let lhs = richardson(&seq, &errs, r_schedule.ratio, &params)
        .limit
        .finite();
    let lhs_conj = richardson(&seq_conj, &errs, r_schedule.ratio, &params)
        .limit
        .finite();
    let (Some(lhs), Some(lhs_conj)) = (lhs, lhs_conj) else {
        return Err(IdentityError::TruncationNonConvergent);
    };

    let mut b = Builder::new(name);
    b.term(Side::Lhs, "vt_rays_minus_vp_area_dz", lhs)
        .term(Side::ConjLhs, "minus_vt_rays_minus_vp_area_dzbar", lhs_conj)
        .note("truncation: R and δ advanced jointly (matched), then extrapolated");
    for &(s, p) in &placed {
        let weight = match p {
            Placement::Inside => Complex::new(0.0, TAU),
            Placement::OnRay { .. } => Complex::new(0.0, PI),
            Placement::Vertex => Complex::new(0.0, alpha),
            Placement::Outside => continue,
        };
        let r = residue_pair(f, s, sing)?;
        let at = format!("{}{:+}i", s.re, s.im);
        b.term(Side::Info, format!("potential@{at}"), weight);
        b.term(Side::Rhs, format!("p_res@{at}"), weight * r.res);
        b.term(
            Side::ConjRhs,
            format!("p_res_star@{at}"),
            weight * r.res_star,
        );
    }
    Ok(b.finish(tol))
}

fn ray_distance(w: Complex, phi: f64) -> f64 {
    let u = Complex::from_polar(1.0, phi);
    let along = (w * u.conj()).re;
    if along <= 0.0 {
        w.norm()
    } else {
        (w - along * u).norm()
    }
}

// Area terms ∬ ∂f/∂z̄ dz̄dz and ∬ ∂f/∂z dz̄dz over the truncated wedge with
// discs of radius δ removed about listed points, for every step of the joint
// schedule. The first step is integrated directly; later steps add the outer
// strip, the shells uncovered by the shrinking discs and, with a singular
// vertex, the inner strip. Discs about on-ray points are cut in half by the ray.
#[allow(clippy::too_many_arguments)]
fn wedge_area_sequence(
    dzbar_f: &Expr,
    dz_f: &Expr,
    center: Complex,
    (lo, hi): (f64, f64),
    vertex_singular: bool,
    r_max: &[f64],
    deltas: &[f64],
    placed: &[(Complex, Placement)],
    tol: f64,
) -> Result<Vec<([Complex; 2], f64)>, IdentityError> {
    let r_min = |m: usize| if vertex_singular { deltas[m] } else { 0.0 };
    let sector = |inner: f64, outer: f64| PlanarDomain::AnnularSector {
        center,
        inner,
        outer,
        phi_lo: lo,
        phi_hi: hi,
    };
    let mut out = vec![([Complex::new(0.0, 0.0); 2], 0.0); r_max.len()];
    for (i, g) in [dzbar_f, dz_f].into_iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let h = |z: Complex| g.eval(z);
        let holes: Vec<(Complex, f64)> = placed
            .iter()
            .filter(|(_, p)| matches!(p, Placement::Inside | Placement::OnRay { .. }))
            .map(|&(s, _)| (s, deltas[0]))
            .collect();
        let first = holed_area_dxdy(&h, &sector(r_min(0), r_max[0]), &holes, tol)?;
        let mut acc = first.value;
        let mut err = first.error;
        out[0].0[i] = AREA_FORM * acc;
        out[0].1 += 2.0 * err;
        for m in 1..r_max.len() {
            let strip = holed_area_dxdy(&h, &sector(r_max[m - 1], r_max[m]), &[], tol)?;
            acc += strip.value;
            err += strip.error;
            if vertex_singular {
                let inner = holed_area_dxdy(&h, &sector(deltas[m], deltas[m - 1]), &[], tol)?;
                acc += inner.value;
                err += inner.error;
            }
            for &(s, p) in placed {
                let (a, b) = match p {
                    Placement::Inside => (0.0, TAU),
                    Placement::OnRay { ray: 0, .. } => (lo, lo + PI),
                    Placement::OnRay { .. } => (hi - PI, hi),
                    _ => continue,
                };
                let dom = PlanarDomain::AnnularSector {
                    center: s,
                    inner: deltas[m],
                    outer: deltas[m - 1],
                    phi_lo: a,
                    phi_hi: b,
                };
                let shell = holed_area_dxdy(&h, &dom, &[], tol)?;
                acc += shell.value;
                err += shell.error;
            }
            out[m].0[i] = AREA_FORM * acc;
            out[m].1 += 2.0 * err;
        }
    }
    Ok(out)
}
