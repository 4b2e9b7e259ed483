//! Numerical verification of the planar residue identities.
//!
//! Each check computes both sides of an identity from independent routes
//! (path quadrature, area quadrature, residues, potentials) and reports every
//! term. The z-form (∮ f dz, ∂f/∂z̄, Res) and the z̄-form (−∮ f dz̄, ∂f/∂z,
//! Res*) are checked together; the reported gap is the larger of the two.

pub mod catalog;
mod lemmas;
pub mod suite;

use std::f64::consts::{PI, TAU};

use crate::expr::Expr;
use crate::geometry::{make_keyhole, Contour, GeometryError, PathSegment, PlanarDomain};
use crate::potential::potential_2d;
use crate::quad::{
    holed_area_dxdy, integrate_area, integrate_path, richardson, vp_integrate_area,
    vp_integrate_path, ExcisionSpec, Limit, Measure, QuadError, RadiiSchedule, ScheduleError,
    AREA_FORM,
};
use crate::residue::{default_schedule, residue_small_circle, ResidueError, ResiduePair};
use crate::Complex;

pub use lemmas::{check_lemma_large_circle, check_lemma_small_circle, check_lemma_vt_sector};

const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IdentityError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid radius schedule: {0}")]
    Schedule(#[from] ScheduleError),
    #[error("{0} does not converge")]
    NonConvergent(String),
    #[error("truncation limit R → ∞ does not converge")]
    TruncationNonConvergent,
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Which side of an identity a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
    ConjLhs,
    ConjRhs,
    /// Intermediate value not summed into either side.
    Info,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
            Side::ConjLhs => "conj_lhs",
            Side::ConjRhs => "conj_rhs",
            Side::Info => "info",
        }
    }
}

/// A named term; terms on one side sum to that side exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub name: String,
    pub value: Complex,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A precondition of the identity does not hold for this input.
    NotApplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: Complex,
    pub rhs: Complex,
    /// Conjugate form, when checked.
    pub conj: Option<(Complex, Complex)>,
    /// Largest gap over the checked forms; NaN when not applicable.
    pub abs_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub status: Status,
    pub details: Vec<Term>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn not_applicable(
        name: impl Into<String>,
        reason: impl Into<String>,
        tolerance: f64,
    ) -> VerificationReport {
        VerificationReport {
            name: name.into(),
            lhs: Complex::new(0.0, 0.0),
            rhs: Complex::new(0.0, 0.0),
            conj: None,
            abs_gap: f64::NAN,
            tolerance,
            pass: false,
            status: Status::NotApplicable,
            details: Vec::new(),
            notes: vec![reason.into()],
        }
    }

    /// Sum of the terms on `side`.
    pub fn side_total(&self, side: Side) -> Complex {
        self.details
            .iter()
            .filter(|t| t.side == side)
            .map(|t| t.value)
            .sum()
    }
}

/// Collects terms and assembles a report.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    name: String,
    terms: Vec<Term>,
    notes: Vec<String>,
}

impl Builder {
    pub(crate) fn new(name: impl Into<String>) -> Builder {
        Builder {
            name: name.into(),
            ..Builder::default()
        }
    }

    pub(crate) fn term(
        &mut self,
        side: Side,
        name: impl Into<String>,
        value: Complex,
    ) -> &mut Self {
        self.terms.push(Term {
            name: name.into(),
            value,
            side,
        });
        self
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    fn total(&self, side: Side) -> Complex {
        self.terms
            .iter()
            .filter(|t| t.side == side)
            .map(|t| t.value)
            .sum()
    }

    pub(crate) fn finish(self, tolerance: f64) -> VerificationReport {
        let lhs = self.total(Side::Lhs);
        let rhs = self.total(Side::Rhs);
        let has_conj = self
            .terms
            .iter()
            .any(|t| matches!(t.side, Side::ConjLhs | Side::ConjRhs));
        let conj = has_conj.then(|| (self.total(Side::ConjLhs), self.total(Side::ConjRhs)));
        let mut abs_gap = (lhs - rhs).norm();
        if let Some((a, b)) = conj {
            abs_gap = abs_gap.max((a - b).norm());
        }
        let pass = abs_gap <= tolerance;
        VerificationReport {
            name: self.name,
            lhs,
            rhs,
            conj,
            abs_gap,
            tolerance,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            details: self.terms,
            notes: self.notes,
        }
    }
}

/// Quadrature tolerance used for a check with tolerance `tol`.
pub(crate) fn quad_tol(tol: f64) -> f64 {
    (1e-3 * tol).max(1e-13)
}

pub(crate) fn finite_limit(limit: Limit, what: &str) -> Result<Complex, IdentityError> {
    limit
        .finite()
        .ok_or_else(|| IdentityError::NonConvergent(what.to_string()))
}

pub(crate) fn residue_pair(
    f: &Expr,
    p: Complex,
    all: &[Complex],
) -> Result<ResiduePair, IdentityError> {
    Ok(residue_small_circle(f, p, &default_schedule(p, all))?.pair)
}

/// Excision schedule for area integrals: discs well inside the domain and
/// clear of each other.
fn area_schedule(c: &Contour, sing: &[Complex]) -> RadiiSchedule {
    let mut room: f64 = 0.1;
    for (i, &p) in sing.iter().enumerate() {
        room = room.min(0.2 * c.distance(p));
        for &q in &sing[..i] {
            room = room.min(0.2 * (p - q).norm());
        }
    }
    RadiiSchedule::halving(room)
}

// v.p. ∬ g dz̄dz over `dom` with discs about `sing` removed.
fn vp_area(
    g: &Expr,
    dom: &PlanarDomain,
    c: &Contour,
    sing: &[Complex],
    tol: f64,
) -> Result<Complex, IdentityError> {
    if sing.is_empty() || g.is_zero() {
        return Ok(integrate_area(g, dom, tol)?.value);
    }
    let exc = ExcisionSpec::new(sing.to_vec(), area_schedule(c, sing));
    finite_limit(
        vp_integrate_area(g, dom, &exc, tol)?.limit,
        "area principal value",
    )
}

fn fmt_point(p: Complex) -> String {
    format!("{}{:+}i", p.re, p.im)
}

/// `∮ f dz − v.p.∬ ∂f/∂z̄ dz̄dz = Σ p·Res f` and `−∮ f dz̄ − v.p.∬ ∂f/∂z dz̄dz
/// = Σ p·Res* f` for singular points strictly inside `c`.
pub fn check_planar_residue_identity(
    f: &Expr,
    c: &Contour,
    dom: &PlanarDomain,
    sing: &[Complex],
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    c.require_closed()?;
    let qt = quad_tol(tol);
    let geo_tol = c.default_tolerance();
    let mut b = Builder::new("planar_residue_identity");

    b.term(
        Side::Lhs,
        "contour_dz",
        integrate_path(f, c, Measure::Dz, qt)?.value,
    );
    let area = vp_area(&f.wirtinger_dzbar(), dom, c, sing, qt)?;
    b.term(Side::Lhs, "minus_area_dzbar_f", -area);
    b.term(
        Side::ConjLhs,
        "minus_contour_dzbar",
        -integrate_path(f, c, Measure::Dzbar, qt)?.value,
    );
    let area_conj = vp_area(&f.wirtinger_dz(), dom, c, sing, qt)?;
    b.term(Side::ConjLhs, "minus_area_dz_f", -area_conj);

    for &p in sing {
        let pot = potential_2d(c, p, geo_tol)?;
        if pot.kind.is_boundary() {
            return Err(IdentityError::Invalid(format!(
                "point {} lies on the contour; use the boundary-singularity check",
                fmt_point(p)
            )));
        }
        let r = residue_pair(f, p, sing)?;
        let at = fmt_point(p);
        b.term(Side::Info, format!("potential@{at}"), pot.value);
        b.term(Side::Info, format!("res@{at}"), r.res);
        b.term(Side::Info, format!("res_star@{at}"), r.res_star);
        b.term(Side::Rhs, format!("p_res@{at}"), pot.value * r.res);
        b.term(
            Side::ConjRhs,
            format!("p_res_star@{at}"),
            pot.value * r.res_star,
        );
    }
    Ok(b.finish(tol))
}

/// Residue identity with singular points on the contour. Boundary points carry
/// the potential `iα`; the principal value of the contour integral is the
/// total value under this convention.
///
/// Both indentation conventions are also computed by brute force: the contour
/// is cut where it meets the circle `|z − p| = δ` and closed by the arc inside
/// the domain (the point is then excluded, weight 0) or outside it (the point
/// is enclosed, weight `2πi`). After `δ → 0` each must match its own
/// right-hand side; the arcs tend to `−iα·Res` and `+i(2π − α)·Res`, which is
/// the sign flip between the two conventions.
pub fn check_boundary_singularity_identity(
    f: &Expr,
    c: &Contour,
    dom: &PlanarDomain,
    interior_sing: &[Complex],
    boundary_sing: &[Complex],
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    if boundary_sing.is_empty() {
        let mut r = check_planar_residue_identity(f, c, dom, interior_sing, tol)?;
        r.name = "boundary_singularity_identity".into();
        r.notes
            .push("no boundary points: reduces to the planar identity".into());
        return Ok(r);
    }
    c.require_closed()?;
    if c.loops().len() != 1 {
        return Err(IdentityError::Invalid(
            "boundary points are supported on single-loop contours".into(),
        ));
    }
    let qt = quad_tol(tol);
    let geo_tol = 1e-8 * c.scale();
    let mut all: Vec<Complex> = interior_sing.to_vec();
    all.extend_from_slice(boundary_sing);
    let mut b = Builder::new("boundary_singularity_identity");

    // Excision radii: clear of every other listed point.
    let mut eps0: f64 = 0.1 * c.scale();
    for (i, &p) in boundary_sing.iter().enumerate() {
        for &q in all.iter().take(interior_sing.len() + i) {
            eps0 = eps0.min(0.2 * (p - q).norm());
        }
    }
    let sched = RadiiSchedule::halving(eps0);
    let vp_dz = finite_limit(
        vp_integrate_path(f, c, boundary_sing, Measure::Dz, &sched, qt)?.limit,
        "contour principal value",
    )?;
    let vp_dzbar = finite_limit(
        vp_integrate_path(f, c, boundary_sing, Measure::Dzbar, &sched, qt)?.limit,
        "contour principal value",
    )?;
    let dzbar_f = f.wirtinger_dzbar();
    let dz_f = f.wirtinger_dz();
    let area = boundary_vp_area(&dzbar_f, dom, &all, &sched, qt)?;
    let area_conj = boundary_vp_area(&dz_f, dom, &all, &sched, qt)?;

    b.term(Side::Lhs, "vp_contour_dz", vp_dz);
    b.term(Side::Lhs, "minus_area_dzbar_f", -area);
    b.term(Side::ConjLhs, "minus_vp_contour_dzbar", -vp_dzbar);
    b.term(Side::ConjLhs, "minus_area_dz_f", -area_conj);

    let mut interior_res = Complex::new(0.0, 0.0);
    for &p in interior_sing {
        let pot = potential_2d(c, p, geo_tol)?;
        let r = residue_pair(f, p, &all)?;
        let at = fmt_point(p);
        b.term(Side::Rhs, format!("p_res@{at}"), pot.value * r.res);
        b.term(
            Side::ConjRhs,
            format!("p_res_star@{at}"),
            pot.value * r.res_star,
        );
        interior_res += pot.value * r.res;
    }
    let mut boundary_res = Complex::new(0.0, 0.0);
    for &p in boundary_sing {
        let pot = potential_2d(c, p, geo_tol)?;
        if !pot.kind.is_boundary() {
            return Err(IdentityError::Invalid(format!(
                "point {} is not on the contour",
                fmt_point(p)
            )));
        }
        let r = residue_pair(f, p, &all)?;
        let at = fmt_point(p);
        b.term(
            Side::Info,
            format!("interior_angle@{at}"),
            Complex::new(pot.interior_angle.unwrap_or(PI), 0.0),
        );
        b.term(Side::Rhs, format!("p_res@{at}"), pot.value * r.res);
        b.term(
            Side::ConjRhs,
            format!("p_res_star@{at}"),
            pot.value * r.res_star,
        );
        boundary_res += TAU * I * r.res;
    }

    let (int_seq, ext_seq) = indented_sequences(f, c, boundary_sing, &sched, qt)?;
    let params = sched.radii();
    let zeros = vec![qt; params.len()];
    let indented_int = finite_limit(
        richardson(&int_seq, &zeros, sched.ratio, &params).limit,
        "interior indentation",
    )?;
    let indented_ext = finite_limit(
        richardson(&ext_seq, &zeros, sched.ratio, &params).limit,
        "exterior indentation",
    )?;
    let gap_int = (indented_int - area - interior_res).norm();
    let gap_ext = (indented_ext - area - interior_res - boundary_res).norm();
    b.term(Side::Info, "indented_interior_arc", indented_int);
    b.term(Side::Info, "indented_exterior_arc", indented_ext);
    b.term(Side::Info, "interior_arc_term", indented_int - vp_dz);
    b.term(Side::Info, "exterior_arc_term", indented_ext - vp_dz);
    b.term(
        Side::Info,
        "gap_interior_arc_convention",
        Complex::new(gap_int, 0.0),
    );
    b.term(
        Side::Info,
        "gap_exterior_arc_convention",
        Complex::new(gap_ext, 0.0),
    );
    let mut report = b.finish(tol);
    report.abs_gap = report.abs_gap.max(gap_int).max(gap_ext);
    report.pass = report.abs_gap <= tol;
    report.status = if report.pass {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(report)
}

// v.p. area integral with discs of the contour's excision radius removed about
// every listed point. Discs about boundary points are clipped by the domain.
fn boundary_vp_area(
    g: &Expr,
    dom: &PlanarDomain,
    points: &[Complex],
    sched: &RadiiSchedule,
    tol: f64,
) -> Result<Complex, IdentityError> {
    if g.is_zero() {
        return Ok(Complex::new(0.0, 0.0));
    }
    let h = |z: Complex| g.eval(z);
    // The clipped discs cost more as they shrink; the area limit exists on
    // its own, so a short schedule is enough for the extrapolation.
    let sched = RadiiSchedule::new(sched.eps0, 0.5, sched.steps.min(5))?;
    let params = sched.radii();
    let mut values = Vec::with_capacity(params.len());
    let mut errs = Vec::with_capacity(params.len());
    for &delta in &params {
        let holes: Vec<(Complex, f64)> = points.iter().map(|&p| (p, delta)).collect();
        let est = holed_area_dxdy(&h, dom, &holes, tol)?;
        values.push(AREA_FORM * est.value);
        errs.push(est.error);
    }
    finite_limit(
        richardson(&values, &errs, sched.ratio, &params).limit,
        "area principal value",
    )
}

// ∮ f dz over the contour indented at each boundary point by the arc of
// radius δ inside (first sequence) or outside (second) the domain.
fn indented_sequences(
    f: &Expr,
    c: &Contour,
    points: &[Complex],
    sched: &RadiiSchedule,
    tol: f64,
) -> Result<(Vec<Complex>, Vec<Complex>), IdentityError> {
    use crate::quad::{integrate_segment_fn, LoopArc};
    let g = |z: Complex| f.eval(z);
    let arc = LoopArc::new(c.segments(), true);
    let marks: Vec<f64> = points
        .iter()
        .map(|&p| {
            let (k, t, _) = c.nearest(p);
            arc.position(k, t)
        })
        .collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| marks[i].total_cmp(&marks[j]));

    let mut int_seq = Vec::new();
    let mut ext_seq = Vec::new();
    for delta in sched.radii() {
        // Arclength offsets where the contour leaves the δ-disc.
        let mut cuts = Vec::with_capacity(points.len());
        for &i in &order {
            let p = points[i];
            let s0 = marks[i];
            let back = crossing(|s| (arc.point(s0 - s) - p).norm() - delta, delta);
            let fwd = crossing(|s| (arc.point(s0 + s) - p).norm() - delta, delta);
            cuts.push((p, s0 - back, s0 + fwd));
        }
        // Contour pieces between consecutive indentations.
        let mut outside = Complex::new(0.0, 0.0);
        for j in 0..cuts.len() {
            let from = cuts[j].2;
            let mut to = cuts[(j + 1) % cuts.len()].1;
            if to <= from {
                to += arc.total;
            }
            for (k, t0, t1) in arc.pieces(from, to)? {
                outside +=
                    integrate_segment_fn(&g, &c.segments()[k], Measure::Dz, t0, t1, tol)?.value;
            }
        }
        let mut inner_arcs = Complex::new(0.0, 0.0);
        let mut outer_arcs = Complex::new(0.0, 0.0);
        for &(p, s_in, s_out) in &cuts {
            let a = arc.point(s_in) - p;
            let b = arc.point(s_out) - p;
            let (ta, tb) = (a.im.atan2(a.re), b.im.atan2(b.re));
            // Clockwise around p keeps the domain side; counter-clockwise goes around outside.
            let cw = -(ta - tb).rem_euclid(TAU);
            let ccw = (tb - ta).rem_euclid(TAU);
            let seg_in = [PathSegment::arc(p, delta, ta, ta + cw)];
            let seg_out = [PathSegment::arc(p, delta, ta, ta + ccw)];
            inner_arcs += crate::quad::integrate_path_fn(&g, &seg_in, Measure::Dz, tol)?.value;
            outer_arcs += crate::quad::integrate_path_fn(&g, &seg_out, Measure::Dz, tol)?.value;
        }
        int_seq.push(outside + inner_arcs);
        ext_seq.push(outside + outer_arcs);
    }
    Ok((int_seq, ext_seq))
}

// Smallest s > 0 with h(s) = 0, for h negative just after 0.
fn crossing(h: impl Fn(f64) -> f64, delta: f64) -> f64 {
    let step = delta / 16.0;
    let mut lo = 0.0;
    let mut hi = step;
    while h(hi) < 0.0 && hi < 64.0 * delta {
        lo = hi;
        hi += step;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Residues of the field `P w₁ + Q w₂`: `Res F = Res P + Res* Q` and
/// `Res* F = Res Q − Res* P`, checked against the flux form
/// `(1/2πi)∮ (P dz − Q dz̄)` and the circulation form `(1/2πi)∮ (Q dz + P dz̄)`
/// on shrinking circles about `z_n`.
pub fn check_vector_field_residues(
    p: &Expr,
    q: &Expr,
    z_n: Complex,
    schedule: &RadiiSchedule,
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    schedule.validate()?;
    let rp = residue_small_circle(p, z_n, schedule)?.pair;
    let rq = residue_small_circle(q, z_n, schedule)?.pair;
    let qt = quad_tol(tol);
    let mut flux = Vec::new();
    let mut circ = Vec::new();
    let mut errs = Vec::new();
    for eps in schedule.radii() {
        let circle = [PathSegment::circle(
            z_n,
            eps,
            crate::geometry::Orientation::Ccw,
        )];
        let pz = integrate_path(p, &circle, Measure::Dz, qt)?;
        let pb = integrate_path(p, &circle, Measure::Dzbar, qt)?;
        let qz = integrate_path(q, &circle, Measure::Dz, qt)?;
        let qb = integrate_path(q, &circle, Measure::Dzbar, qt)?;
        flux.push((pz.value - qb.value) / (TAU * I));
        circ.push((qz.value + pb.value) / (TAU * I));
        errs.push(
            (pz.abs_error_estimate
                + pb.abs_error_estimate
                + qz.abs_error_estimate
                + qb.abs_error_estimate)
                / TAU,
        );
    }
    let params = schedule.radii();
    let flux = finite_limit(
        richardson(&flux, &errs, schedule.ratio, &params).limit,
        "flux form",
    )?;
    let circ = finite_limit(
        richardson(&circ, &errs, schedule.ratio, &params).limit,
        "circulation form",
    )?;

    let mut b = Builder::new("vector_field_residues");
    b.term(Side::Info, "res_p", rp.res)
        .term(Side::Info, "res_star_p", rp.res_star)
        .term(Side::Info, "res_q", rq.res)
        .term(Side::Info, "res_star_q", rq.res_star)
        .term(Side::Lhs, "flux_over_2pi_i", flux)
        .term(Side::Rhs, "res_p", rp.res)
        .term(Side::Rhs, "res_star_q", rq.res_star)
        .term(Side::ConjLhs, "circulation_over_2pi_i", circ)
        .term(Side::ConjRhs, "res_q", rq.res)
        .term(Side::ConjRhs, "minus_res_star_p", -rp.res_star);
    Ok(b.finish(tol))
}

/// Analyticity class of a function on a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticityClass {
    RegularAnalytic,
    SingularAnalytic,
    NonAnalytic,
}

/// Which Wirtinger derivative vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingDerivative {
    /// `∂f/∂z̄ = 0`.
    Dzbar,
    /// `∂f/∂z = 0`.
    Dz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: AnalyticityClass,
    pub vanishing: Option<VanishingDerivative>,
    /// For non-analytic functions, points where neither derivative vanishes;
    /// otherwise the sample points that failed to evaluate.
    pub witnesses: Vec<Complex>,
    pub samples: usize,
}

/// Samples both Wirtinger derivatives on a `grid_n × grid_n` grid over the
/// domain, skipping points within one cell of a declared singular point.
pub fn classify_analyticity(
    f: &Expr,
    dom: &PlanarDomain,
    sing: &[Complex],
    grid_n: usize,
    tol: f64,
) -> Classification {
    let grid_n = grid_n.max(16);
    let (x0, x1, y0, y1) = bounding_box(dom);
    let hx = (x1 - x0) / grid_n as f64;
    let hy = (y1 - y0) / grid_n as f64;
    let skip = hx.max(hy);
    let dz = f.wirtinger_dz();
    let dzb = f.wirtinger_dzbar();
    let mut dz_ok = dz.is_zero();
    let mut dzb_ok = dzb.is_zero();
    let (mut dz_all, mut dzb_all) = (true, true);
    let mut both_nonzero = Vec::new();
    let mut undefined = Vec::new();
    let mut samples = 0;
    for i in 0..grid_n {
        for j in 0..grid_n {
            let z = Complex::new(x0 + (i as f64 + 0.5) * hx, y0 + (j as f64 + 0.5) * hy);
            if !dom.contains(z) || sing.iter().any(|&s| (z - s).norm() < skip) {
                continue;
            }
            samples += 1;
            let a = dz.eval(z);
            let b = dzb.eval(z);
            let (Ok(a), Ok(b)) = (a, b) else {
                undefined.push(z);
                continue;
            };
            let a_small = a.norm() <= tol;
            let b_small = b.norm() <= tol;
            dz_all &= a_small;
            dzb_all &= b_small;
            if !a_small && !b_small {
                both_nonzero.push(z);
            }
        }
    }
    dz_ok |= dz_all;
    dzb_ok |= dzb_all;
    let vanishing = if dzb_ok {
        Some(VanishingDerivative::Dzbar)
    } else if dz_ok {
        Some(VanishingDerivative::Dz)
    } else {
        None
    };
    let singular_inside = sing.iter().any(|&s| dom.contains(s)) || !undefined.is_empty();
    let (class, witnesses) = match vanishing {
        None => {
            both_nonzero.truncate(8);
            (AnalyticityClass::NonAnalytic, both_nonzero)
        }
        Some(_) if singular_inside => (AnalyticityClass::SingularAnalytic, undefined),
        Some(_) => (AnalyticityClass::RegularAnalytic, undefined),
    };
    Classification {
        class,
        vanishing,
        witnesses,
        samples,
    }
}

fn bounding_box(dom: &PlanarDomain) -> (f64, f64, f64, f64) {
    match *dom {
        PlanarDomain::Disc { center, radius: r }
        | PlanarDomain::Annulus {
            center, outer: r, ..
        }
        | PlanarDomain::AnnularSector {
            center, outer: r, ..
        } => (center.re - r, center.re + r, center.im - r, center.im + r),
        PlanarDomain::Rectangle {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        } => (x_lo, x_hi, y_lo, y_hi),
    }
}

/// Green–Riemann checks for `log(z·z̄)` on annuli `δ ≤ |z| ≤ a` and for
/// `log z` on the keyhole around the negative real axis, for every `δ` of the
/// schedule. The keyhole rays sit at angular distance `gap` from the cut.
///
/// Returns five reports: the two `log(z·z̄)` identities, the two `log z`
/// keyhole identities (per step and in the limit δ → 0), and `∮_{|z|=a} log z dz
/// = −2πi·a`.
pub fn check_keyhole_log(
    a: f64,
    deltas: &RadiiSchedule,
    gap: f64,
    tol: f64,
) -> Result<Vec<VerificationReport>, IdentityError> {
    deltas.validate()?;
    if !(deltas.eps0 < a) {
        return Err(IdentityError::Invalid("keyhole needs δ < a".into()));
    }
    let qt = quad_tol(tol);
    let o = Complex::new(0.0, 0.0);
    let lm = Expr::parse("log(z*conj(z))").expect("valid expression");
    let lg = Expr::parse("log(z)").expect("valid expression");
    let inv_zbar = Expr::parse("1/conj(z)").expect("valid expression");
    let inv_z = Expr::parse("1/z").expect("valid expression");
    // Circles parametrised across (−π, π] so that log z is continuous on them.
    let circle = |r: f64| [PathSegment::arc(o, r, -PI, PI)];

    let outer_lm_dz = integrate_path(&lm, &circle(a), Measure::Dz, qt)?.value;
    let outer_lm_dzbar = integrate_path(&lm, &circle(a), Measure::Dzbar, qt)?.value;
    let outer_lg_dz = integrate_path(&lg, &circle(a), Measure::Dz, qt)?.value;
    let outer_lg_dzbar = integrate_path(&lg, &circle(a), Measure::Dzbar, qt)?.value;

    let mut worst: [Option<(f64, Builder)>; 4] = [None, None, None, None];
    let mut keep = |slot: usize, b: Builder| {
        let lhs = b.total(Side::Lhs);
        let rhs = b.total(Side::Rhs);
        let gap = (lhs - rhs).norm();
        if worst[slot].as_ref().is_none_or(|(g, _)| gap > *g) {
            worst[slot] = Some((gap, b));
        }
    };
    let mut lhs_dz_seq = Vec::new();
    let mut rhs_dz_seq = Vec::new();
    let mut lhs_dzbar_seq = Vec::new();
    let mut rhs_dzbar_seq = Vec::new();
    for (m, delta) in deltas.radii().into_iter().enumerate() {
        let tag = format!("step {m}, delta = {delta:e}");
        let ann = PlanarDomain::Annulus {
            center: o,
            inner: delta,
            outer: a,
        };
        let inner_lm_dz = integrate_path(&lm, &circle(delta), Measure::Dz, qt)?.value;
        let inner_lm_dzbar = integrate_path(&lm, &circle(delta), Measure::Dzbar, qt)?.value;

        let mut b = Builder::new("log_modulus_dz");
        b.note(tag.clone())
            .term(Side::Lhs, "outer_dz", outer_lm_dz)
            .term(Side::Lhs, "minus_inner_dz", -inner_lm_dz)
            .term(
                Side::Rhs,
                "area_inv_conj_z",
                integrate_area(&inv_zbar, &ann, qt)?.value,
            );
        keep(0, b);

        let mut b = Builder::new("log_modulus_dzbar");
        b.note(tag.clone())
            .term(Side::Lhs, "minus_outer_dzbar", -outer_lm_dzbar)
            .term(Side::Lhs, "inner_dzbar", inner_lm_dzbar)
            .term(
                Side::Rhs,
                "area_inv_z",
                integrate_area(&inv_z, &ann, qt)?.value,
            );
        keep(1, b);

        let key = make_keyhole(o, a, delta, PI, gap)?;
        let segs = key.segments();
        let rays_dz = integrate_path(&lg, &[segs[1], segs[3]], Measure::Dz, qt)?.value;
        let rays_dzbar = integrate_path(&lg, &[segs[1], segs[3]], Measure::Dzbar, qt)?.value;
        let inner_lg_dz = integrate_path(&lg, &circle(delta), Measure::Dz, qt)?.value;
        let inner_lg_dzbar = integrate_path(&lg, &circle(delta), Measure::Dzbar, qt)?.value;
        let slit = PlanarDomain::AnnularSector {
            center: o,
            inner: delta,
            outer: a,
            phi_lo: PI + gap,
            phi_hi: 3.0 * PI - gap,
        };
        // ∬ (1/z) dz dz̄ = −∬ (1/z) dz̄ dz.
        let area_slit = -integrate_area(&inv_z, &slit, qt)?.value;

        let mut b = Builder::new("log_keyhole_dz");
        b.note(tag.clone())
            .term(Side::Lhs, "outer_dz", outer_lg_dz)
            .term(Side::Lhs, "rays_dz", rays_dz)
            .term(Side::Rhs, "inner_dz", inner_lg_dz);
        lhs_dz_seq.push(outer_lg_dz + rays_dz);
        rhs_dz_seq.push(inner_lg_dz);
        keep(2, b);

        let mut b = Builder::new("log_keyhole_dzbar");
        b.note(tag)
            .term(Side::Lhs, "minus_outer_dzbar", -outer_lg_dzbar)
            .term(Side::Lhs, "minus_area_dz_dzbar_inv_z", -area_slit)
            .term(Side::Lhs, "minus_rays_dzbar", -rays_dzbar)
            .term(Side::Rhs, "minus_inner_dzbar", -inner_lg_dzbar);
        lhs_dzbar_seq.push(-outer_lg_dzbar - area_slit - rays_dzbar);
        rhs_dzbar_seq.push(-inner_lg_dzbar);
        keep(3, b);
    }

    let params = deltas.radii();
    let zeros = vec![qt; params.len()];
    let mut reports = Vec::new();
    for (slot, w) in worst.into_iter().enumerate() {
        let (_, mut b) = w.expect("schedule has at least one step");
        if slot >= 2 {
            let (l, r) = if slot == 2 {
                (&lhs_dz_seq, &rhs_dz_seq)
            } else {
                (&lhs_dzbar_seq, &rhs_dzbar_seq)
            };
            let ll = finite_limit(
                richardson(l, &zeros, deltas.ratio, &params).limit,
                "keyhole limit",
            )?;
            let rl = finite_limit(
                richardson(r, &zeros, deltas.ratio, &params).limit,
                "keyhole limit",
            )?;
            b.term(Side::Info, "lhs_limit_delta_to_0", ll);
            b.term(Side::Info, "rhs_limit_delta_to_0", rl);
            if (ll - rl).norm() > tol {
                b.note("limit forms disagree");
                b.term(Side::Info, "limit_gap", Complex::new((ll - rl).norm(), 0.0));
            }
        }
        b.note(format!(
            "worst step shown; gap = {gap:e} between rays and cut"
        ));
        reports.push(b.finish(tol));
    }

    let mut b = Builder::new("log_circle_dz");
    b.term(Side::Lhs, "circle_dz", outer_lg_dz).term(
        Side::Rhs,
        "minus_2_pi_i_a",
        Complex::new(0.0, -TAU * a),
    );
    reports.push(b.finish(tol.min(1e-8)));
    Ok(reports)
}
