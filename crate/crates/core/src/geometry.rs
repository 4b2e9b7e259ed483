//! Oriented paths, closed contours, planar domains and sector decompositions.
//!
//! Every [`PathSegment`] is parametrised over `t ∈ [0, 1]` at constant speed,
//! so the parameter is proportional to arclength.

use std::f64::consts::{PI, TAU};
use std::ops::Range;

use crate::Complex;

/// Absolute tolerance used when checking that consecutive segments meet.
pub const JOIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("segment {index} does not start where the previous one ends")]
    Discontinuous { index: usize },
    #[error("contour is not closed")]
    OpenContour,
    #[error("contour has no segments")]
    Empty,
}

fn invalid(name: &'static str, reason: impl Into<String>) -> GeometryError {
    GeometryError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathSegment {
    Segment {
        a: Complex,
        b: Complex,
    },
    /// Arc of the circle `center + radius·e^{iθ}` for θ running from
    /// `theta_start` to `theta_end`; the sweep sign gives the direction.
    Arc {
        center: Complex,
        radius: f64,
        theta_start: f64,
        theta_end: f64,
    },
    /// Full circle starting and ending at `center + radius`.
    FullCircle {
        center: Complex,
        radius: f64,
        orientation: Orientation,
    },
}

impl PathSegment {
    pub fn segment(a: Complex, b: Complex) -> PathSegment {
        PathSegment::Segment { a, b }
    }

    pub fn arc(center: Complex, radius: f64, theta_start: f64, theta_end: f64) -> PathSegment {
        PathSegment::Arc {
            center,
            radius,
            theta_start,
            theta_end,
        }
    }

    pub fn circle(center: Complex, radius: f64, orientation: Orientation) -> PathSegment {
        PathSegment::FullCircle {
            center,
            radius,
            orientation,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        match *self {
            PathSegment::Segment { a, b } => {
                if !finite(a) || !finite(b) {
                    return Err(invalid("segment", "endpoints must be finite"));
                }
                if a == b {
                    return Err(invalid("segment", "endpoints must be distinct"));
                }
            }
            PathSegment::Arc {
                center,
                radius,
                theta_start,
                theta_end,
            } => {
                if !finite(center) || !theta_start.is_finite() || !theta_end.is_finite() {
                    return Err(invalid("arc", "parameters must be finite"));
                }
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(invalid("radius", "must be positive"));
                }
                let sweep = (theta_end - theta_start).abs();
                if sweep == 0.0 || sweep > TAU + 1e-12 {
                    return Err(invalid("arc", "sweep must lie in (0, 2π]"));
                }
            }
            PathSegment::FullCircle { center, radius, .. } => {
                if !finite(center) {
                    return Err(invalid("circle", "center must be finite"));
                }
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(invalid("radius", "must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Arc description `(center, radius, θ0, Δθ)` for curved segments.
    pub fn as_arc(&self) -> Option<(Complex, f64, f64, f64)> {
        match *self {
            PathSegment::Segment { .. } => None,
            PathSegment::Arc {
                center,
                radius,
                theta_start,
                theta_end,
            } => Some((center, radius, theta_start, theta_end - theta_start)),
            PathSegment::FullCircle {
                center,
                radius,
                orientation,
            } => Some((center, radius, 0.0, orientation.sign() * TAU)),
        }
    }

    pub fn point(&self, t: f64) -> Complex {
        match *self {
            PathSegment::Segment { a, b } => a + (b - a) * t,
            _ => {
                let (c, r, t0, sweep) = self.as_arc().unwrap();
                c + Complex::from_polar(r, t0 + sweep * t)
            }
        }
    }

    /// `dz/dt` of the constant-speed parametrisation.
    pub fn derivative(&self, t: f64) -> Complex {
        match *self {
            PathSegment::Segment { a, b } => b - a,
            _ => {
                let (_, r, t0, sweep) = self.as_arc().unwrap();
                Complex::new(0.0, sweep) * Complex::from_polar(r, t0 + sweep * t)
            }
        }
    }

    pub fn start(&self) -> Complex {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex {
        match *self {
            PathSegment::FullCircle { .. } => self.start(),
            _ => self.point(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathSegment::Segment { a, b } => (b - a).norm(),
            _ => {
                let (_, r, _, sweep) = self.as_arc().unwrap();
                r * sweep.abs()
            }
        }
    }

    /// Unit tangent in the direction of travel at the start.
    pub fn tangent_start(&self) -> Complex {
        let d = self.derivative(0.0);
        d / d.norm()
    }

    /// Unit tangent in the direction of travel at the end.
    pub fn tangent_end(&self) -> Complex {
        let d = self.derivative(1.0);
        d / d.norm()
    }

    pub fn reversed(&self) -> PathSegment {
        match *self {
            PathSegment::Segment { a, b } => PathSegment::Segment { a: b, b: a },
            PathSegment::Arc {
                center,
                radius,
                theta_start,
                theta_end,
            } => PathSegment::Arc {
                center,
                radius,
                theta_start: theta_end,
                theta_end: theta_start,
            },
            PathSegment::FullCircle {
                center,
                radius,
                orientation,
            } => PathSegment::FullCircle {
                center,
                radius,
                orientation: match orientation {
                    Orientation::Ccw => Orientation::Cw,
                    Orientation::Cw => Orientation::Ccw,
                },
            },
        }
    }

    pub fn translated(&self, shift: Complex) -> PathSegment {
        match *self {
            PathSegment::Segment { a, b } => PathSegment::Segment {
                a: a + shift,
                b: b + shift,
            },
            PathSegment::Arc {
                center,
                radius,
                theta_start,
                theta_end,
            } => PathSegment::Arc {
                center: center + shift,
                radius,
                theta_start,
                theta_end,
            },
            PathSegment::FullCircle {
                center,
                radius,
                orientation,
            } => PathSegment::FullCircle {
                center: center + shift,
                radius,
                orientation,
            },
        }
    }

    /// The piece of this segment with parameters in `[t0, t1]`, re-parametrised
    /// over `[0, 1]`. Full circles become arcs.
    pub fn sub_segment(&self, t0: f64, t1: f64) -> PathSegment {
        match *self {
            PathSegment::Segment { .. } => PathSegment::Segment {
                a: self.point(t0),
                b: self.point(t1),
            },
            _ => {
                let (center, radius, th0, sweep) = self.as_arc().unwrap();
                PathSegment::Arc {
                    center,
                    radius,
                    theta_start: th0 + sweep * t0,
                    theta_end: th0 + sweep * t1,
                }
            }
        }
    }

    /// Nearest point of the segment to `p`, as `(t, distance)`.
    pub fn nearest(&self, p: Complex) -> (f64, f64) {
        match *self {
            PathSegment::Segment { a, b } => {
                let d = b - a;
                let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (t, (self.point(t) - p).norm())
            }
            _ => {
                let (c, r, th0, sweep) = self.as_arc().unwrap();
                let mut best = (0.0, (self.start() - p).norm());
                let de = (self.end() - p).norm();
                if de < best.1 {
                    best = (1.0, de);
                }
                let w = p - c;
                if w.norm() > 0.0 {
                    let phi = w.im.atan2(w.re);
                    let t = ((phi - th0) * sweep.signum()).rem_euclid(TAU) / sweep.abs();
                    if t <= 1.0 {
                        let d = (w.norm() - r).abs();
                        if d < best.1 {
                            best = (t, d);
                        }
                    }
                } else {
                    best = (0.0, r);
                }
                best
            }
        }
    }

    /// `½·Im ∫ conj(z) dz` along the segment; summed over a closed loop this is
    /// the signed enclosed area.
    pub fn area_contribution(&self) -> f64 {
        match *self {
            PathSegment::Segment { a, b } => 0.5 * (a.conj() * b).im,
            _ => {
                let (c, r, _, sweep) = self.as_arc().unwrap();
                let chord = self.end() - self.start();
                0.5 * ((c.conj() * chord).im + r * r * sweep)
            }
        }
    }

    fn bounding_extent(&self) -> f64 {
        match *self {
            PathSegment::Segment { a, b } => a.norm().max(b.norm()),
            _ => {
                let (c, r, _, _) = self.as_arc().unwrap();
                c.norm() + r
            }
        }
    }
}

/// Ordered list of segments forming one or more loops.
///
/// Consecutive segments must meet. The only permitted break is directly after
/// a loop has returned to its own starting point, which lets one contour
/// describe, for example, both boundary circles of an annulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    segments: Vec<PathSegment>,
    loops: Vec<Range<usize>>,
    closed: bool,
}

impl Contour {
    pub fn new(segments: Vec<PathSegment>) -> Result<Contour, GeometryError> {
        if segments.is_empty() {
            return Err(GeometryError::Empty);
        }
        for s in &segments {
            s.validate()?;
        }
        let scale = segments
            .iter()
            .map(PathSegment::bounding_extent)
            .fold(1.0, f64::max);
        let tol = JOIN_TOLERANCE * scale;
        let mut loops = Vec::new();
        let mut loop_start = 0;
        for k in 1..segments.len() {
            let end = segments[k - 1].end();
            if (end - segments[k].start()).norm() <= tol {
                continue;
            }
            if (end - segments[loop_start].start()).norm() <= tol {
                loops.push(loop_start..k);
                loop_start = k;
            } else {
                return Err(GeometryError::Discontinuous { index: k });
            }
        }
        let n = segments.len();
        let closed = (segments[n - 1].end() - segments[loop_start].start()).norm() <= tol;
        loops.push(loop_start..n);
        Ok(Contour {
            segments,
            loops,
            closed,
        })
    }

    pub fn circle(center: Complex, radius: f64) -> Result<Contour, GeometryError> {
        Contour::new(vec![PathSegment::circle(center, radius, Orientation::Ccw)])
    }

    /// Closed polygon through `vertices` in order.
    pub fn polygon(vertices: &[Complex]) -> Result<Contour, GeometryError> {
        if vertices.len() < 3 {
            return Err(invalid("polygon", "needs at least three vertices"));
        }
        let n = vertices.len();
        let segs = (0..n)
            .map(|k| PathSegment::segment(vertices[k], vertices[(k + 1) % n]))
            .collect();
        Contour::new(segs)
    }

    pub fn rectangle(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Contour, GeometryError> {
        if !(x_lo < x_hi && y_lo < y_hi) {
            return Err(invalid("rectangle", "requires x_lo < x_hi and y_lo < y_hi"));
        }
        Contour::polygon(&[
            Complex::new(x_lo, y_lo),
            Complex::new(x_hi, y_lo),
            Complex::new(x_hi, y_hi),
            Complex::new(x_lo, y_hi),
        ])
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    /// Index ranges of the loops making up the contour.
    pub fn loops(&self) -> &[Range<usize>] {
        &self.loops
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn require_closed(&self) -> Result<(), GeometryError> {
        if self.closed {
            Ok(())
        } else {
            Err(GeometryError::OpenContour)
        }
    }

    pub fn reversed(&self) -> Contour {
        let mut segments = Vec::with_capacity(self.segments.len());
        let mut loops = Vec::with_capacity(self.loops.len());
        for range in &self.loops {
            let start = segments.len();
            segments.extend(
                self.segments[range.clone()]
                    .iter()
                    .rev()
                    .map(PathSegment::reversed),
            );
            loops.push(start..segments.len());
        }
        Contour {
            segments,
            loops,
            closed: self.closed,
        }
    }

    pub fn translated(&self, shift: Complex) -> Contour {
        Contour {
            segments: self.segments.iter().map(|s| s.translated(shift)).collect(),
            loops: self.loops.clone(),
            closed: self.closed,
        }
    }

    /// Combined signed area of all loops (positive for counter-clockwise).
    pub fn signed_area(&self) -> f64 {
        self.segments
            .iter()
            .map(PathSegment::area_contribution)
            .sum()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(PathSegment::length).sum()
    }

    /// Rough size of the contour, used to scale default tolerances.
    pub fn scale(&self) -> f64 {
        self.segments
            .iter()
            .map(PathSegment::bounding_extent)
            .fold(0.0, f64::max)
            .max(1.0)
    }

    /// Default boundary tolerance, `1e-9·scale`.
    pub fn default_tolerance(&self) -> f64 {
        1e-9 * self.scale()
    }

    /// Index of the segment following `k` within its loop (wrapping).
    pub fn next_in_loop(&self, k: usize) -> usize {
        let range = self
            .loops
            .iter()
            .find(|r| r.contains(&k))
            .expect("segment index in range");
        if k + 1 == range.end {
            range.start
        } else {
            k + 1
        }
    }

    /// Index of the segment preceding `k` within its loop (wrapping).
    pub fn prev_in_loop(&self, k: usize) -> usize {
        let range = self
            .loops
            .iter()
            .find(|r| r.contains(&k))
            .expect("segment index in range");
        if k == range.start {
            range.end - 1
        } else {
            k - 1
        }
    }

    /// Nearest contour point to `p` as `(segment index, t, distance)`.
    pub fn nearest(&self, p: Complex) -> (usize, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for (k, s) in self.segments.iter().enumerate() {
            let (t, d) = s.nearest(p);
            if d < best.2 {
                best = (k, t, d);
            }
        }
        best
    }

    pub fn distance(&self, p: Complex) -> f64 {
        self.nearest(p).2
    }

    /// Signed crossing count of the ray `p + s`, `s ≥ 0`, with half-open
    /// treatment of vertices. For a closed contour this is the winding number.
    pub fn crossing_number(&self, p: Complex) -> i64 {
        let mut count = 0;
        for s in &self.segments {
            for piece in y_monotone_pieces(s) {
                count += crossing(&piece, p);
            }
        }
        count
    }
}

// Arcs split at the extreme points θ = ±π/2 (mod 2π) so each piece is
// monotone in y.
fn y_monotone_pieces(s: &PathSegment) -> Vec<PathSegment> {
    let Some((_, _, th0, sweep)) = s.as_arc() else {
        return vec![*s];
    };
    let th1 = th0 + sweep;
    let (lo, hi) = if sweep > 0.0 { (th0, th1) } else { (th1, th0) };
    let mut cuts = vec![0.0];
    let mut k = ((lo - PI / 2.0) / PI).floor() as i64 + 1;
    loop {
        let th = PI / 2.0 + k as f64 * PI;
        if th >= hi {
            break;
        }
        if th > lo {
            cuts.push((th - th0) / sweep);
        }
        k += 1;
    }
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| s.sub_segment(w[0], w[1]))
        .collect()
}

fn crossing(piece: &PathSegment, p: Complex) -> i64 {
    let z0 = piece.start();
    let z1 = piece.end();
    let (y0, y1) = (z0.im, z1.im);
    let upward = y0 <= p.im && p.im < y1;
    let downward = y1 <= p.im && p.im < y0;
    if !upward && !downward {
        return 0;
    }
    let x = match piece.as_arc() {
        None => z0.re + (p.im - y0) * (z1.re - z0.re) / (y1 - y0),
        Some((c, r, th0, sweep)) => {
            let s = ((p.im - c.im) / r).clamp(-1.0, 1.0);
            let half = (1.0 - s * s).sqrt() * r;
            if (th0 + 0.5 * sweep).cos() >= 0.0 {
                c.re + half
            } else {
                c.re - half
            }
        }
    };
    if x > p.re {
        if upward {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarDomain {
    Disc {
        center: Complex,
        radius: f64,
    },
    Annulus {
        center: Complex,
        inner: f64,
        outer: f64,
    },
    /// `inner ≤ |z − center| ≤ outer` and `phi_lo ≤ arg(z − center) ≤ phi_hi`.
    AnnularSector {
        center: Complex,
        inner: f64,
        outer: f64,
        phi_lo: f64,
        phi_hi: f64,
    },
    Rectangle {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
}

impl PlanarDomain {
    pub fn validate(&self) -> Result<(), GeometryError> {
        match *self {
            PlanarDomain::Disc { center, radius } => {
                if !finite(center) || !(radius > 0.0 && radius.is_finite()) {
                    return Err(invalid(
                        "radius",
                        "disc needs a finite center and positive radius",
                    ));
                }
            }
            PlanarDomain::Annulus {
                center,
                inner,
                outer,
            } => {
                if !finite(center) || !(0.0 <= inner && inner < outer && outer.is_finite()) {
                    return Err(invalid("radius", "annulus needs 0 ≤ inner < outer"));
                }
            }
            PlanarDomain::AnnularSector {
                center,
                inner,
                outer,
                phi_lo,
                phi_hi,
            } => {
                if !finite(center) || !(0.0 <= inner && inner < outer && outer.is_finite()) {
                    return Err(invalid("radius", "sector needs 0 ≤ inner < outer"));
                }
                if !(phi_lo < phi_hi && phi_hi <= phi_lo + TAU + 1e-12) {
                    return Err(invalid("phi", "sector needs phi_lo < phi_hi ≤ phi_lo + 2π"));
                }
            }
            PlanarDomain::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => {
                let all_finite = [x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite());
                if !all_finite || !(x_lo < x_hi && y_lo < y_hi) {
                    return Err(invalid("rectangle", "requires x_lo < x_hi and y_lo < y_hi"));
                }
            }
        }
        Ok(())
    }

    /// Positively oriented boundary (domain on the left).
    pub fn boundary(&self) -> Result<Contour, GeometryError> {
        self.validate()?;
        match *self {
            PlanarDomain::Disc { center, radius } => Contour::circle(center, radius),
            PlanarDomain::Annulus {
                center,
                inner,
                outer,
            } => {
                let mut segs = vec![PathSegment::circle(center, outer, Orientation::Ccw)];
                if inner > 0.0 {
                    segs.push(PathSegment::circle(center, inner, Orientation::Cw));
                }
                Contour::new(segs)
            }
            PlanarDomain::AnnularSector {
                center,
                inner,
                outer,
                phi_lo,
                phi_hi,
            } => {
                let ray = |phi: f64, r: f64| center + Complex::from_polar(r, phi);
                let mut segs = vec![PathSegment::arc(center, outer, phi_lo, phi_hi)];
                if inner > 0.0 {
                    segs.push(PathSegment::segment(ray(phi_hi, outer), ray(phi_hi, inner)));
                    segs.push(PathSegment::arc(center, inner, phi_hi, phi_lo));
                    segs.push(PathSegment::segment(ray(phi_lo, inner), ray(phi_lo, outer)));
                } else {
                    segs.push(PathSegment::segment(ray(phi_hi, outer), center));
                    segs.push(PathSegment::segment(center, ray(phi_lo, outer)));
                }
                Contour::new(segs)
            }
            PlanarDomain::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => Contour::rectangle(x_lo, x_hi, y_lo, y_hi),
        }
    }

    /// Closed-set membership test.
    pub fn contains(&self, p: Complex) -> bool {
        match *self {
            PlanarDomain::Disc { center, radius } => (p - center).norm() <= radius,
            PlanarDomain::Annulus {
                center,
                inner,
                outer,
            } => {
                let r = (p - center).norm();
                inner <= r && r <= outer
            }
            PlanarDomain::AnnularSector {
                center,
                inner,
                outer,
                phi_lo,
                phi_hi,
            } => {
                let w = p - center;
                let r = w.norm();
                if r < inner || r > outer {
                    return false;
                }
                if r == 0.0 {
                    return true;
                }
                let rel = (w.im.atan2(w.re) - phi_lo).rem_euclid(TAU);
                rel <= phi_hi - phi_lo
            }
            PlanarDomain::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => x_lo <= p.re && p.re <= x_hi && y_lo <= p.im && p.im <= y_hi,
        }
    }

    /// Open-set membership with a margin `tol` from the boundary.
    pub fn contains_strictly(&self, p: Complex, tol: f64) -> bool {
        if !self.contains(p) {
            return false;
        }
        match self.boundary() {
            Ok(c) => c.distance(p) > tol,
            Err(_) => false,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            PlanarDomain::Disc { radius, .. } => PI * radius * radius,
            PlanarDomain::Annulus { inner, outer, .. } => PI * (outer * outer - inner * inner),
            PlanarDomain::AnnularSector {
                inner,
                outer,
                phi_lo,
                phi_hi,
                ..
            } => 0.5 * (phi_hi - phi_lo) * (outer * outer - inner * inner),
            PlanarDomain::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => (x_hi - x_lo) * (y_hi - y_lo),
        }
    }

    pub fn scale(&self) -> f64 {
        match *self {
            PlanarDomain::Disc { center, radius } => center.norm() + radius,
            PlanarDomain::Annulus { center, outer, .. }
            | PlanarDomain::AnnularSector { center, outer, .. } => center.norm() + outer,
            PlanarDomain::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => x_lo.abs().max(x_hi.abs()).max(y_lo.abs()).max(y_hi.abs()),
        }
        .max(1.0)
    }
}

/// Sorted angles `φ₁ < … < φ_K` around `center`; sector `k` spans
/// `[φ_k, φ_{k+1}]` with `φ_{K+1} = φ₁ + 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition {
    center: Complex,
    angles: Vec<f64>,
}

impl SectorDecomposition {
    pub fn new(center: Complex, angles: Vec<f64>) -> Result<SectorDecomposition, GeometryError> {
        if angles.is_empty() {
            return Err(invalid("angles", "at least one angle is required"));
        }
        if !finite(center) || angles.iter().any(|a| !a.is_finite()) {
            return Err(invalid("angles", "angles and center must be finite"));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("angles", "angles must be strictly increasing"));
        }
        if angles[angles.len() - 1] >= angles[0] + TAU {
            return Err(invalid("angles", "angles must span less than a full turn"));
        }
        Ok(SectorDecomposition { center, angles })
    }

    /// The whole plane as a single sector starting at angle 0.
    pub fn whole(center: Complex) -> SectorDecomposition {
        SectorDecomposition {
            center,
            angles: vec![0.0],
        }
    }

    /// `k` equal sectors starting at `offset`.
    pub fn uniform(
        center: Complex,
        k: usize,
        offset: f64,
    ) -> Result<SectorDecomposition, GeometryError> {
        if k == 0 {
            return Err(invalid("angles", "at least one sector is required"));
        }
        let angles = (0..k).map(|j| offset + TAU * j as f64 / k as f64).collect();
        SectorDecomposition::new(center, angles)
    }

    pub fn center(&self) -> Complex {
        self.center
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Angular range `(φ_k, φ_{k+1})` of sector `k`.
    pub fn bounds(&self, k: usize) -> (f64, f64) {
        let lo = self.angles[k];
        let hi = if k + 1 < self.angles.len() {
            self.angles[k + 1]
        } else {
            self.angles[0] + TAU
        };
        (lo, hi)
    }

    pub fn width(&self, k: usize) -> f64 {
        let (lo, hi) = self.bounds(k);
        hi - lo
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.width(k)).collect()
    }

    pub fn bisector(&self, k: usize) -> f64 {
        let (lo, hi) = self.bounds(k);
        0.5 * (lo + hi)
    }

    pub fn translated(&self, shift: Complex) -> SectorDecomposition {
        SectorDecomposition {
            center: self.center + shift,
            angles: self.angles.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointLocation {
    Interior,
    Exterior,
    /// On the contour; `interior_angle` is the opening of the enclosed region
    /// between the one-sided tangents.
    Boundary {
        interior_angle: f64,
    },
}

/// Outer arc ccw, ray inward along `cut − gap`, inner arc cw, ray outward along
/// `cut + gap`. The enclosed slit annulus lies on the left throughout.
pub fn make_keyhole(
    center: Complex,
    outer: f64,
    inner: f64,
    cut_angle: f64,
    gap: f64,
) -> Result<Contour, GeometryError> {
    if !(inner > 0.0 && inner < outer && outer.is_finite()) {
        return Err(invalid("delta", "keyhole needs 0 < delta < R"));
    }
    if !(gap > 0.0 && gap < PI / 8.0) {
        return Err(invalid("gap", "keyhole needs 0 < gap < π/8"));
    }
    if !finite(center) || !cut_angle.is_finite() {
        return Err(invalid("center", "keyhole parameters must be finite"));
    }
    let lo = cut_angle + gap;
    let hi = cut_angle + TAU - gap;
    let ray = |phi: f64, r: f64| center + Complex::from_polar(r, phi);
    Contour::new(vec![
        PathSegment::arc(center, outer, lo, hi),
        PathSegment::segment(ray(hi, outer), ray(hi, inner)),
        PathSegment::arc(center, inner, hi, lo),
        PathSegment::segment(ray(lo, inner), ray(lo, outer)),
    ])
}

/// Classifies `p` relative to the closed contour `c`.
///
/// Points within `tol` of the contour are on the boundary; the reported angle
/// is measured on the side of the contour with nonzero winding number.
pub fn locate_point(c: &Contour, p: Complex, tol: f64) -> Result<PointLocation, GeometryError> {
    c.require_closed()?;
    if c.distance(p) <= tol {
        let b = crate::potential::boundary_geometry(c, p, tol);
        let interior_angle = if b.winding_left != 0 {
            b.alpha_left
        } else {
            TAU - b.alpha_left
        };
        return Ok(PointLocation::Boundary { interior_angle });
    }
    if c.crossing_number(p) != 0 {
        Ok(PointLocation::Interior)
    } else {
        Ok(PointLocation::Exterior)
    }
}
