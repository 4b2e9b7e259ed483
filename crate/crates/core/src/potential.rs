//! Potential of a point with respect to a closed contour.
//!
//! Off the contour the potential is `i` times the total change of
//! `arg(z − p)` along the contour, i.e. `2πi` times the winding number. On the
//! contour the same accumulation is taken in the principal-value sense, which
//! yields `i` times the opening angle of the enclosed region at that point.
//!
//! Everything is computed in closed form per segment, so the interior and
//! exterior values are exact up to rounding.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::geometry::{Contour, GeometryError, PathSegment};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Interior,
    Exterior,
    BoundaryInteriorArc,
    BoundaryExteriorArc,
}

impl PotentialKind {
    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Interior => "Interior",
            PotentialKind::Exterior => "Exterior",
            PotentialKind::BoundaryInteriorArc => "BoundaryInteriorArc",
            PotentialKind::BoundaryExteriorArc => "BoundaryExteriorArc",
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            PotentialKind::BoundaryInteriorArc | PotentialKind::BoundaryExteriorArc
        )
    }
}

/// Which of the two one-sided values to report for a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryConvention {
    /// `iα`, with `α` the opening angle of the enclosed side.
    #[default]
    InteriorArc,
    /// `i(2π − α)`.
    ExteriorArc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub value: Complex,
    pub kind: PotentialKind,
    /// Winding number off the contour; on the contour, the winding number of
    /// the enclosed side.
    pub winding: i64,
    /// Opening angle of the enclosed side, for boundary points.
    pub interior_angle: Option<f64>,
    /// The value under the other boundary convention; the two always sum to
    /// `2πi` times the winding of the enclosed side.
    pub complement: Option<Complex>,
    /// Set when the winding number has magnitude two or more, which lies
    /// outside the interior/exterior dichotomy of simple contours.
    pub non_simple: bool,
}

fn arg(w: Complex) -> f64 {
    w.im.atan2(w.re)
}

// Increment of arg(z − p) along one segment. When `p` coincides with an
// endpoint, the limiting direction of z − p along the segment is used there.
fn segment_increment(seg: &PathSegment, p: Complex, p_at_start: bool, p_at_end: bool) -> f64 {
    match seg.as_arc() {
        None => {
            let u1 = if p_at_start {
                seg.tangent_start()
            } else {
                seg.start() - p
            };
            let u2 = if p_at_end {
                -seg.tangent_end()
            } else {
                seg.end() - p
            };
            arg(u2 / u1)
        }
        Some((center, radius, _, sweep)) => {
            let n = (sweep.abs() / FRAC_PI_2).ceil().max(1.0) as usize;
            let inside = !(p_at_start || p_at_end) && (p - center).norm() < radius * (1.0 - 1e-12);
            let mut total = 0.0;
            for j in 0..n {
                let piece = seg.sub_segment(j as f64 / n as f64, (j + 1) as f64 / n as f64);
                let u1 = if p_at_start && j == 0 {
                    piece.tangent_start()
                } else {
                    piece.start() - p
                };
                let u2 = if p_at_end && j + 1 == n {
                    -piece.tangent_end()
                } else {
                    piece.end() - p
                };
                let mut a = arg(u2 / u1);
                // Seen from inside the circle the argument turns monotonically
                // with the traversal, so the sign is known.
                if inside {
                    if sweep > 0.0 && a < 0.0 {
                        a += TAU;
                    } else if sweep < 0.0 && a > 0.0 {
                        a -= TAU;
                    }
                }
                total += a;
            }
            total
        }
    }
}

/// Total change of `arg(z − p)` along `c`; `p` must not lie on the contour.
pub fn accumulated_argument(c: &Contour, p: Complex) -> f64 {
    c.segments()
        .iter()
        .map(|s| segment_increment(s, p, false, false))
        .sum()
}

/// Local description of the contour at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BoundaryGeometry {
    pub point: Complex,
    /// Opening angle on the left of the direction of travel.
    pub alpha_left: f64,
    /// Principal value of the accumulated argument.
    pub principal_argument: f64,
    pub winding_left: i64,
    pub winding_right: i64,
}

pub(crate) fn boundary_geometry(c: &Contour, p: Complex, tol: f64) -> BoundaryGeometry {
    let segs = c.segments();
    let (k, t, _) = c.nearest(p);
    let mut q = segs[k].point(t);
    let junction = if (q - segs[k].start()).norm() <= tol {
        q = segs[k].start();
        Some((c.prev_in_loop(k), k))
    } else if (q - segs[k].end()).norm() <= tol {
        q = segs[k].end();
        Some((k, c.next_in_loop(k)))
    } else {
        None
    };
    let alpha_left = match junction {
        Some((i, o)) => PI - arg(segs[o].tangent_start() / segs[i].tangent_end()),
        None => PI,
    };

    let mut pv = 0.0;
    for s in segs {
        let at_start = (s.start() - q).norm() <= tol;
        let at_end = (s.end() - q).norm() <= tol;
        let (tj, dj) = s.nearest(q);
        if at_start || at_end || dj > tol {
            pv += segment_increment(s, q, at_start, at_end);
        } else {
            // The point sits inside this segment: split it there.
            pv += segment_increment(&s.sub_segment(0.0, tj), q, false, true);
            pv += segment_increment(&s.sub_segment(tj, 1.0), q, true, false);
        }
    }
    let winding_right = ((pv - alpha_left) / TAU).round() as i64;
    BoundaryGeometry {
        point: q,
        alpha_left,
        principal_argument: pv,
        winding_left: winding_right + 1,
        winding_right,
    }
}

/// Potential of `p` with respect to the closed contour `c`, reporting the
/// interior-arc value `iα` at boundary points.
pub fn potential_2d(c: &Contour, p: Complex, tol: f64) -> Result<Potential, GeometryError> {
    potential_2d_with(c, p, tol, BoundaryConvention::InteriorArc)
}

pub fn potential_2d_with(
    c: &Contour,
    p: Complex,
    tol: f64,
    convention: BoundaryConvention,
) -> Result<Potential, GeometryError> {
    c.require_closed()?;
    if c.distance(p) > tol {
        let acc = accumulated_argument(c, p);
        let winding = (acc / TAU).round() as i64;
        return Ok(Potential {
            value: Complex::new(0.0, acc),
            kind: if winding == 0 {
                PotentialKind::Exterior
            } else {
                PotentialKind::Interior
            },
            winding,
            interior_angle: None,
            complement: None,
            non_simple: winding.abs() >= 2,
        });
    }
    let b = boundary_geometry(c, p, tol);
    let (winding, alpha) = if b.winding_left != 0 {
        (b.winding_left, b.alpha_left)
    } else {
        (b.winding_right, TAU - b.alpha_left)
    };
    let inner = Complex::new(0.0, b.principal_argument);
    let outer = Complex::new(0.0, TAU * (b.winding_left + b.winding_right) as f64) - inner;
    let (value, complement, kind) = match convention {
        BoundaryConvention::InteriorArc => (inner, outer, PotentialKind::BoundaryInteriorArc),
        BoundaryConvention::ExteriorArc => (outer, inner, PotentialKind::BoundaryExteriorArc),
    };
    Ok(Potential {
        value,
        kind,
        winding,
        interior_angle: Some(alpha),
        complement: Some(complement),
        non_simple: b.winding_left.abs() >= 2 || b.winding_right.abs() >= 2,
    })
}

/// Potential with respect to a surface of revolution through the contour:
/// twice the planar value.
pub fn potential_3d(c: &Contour, p: Complex, tol: f64) -> Result<Complex, GeometryError> {
    Ok(2.0 * potential_2d(c, p, tol)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_keyhole, Orientation};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn unit_circle() -> Contour {
        Contour::circle(c(0.0, 0.0), 1.0).unwrap()
    }

    #[test]
    fn interior_and_exterior() {
        let p = potential_2d(&unit_circle(), c(0.0, 0.0), 1e-9).unwrap();
        assert_eq!(p.kind, PotentialKind::Interior);
        assert_eq!(p.winding, 1);
        assert!((p.value - c(0.0, TAU)).norm() < 1e-12);
        let p = potential_2d(&unit_circle(), c(3.0, 0.0), 1e-9).unwrap();
        assert_eq!(p.kind, PotentialKind::Exterior);
        assert!(p.value.norm() < 1e-12);
    }

    #[test]
    fn points_inside_an_arc_lens() {
        // Close to the circle from inside, where a chord-only rule would fail.
        for k in 0..64 {
            let th = k as f64 * TAU / 64.0 + 0.013;
            let p = Complex::from_polar(1.0 - 1e-6, th);
            let v = potential_2d(&unit_circle(), p, 1e-9).unwrap();
            assert!((v.value - c(0.0, TAU)).norm() < 1e-12);
            let cw =
                Contour::new(vec![PathSegment::circle(c(0.0, 0.0), 1.0, Orientation::Cw)]).unwrap();
            let v = potential_2d(&cw, p, 1e-9).unwrap();
            assert!((v.value + c(0.0, TAU)).norm() < 1e-12);
        }
    }

    #[test]
    fn smooth_boundary_point() {
        let p = potential_2d(&unit_circle(), c(1.0, 0.0), 1e-9).unwrap();
        assert_eq!(p.kind, PotentialKind::BoundaryInteriorArc);
        assert!((p.value - c(0.0, PI)).norm() < 1e-12);
        assert!(
            (potential_3d(&unit_circle(), c(1.0, 0.0), 1e-9).unwrap() - c(0.0, TAU)).norm() < 1e-12
        );
        let q = potential_2d(&unit_circle(), Complex::from_polar(1.0, 2.0), 1e-9).unwrap();
        assert!((q.value - c(0.0, PI)).norm() < 1e-12);
    }

    #[test]
    fn square_corner() {
        let sq = Contour::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let p = potential_2d(&sq, c(1.0, 1.0), 1e-9).unwrap();
        assert!((p.value - c(0.0, FRAC_PI_2)).norm() < 1e-12);
        assert!((p.value + p.complement.unwrap() - c(0.0, TAU)).norm() < 1e-12);
        let e = potential_2d_with(&sq, c(1.0, 1.0), 1e-9, BoundaryConvention::ExteriorArc).unwrap();
        assert_eq!(e.kind, PotentialKind::BoundaryExteriorArc);
        assert!((e.value - c(0.0, 1.5 * PI)).norm() < 1e-12);
        let mid = potential_2d(&sq, c(0.5, 0.0), 1e-9).unwrap();
        assert!((mid.value - c(0.0, PI)).norm() < 1e-12);
    }

    #[test]
    fn reversal_negates() {
        let k = make_keyhole(c(0.0, 0.0), 1.0, 0.1, PI, 0.01).unwrap();
        for p in [c(0.5, 0.3), c(-0.5, 0.0), c(0.05, 0.0), c(2.0, 1.0)] {
            let a = potential_2d(&k, p, 1e-9).unwrap().value;
            let b = potential_2d(&k.reversed(), p, 1e-9).unwrap().value;
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn annulus_boundary_counts_both_loops() {
        let a = crate::geometry::PlanarDomain::Annulus {
            center: c(0.0, 0.0),
            inner: 0.5,
            outer: 1.0,
        };
        let b = a.boundary().unwrap();
        assert_eq!(potential_2d(&b, c(0.75, 0.0), 1e-9).unwrap().winding, 1);
        assert_eq!(potential_2d(&b, c(0.1, 0.0), 1e-9).unwrap().winding, 0);
        let on_inner = potential_2d(&b, c(0.0, 0.5), 1e-9).unwrap();
        assert!((on_inner.value - c(0.0, PI)).norm() < 1e-12);
    }

    #[test]
    fn double_loop_is_flagged() {
        let twice = Contour::new(vec![
            PathSegment::circle(c(0.0, 0.0), 1.0, Orientation::Ccw),
            PathSegment::circle(c(0.0, 0.0), 1.0, Orientation::Ccw),
        ])
        .unwrap();
        let p = potential_2d(&twice, c(0.2, 0.0), 1e-9).unwrap();
        assert_eq!(p.winding, 2);
        assert!(p.non_simple);
    }

    #[test]
    fn open_contour_is_rejected() {
        let open = Contour::new(vec![PathSegment::segment(c(0.0, 0.0), c(1.0, 0.0))]).unwrap();
        assert_eq!(
            potential_2d(&open, c(0.5, 1.0), 1e-9),
            Err(GeometryError::OpenContour)
        );
    }
}
