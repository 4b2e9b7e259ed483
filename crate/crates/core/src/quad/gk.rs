//! Adaptive Gauss–Kronrod (7/15) integration of complex-valued functions of a
//! real parameter.
//!
//! Subdivision is plain recursive bisection, so the summation order depends
//! only on the integrand and the tolerance.

use crate::Complex;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default recursion limit; 2⁻⁴⁰ of the interval is far below any useful
/// resolution.
pub const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex,
    pub error: f64,
    pub evaluations: usize,
    /// False when some subinterval hit the depth limit before meeting its
    /// share of the tolerance.
    pub converged: bool,
}

impl Estimate {
    pub fn zero() -> Estimate {
        Estimate {
            value: Complex::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    pub fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, k: Complex) -> Estimate {
        Estimate {
            value: self.value * k,
            error: self.error * k.norm(),
            ..self
        }
    }
}

// Returns the Kronrod value, |K − G|, and the Kronrod integral of |g| (the
// scale against which rounding error is judged).
fn rule<E>(
    g: &mut impl FnMut(f64) -> Result<Complex, E>,
    a: f64,
    b: f64,
) -> Result<(Complex, f64, f64), E> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let center = g(mid)?;
    let mut kronrod = center * WGK[7];
    let mut gauss = center * WG[3];
    let mut abs = center.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (lo, hi) = (g(mid - dx)?, g(mid + dx)?);
        let pair = lo + hi;
        kronrod += pair * WGK[j];
        abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let gs = gauss * half;
    let err = (k - gs).norm();
    Ok((
        k,
        if err.is_nan() { f64::INFINITY } else { err },
        abs * half.abs(),
    ))
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
    abs: f64,
    depth: u32,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by creation order so the refinement
    // sequence is reproducible.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Largest number of panels before giving up on the tolerance.
pub const MAX_PANELS: usize = 2000;

/// Integrates `g` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<E>(
    mut g: impl FnMut(f64) -> Result<Complex, E>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Estimate, E> {
    integrate_with_depth(&mut g, a, b, tol, MAX_DEPTH)
}

/// Globally adaptive bisection: the panel with the largest error estimate is
/// split until the summed estimate meets `tol`, panels reach `max_depth`, or
/// the panel budget is spent.
pub fn integrate_with_depth<E>(
    g: &mut impl FnMut(f64) -> Result<Complex, E>,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<Estimate, E> {
    if a == b {
        return Ok(Estimate::zero());
    }
    let (value, error, abs) = rule(g, a, b)?;
    let mut evaluations = 15;
    let mut seq = 0;
    let mut active = std::collections::BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    let mut total_error = error;
    let mut converged = true;
    active.push(Panel {
        a,
        b,
        value,
        error,
        abs,
        depth: 0,
        seq,
    });
    while total_error > tol {
        let Some(worst) = active.pop() else {
            break;
        };
        // Panels whose error is at rounding level cannot improve.
        if worst.error.is_finite() && worst.error <= 64.0 * f64::EPSILON * worst.abs {
            done.push(worst);
            continue;
        }
        if worst.depth >= max_depth || active.len() + done.len() + 2 > MAX_PANELS {
            converged = false;
            done.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le, la) = rule(g, worst.a, mid)?;
        let (rv, re, ra) = rule(g, mid, worst.b)?;
        evaluations += 30;
        total_error += le + re - worst.error;
        seq += 1;
        active.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
            abs: la,
            depth: worst.depth + 1,
            seq,
        });
        seq += 1;
        active.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
            abs: ra,
            depth: worst.depth + 1,
            seq,
        });
    }
    done.extend(active);
    done.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = Complex::new(0.0, 0.0);
    let mut error = 0.0;
    for p in &done {
        value += p.value;
        error += p.error;
    }
    if error > tol && converged {
        let floor = done
            .iter()
            .map(|p| 64.0 * f64::EPSILON * p.abs)
            .sum::<f64>();
        converged = error <= floor.max(tol);
    }
    Ok(Estimate {
        value,
        error,
        evaluations,
        converged,
    })
}
