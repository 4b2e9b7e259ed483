use proptest::prelude::*;
use residuum_core::{integrate_path, Complex, Contour, Expr, Measure, PathSegment};

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

// Entire integrands, so any path is admissible.
fn integrand() -> impl Strategy<Value = Expr> {
    prop::sample::select(vec![
        "z^3 - 2*z + 1",
        "exp(z)",
        "conj(z)*z",
        "sin(z)*conj(z)^2",
        "cos(conj(z))",
    ])
    .prop_map(|s| Expr::parse(s).unwrap())
}

fn measure() -> impl Strategy<Value = Measure> {
    prop_oneof![Just(Measure::Dz), Just(Measure::Dzbar)]
}

fn point() -> impl Strategy<Value = Complex> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversing_a_segment_negates_the_integral(f in integrand(), a in point(), b in point(), m in measure()) {
        prop_assume!((b - a).norm() > 1e-3);
        let fwd = integrate_path(&f, &[PathSegment::segment(a, b)], m, TOL).unwrap();
        let back = integrate_path(&f, &[PathSegment::segment(b, a)], m, TOL).unwrap();
        let scale = 1.0 + fwd.value.norm();
        prop_assert!((back.value + fwd.value).norm() <= 2.0 * TOL * scale, "{:?} vs {:?}", back.value, fwd.value);
    }

    #[test]
    fn splitting_a_segment_is_additive(f in integrand(), a in point(), b in point(), t in 0.05f64..0.95, m in measure()) {
        prop_assume!((b - a).norm() > 1e-3);
        let mid = a + (b - a) * t;
        let whole = integrate_path(&f, &[PathSegment::segment(a, b)], m, TOL).unwrap();
        let parts = integrate_path(&f, &[PathSegment::segment(a, mid), PathSegment::segment(mid, b)], m, TOL).unwrap();
        let scale = 1.0 + whole.value.norm();
        prop_assert!((whole.value - parts.value).norm() <= 2.0 * TOL * scale);
    }

    #[test]
    fn splitting_an_arc_is_additive(f in integrand(), r in 0.2f64..2.0, t0 in -3.0f64..3.0, sweep in 0.2f64..6.0, s in 0.1f64..0.9) {
        let o = c(0.1, -0.2);
        let t1 = t0 + sweep;
        let tm = t0 + s * sweep;
        for m in [Measure::Dz, Measure::Dzbar] {
            let whole = integrate_path(&f, &[PathSegment::arc(o, r, t0, t1)], m, TOL).unwrap();
            let parts = integrate_path(&f, &[PathSegment::arc(o, r, t0, tm), PathSegment::arc(o, r, tm, t1)], m, TOL).unwrap();
            let scale = 1.0 + whole.value.norm();
            prop_assert!((whole.value - parts.value).norm() <= 2.0 * TOL * scale);
        }
    }

    #[test]
    fn reversed_contour_negates_the_loop_integral(f in integrand(), x0 in -1.0f64..0.0, y0 in -1.0f64..0.0, w in 0.2f64..1.5, h in 0.2f64..1.5) {
        let k = Contour::rectangle(x0, x0 + w, y0, y0 + h).unwrap();
        for m in [Measure::Dz, Measure::Dzbar] {
            let fwd = integrate_path(&f, &k, m, TOL).unwrap();
            let back = integrate_path(&f, &k.reversed(), m, TOL).unwrap();
            let scale = 1.0 + fwd.value.norm();
            prop_assert!((fwd.value + back.value).norm() <= 2.0 * TOL * scale);
        }
    }
}

#[test]
fn circle_orientation_signs() {
    let f = Expr::parse("1/z").unwrap();
    let ccw = integrate_path(
        &f,
        &Contour::circle(c(0.0, 0.0), 1.0).unwrap(),
        Measure::Dz,
        TOL,
    )
    .unwrap();
    let cw = integrate_path(
        &f,
        &Contour::circle(c(0.0, 0.0), 1.0).unwrap().reversed(),
        Measure::Dz,
        TOL,
    )
    .unwrap();
    assert!((ccw.value - c(0.0, std::f64::consts::TAU)).norm() < 1e-12);
    assert!((cw.value + ccw.value).norm() < 2.0 * TOL);
}
