use proptest::prelude::*;
use residuum_core::{vt_1d, Complex, Expr, RadiiSchedule};

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

// Antiderivatives singular at x = 0.
const ANTIDERIVATIVES: &[&str] = &[
    "log(z)",
    "1/z",
    "-1/z",
    "1/z^2 + 3*z",
    "log(z)*z + exp(z)",
    "2/z + log(z)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Every row of the matched table reproduces F(b) − F(a) to quadrature
    // accuracy, before any limit is taken.
    #[test]
    fn matched_radius_identity_holds_at_every_step(i in 0..ANTIDERIVATIVES.len(), a in 0.3f64..4.0, b in 0.3f64..4.0) {
        let f = Expr::parse(ANTIDERIVATIVES[i]).unwrap();
        let sched = RadiiSchedule::halving(0.2 * a.min(b));
        let r = vt_1d(&f, -a, b, &[0.0], &sched, TOL).unwrap();
        let exact = f.eval(c(b, 0.0)).unwrap() - f.eval(c(-a, 0.0)).unwrap();
        prop_assert!((r.vt - exact).norm() <= 1e-14 * (1.0 + exact.norm()));
        prop_assert_eq!(r.table.len(), sched.steps + 1);
        for row in &r.table {
            let allowed = (10.0 * TOL).max(row.error) * (1.0 + row.excised.norm() + row.jumps.norm());
            prop_assert!((row.total - exact).norm() <= allowed, "step {}: {} vs {}", row.step, row.total, exact);
            prop_assert!((row.excised + row.jumps - row.total).norm() <= 1e-15 * (1.0 + row.total.norm()));
        }
    }
}
