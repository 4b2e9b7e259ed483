use std::sync::Arc;

use proptest::prelude::*;
use residuum_core::{residue_small_circle, Complex, Expr, RadiiSchedule, ResiduePair};

const TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

// (expression in w, residue pair at w = 0)
type Case = (&'static str, (f64, f64), (f64, f64));

const BASE: &[Case] = &[
    ("1/w", (1.0, 0.0), (0.0, 0.0)),
    ("1/conj(w)", (0.0, 0.0), (1.0, 0.0)),
    ("exp(w)/w", (1.0, 0.0), (0.0, 0.0)),
    ("1/w^2 + 2/w", (2.0, 0.0), (0.0, 0.0)),
    ("w*conj(w)/(w*conj(w)^2)", (0.0, 0.0), (1.0, 0.0)),
    ("conj(w)/w", (0.0, 0.0), (0.0, 0.0)),
    ("cos(w)/conj(w)", (0.0, 0.0), (1.0, 0.0)),
];

// The base function moved so its singular point sits at `s`.
fn shifted(src: &str, s: Complex) -> Expr {
    Expr::parse(&src.replace('w', "z")).unwrap().translate(-s)
}

fn residue(f: &Expr, at: Complex) -> ResiduePair {
    residue_small_circle(f, at, &RadiiSchedule::halving(0.1))
        .unwrap()
        .pair
}

fn pair(r: (f64, f64), s: (f64, f64)) -> ResiduePair {
    ResiduePair::new(c(r.0, r.1), c(s.0, s.1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn residues_are_linear(i in 0..BASE.len(), j in 0..BASE.len(), a in (-3.0f64..3.0, -3.0f64..3.0), b in (-3.0f64..3.0, -3.0f64..3.0)) {
        let (a, b) = (c(a.0, a.1), c(b.0, b.1));
        let at = c(0.25, -0.5);
        let (fi, fj) = (shifted(BASE[i].0, at), shifted(BASE[j].0, at));
        let combo = Expr::Add(
            Arc::new(Expr::Mul(Arc::new(Expr::constant(a)), Arc::new(fi.clone()))),
            Arc::new(Expr::Mul(Arc::new(Expr::constant(b)), Arc::new(fj.clone()))),
        );
        let lhs = residue(&combo, at);
        let rhs = residue(&fi, at).scale(a).add(residue(&fj, at).scale(b));
        prop_assert!(lhs.distance(&rhs) <= TOL * (1.0 + a.norm() + b.norm()), "{lhs:?} vs {rhs:?}");
    }

    #[test]
    fn residues_are_translation_invariant(i in 0..BASE.len(), s in (-5.0f64..5.0, -5.0f64..5.0)) {
        let s = c(s.0, s.1);
        let (src, r, st) = BASE[i];
        let at_origin = residue(&shifted(src, c(0.0, 0.0)), c(0.0, 0.0));
        let moved = residue(&shifted(src, s), s);
        prop_assert!(moved.distance(&at_origin) <= TOL, "{moved:?} vs {at_origin:?}");
        prop_assert!(at_origin.distance(&pair(r, st)) <= TOL);
    }
}
