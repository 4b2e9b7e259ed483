//! Benchmark fixtures shared by the criterion benches.

use residuum_core::{Complex, Contour, Expr};

pub fn expr(src: &str) -> Expr {
    Expr::parse(src).expect("benchmark expressions parse")
}

pub fn unit_circle() -> Contour {
    Contour::circle(Complex::new(0.0, 0.0), 1.0).expect("unit circle is valid")
}
