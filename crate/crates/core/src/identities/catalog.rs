//! Fixed test functions for the planar residue identity.
//!
//! The list is versioned: entries are only appended, and any change to an
//! existing entry bumps [`CATALOG_VERSION`].

use std::f64::consts::PI;

use crate::expr::Expr;
use crate::geometry::{Contour, GeometryError, PlanarDomain};
use crate::Complex;

pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Rational,
    ConjugatePolynomial,
    Mixed,
    Logarithm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub expression: &'static str,
    pub family: Family,
    pub domain: PlanarDomain,
    /// Singular points inside the domain.
    pub singular: &'static [(f64, f64)],
}

impl CatalogEntry {
    pub fn expr(&self) -> Expr {
        Expr::parse(self.expression).expect("catalog expressions parse")
    }

    pub fn contour(&self) -> Result<Contour, GeometryError> {
        self.domain.boundary()
    }

    pub fn singular_points(&self) -> Vec<Complex> {
        self.singular
            .iter()
            .map(|&(x, y)| Complex::new(x, y))
            .collect()
    }

    /// True when `∂f/∂z̄` is not identically zero.
    pub fn has_area_term(&self) -> bool {
        !self.expr().wirtinger_dzbar().is_zero()
    }
}

const ORIGIN: Complex = Complex::new(0.0, 0.0);
const UNIT_DISC: PlanarDomain = PlanarDomain::Disc {
    center: ORIGIN,
    radius: 1.0,
};

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "simple_pole",
        expression: "1/z",
        family: Family::Rational,
        domain: UNIT_DISC,
        singular: &[(0.0, 0.0)],
    },
    CatalogEntry {
        name: "shifted_pole",
        expression: "2/(z-0.3-0.2*i)",
        family: Family::Rational,
        domain: UNIT_DISC,
        singular: &[(0.3, 0.2)],
    },
    CatalogEntry {
        name: "conjugate_pole_pair",
        expression: "1/(z^2+0.25)",
        family: Family::Rational,
        domain: UNIT_DISC,
        singular: &[(0.0, 0.5), (0.0, -0.5)],
    },
    CatalogEntry {
        name: "three_poles",
        expression: "z^2/((z-0.5)*(z+0.5)*(z-0.5*i))",
        family: Family::Rational,
        domain: PlanarDomain::Rectangle {
            x_lo: -1.0,
            x_hi: 1.0,
            y_lo: -1.0,
            y_hi: 1.0,
        },
        singular: &[(0.5, 0.0), (-0.5, 0.0), (0.0, 0.5)],
    },
    CatalogEntry {
        name: "double_and_simple_pole",
        expression: "1/z^2 + 3/(z-0.4)",
        family: Family::Rational,
        domain: UNIT_DISC,
        singular: &[(0.0, 0.0), (0.4, 0.0)],
    },
    CatalogEntry {
        name: "conjugate_linear",
        expression: "conj(z)",
        family: Family::ConjugatePolynomial,
        domain: UNIT_DISC,
        singular: &[],
    },
    CatalogEntry {
        name: "conjugate_cubic",
        expression: "conj(z)^3 - 2*conj(z) + 1",
        family: Family::ConjugatePolynomial,
        domain: PlanarDomain::Rectangle {
            x_lo: -0.5,
            x_hi: 1.0,
            y_lo: -1.0,
            y_hi: 0.5,
        },
        singular: &[],
    },
    CatalogEntry {
        name: "modulus_squared_ring",
        expression: "z*conj(z)",
        family: Family::Mixed,
        domain: PlanarDomain::Annulus {
            center: ORIGIN,
            inner: 0.5,
            outer: 1.5,
        },
        singular: &[],
    },
    CatalogEntry {
        name: "modulus_over_pole",
        expression: "z*conj(z)/(z-0.2)",
        family: Family::Mixed,
        domain: UNIT_DISC,
        singular: &[(0.2, 0.0)],
    },
    CatalogEntry {
        name: "exponential_pole_plus_conjugate",
        expression: "exp(z)/(z-0.5) + conj(z)^2*z",
        family: Family::Mixed,
        domain: UNIT_DISC,
        singular: &[(0.5, 0.0)],
    },
    CatalogEntry {
        name: "log_keyhole",
        expression: "log(z)",
        family: Family::Logarithm,
        domain: PlanarDomain::AnnularSector {
            center: ORIGIN,
            inner: 0.1,
            outer: 1.0,
            phi_lo: PI + 1e-3,
            phi_hi: 3.0 * PI - 1e-3,
        },
        singular: &[],
    },
    CatalogEntry {
        name: "log_modulus_ring",
        expression: "log(z*conj(z))",
        family: Family::Logarithm,
        domain: PlanarDomain::Annulus {
            center: ORIGIN,
            inner: 0.25,
            outer: 1.0,
        },
        singular: &[],
    },
];

pub fn entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}
