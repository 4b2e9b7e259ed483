//! The shipped verification suite.
//!
//! Cases are listed in a fixed order. Each case declares whether its
//! precondition is expected to hold; a case whose precondition fails on
//! purpose is expected to come back [`Status::NotApplicable`].

use std::f64::consts::PI;

use super::catalog::CATALOG;
use super::{
    check_boundary_singularity_identity, check_keyhole_log, check_lemma_large_circle,
    check_lemma_small_circle, check_lemma_vt_sector, check_planar_residue_identity,
    check_vector_field_residues, IdentityError, Status, VerificationReport,
};
use crate::expr::Expr;
use crate::geometry::{PlanarDomain, SectorDecomposition};
use crate::quad::RadiiSchedule;
use crate::Complex;

pub const PLANAR_TOL: f64 = 1e-6;
pub const LEMMA_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    NotApplicable,
}

impl Expectation {
    pub fn name(self) -> &'static str {
        match self {
            Expectation::Pass => "pass",
            Expectation::NotApplicable => "not_applicable",
        }
    }

    pub fn met_by(self, status: Status) -> bool {
        matches!(
            (self, status),
            (Expectation::Pass, Status::Pass) | (Expectation::NotApplicable, Status::NotApplicable)
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub name: String,
    pub group: &'static str,
    pub expect: Expectation,
    run: CaseKind,
}

#[derive(Debug, Clone)]
enum CaseKind {
    Planar(usize),
    Boundary {
        f: &'static str,
        boundary: &'static [(f64, f64)],
        interior: &'static [(f64, f64)],
    },
    Keyhole,
    Vector {
        p: &'static str,
        q: &'static str,
    },
    SmallCircle {
        f: &'static str,
        center: (f64, f64),
        angles: &'static [f64],
        ratio: f64,
    },
    LargeCircle {
        f: &'static str,
        center: (f64, f64),
        angles: &'static [f64],
        sing: &'static [(f64, f64)],
    },
    VtSector {
        f: &'static str,
        angles: &'static [f64],
        sing: &'static [(f64, f64)],
        r0: f64,
    },
}

pub const GROUPS: &[&str] = &["planar", "boundary", "keyhole", "vector", "lemmas"];

fn e(s: &str) -> Expr {
    Expr::parse(s).expect("suite expressions parse")
}

fn pts(v: &[(f64, f64)]) -> Vec<Complex> {
    v.iter().map(|&(x, y)| Complex::new(x, y)).collect()
}

fn c(p: (f64, f64)) -> Complex {
    Complex::new(p.0, p.1)
}

impl SuiteCase {
    fn new(
        name: impl Into<String>,
        group: &'static str,
        expect: Expectation,
        run: CaseKind,
    ) -> SuiteCase {
        SuiteCase {
            name: name.into(),
            group,
            expect,
            run,
        }
    }

    /// Runs the case. Each report is renamed `case/report`.
    pub fn run(&self) -> Result<Vec<VerificationReport>, IdentityError> {
        let unit = PlanarDomain::Disc {
            center: Complex::new(0.0, 0.0),
            radius: 1.0,
        };
        let mut reports = match &self.run {
            CaseKind::Planar(i) => {
                let entry = &CATALOG[*i];
                let r = check_planar_residue_identity(
                    &entry.expr(),
                    &entry.contour()?,
                    &entry.domain,
                    &entry.singular_points(),
                    PLANAR_TOL,
                )?;
                vec![r]
            }
            CaseKind::Boundary {
                f,
                boundary,
                interior,
            } => vec![check_boundary_singularity_identity(
                &e(f),
                &unit.boundary()?,
                &unit,
                &pts(interior),
                &pts(boundary),
                PLANAR_TOL,
            )?],
            CaseKind::Keyhole => {
                check_keyhole_log(1.0, &RadiiSchedule::halving(0.25), 1e-9, PLANAR_TOL)?
            }
            CaseKind::Vector { p, q } => vec![check_vector_field_residues(
                &e(p),
                &e(q),
                Complex::new(0.0, 0.0),
                &RadiiSchedule::halving(0.1),
                PLANAR_TOL,
            )?],
            CaseKind::SmallCircle {
                f,
                center,
                angles,
                ratio,
            } => {
                let d = SectorDecomposition::new(c(*center), angles.to_vec())?;
                let s = RadiiSchedule::new(0.1, *ratio, if *ratio < 0.5 { 10 } else { 8 })?;
                vec![check_lemma_small_circle(&e(f), &d, &s, LEMMA_TOL)?]
            }
            CaseKind::LargeCircle {
                f,
                center,
                angles,
                sing,
            } => {
                let d = SectorDecomposition::new(c(*center), angles.to_vec())?;
                vec![check_lemma_large_circle(
                    &e(f),
                    &d,
                    &pts(sing),
                    &RadiiSchedule::halving(0.1),
                    LEMMA_TOL,
                )?]
            }
            CaseKind::VtSector {
                f,
                angles,
                sing,
                r0,
            } => {
                let d = SectorDecomposition::new(Complex::new(0.0, 0.0), angles.to_vec())?;
                vec![check_lemma_vt_sector(
                    &e(f),
                    &d,
                    &pts(sing),
                    &RadiiSchedule::halving(1.0 / r0),
                    &RadiiSchedule::halving(0.1),
                    LEMMA_TOL,
                )?]
            }
        };
        for r in &mut reports {
            r.name = format!("{}/{}", self.name, r.name);
        }
        Ok(reports)
    }
}

/// Every case of the shipped suite, in declaration order.
pub fn all_cases() -> Vec<SuiteCase> {
    use CaseKind::*;
    use Expectation::{NotApplicable as Na, Pass};
    let mut v: Vec<SuiteCase> = CATALOG
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            SuiteCase::new(format!("planar.{}", entry.name), "planar", Pass, Planar(i))
        })
        .collect();
    v.push(SuiteCase::new(
        "boundary.half_residue",
        "boundary",
        Pass,
        Boundary {
            f: "1/(z-1)",
            boundary: &[(1.0, 0.0)],
            interior: &[],
        },
    ));
    v.push(SuiteCase::new(
        "boundary.partial_fractions",
        "boundary",
        Pass,
        Boundary {
            f: "1/((z-1)*(z+2))",
            boundary: &[(1.0, 0.0)],
            interior: &[],
        },
    ));
    v.push(SuiteCase::new(
        "boundary.degenerate",
        "boundary",
        Pass,
        Boundary {
            f: "1/z",
            boundary: &[],
            interior: &[(0.0, 0.0)],
        },
    ));
    v.push(SuiteCase::new("keyhole.log", "keyhole", Pass, Keyhole));
    v.push(SuiteCase::new(
        "vector.holomorphic_pole",
        "vector",
        Pass,
        Vector { p: "1/z", q: "0" },
    ));
    v.push(SuiteCase::new(
        "vector.conjugate_pole",
        "vector",
        Pass,
        Vector {
            p: "0",
            q: "1/conj(z)",
        },
    ));
    v.push(SuiteCase::new(
        "vector.both",
        "vector",
        Pass,
        Vector { p: "1/z", q: "1/z" },
    ));
    v.push(SuiteCase::new(
        "lemmas.large_circle.shifted_pole",
        "lemmas",
        Pass,
        LargeCircle {
            f: "1/(z-0.3-0.2*i)",
            center: (0.3, 0.2),
            angles: &[0.4, 2.5],
            sing: &[(0.3, 0.2)],
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.large_circle.exp_right_half",
        "lemmas",
        Na,
        LargeCircle {
            f: "exp(-z)/z",
            center: (0.0, 0.0),
            angles: &[-PI / 2.0, PI / 2.0],
            sing: &[(0.0, 0.0)],
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.large_circle.double_pole",
        "lemmas",
        Pass,
        LargeCircle {
            f: "1/z^2",
            center: (0.0, 0.0),
            angles: &[0.0, PI],
            sing: &[(0.0, 0.0)],
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.small_circle.pole",
        "lemmas",
        Pass,
        SmallCircle {
            f: "1/z",
            center: (0.0, 0.0),
            angles: &[0.0, PI],
            ratio: 0.5,
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.small_circle.regular",
        "lemmas",
        Pass,
        SmallCircle {
            f: "z",
            center: (0.0, 0.0),
            angles: &[0.0, PI],
            ratio: 0.5,
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.small_circle.log",
        "lemmas",
        Pass,
        SmallCircle {
            f: "log(z)",
            center: (0.0, 0.0),
            angles: &[PI / 2.0, 3.0 * PI / 2.0],
            ratio: 0.25,
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.small_circle.single_sector",
        "lemmas",
        Pass,
        SmallCircle {
            f: "1/(z-0.2-0.1*i)",
            center: (0.2, 0.1),
            angles: &[0.0],
            ratio: 0.5,
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.vt_sector.half_plane",
        "lemmas",
        Pass,
        VtSector {
            f: "1/(z^2+1)",
            angles: &[-PI, 0.0],
            sing: &[(0.0, 1.0), (0.0, -1.0)],
            r0: 4.0,
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.vt_sector.partial_fractions",
        "lemmas",
        Pass,
        VtSector {
            f: "1/((z-i)*(z+2*i))",
            angles: &[-PI, 0.0],
            sing: &[(0.0, 1.0), (0.0, -2.0)],
            r0: 8.0,
        },
    ));
    v.push(SuiteCase::new(
        "lemmas.vt_sector.linear",
        "lemmas",
        Na,
        VtSector {
            f: "z",
            angles: &[-PI, 0.0],
            sing: &[],
            r0: 4.0,
        },
    ));
    v
}

/// Cases selected by `name`: `all`, a group name, or a single case name.
pub fn cases(selector: &str) -> Option<Vec<SuiteCase>> {
    let all = all_cases();
    if selector == "all" {
        return Some(all);
    }
    if GROUPS.contains(&selector) {
        return Some(all.into_iter().filter(|c| c.group == selector).collect());
    }
    let one: Vec<SuiteCase> = all.into_iter().filter(|c| c.name == selector).collect();
    (!one.is_empty()).then_some(one)
}
