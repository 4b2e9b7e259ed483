//! Numerical engine for a generalized residue calculus in the complex plane.
//!
//! The crate covers contour potentials (winding numbers extended to boundary
//! points), classical and conjugate partial residues, sector-limit residues,
//! residues at infinity, and the principal / singular / total value split of
//! improper integrals, plus a harness that checks the resulting identities
//! numerically.

pub mod expr;
pub mod geometry;
pub mod identities;
pub mod improper;
pub mod potential;
pub mod quad;
pub mod residue;

/// The scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

pub use expr::{EvalError, Expr, Func, ParseError};
pub use geometry::{
    locate_point, make_keyhole, Contour, GeometryError, Orientation, PathSegment, PlanarDomain,
    PointLocation, SectorDecomposition,
};
pub use identities::{
    check_boundary_singularity_identity, check_keyhole_log, check_lemma_large_circle,
    check_lemma_small_circle, check_lemma_vt_sector, check_planar_residue_identity,
    check_vector_field_residues, classify_analyticity, AnalyticityClass, Classification,
    IdentityError, Side, Status, Term, VanishingDerivative, VerificationReport,
};
pub use improper::{
    jump_term, vp_1d, vt_1d, ExtendedComplex, ImproperError, ImproperResult, MatchedRow,
};
pub use potential::{
    potential_2d, potential_2d_with, potential_3d, BoundaryConvention, Potential, PotentialKind,
};
pub use quad::{
    integrate_area, integrate_path, vp_integrate_area, vp_integrate_path, ExcisedIntegral,
    ExcisionSpec, Limit, Measure, QuadError, QuadResult, RadiiSchedule,
};
pub use residue::{
    default_infinity_schedule, default_schedule, residue_at_infinity, residue_from_sectors,
    residue_small_circle, sector_limits, LimitPoint, ResidueAtInfinity, ResidueError,
    ResidueEstimate, ResiduePair, SectorLimit, SectorLimits,
};
