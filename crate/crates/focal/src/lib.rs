//! Exact derivation and numeric tracing of multifocal curves.
//!
//! A multifocal curve is the set of points whose weighted distances to a
//! handful of foci (and, optionally, signed distances to directrix lines)
//! satisfy a linear relation `sum c_i * sqrt(Q_i) = P`. Squaring such a
//! relation repeatedly eliminates the radicals and yields a single implicit
//! polynomial, but the polynomial's zero set is strictly larger than the
//! original locus: every squaring step admits sign flips that introduce
//! phantom branches. This crate keeps both halves of the answer:
//!
//! * [`eliminate`](eliminate::eliminate) produces the implicit polynomial
//!   together with the ordered polynomial inequalities that carve the true
//!   locus out of its Zariski closure, and
//! * [`trace`](trace) extracts the curve numerically on a grid window,
//!   filtering marching-squares output through those inequalities and
//!   through the defining radical relation itself.
//!
//! The [`oracle`](oracle) module re-derives curve points by brute force from
//! the distance relation alone, sharing no code with the symbolic path, so
//! the two routes can be checked against each other.

pub mod eliminate;
pub mod families;
pub mod oracle;
pub mod poly2;
pub mod scene;
pub mod trace;

pub use eliminate::{
    classify_point, eliminate, eliminate_closure, Constraint, DerivedCurve, EliminateError,
    PointClass, RadicalEquation, Sense,
};
pub use families::{FamilyError, FamilyInstance, OvalBranch};
pub use oracle::{oracle_points, verify_derivation, OracleError, OraclePointSet, VerifyReport};
pub use poly2::{Poly2, PolyError, Rational};
pub use scene::{Directrix, FocalScene, Focus, SceneError};
pub use trace::{hausdorff, trace_implicit, trace_residual, ArcSet, Polyline, TraceError, Window};
