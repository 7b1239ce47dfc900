//! Skeleton-stabilized divergence-conforming B-spline discretization of the
//! 2D incompressible Navier-Stokes equations.
//!
//! The velocity is sought in a Raviart-Thomas-like pair of spline spaces whose
//! divergence lands exactly in the pressure space, so discrete solutions are
//! pointwise divergence free. Advection is stabilized by penalizing jumps of
//! high-order normal derivatives across interior facets, tangential boundary
//! data is imposed with Nitsche's method, and the normal trace is imposed
//! strongly.

// Negated comparisons deliberately reject NaN; indexed loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bspline;
pub mod cases;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod mesh;
pub mod output;
pub mod solver;
pub mod space;

pub use bspline::{BasisEval, KnotVector};
pub use error::{Error, Result};
pub use forms::{AssembledSystem, StabParams, WallBc};
pub use mesh::{CartesianMesh, Facet, QuadratureRule};
pub use space::{DivConformingPair, StateVector};
