//! Exact-arithmetic engine for maximally graded matrix factorizations of
//! invertible polynomials of chain type.
//!
//! The crate builds, over the rationals:
//!
//! - the maximal grading group `L_n` of a chain polynomial
//!   `f_n = x_1^{a_1} + x_1 x_2^{a_2} + … + x_{n-1} x_n^{a_n}`, presented by
//!   generators and relations and canonicalized by Smith normal form
//!   ([`grading`]);
//! - the `L_n`-graded polynomial ring with enumeration of its
//!   finite-dimensional graded components ([`poly`]);
//! - graded matrix factorizations of `f_n` with shift, twist, cone, tensor
//!   and Hom spaces in the homotopy category, all by exact linear algebra
//!   ([`mf`]);
//! - the inductive exceptional collection `E^n` together with the
//!   verification suites for exceptionality, strongness, semi-orthogonality,
//!   Serre duality and the structural triangle ([`collection`]);
//! - the quiver with relations presenting the endomorphism algebra of the
//!   tilting object, with DOT and JSON export ([`quiver`]).
//!
//! No floating point is used anywhere: scalars are arbitrary-precision
//! integers and rationals, so every reported dimension is exact.

pub mod collection;
pub mod error;
pub mod grading;
pub mod linalg;
pub mod mf;
pub mod poly;
pub mod quiver;
pub mod report;

pub use collection::{ChainTower, Collection, ExceptionalObject};
pub use error::Error;
pub use grading::{GradedGroup, GroupElement, GroupPresentation};
pub use linalg::{Int, Rat};
pub use mf::{HomSpace, MatrixFactorization, MfMorphism, PolyMat};
pub use poly::{Monomial, Poly, RingCtx};
pub use quiver::{Quiver, RelationSet};
pub use report::CheckReport;

/// Version stamp carried by every serialized artifact.
pub const SCHEMA_VERSION: u32 = 1;
