//! Exact-arithmetic engine for left-invariant exterior differential algebras
//! on finite Weyl groups: quadratic, quartic and Woronowicz versions, their
//! Hilbert series and first cohomology, and the identities among flat
//! connections.

mod braid;
pub mod cache;
pub mod calculus;
pub mod connections;
pub mod linalg;
pub mod ncalg;
pub mod report;
pub mod weyl;

pub use calculus::{build_quad_algebra, build_quar_algebra, build_woronowicz_handle};
pub use linalg::Rational;
pub use ncalg::{AlgebraHandle, AlgebraKind, Monomial, NCPoly, ResourceCaps};
pub use weyl::{RootSystem, RootSystemType};
