//! Decreasingly-minimal elements of M-convex sets.
//!
//! The crate is organised bottom-up: [`setfn`] holds set-function oracles, [`mconvex`]
//! the generic dec-min engine, [`netflow`] flow primitives and flow-backed handles,
//! [`orient`] graph orientation solvers, and [`oracle`] brute-force ground truth.

pub mod error;
pub mod ext;
pub mod mconvex;
pub mod netflow;
pub mod oracle;
pub mod orient;
pub mod setfn;
pub mod subset;

pub use error::{Certificate, Error, Result};
pub use ext::ExtInt;
pub use mconvex::{BoxBounds, CanonicalDecomposition, IntVector, MConvexSet};
pub use setfn::{Class, ExplicitSetFunction, Kind, SetFunction, SharedFn};
pub use subset::{GroundSet, Subset};
