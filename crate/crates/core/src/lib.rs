//! Exact McKay quiver flows, cycle closures and toric cone data for abelian quotient singularities.

pub mod chambers;
pub mod check;
pub mod closure;
pub mod dd;
pub mod error;
pub mod flow;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod quiver;
pub mod scalar;
pub mod toric;
pub mod trees;

pub use closure::Configuration;
pub use error::{Error, Result};
pub use flow::{Flow, ZetaVector};
pub use lattice::LatticeBasis;
pub use quiver::{CyclicAction, GroupAction, Path, Quiver, SeqFlowExpr, Step};

/// Exact rational used throughout the domain API.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer used for flows and lattices.
pub type Int = num_bigint::BigInt;
