//! Exact computations on Feynman graph hypersurfaces: graph families, the
//! first graph polynomial, primitive log divergence, determinant identities
//! for bordered symmetric matrices, point counts over prime fields and
//! Monte Carlo estimates of parametric periods.

#![allow(clippy::needless_range_loop)]

pub mod divergence;
pub mod exec;
pub mod families;
pub mod graph;
pub mod identities;
pub mod iso;
pub mod matrix;
pub mod period;
pub mod pointcount;
pub mod poly;
pub mod psi;

pub use exec::Exec;
pub use graph::{Graph, LoopTable};
pub use poly::{LinearForm, MPoly};
