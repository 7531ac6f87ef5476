//! Duhamel map, Picard iteration and boundary-data determination.

pub mod boundary;
pub mod duhamel;
pub mod picard;
pub mod quadrature;
pub mod state;

pub use boundary::{boundary_fit, make_boundary, Family, FitResult};
pub use duhamel::{duhamel_map, DuhamelMap, DuhamelOutput};
pub use picard::{picard_iterate, picard_solve, picard_solve_full};
pub use state::{BoundaryData, FlowState, IterationMeta};
