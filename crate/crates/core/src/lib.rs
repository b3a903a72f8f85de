//! Volutive categories: finite categories with a contravariant endofunctor
//! and a lax or strict unit, together with their hermitian objects, closed
//! monoidal sources and concrete instances.

pub mod closedmon;
pub mod equiv;
pub mod fincat;
pub mod instances;
pub mod report;
pub mod volutive;

pub use report::{ValidationReport, Violation};
