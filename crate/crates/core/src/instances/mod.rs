//! Concrete instances: finite fields and vector spaces, finite sets,
//! quantales and modules over finite rings with involution.

pub mod catalog;
pub mod fdvect;
pub mod field;
pub mod finmod;
pub mod finset;
pub mod quantale;
