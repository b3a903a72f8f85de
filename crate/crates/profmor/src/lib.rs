//! Profunctors between finite categories, their local volutive structure,
//! and the Morita bicategory of finite-dimensional F₂-algebras.

pub mod f2;
pub mod herm;
pub mod local;
pub mod morita;
pub mod prof;
