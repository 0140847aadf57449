//! Exact construction and verification of nilpotent ideals in algebras graded
//! by finite groups and in algebras with finite soluble automorphism groups.

pub mod algebra;
mod big;
pub mod check;
pub mod factory;
pub mod grading;
pub mod group;
pub mod instance;
pub mod io;
pub mod linalg;
pub mod par;
pub mod pipeline;
pub mod tower;
