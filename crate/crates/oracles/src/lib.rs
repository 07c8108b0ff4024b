//! Independent reference computations for tests. Nothing here calls into the
//! code paths it is used to check.

pub mod patterns;
pub mod plan;
pub mod random;
pub mod solver;
