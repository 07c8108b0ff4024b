//! Planning library for three-phase paper production: jumbo lot-sizing,
//! jumbo-to-reel cutting and reel-to-sheet cutting, solved by column
//! generation over a shared master LP followed by relax-and-fix rounding.

pub mod instances;
pub mod master;
pub mod pricing;
pub mod planner;
