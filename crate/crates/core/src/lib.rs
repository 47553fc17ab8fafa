//! Exact arithmetic and certificate machinery for Edwards-curve group laws.

pub mod ffield;
pub mod identities;
pub mod mpoly;
pub mod cli;
pub mod curve;
