pub mod burnside;
pub mod cellspace;
pub mod error;
pub mod euler;
pub mod group;
pub mod gset;
pub mod motivic;
pub mod powerstruct;
pub mod verify;

/// Exact integer coefficients.
pub type Int = i128;
