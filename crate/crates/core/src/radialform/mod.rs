//! Radial averaging of harmonic 1-forms: the eigen-identity `A w = mu_t w`
//! and the pointwise bound on `|dF|`.

mod average;
mod bound;
mod primitive;

pub use average::*;
pub use bound::*;
pub use primitive::*;

#[cfg(test)]
mod tests;
