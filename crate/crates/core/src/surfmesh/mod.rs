//! Triangulated genus-2 surface, discrete exterior calculus and harmonic 1-forms.

mod build;
mod dec;
mod io;
mod locate;

pub use build::*;
pub use dec::*;
pub use io::*;
pub use locate::*;

#[cfg(test)]
mod tests;
