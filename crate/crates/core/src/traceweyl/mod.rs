//! Heat-trace identity for the twisted Laplacian and Weyl-law counting.

mod report;
mod trace;
mod weyl;

pub use report::*;
pub use trace::*;
pub use weyl::*;

#[cfg(test)]
mod tests;
