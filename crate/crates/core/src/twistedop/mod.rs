//! Discrete twisted Laplacian, its complex spectrum and the perturbation
//! machinery used to count eigenvalues in a window.

mod assemble;
mod checks;
mod flow;
mod spectrum;

pub use assemble::*;
pub use checks::*;
pub use flow::*;
pub use spectrum::*;
