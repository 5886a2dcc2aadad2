//! Numerical laboratory for the twisted Laplacian on the Bolza surface.
//!
//! The geometry, quadrature and group layers are generic over [`Real`]
//! (`f32` or `f64`); the mesh, operator and spectral layers work in `f64`.

pub mod config;
pub mod error;
pub mod fuchsian;
pub mod hgeom;
pub mod output;
pub mod quad;
pub mod radialform;
pub mod real;
pub mod sparse;
pub mod surfmesh;
pub mod traceweyl;
pub mod twistedop;
pub mod verify;

pub use error::{Error, Result};
pub use real::Real;

pub type Point = hgeom::HPoint<f64>;
pub type Moebius = hgeom::MoebiusMap<f64>;
pub type Quadrature = hgeom::QuadratureRule<f64>;
