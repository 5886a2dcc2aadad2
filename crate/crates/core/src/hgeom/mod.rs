//! Hyperbolic-plane primitives in the upper half-plane model.

mod heat;
mod moebius;
mod point;
mod polygon;

pub use heat::{heat_kernel, heat_kernel_mass, ln_heat_kernel, selberg_heat_transform, HeatKernelTable};
pub use moebius::{mobius_apply, translation_length, MoebiusMap};
pub use point::{ball_area, cosh_distance, hyp_distance, midpoint, minkowski, HPoint};
pub use polygon::{orientation, polygon_quadrature, triangle_angles, triangle_area, vertex_angles, QuadratureRule};

#[cfg(test)]
mod tests;
