//! The genus-2 surface group of the regular octagon: generators, orbit
//! enumeration, lattice counts, injectivity radius, systole and periods.

mod enumerate;
mod group;
mod period;

pub use enumerate::{
    count_translates, enumerate, enumerate_capped, global_injectivity_radius, injectivity_radius, max_loop_count,
    primitive_loop_count, sample_domain, shell_bound_cosh, shell_bound_exp, shell_table, systole, translate_tree,
    GroupElement, OrbitTree, ShellTable, DEFAULT_RADIUS_CAP,
};
pub use group::{abelianize, bolza_group, free_reduce, GeneratorSet, Letter, Reduction};
pub use period::{abelian_period, period, word_period};

#[cfg(test)]
mod tests;
