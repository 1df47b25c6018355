//! Canonical sum of the hydrogenic problem: level densities, their
//! universal large-`n` limit, and the continuum and bound-state sums.

mod density;
mod partition;

pub use density::{
    degeneracy_tail_limit, density_normalization, dn_density, dn_scaled, figure1_curves,
    scaled_normalization, trapped_degeneracy, uniform_grid, universal_d,
    universal_sup_distance, universal_trapped_degeneracy, DensityCurve, Normalization,
};
pub use partition::{
    brace_asymptote, brace_factor, ideal_gas_term, level_weight, partition, partition_generic,
    z_continuous, z_discrete, LevelTerm, NMaxPolicy, PartitionResult,
};
