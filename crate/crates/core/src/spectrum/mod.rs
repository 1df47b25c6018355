//! Hydrogenic Klein-Gordon levels, the conjugate-wavelength matching
//! condition and the statistical quantization condition.

mod levels;
mod scales;

pub use levels::{
    kg_binding_energy, kg_binding_ratio, kg_energy, kg_energy_ratio, matching_residual,
    stat_critical_ratio, stat_energy, stat_wavelength, stat_wavelength_expansion,
    stat_wavelength_shift, LevelIndex,
};
pub use scales::ScaleSet;
