//! Light-cone reductions of the 5D wave equation: free Schrödinger and
//! Fokker-Planck evolution, probability currents, the weak-field limit and
//! the coordinate map behind them.

mod coordinates;
mod current;
mod fokker_planck;
mod schrodinger;
mod spectral;
mod weakfield;

pub use coordinates::{lightcone_gradient_norms, lightcone_jacobian, lightcone_transform, null_dispersion, Direction};
pub use current::{current_and_continuity, currents, CurrentField};
pub use fokker_planck::{diffusion_variance, evolve_fokker_planck, heat_kernel, max_mass_drift, total_mass, DiffusionScheme};
pub use schrodinger::{
    dispersion_error, evolve_schrodinger, free_packet_variance, gaussian_packet, position_variance,
    propagator_composition_check, Scheme, Trajectory,
};
pub use spectral::{spectral_derivative, wavenumbers, SpectralReal};
pub use weakfield::{
    bohr_energy, bohr_radius, coulomb_energy, hydrogen_ground_state, weakfield_schrodinger_residual, WeakFieldReport,
};
