//! Foliated 5D metric, its Christoffel symbols and residual checks of the
//! operator identities built from them.

mod kg;
mod laplacian;
mod lightcone;
mod metric;
mod potential;

pub use kg::{kg_fourier_residual, ComplexField, HydrogenLike, KgCouplings, KgFourierReport, PlaneWave};
pub use laplacian::{
    covariant_laplacian_residual, laplacian_convergence, patch_grid, sample_operators, LaplacianReport, OperatorSample,
};
pub use lightcone::{lightcone_convergence, lightcone_em_expansion_residual, LightconeReport};
pub use metric::{
    build_metric, christoffel_contractions, contraction_convergence, christoffel_from_dh, expected_contractions, fd_dh, metric_pair, n_covector,
    ChristoffelMethod, Contractions, Gamma5, Mat5, MetricPatch, FIFTH,
};
pub use potential::{
    coulomb_divergence, eta, lorentz_divergence, verify_gauge, ConstantPotential, CoulombPotential, Gauge, Potential,
    PureGauge, TrigMode, TrigPotential, ZeroPotential,
};
