//! Special functions behind the hydrogenic level densities: generalized
//! Laguerre polynomials, the Whittaker function `M_{n,1/2}`, the two-branch
//! large-degree Laguerre asymptotics and the complementary error function.

mod asymptotic;
mod erfc;
mod laguerre;
mod whittaker;

pub use asymptotic::{
    laguerre_asymptotic, varrho, varrho_prime, varsigma, varsigma_prime, AsymptoticBranch,
    AsymptoticLaguerre, Region, ASYMPTOTIC_MIN_DEGREE, DEFAULT_TURNING_MARGIN,
};
pub use erfc::{erfc, erfcx, erfcx_minus_one};
pub use laguerre::{laguerre, laguerre_scaled, LaguerreEval, ScaledLaguerre};
pub use whittaker::{whittaker_m_half, WhittakerEval};
