//! Numerical harmonic analysis on noncompact symmetric spaces.
//!
//! The crate evaluates Harish-Chandra c-functions, endpoint stationary-phase
//! expansions with exact remainders, the polar model-integral decomposition,
//! and rank-one shifted wave kernels with their dispersive bounds.
//!
//! Every routine is generic over a [`Real`] scalar (`f32` or `f64`); the
//! `*64` aliases below fix the double-precision instantiation used by the CLI
//! and the acceptance tests.

pub mod chebyshev;
mod error;
pub mod jet;
pub mod model_integral;
pub mod plancherel;
pub mod profiles;
pub mod quadrature;
pub mod root_data;
pub mod special_gamma;
pub mod stationary_phase;
pub mod wave_kernel;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{cis, ComplexSum, Real};

pub type Complex64 = num_complex::Complex<f64>;

pub type RootDatum64 = root_data::RootDatum<f64>;
pub type CFunction64 = plancherel::CFunction<f64>;
pub type Profile64 = profiles::Profile<f64>;
pub type PhaseProblem64 = stationary_phase::PhaseProblem<f64>;
pub type AmplitudeData64 = stationary_phase::AmplitudeData<f64>;
pub type Symbol64 = model_integral::Symbol<f64>;
pub type ModelIntegral64 = model_integral::ModelIntegral<f64>;
pub type XiDecomposition64 = model_integral::XiDecomposition<f64>;
pub type RankOneGeometry64 = wave_kernel::RankOneGeometry<f64>;
pub type KernelSample64 = wave_kernel::KernelSample<f64>;
