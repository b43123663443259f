//! Dense wireless networks as marked Poisson point processes: SIR/QoS
//! evaluation for four communication modes, frustration measures, triadic
//! discretization, relative-entropy rate functions and their constrained
//! minimizers, plus rare-event Monte Carlo experiments.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] — windows, path-loss, fading laws, QoS maps, intensities and
//!   the two measure representations ([`measure`]).
//! * [`sampler`] — draws of the marked Poisson process, including
//!   space-dependent fading kernels.
//! * [`sir`] — interference, SIR, direct/relayed QoS and frustration measures.
//! * [`grid`] — triadic discretization and measure pushforwards.
//! * [`entropy`] — relative entropy (discrete and density form) and the
//!   Poisson Cramér rate.
//! * [`minimizer`] — exponential-tilt minimizers of relative entropy under
//!   frustration constraints, with an independent grid oracle.
//! * [`classifier`] — exponential vs. sub-exponential decay verdicts.
//! * [`harness`] — reproducible experiments (frustration curve, rare-event
//!   Monte Carlo) and report emission.

pub mod classifier;
pub mod entropy;
pub mod grid;
pub mod harness;
pub mod measure;
pub mod minimizer;
pub mod model;
pub mod numerics;
pub mod sampler;
pub mod scenario;
pub mod sir;

/// Concrete scalar used throughout the public API. The low-level numeric
/// kernels in [`numerics`] and [`entropy`] stay generic over
/// [`num_traits::Float`] so they also instantiate at `f32`.
pub type Real = f64;

/// Single-precision alias for the generic kernels.
pub type Real32 = f32;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
