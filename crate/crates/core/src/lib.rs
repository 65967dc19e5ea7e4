//! Optimizers for OneMax under additive Gaussian posterior noise, the
//! analytic quantities that govern them, and a seeded experiment harness.
//!
//! - [`bits`], [`rng`]: genotypes, evaluation counting, reproducible streams.
//! - [`noise`]: the noisy objective and its misclassification probability.
//! - [`optim`]: compact GA, (μ+1) EA, resampling RLS, noise-oblivious wrapper.
//! - [`theory`]: exact and Monte Carlo checks of the tail, distribution and
//!   drift bounds behind the runtime results.
//! - [`harness`], [`stats`], [`table`]: multi-run experiments, quartiles and
//!   plot-ready output.

pub mod bits;
pub mod cli;
pub mod error;
pub mod harness;
pub mod noise;
pub mod optim;
pub mod rng;
pub mod stats;
pub mod table;
pub mod theory;

pub use bits::{BitString, EvalCounter};
pub use error::{Error, Result};
pub use noise::GaussianNoise;
pub use rng::RandomStream;
