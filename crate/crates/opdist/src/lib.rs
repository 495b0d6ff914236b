//! Operational distances between qudit states.
//!
//! The distance between two density operators is computed operationally: for
//! every measurement in a complete set of d+1 mutually unbiased bases, take
//! the squared Euclidean distance between the two outcome-probability vectors,
//! then sum over the set. That total coincides with the squared
//! Hilbert-Schmidt distance of the operators and is invariant under the choice
//! of the complete set, which this crate verifies numerically. The crate also
//! carries the fidelity for comparison (the two orderings agree on pure states
//! and disagree on mixed ones) and a finite-shot simulator for estimating the
//! distance from measured frequencies, polarization-tomography style.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, Hermitian eigensolver, PSD square root
//! - [`bloch`]: traceless Hermitian operator basis and Bloch-vector coordinates
//! - [`mub`]: construction and verification of mutually unbiased basis sets
//! - [`metric`]: operational distance, Hilbert-Schmidt distance, fidelity
//! - [`sampler`]: random states, multinomial shot simulation, tomography
//!
//! # Example
//!
//! ```
//! use opdist::metric::total_distance;
//! use opdist::mub::{standard_mub, verify_mub};
//! use opdist::sampler::{estimate_total_distance, random_mixed, RngSeed};
//!
//! // a complete set of 4 mutually unbiased bases for qutrits
//! let set = standard_mub(3)?;
//! assert!(verify_mub(&set, 1e-9)?.pass);
//!
//! let rho1 = random_mixed(3, RngSeed(7))?;
//! let rho2 = random_mixed(3, RngSeed(8))?;
//!
//! // summing per-basis probability distances reproduces ‖ρ1 − ρ2‖²
//! let report = total_distance(&rho1, &rho2, &set)?;
//! assert!(report.deviation < 1e-12);
//!
//! // and the same number is measurable from finite-shot frequencies
//! let est = estimate_total_distance(&rho1, &rho2, &set, 100_000, RngSeed(9))?;
//! assert!((est.estimate - report.total).abs() < 0.05);
//! # Ok::<(), opdist::Error>(())
//! ```

pub mod bloch;
pub mod error;
pub mod linalg;
pub mod metric;
pub mod mub;
pub mod sampler;

pub use error::{Error, Result};
