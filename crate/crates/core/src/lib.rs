//! Simulation and analysis of two-mode bosonic communication channels.
//!
//! Two equivalent schemes are modeled end to end:
//!
//! - **Twin-beam / heterodyne**: a complex symbol is encoded on a
//!   displaced two-mode squeezed state from a phase-insensitive amplifier
//!   (PIA) and decoded by measuring the complex photocurrent `Z = a + b†`.
//! - **Squeezed-pair / homodyne**: the real and imaginary parts of the
//!   symbol ride on two uncorrelated single-mode squeezed states, each
//!   decoded by an ordinary homodyne detector.
//!
//! A 50-50 frequency conversion maps one scheme onto the other at every
//! stage: state preparation, Lindblad loss/gain/parametric amplification,
//! and the measurement POVM. The crate provides
//!
//! - [`gaussian`]: two-mode Gaussian states and the symplectic unitary
//!   catalog (PIA, frequency conversion, displacements, squeezers);
//! - [`evolution`]: Lindblad generators, their canonical coefficients and
//!   drift/diffusion reduction, and closed-form Gaussian moment evolution;
//! - [`measurement`]: heterodyne and homodyne outcome statistics, the
//!   product-to-heterodyne coordinate change, and phase sensitivity;
//! - [`capacity`]: mutual information and capacity of the power-constrained
//!   channel, with and without distributed amplification;
//! - [`fock`]: a truncated number-basis brute-force oracle used to certify
//!   every Gaussian-level result at small photon number.
//!
//! Quadrature convention: `X_φ = (c† e^{iφ} + c e^{−iφ})/2`, so the vacuum
//! variance is 1/4 per quadrature and `[X, Y] = i/2`. State vectors are
//! ordered `(X_a, Y_a, X_b, Y_b)`.
//!
//! ## Example
//!
//! ```rust
//! use twinbeam_core::evolution::{conjugate_generator, evolve_state, PhysicalGenerator};
//! use twinbeam_core::gaussian::{
//!     apply_unitary, squeezed_pair_state, twin_beam_state, GaussianUnitary, TwinBeamSpec,
//! };
//! use twinbeam_core::measurement::heterodyne_distribution;
//! use twinbeam_core::C64;
//!
//! // Encode z = 1 + i on a twin beam with squeezing fraction 0.5.
//! let z = C64::new(1.0, 1.0);
//! let twin = twin_beam_state(&TwinBeamSpec::symmetric(0.5, z)?)?;
//!
//! // Frequency conversion disentangles it into the squeezed pair.
//! let fc = GaussianUnitary::frequency_conversion();
//! let pair = apply_unitary(&twin, &fc)?;
//! assert!((pair.cov - squeezed_pair_state(0.5, z)?.cov).abs().max() < 1e-12);
//!
//! // Loss commutes with the conversion, so both orderings agree.
//! let loss = PhysicalGenerator::loss(1.0, 0.0)?;
//! let a = apply_unitary(&evolve_state(&twin, &loss, 0.4)?, &fc)?;
//! let b = evolve_state(&pair, &conjugate_generator(&loss)?, 0.4)?;
//! assert!((a.cov - b.cov).abs().max() < 1e-10);
//!
//! // The photocurrent reads the symbol back with variance (1−λ)/(1+λ).
//! let het = heterodyne_distribution(&twin);
//! assert!((het.mean - z).norm() < 1e-12);
//! assert!((het.delta_squared() - 1.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), twinbeam_core::Error>(())
//! ```

pub mod capacity;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod gaussian;
pub mod measurement;
pub mod optimize;
pub mod rng;

pub use error::{Error, Result};
pub use evolution::{CanonicalCoefficients, KindK, MomentOde, PhysicalGenerator};
pub use gaussian::{GaussianUnitary, Mode, TwinBeamSpec, TwoModeGaussianState};
pub use measurement::{ComplexGaussian, Gaussian1D, Quadrature};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
