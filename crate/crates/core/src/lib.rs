//! Free-fermion spectra, exceptional points and topology of the open
//! non-Hermitian XY chain
//!
//! ```text
//! H(λ) = -Σ_{j=1}^{L-1} ( σˣ_j σˣ_{j+1} + λ σʸ_j σʸ_{j+1} ),   λ ∈ ℂ
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex eigenvalues (Hessenberg + shifted QR) and
//!   inverse-iteration eigenvectors.
//! - [`fermion`]: the quasi-energy matrix `CᵀC`, quasi-energies and the
//!   assembled `2^L` spectrum.
//! - [`ed`]: brute-force exact diagonalization, used as an oracle.
//! - [`matching`]: multiset comparison of complex spectra.
//! - [`quasimomentum`]: the transcendental quasi-momentum condition.
//! - [`ep`]: exceptional-point census and verification.
//! - [`asymptotics`], [`pt`], [`topology`]: large-`L` rings, the
//!   imaginary-λ axis and the winding-number phase diagram.

pub mod asymptotics;
pub mod ed;
pub mod ep;
pub mod error;
pub mod fermion;
pub mod linalg;
pub mod matching;
pub mod model;
pub mod pt;
pub mod quasimomentum;
mod roots;
pub mod topology;

pub use error::{Error, Result};
pub use model::{Branch, GammaParams, ModelParams, Sector};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
