//! Finite frames in `C^d`, dual-frame multipliers, and spectral enclosures.
//!
//! The crate builds frames as synthesis matrices, assembles multiplier
//! operators `M = Φ diag(m) Ψ*`, computes their spectra, and evaluates
//! geometric regions of the complex plane that are guaranteed to contain
//! those spectra. The `verify` module packages the named experiments and a
//! randomized soundness harness; the `framespec` binary exposes everything
//! on the command line.

pub mod enclosures;
pub mod error;
pub mod frames;
pub mod multipliers;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::C64;
