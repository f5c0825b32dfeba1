//! Numerical laboratory for heavy-tailed (Lévy) random matrix ensembles.
//!
//! The crate is organised around the pipeline of a typical experiment:
//!
//! 1. [`stable_laws`] — sampling of (deformed) symmetric α-stable scalars,
//!    their removals, truncated moments and the coupling time `t`.
//! 2. [`ensemble`] — coupled Lévy/removal matrix pairs with the three-level
//!    label decomposition, GOE matrices and the interpolating family `H^γ`.
//! 3. [`limit_law`] — the limiting Stieltjes transform `m_α(z)` and density
//!    `ρ_α` via a scalar fixed point, the semicircle reference and the free
//!    convolution with a semicircle background.
//! 4. [`quadrant`] — the alternative function-space fixed point on the unit
//!    quarter circle, used as an independent route to `m_α` at small `|z|`.
//! 5. [`resolvent`] — exact resolvents, minors, Schur-complement quantities
//!    and diagnostic identities (Ward, resolvent identity, entry bounds).
//! 6. [`spectra`] — eigen-decompositions and experiment-level statistics:
//!    empirical spectral distributions, local-law sweeps, delocalization,
//!    unfolded gap statistics, tail tests and flow comparisons.
//! 7. [`runner`] — reproducible batch experiments: JSON configs in,
//!    CSV/JSON/SVG artifacts out (also exposed by the `rmtlab` binary).
//!
//! Every sampler takes a caller-supplied random stream; see [`rng`] for the
//! per-trial stream derivation that keeps parallel experiments reproducible.

pub mod config;
pub mod ensemble;
pub mod error;
pub mod limit_law;
pub mod quad;
pub mod quadrant;
pub mod report;
pub mod resolvent;
pub mod rng;
pub mod runner;
pub mod special;
pub mod spectra;
pub mod stable_laws;

pub use error::{Error, Result};
