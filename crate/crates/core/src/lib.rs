//! Connectivity-table analysis for functions over GF(2^n).
//!
//! The crate computes difference (DDT), boomerang (BCT) and Feistel
//! boomerang (FBCT) connectivity tables, their spectra and uniformities for
//! arbitrary functions over GF(2^n) with 2 <= n <= 24, and carries a
//! closed-form model of the FBCT of x^(2^(n-2)-1) — per-entry predictions
//! from trace conditions and the full spectrum from binary Kloosterman
//! sums — together with the machinery to verify the model against direct
//! computation, entry by entry and spectrum by spectrum.
//!
//! * [`field`] — exact GF(2^n) arithmetic in polynomial basis.
//! * [`analysis`] — brute-force tables, spectra and uniformities, plus the
//!   ratio-reduced FBCT spectrum fast path for power functions.
//! * [`closedform`] — Kloosterman sums (direct and Carlitz), the per-entry
//!   predictor and predicted spectrum, and the verification report.
//! * [`rootcount`] — quadratic and quartic root counting over GF(2^n) via
//!   trace criteria and companion-cubic factorization patterns.
//!
//! Everything is pure and immutable after construction; the spectrum scans
//! partition work across threads and merge partial histograms key-wise, so
//! any thread count produces identical output.

pub mod analysis;
pub mod closedform;
mod error;
pub mod field;
mod parallel;
pub mod rootcount;

pub use analysis::{BoxedFunction, Spectrum};
pub use error::Error;
pub use field::{FieldElement, FieldSpec};
