//! Period functions of planar piecewise potential systems with a straight
//! switching line, their power-series expansion near the origin, and
//! certificates of non-isochronicity.
//!
//! The crate is `no_std` (it needs `alloc`). Exact arithmetic is done over
//! big rationals; floating point only appears in the quadrature, the ODE
//! integrator and at the reporting boundary.
//!
//! Module map:
//! - [`series`]: exact truncated power series (product, composition, reversion).
//! - [`scalar`]: the two-component exact numbers `q + Σ q_d·(π/√2)·√d`.
//! - [`potential`]: polynomial potentials and classification of the origin.
//! - [`expansion`]: period constants by direct integral expansion.
//! - [`numeric`]: Gauss–Kronrod quadrature, root bracketing, line fits.
//! - [`quadrature`]: numerical period function and divergence probe.
//! - [`simulate`]: event-detecting Runge–Kutta integration of the flows.
//! - [`verdict`]: the combined isochronicity certificate.

#![no_std]
// NaN-rejecting guards are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod expansion;
pub mod numeric;
pub mod potential;
pub mod quadrature;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod simulate;
pub mod verdict;

pub use expansion::{ExpansionError, FirstNonzero, Param, PeriodExpansion};
pub use potential::{CenterCase, CaseId, Potential, PiecewiseSystem, Side, SideBehavior, Topology};
pub use quadrature::{DivergenceFit, PeriodRow, PeriodTable, QuadratureError};
pub use rational::Q;
pub use scalar::PeriodScalar;
pub use series::{SeriesError, TruncatedSeries};
pub use simulate::{OrbitRun, OrbitSample, Region, SimulateError, SimulateOptions};
pub use verdict::{Evidence, IsochronyVerdict, VerdictReport};

/// Default truncation order of every expansion.
pub const DEFAULT_ORDER: usize = 12;
