//! Steady-state cooling of a mechanical resonator driven by squeezed light
//! from a cascaded parametric oscillator.
//!
//! The crate evaluates the squeezed-reservoir correlation spectra and the
//! radiation-pressure force spectrum of the driven cavity, composes them
//! into cooling rates and phonon occupancies, optimizes the squeezing phase,
//! bandwidth and detuning, and cross-validates every closed form against an
//! independent 6×6 Lyapunov steady-state solve of the full cascaded model.
//! Deterministic sweep recipes reproduce the figures of the underlying
//! analysis as plot-ready CSV.
//!
//! All rates and frequencies are dimensionless in units of the mechanical
//! frequency `omega_m`.

pub mod config;
pub mod cooling;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod params;
pub mod spectra;
pub mod sweep;

pub use cooling::{ApproxSteadyState, CoolingReport};
pub use error::{Error, Result};
pub use optimizer::{DetuningOptimum, MatchedBandwidth, OptimalSqueezing};
pub use oracle::{LinearGaussianModel, OracleResult};
pub use params::{OptomechParams, SqueezerParams, ValidatedModel};
pub use spectra::SpectraPoint;
pub use sweep::{Axis, AxisScale, SweepKind, SweepRecord, SweepResult, SweepSpec};
