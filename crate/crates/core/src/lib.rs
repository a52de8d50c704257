//! Quadratic one-mode Hamiltonians `H = a(t)p² + b(t)[p,q]₊ + c(t)q²` through their classical
//! counterpart, the complex oscillator `ε̈ + Ω²(t)ε = 0` with `ε̇ε* − εε̇* = 2i`.
//!
//! The crate evaluates `Ω²` from the coefficients, integrates the oscillator and its
//! equivalent forms, builds the linear invariant and the fluctuations of its eigenstates,
//! and cross-checks everything on the parametric-waveguide scenario, which has a closed form.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod dynamics;
pub mod error;
pub mod fluctuations;
pub mod frequency;
pub mod grid;
pub mod integrator;
pub mod invariants;
pub mod parallel;
pub mod quadrature;
pub mod sampled;
pub mod simulation;
pub mod state;
pub mod sweep;
pub mod transforms;
pub mod waveguide;

pub use coeffs::{CoeffPoint, CoefficientSet, DerivativeMode};
pub use dynamics::{AmplitudeSample, HamiltonPairState, OscillatorRun, RiccatiSample, RiccatiSeries, TrajectoryState};
pub use error::{Error, Result};
pub use fluctuations::FluctuationRecord;
pub use frequency::FrequencyProfile;
pub use grid::{make_grid, TimeGrid};
pub use integrator::IntegratorConfig;
pub use invariants::{LinearInvariantCoefficients, QuadraticCombination};
pub use parallel::Execution;
pub use state::{OscillatorState, PolarForm};
pub use waveguide::{ValidationReport, ValidationTolerances, WaveguideParams};
