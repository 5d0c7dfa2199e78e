//! One-dimensional solvers for weakly dispersive shallow-water flow.
//!
//! Three schemes share a grid, boundary handling and a time loop:
//!
//! * [`ExplicitSolver`]: explicit finite volumes for the hyperbolic relaxation
//!   of the Serre-Green-Naghdi equations,
//! * [`SiSolver`]: the same system with the stiff acoustic and relaxation
//!   terms treated implicitly (IMEX), one tridiagonal solve per stage,
//! * [`ClassicalSolver`]: the elliptic-hyperbolic SGN equations.
//!
//! Everything is generic over [`Real`] (`f32`, `f64`); the aliases at the crate
//! root fix `f64`.

// `!(x > 0)` is deliberate: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod convective;

pub mod bathymetry;
pub mod benchmarks;
pub mod classical;
pub mod error;
pub mod explicit;
pub mod grid;
pub mod hsgn;
pub mod imex;
pub mod params;
pub mod report;
pub mod scalar;
pub mod spatial;
pub mod state;

pub use bathymetry::Bathymetry;
pub use classical::{ClassicalSolver, PhiSystem};
pub use error::{Result, SolverError};
pub use explicit::ExplicitSolver;
pub use grid::Grid1D;
pub use imex::{ImexTableau, ImplicitStageWork, SiSolver};
pub use params::{Dissipation, Order, PressureForm, SchemeParams};
pub use report::{run, GaugeRecord, Profile, RunOptions, RunReport, StepLimit, StepRecord, TimeStepper};
pub use scalar::Real;
pub use spatial::TridiagonalSystem;
pub use state::{Boundary, FieldState, HsgnState, Parity, SwState};

pub type Grid = Grid1D<f64>;
pub type Params = SchemeParams<f64>;
pub type State = HsgnState<f64>;
pub type Sw = SwState<f64>;
pub type Bottom = Bathymetry<f64>;
pub type Explicit = ExplicitSolver<f64>;
pub type SemiImplicit = SiSolver<f64>;
pub type Classical = ClassicalSolver<f64>;
