//! Configuration-driven driver for the shallow-water solvers: scenario setup,
//! parameter sweeps, CSV output and the acceptance checks.

// `!(x > 0)` is deliberate: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
pub mod scenario;
