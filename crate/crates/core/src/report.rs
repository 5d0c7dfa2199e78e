//! Run diagnostics and the shared time loop.

use std::time::Instant;

use crate::bathymetry::Bathymetry;
use crate::error::{Result, SolverError};
use crate::grid::Grid1D;
use crate::params::SchemeParams;
use crate::scalar::{to_f64_vec, Real};
use crate::state::{total_mass, total_momentum, FieldState};

/// Free-surface time series at a fixed abscissa, sampled at the nearest cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeRecord {
    pub x_gauge: f64,
    /// Storage index of the sampled cell.
    pub cell: usize,
    pub times: Vec<f64>,
    /// `h + b` at the sampled cell.
    pub surface_elevation: Vec<f64>,
}

impl GaugeRecord {
    pub fn new(x_gauge: f64, cell: usize) -> Self {
        Self { x_gauge, cell, times: Vec::new(), surface_elevation: Vec::new() }
    }

    fn push(&mut self, t: f64, z: f64) {
        // times stay strictly increasing
        if self.times.last().is_some_and(|&last| t <= last) {
            return;
        }
        self.times.push(t);
        self.surface_elevation.push(z);
    }
}

/// Interior fields at the end of a run, in primitive variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile {
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub u: Vec<f64>,
    pub eta: Vec<f64>,
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

impl Profile {
    /// Free surface `h + b`.
    pub fn surface(&self) -> Vec<f64> {
        self.h.iter().zip(&self.b).map(|(h, b)| h + b).collect()
    }
}

/// One accepted time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Time at the end of the step.
    pub t: f64,
    pub dt: f64,
    /// `dt * max(|u| + c) / dx` with the scheme's own wave speed.
    pub cfl: f64,
    /// `dt * max|u| / dx`.
    pub mcfl: f64,
    /// Smallest depth-operator coefficient over the step's implicit stages.
    pub kappa_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub scheme: String,
    pub profile: Profile,
    pub gauges: Vec<GaugeRecord>,
    pub steps: Vec<StepRecord>,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub momentum_initial: f64,
    pub momentum_final: f64,
    /// Seconds spent in the time loop only.
    pub wall_time: f64,
    pub step_count: usize,
}

impl RunReport {
    /// `|M(T) - M(0)| / |M(0)|`.
    pub fn mass_drift(&self) -> f64 {
        (self.mass_final - self.mass_initial).abs() / self.mass_initial.abs()
    }

    pub fn kappa_min(&self) -> Option<f64> {
        self.steps.iter().filter_map(|s| s.kappa_min).reduce(f64::min)
    }

    pub fn max_cfl(&self) -> f64 {
        self.steps.iter().map(|s| s.cfl).fold(0.0, f64::max)
    }
}

/// Admissible step size with the speeds it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLimit<T> {
    pub dt: T,
    pub wave_speed: T,
    pub u_max: T,
}

/// Common interface of the three schemes, driven by [`run`].
pub trait TimeStepper<T: Real> {
    type State: FieldState<T>;

    fn name(&self) -> &'static str;
    fn grid(&self) -> &Grid1D<T>;
    fn params(&self) -> &SchemeParams<T>;
    fn bathymetry(&self) -> Option<&Bathymetry<T>>;

    fn stable_dt(&self, state: &Self::State) -> Result<StepLimit<T>>;

    /// Advances by `dt`; returns the new state (ghosts filled) and the smallest
    /// implicit-operator coefficient if the scheme has one.
    fn advance(&self, state: &Self::State, dt: T) -> Result<(Self::State, Option<T>)>;

    fn profile(&self, state: &Self::State) -> Profile;
}

/// Options of the time loop.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub gauges: Vec<f64>,
    /// Abort with [`SolverError::Diverged`] once any depth exceeds this value.
    pub blowup_depth: Option<f64>,
    pub max_steps: Option<usize>,
}

/// Marches `initial` to `params.t_final`, clipping the last step onto it.
pub fn run<T: Real, S: TimeStepper<T>>(stepper: &S, initial: &S::State, opts: &RunOptions) -> Result<(S::State, RunReport)> {
    let grid = stepper.grid();
    let params = stepper.params();
    params.validate()?;
    let mut state = initial.clone();
    state.apply_boundary(grid.n_ghost, params.boundary);
    state.check_wet(grid, params.h_min)?;

    let b_at = |i: usize| stepper.bathymetry().map_or(0.0, |b| b.b[i].as_f64());
    let mut gauges: Vec<GaugeRecord> = opts.gauges.iter().map(|&x| GaugeRecord::new(x, grid.nearest_cell(T::cst(x)))).collect();
    let record = |gauges: &mut Vec<GaugeRecord>, state: &S::State, t: T| {
        for g in gauges.iter_mut() {
            let z = state.depth()[g.cell].as_f64() + b_at(g.cell);
            g.push(t.as_f64(), z);
        }
    };

    let mut report = RunReport {
        scheme: stepper.name().to_string(),
        mass_initial: total_mass(&state, grid).as_f64(),
        momentum_initial: total_momentum(&state, grid).as_f64(),
        ..Default::default()
    };
    let mut t = T::zero();
    record(&mut gauges, &state, t);

    let start = Instant::now();
    while t < params.t_final {
        if opts.max_steps.is_some_and(|m| report.step_count >= m) {
            break;
        }
        let limit = stepper.stable_dt(&state)?;
        let remaining = params.t_final - t;
        let last = limit.dt >= remaining;
        let dt = if last { remaining } else { limit.dt };
        let (next, kappa) = stepper.advance(&state, dt)?;
        state = next;
        t = if last { params.t_final } else { t + dt };
        report.step_count += 1;
        if let Some(cap) = opts.blowup_depth {
            if let Some(hmax) = grid.interior().map(|i| state.depth()[i].as_f64()).reduce(f64::max) {
                if hmax > cap {
                    return Err(SolverError::Diverged { t: t.as_f64(), max_depth: hmax });
                }
            }
        }
        report.steps.push(StepRecord {
            t: t.as_f64(),
            dt: dt.as_f64(),
            cfl: (dt * limit.wave_speed / grid.dx).as_f64(),
            mcfl: (dt * limit.u_max / grid.dx).as_f64(),
            kappa_min: kappa.map(Real::as_f64),
        });
        record(&mut gauges, &state, t);
    }
    report.wall_time = start.elapsed().as_secs_f64();

    report.mass_final = total_mass(&state, grid).as_f64();
    report.momentum_final = total_momentum(&state, grid).as_f64();
    report.gauges = gauges;
    report.profile = stepper.profile(&state);
    Ok((state, report))
}

/// Interior slice of `v` as `f64`.
pub(crate) fn interior_f64<T: Real>(v: &[T], grid: &Grid1D<T>) -> Vec<f64> {
    to_f64_vec(&v[grid.interior()])
}
