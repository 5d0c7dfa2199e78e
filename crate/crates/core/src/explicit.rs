//! Fully explicit finite-volume scheme for the relaxation system.
//!
//! With [`Dissipation::Acoustic`] (the default) all four fields use Rusanov
//! fluxes with the local speed `|u| + c`; with [`Dissipation::Material`] depth
//! is advanced with the central difference of `q` and the convective parts of
//! `q`, `h w` use Rusanov fluxes with speed `|u|`, while `h u eta` is centred.
//! The material variant is not stable on its own: forward Euler on centred
//! acoustics grows for every step size. The pressure gradient follows
//! [`PressureForm`](crate::params::PressureForm). Second order uses MUSCL faces and Heun.

use crate::bathymetry::Bathymetry;
use crate::convective::{acoustic_divergence, convective_divergence_centred_heta, eta_at, hsgn_speeds, linear_mode, pressure_gradient};
use crate::error::{Result, SolverError};
use crate::grid::Grid1D;
use crate::hsgn::p_tilde_unchecked;
use crate::params::{Dissipation, Order, SchemeParams};
use crate::report::{interior_f64, run, Profile, RunOptions, RunReport, StepLimit, TimeStepper};
use crate::scalar::Real;
use crate::spatial::central_flux_diff;
use crate::state::{FieldState, HsgnState};

/// Explicit stepper over a fixed grid, optionally with bathymetry.
#[derive(Debug, Clone)]
pub struct ExplicitSolver<T> {
    pub grid: Grid1D<T>,
    pub params: SchemeParams<T>,
    pub bathymetry: Option<Bathymetry<T>>,
}

impl<T: Real> ExplicitSolver<T> {
    pub fn new(grid: Grid1D<T>, params: SchemeParams<T>, bathymetry: Option<Bathymetry<T>>) -> Result<Self> {
        params.validate()?;
        if let Some(b) = &bathymetry {
            if b.b.len() != grid.len() {
                return Err(SolverError::LengthMismatch { expected: grid.len(), found: b.b.len() });
            }
        }
        Ok(Self { grid, params, bathymetry })
    }

    /// `dt = CFL dx / max(|u| + c)`.
    pub fn dt(&self, state: &HsgnState<T>) -> Result<StepLimit<T>> {
        state.check_wet(&self.grid, self.params.h_min)?;
        let (mu, umax) = hsgn_speeds(state, &self.grid, &self.params, self.bathymetry.as_ref());
        Ok(StepLimit { dt: self.params.cfl * self.grid.dx / mu, wave_speed: mu, u_max: umax })
    }

    /// Semi-discrete operator `L(U)` at interior cells; ghosts of the result are zero.
    pub fn rate(&self, state: &HsgnState<T>) -> HsgnState<T> {
        let grid = &self.grid;
        let p = &self.params;
        let bathy = self.bathymetry.as_ref();
        let n = grid.len();
        let eta: Vec<T> = (0..n).map(|i| eta_at(state, bathy, i)).collect();
        let px = pressure_gradient(state, grid, p, bathy, p.pressure);
        // (D(q), D^(qu), D^(hu eta), D^(hu w))
        let div: Vec<[T; 4]> = match p.dissipation {
            Dissipation::Material => {
                let dq = central_flux_diff(&state.q, grid.dx);
                let conv = convective_divergence_centred_heta(state, grid, linear_mode(p));
                (0..n).map(|i| [dq[i], conv[i][0], conv[i][1], conv[i][2]]).collect()
            }
            Dissipation::Acoustic => acoustic_divergence(state, grid, p, bathy, linear_mode(p)),
        };

        let mut out = HsgnState::zeros(n);
        for i in grid.interior() {
            let h = state.h[i];
            out.h[i] = -div[i][0];
            let mut rq = -div[i][1] - px[i];
            if let Some(b) = bathy {
                rq -= (p.g * h + T::cst(1.5) * p_tilde_unchecked(h, eta[i], p.lambda)) * b.b_x[i];
            }
            out.q[i] = rq;
            out.heta[i] = -div[i][2] + state.hw[i];
            out.hw[i] = -div[i][3] - p.lambda * (eta[i] / h - T::one());
        }
        out
    }

    fn euler(&self, state: &HsgnState<T>, dt: T) -> Result<HsgnState<T>> {
        let mut next = HsgnState::lincomb(T::one(), state, dt, &self.rate(state));
        next.apply_boundary(self.grid.n_ghost, self.params.boundary);
        next.check_wet(&self.grid, self.params.h_min)?;
        Ok(next)
    }

    pub fn step_order1(&self, state: &HsgnState<T>, dt: T) -> Result<HsgnState<T>> {
        self.euler(state, dt)
    }

    /// Heun: `U1 = U + dt L(U)`, `U^{n+1} = (U + U1 + dt L(U1)) / 2`.
    pub fn step_order2(&self, state: &HsgnState<T>, dt: T) -> Result<HsgnState<T>> {
        let stage = self.euler(state, dt)?;
        let second = self.euler(&stage, dt)?;
        let mut next = HsgnState::lincomb(T::half(), state, T::half(), &second);
        next.apply_boundary(self.grid.n_ghost, self.params.boundary);
        next.check_wet(&self.grid, self.params.h_min)?;
        Ok(next)
    }
}

impl<T: Real> TimeStepper<T> for ExplicitSolver<T> {
    type State = HsgnState<T>;

    fn name(&self) -> &'static str {
        "explicit-hsgn"
    }

    fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    fn params(&self) -> &SchemeParams<T> {
        &self.params
    }

    fn bathymetry(&self) -> Option<&Bathymetry<T>> {
        self.bathymetry.as_ref()
    }

    fn stable_dt(&self, state: &HsgnState<T>) -> Result<StepLimit<T>> {
        self.dt(state)
    }

    fn advance(&self, state: &HsgnState<T>, dt: T) -> Result<(HsgnState<T>, Option<T>)> {
        let next = match self.params.order {
            Order::First => self.step_order1(state, dt)?,
            Order::Second => self.step_order2(state, dt)?,
        };
        Ok((next, None))
    }

    fn profile(&self, state: &HsgnState<T>) -> Profile {
        hsgn_profile(state, &self.grid, self.bathymetry.as_ref())
    }
}

pub(crate) fn hsgn_profile<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, bathy: Option<&Bathymetry<T>>) -> Profile {
    let r = grid.interior();
    Profile {
        x: grid.cell_centers.iter().map(|x| x.as_f64()).collect(),
        h: interior_f64(&state.h, grid),
        u: r.clone().map(|i| (state.q[i] / state.h[i]).as_f64()).collect(),
        eta: r.clone().map(|i| eta_at(state, bathy, i).as_f64()).collect(),
        w: r.clone().map(|i| (state.hw[i] / state.h[i]).as_f64()).collect(),
        b: r.map(|i| bathy.map_or(0.0, |b| b.b[i].as_f64())).collect(),
    }
}

/// Explicit step size for a flat-bottom state.
pub fn explicit_dt<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<T> {
    ExplicitSolver::new(grid.clone(), params.clone(), None)?.dt(state).map(|l| l.dt)
}

/// One forward-Euler step; `state` must have its ghosts filled.
pub fn explicit_step_order1<T: Real>(
    state: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    dt: T,
) -> Result<HsgnState<T>> {
    state.check_lengths(grid)?;
    ExplicitSolver::new(grid.clone(), params.clone(), bathy.cloned())?.step_order1(state, dt)
}

/// One Heun step with MUSCL faces.
pub fn explicit_step_order2<T: Real>(
    state: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    dt: T,
) -> Result<HsgnState<T>> {
    state.check_lengths(grid)?;
    ExplicitSolver::new(grid.clone(), params.clone(), bathy.cloned())?.step_order2(state, dt)
}

/// Runs the explicit scheme to `params.t_final`.
pub fn run_explicit<T: Real>(
    initial: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    opts: &RunOptions,
) -> Result<(HsgnState<T>, RunReport)> {
    initial.check_lengths(grid)?;
    let solver = ExplicitSolver::new(grid.clone(), params.clone(), bathy.cloned())?;
    run(&solver, initial, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{init_soliton, SolitonSpec};
    use crate::grid::make_grid;
    use crate::params::PressureForm;
    use crate::state::{total_mass, Boundary};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rest(grid: &Grid1D<f64>, h: f64) -> HsgnState<f64> {
        let n = grid.len();
        HsgnState { h: vec![h; n], q: vec![0.0; n], heta: vec![h * h; n], hw: vec![0.0; n] }
    }

    #[test]
    fn time_step_examples() {
        let grid = make_grid::<f64>(0.0, 1.0, 10, 2).unwrap();
        let p = SchemeParams::default().with_lambda(0.0).with_cfl(0.4);
        assert_relative_eq!(explicit_dt(&rest(&grid, 1.0), &grid, &p).unwrap(), 0.012771, epsilon = 1e-6);
        let p = p.with_lambda(1200.0);
        assert_relative_eq!(explicit_dt(&rest(&grid, 1.0), &grid, &p).unwrap(), 0.0019759, epsilon = 1e-7);
    }

    #[test]
    fn rest_state_is_fixed_point() {
        let grid = make_grid::<f64>(-3.0, 3.0, 30, 2).unwrap();
        for boundary in [Boundary::Transmissive, Boundary::Periodic, Boundary::Reflective] {
            for dissipation in [Dissipation::Acoustic, Dissipation::Material] {
                for pressure in [PressureForm::Balanced, PressureForm::Split] {
                    let p = SchemeParams::default().with_boundary(boundary).with_dissipation(dissipation).with_pressure(pressure);
                    let s = rest(&grid, 1.3);
                    assert_eq!(explicit_step_order1(&s, &grid, &p, None, 0.01).unwrap(), s);
                    assert_eq!(explicit_step_order2(&s, &grid, &p, None, 0.01).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let grid = make_grid::<f64>(-10.0, 10.0, 40, 2).unwrap();
        let mut s = init_soliton(&SolitonSpec::new(1.0, 0.5, 0.0, 9.81).unwrap(), &grid);
        s.apply_boundary(2, Boundary::Transmissive);
        let p = SchemeParams::default();
        assert_eq!(explicit_step_order1(&s, &grid, &p, None, 0.0).unwrap(), s);
    }

    #[test]
    fn soliton_step_conserves_mass_periodic() {
        let grid = make_grid::<f64>(-50.0, 50.0, 2000, 2).unwrap();
        let mut s = init_soliton(&SolitonSpec::new(1.0, 1.0, 0.0, 9.81).unwrap(), &grid);
        let p = SchemeParams::default().with_lambda(1000.0).with_boundary(Boundary::Periodic);
        s.apply_boundary(2, Boundary::Periodic);
        let dt = explicit_dt(&s, &grid, &p).unwrap();
        let m0 = total_mass(&s, &grid);
        for step in [explicit_step_order1, explicit_step_order2] {
            let next = step(&s, &grid, &p, None, dt).unwrap();
            assert!((total_mass(&next, &grid) - m0).abs() <= 1e-12 * m0);
        }
    }

    proptest! {
        #[test]
        fn periodic_steps_conserve_mass(amp in 0.0f64..0.4, u0 in -1.0f64..1.0, lam in 0.0f64..5000.0, n in 8usize..48) {
            let grid = make_grid::<f64>(0.0, 10.0, n, 2).unwrap();
            let k = 2.0 * std::f64::consts::PI / 10.0;
            let mut s = HsgnState::zeros(grid.len());
            for i in 0..grid.len() {
                let x = grid.x(i);
                let h = 1.0 + amp * (k * x).sin();
                s.h[i] = h;
                s.q[i] = h * (u0 + 0.1 * (k * x).cos());
                s.heta[i] = h * h;
            }
            let p = SchemeParams::default().with_lambda(lam).with_boundary(Boundary::Periodic);
            s.apply_boundary(2, Boundary::Periodic);
            let dt = explicit_dt(&s, &grid, &p).unwrap();
            let m0 = total_mass(&s, &grid);
            let next = explicit_step_order2(&s, &grid, &p, None, dt).unwrap();
            prop_assert!((total_mass(&next, &grid) - m0).abs() <= 1e-12 * m0);
        }
    }
}
