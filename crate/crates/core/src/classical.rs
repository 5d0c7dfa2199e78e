//! Classical SGN in elliptic-hyperbolic form.
//!
//! Every stage first solves the tridiagonal problem
//! `h phi - ((h^3/3) phi_x)_x + kappa(h, b) phi = RHS` and then performs a
//! Rusanov shallow-water update with the extra momentum source `h phi`.

use crate::bathymetry::Bathymetry;
use crate::error::{Result, SolverError};
use crate::grid::Grid1D;
use crate::params::{Order, SchemeParams};
use crate::report::{interior_f64, run, Profile, RunOptions, RunReport, StepLimit, TimeStepper};
use crate::scalar::Real;
use crate::spatial::{reconstruct_fields, rusanov_flux_diff, solve_tridiagonal, TridiagonalSystem};
use crate::state::{Boundary, FieldState, Parity, SwState};

/// Assembled elliptic problem for `phi` on the interior cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSystem<T> {
    pub system: TridiagonalSystem<T>,
    /// Bathymetric diagonal contribution `kappa(h, b)` per interior row.
    pub kappa: Vec<T>,
}

impl<T: Real> PhiSystem<T> {
    /// Builds the operator and right-hand side. `bathy = None` is the flat model;
    /// a flat bathymetry goes through identical arithmetic.
    pub fn assemble(h: &[T], u: &[T], bathy: Option<&Bathymetry<T>>, grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<Self> {
        let n = grid.len();
        if h.len() != n || u.len() != n {
            return Err(SolverError::LengthMismatch { expected: n, found: h.len().min(u.len()) });
        }
        let g = params.g;
        let dx = grid.dx;
        let dx2 = dx * dx;
        let two_dx = T::two() * dx;
        let third = T::one() / T::cst(3.0);
        let zero = T::zero();
        let b_at = |v: fn(&Bathymetry<T>) -> &Vec<T>, i: usize| bathy.map_or(zero, |b| v(b)[i]);
        let zeta = |i: usize| h[i] + b_at(|b| &b.b, i);
        let h3 = |i: usize| h[i] * h[i] * h[i];

        // flux-form quantity F = (h^3/3) g zeta_xx + (2 h^3/3) u_x^2 + rho, at cells 1..n-1
        let mut flux = vec![zero; n];
        for j in 1..n - 1 {
            let zeta_xx = zeta(j + 1) - T::two() * zeta(j) + zeta(j - 1);
            let du = u[j + 1] - u[j - 1];
            let mut f = third * h3(j) * (g * zeta_xx + T::half() * du * du) / dx2;
            if let Some(b) = bathy {
                let zeta_x = (zeta(j + 1) - zeta(j - 1)) / two_dx;
                f += -T::half() * h[j] * h[j] * b.b_x[j] * g * zeta_x + h3(j) * u[j] * u[j] * b.b_xx[j];
            }
            flux[j] = f;
        }

        let gi = grid.n_ghost;
        let m = grid.n_cells;
        let mut sys = TridiagonalSystem::zeros(m, params.boundary == Boundary::Periodic);
        let mut kappa = vec![zero; m];
        let c = third / dx2;
        for k in 0..m {
            let i = gi + k;
            let fp = T::half() * (h3(i) + h3(i + 1));
            let fm = T::half() * (h3(i - 1) + h3(i));
            let mut rhs = -(flux[i + 1] - flux[i - 1]) / two_dx;
            if let Some(b) = bathy {
                let hb = |j: usize| h[j] * h[j] * b.b_x[j];
                let kap = (hb(i + 1) - hb(i - 1)) / (T::two() * two_dx) + T::cst(0.75) * h[i] * b.b_x[i] * b.b_x[i];
                let zeta_x = (zeta(i + 1) - zeta(i - 1)) / two_dx;
                let zeta_xx = (zeta(i + 1) - T::two() * zeta(i) + zeta(i - 1)) / dx2;
                let u_x = (u[i + 1] - u[i - 1]) / two_dx;
                let q = T::half() * h[i] * g * zeta_xx - T::cst(0.75) * g * b.b_x[i] * zeta_x
                    + h[i] * u_x * u_x
                    + T::cst(1.5) * h[i] * u[i] * u[i] * b.b_xx[i];
                rhs -= h[i] * q * b.b_x[i];
                kappa[k] = kap;
            }
            sys.diag[k] = h[i] + c * (fp + fm) + kappa[k];
            sys.lower[k] = -c * fm;
            sys.upper[k] = -c * fp;
            sys.rhs[k] = rhs;
        }
        if !sys.periodic {
            // phi = 0 on the boundary face (odd ghost) at open ends and walls;
            // a zero-gradient phi at an open end feeds a growing boundary mode
            sys.diag[0] -= sys.lower[0];
            sys.lower[0] = zero;
            sys.diag[m - 1] -= sys.upper[m - 1];
            sys.upper[m - 1] = zero;
        }
        if let Some(row) = (0..m).find(|&k| !(sys.diag[k] > zero)) {
            return Err(SolverError::SingularPivot { row });
        }
        Ok(Self { system: sys, kappa })
    }

    /// Solves for `phi` and returns it at every stored cell (ghosts filled).
    pub fn solve(&self, grid: &Grid1D<T>, boundary: Boundary) -> Result<Vec<T>> {
        let interior = solve_tridiagonal(&self.system)?;
        let mut phi = vec![T::zero(); grid.len()];
        phi[grid.interior()].copy_from_slice(&interior);
        let policy = match boundary {
            Boundary::Periodic => Boundary::Periodic,
            Boundary::Transmissive | Boundary::Reflective => Boundary::Reflective,
        };
        crate::state::fill_ghosts(&mut phi, grid.n_ghost, policy, Parity::Odd);
        Ok(phi)
    }
}

fn velocity<T: Real>(state: &SwState<T>) -> Vec<T> {
    state.h.iter().zip(&state.q).map(|(&h, &q)| q / h).collect()
}

/// `phi` for the flat-bottom model.
pub fn solve_phi_flat<T: Real>(h: &[T], u: &[T], grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<Vec<T>> {
    PhiSystem::assemble(h, u, None, grid, params)?.solve(grid, params.boundary)
}

/// `phi` for the mild-slope bathymetric closure with `zeta = h + b`.
pub fn solve_phi_bathy<T: Real>(h: &[T], u: &[T], bathy: &Bathymetry<T>, grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<Vec<T>> {
    PhiSystem::assemble(h, u, Some(bathy), grid, params)?.solve(grid, params.boundary)
}

/// Classical SGN stepper.
#[derive(Debug, Clone)]
pub struct ClassicalSolver<T> {
    pub grid: Grid1D<T>,
    pub params: SchemeParams<T>,
    pub bathymetry: Option<Bathymetry<T>>,
}

impl<T: Real> ClassicalSolver<T> {
    pub fn new(grid: Grid1D<T>, params: SchemeParams<T>, bathymetry: Option<Bathymetry<T>>) -> Result<Self> {
        params.validate()?;
        if let Some(b) = &bathymetry {
            if b.b.len() != grid.len() {
                return Err(SolverError::LengthMismatch { expected: grid.len(), found: b.b.len() });
            }
        }
        Ok(Self { grid, params, bathymetry })
    }

    /// `dt = CFL dx / max(|u| + sqrt(g h))`.
    pub fn dt(&self, state: &SwState<T>) -> Result<StepLimit<T>> {
        state.check_wet(&self.grid, self.params.h_min)?;
        let mut sigma = T::zero();
        let mut umax = T::zero();
        for i in self.grid.interior() {
            let u = (state.q[i] / state.h[i]).abs();
            sigma = sigma.max(u + (self.params.g * state.h[i]).sqrt());
            umax = umax.max(u);
        }
        Ok(StepLimit { dt: self.params.cfl * self.grid.dx / sigma, wave_speed: sigma, u_max: umax })
    }

    pub fn phi(&self, state: &SwState<T>) -> Result<Vec<T>> {
        let u = velocity(state);
        PhiSystem::assemble(&state.h, &u, self.bathymetry.as_ref(), &self.grid, &self.params)?.solve(&self.grid, self.params.boundary)
    }

    /// Semi-discrete shallow-water operator with the `h phi` source.
    pub fn rate(&self, state: &SwState<T>) -> Result<SwState<T>> {
        let grid = &self.grid;
        let p = &self.params;
        let phi = self.phi(state)?;
        let mode = match p.order {
            Order::First => None,
            Order::Second => Some(p.limiter),
        };
        let g = p.g;
        // Over a bottom the free surface is reconstructed and the face depth is
        // taken against the face-averaged bed, so still water gives no jumps.
        let faces = match &self.bathymetry {
            None => reconstruct_fields([&state.h, &state.q], grid.dx, mode),
            Some(b) => {
                let zeta: Vec<T> = state.h.iter().zip(&b.b).map(|(&h, &b)| h + b).collect();
                let mut f = reconstruct_fields([&zeta, &state.q], grid.dx, mode);
                for j in 0..f.len() {
                    let bf = T::half() * (b.b[j] + b.b[j + 1]);
                    f.left[j][0] -= bf;
                    f.right[j][0] -= bf;
                }
                f
            }
        };
        let div = rusanov_flux_diff(
            &faces,
            |s: &[T; 2]| [s[1], s[1] * s[1] / s[0] + T::half() * g * s[0] * s[0]],
            |s: &[T; 2]| *s,
            |s: &[T; 2]| (s[1] / s[0]).abs() + (g * s[0]).sqrt(),
            grid.dx,
        );
        let mut out = SwState::zeros(grid.len());
        for i in grid.interior() {
            let h = state.h[i];
            out.h[i] = -div[i][0];
            let mut rq = -div[i][1] + h * phi[i];
            if let Some(b) = &self.bathymetry {
                rq -= g * h * b.b_x[i];
            }
            out.q[i] = rq;
        }
        Ok(out)
    }

    fn euler(&self, state: &SwState<T>, dt: T) -> Result<SwState<T>> {
        let mut next = SwState::lincomb(T::one(), state, dt, &self.rate(state)?);
        next.apply_boundary(self.grid.n_ghost, self.params.boundary);
        next.check_wet(&self.grid, self.params.h_min)?;
        Ok(next)
    }

    pub fn step_order1(&self, state: &SwState<T>, dt: T) -> Result<SwState<T>> {
        self.euler(state, dt)
    }

    /// Heun with `phi` re-solved at the predictor.
    pub fn step_order2(&self, state: &SwState<T>, dt: T) -> Result<SwState<T>> {
        let stage = self.euler(state, dt)?;
        let second = self.euler(&stage, dt)?;
        let mut next = SwState::lincomb(T::half(), state, T::half(), &second);
        next.apply_boundary(self.grid.n_ghost, self.params.boundary);
        next.check_wet(&self.grid, self.params.h_min)?;
        Ok(next)
    }
}

impl<T: Real> TimeStepper<T> for ClassicalSolver<T> {
    type State = SwState<T>;

    fn name(&self) -> &'static str {
        "classical-sgn"
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

    fn stable_dt(&self, state: &SwState<T>) -> Result<StepLimit<T>> {
        self.dt(state)
    }

    fn advance(&self, state: &SwState<T>, dt: T) -> Result<(SwState<T>, Option<T>)> {
        let next = match self.params.order {
            Order::First => self.step_order1(state, dt)?,
            Order::Second => self.step_order2(state, dt)?,
        };
        Ok((next, None))
    }

    /// `eta = h` and `w = -h u_x` (the equilibrium closure).
    fn profile(&self, state: &SwState<T>) -> Profile {
        let grid = &self.grid;
        let two_dx = T::two() * grid.dx;
        let u = velocity(state);
        let r = grid.interior();
        Profile {
            x: grid.cell_centers.iter().map(|x| x.as_f64()).collect(),
            h: interior_f64(&state.h, grid),
            u: interior_f64(&u, grid),
            eta: interior_f64(&state.h, grid),
            w: r.clone().map(|i| (-state.h[i] * (u[i + 1] - u[i - 1]) / two_dx).as_f64()).collect(),
            b: r.map(|i| self.bathymetry.as_ref().map_or(0.0, |b| b.b[i].as_f64())).collect(),
        }
    }
}

pub fn sgn_dt<T: Real>(state: &SwState<T>, grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<T> {
    ClassicalSolver::new(grid.clone(), params.clone(), None)?.dt(state).map(|l| l.dt)
}

/// One step of the given order; ghosts of `state` must be filled.
pub fn sgn_step<T: Real>(
    state: &SwState<T>,
    bathy: Option<&Bathymetry<T>>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    dt: T,
    order: Order,
) -> Result<SwState<T>> {
    state.check_lengths(grid)?;
    let solver = ClassicalSolver::new(grid.clone(), params.clone().with_order(order), bathy.cloned())?;
    solver.advance(state, dt).map(|(s, _)| s)
}

pub fn run_sgn<T: Real>(
    initial: &SwState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    opts: &RunOptions,
) -> Result<(SwState<T>, RunReport)> {
    initial.check_lengths(grid)?;
    let solver = ClassicalSolver::new(grid.clone(), params.clone(), bathy.cloned())?;
    run(&solver, initial, opts)
}
