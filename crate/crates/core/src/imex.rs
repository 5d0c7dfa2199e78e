//! Semi-implicit IMEX scheme for the relaxation system.
//!
//! Convection is explicit; the acoustic coupling and the relaxation source are
//! implicit. Each implicit stage reduces to one linear tridiagonal problem for
//! the depth, linearised around the stage's explicit input, followed by a
//! pointwise back-substitution for `q`, `h eta` and `h w`.

use crate::bathymetry::Bathymetry;
use crate::convective::{convective_divergence_centred_heta, eta_at, hsgn_speeds, linear_mode, pressure_gradient};
use crate::error::{Result, SolverError};
use crate::explicit::hsgn_profile;
use crate::grid::Grid1D;
use crate::hsgn::{coeffs_unchecked, p_tilde_unchecked};
use crate::params::{Order, PressureForm, SchemeParams};
use crate::report::{run, Profile, RunOptions, RunReport, StepLimit, TimeStepper};
use crate::scalar::Real;
use crate::spatial::{solve_tridiagonal, TridiagonalSystem};
use crate::state::{fill_ghosts, Boundary, FieldState, HsgnState, Parity};

/// Two-stage IMEX Runge-Kutta pair with `gamma = 1 - 1/sqrt(2)` and
/// `c = 1 / (2 gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImexTableau<T> {
    pub a_explicit: [[T; 2]; 2],
    pub a_implicit: [[T; 2]; 2],
    pub b: [T; 2],
    pub c_explicit: [T; 2],
    pub c_implicit: [T; 2],
    pub gamma: T,
    pub c_coef: T,
}

impl<T: Real> ImexTableau<T> {
    pub fn standard() -> Self {
        let gamma = T::one() - T::one() / T::two().sqrt();
        let c = T::one() / (T::two() * gamma);
        let z = T::zero();
        let b = [T::one() - gamma, gamma];
        Self {
            a_explicit: [[z, z], [c, z]],
            a_implicit: [[gamma, z], b],
            b,
            c_explicit: [z, c],
            c_implicit: [gamma, T::one()],
            gamma,
            c_coef: c,
        }
    }

    /// `[sum b - 1, sum b c_E - 1/2, sum b c_I - 1/2]`.
    pub fn order_residuals(&self) -> [T; 3] {
        let sum_b = self.b[0] + self.b[1];
        let bc = |c: [T; 2]| self.b[0] * c[0] + self.b[1] * c[1] - T::half();
        [sum_b - T::one(), bc(self.c_explicit), bc(self.c_implicit)]
    }

    /// Last implicit row equals the weights.
    pub fn is_stiffly_accurate(&self) -> bool {
        self.a_implicit[1] == self.b
    }

    /// Row sums reproduce the abscissae of both tableaus.
    pub fn row_sum_residual(&self) -> T {
        let mut r = T::zero();
        for s in 0..2 {
            r = r.max((self.a_explicit[s][0] + self.a_explicit[s][1] - self.c_explicit[s]).abs());
            r = r.max((self.a_implicit[s][0] + self.a_implicit[s][1] - self.c_implicit[s]).abs());
        }
        r
    }
}

/// Intermediate quantities of one implicit stage, all at every stored cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitStageWork<T> {
    /// Depth after the (trivial) convective predictor, `h*`.
    pub h_star: Vec<T>,
    pub q_dagger: Vec<T>,
    /// Predicted `(h eta)*`, with the bottom shift removed.
    pub heta_star: Vec<T>,
    /// Predicted `(h w)*`.
    pub hw_star: Vec<T>,
    /// `(h eta)* + tau (h w)* + lambda tau^2`; equals `tilde_heta`.
    pub heta_dagger: Vec<T>,
    /// `(h w)* + lambda tau`.
    pub hw_dagger: Vec<T>,
    /// Right-hand side of the depth system (interior rows).
    pub h_dagger: Vec<T>,
    pub beta1: Vec<T>,
    pub beta2: Vec<T>,
    /// Depth-operator coefficient (`beta` in the discrete scheme).
    pub kappa: Vec<T>,
    pub delta: Vec<T>,
    pub kappa_min: T,
}

/// `(h eta)* + tau (h w)* + lambda tau^2`, cell by cell.
pub fn tilde_heta<T: Real>(heta_star: &[T], hw_star: &[T], lambda: T, tau: T) -> Vec<T> {
    let lt2 = lambda * tau * tau;
    heta_star.iter().zip(hw_star).map(|(&a, &b)| a + tau * b + lt2).collect()
}

/// Semi-implicit stepper.
#[derive(Debug, Clone)]
pub struct SiSolver<T> {
    pub grid: Grid1D<T>,
    pub params: SchemeParams<T>,
    pub bathymetry: Option<Bathymetry<T>>,
    pub tableau: ImexTableau<T>,
}

impl<T: Real> SiSolver<T> {
    pub fn new(grid: Grid1D<T>, params: SchemeParams<T>, bathymetry: Option<Bathymetry<T>>) -> Result<Self> {
        params.validate()?;
        if let Some(b) = &bathymetry {
            if b.b.len() != grid.len() {
                return Err(SolverError::LengthMismatch { expected: grid.len(), found: b.b.len() });
            }
        }
        Ok(Self { grid, params, bathymetry, tableau: ImexTableau::standard() })
    }

    fn bathy(&self) -> Option<&Bathymetry<T>> {
        self.bathymetry.as_ref()
    }

    /// Eigenvalue step `CFL dx / max(|u| + c)`, reduced so that
    /// `max|u| dt / dx <= mcfl_limit`.
    pub fn dt(&self, state: &HsgnState<T>) -> Result<StepLimit<T>> {
        state.check_wet(&self.grid, self.params.h_min)?;
        let (mu, umax) = hsgn_speeds(state, &self.grid, &self.params, self.bathy());
        let dx = self.grid.dx;
        let mut dt = self.params.cfl * dx / mu;
        if umax > T::zero() && umax * dt / dx > self.params.mcfl_limit {
            dt = self.params.mcfl_limit * dx / umax;
        }
        Ok(StepLimit { dt, wave_speed: mu, u_max: umax })
    }

    /// `base + tau R_E(explicit)`: convective update of `q`, `h eta`, `h w`
    /// (plus the bottom source over bathymetry); `h` is left unchanged.
    pub fn predictor(&self, base: &HsgnState<T>, explicit: &HsgnState<T>, tau: T) -> HsgnState<T> {
        let p = &self.params;
        // Over a bottom the implicit chain acts on the physical h eta, whose
        // bottom part 3 h b / 2 follows the implicitly updated depth. Its
        // balance law is (h eta)_t + (h u eta)_x = h w - 3 q b_x / 2.
        let conv = match self.bathy() {
            None => convective_divergence_centred_heta(explicit, &self.grid, linear_mode(p)),
            Some(b) => {
                let mut physical = explicit.clone();
                for (i, v) in physical.heta.iter_mut().enumerate() {
                    *v -= T::cst(1.5) * explicit.h[i] * b.b[i];
                }
                convective_divergence_centred_heta(&physical, &self.grid, linear_mode(p))
            }
        };
        // The implicit increment uses the split form; the balanced form enters
        // as an explicit correction at the linearisation state.
        let correction: Option<Vec<T>> = match p.pressure {
            PressureForm::Split => None,
            PressureForm::Balanced => {
                let bal = pressure_gradient(explicit, &self.grid, p, self.bathy(), PressureForm::Balanced);
                let split = pressure_gradient(explicit, &self.grid, p, self.bathy(), PressureForm::Split);
                Some(bal.iter().zip(&split).map(|(&a, &b)| a - b).collect())
            }
        };
        let mut star = base.clone();
        for i in self.grid.interior() {
            let mut dq = -conv[i][0];
            let mut deta = -conv[i][1];
            if let Some(b) = self.bathy() {
                let h = explicit.h[i];
                let eta = eta_at(explicit, Some(b), i);
                dq -= (p.g * h + T::cst(1.5) * p_tilde_unchecked(h, eta, p.lambda)) * b.b_x[i];
                deta -= T::cst(1.5) * explicit.q[i] * b.b_x[i];
            }
            if let Some(c) = &correction {
                dq -= c[i];
            }
            star.q[i] = base.q[i] + tau * dq;
            star.heta[i] = base.heta[i] + tau * deta;
            star.hw[i] = base.hw[i] - tau * conv[i][2];
        }
        star.apply_boundary(self.grid.n_ghost, p.boundary);
        star
    }

    /// Builds the linear depth problem of an implicit stage.
    ///
    /// `lin` is the linearisation state (coefficients `a^2`, `alpha`, `beta1`
    /// are frozen there), `star` the predicted state, both with ghosts filled.
    pub fn assemble(&self, lin: &HsgnState<T>, star: &HsgnState<T>, tau: T) -> Result<(TridiagonalSystem<T>, ImplicitStageWork<T>)> {
        let grid = &self.grid;
        let p = &self.params;
        let n = grid.len();
        let lam = p.lambda;
        let lt2 = lam * tau * tau;

        let heta_star: Vec<T> = match self.bathy() {
            Some(b) => (0..n).map(|i| star.heta[i] - T::cst(1.5) * star.h[i] * b.b[i]).collect(),
            None => star.heta.clone(),
        };
        let hw_dagger: Vec<T> = star.hw.iter().map(|&w| w + lam * tau).collect();
        let heta_dagger = tilde_heta(&heta_star, &star.hw, lam, tau);

        let mut beta1 = vec![T::zero(); n];
        let mut beta2 = vec![T::zero(); n];
        let mut kappa = vec![T::zero(); n];
        let mut delta = vec![T::zero(); n];
        for i in 0..n {
            let h = lin.h[i];
            let c = coeffs_unchecked(h, eta_at(lin, self.bathy(), i), p.g, lam);
            let b1 = T::one() + lt2 / (h * h);
            let b2 = T::two() * lt2 / (b1 * b1 * h * h * h);
            beta1[i] = b1;
            beta2[i] = b2;
            kappa[i] = c.a2 + lam * c.alpha * b2 * heta_dagger[i];
            delta[i] = c.alpha / b1;
        }
        let g = grid.n_ghost;
        let mut kappa_min = T::infinity();
        for i in g - 1..g + grid.n_cells + 1 {
            let k = kappa[i];
            if !(k > T::zero()) {
                return Err(SolverError::CoercivityViolation { cell: i, kappa: k.as_f64() });
            }
            kappa_min = kappa_min.min(k);
        }

        let m = grid.n_cells;
        let dx = grid.dx;
        let r = tau * tau / (dx * dx);
        let q_coef = tau / (T::two() * dx);
        let e_coef = lt2 / (dx * dx);
        let mut sys = TridiagonalSystem::zeros(m, p.boundary == Boundary::Periodic);
        let mut h_dagger = vec![T::zero(); n];
        let q = &star.q;
        let he = &heta_dagger;
        for k in 0..m {
            let i = g + k;
            let bp = T::half() * (kappa[i] + kappa[i + 1]);
            let bm = T::half() * (kappa[i - 1] + kappa[i]);
            let dp = T::half() * (delta[i] + delta[i + 1]);
            let dm = T::half() * (delta[i - 1] + delta[i]);
            sys.diag[k] = T::one() + r * (bp + bm);
            sys.lower[k] = -r * bm;
            sys.upper[k] = -r * bp;
            let rhs = star.h[i] - q_coef * (q[i + 1] - q[i - 1]) + e_coef * (dp * (he[i + 1] - he[i]) - dm * (he[i] - he[i - 1]));
            sys.rhs[k] = rhs;
            h_dagger[i] = rhs;
        }
        if !sys.periodic {
            // even ghost h = adjacent interior h
            sys.diag[0] += sys.lower[0];
            sys.lower[0] = T::zero();
            sys.diag[m - 1] += sys.upper[m - 1];
            sys.upper[m - 1] = T::zero();
        }
        let work = ImplicitStageWork {
            h_star: star.h.clone(),
            q_dagger: star.q.clone(),
            heta_star,
            hw_star: star.hw.clone(),
            heta_dagger,
            hw_dagger,
            h_dagger,
            beta1,
            beta2,
            kappa,
            delta,
            kappa_min,
        };
        Ok((sys, work))
    }

    /// Recovers the full stage state from the solved interior depth.
    pub fn back_substitute(&self, h_interior: &[T], work: &ImplicitStageWork<T>, tau: T) -> Result<HsgnState<T>> {
        let grid = &self.grid;
        let p = &self.params;
        let n = grid.len();
        let g = grid.n_ghost;
        let lam = p.lambda;
        let lt2 = lam * tau * tau;
        let mut h = vec![T::zero(); n];
        h[grid.interior()].copy_from_slice(h_interior);
        fill_ghosts(&mut h, g, p.boundary, Parity::Even);
        if let Some(i) = grid.interior().find(|&i| !(h[i] > p.h_min)) {
            return Err(SolverError::DryBed { cell: i, h: h[i].as_f64(), h_min: p.h_min.as_f64() });
        }
        let coef = tau / (T::two() * grid.dx);
        let mut out = HsgnState::zeros(n);
        let he = &work.heta_dagger;
        for i in grid.interior() {
            let hb = h[i];
            out.h[i] = hb;
            out.q[i] =
                work.q_dagger[i] - coef * work.kappa[i] * (h[i + 1] - h[i - 1]) - lam * coef * work.delta[i] * (he[i + 1] - he[i - 1]);
            // heta (1 + lambda tau^2 / h^2) = heta~, solved for the increment
            // over heta* so that a resting cell is reproduced exactly
            let ratio = work.heta_star[i] / (hb * hb);
            let heta = work.heta_star[i] + (tau * work.hw_star[i] + lt2 * (T::one() - ratio)) / (T::one() + lt2 / (hb * hb));
            out.heta[i] = match self.bathy() {
                Some(b) => heta + T::cst(1.5) * hb * b.b[i],
                None => heta,
            };
            out.hw[i] = work.hw_star[i] + lam * tau * (T::one() - heta / (hb * hb));
        }
        out.apply_boundary(g, p.boundary);
        out.check_wet(grid, p.h_min)?;
        Ok(out)
    }

    /// `U = base + tau (R_E(explicit) + R_I(U))`, linearised at `explicit`.
    pub fn implicit_stage(&self, base: &HsgnState<T>, explicit: &HsgnState<T>, tau: T) -> Result<(HsgnState<T>, T)> {
        let star = self.predictor(base, explicit, tau);
        let (mut sys, work) = self.assemble(explicit, &star, tau)?;
        // Solve for the increment over h*: rows read h + sum of off-diagonal
        // differences, so a depth already satisfying the system stays exact.
        let hs = &star.h[self.grid.interior()];
        let m = hs.len();
        for k in 0..m {
            let (prev, next) = ((k + m - 1) % m, (k + 1) % m);
            sys.rhs[k] = sys.rhs[k] - hs[k] + sys.lower[k] * (hs[k] - hs[prev]) + sys.upper[k] * (hs[k] - hs[next]);
        }
        let dh = solve_tridiagonal(&sys)?;
        let h: Vec<T> = hs.iter().zip(&dh).map(|(&a, &d)| a + d).collect();
        let next = self.back_substitute(&h, &work, tau)?;
        Ok((next, work.kappa_min))
    }

    /// First-order splitting: one implicit stage with `tau = dt`.
    pub fn step_order1(&self, state: &HsgnState<T>, dt: T) -> Result<(HsgnState<T>, T)> {
        self.implicit_stage(state, state, dt)
    }

    /// Second-order IMEX step in the efficient form; the result is the second
    /// implicit stage itself.
    pub fn step_order2(&self, state: &HsgnState<T>, dt: T) -> Result<(HsgnState<T>, T)> {
        let tab = &self.tableau;
        let gamma = tab.gamma;
        let tau = gamma * dt;
        let (stage1, k1) = self.implicit_stage(state, state, tau)?;
        // affine combinations written as x + c (y - x), exact when y = x
        let toward = |c: T| HsgnState::lincomb(T::one(), state, c, &HsgnState::lincomb(T::one(), &stage1, -T::one(), state));
        let explicit2 = toward(tab.c_coef / gamma);
        let base2 = toward((T::one() - gamma) / gamma);
        explicit2.check_wet(&self.grid, self.params.h_min)?;
        let (stage2, k2) = self.implicit_stage(&base2, &explicit2, tau)?;
        Ok((stage2, k1.min(k2)))
    }
}

impl<T: Real> TimeStepper<T> for SiSolver<T> {
    type State = HsgnState<T>;

    fn name(&self) -> &'static str {
        "si-hsgn"
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
        let (next, kappa) = match self.params.order {
            Order::First => self.step_order1(state, dt)?,
            Order::Second => self.step_order2(state, dt)?,
        };
        Ok((next, Some(kappa)))
    }

    fn profile(&self, state: &HsgnState<T>) -> Profile {
        hsgn_profile(state, &self.grid, self.bathymetry.as_ref())
    }
}

fn flat_solver<T: Real>(grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<SiSolver<T>> {
    SiSolver::new(grid.clone(), params.clone(), None)
}

/// Explicit convective update over a flat bottom with `base = explicit = state`.
pub fn convective_predictor<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, params: &SchemeParams<T>, tau: T) -> Result<HsgnState<T>> {
    state.check_lengths(grid)?;
    state.check_wet(grid, params.h_min)?;
    Ok(flat_solver(grid, params)?.predictor(state, state, tau))
}

/// Depth system of an implicit stage whose linearisation state is `state`.
pub fn assemble_depth_system<T: Real>(
    state: &HsgnState<T>,
    predictor: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    tau: T,
) -> Result<(TridiagonalSystem<T>, ImplicitStageWork<T>)> {
    flat_solver(grid, params)?.assemble(state, predictor, tau)
}

pub fn back_substitute<T: Real>(
    h_new: &[T],
    work: &ImplicitStageWork<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    tau: T,
) -> Result<HsgnState<T>> {
    flat_solver(grid, params)?.back_substitute(h_new, work, tau)
}

/// One second-order IMEX step over a flat bottom.
pub fn imex_rk2_step<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, params: &SchemeParams<T>, dt: T) -> Result<HsgnState<T>> {
    state.check_lengths(grid)?;
    flat_solver(grid, params)?.step_order2(state, dt).map(|(s, _)| s)
}

pub fn si_dt<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, params: &SchemeParams<T>) -> Result<T> {
    flat_solver(grid, params)?.dt(state).map(|l| l.dt)
}

/// Runs the semi-implicit scheme to `params.t_final`.
pub fn run_si<T: Real>(
    initial: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    opts: &RunOptions,
) -> Result<(HsgnState<T>, RunReport)> {
    initial.check_lengths(grid)?;
    let solver = SiSolver::new(grid.clone(), params.clone(), bathy.cloned())?;
    run(&solver, initial, opts)
}
