//! Initial conditions, exact solutions and diagnostics for the standard tests.
//!
//! Every builder fills the relaxation fields with the equilibrium closure
//! `eta = h`, `w = -h u_x` (with `u_x` analytic where available).

use crate::bathymetry::Bathymetry;
use crate::error::{Result, SolverError};
use crate::grid::Grid1D;
use crate::scalar::Real;
use crate::state::{Boundary, FieldState, HsgnState};

/// Solitary wave `h = h_inf (1 + eps sech^2(k (x - x0 - c t)))`, `u = c (1 - h_inf / h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec<T> {
    pub h_inf: T,
    pub amplitude: T,
    pub epsilon: T,
    pub kappa_shape: T,
    pub c_speed: T,
    pub x0: T,
}

impl<T: Real> SolitonSpec<T> {
    pub fn new(h_inf: T, amplitude: T, x0: T, g: T) -> Result<Self> {
        if !(h_inf > T::zero()) || amplitude < T::zero() {
            return Err(SolverError::InvalidParameter {
                name: "soliton",
                reason: format!("need h_inf > 0 and amplitude >= 0, got {h_inf}, {amplitude}"),
            });
        }
        let eps = amplitude / h_inf;
        let kappa = (T::cst(3.0) * eps / (T::cst(4.0) * h_inf * h_inf * (T::one() + eps))).sqrt();
        let c = (g * h_inf * (T::one() + eps)).sqrt();
        Ok(Self { h_inf, amplitude, epsilon: eps, kappa_shape: kappa, c_speed: c, x0 })
    }

    /// `(h, u, u_x)` at `(x, t)`.
    pub fn eval(&self, x: T, t: T) -> (T, T, T) {
        let xi = self.kappa_shape * (x - self.x0 - self.c_speed * t);
        let sech = T::one() / xi.cosh();
        let s2 = sech * sech;
        let h = self.h_inf * (T::one() + self.epsilon * s2);
        let u = self.c_speed * (T::one() - self.h_inf / h);
        let h_x = -T::two() * self.h_inf * self.epsilon * self.kappa_shape * s2 * xi.tanh();
        let u_x = self.c_speed * self.h_inf * h_x / (h * h);
        (h, u, u_x)
    }
}

/// Smoothed hydraulic jump from `h1 = eps h0` (left) to `h0` (right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FavreSpec<T> {
    pub h0: T,
    pub epsilon_ratio: T,
    pub h1: T,
    /// Upstream velocity from the Rankine-Hugoniot condition.
    pub u1: T,
    pub alpha_width: T,
    pub x0: T,
}

impl<T: Real> FavreSpec<T> {
    pub fn new(h0: T, epsilon_ratio: T, x0: T, g: T) -> Result<Self> {
        if !(h0 > T::zero()) || !(epsilon_ratio > T::zero()) {
            return Err(SolverError::InvalidParameter {
                name: "favre",
                reason: format!("need h0 > 0 and epsilon_ratio > 0, got {h0}, {epsilon_ratio}"),
            });
        }
        let h1 = epsilon_ratio * h0;
        let u1 = (g * (h1 + h0) / (T::two() * h0 * h1)).sqrt() * (h1 - h0);
        Ok(Self { h0, epsilon_ratio, h1, u1, alpha_width: T::cst(5.0) * h0, x0 })
    }

    /// Time in seconds for the dimensionless time `T = t sqrt(g / h0)`.
    pub fn physical_time(&self, t_dimless: T, g: T) -> T {
        t_dimless * (self.h0 / g).sqrt()
    }
}

/// Builds a four-field state from `(h, u, u_x)` per stored cell and the bottom.
fn hsgn_from_fn<T: Real>(grid: &Grid1D<T>, bathy: Option<&Bathymetry<T>>, f: impl Fn(T) -> (T, T, T)) -> HsgnState<T> {
    let n = grid.len();
    let mut s = HsgnState::zeros(n);
    for i in 0..n {
        let (h, u, u_x) = f(grid.x(i));
        let shift = bathy.map_or(T::zero(), |b| T::cst(1.5) * b.b[i]);
        s.h[i] = h;
        s.q[i] = h * u;
        s.heta[i] = h * (h + shift);
        s.hw[i] = -h * h * u_x;
    }
    s
}

fn finish<T: Real>(mut s: HsgnState<T>, grid: &Grid1D<T>) -> Result<HsgnState<T>> {
    s.apply_boundary(grid.n_ghost, Boundary::Transmissive);
    s.check_wet(grid, T::zero())?;
    Ok(s)
}

pub fn init_soliton<T: Real>(spec: &SolitonSpec<T>, grid: &Grid1D<T>) -> HsgnState<T> {
    hsgn_from_fn(grid, None, |x| spec.eval(x, T::zero()))
}

/// Exact `(h, u)` at `x`, `t`.
pub fn exact_soliton<T: Real>(spec: &SolitonSpec<T>, x: T, t: T) -> (T, T) {
    let (h, u, _) = spec.eval(x, t);
    (h, u)
}

/// `h = 1 + exp(-x^2 / 20)`, at rest.
pub fn init_gaussian_bell<T: Real>(grid: &Grid1D<T>) -> HsgnState<T> {
    let (h_inf, amp) = (T::one(), T::one());
    hsgn_from_fn(grid, None, |x| (h_inf + amp * (-x * x / T::cst(20.0)).exp(), T::zero(), T::zero()))
}

/// Bottom `b = (h0 + A exp(-2 (x + 50)^2)) / 20`.
pub fn hump_bathymetry<T: Real>(grid: &Grid1D<T>) -> Bathymetry<T> {
    Bathymetry::from_fn(grid, |x| {
        let d = x + T::cst(50.0);
        (T::one() + (-T::two() * d * d).exp()) / T::cst(20.0)
    })
}

/// Surface bump `1 + exp(-x^2)` over the hump bottom, `u = 0.01`.
pub fn init_gaussian_hump<T: Real>(grid: &Grid1D<T>) -> Result<(HsgnState<T>, Bathymetry<T>)> {
    let bathy = hump_bathymetry(grid);
    let u0 = T::cst(1e-2);
    let s = hsgn_from_fn(grid, Some(&bathy), |x| {
        let d = x + T::cst(50.0);
        let b = (T::one() + (-T::two() * d * d).exp()) / T::cst(20.0);
        (T::one() + (-x * x).exp() - b, u0, T::zero())
    });
    Ok((finish(s, grid)?, bathy))
}

/// Still water at surface level `zeta0` over `bathy`.
pub fn init_lake_at_rest<T: Real>(grid: &Grid1D<T>, bathy: &Bathymetry<T>, zeta0: T) -> Result<HsgnState<T>> {
    let mut s = HsgnState::zeros(grid.len());
    for i in 0..grid.len() {
        let h = zeta0 - bathy.b[i];
        s.h[i] = h;
        s.heta[i] = h * (h + T::cst(1.5) * bathy.b[i]);
    }
    finish(s, grid)
}

/// `h = h0 + (h1 - h0) g/2`, `u = u1 g/2`, `g = 1 - tanh((x - x0) / alpha)`.
pub fn init_favre<T: Real>(spec: &FavreSpec<T>, grid: &Grid1D<T>) -> HsgnState<T> {
    hsgn_from_fn(grid, None, |x| {
        let th = ((x - spec.x0) / spec.alpha_width).tanh();
        let gs = T::one() - th;
        let h = spec.h0 + T::half() * (spec.h1 - spec.h0) * gs;
        let u = T::half() * spec.u1 * gs;
        let u_x = -T::half() * spec.u1 * (T::one() - th * th) / spec.alpha_width;
        (h, u, u_x)
    })
}

/// Mirror image of [`init_favre`]: the deep, moving state lies to the right of
/// `x0` and the bore travels to the left.
pub fn init_favre_leftward<T: Real>(spec: &FavreSpec<T>, grid: &Grid1D<T>) -> HsgnState<T> {
    hsgn_from_fn(grid, None, |x| {
        let th = ((x - spec.x0) / spec.alpha_width).tanh();
        let gs = T::one() + th;
        let h = spec.h0 + T::half() * (spec.h1 - spec.h0) * gs;
        let u = -T::half() * spec.u1 * gs;
        let u_x = -T::half() * spec.u1 * (T::one() - th * th) / spec.alpha_width;
        (h, u, u_x)
    })
}

/// Ramp from 0 at `x = 130` to 0.5 at `x = 140`.
pub fn shelf_bathymetry<T: Real>(grid: &Grid1D<T>) -> Bathymetry<T> {
    Bathymetry::from_fn(grid, |x| {
        let ramp = (x - T::cst(130.0)) / T::cst(20.0);
        ramp.max(T::zero()).min(T::half())
    })
}

/// Soliton with `A = 0.2`, `h0 = 1` centred at `x = 80` heading onto the shelf.
pub fn init_shelf<T: Real>(grid: &Grid1D<T>, g: T) -> Result<(HsgnState<T>, Bathymetry<T>)> {
    let bathy = shelf_bathymetry(grid);
    let spec = SolitonSpec::new(T::one(), T::cst(0.2), T::cst(80.0), g)?;
    let mut s = HsgnState::zeros(grid.len());
    for i in 0..grid.len() {
        let (zeta, u, u_x) = spec.eval(grid.x(i), T::zero());
        let h = zeta - bathy.b[i];
        s.h[i] = h;
        s.q[i] = h * u;
        s.heta[i] = h * (h + T::cst(1.5) * bathy.b[i]);
        s.hw[i] = -h * h * u_x;
    }
    Ok((finish(s, grid)?, bathy))
}

/// Wavenumber of the monochromatic train.
pub const DINGEMANS_K: f64 = 0.8406220896381442;
pub const DINGEMANS_GAUGES: [f64; 4] = [3.04, 9.44, 20.04, 26.04];
/// Submerged-bar flume geometry (externally sourced, not part of the model).
pub const DINGEMANS_BAR: [(f64, f64); 4] = [(11.01, 0.0), (23.04, 0.6), (27.04, 0.6), (33.07, 0.0)];

/// Thirteen-wavelength train `z = h0 + A cos(k x)` on `[-34.5 pi/k, -8.5 pi/k]`
/// with `A = 0.02`, `h0 = 0.8`. `bar` overrides the bottom breakpoints.
pub fn init_dingemans<T: Real>(grid: &Grid1D<T>, g: T, bar: Option<&[(T, T)]>) -> Result<(HsgnState<T>, Bathymetry<T>, Vec<f64>)> {
    let default: Vec<(T, T)> = DINGEMANS_BAR.iter().map(|&(x, b)| (T::cst(x), T::cst(b))).collect();
    let bathy = Bathymetry::from_breakpoints(grid, bar.unwrap_or(&default))?;
    let k = T::cst(DINGEMANS_K);
    let (h0, amp) = (T::cst(0.8), T::cst(0.02));
    let pi = T::PI();
    let (lo, hi) = (-T::cst(34.5) * pi / k, -T::cst(8.5) * pi / k);
    let speed = ((g / k) * (k * h0).tanh()).sqrt();
    let mut s = HsgnState::zeros(grid.len());
    for i in 0..grid.len() {
        let x = grid.x(i);
        let (z, z_x) = if x >= lo && x <= hi { (h0 + amp * (k * x).cos(), -amp * k * (k * x).sin()) } else { (h0, T::zero()) };
        let h = z - bathy.b[i];
        let u = speed * (z - h0) / h0;
        s.h[i] = h;
        s.q[i] = h * u;
        s.heta[i] = h * (h + T::cst(1.5) * bathy.b[i]);
        s.hw[i] = -h * h * speed * z_x / h0;
    }
    Ok((finish(s, grid)?, bathy, DINGEMANS_GAUGES.to_vec()))
}

/// `||num - exact||_1 / ||num||_1`.
pub fn l1_error(num: &[f64], exact: &[f64]) -> Result<f64> {
    if num.len() != exact.len() {
        return Err(SolverError::LengthMismatch { expected: num.len(), found: exact.len() });
    }
    let norm: f64 = num.iter().map(|v| v.abs()).sum();
    if norm == 0.0 {
        return Err(SolverError::ZeroNorm);
    }
    let diff: f64 = num.iter().zip(exact).map(|(a, b)| (a - b).abs()).sum();
    Ok(diff / norm)
}

/// `log2(e_coarse / e_fine)`.
pub fn observed_order(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

/// Leading crest and trough of an undular bore travelling to the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoreExtrema {
    /// `(h - h0) / h0` at the first crest.
    pub first_peak: f64,
    pub first_trough: f64,
    pub crest_x: f64,
    pub trough_x: f64,
    /// Upstream elevation used as the plateau reference.
    pub plateau: f64,
}

/// Locates the front-most crest behind the half-height crossing of the jump
/// and the trough that follows it. `x` and `h` are interior values.
pub fn favre_peak_trough(x: &[f64], h: &[f64], h0: f64) -> Result<BoreExtrema> {
    if x.len() != h.len() {
        return Err(SolverError::LengthMismatch { expected: x.len(), found: h.len() });
    }
    let n = h.len();
    if n < 8 {
        return Err(SolverError::NoBoreFound);
    }
    let e: Vec<f64> = h.iter().map(|v| (v - h0) / h0).collect();
    let m = (n / 10).max(1);
    let plateau = e[..m].iter().sum::<f64>() / m as f64;
    let front = (0..n).rev().find(|&i| e[i] > 0.5 * plateau).ok_or(SolverError::NoBoreFound)?;
    let is_max = |i: usize| e[i] > e[i - 1] && e[i] >= e[i + 1];
    let is_min = |i: usize| e[i] < e[i - 1] && e[i] <= e[i + 1];
    let start = front.min(n - 2);
    let crest = (1..=start).rev().find(|&i| is_max(i)).ok_or(SolverError::NoBoreFound)?;
    if e[crest] <= plateau + 1e-4 {
        return Err(SolverError::NoBoreFound);
    }
    let trough = (1..crest).rev().find(|&i| is_min(i)).ok_or(SolverError::NoBoreFound)?;
    Ok(BoreExtrema { first_peak: e[crest], first_trough: e[trough], crest_x: x[crest], trough_x: x[trough], plateau })
}

/// Mean of `(h - h0) / h0` over `[crest_x - far h0, crest_x - near h0]`.
pub fn plateau_mean(x: &[f64], h: &[f64], h0: f64, crest_x: f64, near: f64, far: f64) -> Result<f64> {
    let (lo, hi) = (crest_x - far * h0, crest_x - near * h0);
    let vals: Vec<f64> = x.iter().zip(h).filter(|(&xi, _)| xi >= lo && xi <= hi).map(|(_, &hi)| (hi - h0) / h0).collect();
    if vals.is_empty() {
        return Err(SolverError::NoBoreFound);
    }
    Ok(vals.iter().sum::<f64>() / vals.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::hsgn::relaxation_source;
    use crate::state::total_mass;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const G: f64 = 9.81;

    #[test]
    fn soliton_examples() {
        let spec = SolitonSpec::new(1.0, 1.0, 0.0, G).unwrap();
        assert_relative_eq!(spec.c_speed, 4.42945, epsilon = 1e-5);
        assert_relative_eq!(spec.kappa_shape, 0.612372, epsilon = 1e-6);
        let (h, u) = exact_soliton(&spec, 0.0, 0.0);
        assert_eq!(h, 2.0);
        assert_relative_eq!(u, 2.21472, epsilon = 1e-5);
        let (h, _) = exact_soliton(&spec, spec.c_speed, 1.0);
        assert_relative_eq!(h, 2.0, epsilon = 1e-15);
        let (h, u, u_x) = spec.eval(60.0, 0.0);
        assert!((h - 1.0).abs() < 1e-20 + 1e-9 && u.abs() < 1e-9 && u_x.abs() < 1e-9);
        let flat = SolitonSpec::new(1.0, 0.0, 0.0, G).unwrap();
        assert_eq!(flat.eval(0.3, 2.0), (1.0, 0.0, 0.0));
    }

    #[test]
    fn soliton_state_and_mass() {
        let grid = make_grid::<f64>(-50.0, 50.0, 2000, 2).unwrap();
        let spec = SolitonSpec::new(1.0, 1.0, 0.0, G).unwrap();
        let s = init_soliton(&spec, &grid);
        assert_relative_eq!(total_mass(&s, &grid), 100.0 + 2.0 / spec.kappa_shape, epsilon = 1e-6);
        assert_relative_eq!(total_mass(&s, &grid), 103.2659, epsilon = 1e-4);
        for i in grid.interior() {
            assert_eq!(s.heta[i], s.h[i] * s.h[i]);
            let (_, u) = exact_soliton(&spec, grid.x(i), 0.0);
            assert_relative_eq!(s.q[i], s.h[i] * u, epsilon = 1e-15);
        }
        // w = -h u_x against a centred difference of the exact velocity
        let i = grid.nearest_cell(1.3);
        let d = 1e-6;
        let ux = (exact_soliton(&spec, grid.x(i) + d, 0.0).1 - exact_soliton(&spec, grid.x(i) - d, 0.0).1) / (2.0 * d);
        assert_relative_eq!(s.hw[i] / s.h[i], -s.h[i] * ux, epsilon = 1e-7);
    }

    #[test]
    fn gaussian_bell_examples() {
        let grid = make_grid::<f64>(-200.0, 200.0, 1001, 2).unwrap();
        let s = init_gaussian_bell(&grid);
        let c = grid.nearest_cell(0.0);
        assert_relative_eq!(grid.x(c), 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.h[c], 2.0, epsilon = 1e-15);
        assert_relative_eq!(s.h[grid.interior().start], 1.0, epsilon = 1e-15);
        let r = grid.interior();
        for (a, b) in r.clone().zip(r.rev()) {
            assert_relative_eq!(s.h[a], s.h[b], epsilon = 1e-12);
        }
        assert!(s.q.iter().chain(&s.hw).all(|&v| v == 0.0));
    }

    #[test]
    fn hump_examples() {
        let grid = make_grid::<f64>(-150.0, 150.0, 3000, 2).unwrap();
        let (s, bathy) = init_gaussian_hump(&grid).unwrap();
        let i = grid.nearest_cell(-50.0);
        let x = grid.x(i);
        assert_relative_eq!(bathy.b[i], (1.0 + (-2.0 * (x + 50.0) * (x + 50.0)).exp()) / 20.0, epsilon = 1e-15);
        let at = |x: f64| (1.0 + (-2.0 * (x + 50.0f64).powi(2)).exp()) / 20.0;
        assert_relative_eq!(at(-50.0), 0.1, epsilon = 1e-15);
        assert_relative_eq!(bathy.b[grid.interior().start], 0.05, epsilon = 1e-15);
        for i in grid.interior() {
            assert_relative_eq!(s.h[i] + bathy.b[i], 1.0 + (-grid.x(i).powi(2)).exp(), epsilon = 1e-14);
            assert_relative_eq!(s.q[i] / s.h[i], 0.01, epsilon = 1e-15);
        }
    }

    #[test]
    fn favre_examples() {
        let spec = FavreSpec::new(0.2, 1.1, 0.0, G).unwrap();
        assert_relative_eq!(spec.h1, 0.22, epsilon = 1e-15);
        assert_relative_eq!(spec.u1, 0.1368509474508, epsilon = 1e-12);
        assert_relative_eq!(spec.alpha_width, 1.0, epsilon = 1e-15);
        assert_relative_eq!(spec.physical_time(50.0, G), 7.1392, epsilon = 1e-4);
        let grid = make_grid::<f64>(-50.0, 50.0, 200, 2).unwrap();
        let s = init_favre(&spec, &grid);
        let (l, r) = (grid.interior().start, grid.interior().end - 1);
        assert_relative_eq!(s.h[l], 0.22, epsilon = 1e-12);
        assert_relative_eq!(s.q[l] / s.h[l], spec.u1, epsilon = 1e-12);
        assert_relative_eq!(s.h[r], 0.2, epsilon = 1e-12);
        assert!((s.q[r] / s.h[r]).abs() < 1e-12);
        let m = init_favre_leftward(&spec, &grid);
        for (a, b) in grid.interior().zip(grid.interior().rev()) {
            assert_relative_eq!(m.h[a], s.h[b], epsilon = 1e-12);
            assert_relative_eq!(m.q[a], -s.q[b], epsilon = 1e-12);
            assert_relative_eq!(m.hw[a], s.hw[b], epsilon = 1e-12);
        }
    }

    #[test]
    fn shelf_examples() {
        let grid = make_grid::<f64>(0.0, 280.0, 2800, 2).unwrap();
        let (s, bathy) = init_shelf(&grid, G).unwrap();
        let i = grid.nearest_cell(135.0);
        assert_relative_eq!(bathy.b[i], (grid.x(i) - 130.0) / 20.0, epsilon = 1e-12);
        assert_relative_eq!(Bathymetry::from_fn(&grid, |x| ((x - 130.0) / 20.0f64).clamp(0.0, 0.5)).b[i], bathy.b[i]);
        assert_relative_eq!(s.h[grid.interior().end - 1], 0.5, epsilon = 1e-12);
        let spec = SolitonSpec::new(1.0, 0.2, 80.0, G).unwrap();
        assert_relative_eq!(spec.eval(80.0, 0.0).0, 1.2, epsilon = 1e-15);
        let i = grid.nearest_cell(80.0);
        assert!((s.h[i] - 1.2).abs() < 1e-3);
    }

    #[test]
    fn dingemans_examples() {
        let grid = make_grid::<f64>(-140.0, 100.0, 4800, 2).unwrap();
        let (s, bathy, gauges) = init_dingemans(&grid, G, None).unwrap();
        assert_eq!(gauges, vec![3.04, 9.44, 20.04, 26.04]);
        let k = DINGEMANS_K;
        let wavelength = 2.0 * std::f64::consts::PI / k;
        assert_relative_eq!((34.5 - 8.5) * std::f64::consts::PI / k / wavelength, 13.0, epsilon = 1e-12);
        let lo = -34.5 * std::f64::consts::PI / k;
        let hi = -8.5 * std::f64::consts::PI / k;
        let amp_u = ((G / k) * (0.8 * k).tanh()).sqrt() * 0.02 / 0.8;
        assert_relative_eq!(amp_u, 0.0654112896330, epsilon = 1e-12);
        let mut umax = 0.0f64;
        for i in grid.interior() {
            let x = grid.x(i);
            let z = s.h[i] + bathy.b[i];
            if x < lo || x > hi {
                assert_relative_eq!(z, 0.8, epsilon = 1e-15);
            }
            umax = umax.max((s.q[i] / s.h[i]).abs());
        }
        assert!(umax <= amp_u * (1.0 + 1e-12) && umax > 0.99 * amp_u);
        assert_relative_eq!(bathy.b[grid.nearest_cell(25.0)], 0.6, epsilon = 1e-12);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(l1_error(&[2.0; 3], &[1.0; 3]).unwrap(), 0.5);
        assert_eq!(l1_error(&[0.0; 3], &[1.0; 3]), Err(SolverError::ZeroNorm));
        assert!(l1_error(&[1.0], &[1.0, 2.0]).is_err());
        assert_eq!(observed_order(4.0, 1.0), 2.0);
        assert_eq!(observed_order(1.0, 1.0), 0.0);
    }

    fn synthetic_bore() -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.1).collect();
        let e = |x: f64| {
            if x <= 50.0 {
                0.1 + 0.05 * (2.0 * std::f64::consts::PI * (x - 45.0) / 10.0).cos()
            } else {
                (0.05 * (1.0 - (x - 50.0) / 5.0)).max(0.0)
            }
        };
        let h = x.iter().map(|&x| 1.0 + e(x)).collect();
        (x, h)
    }

    #[test]
    fn bore_extrema_on_synthetic_profile() {
        let (x, h) = synthetic_bore();
        let b = favre_peak_trough(&x, &h, 1.0).unwrap();
        assert_relative_eq!(b.first_peak, 0.15, epsilon = 1e-12);
        assert_relative_eq!(b.first_trough, 0.05, epsilon = 1e-12);
        assert_relative_eq!(b.crest_x, 45.0, epsilon = 1e-9);
        assert_relative_eq!(b.trough_x, 40.0, epsilon = 1e-9);
        assert_relative_eq!(plateau_mean(&x, &h, 1.0, 45.0, 5.0, 25.0).unwrap(), 0.1, epsilon = 1e-3);
        let mono: Vec<f64> = x.iter().map(|&x| 1.1 - 0.1 * (x / 100.0)).collect();
        assert_eq!(favre_peak_trough(&x, &mono, 1.0), Err(SolverError::NoBoreFound));
    }

    proptest! {
        #[test]
        fn soliton_is_travelling_wave(x in -30.0f64..30.0, t in 0.0f64..3.0, shift in 0.0f64..1.0, amp in 0.05f64..1.0) {
            let spec = SolitonSpec::new(1.0, amp, -5.0, G).unwrap();
            let (h1, u1) = exact_soliton(&spec, x, t);
            let (h2, u2) = exact_soliton(&spec, x - spec.c_speed * shift, t - shift);
            prop_assert!((h1 - h2).abs() <= 1e-12 && (u1 - u2).abs() <= 1e-12);
        }

        #[test]
        fn initial_states_are_in_equilibrium(n in 20usize..200, amp in 0.05f64..1.0) {
            let grid = make_grid::<f64>(-50.0, 50.0, n, 2).unwrap();
            let spec = SolitonSpec::new(1.0, amp, 0.0, G).unwrap();
            let states = [
                init_soliton(&spec, &grid),
                init_gaussian_bell(&grid),
                init_favre(&FavreSpec::new(0.2, 1.0 + 0.3 * amp, 0.0, G).unwrap(), &grid),
            ];
            for s in &states {
                for i in grid.interior() {
                    prop_assert!(s.h[i] > 0.0);
                    prop_assert!(relaxation_source(s.h[i], s.heta[i] / s.h[i], 1000.0).unwrap().abs() <= 1e-9);
                }
            }
        }
    }
}
