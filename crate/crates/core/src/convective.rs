//! Pieces of the relaxation-system discretisation shared by the explicit and
//! semi-implicit schemes.

use crate::bathymetry::Bathymetry;
use crate::grid::Grid1D;
use crate::hsgn::coeffs_unchecked;
use crate::params::{Order, PressureForm, SchemeParams};
use crate::scalar::Real;
use crate::spatial::central_flux_diff;
use crate::spatial::{reconstruct_fields, rusanov_flux_diff, rusanov_flux_diff_with};
use crate::state::HsgnState;

/// Face reconstruction mode for an order.
pub(crate) fn linear_mode<T: Real>(params: &SchemeParams<T>) -> Option<bool> {
    match params.order {
        Order::First => None,
        Order::Second => Some(params.limiter),
    }
}

/// Rusanov divergences `(D^(q u), D^(h u eta), D^(h u w))` at every cell, with
/// dissipation speed `|u|`. `heta` is transported as stored, so over
/// bathymetry the middle component carries `eta~`.
pub(crate) fn convective_divergence<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, mode: Option<bool>) -> Vec<[T; 3]> {
    let faces = reconstruct_fields([&state.h, &state.q, &state.heta, &state.hw], grid.dx, mode);
    rusanov_flux_diff(
        &faces,
        |s: &[T; 4]| {
            let u = s[1] / s[0];
            [s[1] * u, s[2] * u, s[3] * u]
        },
        |s: &[T; 4]| [s[1], s[2], s[3]],
        |s: &[T; 4]| (s[1] / s[0]).abs(),
        grid.dx,
    )
}

/// As [`convective_divergence`], but the `h u eta` flux takes the centred
/// face average `(F_i + F_{i+1}) / 2` while keeping the `|u|` Rusanov jump of
/// the reconstructed `heta`.
///
/// `h u eta = eta q` carries the coupling that the implicit depth solve
/// cancels against the centred mass flux; reconstructing it leaves a
/// grid-scale mismatch that grows when `lambda` is large.
pub(crate) fn convective_divergence_centred_heta<T: Real>(state: &HsgnState<T>, grid: &Grid1D<T>, mode: Option<bool>) -> Vec<[T; 3]> {
    let mut div = convective_divergence(state, grid, mode);
    let faces = reconstruct_fields([&state.h, &state.q, &state.heta], grid.dx, mode);
    let n = grid.len();
    let cell: Vec<T> = (0..n).map(|i| state.heta[i] * state.q[i] / state.h[i]).collect();
    let flux: Vec<T> = (0..n - 1)
        .map(|j| {
            let (l, r) = (&faces.left[j], &faces.right[j]);
            let alpha = (l[1] / l[0]).abs().max((r[1] / r[0]).abs());
            T::half() * (cell[j] + cell[j + 1]) - T::half() * alpha * (r[2] - l[2])
        })
        .collect();
    for i in 1..n - 1 {
        div[i][1] = (flux[i] - flux[i - 1]) / grid.dx;
    }
    div
}

/// Rusanov divergences of all four fields, `(D^(q), D^(q u), D^(h u eta), D^(h u w))`,
/// with the face speed `max(s_i, s_{i+1})`, `s = |u| + c` per cell.
pub(crate) fn acoustic_divergence<T: Real>(
    state: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    mode: Option<bool>,
) -> Vec<[T; 4]> {
    let n = grid.len();
    let speed: Vec<T> = (0..n)
        .map(|i| {
            let h = state.h[i];
            let c2 = crate::hsgn::celerity2_unchecked(h, eta_at(state, bathy, i), params.g, params.lambda);
            (state.q[i] / h).abs() + c2.sqrt()
        })
        .collect();
    let alpha: Vec<T> = (0..n - 1).map(|j| speed[j].max(speed[j + 1])).collect();
    let faces = reconstruct_fields([&state.h, &state.q, &state.heta, &state.hw], grid.dx, mode);
    rusanov_flux_diff_with(
        &faces,
        |s: &[T; 4]| {
            let u = s[1] / s[0];
            [s[1], s[1] * u, s[2] * u, s[3] * u]
        },
        |s: &[T; 4]| *s,
        &alpha,
        grid.dx,
    )
}

/// Pressure gradient `p_x` at every cell in the requested form; zero at the
/// two outermost cells.
pub(crate) fn pressure_gradient<T: Real>(
    state: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
    form: PressureForm,
) -> Vec<T> {
    let n = grid.len();
    let eta: Vec<T> = (0..n).map(|i| eta_at(state, bathy, i)).collect();
    let dh = central_flux_diff(&state.h, grid.dx);
    match form {
        PressureForm::Split => {
            let heta: Vec<T> = (0..n).map(|i| state.h[i] * eta[i]).collect();
            let dheta = central_flux_diff(&heta, grid.dx);
            (0..n)
                .map(|i| {
                    let c = coeffs_unchecked(state.h[i], eta[i], params.g, params.lambda);
                    c.a2 * dh[i] + params.lambda * c.alpha * dheta[i]
                })
                .collect()
        }
        PressureForm::Balanced => {
            let third = params.lambda / T::cst(3.0);
            let p_nh: Vec<T> = (0..n).map(|i| third * eta[i] * (T::one() - eta[i] / state.h[i])).collect();
            let dp = central_flux_diff(&p_nh, grid.dx);
            (0..n).map(|i| params.g * state.h[i] * dh[i] + dp[i]).collect()
        }
    }
}

/// Physical `eta` at cell `i`, undoing the `3 b / 2` shift over bathymetry.
#[inline]
pub(crate) fn eta_at<T: Real>(state: &HsgnState<T>, bathy: Option<&Bathymetry<T>>, i: usize) -> T {
    let eta = state.heta[i] / state.h[i];
    match bathy {
        Some(b) => eta - T::cst(1.5) * b.b[i],
        None => eta,
    }
}

/// `max(|u| + c)` and `max |u|` over interior cells.
pub(crate) fn hsgn_speeds<T: Real>(
    state: &HsgnState<T>,
    grid: &Grid1D<T>,
    params: &SchemeParams<T>,
    bathy: Option<&Bathymetry<T>>,
) -> (T, T) {
    let mut mu = T::zero();
    let mut umax = T::zero();
    for i in grid.interior() {
        let h = state.h[i];
        let u = (state.q[i] / h).abs();
        let c2 = crate::hsgn::celerity2_unchecked(h, eta_at(state, bathy, i), params.g, params.lambda);
        mu = mu.max(u + c2.sqrt());
        umax = umax.max(u);
    }
    (mu, umax)
}
