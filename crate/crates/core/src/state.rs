//! Cell-centred state containers and ghost-cell policies.

use crate::error::{Result, SolverError};
use crate::grid::Grid1D;
use crate::scalar::Real;

/// Ghost-cell policy at both ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Zero-order extrapolation of the nearest interior cell.
    #[default]
    Transmissive,
    Periodic,
    /// Solid wall: even fields mirrored, odd fields mirrored with a sign flip.
    Reflective,
}

/// Behaviour of a field under the mirror `x -> -x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Fills the `n_ghost` ghost layers on each side of `v`.
pub fn fill_ghosts<T: Real>(v: &mut [T], n_ghost: usize, policy: Boundary, parity: Parity) {
    let n = v.len() - 2 * n_ghost;
    let g = n_ghost;
    let sign = match parity {
        Parity::Even => T::one(),
        Parity::Odd => -T::one(),
    };
    for k in 0..g {
        let (left, right) = match policy {
            Boundary::Transmissive => (v[g], v[g + n - 1]),
            Boundary::Periodic => (v[g + n - 1 - k], v[g + k]),
            Boundary::Reflective => (sign * v[g + k], sign * v[g + n - 1 - k]),
        };
        v[g - 1 - k] = left;
        v[g + n + k] = right;
    }
}

/// A set of per-cell fields that share one ghost policy.
pub trait FieldState<T: Real>: Clone {
    fn depth(&self) -> &[T];
    fn discharge(&self) -> &[T];
    fn fields_mut(&mut self) -> Vec<(&mut Vec<T>, Parity)>;
    fn fields(&self) -> Vec<(&'static str, &[T])>;

    fn apply_boundary(&mut self, n_ghost: usize, policy: Boundary) {
        for (f, parity) in self.fields_mut() {
            fill_ghosts(f, n_ghost, policy, parity);
        }
    }

    /// Checks every interior depth against `h_min` and every field for finiteness.
    fn check_wet(&self, grid: &Grid1D<T>, h_min: T) -> Result<()> {
        for (name, f) in self.fields() {
            if let Some(i) = grid.interior().find(|&i| !f[i].is_finite()) {
                return Err(SolverError::NonFinite { field: name, cell: i });
            }
        }
        let h = self.depth();
        match grid.interior().find(|&i| !(h[i] > h_min)) {
            Some(i) => Err(SolverError::DryBed { cell: i, h: h[i].as_f64(), h_min: h_min.as_f64() }),
            None => Ok(()),
        }
    }
}

/// Conserved variables of the four-equation relaxation system.
///
/// With bathymetry, `heta` stores `h * (eta + 3 b / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HsgnState<T> {
    pub h: Vec<T>,
    pub q: Vec<T>,
    pub heta: Vec<T>,
    pub hw: Vec<T>,
}

/// Depth and discharge of the shallow-water part of the classical system.
#[derive(Debug, Clone, PartialEq)]
pub struct SwState<T> {
    pub h: Vec<T>,
    pub q: Vec<T>,
}

impl<T: Real> HsgnState<T> {
    pub fn zeros(len: usize) -> Self {
        Self { h: vec![T::zero(); len], q: vec![T::zero(); len], heta: vec![T::zero(); len], hw: vec![T::zero(); len] }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// `a * x + b * y`, cell by cell, ghosts included.
    pub fn lincomb(a: T, x: &Self, b: T, y: &Self) -> Self {
        let comb = |u: &[T], v: &[T]| u.iter().zip(v).map(|(&p, &r)| a * p + b * r).collect();
        Self { h: comb(&x.h, &y.h), q: comb(&x.q, &y.q), heta: comb(&x.heta, &y.heta), hw: comb(&x.hw, &y.hw) }
    }

    /// Shallow-water projection `(h, hu)`.
    pub fn to_sw(&self) -> SwState<T> {
        SwState { h: self.h.clone(), q: self.q.clone() }
    }

    pub(crate) fn check_lengths(&self, grid: &Grid1D<T>) -> Result<()> {
        for f in [&self.h, &self.q, &self.heta, &self.hw] {
            if f.len() != grid.len() {
                return Err(SolverError::LengthMismatch { expected: grid.len(), found: f.len() });
            }
        }
        Ok(())
    }
}

impl<T: Real> SwState<T> {
    pub fn zeros(len: usize) -> Self {
        Self { h: vec![T::zero(); len], q: vec![T::zero(); len] }
    }

    pub fn lincomb(a: T, x: &Self, b: T, y: &Self) -> Self {
        let comb = |u: &[T], v: &[T]| u.iter().zip(v).map(|(&p, &r)| a * p + b * r).collect();
        Self { h: comb(&x.h, &y.h), q: comb(&x.q, &y.q) }
    }

    pub(crate) fn check_lengths(&self, grid: &Grid1D<T>) -> Result<()> {
        for f in [&self.h, &self.q] {
            if f.len() != grid.len() {
                return Err(SolverError::LengthMismatch { expected: grid.len(), found: f.len() });
            }
        }
        Ok(())
    }
}

impl<T: Real> FieldState<T> for HsgnState<T> {
    fn depth(&self) -> &[T] {
        &self.h
    }

    fn discharge(&self) -> &[T] {
        &self.q
    }

    fn fields_mut(&mut self) -> Vec<(&mut Vec<T>, Parity)> {
        // w ~ -h u_x is even under reflection, like h and eta.
        vec![(&mut self.h, Parity::Even), (&mut self.q, Parity::Odd), (&mut self.heta, Parity::Even), (&mut self.hw, Parity::Even)]
    }

    fn fields(&self) -> Vec<(&'static str, &[T])> {
        vec![("h", &self.h), ("q", &self.q), ("heta", &self.heta), ("hw", &self.hw)]
    }
}

impl<T: Real> FieldState<T> for SwState<T> {
    fn depth(&self) -> &[T] {
        &self.h
    }

    fn discharge(&self) -> &[T] {
        &self.q
    }

    fn fields_mut(&mut self) -> Vec<(&mut Vec<T>, Parity)> {
        vec![(&mut self.h, Parity::Even), (&mut self.q, Parity::Odd)]
    }

    fn fields(&self) -> Vec<(&'static str, &[T])> {
        vec![("h", &self.h), ("q", &self.q)]
    }
}

/// Fills ghost cells of `state` according to `policy`.
pub fn apply_boundary<T: Real, S: FieldState<T>>(state: &mut S, grid: &Grid1D<T>, policy: Boundary) {
    state.apply_boundary(grid.n_ghost, policy);
}

/// `sum_i h_i dx` over interior cells.
pub fn total_mass<T: Real, S: FieldState<T>>(state: &S, grid: &Grid1D<T>) -> T {
    interior_sum(state.depth(), grid) * grid.dx
}

/// `sum_i q_i dx` over interior cells.
pub fn total_momentum<T: Real, S: FieldState<T>>(state: &S, grid: &Grid1D<T>) -> T {
    interior_sum(state.discharge(), grid) * grid.dx
}

fn interior_sum<T: Real>(v: &[T], grid: &Grid1D<T>) -> T {
    v[grid.interior()].iter().copied().sum()
}
