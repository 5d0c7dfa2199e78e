use std::ops::Range;

use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Uniform cell-centred mesh with `n_ghost` ghost layers on each side.
///
/// Field vectors are indexed over `n_cells + 2 * n_ghost` entries; interior
/// cell `k` lives at storage index `n_ghost + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<T> {
    pub x_min: T,
    pub x_max: T,
    pub n_cells: usize,
    pub n_ghost: usize,
    pub dx: T,
    /// Interior cell centres, `x_min + (k + 1/2) dx`.
    pub cell_centers: Vec<T>,
}

pub const MIN_GHOST: usize = 2;

impl<T: Real> Grid1D<T> {
    pub fn new(x_min: T, x_max: T, n_cells: usize, n_ghost: usize) -> Result<Self> {
        if !(x_max > x_min) || n_cells < 4 {
            return Err(SolverError::InvalidExtent { x_min: x_min.as_f64(), x_max: x_max.as_f64(), n_cells });
        }
        if n_ghost < MIN_GHOST {
            return Err(SolverError::InvalidParameter { name: "n_ghost", reason: format!("{n_ghost} < {MIN_GHOST}") });
        }
        let dx = (x_max - x_min) / T::from_usize(n_cells).unwrap();
        let cell_centers = (0..n_cells).map(|k| x_min + (T::from_usize(k).unwrap() + T::half()) * dx).collect();
        Ok(Self { x_min, x_max, n_cells, n_ghost, dx, cell_centers })
    }

    /// Storage length including ghosts.
    #[inline]
    pub fn len(&self) -> usize {
        self.n_cells + 2 * self.n_ghost
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n_cells == 0
    }

    /// Storage indices of interior cells.
    #[inline]
    pub fn interior(&self) -> Range<usize> {
        self.n_ghost..self.n_ghost + self.n_cells
    }

    /// Centre of the cell at storage index `i` (ghosts included).
    #[inline]
    pub fn x(&self, i: usize) -> T {
        self.x_min + (T::from_usize(i).unwrap() - T::from_usize(self.n_ghost).unwrap() + T::half()) * self.dx
    }

    /// Centres of every stored cell, ghosts included.
    pub fn all_centers(&self) -> Vec<T> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Storage index of the interior cell nearest to `x` (clamped to the domain).
    pub fn nearest_cell(&self, x: T) -> usize {
        let k = ((x - self.x_min) / self.dx - T::half()).round();
        let k = k.max(T::zero()).min(T::from_usize(self.n_cells - 1).unwrap());
        self.n_ghost + k.to_usize().unwrap_or(0)
    }
}

/// Builds a grid with the given ghost count.
pub fn make_grid<T: Real>(x_min: T, x_max: T, n_cells: usize, n_ghost: usize) -> Result<Grid1D<T>> {
    Grid1D::new(x_min, x_max, n_cells, n_ghost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_benchmark_grid() {
        let g = make_grid(-200.0, 200.0, 5000, 2).unwrap();
        assert_relative_eq!(g.dx, 0.08, epsilon = 1e-14);
        assert_relative_eq!(g.cell_centers[0], -199.96, epsilon = 1e-12);
        assert_eq!(g.len(), 5004);
    }

    #[test]
    fn unit_grid_centres() {
        let g = make_grid(0.0, 1.0, 4, 2).unwrap();
        assert_eq!(g.dx, 0.25);
        assert_eq!(g.cell_centers, vec![0.125, 0.375, 0.625, 0.875]);
        assert_eq!(g.x(0), -0.375);
        assert_eq!(g.x(2), 0.125);
        let g = make_grid(0.0f32, 10.0, 10, 2).unwrap();
        assert_eq!(g.dx, 1.0);
    }

    #[test]
    fn rejects_bad_extent() {
        assert!(matches!(make_grid(1.0, 1.0, 10, 2), Err(SolverError::InvalidExtent { .. })));
        assert!(matches!(make_grid(0.0, 1.0, 3, 2), Err(SolverError::InvalidExtent { .. })));
        assert!(matches!(make_grid(0.0, 1.0, 8, 1), Err(SolverError::InvalidParameter { .. })));
    }

    #[test]
    fn nearest_cell_clamps() {
        let g = make_grid(0.0, 1.0, 4, 2).unwrap();
        assert_eq!(g.nearest_cell(0.3), 3);
        assert_eq!(g.nearest_cell(-5.0), 2);
        assert_eq!(g.nearest_cell(5.0), 5);
    }
}
