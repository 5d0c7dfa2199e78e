use crate::error::{Result, SolverError};
use crate::grid::Grid1D;
use crate::scalar::Real;

/// Bottom elevation and its centred derivatives at every stored cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Bathymetry<T> {
    pub b: Vec<T>,
    pub b_x: Vec<T>,
    pub b_xx: Vec<T>,
}

impl<T: Real> Bathymetry<T> {
    /// `b = 0` everywhere.
    pub fn flat(grid: &Grid1D<T>) -> Self {
        let z = vec![T::zero(); grid.len()];
        Self { b: z.clone(), b_x: z.clone(), b_xx: z }
    }

    /// Samples `f` at every cell centre (ghosts included) and differentiates.
    pub fn from_fn(grid: &Grid1D<T>, f: impl Fn(T) -> T) -> Self {
        let b = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        Self::from_samples(grid, b)
    }

    /// Piecewise-linear interpolation through `(x, b)` breakpoints, held constant
    /// beyond the first and last breakpoint.
    pub fn from_breakpoints(grid: &Grid1D<T>, points: &[(T, T)]) -> Result<Self> {
        if points.is_empty() {
            return Err(SolverError::InvalidParameter { name: "bathymetry", reason: "no breakpoints".into() });
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(SolverError::InvalidParameter {
                name: "bathymetry",
                reason: "breakpoint abscissae must be strictly increasing".into(),
            });
        }
        Ok(Self::from_fn(grid, |x| piecewise_linear(points, x)))
    }

    /// Uses `b` as given and computes `b_x`, `b_xx` with centred stencils.
    /// The outermost ghost cells copy their neighbour's derivatives.
    pub fn from_samples(grid: &Grid1D<T>, b: Vec<T>) -> Self {
        let n = b.len();
        let dx = grid.dx;
        let mut b_x = vec![T::zero(); n];
        let mut b_xx = vec![T::zero(); n];
        for i in 1..n - 1 {
            b_x[i] = (b[i + 1] - b[i - 1]) / (T::two() * dx);
            b_xx[i] = (b[i + 1] - T::two() * b[i] + b[i - 1]) / (dx * dx);
        }
        b_x[0] = b_x[1];
        b_xx[0] = b_xx[1];
        b_x[n - 1] = b_x[n - 2];
        b_xx[n - 1] = b_xx[n - 2];
        Self { b, b_x, b_xx }
    }

    pub fn is_flat(&self) -> bool {
        self.b.iter().all(|v| v.is_zero())
    }
}

pub(crate) fn piecewise_linear<T: Real>(points: &[(T, T)], x: T) -> T {
    let (first, last) = (points[0], points[points.len() - 1]);
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let k = points.partition_point(|p| p.0 <= x);
    let (x0, b0) = points[k - 1];
    let (x1, b1) = points[k];
    b0 + (b1 - b0) * (x - x0) / (x1 - x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn quadratic_second_derivative_exact() {
        let g = make_grid(-1.0f64, 2.0, 30, 2).unwrap();
        let bath = Bathymetry::from_fn(&g, |x| x * x);
        for i in 1..g.len() - 1 {
            assert!((bath.b_xx[i] - 2.0).abs() < 1e-9, "b_xx[{i}] = {}", bath.b_xx[i]);
            assert!((bath.b_x[i] - 2.0 * g.x(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_is_zero() {
        let g = make_grid(0.0, 1.0, 4, 2).unwrap();
        let bath = Bathymetry::<f64>::flat(&g);
        assert!(bath.is_flat());
        assert!(bath.b_xx.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn breakpoints_interpolate_and_extend() {
        let pts = [(130.0, 0.0), (140.0, 0.5)];
        assert_eq!(piecewise_linear(&pts, 0.0), 0.0);
        assert_eq!(piecewise_linear(&pts, 135.0), 0.25);
        assert_eq!(piecewise_linear(&pts, 200.0), 0.5);
        let g = make_grid(0.0, 1.0, 4, 2).unwrap();
        assert!(Bathymetry::from_breakpoints(&g, &[(1.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(Bathymetry::<f64>::from_breakpoints(&g, &[]).is_err());
    }
}
