//! Discrete spatial operators shared by every scheme.
//!
//! Face arrays have one entry per pair of adjacent stored cells: face `j`
//! separates cells `j` and `j + 1`. Cell-valued outputs keep the storage
//! length of their input and are zero in the outermost cells, where the
//! stencil is incomplete.

use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// `(F[i+1] - F[i-1]) / (2 dx)`, i.e. the divided difference of the
/// arithmetic face averages `(F[i] + F[i+1]) / 2`.
pub fn central_flux_diff<T: Real>(f: &[T], dx: T) -> Vec<T> {
    let n = f.len();
    let mut out = vec![T::zero(); n];
    let inv = T::one() / (T::two() * dx);
    for i in 1..n.saturating_sub(1) {
        out[i] = (f[i + 1] - f[i - 1]) * inv;
    }
    out
}

/// Left and right traces at every face.
#[derive(Debug, Clone, PartialEq)]
pub struct Faces<U> {
    /// Trace from the cell on the left of the face (`U^-`).
    pub left: Vec<U>,
    /// Trace from the cell on the right of the face (`U^+`).
    pub right: Vec<U>,
}

impl<U> Faces<U> {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }
}

#[inline]
fn minmod<T: Real>(a: T, b: T) -> T {
    if a * b <= T::zero() {
        T::zero()
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Cell slopes: the unlimited centred slope `(v[i+1] - v[i-1]) / (2 dx)`, or
/// minmod of the one-sided slopes when `limited`. Zero in the end cells.
pub fn slopes<T: Real>(v: &[T], dx: T, limited: bool) -> Vec<T> {
    let n = v.len();
    let mut s = vec![T::zero(); n];
    for i in 1..n.saturating_sub(1) {
        s[i] = if limited { minmod((v[i + 1] - v[i]) / dx, (v[i] - v[i - 1]) / dx) } else { (v[i + 1] - v[i - 1]) / (T::two() * dx) };
    }
    s
}

/// Linear reconstruction `v^-_{i+1/2} = v_i + v_i' dx/2`,
/// `v^+_{i+1/2} = v_{i+1} - v_{i+1}' dx/2`.
pub fn muscl_reconstruct<T: Real>(v: &[T], dx: T) -> Faces<T> {
    reconstruct_scalar(v, dx, Some(false))
}

/// Face traces of a scalar field. `None` gives first-order (cell values),
/// `Some(limited)` a linear reconstruction.
pub fn reconstruct_scalar<T: Real>(v: &[T], dx: T, linear: Option<bool>) -> Faces<T> {
    let n = v.len();
    let half = dx * T::half();
    match linear {
        None => Faces { left: v[..n - 1].to_vec(), right: v[1..].to_vec() },
        Some(limited) => {
            let s = slopes(v, dx, limited);
            Faces {
                left: (0..n - 1).map(|j| v[j] + s[j] * half).collect(),
                right: (0..n - 1).map(|j| v[j + 1] - s[j + 1] * half).collect(),
            }
        }
    }
}

/// Component-wise reconstruction of `K` fields into array-valued face states.
pub fn reconstruct_fields<T: Real, const K: usize>(fields: [&[T]; K], dx: T, linear: Option<bool>) -> Faces<[T; K]> {
    let n = fields[0].len();
    let per: Vec<Faces<T>> = fields.iter().map(|f| reconstruct_scalar(f, dx, linear)).collect();
    let gather =
        |side: fn(&Faces<T>) -> &Vec<T>| -> Vec<[T; K]> { (0..n - 1).map(|j| std::array::from_fn(|k| side(&per[k])[j])).collect() };
    Faces { left: gather(|f| &f.left), right: gather(|f| &f.right) }
}

/// Rusanov flux `1/2 (F(U^-) + F(U^+)) - 1/2 alpha (U^+ - U^-)` of one component.
#[inline]
pub fn rusanov_flux<T: Real>(f_left: T, f_right: T, u_left: T, u_right: T, alpha: T) -> T {
    T::half() * (f_left + f_right) - T::half() * alpha * (u_right - u_left)
}

/// Divided difference of Rusanov fluxes for a system of `K` balance laws.
///
/// `flux` and `conserved` map a face state to the flux and to the dissipated
/// variables; `speed` returns a local dissipation speed and the face uses the
/// larger of its two traces.
pub fn rusanov_flux_diff<T, U, const K: usize>(
    faces: &Faces<U>,
    flux: impl Fn(&U) -> [T; K],
    conserved: impl Fn(&U) -> [T; K],
    speed: impl Fn(&U) -> T,
    dx: T,
) -> Vec<[T; K]>
where
    T: Real,
{
    let alpha: Vec<T> = (0..faces.len()).map(|j| speed(&faces.left[j]).max(speed(&faces.right[j]))).collect();
    rusanov_flux_diff_with(faces, flux, conserved, &alpha, dx)
}

/// As [`rusanov_flux_diff`] with the dissipation speed given per face.
pub fn rusanov_flux_diff_with<T, U, const K: usize>(
    faces: &Faces<U>,
    flux: impl Fn(&U) -> [T; K],
    conserved: impl Fn(&U) -> [T; K],
    alpha: &[T],
    dx: T,
) -> Vec<[T; K]>
where
    T: Real,
{
    let nf = faces.len();
    let numerical: Vec<[T; K]> = (0..nf)
        .map(|j| {
            let (l, r) = (&faces.left[j], &faces.right[j]);
            let (fl, fr) = (flux(l), flux(r));
            let (ul, ur) = (conserved(l), conserved(r));
            std::array::from_fn(|k| rusanov_flux(fl[k], fr[k], ul[k], ur[k], alpha[j]))
        })
        .collect();
    let mut out = vec![[T::zero(); K]; nf + 1];
    for i in 1..nf {
        out[i] = std::array::from_fn(|k| (numerical[i][k] - numerical[i - 1][k]) / dx);
    }
    out
}

/// Tridiagonal system; row `i` reads
/// `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are the corner couplings `A[0][n-1]` and
/// `A[n-1][0]` when `periodic`, and are ignored otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
    pub rhs: Vec<T>,
    pub periodic: bool,
}

impl<T: Real> TridiagonalSystem<T> {
    pub fn zeros(n: usize, periodic: bool) -> Self {
        Self { lower: vec![T::zero(); n], diag: vec![T::zero(); n], upper: vec![T::zero(); n], rhs: vec![T::zero(); n], periodic }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A x`, honouring the periodic corners.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.lower[i] * x[i - 1];
                } else if self.periodic && n > 1 {
                    acc += self.lower[0] * x[n - 1];
                }
                if i + 1 < n {
                    acc += self.upper[i] * x[i + 1];
                } else if self.periodic && n > 1 {
                    acc += self.upper[n - 1] * x[0];
                }
                acc
            })
            .collect()
    }
}

/// Thomas elimination for the open tridiagonal part (corners ignored).
fn thomas<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let tiny = T::epsilon();
    let mut pivot = diag[0];
    let scale = diag[0].abs() + upper[0].abs();
    if !(pivot.abs() > tiny * scale) {
        return Err(SolverError::SingularPivot { row: 0 });
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        let scale = diag[i].abs() + lower[i].abs() + upper[i].abs();
        if !(pivot.abs() > tiny * scale) {
            return Err(SolverError::SingularPivot { row: i });
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { T::zero() };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// Direct solve of a tridiagonal system. Periodic systems use a rank-one
/// (Sherman-Morrison) correction of the open system.
pub fn solve_tridiagonal<T: Real>(sys: &TridiagonalSystem<T>) -> Result<Vec<T>> {
    let n = sys.len();
    for v in [&sys.lower, &sys.upper, &sys.rhs] {
        if v.len() != n {
            return Err(SolverError::LengthMismatch { expected: n, found: v.len() });
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if !sys.periodic {
        return thomas(&sys.lower, &sys.diag, &sys.upper, &sys.rhs);
    }
    if n < 3 {
        return Err(SolverError::InvalidParameter { name: "periodic system", reason: format!("needs n >= 3, got {n}") });
    }
    let top_right = sys.lower[0];
    let bottom_left = sys.upper[n - 1];
    let gamma = -sys.diag[0];
    let mut diag = sys.diag.clone();
    diag[0] -= gamma;
    diag[n - 1] -= bottom_left * top_right / gamma;
    let x = thomas(&sys.lower, &diag, &sys.upper, &sys.rhs)?;
    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = bottom_left;
    let z = thomas(&sys.lower, &diag, &sys.upper, &u)?;
    let corr = top_right / gamma;
    let denom = T::one() + z[0] + corr * z[n - 1];
    let scale = T::one() + z[0].abs() + (corr * z[n - 1]).abs();
    if !(denom.abs() > T::cst(64.0) * T::epsilon() * scale) {
        return Err(SolverError::SingularPivot { row: n - 1 });
    }
    let fact = (x[0] + corr * x[n - 1]) / denom;
    Ok(x.iter().zip(&z).map(|(&xi, &zi)| xi - fact * zi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    #[test]
    fn central_difference_examples() {
        assert!(central_flux_diff(&[3.0; 6], 0.1).iter().all(|v| *v == 0.0));
        let lin: Vec<f64> = (0..6).map(|i| i as f64).collect();
        assert_eq!(&central_flux_diff(&lin, 1.0)[1..5], &[1.0; 4]);
        let sq = [0.0, 1.0, 4.0, 9.0, 16.0];
        assert_eq!(&central_flux_diff(&sq, 1.0)[1..4], &[2.0, 4.0, 6.0]);
    }

    #[test]
    fn muscl_examples() {
        let f = muscl_reconstruct(&[1.0, 2.0, 4.0], 1.0);
        // slope in the middle cell is 1.5
        assert_eq!(f.left[1], 2.75);
        let c = muscl_reconstruct(&[2.0; 5], 0.3);
        assert!(c.left.iter().chain(&c.right).all(|v| *v == 2.0));
        let lin: Vec<f64> = (0..8).map(|i| 0.5 + 0.25 * i as f64).collect();
        let f = muscl_reconstruct(&lin, 1.0);
        for j in 1..6 {
            let exact = 0.5 + 0.25 * (j as f64 + 0.5);
            assert_relative_eq!(f.left[j], exact, epsilon = 1e-15);
            assert_relative_eq!(f.right[j], exact, epsilon = 1e-15);
        }
    }

    #[test]
    fn muscl_second_order_on_sine() {
        let err = |n: usize| {
            let dx = 2.0 * std::f64::consts::PI / n as f64;
            let v: Vec<f64> = (0..n).map(|i| ((i as f64 + 0.5) * dx).sin()).collect();
            let f = muscl_reconstruct(&v, dx);
            (1..n - 2).map(|j| (f.left[j] - ((j + 1) as f64 * dx).sin()).abs()).fold(0.0, f64::max)
        };
        let rate = (err(64) / err(128)).log2();
        assert!(rate > 1.9, "rate {rate}");
    }

    #[test]
    fn minmod_flattens_extrema() {
        let s = slopes(&[0.0, 1.0, 0.0, 2.0, 3.0], 1.0, true);
        assert_eq!(s, vec![0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn rusanov_examples() {
        assert_eq!(rusanov_flux(2.0, 2.0, 1.0, 1.0, 5.0), 2.0);
        assert_eq!(rusanov_flux(0.0, 0.0, 1.0, 3.0, 2.0), -2.0);
        // Burgers flux U^2/2 with U- = 1, U+ = 3, alpha = 3
        assert_eq!(rusanov_flux(0.5, 4.5, 1.0, 3.0, 3.0), -0.5);
    }

    #[test]
    fn rusanov_with_zero_speed_is_central() {
        let v: Vec<f64> = (0..10).map(|i| (i as f64 * 0.7).sin()).collect();
        let faces = reconstruct_fields([&v], 0.2, None);
        let d = rusanov_flux_diff(&faces, |u| [u[0] * u[0]], |u| [u[0]], |_| 0.0, 0.2);
        let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
        let c = central_flux_diff(&sq, 0.2);
        for i in 1..9 {
            assert_relative_eq!(d[i][0], c[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn telescoping_on_periodic_data() {
        use crate::state::{fill_ghosts, Boundary, Parity};
        let n = 32;
        let mut v = vec![0.0; n + 4];
        for k in 0..n {
            v[k + 2] = 1.0 + 0.3 * (k as f64 * 0.9).cos() + 0.1 * (k as f64 * 2.1).sin();
        }
        fill_ghosts(&mut v, 2, Boundary::Periodic, Parity::Even);
        let dx = 0.1;
        let c = central_flux_diff(&v, dx);
        let sum: f64 = c[2..n + 2].iter().sum::<f64>() * dx;
        assert!(sum.abs() < 1e-13);
        let faces = reconstruct_fields([&v], dx, Some(false));
        let d = rusanov_flux_diff(&faces, |u| [0.5 * u[0] * u[0]], |u| [u[0]], |u| u[0].abs(), dx);
        let sum: f64 = d[2..n + 2].iter().map(|x| x[0]).sum::<f64>() * dx;
        assert!(sum.abs() < 1e-13);
    }

    #[test]
    fn tridiagonal_examples() {
        let sys = TridiagonalSystem {
            lower: vec![0.0; 4],
            diag: vec![1.0; 4],
            upper: vec![0.0; 4],
            rhs: vec![1.0, -2.0, 3.0, 4.5],
            periodic: false,
        };
        assert_eq!(solve_tridiagonal(&sys).unwrap(), sys.rhs);
        let sys = TridiagonalSystem {
            lower: vec![0.0, -1.0, -1.0],
            diag: vec![2.0; 3],
            upper: vec![-1.0, -1.0, 0.0],
            rhs: vec![1.0, 0.0, 1.0],
            periodic: false,
        };
        let x = solve_tridiagonal(&sys).unwrap();
        for v in x {
            assert_relative_eq!(v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn periodic_laplacian_is_singular() {
        let sys = TridiagonalSystem { lower: vec![-1.0; 3], diag: vec![2.0; 3], upper: vec![-1.0; 3], rhs: vec![0.0; 3], periodic: true };
        assert!(matches!(solve_tridiagonal(&sys), Err(SolverError::SingularPivot { .. })));
    }

    #[test]
    fn zero_pivot_detected() {
        let sys =
            TridiagonalSystem { lower: vec![0.0, 1.0], diag: vec![1.0, 1.0], upper: vec![1.0, 0.0], rhs: vec![1.0, 1.0], periodic: false };
        assert_eq!(solve_tridiagonal(&sys), Err(SolverError::SingularPivot { row: 1 }));
    }

    fn dense(sys: &TridiagonalSystem<f64>) -> DMatrix<f64> {
        let n = sys.len();
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = sys.diag[i];
            if i > 0 {
                a[(i, i - 1)] = sys.lower[i];
            }
            if i + 1 < n {
                a[(i, i + 1)] = sys.upper[i];
            }
        }
        if sys.periodic {
            a[(0, n - 1)] += sys.lower[0];
            a[(n - 1, 0)] += sys.upper[n - 1];
        }
        a
    }

    fn dominant_system() -> impl Strategy<Value = TridiagonalSystem<f64>> {
        (3usize..=8, any::<bool>()).prop_flat_map(|(n, periodic)| {
            let v = move || proptest::collection::vec(-1.0f64..1.0, n);
            (v(), v(), v(), proptest::collection::vec(0.1f64..2.0, n)).prop_map(move |(lo, up, rhs, margin)| {
                let diag = (0..n).map(|i| lo[i].abs() + up[i].abs() + margin[i]).collect();
                TridiagonalSystem { lower: lo.clone(), diag, upper: up.clone(), rhs, periodic }
            })
        })
    }

    proptest! {
        #[test]
        fn matches_dense_elimination(sys in dominant_system()) {
            let x = solve_tridiagonal(&sys).unwrap();
            let reference = dense(&sys).lu().solve(&DVector::from_vec(sys.rhs.clone())).unwrap();
            for (a, b) in x.iter().zip(reference.iter()) {
                prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
            }
            let r = sys.apply(&x);
            let rmax = sys.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (ri, bi) in r.iter().zip(&sys.rhs) {
                prop_assert!((ri - bi).abs() <= 1e-12 * (1.0 + rmax));
            }
        }
    }
}
