//! Pointwise algebra of the hyperbolic relaxation system.
//!
//! The `*_unchecked` variants skip the depth check and are used inside the
//! stepping loops, which validate depth once per stage.

use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Pressure-gradient decomposition `p_x = a2 h_x + lambda alpha (h eta)_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsgnCoeffs<T> {
    /// Squared celerity `g h + (lambda/3) (eta/h)^2`.
    pub c2: T,
    /// Depth-gradient coefficient `c2 - lambda eta alpha`.
    pub a2: T,
    /// `-(2 eta/h - 1) / (3 h)`.
    pub alpha: T,
    /// Total pressure.
    pub p: T,
}

#[inline]
fn check_depth<T: Real>(h: T) -> Result<()> {
    if h > T::zero() {
        Ok(())
    } else {
        Err(SolverError::NonPositiveDepth { h: h.as_f64() })
    }
}

#[inline]
fn third<T: Real>() -> T {
    T::one() / T::cst(3.0)
}

#[inline]
pub fn pressure_unchecked<T: Real>(h: T, eta: T, g: T, lambda: T) -> T {
    let r = eta / h;
    g * h * h * T::half() + h * lambda * third::<T>() * r * (T::one() - r)
}

/// `g h^2 / 2 + h (lambda/3) (eta/h) (1 - eta/h)`.
pub fn pressure<T: Real>(h: T, eta: T, g: T, lambda: T) -> Result<T> {
    check_depth(h)?;
    Ok(pressure_unchecked(h, eta, g, lambda))
}

#[inline]
pub fn celerity2_unchecked<T: Real>(h: T, eta: T, g: T, lambda: T) -> T {
    let r = eta / h;
    g * h + lambda * third::<T>() * r * r
}

/// Extended celerity `sqrt(g h + (lambda/3) (eta/h)^2)`.
pub fn celerity<T: Real>(h: T, eta: T, g: T, lambda: T) -> Result<T> {
    check_depth(h)?;
    Ok(celerity2_unchecked(h, eta, g, lambda).sqrt())
}

/// `(u - c, u, u, u + c)`, sorted for `c >= 0`.
pub fn eigenvalues<T: Real>(h: T, u: T, eta: T, g: T, lambda: T) -> Result<[T; 4]> {
    let c = celerity(h, eta, g, lambda)?;
    Ok([u - c, u, u, u + c])
}

#[inline]
pub fn alpha_unchecked<T: Real>(h: T, eta: T) -> T {
    -(T::two() * eta / h - T::one()) * third::<T>() / h
}

#[inline]
pub fn coeffs_unchecked<T: Real>(h: T, eta: T, g: T, lambda: T) -> HsgnCoeffs<T> {
    let c2 = celerity2_unchecked(h, eta, g, lambda);
    let alpha = alpha_unchecked(h, eta);
    HsgnCoeffs { c2, a2: c2 - lambda * eta * alpha, alpha, p: pressure_unchecked(h, eta, g, lambda) }
}

pub fn pressure_gradient_coeffs<T: Real>(h: T, eta: T, g: T, lambda: T) -> Result<HsgnCoeffs<T>> {
    check_depth(h)?;
    Ok(coeffs_unchecked(h, eta, g, lambda))
}

/// Right-hand side of the `hw` equation, `-lambda (eta/h - 1)`.
pub fn relaxation_source<T: Real>(h: T, eta: T, lambda: T) -> Result<T> {
    check_depth(h)?;
    Ok(-lambda * (eta / h - T::one()))
}

#[inline]
pub fn p_tilde_unchecked<T: Real>(h: T, eta: T, lambda: T) -> T {
    lambda * third::<T>() * (T::one() - eta / h)
}

/// Bathymetric pressure `(lambda/3)(1 - eta/h)`. The momentum flux is then
/// `h u^2 + g h^2/2 + eta p~`, the bottom source `(g h + 3/2 p~) b_x` and the
/// `hw` source `3 p~`.
pub fn bathy_p_tilde<T: Real>(h: T, eta: T, lambda: T) -> Result<T> {
    check_depth(h)?;
    Ok(p_tilde_unchecked(h, eta, lambda))
}

/// `eta + 3 b / 2`, the relaxation variable transported over bathymetry.
#[inline]
pub fn eta_tilde<T: Real>(eta: T, b: T) -> T {
    eta + T::cst(1.5) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const G: f64 = 9.81;

    #[test]
    fn pressure_examples() {
        assert_relative_eq!(pressure(1.0, 1.0, G, 1234.0).unwrap(), 4.905, epsilon = 1e-14);
        assert_relative_eq!(pressure(1.0, 0.9, G, 300.0).unwrap(), 13.905, epsilon = 1e-12);
        assert_relative_eq!(pressure(2.0, 2.0, G, 10.0).unwrap(), 19.62, epsilon = 1e-14);
        assert!(pressure(0.0, 1.0, G, 1.0).is_err());
    }

    #[test]
    fn celerity_examples() {
        assert_relative_eq!(celerity(1.0, 1.0, G, 0.0).unwrap(), 3.132091952673165, epsilon = 1e-12);
        assert_relative_eq!(celerity(1.0, 1.0, G, 1200.0).unwrap(), 409.81f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(celerity(1.0, 1.0, G, 1200.0).unwrap(), 20.2438, epsilon = 1e-4);
        assert_relative_eq!(celerity(1.0, 1.0, G, 100.0).unwrap(), 6.5684, epsilon = 1e-4);
        assert!(celerity(-1.0, 1.0, G, 1.0).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let e = eigenvalues(1.0, 0.0, 1.0, G, 0.0).unwrap();
        assert_relative_eq!(e[0], -3.13209, epsilon = 1e-5);
        assert_eq!(e[1], 0.0);
        assert_relative_eq!(e[3], 3.13209, epsilon = 1e-5);
        let e = eigenvalues(1.0, 0.5, 1.0, G, 1200.0).unwrap();
        assert_relative_eq!(e[0], -19.7438, epsilon = 1e-4);
        assert_eq!((e[1], e[2]), (0.5, 0.5));
        assert_relative_eq!(e[3], 20.7438, epsilon = 1e-4);
        // u = 2, c = 5: h = 1, eta = 1, lambda = 3 (25 - g)
        let e = eigenvalues(1.0, 2.0, 1.0, G, 3.0 * (25.0 - G)).unwrap();
        assert_relative_eq!(e[0], -3.0, epsilon = 1e-12);
        assert_relative_eq!(e[3], 7.0, epsilon = 1e-12);
    }

    #[test]
    fn coefficient_examples() {
        let c = pressure_gradient_coeffs(1.0, 1.0, G, 300.0).unwrap();
        assert_relative_eq!(c.alpha, -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(c.a2, 209.81, epsilon = 1e-12);
        assert_relative_eq!(pressure_gradient_coeffs(2.0, 2.0, G, 1.0).unwrap().alpha, -1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(pressure_gradient_coeffs(2.0, 1.0, G, 1.0).unwrap().alpha, 0.0);
    }

    #[test]
    fn source_examples() {
        assert_eq!(relaxation_source(1.3, 1.3, 100.0).unwrap(), 0.0);
        assert_relative_eq!(relaxation_source(1.0, 1.1, 100.0).unwrap(), -10.0, epsilon = 1e-12);
        assert_eq!(relaxation_source(2.0, 1.0, 500.0).unwrap(), 250.0);
        assert_eq!(bathy_p_tilde(0.7, 0.7, 100.0).unwrap(), 0.0);
        assert_relative_eq!(bathy_p_tilde(1.0, 0.97, 100.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(eta_tilde(0.5, 0.0), 0.5);
    }

    #[test]
    fn bathymetric_flux_matches_flat_pressure() {
        // g h^2/2 + eta p~ is the flat pressure, so b = 0 recovers the flat system
        for &(h, eta) in &[(1.0, 0.9), (0.4, 0.5), (2.0, 2.1)] {
            let lam = 321.0;
            let flux = G * h * h / 2.0 + eta * bathy_p_tilde(h, eta, lam).unwrap();
            assert_relative_eq!(flux, pressure(h, eta, G, lam).unwrap(), epsilon = 1e-12);
            assert_relative_eq!(3.0 * bathy_p_tilde(h, eta, lam).unwrap(), relaxation_source(h, eta, lam).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn decomposition_identity_converges() {
        let (lam, x0) = (500.0, 0.3);
        let hf = |x: f64| 1.0 + 0.3 * (x).sin();
        let ef = |x: f64| hf(x) * (1.0 + 0.01 * (2.0 * x).cos());
        let err = |dx: f64| {
            let p = |x| pressure(hf(x), ef(x), G, lam).unwrap();
            let px = (p(x0 + dx) - p(x0 - dx)) / (2.0 * dx);
            let hx = (hf(x0 + dx) - hf(x0 - dx)) / (2.0 * dx);
            let hex = (hf(x0 + dx) * ef(x0 + dx) - hf(x0 - dx) * ef(x0 - dx)) / (2.0 * dx);
            let c = pressure_gradient_coeffs(hf(x0), ef(x0), G, lam).unwrap();
            (px - (c.a2 * hx + lam * c.alpha * hex)).abs()
        };
        let (e1, e2) = (err(1e-2), err(5e-3));
        assert!(e1 < 1e-2);
        assert!((e1 / e2).log2() > 1.9, "rate {}", (e1 / e2).log2());
    }

    proptest! {
        #[test]
        fn celerity_exceeds_gravity_speed(h in 0.01f64..10.0, r in 0.5f64..1.5, lam in 0.0f64..1e4) {
            let c = celerity(h, r * h, G, lam).unwrap();
            prop_assert!(c >= (G * h).sqrt());
            let e = eigenvalues(h, 0.3, r * h, G, lam).unwrap();
            prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
