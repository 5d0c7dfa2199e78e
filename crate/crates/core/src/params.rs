use crate::error::{Result, SolverError};
use crate::scalar::Real;
use crate::state::Boundary;

/// Spatial/temporal order of accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Order {
    /// Piecewise-constant faces, one forward stage.
    First,
    /// MUSCL faces with two time stages.
    #[default]
    Second,
}

impl Order {
    pub fn from_int(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(SolverError::InvalidParameter { name: "order", reason: format!("{order} not in {{1, 2}}") }),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Self::First => 1,
            Self::Second => 2,
        }
    }
}

/// Dissipation speed of the Rusanov fluxes in the explicit scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dissipation {
    /// `max(|u-|, |u+|)` on the convective fluxes only; the depth equation and
    /// the pressure gradient stay centred.
    Material,
    /// Local `|u| + c` on all four fields, depth included.
    #[default]
    Acoustic,
}

/// Discretisation of the momentum pressure gradient `p_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PressureForm {
    /// `a^2 D(h) + lambda alpha D(h eta)` with cell-frozen coefficients. The two
    /// `O(lambda)` terms cancel only in the continuum, leaving an
    /// `O(lambda dx^2)` defect.
    Split,
    /// `g h D(h) + D(p_nh)`, `p_nh = (lambda/3) eta (1 - eta/h)`: no
    /// `lambda`-amplified defect, and still at rest over bathymetry. The
    /// semi-implicit scheme keeps the split form for the implicit increment.
    #[default]
    Balanced,
}

/// Physical and numerical parameters of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeParams<T> {
    pub g: T,
    /// Relaxation parameter (1/s^2).
    pub lambda: T,
    pub cfl: T,
    /// Material CFL bound of the semi-implicit scheme.
    pub mcfl_limit: T,
    pub order: Order,
    pub boundary: Boundary,
    pub h_min: T,
    pub t_final: T,
    /// Minmod-limited slopes instead of the unlimited centred slope.
    pub limiter: bool,
    /// Explicit-scheme dissipation; the semi-implicit scheme always uses
    /// [`Dissipation::Material`].
    pub dissipation: Dissipation,
    pub pressure: PressureForm,
}

pub const GRAVITY: f64 = 9.81;
pub const DEFAULT_MCFL: f64 = 0.5;
pub const DEFAULT_H_MIN: f64 = 1e-8;

impl<T: Real> Default for SchemeParams<T> {
    fn default() -> Self {
        Self {
            g: T::cst(GRAVITY),
            lambda: T::cst(1000.0),
            cfl: T::cst(0.4),
            mcfl_limit: T::cst(DEFAULT_MCFL),
            order: Order::Second,
            boundary: Boundary::Transmissive,
            h_min: T::cst(DEFAULT_H_MIN),
            t_final: T::one(),
            limiter: false,
            dissipation: Dissipation::Acoustic,
            pressure: PressureForm::Balanced,
        }
    }
}

impl<T: Real> SchemeParams<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| Err(SolverError::InvalidParameter { name, reason: reason.into() });
        if !(self.g > T::zero()) {
            return bad("g", "must be > 0");
        }
        if !(self.lambda >= T::zero()) {
            return bad("lambda", "must be >= 0");
        }
        if !(self.cfl > T::zero()) {
            return bad("cfl", "must be > 0");
        }
        if !(self.mcfl_limit > T::zero() && self.mcfl_limit <= T::one()) {
            return bad("mcfl_limit", "must lie in (0, 1]");
        }
        if !(self.h_min > T::zero()) {
            return bad("h_min", "must be > 0");
        }
        if !(self.t_final >= T::zero()) {
            return bad("t_final", "must be >= 0");
        }
        Ok(())
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_cfl(mut self, cfl: T) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_order(mut self, order: Order) -> Self {
        self.order = order;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_dissipation(mut self, dissipation: Dissipation) -> Self {
        self.dissipation = dissipation;
        self
    }

    pub fn with_pressure(mut self, pressure: PressureForm) -> Self {
        self.pressure = pressure;
        self
    }

    pub fn with_t_final(mut self, t_final: T) -> Self {
        self.t_final = t_final;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let p = SchemeParams::<f64>::default();
        assert_eq!(p.g, 9.81);
        assert_eq!(p.h_min, 1e-8);
        p.validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SchemeParams::<f64>::default().with_lambda(-1.0).validate().is_err());
        // the shallow-water limit stays admissible
        SchemeParams::<f64>::default().with_lambda(0.0).validate().unwrap();
        assert!(SchemeParams::<f64>::default().with_cfl(-1.0).validate().is_err());
        let p = SchemeParams::<f64> { mcfl_limit: 1.5, ..Default::default() };
        assert!(p.validate().is_err());
        assert!(Order::from_int(3).is_err());
        assert_eq!(Order::from_int(1).unwrap().as_int(), 1);
    }
}
