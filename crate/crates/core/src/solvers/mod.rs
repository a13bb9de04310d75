//! Numerical kernels shared by the geometry: adaptive quadrature, bracketed
//! root finding, golden-section maximization, Newton iteration constrained to
//! the unit sphere and unit-ball constants.

mod constants;
pub(crate) mod linalg;
mod newton;
mod optimize;
mod quadrature;
mod roots;

pub use constants::{unit_ball_constants, unit_ball_volume};
pub use newton::{newton_on_sphere, NewtonOptions, SphereSystem};
pub use optimize::{maximize_unimodal, try_maximize_unimodal, GOLDEN_TOL};
pub use quadrature::{integrate, integrate_with_error, try_integrate, QuadratureOptions};
pub use roots::{bisect_root, try_bisect_root};

use crate::error::{Error, Result};

/// A closed interval `[lower, upper]` with `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lower: f64,
    upper: f64,
}

impl Bracket {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::invalid(alloc::format!(
                "bracket [{lower}, {upper}] is not a proper finite interval"
            )));
        }
        Ok(Bracket { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_rejects_reversed_and_nan() {
        assert!(Bracket::new(1.0, 0.0).is_err());
        assert!(Bracket::new(0.0, 0.0).is_err());
        assert!(Bracket::new(f64::NAN, 1.0).is_err());
        let b = Bracket::new(-1.0, 3.0).unwrap();
        assert_eq!(b.width(), 4.0);
        assert_eq!(b.midpoint(), 1.0);
    }
}
