use crate::error::{Error, Result};

/// Volume of the unit ball in ℝⁿ and the surface area of its boundary sphere,
/// `(v_n, n·v_n)`.
///
/// Computed through the log-gamma function so large `n` does not overflow.
pub fn unit_ball_constants(n: i64) -> Result<(f64, f64)> {
    if n < 0 {
        return Err(Error::invalid(alloc::format!("negative dimension {n}")));
    }
    let v = unit_ball_volume(n as usize);
    Ok((v, n as f64 * v))
}

pub fn unit_ball_volume(n: usize) -> f64 {
    let half = 0.5 * n as f64;
    libm::exp(half * libm::log(core::f64::consts::PI) - libm::lgamma(half + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn low_dimensions() {
        let (v0, s0) = unit_ball_constants(0).unwrap();
        assert!((v0 - 1.0).abs() < 1e-15);
        assert_eq!(s0, 0.0);
        let (v2, s2) = unit_ball_constants(2).unwrap();
        assert!((v2 - PI).abs() < 1e-14);
        assert!((s2 - 2.0 * PI).abs() < 1e-14);
        let (v3, _) = unit_ball_constants(3).unwrap();
        assert!((v3 - 4.0 * PI / 3.0).abs() < 1e-14);
        let (v5, _) = unit_ball_constants(5).unwrap();
        assert!((v5 - 8.0 * PI * PI / 15.0).abs() < 1e-13);
    }

    #[test]
    fn recurrence_holds_in_high_dimension() {
        // v_n = 2π/n · v_{n-2}
        for n in 2..200usize {
            let lhs = unit_ball_volume(n);
            let rhs = 2.0 * PI / n as f64 * unit_ball_volume(n - 2);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300), "n = {n}");
        }
    }

    #[test]
    fn negative_dimension_is_an_error() {
        assert!(unit_ball_constants(-1).is_err());
    }
}
