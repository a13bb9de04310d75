//! Newton iteration for `F(x) = 0` with `F: ℝ^{m+1} → ℝ^m` restricted to the
//! unit sphere. Each step solves the square system
//! `[J(x); xᵀ]·Δ = [−F(x); 0]` and renormalizes `x + Δ`.

use alloc::vec::Vec;

use super::linalg;
use crate::error::{Error, Result};

/// A map from the unit sphere in ℝ^{m+1} to ℝ^m.
pub trait SphereSystem {
    /// Number of equations `m`; the unknown has `m + 1` coordinates.
    fn equations(&self) -> usize;

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Row-major `m × (m+1)` Jacobian. Defaults to central differences.
    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let m = self.equations();
        let mut jac = alloc::vec![alloc::vec![0.0; m + 1]; m];
        let mut probe = x.to_vec();
        for k in 0..=m {
            let step = 1e-6 * x[k].abs().max(1.0);
            probe[k] = x[k] + step;
            let plus = self.residual(&probe)?;
            probe[k] = x[k] - step;
            let minus = self.residual(&probe)?;
            probe[k] = x[k];
            for (row, (p, q)) in jac.iter_mut().zip(plus.iter().zip(&minus)) {
                row[k] = (p - q) / (2.0 * step);
            }
        }
        Ok(jac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iterations: 50,
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn normalize(x: &mut [f64]) -> Result<()> {
    let norm = libm::sqrt(x.iter().map(|v| v * v).sum());
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(())
}

/// Returns a unit vector with `max|F(x)| ≤ tol`.
pub fn newton_on_sphere<S: SphereSystem + ?Sized>(system: &S, x0: &[f64], options: NewtonOptions) -> Result<Vec<f64>> {
    let m = system.equations();
    if x0.len() != m + 1 {
        return Err(Error::invalid(alloc::format!(
            "starting point has {} coordinates, expected {}",
            x0.len(),
            m + 1
        )));
    }
    let mut x = x0.to_vec();
    normalize(&mut x)?;
    let mut f = system.residual(&x)?;
    let mut residual = max_abs(&f);
    for _ in 0..options.max_iterations {
        if residual <= options.tol {
            return Ok(x);
        }
        let mut a = system.jacobian(&x)?;
        a.push(x.clone());
        let mut b: Vec<f64> = f.iter().map(|v| -v).collect();
        b.push(0.0);
        let delta = linalg::solve(a, b)?;

        // Backtrack on the sphere if a full step increases the residual.
        let mut scale = 1.0;
        loop {
            let mut trial: Vec<f64> = x.iter().zip(&delta).map(|(x, d)| x + scale * d).collect();
            normalize(&mut trial)?;
            let ft = system.residual(&trial)?;
            let rt = max_abs(&ft);
            if rt < residual || scale < 1e-4 {
                x = trial;
                f = ft;
                residual = rt;
                break;
            }
            scale *= 0.5;
        }
    }
    if residual <= options.tol {
        Ok(x)
    } else {
        Err(Error::NewtonNotConverged {
            iterations: options.max_iterations,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    struct Fn1<F: Fn(&[f64]) -> Vec<f64>>(usize, F);

    impl<F: Fn(&[f64]) -> Vec<f64>> SphereSystem for Fn1<F> {
        fn equations(&self) -> usize {
            self.0
        }
        fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
            Ok((self.1)(x))
        }
    }

    #[test]
    fn first_coordinate_zero() {
        let sys = Fn1(1, |x: &[f64]| vec![x[0]]);
        let x = newton_on_sphere(&sys, &[0.6, 0.8], NewtonOptions::default()).unwrap();
        assert!(x[0].abs() < 1e-12);
        assert!((x[1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal() {
        let sys = Fn1(1, |x: &[f64]| vec![x[0] - x[1]]);
        let x = newton_on_sphere(&sys, &[1.0, 0.0], NewtonOptions::default()).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((x[0].abs() - r).abs() < 1e-12 && (x[1].abs() - r).abs() < 1e-12);
        assert!(x[0] * x[1] > 0.0);
        let n: f64 = x.iter().map(|v| v * v).sum();
        assert!((libm::sqrt(n) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn singular_jacobian() {
        let sys = Fn1(1, |_: &[f64]| vec![1.0]);
        assert!(matches!(
            newton_on_sphere(&sys, &[1.0, 0.0], NewtonOptions::default()),
            Err(Error::SingularJacobian)
        ));
    }

    #[test]
    fn wrong_dimension() {
        let sys = Fn1(1, |x: &[f64]| vec![x[0]]);
        assert!(newton_on_sphere(&sys, &[1.0, 0.0, 0.0], NewtonOptions::default()).is_err());
    }
}
