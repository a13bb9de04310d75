//! The moment map `a_{j,l}(x) = ∫_{−5/8}^{5/8} (f₊^{2j} − f₋^{2j}) ξ^l dξ`
//! over the coefficient vector `x` of a bump basis supported in `D`.
//!
//! On the window the two profiles are `f_o ± ε·o` with `o` odd, so the map is
//! odd in `x`, the entries with `j = 0` vanish identically and those with even
//! `l` vanish by parity. Only `j ≥ 1`, odd `l ≤ 2(p − j)` remain:
//! `p(p−1)/2` equations, solved on the unit sphere of a basis one larger.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::profile::{perturbed_pair_unchecked, BumpTerm, Profile, Sign};
use crate::solvers::{
    bisect_root, integrate, linalg, newton_on_sphere, Bracket, NewtonOptions, QuadratureOptions, SphereSystem,
};

/// Half-width of the symmetric window carrying the moment identities.
pub const WINDOW: f64 = 0.625;

/// Target for the reduced residuals.
pub const REDUCED_TOL: f64 = 1e-12;

/// Bound asserted on every entry of the full index set after a solve.
pub const FULL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentIndex {
    pub j: usize,
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSystem {
    p: usize,
    basis: Vec<BumpTerm>,
    eps: f64,
    delta: f64,
}

/// A zero of the reduced moment map together with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSolution {
    pub coefficients: Vec<f64>,
    pub reduced_residuals: Vec<f64>,
    pub full_residuals: Vec<f64>,
}

impl MomentSolution {
    pub fn max_reduced(&self) -> f64 {
        max_abs(&self.reduced_residuals)
    }

    pub fn max_full(&self) -> f64 {
        max_abs(&self.full_residuals)
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Number of reduced equations for `p = (d−2)/2`.
pub fn reduced_count(p: usize) -> usize {
    p * p.saturating_sub(1) / 2
}

impl MomentSystem {
    /// `dim` must be even and at least 4; the basis needs `p(p−1)/2 + 1`
    /// bumps with pairwise disjoint supports inside `D = [1/2 − δ, 1/2 + δ]`.
    pub fn new(dim: usize, basis: Vec<BumpTerm>, eps: f64, delta: f64) -> Result<Self> {
        if dim < 4 || dim % 2 != 0 {
            return Err(Error::invalid(alloc::format!(
                "moment system needs an even dimension >= 4, got {dim}"
            )));
        }
        let p = (dim - 2) / 2;
        let need = reduced_count(p) + 1;
        if basis.len() != need {
            return Err(Error::invalid(alloc::format!(
                "dimension {dim} needs {need} basis bumps, got {}",
                basis.len()
            )));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::invalid(alloc::format!("epsilon {eps} must be positive")));
        }
        if !(delta > 0.0 && delta < 0.125) {
            return Err(Error::invalid(alloc::format!("delta {delta} must lie in (0, 1/8)")));
        }
        let mut supports: Vec<(f64, f64)> = basis.iter().map(BumpTerm::support).collect();
        for &(lo, hi) in &supports {
            if lo < 0.5 - delta || hi > 0.5 + delta {
                return Err(Error::SupportViolation { lo, hi, region: "D" });
            }
        }
        supports.sort_by(|a, b| a.0.total_cmp(&b.0));
        if supports.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::invalid("basis supports overlap"));
        }
        Ok(MomentSystem { p, basis, eps, delta })
    }

    /// `count` unit-amplitude bumps evenly packed into `D`.
    pub fn default_basis(dim: usize, delta: f64) -> Vec<BumpTerm> {
        let p = dim.saturating_sub(2) / 2;
        let count = reduced_count(p) + 1;
        let slot = 2.0 * delta / count as f64;
        (0..count)
            .map(|k| BumpTerm {
                center: 0.5 - delta + (k as f64 + 0.5) * slot,
                half_width: 0.45 * slot,
                amplitude: 1.0,
            })
            .collect()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn basis(&self) -> &[BumpTerm] {
        &self.basis
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn full_indices(&self) -> Vec<MomentIndex> {
        (0..=self.p)
            .flat_map(|j| (0..=2 * (self.p - j)).map(move |l| MomentIndex { j, l }))
            .collect()
    }

    pub fn reduced_indices(&self) -> Vec<MomentIndex> {
        (1..=self.p)
            .flat_map(|j| {
                (0..=2 * (self.p - j))
                    .filter(|l| l % 2 == 1)
                    .map(move |l| MomentIndex { j, l })
            })
            .collect()
    }

    /// Signed bumps `x_k·φ_k` (zero coefficients dropped).
    pub fn phi(&self, x: &[f64]) -> Vec<(BumpTerm, Sign)> {
        self.basis
            .iter()
            .zip(x)
            .filter(|(_, c)| **c != 0.0)
            .map(|(b, &c)| (b.scaled(c.abs()), Sign::of(c)))
            .collect()
    }

    /// `(f₊, f₋)` for the coefficients `x`, with `ψ` omitted (it vanishes on
    /// the window) and no concavity check.
    pub fn profiles(&self, x: &[f64]) -> Result<(Profile, Profile)> {
        perturbed_pair_unchecked(&self.phi(x), None, self.eps, self.delta)
    }

    fn knots(&self) -> Vec<f64> {
        self.basis
            .iter()
            .flat_map(|b| {
                let (lo, hi) = b.support();
                [lo, hi, -lo, -hi]
            })
            .collect()
    }

    /// Odd part `o_k(ξ) = φ_k(ξ) − φ_k(−ξ)` of the `k`-th basis function.
    #[inline]
    fn odd(&self, k: usize, xi: f64) -> f64 {
        self.basis[k].value(xi) - self.basis[k].value(-xi)
    }

    fn integrate_window<F: FnMut(f64) -> f64>(&self, f: F) -> Result<f64> {
        let opts = QuadratureOptions::default()
            .tolerances(1e-13, 1e-18)
            .with_knots(self.knots());
        integrate(f, Bracket::new(-WINDOW, WINDOW)?, &opts)
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.basis.len() {
            return Err(Error::invalid(alloc::format!(
                "coefficient vector has {} entries, basis has {}",
                x.len(),
                self.basis.len()
            )));
        }
        Ok(())
    }

    /// `a_{j,l}(x)` for each requested index.
    pub fn residuals(&self, x: &[f64], indices: &[MomentIndex]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        indices
            .iter()
            .map(|&MomentIndex { j, l }| {
                if j == 0 {
                    return Ok(0.0);
                }
                self.integrate_window(|xi| {
                    let base = libm::sqrt((1.0 - xi * xi).max(0.0));
                    let o: f64 = (0..x.len()).map(|k| x[k] * self.odd(k, xi)).sum();
                    let a = base + self.eps * o;
                    let b = base - self.eps * o;
                    // a^{2j} − b^{2j} = (a − b)·Σ a^i b^{2j−1−i}
                    let mut sum = 0.0;
                    let mut ai = 1.0;
                    for i in 0..2 * j {
                        sum += ai * libm::pow(b, (2 * j - 1 - i) as f64);
                        ai *= a;
                    }
                    2.0 * self.eps * o * sum * libm::pow(xi, l as f64)
                })
            })
            .collect()
    }

    /// Row-major Jacobian of the requested residuals in `x`.
    pub fn jacobian_for(&self, x: &[f64], indices: &[MomentIndex]) -> Result<Vec<Vec<f64>>> {
        self.check_len(x)?;
        indices
            .iter()
            .map(|&MomentIndex { j, l }| {
                (0..x.len())
                    .map(|k| {
                        if j == 0 {
                            return Ok(0.0);
                        }
                        self.integrate_window(|xi| {
                            let base = libm::sqrt((1.0 - xi * xi).max(0.0));
                            let o: f64 = (0..x.len()).map(|i| x[i] * self.odd(i, xi)).sum();
                            let a = base + self.eps * o;
                            let b = base - self.eps * o;
                            let e = (2 * j - 1) as f64;
                            2.0 * j as f64
                                * self.eps
                                * (libm::pow(a, e) + libm::pow(b, e))
                                * self.odd(k, xi)
                                * libm::pow(xi, l as f64)
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Restriction of the moment map to the reduced index set.
struct Reduced<'a> {
    system: &'a MomentSystem,
    indices: Vec<MomentIndex>,
}

impl SphereSystem for Reduced<'_> {
    fn equations(&self) -> usize {
        self.indices.len()
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.system.residuals(x, &self.indices)
    }

    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.system.jacobian_for(x, &self.indices)
    }
}

/// `a(x)` over the requested index set.
pub fn moment_residuals(system: &MomentSystem, x: &[f64], indices: &[MomentIndex]) -> Result<Vec<f64>> {
    system.residuals(x, indices)
}

fn failure(reason: impl ToString, history: Vec<f64>) -> Error {
    Error::MomentSolve {
        reason: reason.to_string(),
        history,
    }
}

/// A unit coefficient vector annihilating the reduced moment map.
///
/// One equation (ℝ⁶) is solved by bisection in the angle on a half circle,
/// where oddness guarantees a sign change. Larger systems use Newton on the
/// sphere, seeded with the null vector of the map linearized at `x = 0`.
pub fn solve_moments(system: &MomentSystem) -> Result<MomentSolution> {
    let indices = system.reduced_indices();
    let n = system.basis.len();
    let coefficients = match indices.len() {
        0 => {
            let mut x = alloc::vec![0.0; n];
            x[0] = 1.0;
            x
        }
        1 => {
            let at = |theta: f64| [libm::cos(theta), libm::sin(theta)];
            let f = |theta: f64| system.residuals(&at(theta), &indices).map(|r| r[0]).unwrap_or(f64::NAN);
            let theta = bisect_root(f, Bracket::new(0.0, core::f64::consts::PI)?, 0.0)
                .map_err(|e| failure(e, alloc::vec![f(0.0), f(core::f64::consts::PI)]))?;
            at(theta).to_vec()
        }
        _ => {
            let reduced = Reduced {
                system,
                indices: indices.clone(),
            };
            let zero = alloc::vec![0.0; n];
            let linear = reduced.jacobian(&zero)?;
            let seed = linalg::null_vector(&linear).map_err(|e| failure(e, Vec::new()))?;
            let options = NewtonOptions {
                tol: REDUCED_TOL,
                max_iterations: 100,
            };
            newton_on_sphere(&reduced, &seed, options).map_err(|e| match e {
                Error::NewtonNotConverged { residual, .. } => failure(e, alloc::vec![residual]),
                other => failure(other, Vec::new()),
            })?
        }
    };
    let reduced_residuals = system.residuals(&coefficients, &indices)?;
    let full_residuals = system.residuals(&coefficients, &system.full_indices())?;
    let solution = MomentSolution {
        coefficients,
        reduced_residuals,
        full_residuals,
    };
    if solution.max_reduced() > REDUCED_TOL || solution.max_full() > FULL_TOL {
        return Err(failure(
            alloc::format!(
                "residuals above tolerance (reduced {:e}, full {:e})",
                solution.max_reduced(),
                solution.max_full()
            ),
            solution.full_residuals.clone(),
        ));
    }
    Ok(solution)
}
