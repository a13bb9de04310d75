//! Concave profile functions on `[-1, 1]`.
//!
//! A [`Profile`] is either the semicircle plus a finite sum of signed bump
//! terms, or the semicircle with its level sets shifted horizontally: the
//! superlevel set at height `t` is `[L(t), R(t)]` with
//! `R(t) = √(1−t²) + δ(t)` and `L(t) = −√(1−t²) + δ(t)`. The second variant
//! keeps every superlevel length equal to that of the semicircle.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::solvers::{bisect_root, maximize_unimodal, Bracket, GOLDEN_TOL};

/// Number of grid points used for the second-difference concavity checks.
pub const CONCAVITY_GRID: usize = 4096;

/// Largest second difference accepted as concave.
pub const CONCAVITY_TOL: f64 = 1e-9;

/// `amplitude · exp(1 − 1/(1−u²))` for `u = (x − center)/half_width`, `|u| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpTerm {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl BumpTerm {
    pub fn new(center: f64, half_width: f64, amplitude: f64) -> Result<Self> {
        if !(center.is_finite() && amplitude.is_finite() && half_width.is_finite()) || half_width <= 0.0 {
            return Err(Error::invalid(alloc::format!(
                "bump (center {center}, half-width {half_width}, amplitude {amplitude}) is malformed"
            )));
        }
        Ok(BumpTerm {
            center,
            half_width,
            amplitude,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    pub fn scaled(&self, factor: f64) -> BumpTerm {
        BumpTerm {
            amplitude: self.amplitude * factor,
            ..*self
        }
    }

    #[inline]
    fn local(&self, x: f64) -> Option<(f64, f64, f64)> {
        let u = (x - self.center) / self.half_width;
        if u.abs() >= 1.0 {
            return None;
        }
        let q = 1.0 - u * u;
        Some((u, q, libm::exp(1.0 - 1.0 / q)))
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        match self.local(x) {
            Some((_, _, g)) => self.amplitude * g,
            None => 0.0,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self.local(x) {
            Some((u, q, g)) => self.amplitude * g * (-2.0 * u / (q * q)) / self.half_width,
            None => 0.0,
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match self.local(x) {
            Some((u, q, g)) => {
                let q2 = q * q;
                let shape = 4.0 * u * u / (q2 * q2) - 2.0 / q2 - 8.0 * u * u / (q2 * q);
                self.amplitude * g * shape / (self.half_width * self.half_width)
            }
            None => 0.0,
        }
    }

    fn within(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.support();
        a >= lo && b <= hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// A bump entering a profile with a sign, optionally evaluated at `−ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedTerm {
    pub bump: BumpTerm,
    pub sign: Sign,
    pub reflected: bool,
}

impl SignedTerm {
    pub fn new(bump: BumpTerm, sign: Sign, reflected: bool) -> Self {
        SignedTerm { bump, sign, reflected }
    }

    #[inline]
    pub fn value(&self, xi: f64) -> f64 {
        let x = if self.reflected { -xi } else { xi };
        self.sign.factor() * self.bump.value(x)
    }

    /// Support in ξ, accounting for reflection.
    pub fn support(&self) -> (f64, f64) {
        let (a, b) = self.bump.support();
        if self.reflected {
            (-b, -a)
        } else {
            (a, b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Semicircle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    TermSum { base: Base, terms: Vec<SignedTerm> },
    LevelBranch { shift: BumpTerm },
}

/// The superlevel interval `{f > t}` and its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superlevel {
    pub lower: f64,
    pub upper: f64,
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    shape: Shape,
    peak: f64,
    peak_at: f64,
}

#[inline]
fn semicircle(xi: f64) -> f64 {
    libm::sqrt((1.0 - xi * xi).max(0.0))
}

impl Profile {
    pub fn semicircle() -> Profile {
        Profile {
            shape: Shape::TermSum {
                base: Base::Semicircle,
                terms: Vec::new(),
            },
            peak: 1.0,
            peak_at: 0.0,
        }
    }

    /// Semicircle plus signed bumps. Supports must lie inside `(−1, 1)`;
    /// concavity is not enforced here (see [`Profile::concavity_margin`]).
    pub fn term_sum(terms: Vec<SignedTerm>) -> Result<Profile> {
        if terms.is_empty() {
            return Ok(Profile::semicircle());
        }
        for t in &terms {
            let (a, b) = t.support();
            if a <= -1.0 || b >= 1.0 {
                return Err(Error::SupportViolation {
                    lo: a,
                    hi: b,
                    region: "(-1, 1)",
                });
            }
        }
        Ok(Profile::with_shape(Shape::TermSum {
            base: Base::Semicircle,
            terms,
        }))
    }

    /// Level-shifted semicircle without the branch-condition check.
    pub fn level_branch(shift: BumpTerm) -> Result<Profile> {
        if !shift.within(0.0, 1.0) || shift.support().0 <= 0.0 || shift.support().1 >= 1.0 {
            let (lo, hi) = shift.support();
            return Err(Error::SupportViolation {
                lo,
                hi,
                region: "(0, 1)",
            });
        }
        // δ vanishes near t = 1, so the apex stays at (0, 1).
        Ok(Profile {
            shape: Shape::LevelBranch { shift },
            peak: 1.0,
            peak_at: 0.0,
        })
    }

    fn with_shape(shape: Shape) -> Profile {
        let mut p = Profile {
            shape,
            peak: 1.0,
            peak_at: 0.0,
        };
        let (at, peak) =
            maximize_unimodal(|x| p.value(x), full_domain(), GOLDEN_TOL).expect("profile values are finite");
        p.peak = peak;
        p.peak_at = at;
        p
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_semicircle(&self) -> bool {
        match &self.shape {
            Shape::TermSum { terms, .. } => terms.iter().all(|t| t.bump.amplitude == 0.0),
            Shape::LevelBranch { shift } => shift.amplitude == 0.0,
        }
    }

    /// `f(ξ)`, with `ξ` checked against `[−1, 1]`.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&xi) {
            return Err(Error::OutOfDomain(xi));
        }
        Ok(self.value(xi))
    }

    /// `f(ξ)`, zero outside `[−1, 1]`.
    #[inline]
    pub fn value(&self, xi: f64) -> f64 {
        if !(xi > -1.0 && xi < 1.0) {
            return 0.0;
        }
        match &self.shape {
            Shape::TermSum { terms, .. } => semicircle(xi) + terms.iter().map(|t| t.value(xi)).sum::<f64>(),
            Shape::LevelBranch { shift } => level_branch_value(shift, xi),
        }
    }

    /// `(max f, argmax f)`.
    pub fn axis_extremes(&self) -> (f64, f64) {
        (self.peak, self.peak_at)
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn peak_at(&self) -> f64 {
        self.peak_at
    }

    /// The interval `{f > t}` located by bisection on either side of the
    /// argmax.
    pub fn superlevel(&self, t: f64) -> Superlevel {
        if t >= self.peak {
            return Superlevel {
                lower: self.peak_at,
                upper: self.peak_at,
                measure: 0.0,
            };
        }
        if t <= 0.0 {
            return Superlevel {
                lower: -1.0,
                upper: 1.0,
                measure: 2.0,
            };
        }
        let g = |x: f64| self.value(x) - t;
        let lower = if self.peak_at > -1.0 {
            bisect_root(g, Bracket::new(-1.0, self.peak_at).expect("ordered"), 0.0).expect("sign change")
        } else {
            -1.0
        };
        let upper = if self.peak_at < 1.0 {
            bisect_root(g, Bracket::new(self.peak_at, 1.0).expect("ordered"), 0.0).expect("sign change")
        } else {
            1.0
        };
        Superlevel {
            lower,
            upper,
            measure: upper - lower,
        }
    }

    /// Largest second difference `f(ξ−h) − 2f(ξ) + f(ξ+h)` over a uniform grid;
    /// non-positive (up to [`CONCAVITY_TOL`]) means concave.
    pub fn concavity_margin(&self) -> f64 {
        second_difference_margin(|x| self.value(x), -1.0, 1.0)
    }

    /// For level-branch profiles: the larger of the maximal second difference
    /// of `R` and the maximal negated second difference of `L` over `t ∈ [0, 1]`.
    /// Non-positive means `R` is concave and `L` convex. `None` for term sums.
    pub fn branch_margin(&self) -> Option<f64> {
        match &self.shape {
            Shape::LevelBranch { shift } => {
                let right = second_difference_margin(|t| semicircle(t) + shift.value(t), 0.0, 1.0);
                let left = second_difference_margin(|t| semicircle(t) - shift.value(t), 0.0, 1.0);
                Some(right.max(left))
            }
            Shape::TermSum { .. } => None,
        }
    }

    /// The mirror image `ξ ↦ f(−ξ)`.
    pub fn reflect(&self) -> Profile {
        let shape = match &self.shape {
            Shape::TermSum { base, terms } => Shape::TermSum {
                base: *base,
                terms: terms
                    .iter()
                    .map(|t| SignedTerm {
                        reflected: !t.reflected,
                        ..*t
                    })
                    .collect(),
            },
            Shape::LevelBranch { shift } => Shape::LevelBranch {
                shift: shift.scaled(-1.0),
            },
        };
        Profile {
            shape,
            peak: self.peak,
            peak_at: -self.peak_at,
        }
    }

    /// Abscissas in `(−1, 1)` where the profile switches between analytic
    /// pieces (bump support edges); useful as quadrature knots.
    pub fn knots(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match &self.shape {
            Shape::TermSum { terms, .. } => {
                for t in terms.iter().filter(|t| t.bump.amplitude != 0.0) {
                    let (a, b) = t.support();
                    out.push(a);
                    out.push(b);
                }
            }
            Shape::LevelBranch { shift } if shift.amplitude != 0.0 => {
                let (a, b) = shift.support();
                for t in [a, b] {
                    out.push(semicircle(t) + shift.value(t));
                    out.push(-semicircle(t) + shift.value(t));
                }
            }
            Shape::LevelBranch { .. } => {}
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

fn full_domain() -> Bracket {
    Bracket::new(-1.0, 1.0).expect("ordered")
}

fn second_difference_margin<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let n = CONCAVITY_GRID;
    let h = (hi - lo) / (n - 1) as f64;
    let values: Vec<f64> = (0..n).map(|i| f(lo + i as f64 * h)).collect();
    values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Inverse of the branch map: the level `t` whose right (ξ ≥ 0) or left
/// (ξ < 0) branch passes through `ξ`.
fn level_branch_value(shift: &BumpTerm, xi: f64) -> f64 {
    let t0 = semicircle(xi);
    let (lo, hi) = shift.support();
    if shift.amplitude == 0.0 || t0 <= lo || t0 >= hi {
        // Outside the shifted band the branches coincide with the semicircle.
        return t0;
    }
    let side = if xi >= 0.0 { 1.0 } else { -1.0 };
    let g = |t: f64| side * semicircle(t) + shift.value(t) - xi;
    let dg = |t: f64| -side * t / semicircle(t) + shift.derivative(t);
    // g is monotone on [lo, hi] with opposite signs at the ends; safeguarded
    // Newton keeps the iterate inside the shrinking bracket.
    let (mut a, mut b) = (lo, hi);
    let ga = g(a);
    if ga == 0.0 {
        return a;
    }
    if g(b) == 0.0 {
        return b;
    }
    let mut t = t0;
    for _ in 0..100 {
        let gt = g(t);
        if gt == 0.0 {
            return t;
        }
        if gt.signum() == ga.signum() {
            a = t;
        } else {
            b = t;
        }
        let d = dg(t);
        let newton = t - gt / d;
        let next = if d != 0.0 && newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - t).abs() <= 1e-16 || (a - b).abs() <= 1e-16 {
            return next;
        }
        t = next;
    }
    t
}

/// Builds `f₊ = f_o + εφ(ξ) − εφ(−ξ) + εψ(ξ)` and
/// `f₋ = f_o − εφ(ξ) + εφ(−ξ) + εψ(ξ)` without checking concavity.
pub(crate) fn perturbed_pair_unchecked(
    phi: &[(BumpTerm, Sign)],
    psi: Option<BumpTerm>,
    eps: f64,
    delta: f64,
) -> Result<(Profile, Profile)> {
    if !(delta > 0.0 && delta < 0.125) {
        return Err(Error::invalid(alloc::format!(
            "half-width delta = {delta} must lie in (0, 1/8)"
        )));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::invalid(alloc::format!(
            "epsilon = {eps} must be finite and non-negative"
        )));
    }
    let (d_lo, d_hi) = (0.5 - delta, 0.5 + delta);
    for (b, _) in phi {
        if !b.within(d_lo, d_hi) {
            let (lo, hi) = b.support();
            return Err(Error::SupportViolation { lo, hi, region: "D" });
        }
    }
    if let Some(p) = psi {
        if !p.within(1.0 - delta, 1.0) || p.support().1 >= 1.0 {
            let (lo, hi) = p.support();
            return Err(Error::SupportViolation { lo, hi, region: "E" });
        }
    }
    let mut plus = Vec::with_capacity(2 * phi.len() + 1);
    let mut minus = Vec::with_capacity(2 * phi.len() + 1);
    for &(b, sign) in phi {
        let b = b.scaled(eps);
        plus.push(SignedTerm::new(b, sign, false));
        plus.push(SignedTerm::new(b, sign.flipped(), true));
        minus.push(SignedTerm::new(b, sign.flipped(), false));
        minus.push(SignedTerm::new(b, sign, true));
    }
    if let Some(p) = psi {
        let p = p.scaled(eps);
        plus.push(SignedTerm::new(p, Sign::Plus, false));
        minus.push(SignedTerm::new(p, Sign::Plus, false));
    }
    Ok((Profile::term_sum(plus)?, Profile::term_sum(minus)?))
}

/// The pair `(f₊, f₋)` for signed bumps `φ` supported in
/// `D = [1/2 − δ, 1/2 + δ]` and an optional `ψ` supported in `E = [1 − δ, 1]`.
/// Fails with [`Error::NotConcave`] when `ε` is too large.
pub fn perturbed_pair(
    phi: &[(BumpTerm, Sign)],
    psi: Option<BumpTerm>,
    eps: f64,
    delta: f64,
) -> Result<(Profile, Profile)> {
    let (plus, minus) = perturbed_pair_unchecked(phi, psi, eps, delta)?;
    let margin = plus.concavity_margin().max(minus.concavity_margin());
    if margin > CONCAVITY_TOL {
        return Err(Error::NotConcave { margin });
    }
    Ok((plus, minus))
}

/// A profile equimeasurable with the semicircle whose level sets are shifted
/// by `shift(t)`. Requires `|shift''(t)| < (1 − t²)^{−3/2}` on the support,
/// which makes the right branch concave and the left branch convex.
pub fn klee_profile(shift: BumpTerm) -> Result<Profile> {
    let profile = Profile::level_branch(shift)?;
    if shift.amplitude == 0.0 {
        return Ok(profile);
    }
    let (lo, hi) = shift.support();
    let samples = 20_000;
    for i in 1..samples {
        let t = lo + (hi - lo) * i as f64 / samples as f64;
        let curvature = shift.second_derivative(t).abs();
        let bound = libm::pow(1.0 - t * t, -1.5);
        if curvature >= bound {
            return Err(Error::BranchCondition { t, curvature, bound });
        }
    }
    let margin = profile.branch_margin().unwrap_or(0.0);
    if margin > CONCAVITY_TOL {
        return Err(Error::NotConcave { margin });
    }
    Ok(profile)
}
