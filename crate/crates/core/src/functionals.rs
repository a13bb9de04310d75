//! Central-section, maximal-section and projection functions evaluated at the
//! directions `u(s) = (−s, 1, 0, …, 0)/√(1+s²)`, plus the axis direction
//! `±e₁` that the slope parametrization misses.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::body::{half_power, BodyOfRevolution, Chord};
use crate::error::{Error, Result};
use crate::solvers::{
    bisect_root, maximize_unimodal, try_bisect_root, try_integrate, try_maximize_unimodal, unit_ball_volume, Bracket,
    QuadratureOptions, GOLDEN_TOL,
};

/// The largest section in direction `u(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxSectionResult {
    pub volume: f64,
    /// Intercept of the maximizing hyperplane `x₂ = s·x₁ + h*`.
    pub h_star: f64,
    pub chord: Chord,
    /// The derivative condition `∫(f² − L²)^{(d−4)/2} L` at `h*`; `None` for
    /// `d = 3`, where the integrand is singular and no polish is done.
    pub residual: Option<f64>,
    /// `∫(f² − L²)^{(d−4)/2} |L|` at `h*`, the natural scale of `residual`.
    pub residual_scale: Option<f64>,
}

impl MaxSectionResult {
    /// `|residual| / residual_scale`, or zero when the scale vanishes.
    pub fn normalized_residual(&self) -> Option<f64> {
        match (self.residual, self.residual_scale) {
            (Some(r), Some(s)) if s > 0.0 => Some(r.abs() / s),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        }
    }
}

/// Result of the distribution-function formula in ℝ⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSolution {
    pub volume: f64,
    /// The level `t` solving `s = 2t/|{f > t}|` (in body units).
    pub level: f64,
    /// `|{f > t}|` (in body units).
    pub measure: f64,
}

/// Functionals in the axis direction, where sections are `(d−1)`-balls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFunctionals {
    pub central: f64,
    pub maximal: f64,
    pub projection: f64,
}

/// `A_K(u(s))`: the section through the origin.
pub fn central_section(body: &BodyOfRevolution, s: f64) -> Result<f64> {
    body.section_volume(s, 0.0)
}

/// `A_K(u(s))` from the radial function: `(1/(d−1))∫ρ^{d−1}` over the great
/// subsphere orthogonal to `u(s)`, reduced to one angle by symmetry.
pub fn central_section_via_radial(body: &BodyOfRevolution, s: f64) -> Result<f64> {
    let d = body.dim();
    if d < 4 {
        return Err(Error::invalid(alloc::format!("radial formula needs d >= 4, got {d}")));
    }
    let c = 1.0 / libm::sqrt(1.0 + s * s);
    let integral = try_integrate(
        |beta| {
            let v1 = libm::cos(beta) * c;
            let v2 = libm::sqrt((1.0 - v1 * v1).max(0.0));
            let rho = body.radial((v1, v2))?;
            Ok(libm::pow(rho, (d - 1) as f64) * libm::pow(libm::sin(beta), (d - 3) as f64))
        },
        Bracket::new(0.0, PI)?,
        &QuadratureOptions::default(),
    )?;
    let sphere = (d - 2) as f64 * unit_ball_volume(d - 2);
    Ok(sphere * integral / (d - 1) as f64)
}

/// `∫(f² − L²)^{(d−4)/2} L` over the chord: proportional to minus the
/// derivative of the section volume in `h`, so it vanishes at the maximal
/// section.
pub fn max_condition_residual(body: &BodyOfRevolution, s: f64, h: f64) -> Result<f64> {
    let k = body.dim() as i32 - 4;
    body.chord_integral(s, h, body.dim() as i32 - 2, |w, l| half_power(w, k) * l)
}

fn max_condition_scale(body: &BodyOfRevolution, s: f64, h: f64) -> Result<f64> {
    let k = body.dim() as i32 - 4;
    body.chord_integral(s, h, body.dim() as i32 - 2, |w, l| half_power(w, k) * l.abs())
}

/// `M_K(u(s))`. Golden-section search over the intercept (the section volume
/// is unimodal in `h`), then the intercept is polished by bisecting the
/// derivative condition on a bracket around the search result.
pub fn maximal_section(body: &BodyOfRevolution, s: f64) -> Result<MaxSectionResult> {
    let range = body.intercept_range(s);
    let (h_golden, v_golden) = try_maximize_unimodal(|h| body.section_volume(s, h), range, GOLDEN_TOL)?;

    let mut h_star = h_golden;
    if body.dim() >= 4 {
        if let Some(root) = polish(body, s, h_golden, range)? {
            h_star = root;
        }
    }
    let mut volume = body.section_volume(s, h_star)?;
    if volume < v_golden {
        // Polishing never loses more than round-off; keep the larger value.
        volume = v_golden;
    }
    let chord = body.chord_endpoints(s, h_star)?;
    let (residual, residual_scale) = if body.dim() >= 4 {
        (
            Some(max_condition_residual(body, s, h_star)?),
            Some(max_condition_scale(body, s, h_star)?),
        )
    } else {
        (None, None)
    };
    Ok(MaxSectionResult {
        volume,
        h_star,
        chord,
        residual,
        residual_scale,
    })
}

fn polish(body: &BodyOfRevolution, s: f64, h0: f64, range: Bracket) -> Result<Option<f64>> {
    let d = |h: f64| max_condition_residual(body, s, h);
    let d0 = d(h0)?;
    if d0 == 0.0 {
        return Ok(Some(h0));
    }
    // The residual increases through zero at the maximizer.
    let mut step = 1e-7 * range.width();
    for _ in 0..40 {
        let lo = (h0 - step).max(range.lower());
        let hi = (h0 + step).min(range.upper());
        let (dl, dh) = (d(lo)?, d(hi)?);
        if dl <= 0.0 && dh >= 0.0 && lo < hi {
            let root = try_bisect_root(d, Bracket::new(lo, hi)?, 0.0)?;
            return Ok(Some(root));
        }
        if lo <= range.lower() && hi >= range.upper() {
            break;
        }
        step *= 2.0;
    }
    Ok(None)
}

/// `M_K(u(s))` in ℝ⁴ from the distribution function `μ(t) = |{f > t}|`:
/// `π√(1+s²)·((2/3)t²μ(t) + ∫_t^{max f} 2τμ(τ)dτ)` with `s = 2t/μ(t)`.
pub fn m_via_distribution(body: &BodyOfRevolution, s: f64) -> Result<LevelSolution> {
    if body.dim() != 4 {
        return Err(Error::invalid(alloc::format!(
            "distribution formula holds only in dimension 4, got {}",
            body.dim()
        )));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(alloc::format!("slope {s} must be positive")));
    }
    let profile = body.profile();
    let top = profile.peak();
    let mu = |t: f64| profile.superlevel(t).measure;
    // 2t − s·μ(t) is strictly increasing: −s·μ at 0, 2·max f at the top.
    let t = bisect_root(|t| 2.0 * t - s * mu(t), Bracket::new(0.0, top)?, 0.0)?;
    let measure = mu(t);
    let tail = if t < top {
        let span = top - t;
        // τ = top − span·v² removes the square-root behaviour of μ at the apex.
        try_integrate(
            |v| {
                let tau = top - span * v * v;
                Ok(2.0 * tau * mu(tau) * 2.0 * span * v)
            },
            Bracket::new(0.0, 1.0)?,
            &QuadratureOptions::default(),
        )?
    } else {
        0.0
    };
    let lam = body.scale();
    let unit = PI * libm::sqrt(1.0 + s * s) * (2.0 / 3.0 * t * t * measure + tail);
    Ok(LevelSolution {
        volume: unit * lam * lam * lam,
        level: lam * t,
        measure: lam * measure,
    })
}

/// `P_K(u(s))`: the shadow on `u(s)^⊥` is fibred over `z ∈ ℝ^{d−2}`; for
/// `|z| = r` the fibre is the projection of the planar slice
/// `{(ξ, x₂) : x₂² + r² ≤ f(ξ)²}` onto the in-plane direction
/// `w = (1, s)/√(1+s²)`. Hence `P = |S^{d−3}| ∫₀^{max f} r^{d−3} ℓ(r) dr`.
pub fn projection(body: &BodyOfRevolution, s: f64) -> Result<f64> {
    let d = body.dim();
    let profile = body.profile();
    let top = profile.peak();
    let norm = libm::sqrt(1.0 + s * s);
    let (c, sa) = (1.0 / norm, s.abs() / norm);

    let width = |r: f64| -> Result<f64> {
        let level = profile.superlevel(r);
        if level.upper <= level.lower {
            return Ok(0.0);
        }
        let span = Bracket::new(level.lower, level.upper)?;
        let lift = |xi: f64| {
            let fv = profile.value(xi);
            sa * libm::sqrt((fv * fv - r * r).max(0.0))
        };
        let (_, hi) = maximize_unimodal(|xi| xi * c + lift(xi), span, GOLDEN_TOL)?;
        let (_, lo) = maximize_unimodal(|xi| -xi * c + lift(xi), span, GOLDEN_TOL)?;
        Ok(hi + lo)
    };

    // r = top·sin θ keeps ℓ smooth where the slice shrinks to the apex.
    let mut knots: alloc::vec::Vec<f64> = profile
        .knots()
        .into_iter()
        .map(|k| profile.value(k) / top)
        .filter(|q| *q > 0.0 && *q < 1.0)
        .map(libm::asin)
        .collect();
    knots.sort_by(f64::total_cmp);
    let opts = QuadratureOptions::default().with_knots(knots);
    let integral = try_integrate(
        |theta| {
            let r = top * libm::sin(theta);
            Ok(libm::pow(r, (d - 3) as f64) * width(r)? * top * libm::cos(theta))
        },
        Bracket::new(0.0, FRAC_PI_2)?,
        &opts,
    )?;
    let sphere = (d - 2) as f64 * unit_ball_volume(d - 2);
    Ok(sphere * integral * libm::pow(body.scale(), (d - 1) as f64))
}

/// The three functionals in the direction `±e₁`.
pub fn axis_functionals(body: &BodyOfRevolution) -> AxisFunctionals {
    let d = body.dim();
    let v = unit_ball_volume(d - 1);
    let lam = body.scale();
    let p = (d - 1) as f64;
    let central = v * libm::pow(lam * body.profile().value(0.0), p);
    let maximal = v * libm::pow(lam * body.profile().peak(), p);
    AxisFunctionals {
        central,
        maximal,
        projection: maximal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{klee_profile, BumpTerm};

    fn klee() -> BodyOfRevolution {
        BodyOfRevolution::new(4, klee_profile(BumpTerm::new(0.5, 0.2, 0.002).unwrap()).unwrap(), 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ball_functionals() {
        for d in [4usize, 6] {
            let b = BodyOfRevolution::ball(d).unwrap();
            let v = unit_ball_volume(d - 1);
            for s in [0.0, 0.3, 1.0, 7.0] {
                assert!(rel(central_section(&b, s).unwrap(), v) < 1e-12);
                assert!(rel(central_section_via_radial(&b, s).unwrap(), v) < 1e-12);
                let m = maximal_section(&b, s).unwrap();
                assert!(rel(m.volume, v) < 1e-12);
                assert!(m.h_star.abs() < 1e-10);
                assert!(rel(projection(&b, s).unwrap(), v) < 1e-10, "d={d} s={s}");
            }
            let ax = axis_functionals(&b);
            assert!(rel(ax.central, v) < 1e-15 && rel(ax.maximal, v) < 1e-15);
        }
    }

    #[test]
    fn ball_residual_vanishes_on_symmetric_chord() {
        let b = BodyOfRevolution::ball(4).unwrap();
        let m = maximal_section(&b, 1.0).unwrap();
        assert!((m.chord.x() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(m.residual.unwrap().abs() < 1e-14);
        assert!(max_condition_residual(&b, 1.0, 0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn residual_sign_follows_displacement() {
        // Moving the hyperplane up shrinks the section, so dV/dh < 0 and the
        // residual (∝ −dV/dh) is positive.
        let b = BodyOfRevolution::ball(4).unwrap();
        assert!(max_condition_residual(&b, 1.0, 0.5).unwrap() > 0.0);
        assert!(max_condition_residual(&b, 1.0, -0.5).unwrap() < 0.0);
    }

    #[test]
    fn distribution_formula_on_ball() {
        let b = BodyOfRevolution::ball(4).unwrap();
        let r = m_via_distribution(&b, 1.0).unwrap();
        assert!((r.level - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(rel(r.volume, 4.0 * PI / 3.0) < 1e-12);
        let s = libm::sqrt(7.0) / 3.0;
        let r = m_via_distribution(&b, s).unwrap();
        assert!((r.level - libm::sqrt(7.0) / 4.0).abs() < 1e-14);
        assert!(rel(r.volume, 4.0 * PI / 3.0) < 1e-12);
        assert!(m_via_distribution(&b, 0.0).is_err());
        assert!(m_via_distribution(&BodyOfRevolution::ball(6).unwrap(), 1.0).is_err());
    }

    #[test]
    fn klee_maximal_sections_are_constant() {
        let k = klee();
        for s in [0.1, 1.0, 2.0, 10.0] {
            let m = maximal_section(&k, s).unwrap();
            assert!(rel(m.volume, 4.0 * PI / 3.0) < 1e-9, "s={s}: {}", m.volume);
            let dist = m_via_distribution(&k, s).unwrap();
            assert!(rel(dist.volume, m.volume) < 1e-9);
            // The maximal chord joins the levels −t and t.
            assert!((m.chord.line(m.chord.left) + dist.level).abs() < 1e-8);
            assert!((m.chord.line(m.chord.right) - dist.level).abs() < 1e-8);
        }
        assert!(rel(axis_functionals(&k).maximal, 4.0 * PI / 3.0) < 1e-12);
    }

    #[test]
    fn klee_central_sections_vary() {
        let k = klee();
        let a: alloc::vec::Vec<f64> = [0.2, 0.5773502691896258, 1.0]
            .iter()
            .map(|&s| central_section(&k, s).unwrap())
            .collect();
        let spread = a.iter().fold(0.0f64, |m, v| m.max(*v)) - a.iter().fold(f64::MAX, |m, v| m.min(*v));
        assert!(spread > 1e-7, "{a:?}");
    }

    #[test]
    fn radial_formula_rejects_low_dimension() {
        assert!(central_section_via_radial(&BodyOfRevolution::ball(3).unwrap(), 0.5).is_err());
    }

    #[test]
    fn three_dimensional_ball() {
        let b = BodyOfRevolution::ball(3).unwrap();
        let m = maximal_section(&b, 0.4).unwrap();
        assert!(rel(m.volume, PI) < 1e-10);
        assert!(m.residual.is_none());
        assert!(rel(projection(&b, 0.4).unwrap(), PI) < 1e-9);
    }
}
