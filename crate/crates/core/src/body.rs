//! The body of revolution `K_f = {x : x₂² + … + x_d² ≤ λ² f²(x₁/λ)}` and its
//! slices by hyperplanes `x₂ = s·x₁ + h`.
//!
//! Every hyperplane section of `K_f` is congruent to one whose normal lies in
//! the `(x₁, x₂)`-plane, so a slope `s` and an intercept `h` describe all of
//! them. Internally everything is evaluated for the unit-scale profile and
//! rescaled by the appropriate power of `λ`.

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::solvers::{
    bisect_root, maximize_unimodal, try_integrate, unit_ball_volume, Bracket, QuadratureOptions, GOLDEN_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct BodyOfRevolution {
    dim: usize,
    profile: Profile,
    scale: f64,
}

/// The segment of the line `x₂ = s·x₁ + h` inside the profile region
/// `{|x₂| ≤ λ f(x₁/λ)}`, from abscissa `left = −x` to `right = y`.
///
/// Both endpoints satisfy `|L| = λ f`. For lines crossing the axis inside the
/// body the left end lies on the graph of `−f` and the right end on `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub slope: f64,
    pub intercept: f64,
    pub left: f64,
    pub right: f64,
}

impl Chord {
    /// `x` in the convention where the chord spans `[−x, y]`.
    pub fn x(&self) -> f64 {
        -self.left
    }

    pub fn y(&self) -> f64 {
        self.right
    }

    pub fn line(&self, xi: f64) -> f64 {
        self.slope * xi + self.intercept
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

/// `x^{k/2}` for non-negative `x`.
#[inline]
pub(crate) fn half_power(x: f64, k: i32) -> f64 {
    let x = x.max(0.0);
    if k % 2 == 0 {
        libm::pow(x, (k / 2) as f64)
    } else {
        libm::pow(x, k as f64 / 2.0)
    }
}

impl BodyOfRevolution {
    pub fn new(dim: usize, profile: Profile, scale: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::invalid(alloc::format!("dimension {dim} < 3")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(alloc::format!("scale {scale} must be positive")));
        }
        Ok(BodyOfRevolution { dim, profile, scale })
    }

    /// The Euclidean unit ball in ℝ^d.
    pub fn ball(dim: usize) -> Result<Self> {
        Self::new(dim, Profile::semicircle(), 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.dim, self.profile.clone(), scale)
    }

    /// The mirror image under `x₁ ↦ −x₁`.
    pub fn reflect(&self) -> Self {
        BodyOfRevolution {
            dim: self.dim,
            profile: self.profile.reflect(),
            scale: self.scale,
        }
    }

    pub(crate) fn quadrature(&self) -> QuadratureOptions {
        QuadratureOptions::default().with_knots(self.profile.knots())
    }

    /// Chord of the unit-scale profile cut by `x₂ = s·ξ + h`; `None` when
    /// the line does not meet the interior.
    pub(crate) fn unit_chord(&self, s: f64, h: f64) -> Option<(f64, f64)> {
        let f = &self.profile;
        // f − |L| is concave, so {|L| ≤ f} is an interval around its maximizer.
        let g = |xi: f64| f.value(xi) - (s * xi + h).abs();
        let full = Bracket::new(-1.0, 1.0).expect("ordered");
        let (at, top) = maximize_unimodal(g, full, GOLDEN_TOL).ok()?;
        if top.is_nan() || top <= 0.0 || at <= -1.0 || at >= 1.0 {
            return None;
        }
        let left = bisect_root(g, Bracket::new(-1.0, at).ok()?, 0.0).ok()?;
        let right = bisect_root(g, Bracket::new(at, 1.0).ok()?, 0.0).ok()?;
        Some((left, right))
    }

    pub fn chord_endpoints(&self, s: f64, h: f64) -> Result<Chord> {
        if !(s.is_finite() && h.is_finite()) {
            return Err(Error::invalid("slope and intercept must be finite"));
        }
        let lam = self.scale;
        let (left, right) = self
            .unit_chord(s, h / lam)
            .ok_or(Error::LineMissesBody { slope: s, intercept: h })?;
        Ok(Chord {
            slope: s,
            intercept: h,
            left: lam * left,
            right: lam * right,
        })
    }

    /// `∫ g(f² − L², L) dξ` over the unit-scale chord of `(s, h/λ)`, times
    /// `λ^{homogeneity}`. Zero when the line misses the interior.
    pub(crate) fn chord_integral<G>(&self, s: f64, h: f64, homogeneity: i32, g: G) -> Result<f64>
    where
        G: Fn(f64, f64) -> f64,
    {
        let lam = self.scale;
        let hu = h / lam;
        let Some((left, right)) = self.unit_chord(s, hu) else {
            return Ok(0.0);
        };
        let Ok(interval) = Bracket::new(left, right) else {
            return Ok(0.0);
        };
        let f = &self.profile;
        let integral = try_integrate(
            |xi| {
                let fv = f.value(xi);
                let l = s * xi + hu;
                Ok(g(fv * fv - l * l, l))
            },
            interval,
            &self.quadrature(),
        )?;
        Ok(integral * libm::pow(lam, homogeneity as f64))
    }

    /// `(d−1)`-volume of the section by `x₂ = s·x₁ + h`:
    /// `v_{d−2}·√(1+s²)·∫(f² − L²)^{(d−2)/2}`.
    pub fn section_volume(&self, s: f64, h: f64) -> Result<f64> {
        let k = self.dim as i32 - 2;
        let integral = self.chord_integral(s, h, self.dim as i32 - 1, |w, _| half_power(w, k))?;
        Ok(unit_ball_volume(self.dim - 2) * libm::sqrt(1.0 + s * s) * integral)
    }

    /// Intercepts of the two lines of slope `s` tangent to the body.
    pub fn intercept_range(&self, s: f64) -> Bracket {
        let f = &self.profile;
        let full = Bracket::new(-1.0, 1.0).expect("ordered");
        let (_, up) = maximize_unimodal(|xi| f.value(xi) - s * xi, full, GOLDEN_TOL).expect("finite");
        let (_, down) = maximize_unimodal(|xi| f.value(xi) + s * xi, full, GOLDEN_TOL).expect("finite");
        Bracket::new(-self.scale * down, self.scale * up).expect("body has interior")
    }

    /// Support function at the in-plane direction `(u₁, u₂)`; by rotational
    /// symmetry only `|u₂|` matters.
    pub fn support(&self, u: (f64, f64)) -> Result<f64> {
        let (u1, u2) = unit(u)?;
        let f = &self.profile;
        let full = Bracket::new(-1.0, 1.0).expect("ordered");
        let (_, h) = maximize_unimodal(|xi| xi * u1 + f.value(xi) * u2.abs(), full, GOLDEN_TOL)?;
        Ok(self.scale * h)
    }

    /// Radial function at the in-plane direction `(u₁, u₂)`.
    pub fn radial(&self, u: (f64, f64)) -> Result<f64> {
        let (u1, u2) = unit(u)?;
        let f = &self.profile;
        let f0 = f.value(0.0);
        if f0.is_nan() || f0 <= 0.0 {
            return Err(Error::OriginNotInterior);
        }
        let (a1, a2) = (u1.abs(), u2.abs());
        let t = if a1 == 0.0 {
            f0 / a2
        } else {
            let end = 1.0 / a1;
            let g = |t: f64| f.value(t * u1) - t * a2;
            if g(end) >= 0.0 {
                end
            } else {
                bisect_root(g, Bracket::new(0.0, end)?, 0.0)?
            }
        };
        Ok(self.scale * t)
    }
}

fn unit(u: (f64, f64)) -> Result<(f64, f64)> {
    let n = libm::hypot(u.0, u.1);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("direction must be a non-zero finite vector"));
    }
    Ok((u.0 / n, u.1 / n))
}
