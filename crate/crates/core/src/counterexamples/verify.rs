//! Side-by-side evaluation of the functionals for a pair of bodies and for
//! the Klee body, with one pass flag per checked property.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::construct::{chord_window_holds, WINDOW_PROBE};
use super::moments::WINDOW;
use crate::body::BodyOfRevolution;
use crate::error::{Error, Result};
use crate::functionals::{axis_functionals, central_section, m_via_distribution, maximal_section, projection};
use crate::grid::GridMap;
use crate::profile::CONCAVITY_TOL;
use crate::REGIME_SLOPE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Half-width of `D`, used for the profile identities.
    pub delta: f64,
    /// Relative tolerance on the functional discrepancies.
    pub tol_functional: f64,
    pub min_direct_difference: f64,
    pub min_mirror_difference: f64,
    pub tol_support_pairs: f64,
    pub tol_profile_identity: f64,
    pub tol_chord_identity: f64,
    pub tol_moments: f64,
    pub fan_directions: usize,
    pub identity_chords: usize,
    pub profile_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            delta: 0.1,
            tol_functional: 1e-6,
            min_direct_difference: 1e-4,
            min_mirror_difference: 1e-6,
            tol_support_pairs: 1e-10,
            tol_profile_identity: 1e-14,
            tol_chord_identity: 1e-10,
            tol_moments: 1e-10,
            fan_directions: 200,
            identity_chords: 20,
            profile_samples: 4001,
        }
    }
}

/// One checked property.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Claim {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Claim {
            name,
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    fn at_least(name: &'static str, value: f64, threshold: f64) -> Self {
        Claim {
            name,
            value,
            threshold,
            pass: value >= threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Triple {
    pub central: f64,
    pub maximal: f64,
    pub projection: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub grid: Vec<f64>,
    pub first: Vec<Triple>,
    pub second: Vec<Triple>,
    pub axis: [Triple; 2],
    pub max_rel_discrepancy: Triple,
    pub concavity_margins: [f64; 2],
    pub chord_window: bool,
    /// Largest deviation from `f₁ = f₂` off `±D` and `f₁(ξ) = f₂(−ξ)` on `±D`.
    pub profile_identity_residual: f64,
    pub support_pair_residual: f64,
    pub radial_pair_residual: f64,
    pub chord_identity_residual: f64,
    pub linf_direct: f64,
    pub linf_mirror: f64,
    pub moment_residuals: Vec<f64>,
    /// Messages of evaluations that failed; those slopes hold `NaN`.
    pub failures: Vec<String>,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn triple(body: &BodyOfRevolution, s: f64) -> Result<Triple> {
    Ok(Triple {
        central: central_section(body, s)?,
        maximal: maximal_section(body, s)?.volume,
        projection: projection(body, s)?,
    })
}

fn nan_triple() -> Triple {
    Triple {
        central: f64::NAN,
        maximal: f64::NAN,
        projection: f64::NAN,
    }
}

/// Largest relative discrepancy; `NaN` entries count as infinite.
fn worst(a: &[Triple], b: &[Triple], pick: fn(&Triple) -> f64) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| {
        let r = relative_difference(pick(x), pick(y));
        if r.is_nan() {
            f64::INFINITY
        } else {
            m.max(r)
        }
    })
}

/// Low-discrepancy fraction `frac(k·φ⁻¹)`.
fn golden_fraction(k: usize) -> f64 {
    let g = 0.618_033_988_749_894_9 * k as f64;
    g - libm::floor(g)
}

fn unordered_gap(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (a0, a1) = if a.0 <= a.1 { a } else { (a.1, a.0) };
    let (b0, b1) = if b.0 <= b.1 { b } else { (b.1, b.0) };
    (a0 - b0).abs().max((a1 - b1).abs())
}

/// Evaluates `A`, `M`, `P` for both bodies on `grid` (plus the axis) and
/// checks the properties a counterexample pair must have. Numerical failures
/// at individual slopes are recorded rather than returned.
pub fn verify_pair<G: GridMap>(
    first: &BodyOfRevolution,
    second: &BodyOfRevolution,
    grid: &[f64],
    moment_residuals: &[f64],
    options: &VerifyOptions,
    mapper: &G,
) -> Result<VerificationReport> {
    if first.dim() != second.dim() {
        return Err(Error::invalid("bodies live in different dimensions"));
    }
    if grid.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("slope grid contains a non-finite value"));
    }
    let mut failures = Vec::new();
    let rows = mapper.map(grid, |s| (triple(first, s), triple(second, s)));
    let (mut one, mut two) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
    for (s, (a, b)) in grid.iter().zip(rows) {
        for (r, out) in [(a, &mut one), (b, &mut two)] {
            match r {
                Ok(t) => out.push(t),
                Err(e) => {
                    failures.push(alloc::format!("s = {s}: {e}"));
                    out.push(nan_triple());
                }
            }
        }
    }
    let axis = [first, second].map(|b| {
        let a = axis_functionals(b);
        Triple {
            central: a.central,
            maximal: a.maximal,
            projection: a.projection,
        }
    });
    let mut all_one = one.clone();
    let mut all_two = two.clone();
    all_one.push(axis[0]);
    all_two.push(axis[1]);
    let max_rel = Triple {
        central: worst(&all_one, &all_two, |t| t.central),
        maximal: worst(&all_one, &all_two, |t| t.maximal),
        projection: worst(&all_one, &all_two, |t| t.projection),
    };

    let margins = [first.profile().concavity_margin(), second.profile().concavity_margin()];

    let mut chord_window = true;
    for s in [REGIME_SLOPE - WINDOW_PROBE, REGIME_SLOPE + WINDOW_PROBE] {
        for body in [first, second] {
            match chord_window_holds(body, s) {
                Ok(ok) => chord_window &= ok,
                Err(e) => {
                    failures.push(alloc::format!("chord window at s = {s}: {e}"));
                    chord_window = false;
                }
            }
        }
    }

    let (f1, f2) = (first.profile(), second.profile());
    let (d_lo, d_hi) = (0.5 - options.delta, 0.5 + options.delta);
    let n = options.profile_samples.max(2);
    let (mut identity, mut direct, mut mirror) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        let xi = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let straight = (f1.value(xi) - f2.value(xi)).abs();
        let flipped = (f1.value(xi) - f2.value(-xi)).abs();
        direct = direct.max(straight);
        mirror = mirror.max(flipped);
        let in_d = (d_lo..=d_hi).contains(&xi.abs());
        identity = identity.max(if in_d { flipped } else { straight });
    }

    let (mut support_gap, mut radial_gap) = (0.0f64, 0.0f64);
    let fan = options.fan_directions.max(1);
    for i in 0..fan {
        let theta = PI * (i as f64 + 0.5) / fan as f64;
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        let pair = |body: &BodyOfRevolution, g: fn(&BodyOfRevolution, (f64, f64)) -> Result<f64>| {
            Ok::<_, Error>((g(body, (c, s))?, g(body, (-c, s))?))
        };
        match (
            pair(first, BodyOfRevolution::support),
            pair(second, BodyOfRevolution::support),
        ) {
            (Ok(a), Ok(b)) => support_gap = support_gap.max(unordered_gap(a, b)),
            _ => support_gap = f64::INFINITY,
        }
        match (
            pair(first, BodyOfRevolution::radial),
            pair(second, BodyOfRevolution::radial),
        ) {
            (Ok(a), Ok(b)) => radial_gap = radial_gap.max(unordered_gap(a, b)),
            _ => radial_gap = f64::INFINITY,
        }
    }

    // Sections whose chords stay in the window |ξ| > 5/8 on both sides must
    // agree exactly.
    let mut chord_identity = 0.0f64;
    for k in 1..=options.identity_chords {
        let s = REGIME_SLOPE * golden_fraction(k);
        let h = 0.05 * (2.0 * golden_fraction(k + 1000) - 1.0) * first.scale();
        let in_window = [first, second].iter().all(|b| {
            b.chord_endpoints(s, h)
                .map(|c| c.x() / b.scale() > WINDOW && c.y() / b.scale() > WINDOW)
                .unwrap_or(false)
        });
        if !in_window {
            continue;
        }
        let r = match (first.section_volume(s, h), second.section_volume(s, h)) {
            (Ok(a), Ok(b)) => relative_difference(a, b),
            _ => f64::INFINITY,
        };
        chord_identity = chord_identity.max(r);
    }

    let moments = moment_residuals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = options.tol_functional;
    let claims = alloc::vec![
        Claim::at_most("central sections agree", max_rel.central, tol),
        Claim::at_most("maximal sections agree", max_rel.maximal, tol),
        Claim::at_most("projections agree", max_rel.projection, tol),
        Claim::at_most("first profile concave", margins[0], CONCAVITY_TOL),
        Claim::at_most("second profile concave", margins[1], CONCAVITY_TOL),
        Claim::at_least("chord window", if chord_window { 1.0 } else { 0.0 }, 1.0),
        Claim::at_most("profile identities", identity, options.tol_profile_identity),
        Claim::at_most("support pairs", support_gap, options.tol_support_pairs),
        Claim::at_most("radial pairs", radial_gap, options.tol_support_pairs),
        Claim::at_most("sections in the window", chord_identity, options.tol_chord_identity),
        Claim::at_most("moment residuals", moments, options.tol_moments),
        Claim::at_least("differ from each other", direct, options.min_direct_difference),
        Claim::at_least("differ from the reflection", mirror, options.min_mirror_difference),
        Claim::at_most("evaluation failures", failures.len() as f64, 0.0),
    ];
    let pass = claims.iter().all(|c| c.pass);
    Ok(VerificationReport {
        grid: grid.to_vec(),
        first: one,
        second: two,
        axis,
        max_rel_discrepancy: max_rel,
        concavity_margins: margins,
        chord_window,
        profile_identity_residual: identity,
        support_pair_residual: support_gap,
        radial_pair_residual: radial_gap,
        chord_identity_residual: chord_identity,
        linf_direct: direct,
        linf_mirror: mirror,
        moment_residuals: moment_residuals.to_vec(),
        failures,
        claims,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleeOptions {
    pub tol_maximal: f64,
    pub min_asymmetry: f64,
    pub tol_level: f64,
    pub tol_distribution: f64,
}

impl Default for KleeOptions {
    fn default() -> Self {
        KleeOptions {
            tol_maximal: 1e-6,
            min_asymmetry: 1e-3,
            tol_level: 1e-8,
            tol_distribution: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KleeReport {
    pub grid: Vec<f64>,
    pub central: Vec<f64>,
    pub maximal: Vec<f64>,
    /// `M` of the ball of the same radius, `v₃·λ³`.
    pub reference: f64,
    pub max_rel_deviation: f64,
    pub axis_maximal: f64,
    pub asymmetry: f64,
    pub concavity_margin: f64,
    pub branch_margin: Option<f64>,
    /// Largest `| |L| − t |` at the maximal chord endpoints (body units).
    pub level_residual: f64,
    /// Largest relative gap between brute force and the distribution formula.
    pub distribution_discrepancy: f64,
    pub failures: Vec<String>,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

struct KleeRow {
    central: f64,
    maximal: f64,
    level: f64,
    distribution: f64,
}

fn klee_row(body: &BodyOfRevolution, s: f64) -> Result<KleeRow> {
    let max = maximal_section(body, s)?;
    let (level, distribution) = if s > 0.0 {
        let dist = m_via_distribution(body, s)?;
        let c = max.chord;
        let gap = (c.line(c.left).abs() - dist.level)
            .abs()
            .max((c.line(c.right).abs() - dist.level).abs());
        (gap, relative_difference(dist.volume, max.volume))
    } else {
        (0.0, 0.0)
    };
    Ok(KleeRow {
        central: central_section(body, s)?,
        maximal: max.volume,
        level,
        distribution,
    })
}

/// Checks that `M` of a body in ℝ⁴ equals that of the ball on the grid and
/// the axis while the profile is far from even.
pub fn verify_klee<G: GridMap>(
    body: &BodyOfRevolution,
    grid: &[f64],
    options: &KleeOptions,
    mapper: &G,
) -> Result<KleeReport> {
    if body.dim() != 4 {
        return Err(Error::invalid(alloc::format!(
            "the Klee check runs in dimension 4, got {}",
            body.dim()
        )));
    }
    let lam = body.scale();
    let reference = 4.0 * PI / 3.0 * lam * lam * lam;
    let rows = mapper.map(grid, |s| klee_row(body, s));
    let mut failures = Vec::new();
    let (mut central, mut maximal) = (Vec::new(), Vec::new());
    let (mut deviation, mut level, mut distribution) = (0.0f64, 0.0f64, 0.0f64);
    for (s, row) in grid.iter().zip(rows) {
        match row {
            Ok(r) => {
                central.push(r.central);
                maximal.push(r.maximal);
                deviation = deviation.max(relative_difference(r.maximal, reference));
                level = level.max(r.level);
                distribution = distribution.max(r.distribution);
            }
            Err(e) => {
                failures.push(alloc::format!("s = {s}: {e}"));
                central.push(f64::NAN);
                maximal.push(f64::NAN);
            }
        }
    }
    let axis_maximal = axis_functionals(body).maximal;
    deviation = deviation.max(relative_difference(axis_maximal, reference));
    let profile = body.profile();
    let asymmetry = (0..=4000)
        .map(|i| -1.0 + i as f64 / 2000.0)
        .map(|xi| (profile.value(xi) - profile.value(-xi)).abs())
        .fold(0.0f64, f64::max);
    let concavity_margin = profile.concavity_margin();
    let branch_margin = profile.branch_margin();
    let claims = alloc::vec![
        Claim::at_most("maximal sections match the ball", deviation, options.tol_maximal),
        Claim::at_least("profile is not even", asymmetry, options.min_asymmetry),
        Claim::at_most("profile concave", concavity_margin, CONCAVITY_TOL),
        Claim::at_most("branch condition", branch_margin.unwrap_or(0.0), CONCAVITY_TOL),
        Claim::at_most("chord endpoints on levels", level, options.tol_level),
        Claim::at_most("distribution formula", distribution, options.tol_distribution),
        Claim::at_most("evaluation failures", failures.len() as f64, 0.0),
    ];
    let pass = claims.iter().all(|c| c.pass);
    Ok(KleeReport {
        grid: grid.to_vec(),
        central,
        maximal,
        reference,
        max_rel_deviation: deviation,
        axis_maximal,
        asymmetry,
        concavity_margin,
        branch_margin,
        level_residual: level,
        distribution_discrepancy: distribution,
        failures,
        claims,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::{build_klee_body, KleeConfig};
    use crate::grid::Sequential;

    #[test]
    fn ball_against_itself_fails_only_on_difference() {
        let b = BodyOfRevolution::ball(4).unwrap();
        let r = verify_pair(&b, &b, &[0.3, 1.0], &[], &VerifyOptions::default(), &Sequential).unwrap();
        assert!(!r.pass);
        for c in &r.claims {
            let expected = !c.name.starts_with("differ");
            assert_eq!(c.pass, expected, "{c:?}");
        }
        assert_eq!(r.max_rel_discrepancy, Triple::default());
    }

    #[test]
    fn klee_report_passes() {
        let k = build_klee_body(&KleeConfig::default()).unwrap();
        let r = verify_klee(&k, &[0.0, 0.2, 1.0, 5.0], &KleeOptions::default(), &Sequential).unwrap();
        assert!(r.pass, "{:?}", r.claims);
    }

    #[test]
    fn klee_requires_dimension_four() {
        let b = BodyOfRevolution::ball(5).unwrap();
        assert!(verify_klee(&b, &[1.0], &KleeOptions::default(), &Sequential).is_err());
    }
}
