//! Builders for the two families of test bodies: the equimeasurable
//! rearrangement pair in ℝ⁴ (Klee) and the perturbed pair in even dimension
//! (Bonnesen).

use alloc::vec::Vec;

use super::moments::{solve_moments, MomentSolution, MomentSystem, WINDOW};
use crate::body::BodyOfRevolution;
use crate::error::{Error, Result};
use crate::functionals::maximal_section;
use crate::profile::{klee_profile, perturbed_pair_unchecked, BumpTerm, Sign, CONCAVITY_TOL};
use crate::REGIME_SLOPE;

/// Chord endpoints must stay beyond this bound for slopes up to √7/3.
pub const INNER_WINDOW: f64 = WINDOW;
/// Chord endpoints must stay below this bound for slopes from √7/3 on.
pub const OUTER_WINDOW: f64 = 0.875;
/// Offset of the two slopes probed by the chord-window check.
pub const WINDOW_PROBE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleeConfig {
    pub shift: BumpTerm,
    pub scale: f64,
}

impl Default for KleeConfig {
    fn default() -> Self {
        KleeConfig {
            shift: BumpTerm {
                center: 0.5,
                half_width: 0.2,
                amplitude: 0.002,
            },
            scale: 1.0,
        }
    }
}

/// The body in ℝ⁴ whose profile is a level-shifted rearrangement of the
/// semicircle.
pub fn build_klee_body(config: &KleeConfig) -> Result<BodyOfRevolution> {
    BodyOfRevolution::new(4, klee_profile(config.shift)?, config.scale)
}

/// How the bump `ψ` near the pole is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PsiChoice {
    /// Centered at `1 − δ/2`, half-width `0.4δ`, amplitude `max|x_k|`.
    #[default]
    Auto,
    Off,
    Fixed(BumpTerm),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BonnesenConfig {
    pub dim: usize,
    pub delta: f64,
    /// First `ε` tried; it is halved until every check passes.
    pub eps0: f64,
    pub eps_floor: f64,
    /// Defaults to [`MomentSystem::default_basis`].
    pub basis: Option<Vec<BumpTerm>>,
    pub psi: PsiChoice,
}

impl BonnesenConfig {
    pub fn new(dim: usize) -> Self {
        BonnesenConfig {
            dim,
            delta: 0.1,
            eps0: 1e-2,
            eps_floor: 1e-8,
            basis: None,
            psi: PsiChoice::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BonnesenPair {
    pub plus: BodyOfRevolution,
    pub minus: BodyOfRevolution,
    pub system: MomentSystem,
    pub solution: MomentSolution,
    pub eps: f64,
    /// Unscaled `ψ`, if any.
    pub psi: Option<BumpTerm>,
    /// Unscaled signed `φ` bumps.
    pub phi: Vec<(BumpTerm, Sign)>,
    /// `ε` values rejected before the accepted one.
    pub rejected: Vec<f64>,
}

fn resolve_psi(choice: PsiChoice, delta: f64, x: &[f64]) -> Option<BumpTerm> {
    match choice {
        PsiChoice::Off => None,
        PsiChoice::Fixed(b) => Some(b),
        PsiChoice::Auto => Some(BumpTerm {
            center: 1.0 - 0.5 * delta,
            half_width: 0.4 * delta,
            amplitude: x.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        }),
    }
}

/// Checks the chord-window bounds for the maximal chord at slope `s`.
pub fn chord_window_holds(body: &BodyOfRevolution, s: f64) -> Result<bool> {
    let chord = maximal_section(body, s)?.chord;
    let (x, y) = (chord.x() / body.scale(), chord.y() / body.scale());
    let mut ok = true;
    if s <= REGIME_SLOPE {
        ok &= x > INNER_WINDOW && y > INNER_WINDOW;
    }
    if s >= REGIME_SLOPE {
        ok &= x < OUTER_WINDOW && y < OUTER_WINDOW;
    }
    Ok(ok)
}

fn acceptable(plus: &BodyOfRevolution, minus: &BodyOfRevolution) -> Result<bool> {
    for body in [plus, minus] {
        if body.profile().concavity_margin() > CONCAVITY_TOL {
            return Ok(false);
        }
    }
    for s in [REGIME_SLOPE - WINDOW_PROBE, REGIME_SLOPE + WINDOW_PROBE] {
        for body in [plus, minus] {
            if !chord_window_holds(body, s)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Solves the moment system, then halves `ε` from `eps0` until both profiles
/// are concave and the chord-window bounds hold. `dim = 4` needs no moment
/// conditions and uses a single bump.
pub fn build_bonnesen_pair(config: &BonnesenConfig) -> Result<BonnesenPair> {
    let dim = config.dim;
    if dim < 4 || dim % 2 != 0 {
        return Err(Error::invalid(alloc::format!(
            "the perturbed pair is built for even dimensions >= 4, got {dim}"
        )));
    }
    if !(config.eps_floor > 0.0 && config.eps0 >= config.eps_floor) {
        return Err(Error::invalid("need 0 < eps_floor <= eps0"));
    }
    let basis = config
        .basis
        .clone()
        .unwrap_or_else(|| MomentSystem::default_basis(dim, config.delta));
    let mut eps = config.eps0;
    let mut rejected = Vec::new();
    while eps >= config.eps_floor {
        let system = MomentSystem::new(dim, basis.clone(), eps, config.delta)?;
        let solution = solve_moments(&system)?;
        let phi = system.phi(&solution.coefficients);
        let psi = resolve_psi(config.psi, config.delta, &solution.coefficients);
        let (fp, fm) = perturbed_pair_unchecked(&phi, psi, eps, config.delta)?;
        let plus = BodyOfRevolution::new(dim, fp, 1.0)?;
        let minus = BodyOfRevolution::new(dim, fm, 1.0)?;
        if acceptable(&plus, &minus)? {
            return Ok(BonnesenPair {
                plus,
                minus,
                system,
                solution,
                eps,
                psi,
                phi,
                rejected,
            });
        }
        rejected.push(eps);
        eps *= 0.5;
    }
    Err(Error::EpsilonUnderflow {
        floor: config.eps_floor,
    })
}
