//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval is first split at every knot, so integrands that are only
//! piecewise smooth (bump edges, chord endpoints) start out with clean
//! panels. The panel with the largest error estimate is bisected until the
//! summed estimate drops below `max(abs_tol, rel_tol·|I|)`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Bracket;
use crate::error::{Error, Result};

// Kronrod abscissas on [0, 1]; odd indices are the Gauss-7 nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on the number of live panels, independent of depth.
const MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any initial panel.
    pub max_depth: u32,
    /// Abscissas where the integrand may lose smoothness.
    pub knots: Vec<f64>,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            max_depth: 48,
            knots: Vec::new(),
        }
    }
}

impl QuadratureOptions {
    pub fn with_knots(mut self, knots: Vec<f64>) -> Self {
        self.knots = knots;
        self
    }

    pub fn tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_depth == 0 {
            return Err(Error::invalid("quadrature depth must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod15<F>(f: &mut F, lo: f64, hi: f64, depth: u32) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(Error::NonFinite { at: center - dx });
        }
        kronrod += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !fc.is_finite() {
        return Err(Error::NonFinite { at: center });
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Ok(Panel {
        lo,
        hi,
        value,
        error,
        depth,
    })
}

/// Adaptive integral of a fallible integrand, returning `(value, error_bound)`.
pub fn integrate_with_error<F>(mut f: F, interval: Bracket, opts: &QuadratureOptions) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    opts.validate()?;
    let (a, b) = (interval.lower(), interval.upper());
    let mut cuts: Vec<f64> = opts
        .knots
        .iter()
        .copied()
        .filter(|k| k.is_finite() && *k > a && *k < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut prev = a;
    for &c in cuts.iter().chain(core::iter::once(&b)) {
        if c > prev {
            heap.push(kronrod15(&mut f, prev, c, 0)?);
            prev = c;
        }
    }
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if error <= target {
            // Re-sum to shed drift from the running updates.
            let total: f64 = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
            let error: f64 = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
            return Ok((total, error));
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Err(Error::QuadratureNotConverged {
                    estimate: total,
                    error_bound: error,
                })
            }
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.depth >= opts.max_depth
            || mid <= worst.lo
            || mid >= worst.hi
            || heap.len() + frozen.len() >= MAX_PANELS
        {
            frozen.push(worst);
            continue;
        }
        let left = kronrod15(&mut f, worst.lo, mid, worst.depth + 1)?;
        let right = kronrod15(&mut f, mid, worst.hi, worst.depth + 1)?;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Adaptive integral of a fallible integrand.
pub fn try_integrate<F>(f: F, interval: Bracket, opts: &QuadratureOptions) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_error(f, interval, opts).map(|(v, _)| v)
}

pub fn integrate<F>(mut f: F, interval: Bracket, opts: &QuadratureOptions) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), interval, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn unit() -> Bracket {
        Bracket::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x, unit(), &QuadratureOptions::default()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        // Kronrod-15 integrates degree 22 exactly; a single panel suffices.
        let v = integrate(|x| libm::pow(x, 21.0), unit(), &QuadratureOptions::default()).unwrap();
        assert!((v - 1.0 / 22.0).abs() < 1e-14);
    }

    #[test]
    fn semicircle_area() {
        let b = Bracket::new(-1.0, 1.0).unwrap();
        let v = integrate(|x| libm::sqrt((1.0 - x * x).max(0.0)), b, &QuadratureOptions::default()).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-11, "{v}");
    }

    fn mollifier(x: f64) -> f64 {
        if x.abs() >= 1.0 {
            0.0
        } else {
            libm::exp(1.0 - 1.0 / (1.0 - x * x))
        }
    }

    #[test]
    fn mollifier_against_midpoint_oracle() {
        // Midpoint rule with 10⁶ panels; its error for a C^∞ function with
        // compact support is far below 1e-10.
        let n = 1_000_000;
        let h = 2.0 / n as f64;
        let oracle: f64 = (0..n).map(|i| mollifier(-1.0 + (i as f64 + 0.5) * h)).sum::<f64>() * h;
        let b = Bracket::new(-1.0, 1.0).unwrap();
        let v = integrate(mollifier, b, &QuadratureOptions::default()).unwrap();
        assert!((v - oracle).abs() < 1e-10, "{v} vs {oracle}");
    }

    #[test]
    fn knots_split_the_interval() {
        let opts = QuadratureOptions::default().with_knots(vec![0.3, 0.3, -5.0, 0.7]);
        let v = integrate(|x| (x - 0.3).abs(), unit(), &opts).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-15);
    }

    #[test]
    fn depth_exhaustion_reports_estimate() {
        let opts = QuadratureOptions {
            max_depth: 2,
            ..QuadratureOptions::default()
        };
        let err = integrate(|x| 1.0 / libm::sqrt(x.max(1e-300)), unit(), &opts).unwrap_err();
        match err {
            Error::QuadratureNotConverged { estimate, error_bound } => {
                assert!(estimate > 1.0 && error_bound > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tolerances() {
        let opts = QuadratureOptions {
            rel_tol: 0.0,
            ..QuadratureOptions::default()
        };
        assert!(integrate(|x| x, unit(), &opts).is_err());
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        assert!(matches!(
            integrate(|_| f64::NAN, unit(), &QuadratureOptions::default()),
            Err(Error::NonFinite { .. })
        ));
    }
}
