//! Golden-section search for the maximum of a unimodal function.

use super::Bracket;
use crate::error::{Error, Result};

/// Default bracket width at which the search stops.
pub const GOLDEN_TOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8; // (√5 − 1)/2

/// Returns `(argmax, max)`. The endpoints are evaluated too, so maxima on the
/// boundary of the bracket come out exact. Any point of a plateau narrower
/// than `tol` is an acceptable answer.
pub fn try_maximize_unimodal<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_nan() {
            Err(Error::NonFinite { at: x })
        } else {
            Ok(v)
        }
    };
    let (mut a, mut b) = (bracket.lower(), bracket.upper());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            if c <= a || c >= d {
                break;
            }
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            if d >= b || d <= c {
                break;
            }
            fd = eval(d)?;
        }
    }
    let (mut best_x, mut best) = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [bracket.lower(), bracket.upper()] {
        let v = eval(x)?;
        if v > best {
            best_x = x;
            best = v;
        }
    }
    Ok((best_x, best))
}

pub fn maximize_unimodal<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    try_maximize_unimodal(|x| Ok(f(x)), bracket, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Bracket {
        Bracket::new(-1.0, 1.0).unwrap()
    }

    #[test]
    fn centered_parabola() {
        let (x, v) = maximize_unimodal(|h| -h * h, unit(), GOLDEN_TOL).unwrap();
        assert!(x.abs() < 1e-12);
        assert!(v.abs() < 1e-20);
    }

    #[test]
    fn shifted_parabola() {
        let (x, v) = maximize_unimodal(|h| -(h - 0.25) * (h - 0.25), unit(), GOLDEN_TOL).unwrap();
        assert!((x - 0.25).abs() < 1e-12);
        assert!(v.abs() < 1e-20);
    }

    #[test]
    fn boundary_maximum_is_exact() {
        let (x, v) = maximize_unimodal(|h| h, unit(), GOLDEN_TOL).unwrap();
        assert_eq!((x, v), (1.0, 1.0));
    }

    #[test]
    fn plateau_point_is_accepted() {
        let (x, v) = maximize_unimodal(|h| -(h.abs() - 0.1).max(0.0), unit(), GOLDEN_TOL).unwrap();
        assert!(x.abs() <= 0.1 + 1e-12);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn nan_is_reported() {
        assert!(maximize_unimodal(|_| f64::NAN, unit(), GOLDEN_TOL).is_err());
    }
}
