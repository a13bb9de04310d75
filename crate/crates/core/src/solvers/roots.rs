use super::Bracket;
use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket of a fallible function.
///
/// Stops once the bracket is narrower than `tol` or can no longer be halved in
/// floating point, and returns the midpoint of the final bracket. `tol = 0`
/// runs to machine precision.
pub fn try_bisect_root<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (bracket.lower(), bracket.upper());
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if !flo.is_finite() {
        return Err(Error::NonFinite { at: lo });
    }
    if !fhi.is_finite() {
        return Err(Error::NonFinite { at: hi });
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { lower: lo, upper: hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if !fm.is_finite() {
            return Err(Error::NonFinite { at: mid });
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn bisect_root<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_bisect_root(|x| Ok(f(x)), bracket, tol)
}
