//! Slope grids and the mapping strategy used for sweeps over them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::REGIME_SLOPE;

/// Evaluates a function at every grid point and returns the results in grid
/// order. Implementations may run the evaluations concurrently.
pub trait GridMap {
    fn map<T, F>(&self, points: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send;
}

/// Plain in-order evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl GridMap for Sequential {
    fn map<T, F>(&self, points: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send,
    {
        points.iter().map(|&s| f(s)).collect()
    }
}

/// Geometrically spaced slopes on `[min, max]`, optionally with `s = 0` and an
/// 11-point cluster within `±cluster` of the regime slope √7/3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeGrid {
    pub min: f64,
    pub max: f64,
    /// Total number of points, including zero and the cluster.
    pub count: usize,
    pub cluster: Option<f64>,
    pub include_zero: bool,
}

pub const CLUSTER_POINTS: usize = 11;

impl Default for SlopeGrid {
    fn default() -> Self {
        SlopeGrid {
            min: 1e-2,
            max: 20.0,
            count: 100,
            cluster: Some(0.05),
            include_zero: true,
        }
    }
}

impl SlopeGrid {
    /// `count` geometric points on `[min, max]` and nothing else.
    pub fn geometric(min: f64, max: f64, count: usize) -> Self {
        SlopeGrid {
            min,
            max,
            count,
            cluster: None,
            include_zero: false,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(Error::invalid(alloc::format!(
                "slope range [{}, {}] must satisfy 0 < min < max",
                self.min,
                self.max
            )));
        }
        let extras = usize::from(self.include_zero) + self.cluster.map_or(0, |_| CLUSTER_POINTS);
        if self.count < extras + 2 {
            return Err(Error::invalid(alloc::format!(
                "grid count {} leaves fewer than 2 geometric points",
                self.count
            )));
        }
        let n = self.count - extras;
        let ratio = libm::log(self.max / self.min) / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| self.min * libm::exp(ratio * i as f64)).collect();
        pts[n - 1] = self.max;
        if self.include_zero {
            pts.push(0.0);
        }
        if let Some(w) = self.cluster {
            if !(w > 0.0 && w < REGIME_SLOPE) {
                return Err(Error::invalid(alloc::format!("cluster half-width {w} out of range")));
            }
            let half = (CLUSTER_POINTS / 2) as f64;
            pts.extend((0..CLUSTER_POINTS).map(|k| REGIME_SLOPE + w * (k as f64 - half) / half));
        }
        pts.sort_by(f64::total_cmp);
        Ok(pts)
    }
}
