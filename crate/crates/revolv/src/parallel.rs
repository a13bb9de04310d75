//! A [`GridMap`] backed by a rayon pool.

use rayon::prelude::*;
use revolv_core::GridMap;

use crate::error::CliError;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "REVOLV_THREADS";

pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    pub fn new(threads: usize) -> Result<Self, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))?;
        Ok(Parallel { pool })
    }

    /// All available cores, capped by `REVOLV_THREADS` when set.
    pub fn from_env() -> Result<Self, CliError> {
        let available = std::thread::available_parallelism().map_or(1, |n| n.get());
        let threads = match std::env::var(THREADS_VAR) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n >= 1 => n.min(available),
                _ => {
                    return Err(CliError::Config(format!(
                        "{THREADS_VAR} must be a positive integer, got `{v}`"
                    )))
                }
            },
            Err(_) => available,
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl GridMap for Parallel {
    fn map<T, F>(&self, points: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send,
    {
        // Indexed parallel collect keeps grid order.
        self.pool.install(|| points.par_iter().map(|&s| f(s)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_order() {
        let p = Parallel::new(3).unwrap();
        let pts: Vec<f64> = (0..100).map(f64::from).collect();
        assert_eq!(
            p.map(&pts, |s| s * 2.0),
            pts.iter().map(|s| s * 2.0).collect::<Vec<_>>()
        );
    }
}
