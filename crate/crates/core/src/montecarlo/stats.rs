//! Error analysis for correlated time series.

use thiserror::Error;

/// Fewest bins an error estimate is built from.
pub const MIN_BINS: usize = 16;
/// Bins used when the series is long enough.
pub const DEFAULT_BINS: usize = 32;
/// The integrated time is summed out to this many multiples of itself.
pub const WINDOW_FACTOR: f64 = 6.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("series of length {len} is too short for lag {max_lag} (needs more than {})", 4 * max_lag)]
    TooShort { len: usize, max_lag: usize },
    #[error("series has zero variance")]
    ZeroVariance,
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance about the mean.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelation {
    /// `rho[t]` for `t = 0..=max_lag`, with `rho[0] = 1`.
    pub rho: Vec<f64>,
    /// `1/2 + sum_{t=1}^{window} rho[t]`
    pub integrated_time: f64,
    pub window: usize,
    /// Whether a window with `window >= 6 * integrated_time` was found.
    pub converged: bool,
}

fn autocovariance(x: &[f64], m: f64, t: usize) -> f64 {
    let n = x.len() - t;
    x[..n]
        .iter()
        .zip(&x[t..])
        .map(|(a, b)| (a - m) * (b - m))
        .sum::<f64>()
        / n as f64
}

/// Smallest `W` with `W >= 6 tau(W)` among the lags in `rho`.
fn self_consistent_window(rho: &[f64]) -> (f64, usize, bool) {
    let mut tau = 0.5;
    for (w, r) in rho.iter().enumerate().skip(1) {
        tau += r;
        if w as f64 >= WINDOW_FACTOR * tau {
            return (tau, w, true);
        }
    }
    (tau, rho.len().saturating_sub(1), false)
}

/// Normalized autocovariance up to `max_lag` and the integrated
/// autocorrelation time from a self-consistent window.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Autocorrelation, StatsError> {
    if series.len() <= 4 * max_lag {
        return Err(StatsError::TooShort {
            len: series.len(),
            max_lag,
        });
    }
    let m = mean(series);
    let c0 = autocovariance(series, m, 0);
    if !(c0 > 0.0) {
        return Err(StatsError::ZeroVariance);
    }
    let rho: Vec<f64> = (0..=max_lag)
        .map(|t| autocovariance(series, m, t) / c0)
        .collect();
    let (integrated_time, window, converged) = self_consistent_window(&rho);
    Ok(Autocorrelation {
        rho,
        integrated_time,
        window,
        converged,
    })
}

/// Integrated time computed lag by lag, stopping at the self-consistent
/// window instead of evaluating every lag up to `max_lag`.
pub fn integrated_time(series: &[f64], max_lag: usize) -> Result<(f64, bool), StatsError> {
    if series.len() <= 4 * max_lag {
        return Err(StatsError::TooShort {
            len: series.len(),
            max_lag,
        });
    }
    let m = mean(series);
    let c0 = autocovariance(series, m, 0);
    if !(c0 > 0.0) {
        return Err(StatsError::ZeroVariance);
    }
    let mut tau = 0.5;
    for w in 1..=max_lag {
        tau += autocovariance(series, m, w) / c0;
        if w as f64 >= WINDOW_FACTOR * tau {
            return Ok((tau, true));
        }
    }
    Ok((tau, false))
}

/// Consecutive equal-size bins; a remainder at the end is dropped.
pub fn bin(series: &[f64], bins: usize) -> Vec<&[f64]> {
    let size = series.len() / bins;
    if size == 0 {
        return Vec::new();
    }
    series.chunks_exact(size).take(bins).collect()
}

/// Number of bins to use, or `None` if fewer than [`MIN_BINS`] are possible.
pub fn bin_count(len: usize) -> Option<usize> {
    if len >= DEFAULT_BINS {
        Some(DEFAULT_BINS)
    } else if len >= MIN_BINS {
        Some(MIN_BINS)
    } else {
        None
    }
}

/// Mean and its standard error from the spread of bin means.
pub fn binned_mean(series: &[f64], bins: usize) -> (f64, f64) {
    let means: Vec<f64> = bin(series, bins).iter().map(|b| mean(b)).collect();
    let b = means.len() as f64;
    let m = mean(&means);
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (b - 1.0);
    (mean(series), (var / b).sqrt())
}

/// Jackknife estimate and error of `f` over bins; `f` sees the series with
/// one bin removed.
pub fn jackknife<F>(series: &[f64], bins: usize, f: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let size = series.len() / bins;
    let used = &series[..size * bins];
    let full = f(used);
    let mut rest = Vec::with_capacity(used.len() - size);
    let estimates: Vec<f64> = (0..bins)
        .map(|k| {
            rest.clear();
            rest.extend_from_slice(&used[..k * size]);
            rest.extend_from_slice(&used[(k + 1) * size..]);
            f(&rest)
        })
        .collect();
    let b = bins as f64;
    let m = mean(&estimates);
    let var = estimates.iter().map(|e| (e - m).powi(2)).sum::<f64>() * (b - 1.0) / b;
    (full, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
        // Box–Muller
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    #[test]
    fn white_noise_has_time_one_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x: Vec<f64> = (0..200_000).map(|_| gaussian(&mut rng)).collect();
        let ac = autocorrelation(&x, 100).unwrap();
        assert!(ac.converged);
        assert!(
            (ac.integrated_time - 0.5).abs() < 0.05,
            "{}",
            ac.integrated_time
        );
        assert_eq!(ac.rho[0], 1.0);
    }

    #[test]
    fn ar1_matches_closed_form() {
        let phi = 0.9;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut x = vec![0.0; 400_000];
        for i in 1..x.len() {
            x[i] = phi * x[i - 1] + gaussian(&mut rng);
        }
        let expected = (1.0 + phi) / (2.0 * (1.0 - phi));
        let ac = autocorrelation(&x, 500).unwrap();
        assert!(
            (ac.integrated_time - expected).abs() < 0.2 * expected,
            "{}",
            ac.integrated_time
        );
        let (lazy, ok) = integrated_time(&x, 500).unwrap();
        assert!(ok);
        assert_eq!(lazy, ac.integrated_time);
    }

    #[test]
    fn degenerate_series() {
        assert_eq!(
            autocorrelation(&[2.0; 100], 10).unwrap_err(),
            StatsError::ZeroVariance
        );
        assert!(matches!(
            autocorrelation(&[1.0, 2.0, 3.0], 1),
            Err(StatsError::TooShort { .. })
        ));
    }

    #[test]
    fn binning_of_independent_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..32_000).map(|_| gaussian(&mut rng)).collect();
        let (m, err) = binned_mean(&x, 32);
        let naive = (variance(&x) / x.len() as f64).sqrt();
        assert!(m.abs() < 4.0 * naive);
        assert!((err / naive - 1.0).abs() < 0.5);
        assert_eq!(bin_count(10), None);
        assert_eq!(bin_count(20), Some(16));
    }

    #[test]
    fn jackknife_of_mean_is_standard_error() {
        let x: Vec<f64> = (0..64).map(|i| (i % 7) as f64).collect();
        let (est, err) = jackknife(&x, 16, mean);
        let (bm, berr) = binned_mean(&x, 16);
        assert!((est - bm).abs() < 1e-12);
        assert!((err - berr).abs() < 1e-12);
    }
}
