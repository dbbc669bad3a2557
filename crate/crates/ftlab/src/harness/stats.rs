//! Multinomial resampling confidence intervals and log-log slope fits.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StatsError {
    #[error("histogram {0} has zero total count")]
    ZeroTotal(usize),
    #[error("confidence level {0} is outside (0, 1)")]
    BadLevel(f64),
    #[error("at least one resample is required")]
    NoResamples,
    #[error("a slope fit needs at least 2 usable points, got {0}")]
    TooFewPoints(usize),
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// One multinomial draw with the same total and the observed frequencies,
/// generated as a chain of conditional binomials.
pub fn multinomial_resample<R: Rng + ?Sized>(counts: &[u64], rng: &mut R) -> Vec<u64> {
    let mut left: u64 = counts.iter().sum();
    let mut mass_left = left as f64;
    let mut out = Vec::with_capacity(counts.len());
    for &c in counts {
        let k = if left == 0 || c == 0 {
            0
        } else if c as f64 >= mass_left {
            left
        } else {
            Binomial::new(left, c as f64 / mass_left)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        out.push(k);
        left -= k;
        mass_left -= c as f64;
    }
    out
}

/// Percentile intervals of the statistics computed by `stat` over
/// multinomial resamples of every histogram.
///
/// Each histogram is resampled independently with its own total, which
/// matches experiments where every measurement setting has a fixed shot
/// budget.
pub fn resample_ci<R: Rng + ?Sized>(
    histograms: &[Vec<u64>],
    stat: impl Fn(&[Vec<u64>]) -> Vec<f64>,
    level: f64,
    resamples: usize,
    rng: &mut R,
) -> Result<Vec<Interval>, StatsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::BadLevel(level));
    }
    if resamples == 0 {
        return Err(StatsError::NoResamples);
    }
    if let Some(k) = histograms.iter().position(|h| h.iter().sum::<u64>() == 0) {
        return Err(StatsError::ZeroTotal(k));
    }
    let n_stats = stat(histograms).len();
    let mut samples = vec![Vec::with_capacity(resamples); n_stats];
    for _ in 0..resamples {
        let drawn: Vec<Vec<u64>> = histograms.iter().map(|h| multinomial_resample(h, rng)).collect();
        for (s, v) in samples.iter_mut().zip(stat(&drawn)) {
            s.push(v);
        }
    }
    Ok(samples
        .into_iter()
        .map(|mut v| {
            v.retain(|x| !x.is_nan());
            v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN after filtering"));
            if v.is_empty() {
                return Interval { lo: f64::NAN, hi: f64::NAN };
            }
            Interval {
                lo: quantile(&v, 0.5 * (1.0 - level)),
                hi: quantile(&v, 0.5 * (1.0 + level)),
            }
        })
        .collect())
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos.fract());
    match sorted.get(i + 1) {
        Some(next) => sorted[i] + frac * (next - sorted[i]),
        None => sorted[i],
    }
}

/// Least-squares slope of `ln y` against `ln x`. Points with a
/// nonpositive coordinate are skipped; their indices are returned.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<(f64, Vec<usize>), StatsError> {
    let mut skipped = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, &(x, y)) in points.iter().enumerate() {
        if x > 0.0 && y > 0.0 {
            xs.push(x.ln());
            ys.push(y.ln());
        } else {
            skipped.push(k);
        }
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFewPoints(xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok((sxy / sxx, skipped))
}
