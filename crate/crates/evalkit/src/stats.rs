use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::episodes::EpisodeRecord;
use crate::{Error, Result};

/// Percentile bootstrap of the sample mean: resample with replacement,
/// take means, return the (1 - level)/2 and (1 + level)/2 percentiles with
/// linear interpolation between order statistics.
pub fn bootstrap_ci(samples: &[f64], resamples: usize, level: f64, seed: u64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += samples[(rng.next_u64() % n as u64) as usize];
        }
        means.push(sum / n as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).expect("finite means"));
    let alpha = (1.0 - level) / 2.0;
    Ok((percentile(&means, alpha), percentile(&means, 1.0 - alpha)))
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationStats {
    pub mean_deg: f64,
    pub std_deg: f64,
    /// Episodes skipped for zero displacement; reported, never silent.
    pub excluded: usize,
}

/// Per-episode final deviation from the x axis: |atan2(dy, dx)| in degrees.
/// Returns the mean and sample standard deviation (n - 1; zero when fewer
/// than two episodes survive).
pub fn deviation_stats(records: &[EpisodeRecord]) -> DeviationStats {
    let mut angles = Vec::with_capacity(records.len());
    let mut excluded = 0;
    for r in records {
        let (dx, dy) = r.final_displacement();
        if dx == 0.0 && dy == 0.0 {
            excluded += 1;
            continue;
        }
        angles.push(dy.atan2(dx).abs().to_degrees());
    }
    let stats = mean_and_sample_std(&angles);
    DeviationStats {
        mean_deg: stats.0,
        std_deg: stats.1,
        excluded,
    }
}

pub(crate) fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
