//! Coverage simulation for the percentile bootstrap: over repeated draws
//! from a standard normal, the 95% interval for the mean should cover the
//! true mean (zero) in 95% +/- 3% of trials.

use evalkit::bootstrap_ci;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[test]
fn bootstrap_interval_covers_at_nominal_rate() {
    let trials = 500;
    let n = 200;
    let resamples = 10_000;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);

    let mut covered = 0;
    for trial in 0..trials {
        let samples: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let (lo, hi) = bootstrap_ci(&samples, resamples, 0.95, trial as u64).unwrap();
        if lo <= 0.0 && 0.0 <= hi {
            covered += 1;
        }
    }
    let rate = covered as f64 / trials as f64;
    assert!(
        (rate - 0.95).abs() <= 0.03,
        "coverage {rate} outside 95% +/- 3%"
    );
}

#[test]
fn interval_width_shrinks_with_sample_count() {
    // Expectation over repetitions: width at n = 1000 < width at n = 100.
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut width = |n: usize, seed: u64| {
        let samples: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let (lo, hi) = bootstrap_ci(&samples, 2000, 0.95, seed).unwrap();
        hi - lo
    };
    let mut wide = 0.0;
    let mut narrow = 0.0;
    for rep in 0..100 {
        wide += width(100, rep);
        narrow += width(1000, 1000 + rep);
    }
    assert!(
        narrow < wide,
        "mean width at n=1000 ({narrow}) not below n=100 ({wide})"
    );
}
