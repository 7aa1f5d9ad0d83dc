use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Elementwise arithmetic mean of per-worker gradients. Summation runs in
/// worker order so the result is deterministic.
pub fn average_gradients(per_worker: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = per_worker.first().ok_or(Error::NoGradients)?;
    let len = first.len();
    for g in per_worker {
        if g.len() != len {
            return Err(Error::GradLength {
                expected: len,
                got: g.len(),
            });
        }
    }
    let scale = 1.0 / per_worker.len() as f64;
    let mut out = vec![0.0; len];
    for g in per_worker {
        for (o, v) in out.iter_mut().zip(g) {
            *o += v;
        }
    }
    for o in &mut out {
        *o *= scale;
    }
    Ok(out)
}

/// The shuffle every replica derives for (run seed, iteration, epoch).
/// Master and workers shard the same permutation, so no index traffic is
/// needed at the minibatch barrier.
pub fn epoch_permutation(seed: u64, iteration: u64, epoch: u64, len: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, iteration, epoch));
    let mut perm: Vec<usize> = (0..len).collect();
    // Fisher-Yates.
    for i in (1..len).rev() {
        let j = (next_u64(&mut rng) % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

fn next_u64(rng: &mut ChaCha8Rng) -> u64 {
    use rand_chacha::rand_core::RngCore;
    rng.next_u64()
}

fn mix(seed: u64, iteration: u64, epoch: u64) -> u64 {
    // splitmix64-style finalizer over the three inputs.
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in [iteration, epoch] {
        h ^= v.wrapping_add(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(h << 6)
            .wrapping_add(h >> 2);
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 27;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_gradients_average_to_themselves() {
        let g = vec![1.0, -2.0, 3.5];
        let out = average_gradients(&[g.clone(), g.clone(), g.clone()]).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn opposite_gradients_cancel() {
        let g = vec![0.4, -1.1, 2.2];
        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
        let out = average_gradients(&[g, neg]).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_gradient_is_bitwise_identity() {
        let g = vec![0.1 + 0.2, -7.77, 1e-300];
        let out = average_gradients(std::slice::from_ref(&g)).unwrap();
        for (a, b) in out.iter().zip(&g) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(average_gradients(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(average_gradients(&[]).is_err());
    }

    #[test]
    fn permutation_is_deterministic_and_complete() {
        let a = epoch_permutation(7, 3, 1, 64);
        let b = epoch_permutation(7, 3, 1, 64);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..64).collect::<Vec<_>>());
        assert_ne!(a, epoch_permutation(7, 3, 2, 64));
        assert_ne!(a, epoch_permutation(7, 4, 1, 64));
    }
}
