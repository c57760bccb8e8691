//! Seeded synthetic latent tensors, standing in for trained encoder output.

use rand::Rng;

use crate::coders::Symbol;
use crate::latent::{LatentError, LatentTensor};

/// How quantization levels are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelDistribution {
    Uniform,
    /// Two-sided geometric around zero: `P(k) ∝ ratio^|k|`.
    Geometric { ratio: f64 },
}

/// `levels` consecutive indices centred on zero, e.g. 5 -> `-2..=2`.
pub fn level_set(levels: usize) -> Vec<Symbol> {
    let lo = -((levels as i64 - 1) / 2);
    (0..levels as i64).map(|i| (lo + i) as Symbol).collect()
}

fn weights(levels: &[Symbol], dist: LevelDistribution) -> Vec<f64> {
    match dist {
        LevelDistribution::Uniform => vec![1.0; levels.len()],
        LevelDistribution::Geometric { ratio } => levels.iter().map(|&k| ratio.powi((k as i32).abs())).collect(),
    }
}

pub fn random_tensor<R: Rng>(
    rng: &mut R,
    dims: (u32, u32, u32),
    levels: usize,
    dist: LevelDistribution,
    step: f32,
) -> Result<LatentTensor, LatentError> {
    let set = level_set(levels.max(1));
    let w = weights(&set, dist);
    let total: f64 = w.iter().sum();
    let n = dims.0 as usize * dims.1 as usize * dims.2 as usize;
    let indices = (0..n)
        .map(|_| {
            let mut x = rng.gen::<f64>() * total;
            for (i, &wi) in w.iter().enumerate() {
                if x < wi {
                    return set[i];
                }
                x -= wi;
            }
            set[set.len() - 1]
        })
        .collect();
    LatentTensor::new(dims, step, indices)
}

/// A tensor holding exactly `count` copies of each `(level, count)` in scan
/// order; the counts must sum to the tensor size.
pub fn tensor_with_counts(dims: (u32, u32, u32), step: f32, counts: &[(Symbol, usize)]) -> Result<LatentTensor, LatentError> {
    let symbols: Vec<Symbol> = counts.iter().flat_map(|&(k, c)| std::iter::repeat_n(k, c)).collect();
    let n = dims.0 as usize * dims.1 as usize * dims.2 as usize;
    if symbols.len() != n {
        return Err(LatentError::LengthMismatch { expected: n, actual: symbols.len() });
    }
    crate::latent::zigzag_unscan(&symbols, dims, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn levels_are_centred() {
        assert_eq!(level_set(5), [-2, -1, 0, 1, 2]);
        assert_eq!(level_set(4), [-1, 0, 1, 2]);
        assert_eq!(level_set(1), [0]);
    }

    #[test]
    fn sampling_is_seeded_and_in_range() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let dist = LevelDistribution::Geometric { ratio: 0.5 };
        let t1 = random_tensor(&mut a, (2, 5, 7), 9, dist, 0.1).unwrap();
        let t2 = random_tensor(&mut b, (2, 5, 7), 9, dist, 0.1).unwrap();
        assert_eq!(t1, t2);
        assert!(t1.indices().iter().all(|k| (-4..=4).contains(k)));
    }

    #[test]
    fn exact_counts() {
        let t = tensor_with_counts((1, 2, 3), 1.0, &[(0, 4), (3, 2)]).unwrap();
        let mut idx = t.indices().to_vec();
        idx.sort();
        assert_eq!(idx, [0, 0, 0, 0, 3, 3]);
        assert!(tensor_with_counts((1, 2, 3), 1.0, &[(0, 4)]).is_err());
    }
}
