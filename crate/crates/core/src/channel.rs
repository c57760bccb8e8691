//! Substitution-only noise channel over oligo pools.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::oligo::{Oligo, OligoPool};
use crate::quaternary::Nucleotide;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("substitution rate {0} outside [0, 1]")]
pub struct InvalidRate(pub f64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    substitution_rate: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(substitution_rate: f64, seed: u64) -> Result<Self, InvalidRate> {
        if !(0.0..=1.0).contains(&substitution_rate) {
            return Err(InvalidRate(substitution_rate));
        }
        Ok(ChannelSpec { substitution_rate, seed })
    }

    pub fn substitution_rate(&self) -> f64 {
        self.substitution_rate
    }
}

/// Replaces each nucleotide, with probability `p`, by one of the other three
/// chosen uniformly. Output is a pure function of `(pool, spec)`.
pub fn transmit(pool: &OligoPool, spec: &ChannelSpec) -> OligoPool {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    pool.oligos()
        .iter()
        .map(|oligo| {
            let noisy: String = oligo
                .as_str()
                .chars()
                .map(|c| {
                    if !rng.gen_bool(spec.substitution_rate) {
                        return c;
                    }
                    let nt = Nucleotide::from_char(c).expect("pool holds ACGT only");
                    nt.others()[rng.gen_range(0..3)].to_char()
                })
                .collect();
            Oligo::new(noisy).expect("substitutions stay in ACGT")
        })
        .collect()
}

/// Number of positions where two equal-shaped pools differ.
pub fn count_substitutions(sent: &OligoPool, received: &OligoPool) -> usize {
    sent.oligos()
        .iter()
        .zip(received.oligos())
        .map(|(a, b)| a.as_str().bytes().zip(b.as_str().bytes()).filter(|(x, y)| x != y).count())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> OligoPool {
        (0..20).map(|i| Oligo::new("ACGT".repeat(10 + i % 3)).unwrap()).collect()
    }

    #[test]
    fn zero_rate_is_identity() {
        let p = pool();
        assert_eq!(transmit(&p, &ChannelSpec::new(0.0, 1).unwrap()), p);
    }

    #[test]
    fn full_rate_changes_every_nucleotide() {
        let p = pool();
        let out = transmit(&p, &ChannelSpec::new(1.0, 5).unwrap());
        assert_eq!(count_substitutions(&p, &out), p.total_nucleotides());
        for (a, b) in p.oligos().iter().zip(out.oligos()) {
            assert_eq!(a.len(), b.len());
        }
    }

    #[test]
    fn seeded_and_reproducible() {
        let p = pool();
        let spec = ChannelSpec::new(0.2, 99).unwrap();
        assert_eq!(transmit(&p, &spec), transmit(&p, &spec));
        assert_ne!(transmit(&p, &spec), transmit(&p, &ChannelSpec::new(0.2, 100).unwrap()));
    }

    #[test]
    fn rejects_bad_rate() {
        assert_eq!(ChannelSpec::new(1.5, 0), Err(InvalidRate(1.5)));
        assert!(ChannelSpec::new(-0.1, 0).is_err());
        assert!(ChannelSpec::new(f64::NAN, 0).is_err());
    }
}
