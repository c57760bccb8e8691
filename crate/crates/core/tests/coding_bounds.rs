use dnacodec::coders::{build_goldman, build_sfc4, expected_digits, goldman_lengths, FrequencyTable};
use dnacodec::metrics::entropy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimal weighted length over every length vector in `1..=k` that satisfies
/// the ternary Kraft inequality; any such vector is realisable as a prefix code.
fn optimal_ternary_weighted_length(counts: &[u64]) -> u64 {
    let k = counts.len();
    let max_len = k.max(1);
    let scale = 3u64.pow(max_len as u32);
    let mut lengths = vec![1usize; k];
    let mut best = u64::MAX;
    loop {
        let kraft: u64 = lengths.iter().map(|&l| 3u64.pow((max_len - l) as u32)).sum();
        if kraft <= scale {
            let w = counts.iter().zip(&lengths).map(|(&c, &l)| c * l as u64).sum();
            best = best.min(w);
        }
        let mut i = 0;
        loop {
            if i == k {
                return best;
            }
            lengths[i] += 1;
            if lengths[i] <= max_len {
                break;
            }
            lengths[i] = 1;
            i += 1;
        }
    }
}

fn table(counts: &[u64]) -> FrequencyTable {
    FrequencyTable::from_counts(counts.iter().enumerate().map(|(i, &c)| (i as i16 - 3, c))).unwrap()
}

fn goldman_weighted(t: &FrequencyTable) -> u64 {
    let lengths = goldman_lengths(t).unwrap();
    t.counts().zip(lengths).map(|(c, l)| c * l as u64).sum()
}

#[test]
fn oracle_matches_hand_examples() {
    assert_eq!(optimal_ternary_weighted_length(&[8, 4, 2, 1, 1]), 20);
    assert_eq!(optimal_ternary_weighted_length(&[2, 1, 1]), 4);
    assert_eq!(optimal_ternary_weighted_length(&[1]), 1);
}

#[test]
fn goldman_is_optimal_on_small_count_vectors() {
    for k in 1..=4usize {
        let mut counts = vec![1u64; k];
        loop {
            let t = table(&counts);
            assert_eq!(goldman_weighted(&t), optimal_ternary_weighted_length(&counts), "counts {counts:?}");
            let mut i = 0;
            while i < k {
                counts[i] += 1;
                if counts[i] <= 5 {
                    break;
                }
                counts[i] = 1;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
}

#[test]
fn goldman_is_optimal_on_random_sources_up_to_six_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let k = rng.gen_range(5..=6);
        let counts: Vec<u64> = (0..k).map(|_| rng.gen_range(1..200)).collect();
        let t = table(&counts);
        assert_eq!(goldman_weighted(&t), optimal_ternary_weighted_length(&counts), "counts {counts:?}");
    }
}

#[test]
fn expected_lengths_sit_within_one_digit_of_entropy() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let k = rng.gen_range(2..60);
        let skew = rng.gen_range(0.05..1.0f64);
        let counts: Vec<u64> = (0..k).map(|i| 1 + (1000.0 * skew.powi(i)) as u64 + rng.gen_range(0..5)).collect();
        let t = table(&counts);
        let h12 = entropy(&t, 12.0).unwrap();
        let h3 = entropy(&t, 3.0).unwrap();
        let sfc4 = expected_digits(&build_sfc4(&t).unwrap(), &t).unwrap();
        let gold = expected_digits(&build_goldman(&t).unwrap(), &t).unwrap();
        assert!(sfc4 >= h12 - 1e-12 && sfc4 < h12 + 1.0, "sfc4 {sfc4} vs H12 {h12}");
        assert!(gold >= h3 - 1e-12 && gold < h3 + 1.0, "goldman {gold} vs H3 {h3}");
    }
}
