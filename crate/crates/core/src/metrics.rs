//! Rate, entropy and distortion measures.

use thiserror::Error;

use crate::coders::FrequencyTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("frequency table is empty")]
    EmptyTable,
    #[error("nucleotide count must be positive")]
    NoNucleotides,
    #[error("image dimensions and depth must be positive")]
    InvalidImage,
    #[error("images differ in size ({0} vs {1} samples)")]
    DimensionMismatch(usize, usize),
}

/// Empirical entropy of `table` in the given logarithm base.
pub fn entropy(table: &FrequencyTable, base: f64) -> Result<f64, MetricsError> {
    if table.is_empty() {
        return Err(MetricsError::EmptyTable);
    }
    let total = table.total() as f64;
    let bits: f64 = table
        .counts()
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    Ok((bits / base.log2()).max(0.0))
}

/// Entropy in nucleotides per component (base 4).
pub fn entropy_base4(table: &FrequencyTable) -> Result<f64, MetricsError> {
    entropy(table, 4.0)
}

/// Source bits per stored nucleotide: `height·width·depth / n_nuc`.
pub fn compression_rate(height: u64, width: u64, depth_bits: u64, n_nuc: u64) -> Result<f64, MetricsError> {
    if n_nuc == 0 {
        return Err(MetricsError::NoNucleotides);
    }
    if height == 0 || width == 0 || depth_bits == 0 {
        return Err(MetricsError::InvalidImage);
    }
    Ok((height * width * depth_bits) as f64 / n_nuc as f64)
}

/// Peak amplitude `2^d - 1` for `d`-bit samples.
pub fn peak_for_depth(depth_bits: u32) -> f64 {
    2f64.powi(depth_bits as i32) - 1.0
}

/// `10·log10(peak² / MSE)`; identical inputs give `+inf`.
pub fn psnr(original: &[f64], decoded: &[f64], peak: f64) -> Result<f64, MetricsError> {
    if original.len() != decoded.len() {
        return Err(MetricsError::DimensionMismatch(original.len(), decoded.len()));
    }
    if original.is_empty() {
        return Err(MetricsError::InvalidImage);
    }
    let mse = original.iter().zip(decoded).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / original.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

/// One point of a rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    /// bits per nucleotide
    pub compression_rate: f64,
    /// dB
    pub psnr: f64,
    /// nucleotides per component
    pub entropy: f64,
    pub n_nuc: u64,
}

impl RatePoint {
    pub const CSV_HEADER: &'static str = "rate,psnr";

    pub fn csv_line(&self) -> String {
        format!("{},{}", self.compression_rate, self.psnr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(counts: &[u64]) -> FrequencyTable {
        FrequencyTable::from_counts(counts.iter().enumerate().map(|(i, &c)| (i as i16, c))).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_base4(&table(&[2, 1, 1])).unwrap(), 0.75);
        assert_eq!(entropy_base4(&table(&[5, 5, 5, 5])).unwrap(), 1.0);
        assert_eq!(entropy_base4(&table(&[9])).unwrap(), 0.0);
        assert_eq!(entropy_base4(&FrequencyTable::default()), Err(MetricsError::EmptyTable));
        // never above log4 K
        let t = table(&[7, 1, 3, 3, 9, 2]);
        assert!(entropy_base4(&t).unwrap() < 6f64.log(4.0));
        assert!((entropy(&table(&[1; 6]), 4.0).unwrap() - 6f64.log(4.0)).abs() < 1e-12);
    }

    #[test]
    fn rate_examples() {
        assert_eq!(compression_rate(768, 512, 8, 393_216).unwrap(), 8.0);
        assert_eq!(compression_rate(96, 96, 8, 9216).unwrap(), 8.0);
        assert_eq!(compression_rate(96, 96, 8, 2 * 9216).unwrap(), 4.0);
        assert_eq!(compression_rate(1, 1, 8, 0), Err(MetricsError::NoNucleotides));
    }

    #[test]
    fn psnr_examples() {
        let a = vec![10.0, 20.0, 30.0];
        assert_eq!(psnr(&a, &a, 255.0).unwrap(), f64::INFINITY);
        let b: Vec<f64> = a.iter().map(|x| x + 255.0).collect();
        assert!(psnr(&a, &b, 255.0).unwrap().abs() < 1e-12);
        let zeros = vec![0.0; 16];
        let grey = vec![128.0; 16];
        let expect = 10.0 * (255.0f64 * 255.0 / (128.0 * 128.0)).log10();
        assert!((psnr(&zeros, &grey, 255.0).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 5.987).abs() < 1e-3);
        assert_eq!(psnr(&grey, &zeros, 255.0).unwrap(), psnr(&zeros, &grey, 255.0).unwrap());
        assert_eq!(psnr(&a, &zeros, 255.0), Err(MetricsError::DimensionMismatch(3, 16)));
        assert_eq!(peak_for_depth(8), 255.0);
    }

    #[test]
    fn csv_line() {
        let p = RatePoint { compression_rate: 1.5, psnr: 30.25, entropy: 0.5, n_nuc: 400 };
        assert_eq!(p.csv_line(), "1.5,30.25");
    }
}
