//! Storage of quantized latent tensors on synthetic DNA.
//!
//! A latent tensor is zig-zag scanned, entropy coded into a quaternary
//! stream under homopolymer constraints, then formatted into fixed-length
//! oligos that can be decoded from an unordered pool.
//!
//! ```
//! use dnacodec::{decode_pool, encode_tensor, CodecConfig, CoderKind, LatentTensor, OligoLayout};
//!
//! let tensor = LatentTensor::new((1, 2, 2), 0.5, vec![0, 1, -1, 0]).unwrap();
//! let encoded = encode_tensor(&tensor, &CodecConfig::new(CoderKind::Sfc4)).unwrap();
//! let decoded = decode_pool(&encoded.pool, 0, &OligoLayout::default()).unwrap();
//! assert_eq!(decoded.tensor, tensor);
//! ```

pub mod channel;
pub mod coders;
pub mod latent;
pub mod metrics;
pub mod oligo;
pub mod pipeline;
pub mod quaternary;
pub mod synthetic;

pub use channel::{transmit, ChannelSpec};
pub use coders::{CodeBook, CoderKind, FrequencyTable, Symbol};
pub use latent::LatentTensor;
pub use metrics::RatePoint;
pub use oligo::{read_pool, write_pool, Oligo, OligoLayout, OligoPool};
pub use pipeline::{decode_pool, encode_tensor, CodecConfig, DecodeWarning, DecodedTensor, EncodeSummary, Encoded};
pub use quaternary::{ConstraintSpec, Nucleotide, Pair, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Quaternary(#[from] quaternary::QuaternaryError),
    #[error(transparent)]
    Coder(#[from] coders::CoderError),
    #[error(transparent)]
    Latent(#[from] latent::LatentError),
    #[error(transparent)]
    Format(#[from] oligo::FormatError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
    #[error(transparent)]
    Channel(#[from] channel::InvalidRate),
}
