//! End-to-end codec: latent tensor to oligo pool and back.

use crate::coders::{decode_stream, encode_stream, expected_length, CodeBook, CoderError, CoderKind, FrequencyTable, StreamDecoder};
use crate::latent::{zigzag_scan, zigzag_unscan, LatentTensor};
use crate::metrics::entropy_base4;
use crate::oligo::{encode_fio, encode_gio, pack, unpack, GeneralInfo, OligoLayout, OligoPool, OligoType};
use crate::Error;

/// Codec parameters chosen at encode time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecConfig {
    pub coder: CoderKind,
    pub layout: OligoLayout,
    pub barcode: u64,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig { coder: CoderKind::Sfc4, layout: OligoLayout::default(), barcode: 0 }
    }
}

impl CodecConfig {
    pub fn new(coder: CoderKind) -> Self {
        CodecConfig { coder, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodeSummary {
    pub coder: CoderKind,
    pub symbols: usize,
    pub distinct_symbols: usize,
    pub gio_oligos: usize,
    pub fio_oligos: usize,
    pub do_oligos: usize,
    /// Every nucleotide in the pool, headers and padding included.
    pub n_nuc: usize,
    /// Length of the coded data stream before packing.
    pub data_nt: usize,
    /// Quaternary entropy of the quantized latent, nt per component.
    pub entropy: f64,
    /// Expected codeword length under the empirical table, nt per symbol.
    pub nt_per_symbol: f64,
}

#[derive(Debug, Clone)]
pub struct Encoded {
    pub pool: OligoPool,
    pub table: FrequencyTable,
    pub summary: EncodeSummary,
}

pub fn encode_tensor(tensor: &LatentTensor, config: &CodecConfig) -> Result<Encoded, Error> {
    config.layout.check()?;
    let symbols = zigzag_scan(tensor);
    let table = FrequencyTable::from_symbols(&symbols);
    let book = CodeBook::build(config.coder, &table)?;
    let data = encode_stream(&book, &symbols)?;

    let info = GeneralInfo::new(config.coder, tensor.dims(), tensor.step(), table.len() as u64);
    let gio = pack(&encode_gio(&info)?, config.barcode, OligoType::Gio, &config.layout)?;
    let fio = pack(&encode_fio(&table)?, config.barcode, OligoType::Fio, &config.layout)?;
    let dos = pack(&data, config.barcode, OligoType::Do, &config.layout)?;

    let summary = EncodeSummary {
        coder: config.coder,
        symbols: symbols.len(),
        distinct_symbols: table.len(),
        gio_oligos: gio.len(),
        fio_oligos: fio.len(),
        do_oligos: dos.len(),
        n_nuc: (gio.len() + fio.len() + dos.len()) * config.layout.oligo_length,
        data_nt: data.len(),
        entropy: entropy_base4(&table)?,
        nt_per_symbol: expected_length(&book, &table)?,
    };
    let pool = gio.into_iter().chain(fio).chain(dos).collect();
    Ok(Encoded { pool, table, summary })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeWarning {
    /// The data payload ran out before every scan position was filled; the
    /// remaining positions are zero.
    ShortPayload { decoded: usize, expected: usize },
}

impl std::fmt::Display for DecodeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeWarning::ShortPayload { decoded, expected } => {
                write!(f, "data payload exhausted after {decoded} of {expected} symbols; remaining positions set to zero")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecodedTensor {
    pub tensor: LatentTensor,
    pub info: GeneralInfo,
    pub table: FrequencyTable,
    pub warnings: Vec<DecodeWarning>,
}

pub fn decode_pool(pool: &OligoPool, barcode: u64, layout: &OligoLayout) -> Result<DecodedTensor, Error> {
    let unpacked = unpack(pool, barcode, layout)?;
    let info = unpacked.info;
    let book = CodeBook::build(info.coder, &unpacked.table)?;
    let expected = info.symbol_count();

    let mut warnings = Vec::new();
    let mut decoder = StreamDecoder::new(&book, &unpacked.data);
    let mut symbols = Vec::with_capacity(expected);
    while symbols.len() < expected {
        match decoder.next_symbol() {
            Ok(Some(s)) => symbols.push(s),
            Ok(None) | Err(CoderError::Truncated { .. }) => {
                warnings.push(DecodeWarning::ShortPayload { decoded: symbols.len(), expected });
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let tensor = zigzag_unscan(&symbols, info.dims, info.step())?;
    Ok(DecodedTensor { tensor, info, table: unpacked.table, warnings })
}

/// Strict decode of exactly `n` symbols from a bare data stream.
pub fn decode_symbols(coder: CoderKind, table: &FrequencyTable, stream: &str, n: usize) -> Result<Vec<i16>, Error> {
    let book = CodeBook::build(coder, table)?;
    Ok(decode_stream(&book, stream, n)?.symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oligo::Oligo;

    fn tensor() -> LatentTensor {
        let idx: Vec<i16> = (0..48).map(|i| [0, 0, 0, 1, -1, 0, 2, 0][i % 8]).collect();
        LatentTensor::new((3, 4, 4), 0.25, idx).unwrap()
    }

    #[test]
    fn round_trip_each_coder() {
        let t = tensor();
        for coder in CoderKind::ALL {
            let enc = encode_tensor(&t, &CodecConfig::new(coder)).unwrap();
            assert_eq!(enc.summary.n_nuc, enc.pool.total_nucleotides());
            let dec = decode_pool(&enc.pool, 0, &OligoLayout::default()).unwrap();
            assert_eq!(dec.tensor, t);
            assert!(dec.warnings.is_empty());
            assert_eq!(dec.info.coder, coder);
        }
    }

    #[test]
    fn all_zero_tensor_structure() {
        let t = LatentTensor::zeros((1, 4, 4), 0.5).unwrap();
        let enc = encode_tensor(&t, &CodecConfig::new(CoderKind::Fixed)).unwrap();
        let s = &enc.summary;
        assert_eq!((s.gio_oligos, s.fio_oligos), (1, 1));
        assert!(s.do_oligos >= 1);
        assert_eq!(s.entropy, 0.0);
    }

    #[test]
    fn truncated_data_is_a_warning() {
        let t = LatentTensor::new((1, 40, 40), 1.0, (0..1600).map(|i| (i % 12) as i16).collect()).unwrap();
        let enc = encode_tensor(&t, &CodecConfig::new(CoderKind::Fixed)).unwrap();
        assert!(enc.summary.do_oligos > 2);
        // drop the last data oligo: index gaps are only detectable before the end
        let layout = OligoLayout::default();
        let last_do = enc.pool.len() - 1;
        let kept: Vec<Oligo> = enc.pool.oligos()[..last_do].to_vec();
        let dec = decode_pool(&OligoPool::new(kept), 0, &layout).unwrap();
        assert_eq!(dec.warnings.len(), 1);
        let DecodeWarning::ShortPayload { decoded, expected } = dec.warnings[0];
        assert_eq!(expected, 1600);
        assert!(decoded < 1600);
        assert_eq!(&zigzag_scan(&dec.tensor)[..decoded], &zigzag_scan(&t)[..decoded]);
    }

    #[test]
    fn corrupted_goldman_payload_is_an_error() {
        let t = tensor();
        let enc = encode_tensor(&t, &CodecConfig::new(CoderKind::Goldman)).unwrap();
        let mut oligos = enc.pool.into_oligos();
        let last = oligos.len() - 1;
        let mut seq = oligos[last].as_str().to_string();
        // repeat the first payload nucleotide
        let at = OligoLayout::default().header_len() + 1;
        let prev = seq.as_bytes()[at - 1] as char;
        seq.replace_range(at..at + 1, &prev.to_string());
        oligos[last] = Oligo::new(seq).unwrap();
        let err = decode_pool(&OligoPool::new(oligos), 0, &OligoLayout::default()).unwrap_err();
        assert!(matches!(err, Error::Coder(CoderError::Corrupt { .. })), "{err}");
    }
}
