//! Oligo formatting: fixed-length strands carrying an in-band barcode, a
//! record type and an index, followed by a payload chunk.
//!
//! ```text
//! | barcode (6 pairs) | type (1 pair) | index (8 pairs) | payload ... pad |
//! ```
//!
//! Three record types share one layout: the General Information Oligo
//! (dims, step, coder id), the Frequency Information Oligos (symbol counts)
//! and the Data Oligos (the coded latent stream). Pools are unordered; all
//! ordering is recovered from the index field.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::coders::{CoderError, CoderKind, FrequencyTable, Symbol};
use crate::quaternary::{decode_uint_base12, encode_uint_base12, parse_nucleotides, QuaternaryError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("{field} value {value} does not fit its field")]
    FieldOverflow { field: &'static str, value: u64 },
    #[error("payload: {0}")]
    Payload(QuaternaryError),
    #[error("oligo {oligo}: malformed {field} field: {source}")]
    MalformedOligo { oligo: usize, field: &'static str, source: QuaternaryError },
    #[error("oligo {oligo}: unknown record type rank {rank}")]
    UnknownType { oligo: usize, rank: u64 },
    #[error("oligo {oligo}: length {length} nt, layout expects {expected}")]
    WrongLength { oligo: usize, length: usize, expected: usize },
    #[error("no general information oligo for barcode {barcode}")]
    MissingGio { barcode: u64 },
    #[error("duplicate {otype} index {index}")]
    DuplicateIndex { otype: OligoType, index: u64 },
    #[error("missing {otype} index {index}")]
    MissingIndex { otype: OligoType, index: u64 },
    #[error("general information: {0}")]
    BadGeneralInfo(String),
    #[error("frequency records: {0}")]
    BadFrequencyRecord(String),
    #[error(transparent)]
    Coder(#[from] CoderError),
    #[error("FASTA line {line}: {reason}")]
    Fasta { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Field widths of an oligo. Widths are in pairs (2 nt each).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OligoLayout {
    pub oligo_length: usize,
    pub barcode_pairs: usize,
    pub type_pairs: usize,
    pub index_pairs: usize,
}

impl Default for OligoLayout {
    fn default() -> Self {
        OligoLayout { oligo_length: 200, barcode_pairs: 6, type_pairs: 1, index_pairs: 8 }
    }
}

impl OligoLayout {
    pub fn with_length(oligo_length: usize) -> Result<Self, FormatError> {
        let layout = OligoLayout { oligo_length, ..Self::default() };
        layout.check()?;
        Ok(layout)
    }

    pub fn header_len(&self) -> usize {
        2 * (self.barcode_pairs + self.type_pairs + self.index_pairs)
    }

    pub fn payload_capacity(&self) -> usize {
        self.oligo_length.saturating_sub(self.header_len())
    }

    pub fn check(&self) -> Result<(), FormatError> {
        if !self.oligo_length.is_multiple_of(2) {
            return Err(FormatError::InvalidLayout(format!("oligo length {} is odd", self.oligo_length)));
        }
        if self.barcode_pairs == 0 || self.type_pairs == 0 || self.index_pairs == 0 {
            return Err(FormatError::InvalidLayout("field widths must be at least one pair".into()));
        }
        if self.barcode_pairs > 17 || self.index_pairs > 17 || self.type_pairs > 17 {
            return Err(FormatError::InvalidLayout("field widths above 17 pairs overflow 64-bit values".into()));
        }
        if self.payload_capacity() == 0 {
            return Err(FormatError::InvalidLayout(format!(
                "oligo length {} leaves no payload after a {} nt header",
                self.oligo_length,
                self.header_len()
            )));
        }
        Ok(())
    }

    pub fn max_barcode(&self) -> u64 {
        12u64.pow(self.barcode_pairs as u32) - 1
    }

    fn split<'a>(&self, seq: &'a str) -> (&'a str, &'a str, &'a str, &'a str) {
        let b = 2 * self.barcode_pairs;
        let t = b + 2 * self.type_pairs;
        let i = t + 2 * self.index_pairs;
        (&seq[..b], &seq[b..t], &seq[t..i], &seq[i..])
    }
}

/// Record type of an oligo; the discriminant is the type field's pair rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OligoType {
    Gio = 0,
    Fio = 1,
    Do = 2,
}

impl OligoType {
    pub fn from_rank(rank: u64) -> Option<Self> {
        match rank {
            0 => Some(OligoType::Gio),
            1 => Some(OligoType::Fio),
            2 => Some(OligoType::Do),
            _ => None,
        }
    }
}

impl fmt::Display for OligoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OligoType::Gio => "GIO",
            OligoType::Fio => "FIO",
            OligoType::Do => "DO",
        })
    }
}

/// One fixed-length strand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Oligo(String);

impl Oligo {
    pub fn new(sequence: impl Into<String>) -> Result<Self, QuaternaryError> {
        let sequence = sequence.into();
        parse_nucleotides(&sequence)?;
        Ok(Oligo(sequence))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Oligo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An unordered collection of oligos.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OligoPool {
    oligos: Vec<Oligo>,
}

impl OligoPool {
    pub fn new(oligos: Vec<Oligo>) -> Self {
        OligoPool { oligos }
    }

    pub fn oligos(&self) -> &[Oligo] {
        &self.oligos
    }

    pub fn into_oligos(self) -> Vec<Oligo> {
        self.oligos
    }

    pub fn len(&self) -> usize {
        self.oligos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oligos.is_empty()
    }

    /// Total nucleotides over every oligo.
    pub fn total_nucleotides(&self) -> usize {
        self.oligos.iter().map(Oligo::len).sum()
    }

    pub fn extend(&mut self, other: OligoPool) {
        self.oligos.extend(other.oligos);
    }

    /// Multiset view, used to compare pools irrespective of order.
    pub fn sorted_sequences(&self) -> Vec<&str> {
        let mut seqs: Vec<&str> = self.oligos.iter().map(Oligo::as_str).collect();
        seqs.sort_unstable();
        seqs
    }
}

impl FromIterator<Oligo> for OligoPool {
    fn from_iter<I: IntoIterator<Item = Oligo>>(iter: I) -> Self {
        OligoPool { oligos: iter.into_iter().collect() }
    }
}

const PAD: &str = "AC";

fn field(value: u64, width: usize, name: &'static str) -> Result<String, FormatError> {
    encode_uint_base12(value, width).map_err(|_| FormatError::FieldOverflow { field: name, value })
}

/// Splits `payload` into indexed oligos of one record type. The last chunk
/// is padded with `ACAC...`; an empty payload yields a single all-pad oligo.
pub fn pack(payload: &str, barcode: u64, otype: OligoType, layout: &OligoLayout) -> Result<Vec<Oligo>, FormatError> {
    layout.check()?;
    parse_nucleotides(payload).map_err(FormatError::Payload)?;
    let barcode_field = field(barcode, layout.barcode_pairs, "barcode")?;
    let type_field = field(otype as u64, layout.type_pairs, "type")?;
    let capacity = layout.payload_capacity();
    let chunks: Vec<&str> = if payload.is_empty() {
        vec![""]
    } else {
        payload.as_bytes().chunks(capacity).map(|c| std::str::from_utf8(c).expect("ascii payload")).collect()
    };

    chunks
        .iter()
        .enumerate()
        .map(|(i, chunk)| {
            let mut seq = String::with_capacity(layout.oligo_length);
            seq.push_str(&barcode_field);
            seq.push_str(&type_field);
            seq.push_str(&field(i as u64, layout.index_pairs, "index")?);
            seq.push_str(chunk);
            let missing = layout.oligo_length - seq.len();
            seq.extend(PAD.chars().cycle().take(missing));
            Ok(Oligo(seq))
        })
        .collect()
}

/// Zigzag map of signed levels onto naturals: `k >= 0 -> 2k`, `k < 0 -> -2k-1`.
pub fn zigzag_level(k: Symbol) -> u64 {
    let k = k as i64;
    if k >= 0 {
        (2 * k) as u64
    } else {
        (-2 * k - 1) as u64
    }
}

pub fn unzigzag_level(v: u64) -> Option<Symbol> {
    let k = if v.is_multiple_of(2) { (v / 2) as i64 } else { -((v / 2) as i64) - 1 };
    (k.abs() <= 32767).then_some(k as Symbol)
}

pub const FIO_LEVEL_PAIRS: usize = 5;
pub const FIO_COUNT_PAIRS: usize = 9;
/// Nucleotides per frequency record.
pub const FIO_RECORD_LEN: usize = 2 * (FIO_LEVEL_PAIRS + FIO_COUNT_PAIRS);

/// One record per table entry, in table order: zigzag level (5 pairs) then
/// count (9 pairs).
pub fn encode_fio(table: &FrequencyTable) -> Result<String, FormatError> {
    let mut out = String::with_capacity(table.len() * FIO_RECORD_LEN);
    for &(symbol, count) in table.entries() {
        if symbol == Symbol::MIN {
            return Err(FormatError::FieldOverflow { field: "level", value: zigzag_level(symbol) });
        }
        out.push_str(&field(zigzag_level(symbol), FIO_LEVEL_PAIRS, "level")?);
        out.push_str(&field(count, FIO_COUNT_PAIRS, "count")?);
    }
    Ok(out)
}

pub fn decode_fio(stream: &str, records: usize) -> Result<FrequencyTable, FormatError> {
    let needed = records * FIO_RECORD_LEN;
    if stream.len() < needed {
        return Err(FormatError::BadFrequencyRecord(format!("{} nt for {records} records", stream.len())));
    }
    let mut counts = Vec::with_capacity(records);
    for r in 0..records {
        let rec = &stream[r * FIO_RECORD_LEN..(r + 1) * FIO_RECORD_LEN];
        let (level, count) = rec.split_at(2 * FIO_LEVEL_PAIRS);
        let bad = |e: QuaternaryError| FormatError::BadFrequencyRecord(format!("record {r}: {e}"));
        let level = decode_uint_base12(level).map_err(bad)?;
        let count = decode_uint_base12(count).map_err(bad)?;
        let symbol = unzigzag_level(level)
            .ok_or_else(|| FormatError::BadFrequencyRecord(format!("record {r}: level {level} out of range")))?;
        counts.push((symbol, count));
    }
    let table = FrequencyTable::from_counts(counts)
        .map_err(|e| FormatError::BadFrequencyRecord(e.to_string()))?;
    Ok(table)
}

/// Codec parameters carried by the general information oligo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneralInfo {
    pub format_version: u64,
    pub coder: CoderKind,
    pub dims: (u32, u32, u32),
    /// IEEE-754 single-precision bits of the quantization step.
    pub step_bits: u32,
    pub fio_record_count: u64,
}

impl GeneralInfo {
    pub const FORMAT_VERSION: u64 = 1;

    pub fn new(coder: CoderKind, dims: (u32, u32, u32), step: f32, fio_record_count: u64) -> Self {
        GeneralInfo { format_version: Self::FORMAT_VERSION, coder, dims, step_bits: step.to_bits(), fio_record_count }
    }

    pub fn step(&self) -> f32 {
        f32::from_bits(self.step_bits)
    }

    pub fn symbol_count(&self) -> usize {
        self.dims.0 as usize * self.dims.1 as usize * self.dims.2 as usize
    }
}

// (field name, width in pairs); 32 pairs = 64 nt in total
const GIO_FIELDS: [(&str, usize); 7] =
    [("version", 2), ("coder", 1), ("channels", 5), ("height", 5), ("width", 5), ("step", 9), ("fio_records", 5)];

pub const GIO_PAYLOAD_LEN: usize = 64;

pub fn encode_gio(info: &GeneralInfo) -> Result<String, FormatError> {
    let (c, h, w) = info.dims;
    if c == 0 || h == 0 || w == 0 {
        return Err(FormatError::BadGeneralInfo(format!("dims {c}x{h}x{w} must be positive")));
    }
    let values = [
        info.format_version,
        info.coder.id() as u64,
        c as u64,
        h as u64,
        w as u64,
        info.step_bits as u64,
        info.fio_record_count,
    ];
    let mut out = String::with_capacity(GIO_PAYLOAD_LEN);
    for ((name, width), value) in GIO_FIELDS.iter().zip(values) {
        out.push_str(&field(value, *width, name)?);
    }
    Ok(out)
}

pub fn decode_gio(payload: &str) -> Result<GeneralInfo, FormatError> {
    if payload.len() < GIO_PAYLOAD_LEN {
        return Err(FormatError::BadGeneralInfo(format!("payload of {} nt", payload.len())));
    }
    let mut values = [0u64; 7];
    let mut at = 0;
    for (slot, (name, width)) in values.iter_mut().zip(GIO_FIELDS) {
        let text = &payload[at..at + 2 * width];
        *slot = decode_uint_base12(text).map_err(|e| FormatError::BadGeneralInfo(format!("{name}: {e}")))?;
        at += 2 * width;
    }
    let [version, coder, c, h, w, step_bits, fio_records] = values;
    if version != GeneralInfo::FORMAT_VERSION {
        return Err(FormatError::BadGeneralInfo(format!("unsupported format version {version}")));
    }
    let coder = CoderKind::from_id(coder).ok_or_else(|| FormatError::BadGeneralInfo(format!("coder id {coder}")))?;
    let dim = |v: u64| u32::try_from(v).ok().filter(|&d| d > 0);
    let dims = match (dim(c), dim(h), dim(w)) {
        (Some(c), Some(h), Some(w)) => (c, h, w),
        _ => return Err(FormatError::BadGeneralInfo(format!("dims {c}x{h}x{w}"))),
    };
    let step_bits = u32::try_from(step_bits).map_err(|_| FormatError::BadGeneralInfo("step bits".into()))?;
    Ok(GeneralInfo { format_version: version, coder, dims, step_bits, fio_record_count: fio_records })
}

/// A parsed oligo header plus its payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedOligo<'a> {
    pub barcode: u64,
    pub otype: OligoType,
    pub index: u64,
    pub payload: &'a str,
}

pub fn parse_oligo<'a>(oligo: &'a Oligo, position: usize, layout: &OligoLayout) -> Result<ParsedOligo<'a>, FormatError> {
    if oligo.len() != layout.oligo_length {
        return Err(FormatError::WrongLength { oligo: position, length: oligo.len(), expected: layout.oligo_length });
    }
    let (barcode, otype, index, payload) = layout.split(oligo.as_str());
    let malformed = |field| move |source| FormatError::MalformedOligo { oligo: position, field, source };
    let barcode = decode_uint_base12(barcode).map_err(malformed("barcode"))?;
    let rank = decode_uint_base12(otype).map_err(malformed("type"))?;
    let otype = OligoType::from_rank(rank).ok_or(FormatError::UnknownType { oligo: position, rank })?;
    let index = decode_uint_base12(index).map_err(malformed("index"))?;
    Ok(ParsedOligo { barcode, otype, index, payload })
}

/// The three reassembled streams of one stored file.
#[derive(Debug, Clone, PartialEq)]
pub struct Unpacked {
    pub info: GeneralInfo,
    pub table: FrequencyTable,
    /// Concatenated data payload, still carrying the final chunk's pad.
    pub data: String,
}

fn reassemble(
    otype: OligoType,
    chunks: BTreeMap<u64, &str>,
    expected: Option<u64>,
) -> Result<String, FormatError> {
    for (want, &got) in (0u64..).zip(chunks.keys()) {
        if want != got {
            return Err(FormatError::MissingIndex { otype, index: want });
        }
    }
    if let Some(n) = expected {
        if (chunks.len() as u64) < n {
            return Err(FormatError::MissingIndex { otype, index: chunks.len() as u64 });
        }
    }
    Ok(chunks.into_values().collect())
}

/// Filters `pool` to `barcode`, orders each record type by index and
/// decodes the general information and frequency table.
///
/// Oligos whose barcode field does not parse are ignored, since they cannot
/// be attributed to any file.
pub fn unpack(pool: &OligoPool, barcode: u64, layout: &OligoLayout) -> Result<Unpacked, FormatError> {
    layout.check()?;
    let mut classes: [BTreeMap<u64, &str>; 3] = Default::default();
    for (position, oligo) in pool.oligos().iter().enumerate() {
        if oligo.len() != layout.oligo_length {
            return Err(FormatError::WrongLength { oligo: position, length: oligo.len(), expected: layout.oligo_length });
        }
        let header = &oligo.as_str()[..2 * layout.barcode_pairs];
        match decode_uint_base12(header) {
            Ok(b) if b == barcode => {}
            _ => continue,
        }
        let parsed = parse_oligo(oligo, position, layout)?;
        let class = &mut classes[parsed.otype as usize];
        if class.insert(parsed.index, parsed.payload).is_some() {
            return Err(FormatError::DuplicateIndex { otype: parsed.otype, index: parsed.index });
        }
    }
    let [gio, fio, data] = classes;

    let gio_payload = match (gio.len(), gio.get(&0)) {
        (0, _) => return Err(FormatError::MissingGio { barcode }),
        (1, Some(p)) => *p,
        (_, _) => {
            let index = gio.keys().copied().find(|&i| i != 0).unwrap_or(0);
            return Err(FormatError::BadGeneralInfo(format!("unexpected GIO index {index}")));
        }
    };
    let info = decode_gio(gio_payload)?;

    let fio_len = info.fio_record_count as usize * FIO_RECORD_LEN;
    let fio_oligos = fio_len.div_ceil(layout.payload_capacity()).max(1) as u64;
    let fio_stream = reassemble(OligoType::Fio, fio, Some(fio_oligos))?;
    let table = decode_fio(&fio_stream[..fio_len], info.fio_record_count as usize)?;

    let data = reassemble(OligoType::Do, data, Some(1))?;
    Ok(Unpacked { info, table, data })
}

/// Writes one FASTA record per oligo with a `>oligo_<n>` header.
pub fn write_pool<W: Write>(pool: &OligoPool, mut writer: W) -> Result<(), FormatError> {
    for (n, oligo) in pool.oligos().iter().enumerate() {
        writeln!(writer, ">oligo_{n}")?;
        writeln!(writer, "{oligo}")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads FASTA records in any order; header text is ignored. Sequences may
/// be wrapped over several lines.
pub fn read_pool<R: BufRead>(reader: R) -> Result<OligoPool, FormatError> {
    let mut oligos = Vec::new();
    let mut current: Option<(usize, String)> = None;
    let finish = |rec: Option<(usize, String)>, oligos: &mut Vec<Oligo>| -> Result<(), FormatError> {
        if let Some((line, seq)) = rec {
            if seq.is_empty() {
                return Err(FormatError::Fasta { line, reason: "record without sequence".into() });
            }
            if let Some(first) = oligos.first() {
                if first.len() != seq.len() {
                    return Err(FormatError::Fasta {
                        line,
                        reason: format!("sequence of {} nt, previous records have {}", seq.len(), first.len()),
                    });
                }
            }
            oligos.push(Oligo(seq));
        }
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end();
        let lineno = i + 1;
        if line.starts_with('>') {
            finish(current.take(), &mut oligos)?;
            current = Some((lineno, String::new()));
        } else if line.is_empty() {
            continue;
        } else {
            let Some((_, seq)) = current.as_mut() else {
                return Err(FormatError::Fasta { line: lineno, reason: "sequence before first header".into() });
            };
            for (col, c) in line.chars().enumerate() {
                let c = c.to_ascii_uppercase();
                if !matches!(c, 'A' | 'C' | 'G' | 'T') {
                    return Err(FormatError::Fasta {
                        line: lineno,
                        reason: format!("invalid nucleotide {c:?} at column {}", col + 1),
                    });
                }
                seq.push(c);
            }
        }
    }
    finish(current.take(), &mut oligos)?;
    Ok(OligoPool::new(oligos))
}
