//! Nucleotide and non-repeating dinucleotide alphabets, biochemical
//! constraint checks and the fixed-width base-12 field coding that every
//! in-band field is built from.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuaternaryError {
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid nucleotide {found:?} at position {position}")]
    InvalidNucleotide { found: char, position: usize },
    #[error("value {value} does not fit in {width} base-12 digits")]
    Overflow { value: u64, width: usize },
    #[error("malformed field: {group:?} at position {position} is not a non-repeating pair")]
    MalformedField { group: String, position: usize },
    #[error("field of odd length {0} nt")]
    OddLength(usize),
    #[error("invalid constraint spec: {0}")]
    InvalidSpec(String),
}

/// One DNA base. The derived order `A < C < G < T` is normative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nucleotide {
    A,
    C,
    G,
    T,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'A' => Some(Nucleotide::A),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            'T' => Some(Nucleotide::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_gc(self) -> bool {
        matches!(self, Nucleotide::C | Nucleotide::G)
    }

    /// The three bases different from `self`, in normative order.
    pub fn others(self) -> [Nucleotide; 3] {
        let mut out = [Nucleotide::A; 3];
        let mut i = 0;
        for n in Self::ALL {
            if n != self {
                out[i] = n;
                i += 1;
            }
        }
        out
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parses an ASCII `ACGT` string.
pub fn parse_nucleotides(seq: &str) -> Result<Vec<Nucleotide>, QuaternaryError> {
    seq.chars()
        .enumerate()
        .map(|(position, c)| {
            Nucleotide::from_char(c).ok_or(QuaternaryError::InvalidNucleotide { found: c, position })
        })
        .collect()
}

pub fn render(nts: &[Nucleotide]) -> String {
    nts.iter().map(|n| n.to_char()).collect()
}

/// A dinucleotide with two distinct bases. The twelve pairs are ranked
/// lexicographically: `AC=0, AG=1, ..., TG=11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    first: Nucleotide,
    second: Nucleotide,
}

impl Pair {
    pub const COUNT: usize = 12;

    pub fn new(first: Nucleotide, second: Nucleotide) -> Option<Self> {
        (first != second).then_some(Pair { first, second })
    }

    pub fn from_rank(rank: u8) -> Option<Self> {
        if rank as usize >= Self::COUNT {
            return None;
        }
        let first = Nucleotide::ALL[(rank / 3) as usize];
        let second = first.others()[(rank % 3) as usize];
        Some(Pair { first, second })
    }

    pub fn rank(self) -> u8 {
        let second = self.first.others().iter().position(|&n| n == self.second).unwrap_or(0);
        (self.first.index() * 3 + second) as u8
    }

    pub fn first(self) -> Nucleotide {
        self.first
    }

    pub fn second(self) -> Nucleotide {
        self.second
    }

    pub fn push_to(self, out: &mut String) {
        out.push(self.first.to_char());
        out.push(self.second.to_char());
    }

    /// Parses a two-character group; fails for repeated or non-ACGT characters.
    pub fn parse(group: &str) -> Option<Self> {
        let mut chars = group.chars();
        let first = Nucleotide::from_char(chars.next()?)?;
        let second = Nucleotide::from_char(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        Pair::new(first, second)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first, self.second)
    }
}

/// Renders pair ranks (each `< 12`) as a nucleotide string.
pub fn ranks_to_string(ranks: &[u8]) -> String {
    let mut out = String::with_capacity(ranks.len() * 2);
    for &r in ranks {
        Pair::from_rank(r).expect("pair rank below 12").push_to(&mut out);
    }
    out
}

/// Parses a pair-aligned nucleotide string back into pair ranks.
pub fn string_to_ranks(seq: &str) -> Result<Vec<u8>, QuaternaryError> {
    let bytes = seq.as_bytes();
    if !bytes.len().is_multiple_of(2) {
        return Err(QuaternaryError::OddLength(bytes.len()));
    }
    bytes
        .chunks(2)
        .enumerate()
        .map(|(i, chunk)| {
            let group = String::from_utf8_lossy(chunk);
            Pair::parse(&group).map(Pair::rank).ok_or_else(|| QuaternaryError::MalformedField {
                group: group.into_owned(),
                position: i * 2,
            })
        })
        .collect()
}

/// Biochemical constraints checked on emitted sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSpec {
    pub max_homopolymer_run: usize,
    pub gc_min: f64,
    pub gc_max: f64,
}

impl Default for ConstraintSpec {
    fn default() -> Self {
        ConstraintSpec { max_homopolymer_run: 3, gc_min: 0.4, gc_max: 0.6 }
    }
}

impl ConstraintSpec {
    pub fn new(max_homopolymer_run: usize, gc_min: f64, gc_max: f64) -> Result<Self, QuaternaryError> {
        let spec = ConstraintSpec { max_homopolymer_run, gc_min, gc_max };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<(), QuaternaryError> {
        if self.max_homopolymer_run < 1 {
            return Err(QuaternaryError::InvalidSpec("max homopolymer run must be at least 1".into()));
        }
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        if !in_unit(self.gc_min) || !in_unit(self.gc_max) || self.gc_min > self.gc_max {
            return Err(QuaternaryError::InvalidSpec(format!(
                "gc bounds [{}, {}] must satisfy 0 <= min <= max <= 1",
                self.gc_min, self.gc_max
            )));
        }
        Ok(())
    }
}

/// A maximal homopolymer run longer than the allowed maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunViolation {
    pub nucleotide: Nucleotide,
    pub position: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub length: usize,
    pub longest_run: usize,
    pub runs: Vec<RunViolation>,
    pub gc_fraction: f64,
    pub gc_out_of_range: bool,
}

impl ValidationReport {
    pub fn is_compliant(&self) -> bool {
        self.runs.is_empty() && !self.gc_out_of_range
    }
}

pub fn validate_sequence(seq: &str, spec: &ConstraintSpec) -> Result<ValidationReport, QuaternaryError> {
    if seq.is_empty() {
        return Err(QuaternaryError::EmptySequence);
    }
    let nts = parse_nucleotides(seq)?;

    let mut runs = Vec::new();
    let mut longest_run = 0;
    let mut start = 0;
    while start < nts.len() {
        let base = nts[start];
        let end = nts[start..].iter().position(|&n| n != base).map_or(nts.len(), |off| start + off);
        let length = end - start;
        longest_run = longest_run.max(length);
        if length > spec.max_homopolymer_run {
            runs.push(RunViolation { nucleotide: base, position: start, length });
        }
        start = end;
    }

    let gc = nts.iter().filter(|n| n.is_gc()).count();
    let gc_fraction = gc as f64 / nts.len() as f64;
    Ok(ValidationReport {
        length: nts.len(),
        longest_run,
        runs,
        gc_fraction,
        gc_out_of_range: gc_fraction < spec.gc_min || gc_fraction > spec.gc_max,
    })
}

/// Length of the longest homopolymer run in an ACGT byte string.
pub fn longest_run(seq: &str) -> usize {
    let bytes = seq.as_bytes();
    let mut best = 0;
    let mut current = 0;
    for (i, &b) in bytes.iter().enumerate() {
        current = if i > 0 && bytes[i - 1] == b { current + 1 } else { 1 };
        best = best.max(current);
    }
    best
}

fn pow12(width: usize) -> Option<u64> {
    12u64.checked_pow(width as u32)
}

/// Big-endian base-12 digits of `n`, left-padded to `width` digits.
pub fn base12_digits(n: u64, width: usize) -> Result<Vec<u8>, QuaternaryError> {
    if let Some(limit) = pow12(width) {
        if n >= limit {
            return Err(QuaternaryError::Overflow { value: n, width });
        }
    }
    let mut digits = vec![0u8; width];
    let mut rest = n;
    for slot in digits.iter_mut().rev() {
        *slot = (rest % 12) as u8;
        rest /= 12;
    }
    Ok(digits)
}

/// Encodes `n` as exactly `width` pairs (2·width nt).
pub fn encode_uint_base12(n: u64, width: usize) -> Result<String, QuaternaryError> {
    Ok(ranks_to_string(&base12_digits(n, width)?))
}

pub fn decode_uint_base12(seq: &str) -> Result<u64, QuaternaryError> {
    let ranks = string_to_ranks(seq)?;
    let mut value: u64 = 0;
    for &r in &ranks {
        value = value
            .checked_mul(12)
            .and_then(|v| v.checked_add(r as u64))
            .ok_or(QuaternaryError::Overflow { value: u64::MAX, width: ranks.len() })?;
    }
    Ok(value)
}
