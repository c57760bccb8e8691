//! Symbol to quaternary coders: fixed-length pair codes, Huffman/Goldman
//! (ternary Huffman with rotation mapping) and SFC4 (Shannon-Fano lengths
//! over the twelve non-repeating pairs).
//!
//! Every codebook is a pure function of a [`FrequencyTable`], so a decoder
//! holding only the transmitted counts rebuilds the encoder's codebook
//! codeword for codeword.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::quaternary::{base12_digits, Nucleotide, Pair};

/// A quantization index `k`; the latent value it stands for is `q·k`.
pub type Symbol = i16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoderError {
    #[error("frequency table is empty")]
    EmptyTable,
    #[error("symbol {0} appears twice in the frequency table")]
    DuplicateSymbol(Symbol),
    #[error("symbol {0} has a zero count")]
    ZeroCount(Symbol),
    #[error("symbol {0} is not in the codebook")]
    UnknownSymbol(Symbol),
    #[error("stream exhausted inside a codeword at nt {position}")]
    Truncated { position: usize },
    #[error("corrupt stream at nt {position}: {reason}")]
    Corrupt { position: usize, reason: String },
    #[error("table and codebook alphabets differ")]
    AlphabetMismatch,
    #[error("codeword lengths violate the Kraft inequality")]
    KraftViolation,
    #[error("unknown coder {0:?} (expected fixed, goldman or sfc4)")]
    UnknownCoder(String),
}

/// Coder family; the discriminant is the in-band coder id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoderKind {
    Fixed = 0,
    Goldman = 1,
    Sfc4 = 2,
}

impl CoderKind {
    pub const ALL: [CoderKind; 3] = [CoderKind::Fixed, CoderKind::Goldman, CoderKind::Sfc4];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u64) -> Option<Self> {
        match id {
            0 => Some(CoderKind::Fixed),
            1 => Some(CoderKind::Goldman),
            2 => Some(CoderKind::Sfc4),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoderKind::Fixed => "fixed",
            CoderKind::Goldman => "goldman",
            CoderKind::Sfc4 => "sfc4",
        }
    }

    /// Size of the codeword digit alphabet.
    pub fn radix(self) -> usize {
        match self {
            CoderKind::Goldman => 3,
            CoderKind::Fixed | CoderKind::Sfc4 => Pair::COUNT,
        }
    }

    /// Nucleotides emitted per codeword digit.
    pub fn nt_per_digit(self) -> usize {
        match self {
            CoderKind::Goldman => 1,
            CoderKind::Fixed | CoderKind::Sfc4 => 2,
        }
    }
}

impl fmt::Display for CoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoderKind {
    type Err = CoderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fixed" => Ok(CoderKind::Fixed),
            "goldman" | "huffman" => Ok(CoderKind::Goldman),
            "sfc4" => Ok(CoderKind::Sfc4),
            _ => Err(CoderError::UnknownCoder(s.to_string())),
        }
    }
}

/// Symbol occurrence counts in normative order: count descending, then
/// symbol value ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyTable {
    entries: Vec<(Symbol, u64)>,
    total: u64,
}

impl FrequencyTable {
    pub fn from_counts<I>(counts: I) -> Result<Self, CoderError>
    where
        I: IntoIterator<Item = (Symbol, u64)>,
    {
        let mut entries: Vec<(Symbol, u64)> = counts.into_iter().collect();
        entries.sort_by_key(|&(s, _)| s);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CoderError::DuplicateSymbol(w[0].0));
            }
        }
        if let Some(&(s, _)) = entries.iter().find(|&&(_, c)| c == 0) {
            return Err(CoderError::ZeroCount(s));
        }
        entries.sort_by_key(|&(s, c)| (Reverse(c), s));
        let total = entries.iter().map(|&(_, c)| c).sum();
        Ok(FrequencyTable { entries, total })
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        let mut counts: HashMap<Symbol, u64> = HashMap::new();
        for &s in symbols {
            *counts.entry(s).or_default() += 1;
        }
        Self::from_counts(counts).expect("counts from a histogram are unique and positive")
    }

    pub fn entries(&self) -> &[(Symbol, u64)] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, symbol: Symbol) -> Option<u64> {
        self.entries.iter().find(|e| e.0 == symbol).map(|e| e.1)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.1)
    }
}

const NO_CHILD: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct TrieNode {
    children: [u32; Pair::COUNT],
    leaf: Option<usize>,
}

impl TrieNode {
    fn empty() -> Self {
        TrieNode { children: [NO_CHILD; Pair::COUNT], leaf: None }
    }
}

/// Prefix decoding trie over codeword digits.
#[derive(Debug, Clone)]
struct Trie {
    nodes: Vec<TrieNode>,
}

impl Trie {
    fn build(codewords: &[Vec<u8>]) -> Result<Self, CoderError> {
        let mut nodes = vec![TrieNode::empty()];
        for (entry, word) in codewords.iter().enumerate() {
            let mut at = 0usize;
            for &d in word {
                if nodes[at].leaf.is_some() {
                    return Err(CoderError::KraftViolation);
                }
                let next = nodes[at].children[d as usize];
                at = if next == NO_CHILD {
                    nodes.push(TrieNode::empty());
                    let id = nodes.len() - 1;
                    nodes[at].children[d as usize] = id as u32;
                    id
                } else {
                    next as usize
                };
            }
            if nodes[at].leaf.is_some() || nodes[at].children.iter().any(|&c| c != NO_CHILD) {
                return Err(CoderError::KraftViolation);
            }
            nodes[at].leaf = Some(entry);
        }
        Ok(Trie { nodes })
    }
}

/// An immutable symbol to codeword mapping for one coder family.
///
/// Codewords are digit strings: pair ranks (0..12) for fixed and SFC4,
/// trits (0..3) for Goldman. Entries keep the table's normative order.
#[derive(Debug, Clone)]
pub struct CodeBook {
    kind: CoderKind,
    entries: Vec<(Symbol, Vec<u8>)>,
    lookup: HashMap<Symbol, usize>,
    trie: Trie,
}

impl CodeBook {
    fn from_codewords(kind: CoderKind, entries: Vec<(Symbol, Vec<u8>)>) -> Result<Self, CoderError> {
        let lookup = entries.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        let words: Vec<Vec<u8>> = entries.iter().map(|e| e.1.clone()).collect();
        let trie = Trie::build(&words)?;
        Ok(CodeBook { kind, entries, lookup, trie })
    }

    pub fn build(kind: CoderKind, table: &FrequencyTable) -> Result<Self, CoderError> {
        match kind {
            CoderKind::Fixed => build_fixed(table),
            CoderKind::Goldman => build_goldman(table),
            CoderKind::Sfc4 => build_sfc4(table),
        }
    }

    pub fn kind(&self) -> CoderKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Symbol, Vec<u8>)] {
        &self.entries
    }

    pub fn codeword(&self, symbol: Symbol) -> Option<&[u8]> {
        self.lookup.get(&symbol).map(|&i| self.entries[i].1.as_slice())
    }

    /// Codeword length in nucleotides.
    pub fn nt_length(&self, symbol: Symbol) -> Option<usize> {
        self.codeword(symbol).map(|w| w.len() * self.kind.nt_per_digit())
    }

    /// The codeword for `symbol` rendered as nucleotides. Goldman codewords
    /// are rendered from the initial rotation state.
    pub fn codeword_string(&self, symbol: Symbol) -> Option<String> {
        let word = self.codeword(symbol)?;
        let mut enc = StreamEncoder::new(self.kind);
        let mut out = String::new();
        enc.push_digits(word, &mut out);
        Some(out)
    }
}

/// Smallest `L >= 1` with `12^L >= k`.
fn fixed_width(k: usize) -> usize {
    let mut width = 1;
    let mut capacity = Pair::COUNT;
    while capacity < k {
        width += 1;
        capacity *= Pair::COUNT;
    }
    width
}

pub fn build_fixed(table: &FrequencyTable) -> Result<CodeBook, CoderError> {
    if table.is_empty() {
        return Err(CoderError::EmptyTable);
    }
    let width = fixed_width(table.len());
    let entries = table
        .symbols()
        .enumerate()
        .map(|(i, s)| (s, base12_digits(i as u64, width).expect("index fits the fixed width")))
        .collect();
    CodeBook::from_codewords(CoderKind::Fixed, entries)
}

/// Increments a big-endian digit string in place; `false` on carry out.
fn increment(digits: &mut [u8], radix: u8) -> bool {
    for d in digits.iter_mut().rev() {
        if *d + 1 < radix {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Canonical codewords for non-decreasing `lengths` given in assignment order.
fn canonical_codewords(lengths: &[usize], radix: u8) -> Result<Vec<Vec<u8>>, CoderError> {
    let mut out: Vec<Vec<u8>> = Vec::with_capacity(lengths.len());
    let mut code: Vec<u8> = Vec::new();
    for (i, &len) in lengths.iter().enumerate() {
        if i == 0 {
            code = vec![0; len];
        } else {
            if len < code.len() || !increment(&mut code, radix) {
                return Err(CoderError::KraftViolation);
            }
            code.resize(len, 0);
        }
        out.push(code.clone());
    }
    Ok(out)
}

/// Ternary Huffman codeword lengths, one per table entry (normative order).
pub fn goldman_lengths(table: &FrequencyTable) -> Result<Vec<usize>, CoderError> {
    if table.is_empty() {
        return Err(CoderError::EmptyTable);
    }
    let k = table.len();
    // pad to an odd leaf count of at least three so every merge takes three nodes
    let dummies = if k == 1 { 2 } else { (k + 1) % 2 };
    let leaves = k + dummies;

    // Node ids: dummies, then real leaves by ascending symbol value, then
    // internal nodes in merge order. The id doubles as the creation rank.
    let mut by_value: Vec<usize> = (0..k).collect();
    by_value.sort_by_key(|&i| table.entries()[i].0);
    let mut leaf_of_entry = vec![0usize; k];
    let mut weight = vec![0u64; leaves];
    for (rank, &entry) in by_value.iter().enumerate() {
        leaf_of_entry[entry] = dummies + rank;
        weight[dummies + rank] = table.entries()[entry].1;
    }

    let mut parent: Vec<usize> = vec![usize::MAX; leaves];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..leaves).map(|id| Reverse((weight[id], id))).collect();
    while heap.len() > 1 {
        let id = weight.len();
        let mut merged = 0u64;
        for _ in 0..3 {
            let Reverse((w, child)) = heap.pop().expect("padding keeps merges full");
            merged += w;
            parent[child] = id;
        }
        weight.push(merged);
        parent.push(usize::MAX);
        heap.push(Reverse((merged, id)));
    }

    Ok(leaf_of_entry
        .iter()
        .map(|&leaf| {
            let mut depth = 0;
            let mut at = leaf;
            while parent[at] != usize::MAX {
                at = parent[at];
                depth += 1;
            }
            depth
        })
        .collect())
}

pub fn build_goldman(table: &FrequencyTable) -> Result<CodeBook, CoderError> {
    let lengths = goldman_lengths(table)?;
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let sorted: Vec<usize> = order.iter().map(|&i| lengths[i]).collect();
    let words = canonical_codewords(&sorted, 3)?;
    let mut assigned = vec![Vec::new(); table.len()];
    for (&i, w) in order.iter().zip(words) {
        assigned[i] = w;
    }
    let entries = table.symbols().zip(assigned).collect();
    CodeBook::from_codewords(CoderKind::Goldman, entries)
}

/// `max(1, ceil(-log12(count/total)))`, via `12^(l-1)·count < total <= 12^l·count`.
pub fn sfc4_length(count: u64, total: u64) -> usize {
    let mut len = 1;
    let mut scaled = count as u128 * Pair::COUNT as u128;
    while scaled < total as u128 {
        len += 1;
        scaled *= Pair::COUNT as u128;
    }
    len
}

pub fn build_sfc4(table: &FrequencyTable) -> Result<CodeBook, CoderError> {
    if table.is_empty() {
        return Err(CoderError::EmptyTable);
    }
    // Count-descending order makes lengths non-decreasing, so the canonical
    // code is the lexicographically smallest non-conflicting assignment.
    let lengths: Vec<usize> = table.counts().map(|c| sfc4_length(c, table.total())).collect();
    let words = canonical_codewords(&lengths, Pair::COUNT as u8)?;
    let entries = table.symbols().zip(words).collect();
    CodeBook::from_codewords(CoderKind::Sfc4, entries)
}

/// Incremental encoder carrying the Goldman rotation state.
#[derive(Debug, Clone)]
pub struct StreamEncoder {
    kind: CoderKind,
    previous: Nucleotide,
}

impl StreamEncoder {
    /// Initial rotation state: a virtual preceding `A`.
    pub const INITIAL_PREVIOUS: Nucleotide = Nucleotide::A;

    pub fn new(kind: CoderKind) -> Self {
        StreamEncoder { kind, previous: Self::INITIAL_PREVIOUS }
    }

    fn push_digits(&mut self, digits: &[u8], out: &mut String) {
        match self.kind {
            CoderKind::Goldman => {
                for &t in digits {
                    let nt = self.previous.others()[t as usize];
                    out.push(nt.to_char());
                    self.previous = nt;
                }
            }
            CoderKind::Fixed | CoderKind::Sfc4 => {
                for &r in digits {
                    Pair::from_rank(r).expect("pair rank").push_to(out);
                }
            }
        }
    }

    pub fn push(&mut self, book: &CodeBook, symbol: Symbol, out: &mut String) -> Result<(), CoderError> {
        let word = book.codeword(symbol).ok_or(CoderError::UnknownSymbol(symbol))?;
        self.push_digits(word, out);
        Ok(())
    }
}

pub fn encode_stream(book: &CodeBook, symbols: &[Symbol]) -> Result<String, CoderError> {
    let mut enc = StreamEncoder::new(book.kind);
    let mut out = String::new();
    for &s in symbols {
        enc.push(book, s, &mut out)?;
    }
    Ok(out)
}

/// Incremental prefix decoder over a nucleotide stream.
#[derive(Debug)]
pub struct StreamDecoder<'a> {
    book: &'a CodeBook,
    stream: &'a [u8],
    position: usize,
    previous: Nucleotide,
}

impl<'a> StreamDecoder<'a> {
    pub fn new(book: &'a CodeBook, stream: &'a str) -> Self {
        StreamDecoder { book, stream: stream.as_bytes(), position: 0, previous: StreamEncoder::INITIAL_PREVIOUS }
    }

    /// Nucleotides consumed so far.
    pub fn consumed(&self) -> usize {
        self.position
    }

    fn corrupt(&self, position: usize, reason: impl Into<String>) -> CoderError {
        CoderError::Corrupt { position, reason: reason.into() }
    }

    fn next_digit(&mut self) -> Result<Option<u8>, CoderError> {
        let rest = &self.stream[self.position..];
        match self.book.kind {
            CoderKind::Goldman => {
                let Some(&b) = rest.first() else { return Ok(None) };
                let nt = Nucleotide::from_char(b as char)
                    .ok_or_else(|| self.corrupt(self.position, format!("invalid nucleotide {:?}", b as char)))?;
                if nt == self.previous {
                    return Err(self.corrupt(self.position, format!("repeated {nt} in rotation-coded stream")));
                }
                let trit = self.previous.others().iter().position(|&n| n == nt).expect("nt differs from previous");
                self.previous = nt;
                self.position += 1;
                Ok(Some(trit as u8))
            }
            CoderKind::Fixed | CoderKind::Sfc4 => {
                if rest.len() < 2 {
                    return Ok(None);
                }
                let group = String::from_utf8_lossy(&rest[..2]);
                let pair = Pair::parse(&group)
                    .ok_or_else(|| self.corrupt(self.position, format!("{group:?} is not a non-repeating pair")))?;
                self.position += 2;
                Ok(Some(pair.rank()))
            }
        }
    }

    /// Next symbol, `Ok(None)` when the stream ends on a codeword boundary.
    pub fn next_symbol(&mut self) -> Result<Option<Symbol>, CoderError> {
        let start = self.position;
        let mut node = 0usize;
        loop {
            let Some(digit) = self.next_digit()? else {
                return if node == 0 { Ok(None) } else { Err(CoderError::Truncated { position: self.position }) };
            };
            let child = self.book.trie.nodes[node].children[digit as usize];
            if child == NO_CHILD {
                return Err(self.corrupt(start, "digit sequence matches no codeword"));
            }
            node = child as usize;
            if let Some(entry) = self.book.trie.nodes[node].leaf {
                return Ok(Some(self.book.entries[entry].0));
            }
        }
    }
}

/// Decoded symbols and the number of nucleotides they occupied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub symbols: Vec<Symbol>,
    pub consumed: usize,
}

pub fn decode_stream(book: &CodeBook, stream: &str, n_symbols: usize) -> Result<Decoded, CoderError> {
    let mut dec = StreamDecoder::new(book, stream);
    let mut symbols = Vec::with_capacity(n_symbols);
    while symbols.len() < n_symbols {
        match dec.next_symbol()? {
            Some(s) => symbols.push(s),
            None => return Err(CoderError::Truncated { position: dec.consumed() }),
        }
    }
    Ok(Decoded { symbols, consumed: dec.consumed() })
}

/// Expected codeword length in nucleotides per symbol under `table`.
pub fn expected_length(book: &CodeBook, table: &FrequencyTable) -> Result<f64, CoderError> {
    if table.is_empty() || table.len() != book.len() {
        return Err(CoderError::AlphabetMismatch);
    }
    let mut weighted = 0u128;
    for &(s, c) in table.entries() {
        let len = book.nt_length(s).ok_or(CoderError::AlphabetMismatch)?;
        weighted += c as u128 * len as u128;
    }
    Ok(weighted as f64 / table.total() as f64)
}

/// Expected codeword length in codeword digits (pairs or trits) per symbol.
pub fn expected_digits(book: &CodeBook, table: &FrequencyTable) -> Result<f64, CoderError> {
    Ok(expected_length(book, table)? / book.kind.nt_per_digit() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternary::longest_run;
    use proptest::prelude::*;

    fn table(counts: &[u64]) -> FrequencyTable {
        FrequencyTable::from_counts(counts.iter().enumerate().map(|(i, &c)| (i as Symbol, c))).unwrap()
    }

    fn strings(book: &CodeBook) -> Vec<String> {
        book.entries().iter().map(|(s, _)| book.codeword_string(*s).unwrap()).collect()
    }

    #[test]
    fn table_is_normatively_ordered() {
        let t = FrequencyTable::from_counts([(5, 1), (-2, 3), (7, 3), (0, 9)]).unwrap();
        assert_eq!(t.entries(), &[(0, 9), (-2, 3), (7, 3), (5, 1)]);
        assert_eq!(t.total(), 16);
        assert_eq!(FrequencyTable::from_counts([(1, 2), (1, 3)]), Err(CoderError::DuplicateSymbol(1)));
        assert_eq!(FrequencyTable::from_counts([(4, 0)]), Err(CoderError::ZeroCount(4)));
        assert_eq!(FrequencyTable::from_symbols(&[3, -1, 3, 3]).entries(), &[(3, 3), (-1, 1)]);
    }

    #[test]
    fn fixed_examples() {
        let book = build_fixed(&table(&[5, 4, 3, 2, 1])).unwrap();
        assert_eq!(strings(&book), ["AC", "AG", "AT", "CA", "CG"]);
        let book = build_fixed(&table(&[1; 20])).unwrap();
        assert!(book.entries().iter().all(|(_, w)| w.len() == 2));
        let book = build_fixed(&table(&[7])).unwrap();
        assert_eq!(strings(&book), ["AC"]);
        assert_eq!(build_fixed(&FrequencyTable::default()).unwrap_err(), CoderError::EmptyTable);
        assert_eq!(fixed_width(12), 1);
        assert_eq!(fixed_width(13), 2);
        assert_eq!(fixed_width(144), 2);
        assert_eq!(fixed_width(145), 3);
    }

    #[test]
    fn goldman_examples() {
        assert_eq!(goldman_lengths(&table(&[2, 1, 1])).unwrap(), [1, 1, 1]);
        let t = table(&[8, 4, 2, 1, 1]);
        let lengths = goldman_lengths(&t).unwrap();
        assert_eq!(lengths, [1, 1, 2, 2, 2]);
        let weighted: u64 = t.counts().zip(&lengths).map(|(c, &l)| c * l as u64).sum();
        assert_eq!(weighted, 20);
        assert_eq!(goldman_lengths(&table(&[1])).unwrap(), [1]);
        let book = build_goldman(&t).unwrap();
        let words: Vec<&[u8]> = book.entries().iter().map(|e| e.1.as_slice()).collect();
        assert_eq!(words, [&[0u8][..], &[1], &[2, 0], &[2, 1], &[2, 2]]);
    }

    #[test]
    fn sfc4_examples() {
        let t = table(&[18, 1, 1]);
        let book = build_sfc4(&t).unwrap();
        assert_eq!(strings(&book), ["AC", "AGAC", "AGAG"]);
        let book = build_sfc4(&table(&[1; 12])).unwrap();
        let expect: Vec<String> = (0..12).map(|r| Pair::from_rank(r).unwrap().to_string()).collect();
        assert_eq!(strings(&book), expect);
        assert_eq!(strings(&build_sfc4(&table(&[3])).unwrap()), ["AC"]);
        // exact boundary: p = 1/12 is one pair, just below is two
        assert_eq!(sfc4_length(1, 12), 1);
        assert_eq!(sfc4_length(1, 13), 2);
        assert_eq!(sfc4_length(1, 144), 2);
        assert_eq!(sfc4_length(1, 145), 3);
    }

    #[test]
    fn stream_examples() {
        // trits 0,1,2 from the initial state A
        let t = table(&[3, 1, 1, 1, 1]);
        let book = build_goldman(&t).unwrap();
        assert_eq!(book.codeword(0).unwrap(), &[0]);
        let mut enc = StreamEncoder::new(CoderKind::Goldman);
        let mut out = String::new();
        enc.push_digits(&[0, 1, 2], &mut out);
        assert_eq!(out, "CGT");

        let sfc = build_sfc4(&table(&[18, 1, 1])).unwrap();
        assert_eq!(encode_stream(&sfc, &[0, 1]).unwrap(), "ACAGAC");
        assert_eq!(encode_stream(&sfc, &[]).unwrap(), "");
        assert_eq!(encode_stream(&sfc, &[9]), Err(CoderError::UnknownSymbol(9)));
        let d = decode_stream(&sfc, "ACAGACTT", 2).unwrap();
        assert_eq!(d, Decoded { symbols: vec![0, 1], consumed: 6 });
    }

    #[test]
    fn decode_errors() {
        let g = build_goldman(&table(&[2, 1, 1])).unwrap();
        assert!(matches!(decode_stream(&g, "CCG", 3), Err(CoderError::Corrupt { position: 1, .. })));
        assert!(matches!(decode_stream(&g, "AC", 1), Err(CoderError::Corrupt { position: 0, .. })));
        let s = build_sfc4(&table(&[18, 1, 1])).unwrap();
        assert!(matches!(decode_stream(&s, "AAAC", 1), Err(CoderError::Corrupt { position: 0, .. })));
        assert!(matches!(decode_stream(&s, "AG", 1), Err(CoderError::Truncated { .. })));
        assert!(matches!(decode_stream(&s, "AC", 2), Err(CoderError::Truncated { .. })));
        // AT.. is not a prefix of any codeword in a 3-symbol book
        assert!(matches!(decode_stream(&s, "ATAC", 1), Err(CoderError::Corrupt { .. })));
    }

    #[test]
    fn expected_length_examples() {
        let t = table(&[5, 4, 3, 2, 1]);
        assert_eq!(expected_length(&build_fixed(&t).unwrap(), &t).unwrap(), 2.0);
        let t = table(&[2, 1, 1]);
        assert_eq!(expected_length(&build_goldman(&t).unwrap(), &t).unwrap(), 1.0);
        let t = table(&[18, 1, 1]);
        let e = expected_length(&build_sfc4(&t).unwrap(), &t).unwrap();
        assert!((e - 2.2).abs() < 1e-12);
        let other = table(&[1, 1]);
        assert_eq!(expected_length(&build_sfc4(&other).unwrap(), &t), Err(CoderError::AlphabetMismatch));
    }

    /// The literal assignment rule: smallest sequence of the requested length
    /// that neither prefixes nor extends an assigned codeword.
    fn brute_force_sfc4(lengths: &[usize]) -> Vec<Vec<u8>> {
        let mut assigned: Vec<Vec<u8>> = Vec::new();
        for &len in lengths {
            let mut candidate = vec![0u8; len];
            loop {
                let conflict = assigned.iter().any(|w| {
                    let n = w.len().min(candidate.len());
                    w[..n] == candidate[..n]
                });
                if !conflict {
                    break;
                }
                assert!(increment(&mut candidate, 12), "no free codeword");
            }
            assigned.push(candidate);
        }
        assigned
    }

    fn arb_table() -> impl Strategy<Value = FrequencyTable> {
        proptest::collection::vec(1u64..500, 1..40).prop_map(|counts| table(&counts))
    }

    proptest! {
        #[test]
        fn round_trip_and_constraints(t in arb_table(), picks in proptest::collection::vec(any::<usize>(), 0..200)) {
            let symbols: Vec<Symbol> = picks.iter().map(|p| t.entries()[p % t.len()].0).collect();
            for kind in CoderKind::ALL {
                let book = CodeBook::build(kind, &t).unwrap();
                let stream = encode_stream(&book, &symbols).unwrap();
                let decoded = decode_stream(&book, &stream, symbols.len()).unwrap();
                prop_assert_eq!(&decoded.symbols, &symbols);
                prop_assert_eq!(decoded.consumed, stream.len());
                let limit = if kind == CoderKind::Goldman { 1 } else { 2 };
                prop_assert!(longest_run(&stream) <= limit);
            }
        }

        #[test]
        fn builds_are_deterministic_and_prefix_free(t in arb_table()) {
            for kind in CoderKind::ALL {
                let a = CodeBook::build(kind, &t).unwrap();
                let rebuilt = FrequencyTable::from_counts(t.entries().iter().rev().copied()).unwrap();
                let b = CodeBook::build(kind, &rebuilt).unwrap();
                prop_assert_eq!(a.entries(), b.entries());
                let words: Vec<&Vec<u8>> = a.entries().iter().map(|e| &e.1).collect();
                for (i, x) in words.iter().enumerate() {
                    for (j, y) in words.iter().enumerate() {
                        if i != j {
                            prop_assert!(!y.starts_with(x), "{:?} prefixes {:?}", x, y);
                        }
                    }
                }
                if kind == CoderKind::Fixed {
                    prop_assert!(words.iter().all(|w| w.len() == words[0].len()));
                }
            }
        }

        #[test]
        fn sfc4_matches_literal_assignment_rule(t in arb_table()) {
            let book = build_sfc4(&t).unwrap();
            let lengths: Vec<usize> = book.entries().iter().map(|e| e.1.len()).collect();
            let kraft: f64 = lengths.iter().map(|&l| 12f64.powi(-(l as i32))).sum();
            prop_assert!(kraft <= 1.0 + 1e-12);
            let expect = brute_force_sfc4(&lengths);
            let got: Vec<Vec<u8>> = book.entries().iter().map(|e| e.1.clone()).collect();
            prop_assert_eq!(got, expect);
        }
    }
}
