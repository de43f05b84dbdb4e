//! Boolean functions as packed truth tables.
//!
//! The entry at index `i` of an `n`-ary table is the value at the point whose
//! `j`-th coordinate is bit `j` of `i`; the first argument is the least
//! significant bit. Every module (and every golden file) uses this convention.

mod anf;
mod family;
mod minor;
pub mod named;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use anf::AnfPolynomial;
pub use family::{classify_function, Family};
pub use minor::{equivalent, i_minors, is_minor_of, minors, MinorArg, MinorMap};

/// Largest arity accepted by evaluation-style operations.
pub const MAX_ARITY: usize = 24;

/// Largest arity whose table fits in a single `u64` code.
pub const MAX_CODE_ARITY: usize = 6;

/// Packed bit storage shared by truth tables and ANF coefficient vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitTable {
    arity: usize,
    words: Vec<u64>,
}

impl BitTable {
    pub(crate) fn zeros(arity: usize) -> Self {
        let words = if arity <= 6 { 1 } else { 1 << (arity - 6) };
        BitTable {
            arity,
            words: vec![0; words],
        }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        1 << self.arity
    }

    #[inline]
    pub(crate) fn get(&self, index: usize) -> bool {
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, index: usize, value: bool) {
        let bit = 1u64 << (index & 63);
        if value {
            self.words[index >> 6] |= bit;
        } else {
            self.words[index >> 6] &= !bit;
        }
    }

    /// Mask of the valid bits in the (single) word of a table with arity < 6.
    fn tail_mask(&self) -> u64 {
        if self.arity >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << self.arity)) - 1
        }
    }

    fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn cmp_numeric(&self, other: &Self) -> Ordering {
        self.arity
            .cmp(&other.arity)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }

    /// In-place GF(2) Möbius transform; it is its own inverse.
    pub(crate) fn mobius(&mut self) {
        const MASKS: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0F0F_0F0F_0F0F_0F0F,
            0x00FF_00FF_00FF_00FF,
            0x0000_FFFF_0000_FFFF,
            0x0000_0000_FFFF_FFFF,
        ];
        let tail = self.tail_mask();
        for (j, mask) in MASKS.iter().enumerate().take(self.arity.min(6)) {
            let shift = 1 << j;
            for w in &mut self.words {
                *w ^= (*w & mask) << shift;
            }
        }
        for j in 6..self.arity {
            let step = 1 << (j - 6);
            for k in 0..self.words.len() {
                if k & step == 0 {
                    let low = self.words[k];
                    self.words[k | step] ^= low;
                }
            }
        }
        self.words[0] &= tail;
    }
}

/// An `n`-ary Boolean function stored as its `2^n`-entry truth table.
///
/// Equality and ordering take the arity into account: a binary and a ternary
/// function are never equal, even if one ignores its last argument. Within an
/// arity, tables are ordered by their numeric table code.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable(BitTable);

impl TruthTable {
    fn check_arity(arity: usize) -> Result<()> {
        if arity > MAX_ARITY {
            Err(Error::ArityTooLarge(arity))
        } else {
            Ok(())
        }
    }

    /// Builds a table by evaluating `f` at every point index.
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        Self::check_arity(arity)?;
        let mut bits = BitTable::zeros(arity);
        for i in 0..bits.len() {
            if f(i) {
                bits.set(i, true);
            }
        }
        Ok(TruthTable(bits))
    }

    /// Builds a table from entries listed in point-index order.
    pub fn from_bits(arity: usize, bits: &[bool]) -> Result<Self> {
        Self::check_arity(arity)?;
        if bits.len() != 1 << arity {
            return Err(Error::LengthMismatch(format!(
                "an {arity}-ary table needs {} entries, got {}",
                1usize << arity,
                bits.len()
            )));
        }
        Self::from_fn(arity, |i| bits[i])
    }

    /// Builds a table of arity at most 6 from its integer code.
    pub fn from_code(arity: usize, code: u64) -> Result<Self> {
        if arity > MAX_CODE_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut bits = BitTable::zeros(arity);
        if code & !bits.tail_mask() != 0 {
            return Err(Error::ParseTable {
                literal: format!("{arity}:{code:x}"),
                reason: "code has bits beyond the table length".into(),
            });
        }
        bits.words[0] = code;
        Ok(TruthTable(bits))
    }

    pub(crate) fn from_code_unchecked(arity: usize, code: u64) -> Self {
        debug_assert!(arity <= MAX_CODE_ARITY);
        let mut bits = BitTable::zeros(arity);
        bits.words[0] = code;
        TruthTable(bits)
    }

    /// The integer code of the table (bit `i` is the entry at index `i`), for arity ≤ 6.
    pub fn code(&self) -> Option<u64> {
        (self.arity() <= MAX_CODE_ARITY).then(|| self.0.words[0])
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    /// The projection onto argument `index` (0-based).
    pub fn projection(arity: usize, index: usize) -> Result<Self> {
        if index >= arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: index + 1,
            });
        }
        Self::from_fn(arity, |i| (i >> index) & 1 == 1)
    }

    /// The negated projection onto argument `index` (0-based).
    pub fn negated_projection(arity: usize, index: usize) -> Result<Self> {
        Ok(Self::projection(arity, index)?.outer_negation())
    }

    /// The affine function `x ↦ Σ_{j ∈ mask} x_j + constant` over GF(2).
    pub fn affine(arity: usize, mask: u32, constant: bool) -> Result<Self> {
        if arity < 32 && (mask >> arity) != 0 {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: 32 - mask.leading_zeros() as usize,
            });
        }
        Self::from_fn(arity, |i| {
            ((i as u32 & mask).count_ones() & 1 == 1) ^ constant
        })
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.0.arity
    }

    /// Number of table entries, `2^arity`.
    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false: even a nullary table has one entry.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The table entry at a point index.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        self.0.get(index)
    }

    pub fn eval(&self, point: &[bool]) -> Result<bool> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: point.len(),
            });
        }
        Ok(self.get(point_index(point)))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Number of points where the function is 1.
    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }

    pub fn hamming_distance(&self, other: &TruthTable) -> Result<usize> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        Ok(self
            .0
            .words
            .iter()
            .zip(&other.0.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn is_constant(&self) -> bool {
        let w = self.weight();
        w == 0 || w == self.len()
    }

    /// Index of the argument this function projects onto, if it is a projection.
    pub fn projection_index(&self) -> Option<usize> {
        (0..self.arity()).find(|&j| (0..self.len()).all(|i| self.get(i) == ((i >> j) & 1 == 1)))
    }

    /// Index of the argument this function negates, if it is a negated projection.
    pub fn negated_projection_index(&self) -> Option<usize> {
        self.outer_negation().projection_index()
    }

    /// `¬f(x)`.
    pub fn outer_negation(&self) -> TruthTable {
        let mut bits = self.0.clone();
        let tail = bits.tail_mask();
        for w in &mut bits.words {
            *w = !*w;
        }
        bits.words[0] &= tail;
        TruthTable(bits)
    }

    /// `f(¬x)`: the table read backwards.
    pub fn inner_negation(&self) -> TruthTable {
        let top = self.len() - 1;
        let mut bits = BitTable::zeros(self.arity());
        for i in 0..self.len() {
            if self.get(top ^ i) {
                bits.set(i, true);
            }
        }
        TruthTable(bits)
    }

    /// `¬f(¬x)`.
    pub fn dual(&self) -> TruthTable {
        self.inner_negation().outer_negation()
    }

    /// `f(g_1, …, g_k)` where every `g_i` has the same arity.
    pub fn compose(&self, inner: &[TruthTable]) -> Result<TruthTable> {
        if inner.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: inner.len(),
            });
        }
        let Some(first) = inner.first() else {
            // Nullary outer function: the result is a constant of arity 0.
            return Ok(self.clone());
        };
        let m = first.arity();
        if let Some(g) = inner.iter().find(|g| g.arity() != m) {
            return Err(Error::ArityMismatch {
                expected: m,
                found: g.arity(),
            });
        }
        TruthTable::from_fn(m, |x| {
            let idx = inner
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, g)| acc | (usize::from(g.get(x)) << i));
            self.get(idx)
        })
    }

    /// Algebraic normal form via the Möbius transform.
    pub fn anf(&self) -> AnfPolynomial {
        AnfPolynomial::from_table(self)
    }

    pub fn degree(&self) -> usize {
        self.anf().degree()
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    pub fn apply_minor(&self, map: &MinorMap) -> Result<TruthTable> {
        map.apply(self)
    }

    pub(crate) fn bits(&self) -> &BitTable {
        &self.0
    }

    pub(crate) fn from_bit_table(bits: BitTable) -> Self {
        TruthTable(bits)
    }

    fn hex_digits(arity: usize) -> usize {
        ((1usize << arity) / 4).max(1)
    }
}

/// Packs a point into its table index (first coordinate least significant).
pub fn point_index(point: &[bool]) -> usize {
    point
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | (usize::from(b) << j))
}

/// Unpacks a table index into a point of the given arity.
pub fn index_point(arity: usize, index: usize) -> Vec<bool> {
    (0..arity).map(|j| (index >> j) & 1 == 1).collect()
}

impl PartialOrd for TruthTable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TruthTable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_numeric(&other.0)
    }
}

/// `arity:hexdigits`, most significant index first (`2:8` is conjunction).
impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.arity())?;
        let digits = Self::hex_digits(self.arity());
        if self.arity() <= 6 {
            write!(f, "{:0width$x}", self.0.words[0], width = digits)
        } else {
            for w in self.0.words.iter().rev() {
                write!(f, "{w:016x}")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({self})")
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParseTable {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let (arity, hex) = s
            .split_once(':')
            .ok_or_else(|| err("expected `arity:hex`"))?;
        if arity.is_empty() || !arity.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("arity must be a decimal integer"));
        }
        let arity: usize = arity.parse().map_err(|_| err("arity out of range"))?;
        if arity > MAX_ARITY {
            return Err(err("arity exceeds the supported maximum"));
        }
        let digits = Self::hex_digits(arity);
        if hex.len() != digits {
            return Err(err(&format!("expected exactly {digits} hex digits")));
        }
        let mut bits = BitTable::zeros(arity);
        for (pos, ch) in hex.chars().rev().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(|| err("non-hex digit"))? as u64;
            bits.words[pos / 16] |= nibble << (4 * (pos % 16));
        }
        if bits.words[0] & !bits.tail_mask() != 0 {
            return Err(err("bits set beyond the table length"));
        }
        Ok(TruthTable(bits))
    }
}

impl Serialize for TruthTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TruthTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every function of the given arity (at most 4) in ascending code order.
pub fn all_functions(arity: usize) -> Result<impl Iterator<Item = TruthTable>> {
    if arity > 4 {
        return Err(Error::CapabilityExceeded {
            what: "function enumeration",
            requested: arity,
            cap: 4,
        });
    }
    let count = 1u64 << (1u64 << arity);
    Ok((0..count).map(move |c| TruthTable::from_code_unchecked(arity, c)))
}
