//! Finite relations over `{0,1}`.
//!
//! An `m`-ary relation is a set of `m`-bit tuples. A tuple is identified by its
//! code: coordinate 1 (the first row of the column notation) is bit 0. The
//! relation itself is the bitmask of its tuple codes.

mod registry;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use registry::Registry;

/// Largest supported relation arity.
pub const MAX_RELATION_ARITY: usize = 8;

/// Packs bits (first coordinate least significant) into a tuple code.
pub fn tuple_code(bits: &[bool]) -> u32 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u32::from(b) << i))
}

/// Unpacks a tuple code into `arity` bits.
pub fn tuple_bits(arity: usize, code: u32) -> Vec<bool> {
    (0..arity).map(|i| (code >> i) & 1 == 1).collect()
}

/// Writes a tuple as a 0/1 string, first coordinate first.
pub fn tuple_string(arity: usize, code: u32) -> String {
    (0..arity)
        .map(|i| if (code >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    mask: [u64; 4],
}

impl Relation {
    pub fn empty(arity: usize) -> Result<Self> {
        if arity == 0 || arity > MAX_RELATION_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        Ok(Relation {
            arity,
            mask: [0; 4],
        })
    }

    /// All `2^arity` tuples.
    pub fn full(arity: usize) -> Result<Self> {
        let mut r = Self::empty(arity)?;
        for code in 0..r.universe_size() {
            r.insert_unchecked(code);
        }
        Ok(r)
    }

    pub fn from_tuples(arity: usize, codes: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut r = Self::empty(arity)?;
        for code in codes {
            r.insert(code)?;
        }
        Ok(r)
    }

    /// Builds a relation from explicit columns of 0/1 entries.
    pub fn from_columns<C: AsRef<[u8]>>(arity: usize, columns: &[C]) -> Result<Self> {
        let mut r = Self::empty(arity)?;
        for col in columns {
            let col = col.as_ref();
            if col.len() != arity || col.iter().any(|&b| b > 1) {
                return Err(Error::LengthMismatch(format!(
                    "column {col:?} is not a {arity}-tuple of bits"
                )));
            }
            r.insert_unchecked(
                col.iter()
                    .enumerate()
                    .fold(0, |acc, (i, &b)| acc | (u32::from(b) << i)),
            );
        }
        Ok(r)
    }

    /// Builds a relation from every code `0 ≤ c < 2^arity` whose mask bit is set.
    pub(crate) fn from_mask(arity: usize, mask: [u64; 4]) -> Self {
        Relation { arity, mask }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of possible tuples, `2^arity`.
    #[inline]
    pub fn universe_size(&self) -> u32 {
        1 << self.arity
    }

    #[inline]
    pub fn contains(&self, code: u32) -> bool {
        code < self.universe_size() && (self.mask[(code >> 6) as usize] >> (code & 63)) & 1 == 1
    }

    pub fn insert(&mut self, code: u32) -> Result<()> {
        if code >= self.universe_size() {
            return Err(Error::LengthMismatch(format!(
                "tuple code {code} out of range for arity {}",
                self.arity
            )));
        }
        self.insert_unchecked(code);
        Ok(())
    }

    fn insert_unchecked(&mut self, code: u32) {
        self.mask[(code >> 6) as usize] |= 1 << (code & 63);
    }

    pub fn len(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    /// Tuple codes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.universe_size()).filter(move |&c| self.contains(c))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_arity(other)?;
        let mut mask = self.mask;
        for (w, o) in mask.iter_mut().zip(&other.mask) {
            *w |= o;
        }
        Ok(Relation::from_mask(self.arity, mask))
    }

    fn same_arity(&self, other: &Relation) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    /// Componentwise complement of every tuple.
    pub fn negate(&self) -> Relation {
        let top = self.universe_size() - 1;
        let mut out = Relation::from_mask(self.arity, [0; 4]);
        for c in self.iter() {
            out.insert_unchecked(c ^ top);
        }
        out
    }

    /// Reorders coordinates: coordinate `i` of each new tuple is coordinate
    /// `perm[i]` of the old one.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Relation> {
        let mut seen = vec![false; self.arity];
        if perm.len() != self.arity {
            return Err(Error::NotAPermutation(self.arity));
        }
        for &p in perm {
            if p >= self.arity || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotAPermutation(self.arity));
            }
        }
        let mut out = Relation::from_mask(self.arity, [0; 4]);
        for c in self.iter() {
            out.insert_unchecked(permute_code(c, perm));
        }
        Ok(out)
    }

    fn require_quaternary(&self) -> Result<()> {
        if self.arity != 4 {
            return Err(Error::ArityMismatch {
                expected: 4,
                found: self.arity,
            });
        }
        Ok(())
    }

    /// Adds every quadruple whose 3-prefix has no completion in `self`.
    pub fn extend_consequent(&self) -> Result<Relation> {
        self.require_quaternary()?;
        let mut out = *self;
        for prefix in 0..8u32 {
            if self.solutions_of_code(prefix).is_empty() {
                out.insert_unchecked(prefix);
                out.insert_unchecked(prefix | 8);
            }
        }
        Ok(out)
    }

    /// `{ x | (a, b, c, x) ∈ self }`.
    pub fn solutions(&self, a: bool, b: bool, c: bool) -> Result<Solutions> {
        self.require_quaternary()?;
        Ok(self.solutions_of_code(u32::from(a) | u32::from(b) << 1 | u32::from(c) << 2))
    }

    pub fn solvable(&self, a: bool, b: bool, c: bool) -> Result<bool> {
        Ok(!self.solutions(a, b, c)?.is_empty())
    }

    /// Solutions indexed by prefix code `a + 2b + 4c`.
    pub fn solution_table(&self) -> Result<[Solutions; 8]> {
        self.require_quaternary()?;
        Ok(std::array::from_fn(|p| self.solutions_of_code(p as u32)))
    }

    fn solutions_of_code(&self, prefix: u32) -> Solutions {
        Solutions(u8::from(self.contains(prefix)) | u8::from(self.contains(prefix | 8)) << 1)
    }

    /// One `m`-row matrix line per coordinate, columns in ascending code order.
    pub fn to_matrix_string(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn permute_code(code: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | (((code >> p) & 1) << i))
}

/// Solutions of a scalar analogy equation: a subset of `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Solutions(u8);

impl Solutions {
    pub const NONE: Solutions = Solutions(0);
    pub const BOTH: Solutions = Solutions(0b11);

    pub fn single(x: bool) -> Self {
        Solutions(1 << u8::from(x))
    }

    #[inline]
    pub fn contains(self, x: bool) -> bool {
        (self.0 >> u8::from(x)) & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = bool> {
        [false, true].into_iter().filter(move |&x| self.contains(x))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty {}", self.arity);
        }
        let codes: Vec<u32> = self.iter().collect();
        for row in 0..self.arity {
            if row > 0 {
                writeln!(f)?;
            }
            let line: Vec<&str> = codes
                .iter()
                .map(|c| if (c >> row) & 1 == 1 { "1" } else { "0" })
                .collect();
            write!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuples: Vec<String> = self.iter().map(|c| tuple_string(self.arity, c)).collect();
        write!(f, "Relation[{}]{{{}}}", self.arity, tuples.join(","))
    }
}

/// Parses a 0/1 matrix whose columns are the tuples. Rows are separated by
/// newlines or `;`, entries by whitespace. `empty <m>` denotes the empty
/// `m`-ary relation.
impl FromStr for Relation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_relation(text)
    }
}

pub fn parse_relation(text: &str) -> Result<Relation> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .flat_map(|(ln, line)| line.split(';').map(move |seg| (ln + 1, seg.trim())))
        .filter(|(_, seg)| !seg.is_empty())
        .collect();
    let err = |line: usize, reason: String| Error::ParseRelation { line, reason };
    let Some(&(first_line, first)) = rows.first() else {
        return Err(err(1, "no rows".into()));
    };
    if let Some(arity) = first.strip_prefix("empty") {
        if rows.len() != 1 {
            return Err(err(first_line, "`empty <m>` must stand alone".into()));
        }
        let arity: usize = arity
            .trim()
            .parse()
            .map_err(|_| err(first_line, "expected `empty <arity>`".into()))?;
        return Relation::empty(arity).map_err(|e| err(first_line, e.to_string()));
    }
    let arity = rows.len();
    if arity > MAX_RELATION_ARITY {
        return Err(err(
            rows[MAX_RELATION_ARITY].0,
            format!("more than {MAX_RELATION_ARITY} rows"),
        ));
    }
    let mut columns: Option<Vec<u32>> = None;
    for (r, &(line, row)) in rows.iter().enumerate() {
        let bits = row
            .split_whitespace()
            .map(|tok| match tok {
                "0" => Ok(0u32),
                "1" => Ok(1u32),
                other => Err(err(line, format!("entry {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = columns.get_or_insert_with(|| vec![0; bits.len()]);
        if bits.len() != cols.len() {
            return Err(err(
                line,
                format!(
                    "ragged matrix: expected {} columns, found {}",
                    cols.len(),
                    bits.len()
                ),
            ));
        }
        for (c, b) in cols.iter_mut().zip(bits) {
            *c |= b << r;
        }
    }
    Relation::from_tuples(arity, columns.unwrap_or_default())
}

pub fn format_relation(r: &Relation) -> String {
    r.to_string()
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let tuples: Vec<String> = self.iter().map(|c| tuple_string(self.arity, c)).collect();
        tuples.serialize(serializer)
    }
}

/// An antecedent/consequent pair of relations of equal arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Constraint {
    antecedent: Relation,
    consequent: Relation,
}

impl Constraint {
    pub fn new(antecedent: Relation, consequent: Relation) -> Result<Self> {
        antecedent.same_arity(&consequent)?;
        Ok(Constraint {
            antecedent,
            consequent,
        })
    }

    /// The plain-relation constraint `(R, R)`.
    pub fn plain(relation: Relation) -> Self {
        Constraint {
            antecedent: relation,
            consequent: relation,
        }
    }

    pub fn antecedent(&self) -> &Relation {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Relation {
        &self.consequent
    }

    pub fn arity(&self) -> usize {
        self.antecedent.arity
    }

    /// `(R̄, S̄)`.
    pub fn negate(&self) -> Constraint {
        Constraint {
            antecedent: self.antecedent.negate(),
            consequent: self.consequent.negate(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analogy::builtin;

    fn rel(text: &str) -> Relation {
        text.parse().unwrap()
    }

    #[test]
    fn parse_matrix() {
        let r4 = rel("0 1 1 0 0 1\n0 1 0 1 0 1\n0 0 1 0 1 1\n0 0 0 1 1 1");
        assert_eq!(r4.len(), 6);
        assert_eq!(r4, builtin(4));
        let zero = rel("0\n0\n0\n0");
        assert_eq!(zero.iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(
            rel("0 1; 1 0"),
            Relation::from_tuples(2, [0b10, 0b01]).unwrap()
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "0 1\n0".parse::<Relation>(),
            Err(Error::ParseRelation { line: 2, .. })
        ));
        assert!(matches!(
            "0 2\n0 1".parse::<Relation>(),
            Err(Error::ParseRelation { line: 1, .. })
        ));
        assert!("".parse::<Relation>().is_err());
        assert!("0\n0\n0\n0\n0\n0\n0\n0\n0".parse::<Relation>().is_err());
    }

    #[test]
    fn format_round_trip() {
        for i in 1..=5 {
            let r = builtin(i);
            assert_eq!(rel(&r.to_string()), r);
        }
        let e = Relation::empty(3).unwrap();
        assert_eq!(e.to_string(), "empty 3");
        assert_eq!(rel("empty 3"), e);
        assert_eq!(rel("1 0\n1 0").to_string(), "0 1\n0 1");
    }

    #[test]
    fn negation_examples() {
        assert_eq!(builtin(2).negate(), builtin(3));
        assert_eq!(builtin(1).negate(), builtin(1));
        assert_eq!(rel("0\n0\n0\n0").negate(), rel("1\n1\n1\n1"));
    }

    #[test]
    fn permutations() {
        let r5 = builtin(5);
        assert_eq!(r5.permute_coordinates(&[0, 1, 2, 3]).unwrap(), r5);
        assert_eq!(r5.permute_coordinates(&[2, 3, 0, 1]).unwrap(), r5);
        assert_eq!(r5.permute_coordinates(&[0, 2, 1, 3]).unwrap(), r5);
        assert!(r5.permute_coordinates(&[0, 0, 1, 2]).is_err());
        assert!(r5.permute_coordinates(&[0, 1, 2]).is_err());
        let r = rel("1\n0\n0");
        assert_eq!(r.permute_coordinates(&[1, 2, 0]).unwrap(), rel("0\n0\n1"));
    }

    #[test]
    fn extension_examples() {
        assert_eq!(builtin(5).extend_consequent().unwrap(), builtin(5));
        let extra = Relation::from_columns(4, &[[0, 1, 1, 0], [0, 1, 1, 1]]).unwrap();
        assert_eq!(
            builtin(2).extend_consequent().unwrap(),
            builtin(2).union(&extra).unwrap()
        );
        assert_eq!(
            Relation::empty(4).unwrap().extend_consequent().unwrap(),
            Relation::full(4).unwrap()
        );
        assert!(builtin(4)
            .permute_coordinates(&[0, 1, 2, 3])
            .unwrap()
            .extend_consequent()
            .is_ok());
        assert!(Relation::full(3).unwrap().extend_consequent().is_err());
    }

    #[test]
    fn solution_examples() {
        assert!(builtin(2).solutions(false, true, true).unwrap().is_empty());
        assert_eq!(
            builtin(4).solutions(false, false, true).unwrap(),
            Solutions::single(true)
        );
        let full = Relation::full(4).unwrap();
        for p in 0..8 {
            assert_eq!(full.solution_table().unwrap()[p], Solutions::BOTH);
        }
    }

    #[test]
    fn constraint_arity_check() {
        assert!(Constraint::new(builtin(1), Relation::full(3).unwrap()).is_err());
        assert_eq!(Constraint::plain(builtin(4)).arity(), 4);
    }
}
