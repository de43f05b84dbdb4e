use std::fmt;

use super::{BitTable, TruthTable};
use crate::error::{Error, Result};

/// Coefficients of the unique multilinear GF(2) polynomial of a function.
///
/// Bit `m` is the coefficient of the monomial whose variables are the set bits
/// of `m` (bit 0 is `x1`); bit 0 itself is the constant term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnfPolynomial(BitTable);

impl AnfPolynomial {
    pub fn from_table(f: &TruthTable) -> Self {
        let mut bits = f.bits().clone();
        bits.mobius();
        AnfPolynomial(bits)
    }

    /// Builds a polynomial from monomial masks; repeated monomials cancel.
    pub fn from_monomials(arity: usize, monomials: &[usize]) -> Result<Self> {
        if arity > super::MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut bits = BitTable::zeros(arity);
        for &m in monomials {
            if m >= bits.len() {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: usize::BITS as usize - m.leading_zeros() as usize,
                });
            }
            bits.set(m, !bits.get(m));
        }
        Ok(AnfPolynomial(bits))
    }

    /// Evaluates the polynomial everywhere (the inverse Möbius transform).
    pub fn to_table(&self) -> TruthTable {
        let mut bits = self.0.clone();
        bits.mobius();
        TruthTable::from_bit_table(bits)
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn coefficient(&self, monomial: usize) -> bool {
        self.0.get(monomial)
    }

    /// Monomials with a nonzero coefficient, in ascending mask order.
    pub fn monomials(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.len()).filter(|&m| self.0.get(m))
    }

    /// Largest monomial size; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.monomials()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<usize> = self.monomials().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first, then by variable order
        terms.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
        for (k, m) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *m == 0 {
                write!(f, "1")?;
            }
            for j in 0..self.arity() {
                if (m >> j) & 1 == 1 {
                    write!(f, "x{}", j + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::named::*;

    /// Evaluates a monomial list pointwise, independent of the transform.
    fn eval_monomials(arity: usize, monomials: &[usize]) -> TruthTable {
        TruthTable::from_fn(arity, |x| {
            monomials.iter().filter(|&&m| x & m == m).count() % 2 == 1
        })
        .unwrap()
    }

    #[test]
    fn known_expansions() {
        assert_eq!(and().anf().monomials().collect::<Vec<_>>(), vec![0b11]);
        // x1 + x2 + 1
        assert_eq!(
            xnor().anf().monomials().collect::<Vec<_>>(),
            vec![0, 0b01, 0b10]
        );
        assert_eq!(
            median().anf().monomials().collect::<Vec<_>>(),
            vec![0b011, 0b101, 0b110]
        );
        assert_eq!(median().anf().to_string(), "x1x2 + x1x3 + x2x3");
        assert_eq!(one(2).anf().to_string(), "1");
    }

    #[test]
    fn brute_force_matches_transform() {
        assert_eq!(eval_monomials(2, &[0, 1, 2]), xnor());
        for code in 0..256u64 {
            let f = TruthTable::from_code(3, code).unwrap();
            let monos: Vec<usize> = f.anf().monomials().collect();
            assert_eq!(eval_monomials(3, &monos), f);
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(xor3().degree(), 1);
        assert!(xor3().is_affine());
        assert_eq!(median().degree(), 2);
        assert!(!median().is_affine());
        assert_eq!(one(3).degree(), 0);
        assert!(one(3).is_affine());
    }

    #[test]
    fn wide_transform_round_trip() {
        let f = TruthTable::from_fn(9, |x| (x * 2654435761usize) >> 7 & 1 == 1).unwrap();
        assert_eq!(f.anf().to_table(), f);
        let p = AnfPolynomial::from_monomials(9, &[0b1_0000_0001, 0b1_1000_0000]).unwrap();
        assert_eq!(
            p.to_table(),
            eval_monomials(9, &[0b1_0000_0001, 0b1_1000_0000])
        );
        assert_eq!(p.to_table().degree(), 2);
    }
}
