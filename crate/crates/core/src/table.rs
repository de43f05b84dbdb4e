//! Verification of the complete classification of analogy-preserving
//! functions between the five Boolean models.

use rayon::prelude::*;
use serde::Serialize;

use crate::analogy::{analogical_constraint, builtin_model};
use crate::boolfun::Family;
use crate::error::{Error, Result};
use crate::galois::{pol, Violation, DEFAULT_ENUMERATION_CAP};

use Family::{
    Affine as L, Constants as C, Negations as N, Omega1 as O, ProjectionsAndConstants as I,
};

/// `EXPECTED_TABLE[i][j]` names `AP(R(i+1), R(j+1))`. Kept apart from the
/// computation so the check compares against transcribed values.
pub const EXPECTED_TABLE: [[Family; 5]; 5] = [
    [O, C, C, C, C],
    [O, I, N, C, C],
    [O, N, I, C, C],
    [L, O, O, L, L],
    [L, C, C, L, L],
];

/// A function on which the computed set and the expected family disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub arity: usize,
    pub function: String,
    /// `missing` when expected but rejected, `unexpected` when accepted but not expected.
    pub kind: &'static str,
    /// For `missing` functions, the rejecting selection.
    pub witness: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArityCount {
    pub arity: usize,
    pub computed: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellVerdict {
    pub source: String,
    pub target: String,
    pub expected: Family,
    pub counts: Vec<ArityCount>,
    pub matches: bool,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableVerdict {
    pub max_arity: usize,
    pub pass: bool,
    /// Row-major, source first.
    pub cells: Vec<CellVerdict>,
}

impl TableVerdict {
    pub fn cell(&self, i: usize, j: usize) -> &CellVerdict {
        &self.cells[(i - 1) * 5 + (j - 1)]
    }
}

/// Compares `Pol(Ri, R′j)` with the expected family at arities `1..=max_arity`.
pub fn verify_table(max_arity: usize) -> Result<TableVerdict> {
    if max_arity == 0 || max_arity > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapabilityExceeded {
            what: "table verification",
            requested: max_arity,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let cells = (0..25)
        .into_par_iter()
        .map(|k| verify_cell(k / 5 + 1, k % 5 + 1, max_arity))
        .collect::<Result<Vec<_>>>()?;
    Ok(TableVerdict {
        max_arity,
        pass: cells.iter().all(|c| c.matches),
        cells,
    })
}

/// One cell of [`verify_table`].
pub fn verify_cell(i: usize, j: usize, max_arity: usize) -> Result<CellVerdict> {
    let src = builtin_model(i).expect("index in 1..=5");
    let dst = builtin_model(j).expect("index in 1..=5");
    let expected = EXPECTED_TABLE[i - 1][j - 1];
    let constraint = [analogical_constraint(src, dst)];
    let mut counts = Vec::new();
    let mut mismatches = Vec::new();
    for n in 1..=max_arity {
        let result = pol(&constraint, n)?;
        let family = expected.enumerate(n)?;
        for f in &family {
            if !result.contains(f) {
                mismatches.push(Mismatch {
                    arity: n,
                    function: f.to_string(),
                    kind: "missing",
                    witness: result.witness(f).cloned(),
                });
            }
        }
        for f in result.members() {
            if family.binary_search(f).is_err() {
                mismatches.push(Mismatch {
                    arity: n,
                    function: f.to_string(),
                    kind: "unexpected",
                    witness: None,
                });
            }
        }
        counts.push(ArityCount {
            arity: n,
            computed: result.members().len(),
            expected: family.len(),
        });
    }
    Ok(CellVerdict {
        source: src.name().to_string(),
        target: dst.name().to_string(),
        expected,
        counts,
        matches: mismatches.is_empty(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_passes() {
        let v = verify_table(2).unwrap();
        assert!(v.pass, "{v:?}");
        assert_eq!(v.cell(2, 2).counts[1].computed, 4);
        assert_eq!(v.cell(4, 1).counts[1].computed, 8);
        assert!(verify_table(0).is_err());
        assert!(verify_table(5).is_err());
    }
}
