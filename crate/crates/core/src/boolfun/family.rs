use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{all_functions, TruthTable};
use crate::error::{Error, Result};

/// Largest arity for which the exponentially large families are enumerated.
pub const FAMILY_ENUMERATION_CAP: usize = 4;

/// The named function classes of the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Constants.
    #[serde(rename = "C")]
    Constants,
    /// Negated projections and constants.
    #[serde(rename = "N")]
    Negations,
    /// Projections and constants.
    #[serde(rename = "I")]
    ProjectionsAndConstants,
    /// Projections, negated projections and constants.
    #[serde(rename = "Ω(1)")]
    Omega1,
    /// Affine functions over GF(2).
    #[serde(rename = "L")]
    Affine,
    /// Projections only.
    #[serde(rename = "J")]
    Projections,
    #[serde(rename = "ALL")]
    All,
}

impl Family {
    pub const ALL_FAMILIES: [Family; 7] = [
        Family::Constants,
        Family::Negations,
        Family::ProjectionsAndConstants,
        Family::Omega1,
        Family::Affine,
        Family::Projections,
        Family::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Constants => "C",
            Family::Negations => "N",
            Family::ProjectionsAndConstants => "I",
            Family::Omega1 => "Ω(1)",
            Family::Affine => "L",
            Family::Projections => "J",
            Family::All => "ALL",
        }
    }

    pub fn contains(self, f: &TruthTable) -> bool {
        let constant = || f.is_constant();
        let projection = || f.projection_index().is_some();
        let negated = || f.negated_projection_index().is_some();
        match self {
            Family::Constants => constant(),
            Family::Negations => constant() || negated(),
            Family::ProjectionsAndConstants => constant() || projection(),
            Family::Omega1 => constant() || projection() || negated(),
            Family::Affine => f.is_affine(),
            Family::Projections => projection(),
            Family::All => true,
        }
    }

    /// Closed-form size of the `arity`-ary part, if it fits in a `u64`.
    pub fn count(self, arity: usize) -> Option<u64> {
        let n = arity as u64;
        match self {
            Family::Constants => Some(2),
            Family::Negations | Family::ProjectionsAndConstants => Some(n + 2),
            Family::Omega1 => Some(2 * n + 2),
            Family::Affine => 1u64.checked_shl(arity as u32 + 1),
            Family::Projections => Some(n),
            Family::All => 1u64.checked_shl(1u32.checked_shl(arity as u32)?),
        }
    }

    /// The `arity`-ary members in ascending table order.
    pub fn enumerate(self, arity: usize) -> Result<Vec<TruthTable>> {
        let exponential = matches!(self, Family::Affine | Family::All);
        if exponential && arity > FAMILY_ENUMERATION_CAP {
            return Err(Error::CapabilityExceeded {
                what: "family enumeration",
                requested: arity,
                cap: FAMILY_ENUMERATION_CAP,
            });
        }
        let mut out = Vec::new();
        let consts = |out: &mut Vec<TruthTable>| -> Result<()> {
            out.push(TruthTable::constant(arity, false)?);
            out.push(TruthTable::constant(arity, true)?);
            Ok(())
        };
        let projections = |out: &mut Vec<TruthTable>| -> Result<()> {
            for j in 0..arity {
                out.push(TruthTable::projection(arity, j)?);
            }
            Ok(())
        };
        let negated = |out: &mut Vec<TruthTable>| -> Result<()> {
            for j in 0..arity {
                out.push(TruthTable::negated_projection(arity, j)?);
            }
            Ok(())
        };
        match self {
            Family::Constants => consts(&mut out)?,
            Family::Negations => {
                consts(&mut out)?;
                negated(&mut out)?;
            }
            Family::ProjectionsAndConstants => {
                consts(&mut out)?;
                projections(&mut out)?;
            }
            Family::Omega1 => {
                consts(&mut out)?;
                projections(&mut out)?;
                negated(&mut out)?;
            }
            Family::Affine => {
                for mask in 0..(1u32 << arity) {
                    for c in [false, true] {
                        out.push(TruthTable::affine(arity, mask, c)?);
                    }
                }
            }
            Family::Projections => projections(&mut out)?,
            Family::All => out.extend(all_functions(arity)?),
        }
        // Distinct at arity ≥ 1; at arity 0 only the two constants exist.
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "C" => Family::Constants,
            "N" => Family::Negations,
            "I" => Family::ProjectionsAndConstants,
            "Ω(1)" | "Omega1" | "O1" => Family::Omega1,
            "L" => Family::Affine,
            "J" => Family::Projections,
            "ALL" => Family::All,
            other => return Err(format!("unknown family {other:?}")),
        })
    }
}

/// The least family of the chain `C ⊂ {N, I} ⊂ Ω(1) ⊂ L` containing `f`,
/// or `None` when `f` is not affine.
pub fn classify_function(f: &TruthTable) -> Option<Family> {
    [
        Family::Constants,
        Family::Negations,
        Family::ProjectionsAndConstants,
        Family::Omega1,
        Family::Affine,
    ]
    .into_iter()
    .find(|fam| fam.contains(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::named::*;

    #[test]
    fn counts_match_enumeration_and_membership() {
        for n in 1..=4 {
            let universe: Vec<TruthTable> = all_functions(n).unwrap().collect();
            for fam in Family::ALL_FAMILIES {
                let listed = fam.enumerate(n).unwrap();
                assert_eq!(listed.len() as u64, fam.count(n).unwrap(), "{fam} at {n}");
                let by_predicate: Vec<TruthTable> = universe
                    .iter()
                    .filter(|f| fam.contains(f))
                    .cloned()
                    .collect();
                assert_eq!(listed, by_predicate, "{fam} at {n}");
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify_function(&zero(2)), Some(Family::Constants));
        assert_eq!(classify_function(&one(0)), Some(Family::Constants));
        for n in 1..=4 {
            let neg = TruthTable::negated_projection(n, 0).unwrap();
            assert_eq!(classify_function(&neg), Some(Family::Negations));
        }
        assert_eq!(
            classify_function(&identity()),
            Some(Family::ProjectionsAndConstants)
        );
        assert_eq!(classify_function(&xor()), Some(Family::Affine));
        assert_eq!(classify_function(&and()), None);
    }

    #[test]
    fn enumeration_cap() {
        assert!(Family::All.enumerate(5).is_err());
        assert!(Family::Affine.enumerate(5).is_err());
        assert_eq!(Family::Omega1.enumerate(10).unwrap().len(), 22);
    }

    #[test]
    fn names_round_trip() {
        for fam in Family::ALL_FAMILIES {
            assert_eq!(fam.name().parse::<Family>().unwrap(), fam);
        }
    }
}
