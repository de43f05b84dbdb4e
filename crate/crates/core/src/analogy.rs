//! Formal models of analogy on `{0,1}`: the five builtin quaternary relations,
//! postulate audits, analogy-equation solving and analogical constraints.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relations::{tuple_string, Constraint, Relation, Solutions};

/// Default cap on materialized vector solution sets.
pub const DEFAULT_SOLUTION_CAP: usize = 1 << 20;

const BUILTIN_MATRICES: [(&str, &str); 5] = [
    (
        "R1",
        "0 1 0 1 1 0 1 0 0 1 0 1
         0 0 1 1 0 1 0 1 0 0 1 1
         0 0 0 0 1 1 0 0 1 1 1 1
         0 0 0 0 0 0 1 1 1 1 1 1",
    ),
    (
        "R2",
        "0 1 0 1 1 0 0 1
         0 0 1 1 0 1 0 1
         0 0 0 0 1 0 1 1
         0 0 0 0 0 1 1 1",
    ),
    (
        "R3",
        "0 1 1 0 0 1 0 1
         0 1 0 1 0 0 1 1
         0 0 1 0 1 1 1 1
         0 0 0 1 1 1 1 1",
    ),
    (
        // Miclet and Prade's minimal model
        "R4",
        "0 1 1 0 0 1
         0 1 0 1 0 1
         0 0 1 0 1 1
         0 0 0 1 1 1",
    ),
    (
        // Klein's model: a + b = c + d
        "R5",
        "0 1 1 0 1 0 0 1
         0 1 0 1 0 1 0 1
         0 0 1 1 0 0 1 1
         0 0 0 0 1 1 1 1",
    ),
];

/// A named quaternary relation read as `a : b :: c : d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalogyModel {
    name: String,
    relation: Relation,
}

impl AnalogyModel {
    pub fn new(name: impl Into<String>, relation: Relation) -> Result<Self> {
        if relation.arity() != 4 {
            return Err(Error::ArityMismatch {
                expected: 4,
                found: relation.arity(),
            });
        }
        Ok(AnalogyModel {
            name: name.into(),
            relation,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn holds(&self, a: bool, b: bool, c: bool, d: bool) -> bool {
        self.relation.contains(quad_code([a, b, c, d]))
    }

    pub fn solutions(&self, a: bool, b: bool, c: bool) -> Solutions {
        self.relation
            .solutions(a, b, c)
            .expect("analogy models are quaternary")
    }
}

/// The five Boolean models `R1`–`R5`, in order.
pub fn builtin_models() -> &'static [AnalogyModel] {
    static MODELS: OnceLock<Vec<AnalogyModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        BUILTIN_MATRICES
            .iter()
            .map(|(name, text)| {
                let rel: Relation = text.parse().expect("builtin matrix parses");
                AnalogyModel::new(*name, rel).expect("builtin matrix is quaternary")
            })
            .collect()
    })
}

/// The relation `R_index` for `index` in `1..=5`.
///
/// # Panics
/// Panics for any other index.
pub fn builtin(index: usize) -> Relation {
    assert!((1..=5).contains(&index), "builtin models are R1..R5");
    builtin_models()[index - 1].relation
}

/// The model `R_index` for `index` in `1..=5`.
pub fn builtin_model(index: usize) -> Option<&'static AnalogyModel> {
    index.checked_sub(1).and_then(|i| builtin_models().get(i))
}

fn quad_code(q: [bool; 4]) -> u32 {
    q.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u32::from(b) << i))
}

fn quad_bits(code: u32) -> [bool; 4] {
    std::array::from_fn(|i| (code >> i) & 1 == 1)
}

/// `(R, S′)`: preserving it is the same as being analogy-preserving for `(R, S)`.
pub fn analogical_constraint(src: &AnalogyModel, dst: &AnalogyModel) -> Constraint {
    let extended = dst
        .relation
        .extend_consequent()
        .expect("analogy models are quaternary");
    Constraint::new(src.relation, extended).expect("both sides are quaternary")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Postulate {
    /// `a : a :: b : b` for all `a, b`.
    Reflexivity,
    /// `a:b::c:d ⇒ c:d::a:b`
    Symmetry,
    /// `a:b::c:d ⇒ a:c::b:d`
    CentralPermutation,
    /// `a:b::c:d ⇒ b:a::d:c`
    InternalReversal,
    /// `a:b::c:d ⇒ d:b::c:a`
    ExtremePermutation,
    /// `a:b::a:d ⇒ d = b`
    StrongReflexivity,
    /// `a:a::c:d ⇒ d = c`
    StrongInnerReflexivity,
    /// Every solvable `a:b::c:x` has exactly one solution.
    Uniqueness,
}

impl Postulate {
    pub const ALL: [Postulate; 8] = [
        Postulate::Reflexivity,
        Postulate::Symmetry,
        Postulate::CentralPermutation,
        Postulate::InternalReversal,
        Postulate::ExtremePermutation,
        Postulate::StrongReflexivity,
        Postulate::StrongInnerReflexivity,
        Postulate::Uniqueness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Postulate::Reflexivity => "reflexivity",
            Postulate::Symmetry => "symmetry",
            Postulate::CentralPermutation => "central-permutation",
            Postulate::InternalReversal => "internal-reversal",
            Postulate::ExtremePermutation => "extreme-permutation",
            Postulate::StrongReflexivity => "strong-reflexivity",
            Postulate::StrongInnerReflexivity => "strong-inner-reflexivity",
            Postulate::Uniqueness => "uniqueness",
        }
    }

    /// Coordinate permutation for the closure-style postulates.
    fn permutation(self) -> Option<[usize; 4]> {
        match self {
            Postulate::Symmetry => Some([2, 3, 0, 1]),
            Postulate::CentralPermutation => Some([0, 2, 1, 3]),
            Postulate::InternalReversal => Some([1, 0, 3, 2]),
            Postulate::ExtremePermutation => Some([3, 1, 2, 0]),
            _ => None,
        }
    }

    fn check(self, rel: &Relation) -> Option<PostulateWitness> {
        if let Some(perm) = self.permutation() {
            let image = rel.permute_coordinates(&perm).expect("valid permutation");
            // `image ⊆ rel` fails exactly when some tuple maps outside.
            if image.is_subset(rel) {
                return None;
            }
            let t = rel
                .iter()
                .find(|&t| !rel.contains(crate::relations::permute_code(t, &perm)))
                .expect("a tuple leaves the relation");
            return Some(PostulateWitness::Offending(quad_bits(t)));
        }
        match self {
            Postulate::Reflexivity => (0..4u32)
                .map(|ab| quad_bits(((ab & 1) * 0b0011) | ((ab >> 1) * 0b1100)))
                .find(|&q| !rel.contains(quad_code(q)))
                .map(PostulateWitness::Missing),
            Postulate::StrongReflexivity => rel
                .iter()
                .map(quad_bits)
                .find(|q| q[0] == q[2] && q[3] != q[1])
                .map(PostulateWitness::Offending),
            Postulate::StrongInnerReflexivity => rel
                .iter()
                .map(quad_bits)
                .find(|q| q[0] == q[1] && q[3] != q[2])
                .map(PostulateWitness::Offending),
            Postulate::Uniqueness => (0..8u32).find_map(|p| {
                let sols = rel.solution_table().expect("quaternary")[p as usize];
                (sols.len() > 1).then_some(PostulateWitness::AmbiguousPrefix([
                    p & 1 == 1,
                    p & 2 != 0,
                    p & 4 != 0,
                ]))
            }),
            _ => unreachable!("permutation postulates handled above"),
        }
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evidence that a postulate fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PostulateWitness {
    /// A quadruple the postulate requires but the relation lacks.
    Missing([bool; 4]),
    /// A quadruple of the relation whose consequence fails.
    Offending([bool; 4]),
    /// A prefix with two solutions.
    AmbiguousPrefix([bool; 3]),
}

impl PostulateWitness {
    /// Independently confirms that this witness refutes `postulate` on `rel`.
    pub fn recheck(&self, postulate: Postulate, rel: &Relation) -> bool {
        let has = |q: [bool; 4]| rel.contains(quad_code(q));
        match (*self, postulate) {
            (PostulateWitness::Missing(q), Postulate::Reflexivity) => {
                q[0] == q[1] && q[2] == q[3] && !has(q)
            }
            (PostulateWitness::Offending(q), p) if has(q) => {
                let [a, b, c, d] = q;
                match p {
                    Postulate::Symmetry => !has([c, d, a, b]),
                    Postulate::CentralPermutation => !has([a, c, b, d]),
                    Postulate::InternalReversal => !has([b, a, d, c]),
                    Postulate::ExtremePermutation => !has([d, b, c, a]),
                    Postulate::StrongReflexivity => a == c && d != b,
                    Postulate::StrongInnerReflexivity => a == b && d != c,
                    _ => false,
                }
            }
            (PostulateWitness::AmbiguousPrefix([a, b, c]), Postulate::Uniqueness) => {
                has([a, b, c, false]) && has([a, b, c, true])
            }
            _ => false,
        }
    }
}

impl fmt::Display for PostulateWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |bs: &[bool]| {
            bs.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        match self {
            PostulateWitness::Missing(q) => write!(f, "missing {}", bits(q)),
            PostulateWitness::Offending(q) => write!(f, "offending {}", bits(q)),
            PostulateWitness::AmbiguousPrefix(p) => write!(f, "ambiguous prefix {}", bits(p)),
        }
    }
}

impl Serialize for PostulateWitness {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostulateVerdict {
    pub postulate: Postulate,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PostulateWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostulateReport {
    pub model: String,
    pub verdicts: Vec<PostulateVerdict>,
}

impl PostulateReport {
    pub fn verdict(&self, postulate: Postulate) -> &PostulateVerdict {
        self.verdicts
            .iter()
            .find(|v| v.postulate == postulate)
            .expect("every postulate is audited")
    }

    pub fn holds(&self, postulate: Postulate) -> bool {
        self.verdict(postulate).holds
    }
}

pub fn check_postulates(model: &AnalogyModel) -> PostulateReport {
    let verdicts = Postulate::ALL
        .iter()
        .map(|&p| {
            let witness = p.check(&model.relation);
            PostulateVerdict {
                postulate: p,
                holds: witness.is_none(),
                witness,
            }
        })
        .collect();
    PostulateReport {
        model: model.name.clone(),
        verdicts,
    }
}

/// Componentwise solutions of a vector equation `a : b :: c : x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSolutions {
    components: Vec<Solutions>,
}

impl VectorSolutions {
    pub fn components(&self) -> &[Solutions] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().any(|s| s.is_empty())
    }

    /// Size of the product set, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        self.components
            .iter()
            .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
            .unwrap_or(u128::MAX)
    }

    /// Solutions in lexicographic order (first coordinate most significant).
    pub fn iter(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let choices: Vec<Vec<bool>> = self.components.iter().map(|s| s.iter().collect()).collect();
        let empty = self.is_empty();
        let mut digits = vec![0usize; choices.len()];
        let mut done = empty;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let item: Vec<bool> = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
            done = true;
            for pos in (0..digits.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < choices[pos].len() {
                    done = false;
                    break;
                }
                digits[pos] = 0;
            }
            Some(item)
        })
    }

    /// All solutions, refusing to materialize more than `cap` of them.
    pub fn materialize(&self, cap: usize) -> Result<Vec<Vec<bool>>> {
        let count = self.count();
        if count > cap as u128 {
            return Err(Error::TooManySolutions { count, cap });
        }
        Ok(self.iter().collect())
    }
}

pub fn solve_vector(
    model: &AnalogyModel,
    a: &[bool],
    b: &[bool],
    c: &[bool],
) -> Result<VectorSolutions> {
    if a.len() != b.len() || b.len() != c.len() {
        return Err(Error::LengthMismatch(format!(
            "vectors of lengths {}, {}, {}",
            a.len(),
            b.len(),
            c.len()
        )));
    }
    let table = model.relation.solution_table()?;
    let components = (0..a.len())
        .map(|i| table[usize::from(a[i]) | usize::from(b[i]) << 1 | usize::from(c[i]) << 2])
        .collect();
    Ok(VectorSolutions { components })
}

/// Parses a 0/1 string into bits.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::ParseBits(s.to_string())),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The tuples of a model as 0/1 strings, ascending by code.
pub fn model_tuples(model: &AnalogyModel) -> Vec<String> {
    model.relation.iter().map(|c| tuple_string(4, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(i: usize) -> &'static AnalogyModel {
        builtin_model(i).unwrap()
    }

    #[test]
    fn builtin_sizes() {
        let sizes: Vec<usize> = builtin_models().iter().map(|m| m.relation.len()).collect();
        assert_eq!(sizes, vec![12, 8, 8, 6, 8]);
    }

    #[test]
    fn klein_model_is_the_gf2_parallelogram() {
        let r5 = model(5);
        for code in 0..16u32 {
            let [a, b, c, d] = quad_bits(code);
            assert_eq!(r5.holds(a, b, c, d), (a ^ b) == (c ^ d), "{code:04b}");
        }
    }

    #[test]
    fn postulate_examples() {
        for m in builtin_models() {
            let report = check_postulates(m);
            assert!(report.holds(Postulate::InternalReversal), "{}", m.name());
            for v in &report.verdicts {
                if let Some(w) = v.witness {
                    assert!(
                        w.recheck(v.postulate, m.relation()),
                        "{} {}",
                        m.name(),
                        v.postulate
                    );
                }
            }
        }
        let r5 = check_postulates(model(5));
        assert!(r5.holds(Postulate::Symmetry));
        assert!(r5.holds(Postulate::CentralPermutation));
        // R1 holds 1:0::0:0 but not 0:0::0:1
        assert_eq!(
            check_postulates(model(1))
                .verdict(Postulate::ExtremePermutation)
                .witness,
            Some(PostulateWitness::Offending([true, false, false, false]))
        );
        let r1 = check_postulates(model(1));
        assert_eq!(
            r1.verdict(Postulate::Uniqueness).witness,
            Some(PostulateWitness::AmbiguousPrefix([true, false, false]))
        );
    }

    #[test]
    fn witnesses_do_not_recheck_against_wrong_postulate() {
        let w = PostulateWitness::AmbiguousPrefix([true, false, false]);
        assert!(!w.recheck(Postulate::Symmetry, model(1).relation()));
        assert!(!w.recheck(Postulate::Uniqueness, model(5).relation()));
    }

    #[test]
    fn vector_solving() {
        let r4 = model(4);
        let sols = solve_vector(r4, &[false, true], &[false, true], &[true, false]).unwrap();
        assert_eq!(
            sols.materialize(DEFAULT_SOLUTION_CAP).unwrap(),
            vec![vec![true, false]]
        );
        let none = solve_vector(r4, &[false, true], &[true, true], &[true, false]).unwrap();
        assert!(none.is_empty());
        assert_eq!(none.count(), 0);
        assert!(solve_vector(r4, &[false], &[false, true], &[true]).is_err());
        let r5 = model(5);
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            let s = solve_vector(r5, &[x], &[x], &[y]).unwrap();
            assert_eq!(s.materialize(4).unwrap(), vec![vec![y]]);
        }
    }

    #[test]
    fn solution_count_is_product() {
        let r1 = model(1);
        // prefix (1,0,0) has two solutions in R1
        let a = vec![true; 21];
        let b = vec![false; 21];
        let sols = solve_vector(r1, &a, &b, &b).unwrap();
        assert_eq!(sols.count(), 1 << 21);
        assert!(matches!(
            sols.materialize(DEFAULT_SOLUTION_CAP),
            Err(Error::TooManySolutions { .. })
        ));
        let small = solve_vector(r1, &a[..3], &b[..3], &b[..3]).unwrap();
        let all = small.materialize(8).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![false, false, false]);
        assert_eq!(all[7], vec![true, true, true]);
    }

    #[test]
    fn analogical_constraints() {
        let c55 = analogical_constraint(model(5), model(5));
        assert_eq!(*c55.consequent(), builtin(5));
        let c11 = analogical_constraint(model(1), model(1));
        assert_eq!(*c11.consequent(), builtin(1));
        let c44 = analogical_constraint(model(4), model(4));
        let extra =
            Relation::from_columns(4, &[[0, 1, 1, 0], [0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 1]])
                .unwrap();
        assert_eq!(*c44.consequent(), builtin(4).union(&extra).unwrap());
        assert!(AnalogyModel::new("X", Relation::full(3).unwrap()).is_err());
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("0110").unwrap(), vec![false, true, true, false]);
        assert!(parse_bits("01a").is_err());
        assert_eq!(format_bits(&[true, false]), "10");
    }
}
