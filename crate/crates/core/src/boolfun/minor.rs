use std::collections::BTreeSet;

use super::{BitTable, TruthTable};
use crate::error::{Error, Result};

/// What a source argument is replaced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinorArg {
    /// Argument `k` (0-based) of the target function.
    Var(usize),
    Const(bool),
}

/// A substitution `g ↦ g(y_1, …, y_m)` where each `y_i` is a target argument
/// or a constant. Maps without constants give ordinary minors; maps with
/// constants give I-minors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorMap {
    target_arity: usize,
    args: Vec<MinorArg>,
}

impl MinorMap {
    pub fn new(target_arity: usize, args: Vec<MinorArg>) -> Result<Self> {
        if let Some(index) = args.iter().find_map(|a| match *a {
            MinorArg::Var(k) if k >= target_arity => Some(k),
            _ => None,
        }) {
            return Err(Error::InvalidMinorMap {
                index,
                target_arity,
            });
        }
        Ok(MinorMap { target_arity, args })
    }

    /// A pure variable map `i ↦ sigma[i]`.
    pub fn variables(target_arity: usize, sigma: &[usize]) -> Result<Self> {
        Self::new(
            target_arity,
            sigma.iter().map(|&k| MinorArg::Var(k)).collect(),
        )
    }

    pub fn source_arity(&self) -> usize {
        self.args.len()
    }

    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    pub fn args(&self) -> &[MinorArg] {
        &self.args
    }

    pub fn is_pure(&self) -> bool {
        self.args.iter().all(|a| matches!(a, MinorArg::Var(_)))
    }

    pub fn apply(&self, g: &TruthTable) -> Result<TruthTable> {
        if g.arity() != self.source_arity() {
            return Err(Error::ArityMismatch {
                expected: self.source_arity(),
                found: g.arity(),
            });
        }
        Ok(substitute(g, self.target_arity, &self.args))
    }
}

fn substitute(g: &TruthTable, target_arity: usize, args: &[MinorArg]) -> TruthTable {
    let mut bits = BitTable::zeros(target_arity);
    let mut const_part = 0usize;
    let mut vars: Vec<(usize, usize)> = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        match *a {
            MinorArg::Const(true) => const_part |= 1 << i,
            MinorArg::Const(false) => {}
            MinorArg::Var(k) => vars.push((i, k)),
        }
    }
    for x in 0..bits.len() {
        let src = vars
            .iter()
            .fold(const_part, |acc, &(i, k)| acc | (((x >> k) & 1) << i));
        if g.get(src) {
            bits.set(x, true);
        }
    }
    TruthTable::from_bit_table(bits)
}

/// Calls `visit` with every assignment of `slots` positions to `choices` options.
fn for_each_assignment(slots: usize, choices: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if choices == 0 && slots > 0 {
        return;
    }
    let mut digits = vec![0usize; slots];
    loop {
        if !visit(&digits) {
            return;
        }
        let mut pos = 0;
        loop {
            if pos == slots {
                return;
            }
            digits[pos] += 1;
            if digits[pos] < choices {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn choice_to_arg(choice: usize, target_arity: usize) -> MinorArg {
    match choice.checked_sub(target_arity) {
        None => MinorArg::Var(choice),
        Some(0) => MinorArg::Const(false),
        Some(_) => MinorArg::Const(true),
    }
}

/// All functions of `target_arity` obtainable from `g` by substituting target
/// arguments or the constants 0 and 1 for its arguments (exhaustive).
pub fn i_minors(g: &TruthTable, target_arity: usize) -> BTreeSet<TruthTable> {
    let mut out = BTreeSet::new();
    let mut args = vec![MinorArg::Const(false); g.arity()];
    for_each_assignment(g.arity(), target_arity + 2, |digits| {
        for (a, &d) in args.iter_mut().zip(digits) {
            *a = choice_to_arg(d, target_arity);
        }
        out.insert(substitute(g, target_arity, &args));
        true
    });
    out
}

/// All minors of `g` of the given arity (pure variable substitutions).
pub fn minors(g: &TruthTable, target_arity: usize) -> BTreeSet<TruthTable> {
    let mut out = BTreeSet::new();
    let mut args = vec![MinorArg::Var(0); g.arity()];
    for_each_assignment(g.arity(), target_arity, |digits| {
        for (a, &d) in args.iter_mut().zip(digits) {
            *a = MinorArg::Var(d);
        }
        out.insert(substitute(g, target_arity, &args));
        true
    });
    out
}

/// Whether `f` is a minor of `g`.
pub fn is_minor_of(f: &TruthTable, g: &TruthTable) -> bool {
    let mut found = false;
    let mut args = vec![MinorArg::Var(0); g.arity()];
    for_each_assignment(g.arity(), f.arity(), |digits| {
        for (a, &d) in args.iter_mut().zip(digits) {
            *a = MinorArg::Var(d);
        }
        found = substitute(g, f.arity(), &args) == *f;
        !found
    });
    found
}

/// `f ≡ g`: each is a minor of the other.
pub fn equivalent(f: &TruthTable, g: &TruthTable) -> bool {
    is_minor_of(f, g) && is_minor_of(g, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::named::*;
    use crate::boolfun::{all_functions, AnfPolynomial};

    #[test]
    fn constant_substitutions() {
        let first_with_zero =
            MinorMap::new(1, vec![MinorArg::Var(0), MinorArg::Const(false)]).unwrap();
        assert_eq!(xor().apply_minor(&first_with_zero).unwrap(), identity());
        assert_eq!(implies().apply_minor(&first_with_zero).unwrap(), negation());
        let diag = MinorMap::variables(1, &[0, 0]).unwrap();
        assert_eq!(xor().apply_minor(&diag).unwrap(), zero(1));
    }

    #[test]
    fn invalid_maps() {
        assert_eq!(
            MinorMap::variables(1, &[0, 1]),
            Err(Error::InvalidMinorMap {
                index: 1,
                target_arity: 1
            })
        );
        let m = MinorMap::variables(2, &[0, 1]).unwrap();
        assert!(median().apply_minor(&m).is_err());
    }

    #[test]
    fn nor_i_minors_contain_itself_and_negation() {
        let g = AnfPolynomial::from_monomials(2, &[0b11, 0b01, 0b10, 0])
            .unwrap()
            .to_table();
        assert_eq!(g, nor());
        let set = i_minors(&g, 2);
        assert!(set.contains(&nor()));
        let not_first = negation()
            .compose(&[TruthTable::projection(2, 0).unwrap()])
            .unwrap();
        assert!(set.contains(&not_first));
        let unary = i_minors(&g, 1);
        assert!(unary.contains(&negation()));
    }

    #[test]
    fn conjunction_unary_i_minors() {
        let set = i_minors(&and(), 1);
        let expected: BTreeSet<_> = [zero(1), one(1), identity()].into_iter().collect();
        assert_eq!(set, expected);
    }

    #[test]
    fn projection_i_minors_are_trivial() {
        for n in 1..=3 {
            for j in 0..n {
                let p = TruthTable::projection(n, j).unwrap();
                for t in 1..=3 {
                    for h in i_minors(&p, t) {
                        assert!(h.is_constant() || h.projection_index().is_some(), "{h}");
                    }
                }
            }
        }
    }

    #[test]
    fn minor_relation_is_a_quasi_order() {
        let fs: Vec<TruthTable> = (0..=2).flat_map(|n| all_functions(n).unwrap()).collect();
        for f in &fs {
            assert!(is_minor_of(f, f));
        }
        for f in &fs {
            for g in &fs {
                if !is_minor_of(f, g) {
                    continue;
                }
                for h in &fs {
                    if is_minor_of(g, h) {
                        assert!(is_minor_of(f, h), "{f} <= {g} <= {h}");
                    }
                }
            }
        }
    }

    #[test]
    fn x1x2_plus_x1_is_nimplication_class() {
        let f = AnfPolynomial::from_monomials(2, &[0b11, 0b01])
            .unwrap()
            .to_table();
        assert!(equivalent(&f, &nimplies()));
        assert!(!equivalent(&f, &implies()));
        // x1x2 + x1 + 1 is the implication class
        let g = AnfPolynomial::from_monomials(2, &[0b11, 0b01, 0])
            .unwrap()
            .to_table();
        assert!(equivalent(&g, &implies()));
    }
}
