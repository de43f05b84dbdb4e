//! The named unary, binary and ternary functions used throughout.

use super::TruthTable;

pub fn zero(arity: usize) -> TruthTable {
    TruthTable::constant(arity, false).expect("constant arity within bounds")
}

pub fn one(arity: usize) -> TruthTable {
    TruthTable::constant(arity, true).expect("constant arity within bounds")
}

pub fn identity() -> TruthTable {
    TruthTable::from_code_unchecked(1, 0b10)
}

pub fn negation() -> TruthTable {
    TruthTable::from_code_unchecked(1, 0b01)
}

/// `x1 ∧ x2`
pub fn and() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b1000)
}

/// `x1 ∨ x2`
pub fn or() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b1110)
}

/// `x1 ↑ x2`
pub fn nand() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b0111)
}

/// `x1 ↓ x2`
pub fn nor() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b0001)
}

/// `x1 → x2`, i.e. `¬x1 ∨ x2`.
pub fn implies() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b1101)
}

/// `x1 ↛ x2`, i.e. `x1 ∧ ¬x2`.
pub fn nimplies() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b0010)
}

/// `x1 + x2` over GF(2).
pub fn xor() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b0110)
}

/// `x1 ↔ x2`
pub fn xnor() -> TruthTable {
    TruthTable::from_code_unchecked(2, 0b1001)
}

/// `x1 + x2 + x3` over GF(2).
pub fn xor3() -> TruthTable {
    TruthTable::from_code_unchecked(3, 0x96)
}

/// The ternary majority function.
pub fn median() -> TruthTable {
    TruthTable::from_code_unchecked(3, 0xe8)
}

/// Resolves the symbolic names accepted on the command line.
pub fn by_name(name: &str) -> Option<TruthTable> {
    Some(match name {
        "id" => identity(),
        "not" | "neg" => negation(),
        "and" => and(),
        "or" => or(),
        "nand" => nand(),
        "nor" => nor(),
        "implies" => implies(),
        "nimplies" => nimplies(),
        "xor" | "plus" => xor(),
        "xnor" | "iff" => xnor(),
        "xor3" => xor3(),
        "median" | "maj" => median(),
        _ => return None,
    })
}
