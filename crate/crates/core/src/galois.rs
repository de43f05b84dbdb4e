//! The preservation relation between functions and relational constraints,
//! and exhaustive enumeration of both sides of the induced Galois connection
//! at bounded arity.
//!
//! A *selection* for an `n`-ary function and an `m`-ary constraint is a list
//! of `n` antecedent tuples (the columns of an `m × n` matrix). Applying `f`
//! row by row gives the image tuple. Selections are enumerated in a fixed
//! order: columns are indices into the antecedent's ascending tuple list, and
//! the first column varies fastest.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfun::{classify_function, Family, MinorMap, TruthTable, MAX_CODE_ARITY};
use crate::error::{Error, Result};
use crate::relations::{tuple_string, Constraint, Relation};

/// Default arity cap for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 4;

/// Function codes handled per parallel work item in [`pol`].
const POL_CHUNK: u64 = 1 << 12;

/// A selection of antecedent tuples whose image leaves the consequent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    /// Index of the violated constraint in the constraint list.
    pub constraint: usize,
    /// The selected antecedent tuple codes, one per argument.
    pub columns: Vec<u32>,
    /// Code of the image tuple.
    pub image: u32,
}

impl Violation {
    /// Re-applies `f` to the witness columns and confirms that every column
    /// lies in the antecedent while the image lies outside the consequent.
    pub fn recheck(&self, f: &TruthTable, constraints: &[Constraint]) -> bool {
        let Some(c) = constraints.get(self.constraint) else {
            return false;
        };
        self.columns.len() == f.arity()
            && self.columns.iter().all(|&t| c.antecedent().contains(t))
            && apply_to_columns(f, &self.columns, c.arity()) == self.image
            && !c.consequent().contains(self.image)
    }

    /// Witness columns as 0/1 strings, first coordinate first.
    pub fn column_strings(&self, arity: usize) -> Vec<String> {
        self.columns
            .iter()
            .map(|&t| tuple_string(arity, t))
            .collect()
    }
}

/// Componentwise application of `f` to the given `m`-tuple codes.
pub fn apply_to_columns(f: &TruthTable, columns: &[u32], m: usize) -> u32 {
    (0..m).fold(0, |acc, r| {
        let point = columns
            .iter()
            .enumerate()
            .fold(0usize, |p, (j, &t)| p | ((((t >> r) & 1) as usize) << j));
        acc | (u32::from(f.get(point)) << r)
    })
}

/// Odometer over `slots` digits in `0..base`, first digit fastest.
struct Odometer {
    digits: Vec<usize>,
    base: usize,
    started: bool,
    done: bool,
}

impl Odometer {
    fn new(slots: usize, base: usize) -> Self {
        Odometer {
            digits: vec![0; slots],
            base,
            started: false,
            done: base == 0 && slots > 0,
        }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.base {
                return Some(&self.digits);
            }
            *d = 0;
        }
        self.done = true;
        None
    }
}

/// The first violating selection in canonical order, if any.
pub fn find_violation(f: &TruthTable, c: &Constraint) -> Option<Violation> {
    let tuples: Vec<u32> = c.antecedent().iter().collect();
    let m = c.arity();
    let mut odo = Odometer::new(f.arity(), tuples.len());
    let mut columns = vec![0u32; f.arity()];
    while let Some(digits) = odo.advance() {
        for (col, &d) in columns.iter_mut().zip(digits) {
            *col = tuples[d];
        }
        let image = apply_to_columns(f, &columns, m);
        if !c.consequent().contains(image) {
            return Some(Violation {
                constraint: 0,
                columns,
                image,
            });
        }
    }
    None
}

/// `f ▷ (R, S)`.
pub fn preserves(f: &TruthTable, c: &Constraint) -> bool {
    find_violation(f, c).is_none()
}

/// `f` preserves every constraint in the list; otherwise the first violation.
pub fn find_violation_all(f: &TruthTable, constraints: &[Constraint]) -> Option<Violation> {
    constraints.iter().enumerate().find_map(|(i, c)| {
        find_violation(f, c).map(|mut v| {
            v.constraint = i;
            v
        })
    })
}

/// The `n`-ary part of `Pol` of a constraint set, with one witness per rejected function.
#[derive(Debug, Clone)]
pub struct PolResult {
    constraints: Vec<Constraint>,
    arity: usize,
    members: Vec<TruthTable>,
    witnesses: BTreeMap<TruthTable, Violation>,
}

impl PolResult {
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Members in ascending table order.
    pub fn members(&self) -> &[TruthTable] {
        &self.members
    }

    pub fn contains(&self, f: &TruthTable) -> bool {
        self.members.binary_search(f).is_ok()
    }

    /// Rejected functions with their first violating selection.
    pub fn witnesses(&self) -> &BTreeMap<TruthTable, Violation> {
        &self.witnesses
    }

    pub fn witness(&self, f: &TruthTable) -> Option<&Violation> {
        self.witnesses.get(f)
    }

    pub fn member_set(&self) -> BTreeSet<TruthTable> {
        self.members.iter().cloned().collect()
    }

    /// Structured summary for reporting.
    pub fn report(&self, constraint_names: &[String]) -> PolReport {
        let mut tallies = BTreeMap::new();
        for f in &self.members {
            let name = classify_function(f).map_or("OTHER", Family::name);
            *tallies.entry(name.to_string()).or_insert(0) += 1;
        }
        PolReport {
            constraints: constraint_names.to_vec(),
            arity: self.arity,
            member_count: self.members.len(),
            members: self.members.iter().map(ToString::to_string).collect(),
            tallies,
        }
    }
}

/// Serializable view of a [`PolResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolReport {
    pub constraints: Vec<String>,
    pub arity: usize,
    pub member_count: usize,
    pub members: Vec<String>,
    /// Members per least family of `C ⊂ {N, I} ⊂ Ω(1) ⊂ L`, or `OTHER`.
    pub tallies: BTreeMap<String, usize>,
}

/// Exhaustive `n`-ary polymorphisms of a constraint set (`n` ≤ 4).
pub fn pol(constraints: &[Constraint], n: usize) -> Result<PolResult> {
    pol_with_cap(constraints, n, DEFAULT_ENUMERATION_CAP)
}

/// As [`pol`] with an explicit arity cap (never above 5).
pub fn pol_with_cap(constraints: &[Constraint], n: usize, cap: usize) -> Result<PolResult> {
    let cap = cap.min(5);
    if n > cap {
        return Err(Error::CapabilityExceeded {
            what: "polymorphism enumeration",
            requested: n,
            cap,
        });
    }
    debug_assert!(n <= MAX_CODE_ARITY);
    let plans: Vec<(Vec<u32>, &Constraint)> = constraints
        .iter()
        .map(|c| (c.antecedent().iter().collect(), c))
        .collect();
    let total: u64 = 1u64 << (1u64 << n);
    let chunks: Vec<(u64, u64)> = (0..total)
        .step_by(POL_CHUNK as usize)
        .map(|lo| (lo, (lo + POL_CHUNK).min(total)))
        .collect();

    let per_chunk: Vec<ChunkScan> = chunks
        .into_par_iter()
        .map(|(lo, hi)| scan_chunk(&plans, n, lo, hi))
        .collect();

    let mut members = Vec::new();
    let mut witnesses = BTreeMap::new();
    for (alive, rejected) in per_chunk {
        members.extend(
            alive
                .into_iter()
                .map(|c| TruthTable::from_code_unchecked(n, c)),
        );
        for (code, v) in rejected {
            witnesses.insert(TruthTable::from_code_unchecked(n, code), v);
        }
    }
    Ok(PolResult {
        constraints: constraints.to_vec(),
        arity: n,
        members,
        witnesses,
    })
}

/// Surviving codes and rejected codes with their witnesses.
type ChunkScan = (Vec<u64>, Vec<(u64, Violation)>);

/// Selection outer loop, function inner loop, over codes `lo..hi`.
fn scan_chunk(plans: &[(Vec<u32>, &Constraint)], n: usize, lo: u64, hi: u64) -> ChunkScan {
    let mut alive: Vec<u64> = (lo..hi).collect();
    let mut rejected = Vec::new();
    let mut points = [0u32; crate::relations::MAX_RELATION_ARITY];
    for (ci, (tuples, c)) in plans.iter().enumerate() {
        let m = c.arity();
        let consequent = c.consequent();
        let mut odo = Odometer::new(n, tuples.len());
        while let Some(digits) = odo.advance() {
            if alive.is_empty() {
                break;
            }
            for (r, p) in points.iter_mut().enumerate().take(m) {
                *p = digits
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (j, &d)| acc | (((tuples[d] >> r) & 1) << j));
            }
            let pts = &points[..m];
            alive.retain(|&code| {
                let image = pts
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (r, &p)| acc | ((((code >> p) & 1) as u32) << r));
                if consequent.contains(image) {
                    true
                } else {
                    rejected.push((
                        code,
                        Violation {
                            constraint: ci,
                            columns: digits.iter().map(|&d| tuples[d]).collect(),
                            image,
                        },
                    ));
                    false
                }
            });
        }
    }
    (alive, rejected)
}

/// All `m`-ary relations (`1 ≤ m ≤ 4`) preserved by every given function.
pub fn inv(functions: &[TruthTable], m: usize) -> Result<Vec<Relation>> {
    if m == 0 || m > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapabilityExceeded {
            what: "invariant enumeration",
            requested: m,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let count: u64 = 1 << (1u32 << m);
    Ok((0..count)
        .into_par_iter()
        .filter_map(|mask| {
            let rel = Relation::from_mask(m, [mask, 0, 0, 0]);
            let c = Constraint::plain(rel);
            functions.iter().all(|f| preserves(f, &c)).then_some(rel)
        })
        .collect())
}

/// Function sets split by arity `0..=max_arity`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSet {
    parts: Vec<BTreeSet<TruthTable>>,
}

impl GradedSet {
    pub fn new(max_arity: usize) -> Self {
        GradedSet {
            parts: vec![BTreeSet::new(); max_arity + 1],
        }
    }

    pub fn from_family(family: Family, max_arity: usize) -> Result<Self> {
        let mut g = GradedSet::new(max_arity);
        for n in 0..=max_arity {
            g.parts[n] = family.enumerate(n)?.into_iter().collect();
        }
        Ok(g)
    }

    /// `Pol` of the constraints at every arity up to `max_arity`.
    pub fn from_pol(constraints: &[Constraint], max_arity: usize) -> Result<Self> {
        let mut g = GradedSet::new(max_arity);
        for n in 0..=max_arity {
            g.parts[n] = pol(constraints, n)?.member_set();
        }
        Ok(g)
    }

    pub fn max_arity(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    pub fn part(&self, arity: usize) -> &BTreeSet<TruthTable> {
        &self.parts[arity]
    }

    pub fn insert(&mut self, f: TruthTable) -> bool {
        let n = f.arity();
        if n >= self.parts.len() {
            self.parts.resize(n + 1, BTreeSet::new());
        }
        self.parts[n].insert(f)
    }

    pub fn contains(&self, f: &TruthTable) -> bool {
        self.parts.get(f.arity()).is_some_and(|p| p.contains(f))
    }

    pub fn iter(&self) -> impl Iterator<Item = &TruthTable> {
        self.parts.iter().flatten()
    }

    /// Restriction to arities `0..=max_arity`.
    pub fn truncate(&self, max_arity: usize) -> GradedSet {
        GradedSet {
            parts: self.parts.iter().take(max_arity + 1).cloned().collect(),
        }
    }
}

/// `h(x) = g(h_1(x), …, h_k(x))` on table codes of arity `m` ≤ 6.
fn compose_codes(g: &TruthTable, inner: &[u64], m: usize) -> u64 {
    (0..1usize << m).fold(0u64, |acc, x| {
        let idx = inner
            .iter()
            .enumerate()
            .fold(0usize, |i, (j, &h)| i | ((((h >> x) & 1) as usize) << j));
        acc | (u64::from(g.get(idx)) << x)
    })
}

/// The clone generated by `generators`, restricted to arities `0..=max_arity`.
///
/// The `m`-ary part is computed as the closure of the `m`-ary projections
/// under pointwise application of the generators, which is exact.
pub fn clone_generate(generators: &[TruthTable], max_arity: usize) -> Result<GradedSet> {
    if max_arity > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapabilityExceeded {
            what: "clone generation",
            requested: max_arity,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut out = GradedSet::new(max_arity);
    for m in 0..=max_arity {
        let mut set: BTreeSet<u64> = (0..m)
            .map(|j| {
                TruthTable::projection(m, j)
                    .expect("j < m")
                    .code()
                    .expect("small")
            })
            .collect();
        // Nullary generators contribute constants at every arity.
        for g in generators.iter().filter(|g| g.arity() == 0) {
            set.insert(compose_codes(g, &[], m));
        }
        let mut frontier: Vec<u64> = set.iter().copied().collect();
        while !frontier.is_empty() {
            let known: Vec<u64> = set.iter().copied().collect();
            let fresh: BTreeSet<u64> = frontier.iter().copied().collect();
            let mut next = Vec::new();
            for g in generators.iter().filter(|g| g.arity() > 0) {
                let k = g.arity();
                let mut odo = Odometer::new(k, known.len());
                let mut args = vec![0u64; k];
                while let Some(digits) = odo.advance() {
                    for (a, &d) in args.iter_mut().zip(digits) {
                        *a = known[d];
                    }
                    // semi-naive: at least one argument must be new
                    if !args.iter().any(|a| fresh.contains(a)) {
                        continue;
                    }
                    let h = compose_codes(g, &args, m);
                    if !set.contains(&h) && !next.contains(&h) {
                        next.push(h);
                    }
                }
            }
            set.extend(next.iter().copied());
            frontier = next;
        }
        for code in set {
            out.insert(TruthTable::from_code_unchecked(m, code));
        }
    }
    Ok(out)
}

/// A function of the set whose minor or composite falls outside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub function: TruthTable,
    pub inner: Vec<TruthTable>,
    pub result: TruthTable,
}

/// A minor `f ∘ σ` (both arities within range) that is missing from `k`.
pub fn minion_violation(k: &GradedSet) -> Option<ClosureWitness> {
    let max = k.max_arity();
    for f in k.iter() {
        let n = f.arity();
        for t in 0..=max {
            let mut odo = Odometer::new(n, t);
            while let Some(sigma) = odo.advance() {
                let map = MinorMap::variables(t, sigma).expect("digits below target arity");
                let h = map.apply(f).expect("source arity matches");
                if !k.contains(&h) {
                    return Some(ClosureWitness {
                        function: f.clone(),
                        inner: sigma
                            .iter()
                            .map(|&j| TruthTable::projection(t, j).expect("j < t"))
                            .collect(),
                        result: h,
                    });
                }
            }
        }
    }
    None
}

pub fn is_minion_closed(k: &GradedSet) -> bool {
    minion_violation(k).is_none()
}

/// A composite `f(g_1, …, g_n)` with `f ∈ K`, `g_i ∈ C1` missing from `K`.
pub fn right_composition_violation(k: &GradedSet, c1: Family) -> Result<Option<ClosureWitness>> {
    let max = k.max_arity();
    for m in 0..=max {
        let inner: Vec<TruthTable> = c1.enumerate(m)?;
        for f in k.iter() {
            let n = f.arity();
            let mut odo = Odometer::new(n, inner.len());
            let mut args: Vec<TruthTable> = Vec::with_capacity(n);
            while let Some(digits) = odo.advance() {
                args.clear();
                args.extend(digits.iter().map(|&d| inner[d].clone()));
                let h = if n == 0 {
                    TruthTable::constant(m, f.get(0))?
                } else {
                    f.compose(&args)?
                };
                if !k.contains(&h) {
                    return Ok(Some(ClosureWitness {
                        function: f.clone(),
                        inner: args,
                        result: h,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// A composite `c(f_1, …, f_k)` with `c ∈ C2`, `f_i ∈ K` missing from `K`.
pub fn left_composition_violation(k: &GradedSet, c2: Family) -> Result<Option<ClosureWitness>> {
    let max = k.max_arity();
    for outer_arity in 0..=max {
        for c in c2.enumerate(outer_arity)? {
            // c(f_1, …, f_k) = f_j for a projection c
            if c.projection_index().is_some() {
                continue;
            }
            for m in 0..=max {
                let part: Vec<&TruthTable> = k.part(m).iter().collect();
                let mut odo = Odometer::new(outer_arity, part.len());
                while let Some(digits) = odo.advance() {
                    let args: Vec<TruthTable> = digits.iter().map(|&d| part[d].clone()).collect();
                    let h = if outer_arity == 0 {
                        TruthTable::constant(m, c.get(0))?
                    } else {
                        c.compose(&args)?
                    };
                    if !k.contains(&h) {
                        return Ok(Some(ClosureWitness {
                            function: c,
                            inner: args,
                            result: h,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `K C1 ⊆ K` and `C2 K ⊆ K`, checked at arities up to `k.max_arity()`.
pub fn is_clonoid_stable(k: &GradedSet, c1: Family, c2: Family) -> Result<bool> {
    Ok(right_composition_violation(k, c1)?.is_none()
        && left_composition_violation(k, c2)?.is_none())
}
