//! Analogical inference: AP checks with witnesses, error rates, distance to
//! the affine functions and label prediction over datasets.

mod dataset;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::analogy::{analogical_constraint, format_bits, AnalogyModel};
use crate::boolfun::{TruthTable, MAX_ARITY};
use crate::error::{Error, Result};
use crate::galois::{apply_to_columns, find_violation, Violation, DEFAULT_ENUMERATION_CAP};

pub use dataset::{load_dataset, write_dataset, Dataset, Record};

/// Description of the event space used by [`error_rate`], embedded in reports.
pub const EVENT_SPACE: &str =
    "uniform over componentwise-source quadruple selections, conditioned on target solvability of the image triple";

/// Largest arity accepted by [`nearest_affine`].
pub const NEAREST_AFFINE_CAP: usize = 20;

/// Selections per work item in exact mode.
const EXACT_BLOCK: u64 = 1 << 10;
/// Samples per independently seeded stream in sampled mode.
const SAMPLE_BLOCK: u64 = 1 << 10;

fn bits<S: Serializer>(v: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_bits(v))
}

/// Input vectors `a, b, c, d` (componentwise in the source model) whose
/// image triple is solvable in the target while `f(d)` is not a solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApWitness {
    #[serde(serialize_with = "bits")]
    pub a: Vec<bool>,
    #[serde(serialize_with = "bits")]
    pub b: Vec<bool>,
    #[serde(serialize_with = "bits")]
    pub c: Vec<bool>,
    #[serde(serialize_with = "bits")]
    pub d: Vec<bool>,
    /// `(f(a), f(b), f(c), f(d))`.
    #[serde(serialize_with = "bits")]
    pub image: Vec<bool>,
}

impl ApWitness {
    /// Builds the witness from 4-tuple columns (one per argument of `f`).
    pub fn from_columns(f: &TruthTable, columns: &[u32]) -> Self {
        let row = |r: u32| -> Vec<bool> { columns.iter().map(|&t| (t >> r) & 1 == 1).collect() };
        let image = apply_to_columns(f, columns, 4);
        ApWitness {
            a: row(0),
            b: row(1),
            c: row(2),
            d: row(3),
            image: (0..4).map(|r| (image >> r) & 1 == 1).collect(),
        }
    }

    pub fn from_violation(f: &TruthTable, v: &Violation) -> Self {
        Self::from_columns(f, &v.columns)
    }

    /// Independent re-check against the models and the function.
    pub fn recheck(&self, f: &TruthTable, src: &AnalogyModel, dst: &AnalogyModel) -> bool {
        let n = f.arity();
        if [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .any(|v| v.len() != n)
        {
            return false;
        }
        let in_src = (0..n).all(|j| src.holds(self.a[j], self.b[j], self.c[j], self.d[j]));
        let eval = |v: &[bool]| f.eval(v).expect("length checked");
        let (fa, fb, fc, fd) = (eval(&self.a), eval(&self.b), eval(&self.c), eval(&self.d));
        let sols = dst.solutions(fa, fb, fc);
        in_src && self.image == [fa, fb, fc, fd] && !sols.is_empty() && !sols.contains(fd)
    }
}

impl fmt::Display for ApWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} b={} c={} d={} ↦ {}",
            format_bits(&self.a),
            format_bits(&self.b),
            format_bits(&self.c),
            format_bits(&self.d),
            format_bits(&self.image)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApCheck {
    pub function: String,
    pub source: String,
    pub target: String,
    pub holds: bool,
    pub witness: Option<ApWitness>,
}

/// Whether `f` is analogy-preserving from `src` to `dst`, with the first
/// violating quadruple when it is not.
pub fn ap_check(f: &TruthTable, src: &AnalogyModel, dst: &AnalogyModel) -> ApCheck {
    let witness = find_violation(f, &analogical_constraint(src, dst))
        .map(|v| ApWitness::from_violation(f, &v));
    ApCheck {
        function: f.to_string(),
        source: src.name().to_string(),
        target: dst.name().to_string(),
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    /// Every selection of source columns (arity ≤ 4).
    Exact,
    /// `samples` selections drawn uniformly with the given seed.
    Sampled { seed: u64, samples: u64 },
}

/// Outcome of [`error_rate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub function: String,
    pub source: String,
    pub target: String,
    pub mode: &'static str,
    pub event_space: &'static str,
    /// Selections examined, solvable or not.
    pub selections: u64,
    /// Selections whose image triple is solvable in the target.
    pub total: u64,
    pub violations: u64,
    /// `violations/total`, unreduced.
    pub rate: String,
    pub rate_value: f64,
    /// No solvable selection was seen; the rate is reported as 0.
    pub degenerate: bool,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub nearest_affine: String,
    pub distance: u64,
    pub epsilon: f64,
    /// First violation in enumeration (or sampling) order.
    pub witness: Option<ApWitness>,
}

impl ErrorReport {
    /// `rate ≤ num/den`, compared exactly.
    pub fn rate_at_most(&self, num: u64, den: u64) -> bool {
        u128::from(self.violations) * u128::from(den) <= u128::from(num) * u128::from(self.total)
    }
}

#[derive(Default)]
struct Tally {
    selections: u64,
    solvable: u64,
    errors: u64,
    first_error: Option<(u64, Vec<u32>)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.selections += other.selections;
        self.solvable += other.solvable;
        self.errors += other.errors;
        self.first_error = match (self.first_error, other.first_error) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

struct Evaluator<'a> {
    f: &'a TruthTable,
    dst: &'a AnalogyModel,
    tuples: Vec<u32>,
}

impl Evaluator<'_> {
    /// Records one selection given as indices into the source tuples.
    fn visit(&self, order: u64, digits: &[usize], tally: &mut Tally) {
        let mut points = [0usize; 4];
        for (j, &d) in digits.iter().enumerate() {
            let t = self.tuples[d];
            for (r, p) in points.iter_mut().enumerate() {
                *p |= (((t >> r) & 1) as usize) << j;
            }
        }
        let [fa, fb, fc, fd] = points.map(|p| self.f.get(p));
        tally.selections += 1;
        let sols = self.dst.solutions(fa, fb, fc);
        if sols.is_empty() {
            return;
        }
        tally.solvable += 1;
        if !sols.contains(fd) {
            tally.errors += 1;
            if tally.first_error.is_none() {
                let cols = digits.iter().map(|&d| self.tuples[d]).collect();
                tally.first_error = Some((order, cols));
            }
        }
    }
}

/// Error rate of analogical inference through `f` from `src` to `dst`.
///
/// A selection is a choice of one source tuple per argument of `f`, read as
/// the columns of the quadruple `(a, b, c, d)`. It counts when
/// `(f(a), f(b), f(c))` is solvable in `dst` and is an error when `f(d)` is
/// not among the solutions.
pub fn error_rate(
    f: &TruthTable,
    src: &AnalogyModel,
    dst: &AnalogyModel,
    mode: ErrorMode,
) -> Result<ErrorReport> {
    let n = f.arity();
    let eval = Evaluator {
        f,
        dst,
        tuples: src.relation().iter().collect(),
    };
    let k = eval.tuples.len() as u64;
    let tally = match mode {
        ErrorMode::Exact => {
            if n > DEFAULT_ENUMERATION_CAP {
                return Err(Error::CapabilityExceeded {
                    what: "exact error rate",
                    requested: n,
                    cap: DEFAULT_ENUMERATION_CAP,
                });
            }
            let space = k.pow(n as u32);
            let blocks = space.div_ceil(EXACT_BLOCK);
            (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let mut tally = Tally::default();
                    let mut digits = vec![0usize; n];
                    for s in b * EXACT_BLOCK..((b + 1) * EXACT_BLOCK).min(space) {
                        let mut rest = s;
                        for d in digits.iter_mut() {
                            *d = (rest % k) as usize;
                            rest /= k;
                        }
                        eval.visit(s, &digits, &mut tally);
                    }
                    tally
                })
                .reduce(Tally::default, Tally::merge)
        }
        ErrorMode::Sampled { seed, samples } => {
            if k == 0 {
                Tally::default()
            } else {
                let blocks = samples.div_ceil(SAMPLE_BLOCK);
                (0..blocks)
                    .into_par_iter()
                    .map(|b| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(b);
                        let mut tally = Tally::default();
                        let mut digits = vec![0usize; n];
                        for s in b * SAMPLE_BLOCK..((b + 1) * SAMPLE_BLOCK).min(samples) {
                            for d in digits.iter_mut() {
                                *d = rng.gen_range(0..k as usize);
                            }
                            eval.visit(s, &digits, &mut tally);
                        }
                        tally
                    })
                    .reduce(Tally::default, Tally::merge)
            }
        }
    };
    let nearest = nearest_affine(f).ok();
    let (seed, samples, mode_name) = match mode {
        ErrorMode::Exact => (None, None, "exact"),
        ErrorMode::Sampled { seed, samples } => (Some(seed), Some(samples), "sampled"),
    };
    Ok(ErrorReport {
        function: f.to_string(),
        source: src.name().to_string(),
        target: dst.name().to_string(),
        mode: mode_name,
        event_space: EVENT_SPACE,
        selections: tally.selections,
        total: tally.solvable,
        violations: tally.errors,
        rate: format!("{}/{}", tally.errors, tally.solvable),
        rate_value: if tally.solvable == 0 {
            0.0
        } else {
            tally.errors as f64 / tally.solvable as f64
        },
        degenerate: tally.solvable == 0,
        seed,
        samples,
        nearest_affine: nearest
            .as_ref()
            .map_or_else(String::new, |a| a.function.to_string()),
        distance: nearest.as_ref().map_or(0, |a| a.distance),
        epsilon: nearest.as_ref().map_or(f64::NAN, |a| a.epsilon),
        witness: tally
            .first_error
            .map(|(_, cols)| ApWitness::from_columns(f, &cols)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearestAffine {
    pub function: TruthTable,
    pub distance: u64,
    /// `distance / 2^n`.
    pub epsilon: f64,
}

/// The affine function closest to `f` in Hamming distance, least table first
/// among ties.
pub fn nearest_affine(f: &TruthTable) -> Result<NearestAffine> {
    let n = f.arity();
    if n > NEAREST_AFFINE_CAP {
        return Err(Error::CapabilityExceeded {
            what: "nearest affine search",
            requested: n,
            cap: NEAREST_AFFINE_CAP,
        });
    }
    let size = 1usize << n;
    let mut w: Vec<i64> = f.iter().map(|b| if b { -1 } else { 1 }).collect();
    let mut h = 1;
    while h < size {
        for block in w.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
    // distance to a·x is (2^n - W(a))/2, to a·x + 1 it is (2^n + W(a))/2
    let full = size as i64;
    let best = w
        .iter()
        .map(|&v| (full - v.abs()) / 2)
        .min()
        .expect("nonempty");
    let mut candidates: Vec<(u32, bool)> = Vec::new();
    for (mask, &v) in w.iter().enumerate() {
        if (full - v) / 2 == best {
            candidates.push((mask as u32, false));
        }
        if (full + v) / 2 == best {
            candidates.push((mask as u32, true));
        }
    }
    let value = |(mask, c): (u32, bool), x: usize| ((mask & x as u32).count_ones() % 2 == 1) ^ c;
    for x in (0..size).rev() {
        if candidates.len() == 1 {
            break;
        }
        if candidates.iter().any(|&cand| !value(cand, x)) {
            candidates.retain(|&cand| !value(cand, x));
        }
    }
    let (mask, c) = candidates[0];
    debug_assert!(n <= MAX_ARITY);
    Ok(NearestAffine {
        function: TruthTable::affine(n, mask, c)?,
        distance: best as u64,
        epsilon: best as f64 / size as f64,
    })
}

/// How [`aip_predict`] turns applicable triples into a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// The least solution of the first applicable triple in scan order.
    First,
    /// Plurality over all (triple, solution) votes.
    Majority,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "first" => Ok(Strategy::First),
            "majority" => Ok(Strategy::Majority),
            other => Err(format!(
                "unknown strategy {other:?} (expected first or majority)"
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::First => "first",
            Strategy::Majority => "majority",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Label(bool),
    /// No known triple is in proportion with the query and solvable on labels.
    Abstain,
}

/// A predicted label and how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    #[serde(serialize_with = "bits")]
    pub query: Vec<bool>,
    pub outcome: Outcome,
    /// Triples in proportion with the query whose label equation is solvable.
    pub applicable_triples: u64,
    /// Votes for 0 and for 1.
    pub votes: [u64; 2],
    /// Record indices (into the dataset) of the first applicable triple.
    pub first_triple: Option<[usize; 3]>,
}

/// Scans ordered triples `(a, b, c)` of known records, with repetition, such
/// that `a : b :: c : query` holds in `src` on every attribute and the label
/// equation is solvable in `dst`. Triples are ordered by `a`, then `b`, then
/// `c`, each in dataset order.
pub fn aip_predict(
    ds: &Dataset,
    query: &[bool],
    src: &AnalogyModel,
    dst: &AnalogyModel,
    strategy: Strategy,
) -> Result<Prediction> {
    let known: Vec<usize> = (0..ds.records().len())
        .filter(|&i| ds.records()[i].known())
        .collect();
    aip_predict_among(ds, &known, query, src, dst, strategy)
}

fn aip_predict_among(
    ds: &Dataset,
    known: &[usize],
    query: &[bool],
    src: &AnalogyModel,
    dst: &AnalogyModel,
    strategy: Strategy,
) -> Result<Prediction> {
    if query.len() != ds.dimension() {
        return Err(Error::LengthMismatch(format!(
            "query has {} attributes, dataset dimension is {}",
            query.len(),
            ds.dimension()
        )));
    }
    let recs = ds.records();
    let mut votes = [0u64; 2];
    let mut applicable = 0u64;
    let mut first: Option<([usize; 3], bool)> = None;
    for &i in known {
        let a = &recs[i];
        for &j in known {
            let b = &recs[j];
            for &k in known {
                let c = &recs[k];
                let holds = (0..query.len()).all(|t| {
                    src.holds(a.attributes[t], b.attributes[t], c.attributes[t], query[t])
                });
                if !holds {
                    continue;
                }
                let (la, lb, lc) = (
                    a.label.expect("known"),
                    b.label.expect("known"),
                    c.label.expect("known"),
                );
                let sols = dst.solutions(la, lb, lc);
                let Some(least) = sols.iter().next() else {
                    continue;
                };
                applicable += 1;
                for s in sols.iter() {
                    votes[usize::from(s)] += 1;
                }
                if first.is_none() {
                    first = Some(([i, j, k], least));
                }
            }
        }
    }
    let outcome = match (strategy, first) {
        (_, None) => Outcome::Abstain,
        (Strategy::First, Some((_, label))) => Outcome::Label(label),
        (Strategy::Majority, Some(_)) => match votes[0].cmp(&votes[1]) {
            std::cmp::Ordering::Greater => Outcome::Label(false),
            std::cmp::Ordering::Less => Outcome::Label(true),
            std::cmp::Ordering::Equal => {
                return Err(Error::MajorityTie {
                    zeros: votes[0],
                    ones: votes[1],
                })
            }
        },
    };
    Ok(Prediction {
        query: query.to_vec(),
        outcome,
        applicable_triples: applicable,
        votes,
        first_triple: first.map(|(t, _)| t),
    })
}

/// One record of a prediction batch; ties are recorded rather than raised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchEntry {
    /// Index of the record in the dataset.
    pub record: usize,
    #[serde(serialize_with = "bits")]
    pub query: Vec<bool>,
    /// `0`, `1`, `abstain` or `tie`.
    pub outcome: String,
    /// The recorded label, for leave-one-out runs.
    pub expected: Option<bool>,
    pub applicable_triples: u64,
    pub votes: [u64; 2],
    pub first_triple: Option<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionBatch {
    pub source: String,
    pub target: String,
    pub strategy: Strategy,
    /// `unknown` (predict unlabelled records) or `leave-one-out`.
    pub mode: &'static str,
    pub entries: Vec<BatchEntry>,
    pub correct: u64,
    pub wrong: u64,
    pub abstained: u64,
    pub ties: u64,
}

fn batch_entry(
    ds: &Dataset,
    record: usize,
    known: &[usize],
    src: &AnalogyModel,
    dst: &AnalogyModel,
    strategy: Strategy,
    expected: Option<bool>,
) -> Result<BatchEntry> {
    let query = ds.records()[record].attributes.clone();
    let (outcome, applicable, votes, first) =
        match aip_predict_among(ds, known, &query, src, dst, strategy) {
            Ok(p) => {
                let o = match p.outcome {
                    Outcome::Label(b) => u8::from(b).to_string(),
                    Outcome::Abstain => "abstain".to_string(),
                };
                (o, p.applicable_triples, p.votes, p.first_triple)
            }
            Err(Error::MajorityTie { zeros, ones }) => ("tie".to_string(), 0, [zeros, ones], None),
            Err(e) => return Err(e),
        };
    Ok(BatchEntry {
        record,
        query,
        outcome,
        expected,
        applicable_triples: applicable,
        votes,
        first_triple: first,
    })
}

fn finish_batch(
    src: &AnalogyModel,
    dst: &AnalogyModel,
    strategy: Strategy,
    mode: &'static str,
    entries: Vec<BatchEntry>,
) -> PredictionBatch {
    let mut batch = PredictionBatch {
        source: src.name().to_string(),
        target: dst.name().to_string(),
        strategy,
        mode,
        entries,
        correct: 0,
        wrong: 0,
        abstained: 0,
        ties: 0,
    };
    for e in &batch.entries {
        match (e.outcome.as_str(), e.expected) {
            ("abstain", _) => batch.abstained += 1,
            ("tie", _) => batch.ties += 1,
            (o, Some(x)) if o == u8::from(x).to_string() => batch.correct += 1,
            (_, Some(_)) => batch.wrong += 1,
            _ => {}
        }
    }
    batch
}

/// Predicts every record whose label is unknown from the known records.
pub fn predict_unknown(
    ds: &Dataset,
    src: &AnalogyModel,
    dst: &AnalogyModel,
    strategy: Strategy,
) -> Result<PredictionBatch> {
    let known: Vec<usize> = (0..ds.records().len())
        .filter(|&i| ds.records()[i].known())
        .collect();
    let entries = (0..ds.records().len())
        .filter(|&i| !ds.records()[i].known())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|i| batch_entry(ds, i, &known, src, dst, strategy, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_batch(src, dst, strategy, "unknown", entries))
}

/// Predicts each known record from all other known records.
pub fn leave_one_out(
    ds: &Dataset,
    src: &AnalogyModel,
    dst: &AnalogyModel,
    strategy: Strategy,
) -> Result<PredictionBatch> {
    let known: Vec<usize> = (0..ds.records().len())
        .filter(|&i| ds.records()[i].known())
        .collect();
    let entries = known
        .par_iter()
        .map(|&i| {
            let rest: Vec<usize> = known.iter().copied().filter(|&j| j != i).collect();
            batch_entry(ds, i, &rest, src, dst, strategy, ds.records()[i].label)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_batch(src, dst, strategy, "leave-one-out", entries))
}

/// Deterministic JSON rendering of any report.
pub fn write_report<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}
