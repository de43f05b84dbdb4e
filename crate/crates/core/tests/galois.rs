use std::collections::{BTreeSet, HashSet};

use apclass::analogy::{analogical_constraint, builtin, builtin_model};
use apclass::boolfun::{all_functions, Family, TruthTable};
use apclass::galois::{
    clone_generate, find_violation_all, inv, is_clonoid_stable, is_minion_closed, pol, preserves,
    GradedSet,
};
use apclass::relations::{Constraint, Relation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ap(i: usize, j: usize) -> Constraint {
    analogical_constraint(builtin_model(i).unwrap(), builtin_model(j).unwrap())
}

fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (1..=5).flat_map(|i| (1..=5).map(move |j| (i, j)))
}

/// Analogy preservation checked straight from its definition: for all
/// vectors a, b, c, d lying componentwise in `r`, if `(f(a), f(b), f(c), x)`
/// is in `s` for some `x`, then `(f(a), f(b), f(c), f(d))` is in `s`.
fn preserves_by_definition(f: &TruthTable, r: &Relation, s: &Relation) -> bool {
    let n = f.arity();
    let size = 1usize << n;
    let bit = |t: usize, j: usize| (t >> j) & 1;
    let in_s =
        |q: [bool; 4]| s.contains(q.iter().enumerate().map(|(i, &b)| u32::from(b) << i).sum());
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                for d in 0..size {
                    let componentwise = (0..n).all(|j| {
                        let code = bit(a, j) | bit(b, j) << 1 | bit(c, j) << 2 | bit(d, j) << 3;
                        r.contains(code as u32)
                    });
                    if !componentwise {
                        continue;
                    }
                    let (fa, fb, fc, fd) = (f.get(a), f.get(b), f.get(c), f.get(d));
                    let solvable = [false, true].iter().any(|&x| in_s([fa, fb, fc, x]));
                    if solvable && !in_s([fa, fb, fc, fd]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn definition_agrees_with_extended_preservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let sampled: Vec<TruthTable> = (0..1000)
        .map(|_| TruthTable::from_code(3, rng.gen_range(0..256)).unwrap())
        .collect();
    for (i, j) in pairs() {
        let (r, s) = (builtin(i), builtin(j));
        let c = Constraint::new(r, s.extend_consequent().unwrap()).unwrap();
        for n in 0..=2 {
            for f in all_functions(n).unwrap() {
                assert_eq!(
                    preserves(&f, &c),
                    preserves_by_definition(&f, &r, &s),
                    "{f} R{i} R{j}"
                );
            }
        }
        for f in &sampled {
            assert_eq!(
                preserves(f, &c),
                preserves_by_definition(f, &r, &s),
                "{f} R{i} R{j}"
            );
        }
    }
}

#[test]
fn duality() {
    for (i, j) in pairs() {
        let c = ap(i, j);
        let negated = [c.negate()];
        for n in 1..=3 {
            let direct = pol(&[c], n).unwrap().member_set();
            let dual: BTreeSet<TruthTable> = pol(&negated, n)
                .unwrap()
                .members()
                .iter()
                .map(TruthTable::dual)
                .collect();
            assert_eq!(direct, dual, "R{i} R{j} arity {n}");
        }
    }
}

#[test]
fn pol_sets_are_minion_closed_and_stable_under_i() {
    for (i, j) in pairs() {
        let k = GradedSet::from_pol(&[ap(i, j)], 3).unwrap();
        assert!(is_minion_closed(&k), "R{i} R{j}");
        assert!(
            is_clonoid_stable(&k, Family::ProjectionsAndConstants, Family::Projections).unwrap(),
            "R{i} R{j}"
        );
    }
}

#[test]
fn every_witness_rechecks() {
    for (i, j) in pairs() {
        let cs = [ap(i, j)];
        let p = pol(&cs, 3).unwrap();
        for (f, v) in p.witnesses() {
            assert!(v.recheck(f, &cs));
            assert_eq!(find_violation_all(f, &cs).as_ref(), Some(v));
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let p = pol(&[ap(4, 2)], 4).unwrap();
            (
                p.members().to_vec(),
                p.witnesses().clone(),
                inv(&[apclass::boolfun::named::xor()], 3).unwrap(),
            )
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn closed_sets_match_generated_clones() {
    use apclass::boolfun::named::*;
    let omega = clone_generate(&[zero(1), one(1), negation()], 3).unwrap();
    let p11 = GradedSet::from_pol(&[ap(1, 1)], 3).unwrap();
    for n in 1..=3 {
        assert_eq!(omega.part(n), p11.part(n));
    }
    let sheffer = clone_generate(&[nand()], 2).unwrap();
    assert_eq!(sheffer.part(2).len(), 16);
    let affine = clone_generate(&[xor(), one(1)], 3).unwrap();
    let p44 = GradedSet::from_pol(&[ap(4, 4)], 3).unwrap();
    for n in 1..=3 {
        assert_eq!(affine.part(n), p44.part(n));
    }
}

#[test]
fn klein_model_is_invariant_under_affine_generators() {
    use apclass::boolfun::named::*;
    let invariants = inv(&[xor(), zero(1), one(1)], 4).unwrap();
    assert!(invariants.contains(&builtin(5)));
    assert!(!invariants.contains(&builtin(4)));
}

fn random_binary_set(rng: &mut ChaCha8Rng, size: usize) -> Vec<TruthTable> {
    let mut codes: Vec<u64> = (0..16).collect();
    codes.shuffle(rng);
    codes[..size]
        .iter()
        .map(|&c| TruthTable::from_code(2, c).unwrap())
        .collect()
}

#[test]
fn inv_is_antitone() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..8 {
        let big = random_binary_set(&mut rng, 3);
        let small = &big[..rng.gen_range(0..=2)];
        let inv_big: HashSet<Relation> = inv(&big, 4).unwrap().into_iter().collect();
        let inv_small: HashSet<Relation> = inv(small, 4).unwrap().into_iter().collect();
        assert!(inv_big.is_subset(&inv_small));
    }
}

/// The binary part of `Pol Inv F` (relations of arity 4 = 2^2) is both a
/// superset of `F` and exactly the binary part of the generated clone.
#[test]
fn pol_inv_is_extensive_and_equals_the_clone() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let size = rng.gen_range(1..=3);
        let f = random_binary_set(&mut rng, size);
        let constraints: Vec<Constraint> = inv(&f, 4)
            .unwrap()
            .into_iter()
            .map(Constraint::plain)
            .collect();
        let closed = pol(&constraints, 2).unwrap().member_set();
        for g in &f {
            assert!(closed.contains(g), "{g}");
        }
        let clone = clone_generate(&f, 2).unwrap();
        assert_eq!(&closed, clone.part(2));
    }
}
