use apclass::analogy::{analogical_constraint, builtin_model, AnalogyModel};
use apclass::boolfun::named::*;
use apclass::boolfun::{all_functions, Family, MinorMap, TruthTable};
use apclass::classifier::{
    aip_predict, ap_check, error_rate, leave_one_out, load_dataset, nearest_affine,
    predict_unknown, write_dataset, Dataset, ErrorMode, Outcome, Record, Strategy,
};
use apclass::galois::pol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn m(i: usize) -> &'static AnalogyModel {
    builtin_model(i).unwrap()
}

#[test]
fn error_rate_matches_enumeration_oracle() {
    // counts from a direct enumeration of all quadruples of input vectors
    let r = error_rate(&and(), m(4), m(4), ErrorMode::Exact).unwrap();
    assert_eq!((r.selections, r.total, r.violations), (36, 34, 6));
    assert_eq!(r.rate, "6/34");
    let r = error_rate(&median(), m(4), m(4), ErrorMode::Exact).unwrap();
    assert_eq!((r.selections, r.total, r.violations), (216, 204, 36));
}

#[test]
fn ap_check_agrees_with_pol_membership() {
    for i in 1..=5 {
        for j in 1..=5 {
            let c = analogical_constraint(m(i), m(j));
            for n in 0..=3 {
                let p = pol(&[c], n).unwrap();
                for f in all_functions(n).unwrap() {
                    let check = ap_check(&f, m(i), m(j));
                    assert_eq!(check.holds, p.contains(&f), "{f} R{i} R{j}");
                    if let Some(w) = &check.witness {
                        assert!(w.recheck(&f, m(i), m(j)));
                    }
                }
            }
        }
    }
}

#[test]
fn constants_are_preserved_when_target_is_reflexive() {
    for i in 1..=5 {
        for j in 1..=5 {
            for n in 0..=3 {
                for b in [false, true] {
                    let f = TruthTable::constant(n, b).unwrap();
                    assert!(ap_check(&f, m(i), m(j)).holds);
                }
            }
        }
    }
}

#[test]
fn exact_mode_is_independent_of_worker_count() {
    let f = TruthTable::from_code(4, 0x6a5c).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            (
                error_rate(&f, m(1), m(4), ErrorMode::Exact).unwrap(),
                error_rate(
                    &f,
                    m(4),
                    m(4),
                    ErrorMode::Sampled {
                        seed: 3,
                        samples: 20_000,
                    },
                )
                .unwrap(),
            )
        })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn error_rate_is_invariant_under_argument_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let perms = [[1, 0, 2], [2, 0, 1], [0, 2, 1]];
    for _ in 0..50 {
        let f = TruthTable::from_code(3, rng.gen_range(0..256)).unwrap();
        let base = error_rate(&f, m(4), m(4), ErrorMode::Exact).unwrap();
        for sigma in perms {
            let g = MinorMap::variables(3, &sigma).unwrap().apply(&f).unwrap();
            let r = error_rate(&g, m(4), m(4), ErrorMode::Exact).unwrap();
            assert_eq!(
                (r.total, r.violations),
                (base.total, base.violations),
                "{f} {sigma:?}"
            );
        }
    }
}

#[test]
fn sampled_mode_estimates_the_exact_rate() {
    let exact = error_rate(&median(), m(4), m(4), ErrorMode::Exact).unwrap();
    let sampled = error_rate(
        &median(),
        m(4),
        m(4),
        ErrorMode::Sampled {
            seed: 11,
            samples: 200_000,
        },
    )
    .unwrap();
    assert_eq!(sampled.seed, Some(11));
    assert!((sampled.rate_value - exact.rate_value).abs() < 0.01);
    let other = error_rate(
        &median(),
        m(4),
        m(4),
        ErrorMode::Sampled {
            seed: 12,
            samples: 200_000,
        },
    )
    .unwrap();
    assert_ne!(sampled.violations, other.violations);
}

#[test]
fn degenerate_reports() {
    let r = error_rate(&zero(2), m(1), m(4), ErrorMode::Exact).unwrap();
    assert!(!r.degenerate);
    let empty = AnalogyModel::new("E", apclass::relations::Relation::empty(4).unwrap()).unwrap();
    let r = error_rate(&and(), &empty, m(4), ErrorMode::Exact).unwrap();
    assert!(r.degenerate);
    assert_eq!(r.rate_value, 0.0);
    assert_eq!(r.rate, "0/0");
}

#[test]
fn nearest_affine_rescan_at_arity_four() {
    let affine = Family::Affine.enumerate(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let f = TruthTable::from_code(4, rng.gen_range(0..1 << 16)).unwrap();
        let r = nearest_affine(&f).unwrap();
        let best = affine
            .iter()
            .map(|g| f.hamming_distance(g).unwrap())
            .min()
            .unwrap();
        assert_eq!(r.distance as usize, best);
        assert_eq!(f.hamming_distance(&r.function).unwrap(), best);
        assert!(r.function.is_affine());
    }
    let big = TruthTable::from_fn(16, |x| x.count_ones() > 8).unwrap();
    assert!(nearest_affine(&big).unwrap().function.is_affine());
}

#[test]
fn affine_targets_are_predicted_without_error() {
    let f = TruthTable::affine(3, 0b011, true).unwrap();
    let ds = Dataset::from_function(3, |x| f.eval(x).unwrap()).unwrap();
    let batch = leave_one_out(&ds, m(4), m(4), Strategy::Majority).unwrap();
    assert_eq!(batch.wrong, 0);
    assert_eq!(batch.ties, 0);
    assert_eq!(batch.correct + batch.abstained, 8);
    assert!(batch.correct > 0);
}

#[test]
fn unknown_records_are_predicted() {
    // 00 : 10 :: 01 : 11 on both attributes; labels 0 : 1 :: 0 : x give x = 1
    let ds = load_dataset("x1,x2,label\n0,0,0\n1,0,1\n0,1,0\n1,1,?\n").unwrap();
    let batch = predict_unknown(&ds, m(4), m(4), Strategy::First).unwrap();
    assert_eq!(batch.entries.len(), 1);
    assert_eq!(batch.entries[0].record, 3);
    assert_eq!(batch.entries[0].outcome, "1");
    assert_eq!(batch.entries[0].first_triple, Some([0, 1, 2]));

    // labels 0 : 1 :: 1 : x have no solution in the minimal model
    let ds = load_dataset("x1,x2,label\n0,0,0\n1,0,1\n0,1,1\n1,1,?\n").unwrap();
    let p = aip_predict(&ds, &[true, true], m(4), m(4), Strategy::Majority).unwrap();
    assert_eq!(p.outcome, Outcome::Abstain);
    // the Klein model solves it with x = 0
    let p = aip_predict(&ds, &[true, true], m(5), m(5), Strategy::Majority).unwrap();
    assert_eq!(p.outcome, Outcome::Label(false));
}

#[test]
fn dataset_round_trip_preserves_records() {
    let ds = Dataset::new(
        3,
        vec![
            Record {
                attributes: vec![true, false, true],
                label: Some(false),
            },
            Record {
                attributes: vec![false, false, true],
                label: None,
            },
        ],
    )
    .unwrap();
    let again = load_dataset(&write_dataset(&ds)).unwrap();
    let mut a = again.records().to_vec();
    let mut b = ds.records().to_vec();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn reports_serialize_deterministically() {
    let r = error_rate(
        &and(),
        m(4),
        m(4),
        ErrorMode::Sampled {
            seed: 1,
            samples: 500,
        },
    )
    .unwrap();
    let a = apclass::classifier::write_report(&r);
    let b = apclass::classifier::write_report(&r);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 1);
    assert_eq!(v["source"], "R4");
    assert!(v["event_space"].as_str().unwrap().contains("conditioned"));
}
