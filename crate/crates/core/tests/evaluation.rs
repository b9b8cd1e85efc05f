mod common;

use argjoint::eval::{
    self, f1_from_pairs, kfold_split, paired_t_test, simulate_overwrite, task_f1, ArgInstance, Method, Overwrite,
};
use argjoint::model::{read_jsonl, to_canonical_json, write_jsonl, AnyInstance};
use argjoint::synth::{self, CorpusSpec, NoiseSpec};
use argjoint::{
    check_gold_constraints, essays, microtext, EssayInstance, JointWeights, MicrotextInstance, Task, Variant,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-sided tail probability of Student's t with 4 degrees of freedom by
/// Simpson integration of the density `3/8 (1 + t^2/4)^(-5/2)`.
fn t4_two_sided(t: f64) -> f64 {
    let f = |x: f64| 0.375 * (1.0 + x * x / 4.0).powf(-2.5);
    let steps = 20_000;
    let h = t / steps as f64;
    let mut acc = f(0.0) + f(t);
    for k in 1..steps {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    1.0 - 2.0 * acc * h / 3.0
}

#[test]
fn t_test_matches_numerical_integration() {
    let a = [0.52, 0.49, 0.53, 0.50, 0.51];
    let b = [0.50; 5];
    let r = paired_t_test(&a, &b).unwrap();
    assert!((r.t - 2f64.sqrt()).abs() < 1e-9, "t = {}", r.t);
    assert_eq!(r.df, 4);
    let oracle = t4_two_sided(2f64.sqrt());
    assert!((r.p - oracle).abs() < 1e-7, "{} vs {}", r.p, oracle);
    assert!((r.p - 0.2302).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn t_test_is_antisymmetric(a in prop::collection::vec(0.0f64..1.0, 2..12), shift in -0.2f64..0.2) {
        let b: Vec<f64> = a.iter().enumerate().map(|(k, x)| x + shift + 0.01 * (k % 3) as f64).collect();
        let ab = paired_t_test(&a, &b).unwrap();
        let ba = paired_t_test(&b, &a).unwrap();
        prop_assert!((ab.t + ba.t).abs() <= 1e-9 * ab.t.abs().max(1.0) || (ab.t.is_infinite() && ab.t == -ba.t));
        prop_assert!((ab.p - ba.p).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab.p));
    }

    #[test]
    fn f1_ignores_pair_order(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..60), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = pairs.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = f1_from_pairs(Task::Fu, &pairs);
        let b = f1_from_pairs(Task::Fu, &shuffled);
        prop_assert_eq!(&a, &b);
        let mean = a.per_class_f1.iter().map(|(_, f)| f).sum::<f64>() / 3.0;
        prop_assert!((a.f1 - mean).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&a.f1));
    }

    #[test]
    fn kfold_partitions_the_ids(len in 1usize..60, k in 1usize..12, seed in any::<u64>()) {
        prop_assume!(k <= len);
        let ids: Vec<String> = (0..len).map(|i| format!("x{i:03}")).collect();
        let folds = kfold_split(&ids, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut seen: Vec<String> = folds.iter().flat_map(|f| f.test.clone()).collect();
        seen.sort();
        prop_assert_eq!(&seen, &ids);
        for f in &folds {
            prop_assert_eq!(f.train.len() + f.test.len(), len);
            prop_assert!(f.test.len() == len / k || f.test.len() == len / k + 1);
        }
    }

    #[test]
    fn synthetic_gold_is_feasible(seed in any::<u64>(), n in 3usize..=9, v in 0usize..3, eps in 0.0f64..=1.0) {
        let noise = NoiseSpec::new(eps, seed);
        let m = synth::gen_microtext("m", n, &noise).unwrap();
        prop_assert!(m.validate().is_empty());
        prop_assert!(check_gold_constraints(&AnyInstance::Microtext(m)).is_empty());
        let e = synth::gen_essay("e", n - 1, Variant::ALL[v], &noise).unwrap();
        prop_assert!(e.validate().is_empty());
        prop_assert!(check_gold_constraints(&AnyInstance::Essay(e)).is_empty());
    }

    #[test]
    fn moderate_noise_keeps_argmax_on_gold(seed in any::<u64>(), n in 3usize..=8, eps in 0.0f64..0.4999) {
        let noise = NoiseSpec::new(eps, seed);
        let m = synth::gen_microtext("m", n, &noise).unwrap();
        prop_assert_eq!(microtext::decode_separate(&m), m.gold.clone());
        let e = synth::gen_essay("e", n, Variant::Mod2, &noise).unwrap();
        prop_assert_eq!(essays::decode_separate(&e), e.gold.clone());
    }

    #[test]
    fn overwrite_touches_at_most_the_quota(seed in any::<u64>(), fraction in 0.0f64..=1.0) {
        let m = synth::gen_microtext("m", 5, &NoiseSpec::new(0.9, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = simulate_overwrite(&m, Task::At, fraction, &mut rng);
        let changed = (0..5)
            .flat_map(|i| (0..5).map(move |j| (i, j)))
            .filter(|&(i, j)| out.scores.at[i][j] != m.scores.at[i][j])
            .count();
        prop_assert!(changed <= (fraction * 20.0 - 1e-9).ceil().max(0.0) as usize);
        prop_assert_eq!(&out.scores.cc, &m.scores.cc);
        prop_assert_eq!(&out.scores.fu, &m.scores.fu);
    }

    #[test]
    fn instances_round_trip_through_json(seed in any::<u64>(), n in 3usize..=6) {
        let m = synth::gen_microtext("m", n, &NoiseSpec::new(0.3, seed)).unwrap();
        let back: MicrotextInstance = serde_json::from_str(&to_canonical_json(&m)).unwrap();
        prop_assert_eq!(&back, &m);
        let e = synth::gen_essay("e", n, Variant::Mod3, &NoiseSpec::new(0.3, seed)).unwrap();
        let back: EssayInstance = serde_json::from_str(&to_canonical_json(&e)).unwrap();
        prop_assert_eq!(&back, &e);
    }
}

#[test]
fn full_overwrite_makes_separate_perfect() {
    let corpus = synth::microtext_corpus(&CorpusSpec {
        count: 20,
        n_min: 4,
        n_max: 6,
        epsilon: 1.0,
        seed: 3,
    })
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for task in Task::MICROTEXT {
        let over: Vec<MicrotextInstance> = corpus
            .iter()
            .map(|m| simulate_overwrite(m, task, 1.0, &mut rng))
            .collect();
        let gold: Vec<_> = over.iter().map(|m| m.gold.clone()).collect();
        let pred: Vec<_> = over.iter().map(microtext::decode_separate).collect();
        assert_eq!(task_f1::<MicrotextInstance>(&gold, &pred, task).f1, 1.0, "{task}");
    }
    let untouched = simulate_overwrite(&corpus[0], Task::Fu, 0.0, &mut rng);
    assert_eq!(untouched, corpus[0]);
}

#[test]
fn jsonl_round_trip_preserves_order_and_bytes() {
    let corpus = synth::essay_corpus(
        &CorpusSpec {
            count: 7,
            n_min: 2,
            n_max: 5,
            epsilon: 0.2,
            seed: 9,
        },
        Variant::Mod3,
    )
    .unwrap();
    let mut buf = Vec::new();
    write_jsonl(&corpus, &mut buf).unwrap();
    let back: Vec<EssayInstance> = read_jsonl(&buf[..]).unwrap();
    assert_eq!(back, corpus);
    let mut again = Vec::new();
    write_jsonl(&back, &mut again).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn malformed_line_reports_its_number() {
    let text = "\n{\"id\":\"x\"}\n";
    let err = read_jsonl::<EssayInstance, _>(text.as_bytes()).unwrap_err();
    assert!(matches!(err, argjoint::Error::Json { line: 2, .. }), "{err}");
}

#[test]
fn evaluation_report_has_table_shape() {
    let corpus = synth::microtext_corpus(&CorpusSpec {
        count: 30,
        n_min: 5,
        n_max: 5,
        epsilon: 0.6,
        seed: 4,
    })
    .unwrap();
    let ev = eval::evaluate(&corpus, &Method::ALL, &JointWeights::default(), 10, 1, 2).unwrap();
    assert_eq!(ev.reports.len(), 3);
    for r in &ev.reports {
        assert_eq!(r.per_task.len(), 4);
        assert_eq!(r.folds.len(), 10);
        let mean = r.per_task.iter().map(|s| s.f1).sum::<f64>() / 4.0;
        assert!((r.macro_f1 - mean).abs() < 1e-12);
        assert_eq!(r.significance.len(), usize::from(r.method != Method::Separate));
    }
    let mut summary = Vec::new();
    ev.write_summary_csv(&mut summary).unwrap();
    let text = String::from_utf8(summary).unwrap();
    assert!(text.starts_with("method,cc,ro,fu,at,macro,"));
    assert_eq!(text.lines().count(), 4);

    let mut rows = Vec::new();
    ev.write_rows_csv(&mut rows).unwrap();
    // (4 tasks + macro) rows per fold and for the pooled summary
    assert_eq!(String::from_utf8(rows).unwrap().lines().count(), 1 + 3 * 11 * 5);
}

#[test]
fn parallel_and_serial_decodes_agree() {
    let corpus = synth::microtext_corpus(&CorpusSpec {
        count: 25,
        n_min: 3,
        n_max: 6,
        epsilon: 0.7,
        seed: 8,
    })
    .unwrap();
    let w = JointWeights::default();
    let one = eval::decode_all(&corpus, Method::Ilp, &w, 1).unwrap();
    let four = eval::decode_all(&corpus, Method::Ilp, &w, 4).unwrap();
    assert_eq!(one, four);
}

#[test]
fn curves_have_one_row_per_task_and_point() {
    let corpus = synth::essay_corpus(
        &CorpusSpec {
            count: 12,
            n_min: 2,
            n_max: 5,
            epsilon: 0.6,
            seed: 2,
        },
        Variant::Mod1,
    )
    .unwrap();
    let w = JointWeights::default();
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let sim = eval::simulate(&corpus, Overwrite::Task(Task::Rel), &grid, Method::Ilp, &w, 5, 1).unwrap();
    assert_eq!(sim.len(), grid.len() * 2);
    let sweep = eval::weight_sweep(&corpus, Task::Comp, &grid, Method::Ilp, &w, 1).unwrap();
    assert_eq!(sweep.len(), grid.len() * 2);
    assert_eq!(sweep, eval::weight_sweep(&corpus, Task::Comp, &grid, Method::Ilp, &w, 3).unwrap());
    assert!(eval::simulate(&corpus, Overwrite::Task(Task::At), &grid, Method::Ilp, &w, 5, 1).is_err());
    assert!(eval::weight_sweep(&corpus, Task::Comp, &[1.5], Method::Ilp, &w, 1).is_err());
}

#[test]
fn all_wrong_scores_zero_on_every_task() {
    let m = synth::gen_microtext("m", 5, &NoiseSpec::new(0.2, 1)).unwrap();
    let wrong = m.all_wrong();
    for task in Task::MICROTEXT {
        let s = task_f1::<MicrotextInstance>(std::slice::from_ref(&m.gold), std::slice::from_ref(&wrong), task);
        assert_eq!(s.f1, 0.0, "{task}");
    }
}
