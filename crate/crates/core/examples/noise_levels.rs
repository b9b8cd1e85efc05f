//! Mean macro-F1 of the three decoders as the score noise grows, over
//! several seeds. Below epsilon = 0.5 the per-site argmax is always the
//! gold class, so `separate` cannot be beaten there.
//!
//! `cargo run --release --example noise_levels -- [seeds]`

use argjoint::eval::{evaluate, paired_t_test, ArgInstance, Method};
use argjoint::synth::{essay_corpus, microtext_corpus, CorpusSpec};
use argjoint::{JointWeights, Variant};

fn row<I: ArgInstance>(label: &str, eps: f64, seeds: u64, make: impl Fn(u64) -> Vec<I>) {
    let mut mean = [0.0; 3];
    let (mut ilp, mut sep) = (Vec::new(), Vec::new());
    for seed in 0..seeds {
        let ev = evaluate(&make(seed), &Method::ALL, &JointWeights::default(), 10, seed, 4).unwrap();
        for (k, m) in Method::ALL.iter().enumerate() {
            mean[k] += ev.report(*m).unwrap().macro_f1 / seeds as f64;
        }
        ilp.extend(&ev.report(Method::Ilp).unwrap().folds);
        sep.extend(&ev.report(Method::Separate).unwrap().folds);
    }
    let t = paired_t_test(&ilp, &sep).unwrap();
    println!(
        "{label:<9} {eps:<5} {:.4}  {:.4}  {:.4}  {:+.3}  {:.4}",
        mean[0], mean[1], mean[2], t.t, t.p
    );
}

fn main() {
    let seeds: u64 = std::env::args().nth(1).map_or(5, |s| s.parse().expect("seed count"));
    println!("corpus    eps   separate mst     ilp     t       p");
    for eps in [0.4, 0.6, 0.7, 0.8, 0.9] {
        row("microtext", eps, seeds, |seed| {
            microtext_corpus(&CorpusSpec {
                count: 112,
                n_min: 5,
                n_max: 5,
                epsilon: eps,
                seed,
            })
            .unwrap()
        });
        row("essays", eps, seeds, |seed| {
            essay_corpus(
                &CorpusSpec {
                    count: 350,
                    n_min: 2,
                    n_max: 6,
                    epsilon: eps,
                    seed,
                },
                Variant::Mod1,
            )
            .unwrap()
        });
    }
}
