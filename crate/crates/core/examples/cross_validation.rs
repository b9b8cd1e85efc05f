//! k-fold evaluation of the three decoders on a synthetic microtext corpus,
//! with paired t-tests of the joint methods against `separate`.
//!
//! `cargo run --release --example cross_validation -- [epsilon]`

use argjoint::eval::{evaluate, Method};
use argjoint::synth::{microtext_corpus, CorpusSpec};
use argjoint::JointWeights;

fn main() {
    let eps: f64 = std::env::args().nth(1).map_or(0.7, |s| s.parse().expect("epsilon"));
    let corpus = microtext_corpus(&CorpusSpec {
        count: 112,
        n_min: 5,
        n_max: 5,
        epsilon: eps,
        seed: 1,
    })
    .unwrap();
    let ev = evaluate(&corpus, &Method::ALL, &JointWeights::default(), 10, 7, 4).unwrap();
    ev.write_summary_csv(std::io::stdout()).unwrap();
    for r in &ev.reports {
        for s in &r.significance {
            println!("{} vs {}: t = {:.3}, p = {:.4}", r.method, s.baseline, s.t, s.p);
        }
        let positive: Vec<String> = r
            .per_task
            .iter()
            .filter_map(|s| s.positive_f1.map(|f| format!("{}={f:.3}", s.task)))
            .collect();
        println!("{} positive-class F1: {}", r.method, positive.join(" "));
    }
}
