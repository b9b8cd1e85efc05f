//! Replace a growing share of one task's scores with gold and watch every
//! task's F1 under joint decoding. Prints the curve as CSV.
//!
//! `cargo run --release --example overwrite_simulation -- [task]`

use argjoint::eval::{simulate, write_curve_csv, Method, Overwrite, Task};
use argjoint::synth::{microtext_corpus, CorpusSpec};
use argjoint::JointWeights;
use clap::ValueEnum;

fn main() {
    let task = std::env::args()
        .nth(1)
        .map_or(Task::Ro, |s| Task::from_str(&s, true).expect("task name"));
    let corpus = microtext_corpus(&CorpusSpec {
        count: 112,
        n_min: 5,
        n_max: 5,
        epsilon: 0.8,
        seed: 5,
    })
    .unwrap();
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let curve = simulate(
        &corpus,
        Overwrite::Task(task),
        &grid,
        Method::Ilp,
        &JointWeights::default(),
        5,
        4,
    )
    .unwrap();
    write_curve_csv(&curve, "fraction", std::io::stdout()).unwrap();
}
