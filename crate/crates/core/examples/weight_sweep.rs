//! Sweep the combination weights: each microtext task in turn gets weight
//! x and the others share the rest; for essays x is the balance v.

use argjoint::eval::{weight_sweep, Method, Task};
use argjoint::synth::{essay_corpus, microtext_corpus, CorpusSpec};
use argjoint::{JointWeights, Variant};

fn main() {
    let spec = CorpusSpec {
        count: 80,
        n_min: 4,
        n_max: 6,
        epsilon: 0.8,
        seed: 12,
    };
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let w = JointWeights::default();

    let mt = microtext_corpus(&spec).unwrap();
    for target in Task::MICROTEXT {
        let curve = weight_sweep(&mt, target, &grid, Method::Ilp, &w, 4).unwrap();
        let own: Vec<String> = curve
            .iter()
            .filter(|p| p.task == target)
            .map(|p| format!("{:.3}", p.f1))
            .collect();
        println!("microtext {target}: {}", own.join(" "));
    }

    let es = essay_corpus(&spec, Variant::Mod2).unwrap();
    let curve = weight_sweep(&es, Task::Comp, &grid, Method::Ilp, &w, 4).unwrap();
    for task in Task::ESSAYS {
        let row: Vec<String> = curve
            .iter()
            .filter(|p| p.task == task)
            .map(|p| format!("{:.3}", p.f1))
            .collect();
        println!("essays v-sweep {task}: {}", row.join(" "));
    }
}
