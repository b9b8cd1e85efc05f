//! Decode one noisy microtext with all three methods and compare them
//! with the gold structure.
//!
//! `cargo run --example decode_microtext -- [epsilon] [seed]`

use argjoint::eval::{ArgInstance, Method};
use argjoint::synth::{gen_microtext, NoiseSpec};
use argjoint::{microtext, JointWeights, MicrotextLabels};

fn show(name: &str, l: &MicrotextLabels) {
    let n = l.cc.len();
    let heads: Vec<String> = (0..n)
        .map(|i| match (0..n).find(|&j| l.at[i][j]) {
            Some(j) => format!("{i}->{j}"),
            None => format!("{i}:root"),
        })
        .collect();
    let roles: String = l.ro.iter().map(|&r| if r { 'P' } else { 'O' }).collect();
    let fus: Vec<String> = l.fu.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
    println!("{name:<9} roles {roles}  attach {}  fu {}", heads.join(" "), fus.join(","));
}

fn main() {
    let mut args = std::env::args().skip(1);
    let eps: f64 = args.next().map_or(0.7, |s| s.parse().expect("epsilon"));
    let seed: u64 = args.next().map_or(3, |s| s.parse().expect("seed"));

    let inst = gen_microtext("demo", 5, &NoiseSpec::new(eps, seed)).unwrap();
    let w = JointWeights::default();
    show("gold", &inst.gold);
    for method in Method::ALL {
        let d = inst.decode(method, &w).unwrap().expect("five segments are always feasible");
        let broken = microtext::violated_constraints(&d.labels);
        show(method.name(), &d.labels);
        println!("          objective {:.4}, constraints broken: {:?}", d.objective, broken);
    }
    let (problem, vars) = microtext::encode(&inst, &w);
    println!(
        "ILP size: {} variables ({} auxiliary), {} constraints",
        problem.n_vars,
        vars.n_vars() - 5 * inst.n - inst.n * (inst.n - 1),
        problem.constraints.len()
    );
}
