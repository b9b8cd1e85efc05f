//! The same essay paragraph decoded under the three constraint variants.
//! Stricter variants can only lower the optimal objective.

use argjoint::synth::{gen_essay, NoiseSpec};
use argjoint::{essays, ComponentType, EssayLabels, JointWeights, Variant};

fn render(l: &EssayLabels) -> String {
    let n = l.ctype.len();
    (0..n)
        .map(|i| {
            let kind = if l.ctype[i] == ComponentType::Claim { "C" } else { "P" };
            let out: Vec<String> = (0..n).filter(|&j| l.rel[i][j]).map(|j| j.to_string()).collect();
            if out.is_empty() {
                format!("{i}{kind}")
            } else {
                format!("{i}{kind}->{}", out.join("+"))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    let inst = gen_essay("para", 6, Variant::Mod3, &NoiseSpec::new(0.8, 21)).unwrap();
    let w = JointWeights::default();
    println!("gold      {}", render(&inst.gold));
    println!("separate  {}", render(&essays::decode_separate(&inst)));
    for variant in Variant::ALL {
        let (problem, _) = essays::encode_with_variant(&inst, &w, variant);
        let mut as_variant = inst.clone();
        as_variant.variant = variant;
        match essays::decode_ilp(&as_variant, &w).unwrap() {
            Some(d) => println!(
                "{variant:<9} {}  objective {:.4}  ({} rows)",
                render(&d.labels),
                d.objective,
                problem.constraints.len()
            ),
            None => println!("{variant:<9} infeasible"),
        }
    }
    for v in [0.2, 0.5, 0.8] {
        let d = essays::decode_ilp(&inst, &w.with_v(v)).unwrap().unwrap();
        println!("v = {v}   {}", render(&d.labels));
    }
}
