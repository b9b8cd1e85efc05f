//! Build a small 0-1 program by hand, solve it, and check the answer
//! against exhaustive enumeration.

use argjoint::{brute_force, solve, IlpProblem, Sense};

fn main() {
    // pick at most two of four items; items 0 and 1 conflict
    let mut p = IlpProblem::new(4);
    p.objective = vec![0.9, 0.8, 0.5, -0.1];
    p.add("budget", vec![(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)], Sense::Le, 2.0);
    p.add("conflict", vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0);
    p.add("needs-3-for-2", vec![(2, 1.0), (3, -1.0)], Sense::Le, 0.0);

    print!("{}", p.to_lp_string());

    let s = solve(&p).expect("well-formed problem");
    let b = brute_force(&p).expect("small problem");
    println!("status      {:?}", s.status);
    println!("assignment  {:?}", s.assignment.as_deref().unwrap());
    println!("objective   {:.3} (brute force {:.3})", s.objective_value.unwrap(), b.objective_value.unwrap());
    println!("nodes       {}", s.nodes_explored);

    p.add("forbid-0", vec![(0, 1.0)], Sense::Eq, 0.0);
    p.add("forbid-1", vec![(1, 1.0)], Sense::Eq, 0.0);
    p.add("force-two", vec![(2, 1.0), (3, 1.0)], Sense::Ge, 3.0);
    println!("with contradictory rows: {:?}", solve(&p).unwrap().status);
}
