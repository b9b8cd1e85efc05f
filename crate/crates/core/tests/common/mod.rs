//! Shared generators and exhaustive oracles for the integration tests. The
//! oracles re-derive constraints and objectives from label space directly,
//! without touching the library's encoders or checkers.
#![allow(dead_code)]

use argjoint::mst::{EdgeTag, EvidenceGraph};
use argjoint::{
    ComponentType, EssayInstance, EssayLabels, EssayScores, Function, IlpProblem, JointWeights, MicrotextInstance,
    MicrotextLabels, MicrotextScores, Sense, Variant,
};
use rand::Rng;

pub const TOL: f64 = 1e-9;

/// Random problem with small integer constraint coefficients and real
/// objective coefficients, some of them zero. Most constraints are made to
/// hold at a hidden random assignment so that many problems are feasible.
pub fn random_problem(rng: &mut impl Rng, max_vars: usize, max_cons: usize) -> IlpProblem {
    let n = rng.random_range(1..=max_vars);
    let hidden: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let planted = rng.random_bool(0.8);
    let mut p = IlpProblem::new(n);
    for c in p.objective.iter_mut() {
        *c = if rng.random_bool(0.1) { 0.0 } else { rng.random_range(-1.0..1.0) };
    }
    let m = rng.random_range(0..=max_cons);
    for k in 0..m {
        let width = rng.random_range(1..=n.min(6));
        let vars = rand::seq::index::sample(rng, n, width);
        let terms: Vec<(usize, f64)> = vars
            .into_iter()
            .map(|v| {
                let mut coef = rng.random_range(-3..=3);
                if coef == 0 {
                    coef = 1;
                }
                (v, f64::from(coef))
            })
            .collect();
        let sense = match rng.random_range(0..3) {
            0 => Sense::Le,
            1 => Sense::Eq,
            _ => Sense::Ge,
        };
        let rhs = if planted && rng.random_bool(0.9) {
            let at_hidden: f64 = terms.iter().filter(|(v, _)| hidden[*v]).map(|(_, a)| a).sum();
            let slack = f64::from(rng.random_range(0..=1));
            match sense {
                Sense::Le => at_hidden + slack,
                Sense::Ge => at_hidden - slack,
                Sense::Eq => at_hidden,
            }
        } else {
            f64::from(rng.random_range(-2..=3))
        };
        p.add(format!("r{k}"), terms, sense, rhs);
    }
    p
}

/// Best objective over all assignments, by plain enumeration.
pub fn enumerate_best(p: &IlpProblem) -> Option<f64> {
    let n = p.n_vars;
    let mut best: Option<f64> = None;
    for mask in 0u64..(1 << n) {
        let x = |v: usize| (mask >> v) & 1 == 1;
        let ok = p.constraints.iter().all(|c| {
            let lhs: f64 = c.terms.iter().filter(|(v, _)| x(*v)).map(|(_, a)| a).sum();
            match c.sense {
                Sense::Le => lhs <= c.rhs + TOL,
                Sense::Ge => lhs >= c.rhs - TOL,
                Sense::Eq => (lhs - c.rhs).abs() <= TOL,
            }
        });
        if ok {
            let val: f64 = (0..n).filter(|&v| x(v)).map(|v| p.objective[v]).sum();
            if best.is_none_or(|b| val > b) {
                best = Some(val);
            }
        }
    }
    best
}

fn simplex3(rng: &mut impl Rng) -> [f64; 3] {
    let (a, b): (f64, f64) = (rng.random(), rng.random());
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    [lo, hi - lo, 1.0 - hi]
}

/// Microtext instance with uniformly random scores and a placeholder gold.
pub fn random_microtext(rng: &mut impl Rng, id: &str, n: usize) -> MicrotextInstance {
    let mut at = vec![vec![0.0; n]; n];
    for (i, row) in at.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                *v = rng.random();
            }
        }
    }
    MicrotextInstance {
        id: id.into(),
        n,
        gold: MicrotextLabels {
            cc: vec![false; n],
            ro: vec![true; n],
            fu: vec![Function::None; n],
            at: vec![vec![false; n]; n],
        },
        scores: MicrotextScores {
            cc: (0..n).map(|_| rng.random()).collect(),
            ro: (0..n).map(|_| rng.random()).collect(),
            fu: (0..n).map(|_| simplex3(rng)).collect(),
            at,
        },
    }
}

pub fn random_essay(rng: &mut impl Rng, id: &str, n: usize, variant: Variant) -> EssayInstance {
    let claim: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let mut sup = vec![vec![0.0; n]; n];
    for (i, row) in sup.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                *v = rng.random();
            }
        }
    }
    EssayInstance {
        id: id.into(),
        n,
        variant,
        gold: EssayLabels {
            ctype: vec![ComponentType::Premise; n],
            rel: vec![vec![false; n]; n],
        },
        scores: EssayScores {
            premise: claim.iter().map(|c| 1.0 - c).collect(),
            claim,
            sup,
        },
    }
}

pub fn mt_objective(inst: &MicrotextInstance, w: &JointWeights, l: &MicrotextLabels) -> f64 {
    let s = &inst.scores;
    let mut total = 0.0;
    for i in 0..inst.n {
        if l.cc[i] {
            total += w.w1 * s.cc[i];
        }
        if l.ro[i] {
            total += w.w2 * s.ro[i];
        }
        let k = match l.fu[i] {
            Function::Support => 0,
            Function::Attack => 1,
            Function::None => 2,
        };
        total += w.w3 * s.fu[i][k];
        for j in 0..inst.n {
            if i != j && l.at[i][j] {
                total += w.w4 * s.at[i][j];
            }
        }
    }
    total
}

/// Whether a microtext labelling meets all ten corpus constraints.
pub fn mt_feasible(l: &MicrotextLabels) -> bool {
    let n = l.cc.len();
    let ccs: Vec<usize> = (0..n).filter(|&i| l.cc[i]).collect();
    if ccs.len() != 1 || l.ro.iter().all(|&r| r) {
        return false;
    }
    for i in 0..n {
        if l.cc[i] && !l.ro[i] {
            return false;
        }
        if l.cc[i] != (l.fu[i] == Function::None) {
            return false;
        }
        let out = (0..n).filter(|&j| j != i && l.at[i][j]).count();
        if usize::from(l.cc[i]) + out != 1 {
            return false;
        }
        for j in 0..n {
            if i == j || !l.at[i][j] {
                continue;
            }
            if l.at[j][i] {
                return false;
            }
            match l.fu[i] {
                Function::Support if l.ro[i] != l.ro[j] => return false,
                Function::Attack if l.ro[i] == l.ro[j] => return false,
                _ => {}
            }
        }
    }
    let cc = ccs[0];
    (0..n).any(|i| l.at[i][cc] && l.fu[i] == Function::Support)
}

fn bits(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (mask >> i) & 1 == 1).collect()
}

/// Exhaustive search over microtext labellings. Each stage filters the
/// constraints that only involve the labels fixed so far.
pub fn microtext_oracle(inst: &MicrotextInstance, w: &JointWeights) -> Option<(f64, MicrotextLabels)> {
    let n = inst.n;
    let mut best: Option<(f64, MicrotextLabels)> = None;
    for cc_mask in 0u64..(1 << n) {
        let cc = bits(cc_mask, n);
        if cc.iter().filter(|&&c| c).count() != 1 {
            continue;
        }
        for fu_code in 0..3usize.pow(n as u32) {
            let fu: Vec<Function> = (0..n)
                .map(|i| Function::ALL[(fu_code / 3usize.pow(i as u32)) % 3])
                .collect();
            if (0..n).any(|i| cc[i] != (fu[i] == Function::None)) {
                continue;
            }
            let mut at = vec![vec![false; n]; n];
            at_rows(inst, w, &cc, &fu, &mut at, 0, &mut best);
        }
    }
    best
}

fn at_rows(
    inst: &MicrotextInstance,
    w: &JointWeights,
    cc: &[bool],
    fu: &[Function],
    at: &mut Vec<Vec<bool>>,
    row: usize,
    best: &mut Option<(f64, MicrotextLabels)>,
) {
    let n = inst.n;
    if row == n {
        for ro_mask in 0u64..(1 << n) {
            let labels = MicrotextLabels {
                cc: cc.to_vec(),
                ro: bits(ro_mask, n),
                fu: fu.to_vec(),
                at: at.clone(),
            };
            if mt_feasible(&labels) {
                let v = mt_objective(inst, w, &labels);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    *best = Some((v, labels));
                }
            }
        }
        return;
    }
    for mask in 0u64..(1 << n) {
        let r = bits(mask, n);
        if r[row] {
            continue;
        }
        let out = r.iter().filter(|&&b| b).count();
        if usize::from(cc[row]) + out != 1 {
            continue;
        }
        at[row] = r;
        at_rows(inst, w, cc, fu, at, row + 1, best);
    }
    at[row] = vec![false; n];
}

pub fn es_objective(inst: &EssayInstance, w: &JointWeights, l: &EssayLabels) -> f64 {
    let s = &inst.scores;
    let mut comp = 0.0;
    let mut rel = 0.0;
    for i in 0..inst.n {
        comp += match l.ctype[i] {
            ComponentType::Claim => s.claim[i],
            ComponentType::Premise => s.premise[i],
        };
        for j in 0..inst.n {
            if i != j && l.rel[i][j] {
                rel += s.sup[i][j];
            }
        }
    }
    w.v * comp + (1.0 - w.v) * rel
}

pub fn es_feasible(l: &EssayLabels, variant: Variant) -> bool {
    let n = l.ctype.len();
    let claim = |i: usize| l.ctype[i] == ComponentType::Claim;
    if !(0..n).any(claim) {
        return false;
    }
    let mut edges = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j || !l.rel[i][j] {
                continue;
            }
            edges += 1;
            if l.rel[j][i] || claim(i) {
                return false;
            }
        }
    }
    if edges > n {
        return false;
    }
    let out = |i: usize| (0..n).any(|j| j != i && l.rel[i][j]);
    let inc = |j: usize| (0..n).any(|i| i != j && l.rel[i][j]);
    if matches!(variant, Variant::Mod2 | Variant::Mod3) && (0..n).any(|i| !claim(i) && !out(i)) {
        return false;
    }
    if variant == Variant::Mod3 && (0..n).any(|j| claim(j) && !inc(j)) {
        return false;
    }
    true
}

/// Exhaustive search over all `2^n * 2^(n(n-1))` essay labellings.
pub fn essay_oracle(inst: &EssayInstance, w: &JointWeights, variant: Variant) -> Option<(f64, EssayLabels)> {
    let n = inst.n;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut best: Option<(f64, EssayLabels)> = None;
    for ct_mask in 0u64..(1 << n) {
        let ctype: Vec<ComponentType> = bits(ct_mask, n)
            .into_iter()
            .map(|c| if c { ComponentType::Claim } else { ComponentType::Premise })
            .collect();
        let mut labels = EssayLabels {
            ctype,
            rel: vec![vec![false; n]; n],
        };
        for rel_mask in 0u64..(1 << pairs.len()) {
            for (k, &(i, j)) in pairs.iter().enumerate() {
                labels.rel[i][j] = (rel_mask >> k) & 1 == 1;
            }
            if es_feasible(&labels, variant) {
                let v = es_objective(inst, w, &labels);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, labels.clone()));
                }
            }
        }
    }
    best
}

/// Maximum spanning arborescence weight by trying every head assignment
/// and every parallel edge.
pub fn arborescence_oracle(g: &EvidenceGraph, root: usize) -> Option<f64> {
    let n = g.n_nodes;
    let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &g.edges {
        if e.dst != root && e.src != e.dst {
            incoming[e.dst].push((e.src, e.weight));
        }
    }
    let nodes: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut heads = vec![None; n];
    let mut best = None;
    search_heads(&nodes, 0, &incoming, &mut heads, 0.0, root, &mut best);
    best
}

fn search_heads(
    nodes: &[usize],
    k: usize,
    incoming: &[Vec<(usize, f64)>],
    heads: &mut Vec<Option<usize>>,
    acc: f64,
    root: usize,
    best: &mut Option<f64>,
) {
    if k == nodes.len() {
        let reaches_root = |mut v: usize| {
            for _ in 0..heads.len() {
                if v == root {
                    return true;
                }
                v = heads[v].unwrap();
            }
            v == root
        };
        if nodes.iter().all(|&v| reaches_root(v)) && best.is_none_or(|b| acc > b) {
            *best = Some(acc);
        }
        return;
    }
    let v = nodes[k];
    for &(src, w) in &incoming[v] {
        heads[v] = Some(src);
        search_heads(nodes, k + 1, incoming, heads, acc + w, root, best);
    }
    heads[v] = None;
}

/// Random multigraph with parallel edges of both relation tags.
pub fn random_graph(rng: &mut impl Rng, n_nodes: usize, density: f64) -> EvidenceGraph {
    let mut g = EvidenceGraph::new(n_nodes);
    for src in 0..n_nodes {
        for dst in 0..n_nodes {
            if src == dst {
                continue;
            }
            for tag in [EdgeTag::Support, EdgeTag::Attack] {
                if rng.random_bool(density) {
                    g.push(src, dst, rng.random_range(0.0..1.0), tag);
                }
            }
        }
    }
    g
}
