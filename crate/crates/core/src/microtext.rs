//! Joint ILP for microtexts: central claim (cc), role (ro), function (fu)
//! and attachment (at) decoded together.
//!
//! Variables per segment `i`: `a_i` central claim, `b_i` proponent,
//! `c_i`/`e_i`/`g_i` support/attack/none function; per ordered pair
//! `d_ij` (i attaches to j) and the auxiliary `s_ij = d_ij AND c_i`
//! (i supports j), which links "the central claim has a supporter" to the
//! function variables.

use crate::ilp::{self, IlpProblem, IlpSolution, Sense};
use crate::model::{Function, JointWeights, MicrotextInstance, MicrotextLabels};

pub const ONE_CENTRAL_CLAIM: &str = "one-central-claim";
pub const AT_LEAST_ONE_OPPONENT: &str = "at-least-one-opponent";
pub const ONE_FUNCTION: &str = "one-function";
pub const CC_IS_PROPONENT: &str = "cc-is-proponent";
pub const CC_FUNCTION_NONE: &str = "cc-function-none";
pub const ATTACHMENT_COUNT: &str = "attachment-count";
pub const CC_HAS_SUPPORT: &str = "cc-has-support";
pub const ONE_RELATION_PER_PAIR: &str = "one-relation-per-pair";
pub const SUPPORT_SAME_ROLE: &str = "support-same-role";
pub const ATTACK_OPPOSITE_ROLE: &str = "attack-opposite-role";

/// All ten constraint names, in the order the encoder emits them.
pub const CONSTRAINTS: [&str; 10] = [
    ONE_CENTRAL_CLAIM,
    AT_LEAST_ONE_OPPONENT,
    ONE_FUNCTION,
    CC_IS_PROPONENT,
    CC_FUNCTION_NONE,
    ATTACHMENT_COUNT,
    CC_HAS_SUPPORT,
    ONE_RELATION_PER_PAIR,
    SUPPORT_SAME_ROLE,
    ATTACK_OPPOSITE_ROLE,
];

/// Variable indices of a microtext encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct MicrotextVarMap {
    pub n: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub e: Vec<usize>,
    pub g: Vec<usize>,
    /// `d[i][j]`, `None` on the diagonal.
    pub d: Vec<Vec<Option<usize>>>,
    /// `s[i][j]`, `None` on the diagonal.
    pub s: Vec<Vec<Option<usize>>>,
}

impl MicrotextVarMap {
    pub fn new(n: usize) -> Self {
        let block = |k: usize| (k * n..(k + 1) * n).collect::<Vec<_>>();
        let pairs = n * n.saturating_sub(1);
        let pair_block = |base: usize| {
            let mut next = base;
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (i != j).then(|| {
                                next += 1;
                                next - 1
                            })
                        })
                        .collect()
                })
                .collect::<Vec<Vec<Option<usize>>>>()
        };
        MicrotextVarMap {
            n,
            a: block(0),
            b: block(1),
            c: block(2),
            e: block(3),
            g: block(4),
            d: pair_block(5 * n),
            s: pair_block(5 * n + pairs),
        }
    }

    pub fn n_vars(&self) -> usize {
        5 * self.n + 2 * self.n * self.n.saturating_sub(1)
    }

    fn d(&self, i: usize, j: usize) -> usize {
        self.d[i][j].expect("no attachment variable on the diagonal")
    }

    fn s(&self, i: usize, j: usize) -> usize {
        self.s[i][j].expect("no support variable on the diagonal")
    }
}

/// Build the joint ILP for one instance.
pub fn encode(instance: &MicrotextInstance, weights: &JointWeights) -> (IlpProblem, MicrotextVarMap) {
    let n = instance.n;
    let vm = MicrotextVarMap::new(n);
    let mut p = IlpProblem::new(vm.n_vars());
    let sc = &instance.scores;

    for i in 0..n {
        p.objective[vm.a[i]] = weights.w1 * sc.cc[i];
        p.objective[vm.b[i]] = weights.w2 * sc.ro[i];
        p.objective[vm.c[i]] = weights.w3 * sc.fu[i][0];
        p.objective[vm.e[i]] = weights.w3 * sc.fu[i][1];
        p.objective[vm.g[i]] = weights.w3 * sc.fu[i][2];
        for j in 0..n {
            if i != j {
                p.objective[vm.d(i, j)] = weights.w4 * sc.at[i][j];
            }
        }
    }

    let pairs = || (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));

    p.add(ONE_CENTRAL_CLAIM, vm.a.iter().map(|&v| (v, 1.0)).collect(), Sense::Eq, 1.0);
    // sum(1 - b_i) >= 1
    p.add(
        AT_LEAST_ONE_OPPONENT,
        vm.b.iter().map(|&v| (v, 1.0)).collect(),
        Sense::Le,
        n as f64 - 1.0,
    );
    for i in 0..n {
        p.add(
            format!("{ONE_FUNCTION}[{i}]"),
            vec![(vm.c[i], 1.0), (vm.e[i], 1.0), (vm.g[i], 1.0)],
            Sense::Eq,
            1.0,
        );
    }
    for i in 0..n {
        p.add(
            format!("{CC_IS_PROPONENT}[{i}]"),
            vec![(vm.a[i], 1.0), (vm.b[i], -1.0)],
            Sense::Le,
            0.0,
        );
    }
    for i in 0..n {
        p.add(
            format!("{CC_FUNCTION_NONE}[{i}]"),
            vec![(vm.a[i], 1.0), (vm.g[i], -1.0)],
            Sense::Eq,
            0.0,
        );
    }
    for i in 0..n {
        let mut terms = vec![(vm.a[i], 1.0)];
        terms.extend((0..n).filter(|&j| j != i).map(|j| (vm.d(i, j), 1.0)));
        p.add(format!("{ATTACHMENT_COUNT}[{i}]"), terms, Sense::Eq, 1.0);
    }
    for j in 0..n {
        let mut terms = vec![(vm.a[j], 1.0)];
        terms.extend((0..n).filter(|&i| i != j).map(|i| (vm.s(i, j), -1.0)));
        p.add(format!("{CC_HAS_SUPPORT}[{j}]"), terms, Sense::Le, 0.0);
    }
    for (i, j) in pairs() {
        let (s, d, c) = (vm.s(i, j), vm.d(i, j), vm.c[i]);
        let name = format!("{CC_HAS_SUPPORT}:and[{i},{j}]");
        p.add(format!("{name}.d"), vec![(s, 1.0), (d, -1.0)], Sense::Le, 0.0);
        p.add(format!("{name}.c"), vec![(s, 1.0), (c, -1.0)], Sense::Le, 0.0);
        p.add(
            format!("{name}.both"),
            vec![(s, 1.0), (d, -1.0), (c, -1.0)],
            Sense::Ge,
            -1.0,
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            p.add(
                format!("{ONE_RELATION_PER_PAIR}[{i},{j}]"),
                vec![(vm.d(i, j), 1.0), (vm.d(j, i), 1.0)],
                Sense::Le,
                1.0,
            );
        }
    }
    // (d_ij AND c_i) -> b_i = b_j
    for (i, j) in pairs() {
        let (bi, bj, d, c) = (vm.b[i], vm.b[j], vm.d(i, j), vm.c[i]);
        p.add(
            format!("{SUPPORT_SAME_ROLE}[{i},{j}].up"),
            vec![(bi, 1.0), (bj, -1.0), (d, 1.0), (c, 1.0)],
            Sense::Le,
            2.0,
        );
        p.add(
            format!("{SUPPORT_SAME_ROLE}[{i},{j}].down"),
            vec![(bj, 1.0), (bi, -1.0), (d, 1.0), (c, 1.0)],
            Sense::Le,
            2.0,
        );
    }
    // (d_ij AND e_i) -> b_i + b_j = 1
    for (i, j) in pairs() {
        let (bi, bj, d, e) = (vm.b[i], vm.b[j], vm.d(i, j), vm.e[i]);
        p.add(
            format!("{ATTACK_OPPOSITE_ROLE}[{i},{j}].up"),
            vec![(bi, 1.0), (bj, 1.0), (d, 1.0), (e, 1.0)],
            Sense::Le,
            3.0,
        );
        p.add(
            format!("{ATTACK_OPPOSITE_ROLE}[{i},{j}].down"),
            vec![(bi, 1.0), (bj, 1.0), (d, -1.0), (e, -1.0)],
            Sense::Ge,
            -1.0,
        );
    }
    (p, vm)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DecodeError {
    #[error("solution is not optimal")]
    NotOptimal,
    #[error("segment {0} does not have exactly one function")]
    FunctionNotOneHot(usize),
}

pub fn decode_solution(vm: &MicrotextVarMap, solution: &IlpSolution) -> Result<MicrotextLabels, DecodeError> {
    let x = solution.assignment.as_ref().ok_or(DecodeError::NotOptimal)?;
    let n = vm.n;
    let mut fu = Vec::with_capacity(n);
    for i in 0..n {
        let hot = [x[vm.c[i]], x[vm.e[i]], x[vm.g[i]]];
        if hot.iter().filter(|&&h| h).count() != 1 {
            return Err(DecodeError::FunctionNotOneHot(i));
        }
        fu.push(Function::from_index(hot.iter().position(|&h| h).unwrap()));
    }
    Ok(MicrotextLabels {
        cc: vm.a.iter().map(|&v| x[v]).collect(),
        ro: vm.b.iter().map(|&v| x[v]).collect(),
        fu,
        at: (0..n)
            .map(|i| (0..n).map(|j| vm.d[i][j].is_some_and(|v| x[v])).collect())
            .collect(),
    })
}

/// A decoded labelling and its objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded<L> {
    pub labels: L,
    pub objective: f64,
    pub nodes_explored: u64,
}

/// Encode, solve and decode. `Ok(None)` when the instance has no labelling
/// satisfying all constraints.
pub fn decode_ilp(
    instance: &MicrotextInstance,
    weights: &JointWeights,
) -> Result<Option<Decoded<MicrotextLabels>>, ilp::SolveError> {
    let (problem, vm) = encode(instance, weights);
    let solution = ilp::solve(&problem)?;
    if !solution.is_optimal() {
        return Ok(None);
    }
    let labels = decode_solution(&vm, &solution).expect("optimal solutions satisfy the function constraint");
    Ok(Some(Decoded {
        labels,
        objective: solution.objective_value.unwrap_or_default(),
        nodes_explored: solution.nodes_explored,
    }))
}

/// Independent per-task argmax, no constraints.
pub fn decode_separate(instance: &MicrotextInstance) -> MicrotextLabels {
    let s = &instance.scores;
    let n = instance.n;
    MicrotextLabels {
        cc: s.cc.iter().map(|&p| p >= 0.5).collect(),
        ro: s.ro.iter().map(|&p| p >= 0.5).collect(),
        fu: s.fu.iter().map(|row| Function::from_index(argmax(row))).collect(),
        at: (0..n)
            .map(|i| (0..n).map(|j| i != j && s.at[i][j] >= 0.5).collect())
            .collect(),
    }
}

/// First index of the maximum.
pub(crate) fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (k, &p) in row.iter().enumerate() {
        if p > row[best] {
            best = k;
        }
    }
    best
}

/// Value of the joint objective for a labelling.
pub fn objective(instance: &MicrotextInstance, weights: &JointWeights, labels: &MicrotextLabels) -> f64 {
    let s = &instance.scores;
    let n = instance.n;
    let mut total = 0.0;
    for i in 0..n {
        if labels.cc[i] {
            total += weights.w1 * s.cc[i];
        }
        if labels.ro[i] {
            total += weights.w2 * s.ro[i];
        }
        total += weights.w3 * s.fu[i][labels.fu[i].index()];
        for j in 0..n {
            if i != j && labels.at[i][j] {
                total += weights.w4 * s.at[i][j];
            }
        }
    }
    total
}

/// Names of the corpus constraints a labelling violates, each listed once.
pub fn violated_constraints(labels: &MicrotextLabels) -> Vec<&'static str> {
    let n = labels.cc.len();
    let at = |i: usize, j: usize| i != j && labels.at[i][j];
    let mut out = Vec::new();

    if labels.cc.iter().filter(|&&c| c).count() != 1 {
        out.push(ONE_CENTRAL_CLAIM);
    }
    if labels.ro.iter().all(|&r| r) {
        out.push(AT_LEAST_ONE_OPPONENT);
    }
    // the function label is a single class by construction
    if (0..n).any(|i| labels.cc[i] && !labels.ro[i]) {
        out.push(CC_IS_PROPONENT);
    }
    if (0..n).any(|i| labels.cc[i] != (labels.fu[i] == Function::None)) {
        out.push(CC_FUNCTION_NONE);
    }
    if (0..n).any(|i| {
        let out_degree = (0..n).filter(|&j| at(i, j)).count();
        out_degree + usize::from(labels.cc[i]) != 1
    }) {
        out.push(ATTACHMENT_COUNT);
    }
    if (0..n).any(|j| labels.cc[j] && !(0..n).any(|i| at(i, j) && labels.fu[i] == Function::Support)) {
        out.push(CC_HAS_SUPPORT);
    }
    if (0..n).any(|i| (i + 1..n).any(|j| at(i, j) && at(j, i))) {
        out.push(ONE_RELATION_PER_PAIR);
    }
    let mut pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| at(i, j));
    if pairs
        .clone()
        .any(|(i, j)| labels.fu[i] == Function::Support && labels.ro[i] != labels.ro[j])
    {
        out.push(SUPPORT_SAME_ROLE);
    }
    if pairs.any(|(i, j)| labels.fu[i] == Function::Attack && labels.ro[i] == labels.ro[j]) {
        out.push(ATTACK_OPPOSITE_ROLE);
    }
    out
}
