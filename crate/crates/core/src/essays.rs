//! Joint ILP for essay paragraphs: component type (claim or premise) and
//! support relations, with the constraint set chosen by corpus variant.

use crate::ilp::{self, IlpProblem, IlpSolution, Sense};
use crate::microtext::Decoded;
use crate::model::{ComponentType, EssayInstance, EssayLabels, JointWeights, Variant};

pub const CLAIM_OR_PREMISE: &str = "claim-or-premise";
pub const ONE_RELATION_PER_PAIR: &str = "one-relation-per-pair";
pub const RELATION_FROM_PREMISE: &str = "relation-from-premise";
pub const AT_LEAST_ONE_CLAIM: &str = "at-least-one-claim";
pub const RELATION_BUDGET: &str = "relation-budget";
pub const PREMISE_SUPPORTS: &str = "premise-supports";
pub const CLAIM_HAS_PREMISE: &str = "claim-has-premise";

#[derive(Clone, Debug, PartialEq)]
pub struct EssayVarMap {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// `c[i][j]`: i supports j; `None` on the diagonal.
    pub c: Vec<Vec<Option<usize>>>,
    /// Maximum number of relations per paragraph.
    pub comp_num: usize,
}

impl EssayVarMap {
    pub fn new(n: usize) -> Self {
        let mut next = 2 * n;
        let c = (0..n)
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
            .collect();
        EssayVarMap {
            a: (0..n).collect(),
            b: (n..2 * n).collect(),
            c,
            comp_num: n,
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn n_vars(&self) -> usize {
        let n = self.n();
        2 * n + n * n.saturating_sub(1)
    }

    fn c(&self, i: usize, j: usize) -> usize {
        self.c[i][j].expect("no relation variable on the diagonal")
    }
}

/// Build the ILP under the instance's own variant.
pub fn encode(instance: &EssayInstance, weights: &JointWeights) -> (IlpProblem, EssayVarMap) {
    encode_with_variant(instance, weights, instance.variant)
}

pub fn encode_with_variant(
    instance: &EssayInstance,
    weights: &JointWeights,
    variant: Variant,
) -> (IlpProblem, EssayVarMap) {
    let n = instance.n;
    let vm = EssayVarMap::new(n);
    let mut p = IlpProblem::new(vm.n_vars());
    let s = &instance.scores;
    let v = weights.v;
    for i in 0..n {
        p.objective[vm.a[i]] = v * s.claim[i];
        p.objective[vm.b[i]] = v * s.premise[i];
        for j in 0..n {
            if i != j {
                p.objective[vm.c(i, j)] = (1.0 - v) * s.sup[i][j];
            }
        }
    }

    for i in 0..n {
        p.add(
            format!("{CLAIM_OR_PREMISE}[{i}]"),
            vec![(vm.a[i], 1.0), (vm.b[i], 1.0)],
            Sense::Eq,
            1.0,
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            p.add(
                format!("{ONE_RELATION_PER_PAIR}[{i},{j}]"),
                vec![(vm.c(i, j), 1.0), (vm.c(j, i), 1.0)],
                Sense::Le,
                1.0,
            );
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            p.add(
                format!("{RELATION_FROM_PREMISE}[{i},{j}]"),
                vec![(vm.c(i, j), 1.0), (vm.b[i], -1.0)],
                Sense::Le,
                0.0,
            );
        }
    }
    p.add(AT_LEAST_ONE_CLAIM, vm.a.iter().map(|&x| (x, 1.0)).collect(), Sense::Ge, 1.0);
    p.add(
        RELATION_BUDGET,
        vm.c.iter().flatten().flatten().map(|&x| (x, 1.0)).collect(),
        Sense::Le,
        vm.comp_num as f64,
    );
    if variant.premises_must_support() {
        for i in 0..n {
            let mut terms = vec![(vm.b[i], 1.0)];
            terms.extend((0..n).filter(|&j| j != i).map(|j| (vm.c(i, j), -1.0)));
            p.add(format!("{PREMISE_SUPPORTS}[{i}]"), terms, Sense::Le, 0.0);
        }
    }
    if variant.claims_must_be_supported() {
        for j in 0..n {
            let mut terms = vec![(vm.a[j], 1.0)];
            terms.extend((0..n).filter(|&i| i != j).map(|i| (vm.c(i, j), -1.0)));
            p.add(format!("{CLAIM_HAS_PREMISE}[{j}]"), terms, Sense::Le, 0.0);
        }
    }
    (p, vm)
}

/// Map an optimal assignment back to labels. `None` if the solution has no
/// assignment.
pub fn decode_solution(vm: &EssayVarMap, solution: &IlpSolution) -> Option<EssayLabels> {
    let x = solution.assignment.as_ref()?;
    let n = vm.n();
    Some(EssayLabels {
        ctype: vm
            .a
            .iter()
            .map(|&v| if x[v] { ComponentType::Claim } else { ComponentType::Premise })
            .collect(),
        rel: (0..n)
            .map(|i| (0..n).map(|j| vm.c[i][j].is_some_and(|v| x[v])).collect())
            .collect(),
    })
}

pub fn decode_ilp(
    instance: &EssayInstance,
    weights: &JointWeights,
) -> Result<Option<Decoded<EssayLabels>>, ilp::SolveError> {
    let (problem, vm) = encode(instance, weights);
    let solution = ilp::solve(&problem)?;
    Ok(decode_solution(&vm, &solution).map(|labels| Decoded {
        labels,
        objective: solution.objective_value.unwrap_or_default(),
        nodes_explored: solution.nodes_explored,
    }))
}

/// Independent argmax per component and per pair. `C_i = P_i` counts as a
/// claim.
pub fn decode_separate(instance: &EssayInstance) -> EssayLabels {
    let s = &instance.scores;
    let n = instance.n;
    EssayLabels {
        ctype: (0..n)
            .map(|i| {
                if s.claim[i] >= s.premise[i] {
                    ComponentType::Claim
                } else {
                    ComponentType::Premise
                }
            })
            .collect(),
        rel: (0..n)
            .map(|i| (0..n).map(|j| i != j && s.sup[i][j] >= 0.5).collect())
            .collect(),
    }
}

pub fn objective(instance: &EssayInstance, weights: &JointWeights, labels: &EssayLabels) -> f64 {
    let s = &instance.scores;
    let v = weights.v;
    let n = instance.n;
    let mut total = 0.0;
    for i in 0..n {
        total += v * match labels.ctype[i] {
            ComponentType::Claim => s.claim[i],
            ComponentType::Premise => s.premise[i],
        };
        for j in 0..n {
            if i != j && labels.rel[i][j] {
                total += (1.0 - v) * s.sup[i][j];
            }
        }
    }
    total
}

/// Names of the constraints active for `variant` that the labels violate.
pub fn violated_constraints(labels: &EssayLabels, variant: Variant) -> Vec<&'static str> {
    let n = labels.ctype.len();
    let rel = |i: usize, j: usize| i != j && labels.rel[i][j];
    let is_claim = |i: usize| labels.ctype[i] == ComponentType::Claim;
    let mut out = Vec::new();
    // claim-or-premise holds by construction of the label type
    if (0..n).any(|i| (i + 1..n).any(|j| rel(i, j) && rel(j, i))) {
        out.push(ONE_RELATION_PER_PAIR);
    }
    if (0..n).any(|i| is_claim(i) && (0..n).any(|j| rel(i, j))) {
        out.push(RELATION_FROM_PREMISE);
    }
    if !(0..n).any(is_claim) {
        out.push(AT_LEAST_ONE_CLAIM);
    }
    let count = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| rel(i, j)).count();
    if count > n {
        out.push(RELATION_BUDGET);
    }
    if variant.premises_must_support() && (0..n).any(|i| !is_claim(i) && !(0..n).any(|j| rel(i, j))) {
        out.push(PREMISE_SUPPORTS);
    }
    if variant.claims_must_be_supported() && (0..n).any(|j| is_claim(j) && !(0..n).any(|i| rel(i, j))) {
        out.push(CLAIM_HAS_PREMISE);
    }
    out
}
