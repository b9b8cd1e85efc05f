//! Evidence-graph baseline: sub-task scores are folded into the weights of
//! a directed multigraph over the segments plus a virtual root, a maximum
//! spanning arborescence is decoded with Chu-Liu/Edmonds, and labels are
//! read off the tree.
//!
//! Edges point from head to dependent: an edge `j -> i` means segment `i`
//! attaches to (supports or attacks) segment `j`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::microtext::Decoded;
use crate::model::{
    ComponentType, EssayInstance, EssayLabels, Function, JointWeights, MicrotextInstance, MicrotextLabels,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MstError {
    #[error("node {0} is not reachable from the root")]
    Unreachable(usize),
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("edge {0} has a non-finite weight")]
    NonFinite(usize),
    #[error("edge {edge} references node {node} but the graph has {n_nodes} nodes")]
    NodeOutOfRange { edge: usize, node: usize, n_nodes: usize },
}

/// Label carried by an evidence-graph edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeTag {
    Support,
    Attack,
    /// Attachment to the virtual root.
    Root,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
    pub tag: EdgeTag,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct EvidenceGraph {
    pub n_nodes: usize,
    pub edges: Vec<Edge>,
}

impl EvidenceGraph {
    pub fn new(n_nodes: usize) -> Self {
        EvidenceGraph {
            n_nodes,
            edges: Vec::new(),
        }
    }

    pub fn push(&mut self, src: usize, dst: usize, weight: f64, tag: EdgeTag) {
        self.edges.push(Edge { src, dst, weight, tag });
    }

    fn check(&self, root: usize) -> Result<(), MstError> {
        for (k, e) in self.edges.iter().enumerate() {
            for node in [e.src, e.dst] {
                if node >= self.n_nodes {
                    return Err(MstError::NodeOutOfRange {
                        edge: k,
                        node,
                        n_nodes: self.n_nodes,
                    });
                }
            }
            if e.src == e.dst {
                return Err(MstError::SelfLoop(k));
            }
            if !e.weight.is_finite() {
                return Err(MstError::NonFinite(k));
            }
        }
        let mut children = vec![Vec::new(); self.n_nodes];
        for e in &self.edges {
            children[e.src].push(e.dst);
        }
        let mut seen = vec![false; self.n_nodes];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &children[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(MstError::Unreachable(v)),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arborescence {
    pub root: usize,
    /// Parent of each node; `None` only for the root.
    pub head: Vec<Option<usize>>,
    /// Tag of each node's incoming edge; `None` only for the root.
    pub edge_tag: Vec<Option<EdgeTag>>,
    pub total_weight: f64,
}

impl Arborescence {
    /// One head per non-root node, no cycles, everything reachable.
    pub fn is_valid(&self) -> bool {
        let n = self.head.len();
        if self.head[self.root].is_some() {
            return false;
        }
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while v != self.root {
                match self.head[v] {
                    Some(h) if h < n => v = h,
                    _ => return false,
                }
                steps += 1;
                if steps > n {
                    return false;
                }
            }
        }
        true
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.head
            .iter()
            .enumerate()
            .filter(move |(_, h)| **h == Some(node))
            .map(|(v, _)| v)
    }
}

/// Chu-Liu/Edmonds over `(src, dst, weight)` triples. Returns, per node, the
/// index of its chosen incoming edge (`None` for the root). Ties go to the
/// earliest edge in slice order. Every non-root node must be reachable.
fn chu_liu_edmonds(n: usize, root: usize, edges: &[(usize, usize, f64)]) -> Vec<Option<usize>> {
    let mut best_in: Vec<Option<usize>> = vec![None; n];
    for (k, &(u, v, w)) in edges.iter().enumerate() {
        if v == root || u == v {
            continue;
        }
        match best_in[v] {
            Some(b) if edges[b].2 >= w => {}
            _ => best_in[v] = Some(k),
        }
    }

    // Find a cycle among the chosen edges.
    let mut mark = vec![usize::MAX; n];
    let mut cycle: Option<Vec<usize>> = None;
    'outer: for start in 0..n {
        let mut v = start;
        while v != root && mark[v] == usize::MAX {
            mark[v] = start;
            v = edges[best_in[v].expect("reachable nodes have an incoming edge")].0;
        }
        if v != root && mark[v] == start {
            let mut c = vec![v];
            let mut u = edges[best_in[v].unwrap()].0;
            while u != v {
                c.push(u);
                u = edges[best_in[u].unwrap()].0;
            }
            cycle = Some(c);
            break 'outer;
        }
    }
    let Some(cycle) = cycle else {
        return best_in;
    };

    let mut in_cycle = vec![false; n];
    for &v in &cycle {
        in_cycle[v] = true;
    }
    // Contract the cycle into one node placed after the remaining ones.
    let mut new_id = vec![0; n];
    let mut next = 0;
    for v in 0..n {
        if !in_cycle[v] {
            new_id[v] = next;
            next += 1;
        }
    }
    let cycle_id = next;
    for &v in &cycle {
        new_id[v] = cycle_id;
    }
    let mut contracted = Vec::new();
    let mut origin = Vec::new();
    for (k, &(u, v, w)) in edges.iter().enumerate() {
        let (nu, nv) = (new_id[u], new_id[v]);
        if nu == nv {
            continue;
        }
        let w = if in_cycle[v] { w - edges[best_in[v].unwrap()].2 } else { w };
        contracted.push((nu, nv, w));
        origin.push(k);
    }
    let sub = chu_liu_edmonds(cycle_id + 1, new_id[root], &contracted);

    let mut chosen = best_in;
    for v in 0..n {
        if !in_cycle[v] && v != root {
            chosen[v] = sub[new_id[v]].map(|k| origin[k]);
        }
    }
    let entering = origin[sub[cycle_id].expect("contracted cycle has an incoming edge")];
    chosen[edges[entering].1] = Some(entering);
    chosen
}

/// Maximum-weight spanning arborescence rooted at `root`.
///
/// Parallel edges are allowed. Ties are broken in favour of the edge that
/// sorts first by `(src, dst, tag)`.
pub fn max_arborescence(graph: &EvidenceGraph, root: usize) -> Result<Arborescence, MstError> {
    if root >= graph.n_nodes {
        return Err(MstError::NodeOutOfRange {
            edge: usize::MAX,
            node: root,
            n_nodes: graph.n_nodes,
        });
    }
    graph.check(root)?;
    let mut order: Vec<usize> = (0..graph.edges.len()).collect();
    order.sort_by_key(|&k| {
        let e = &graph.edges[k];
        (e.src, e.dst, e.tag)
    });
    let triples: Vec<(usize, usize, f64)> = order
        .iter()
        .map(|&k| {
            let e = &graph.edges[k];
            (e.src, e.dst, e.weight)
        })
        .collect();
    let chosen = chu_liu_edmonds(graph.n_nodes, root, &triples);

    let mut head = vec![None; graph.n_nodes];
    let mut edge_tag = vec![None; graph.n_nodes];
    let mut total_weight = 0.0;
    for (v, c) in chosen.iter().enumerate() {
        if let Some(k) = c {
            let e = &graph.edges[order[*k]];
            head[v] = Some(e.src);
            edge_tag[v] = Some(e.tag);
            total_weight += e.weight;
        }
    }
    Ok(Arborescence {
        root,
        head,
        edge_tag,
        total_weight,
    })
}

/// Evidence graph for a microtext. The virtual root is node `n`.
pub fn build_graph_microtext(instance: &MicrotextInstance, weights: &JointWeights) -> EvidenceGraph {
    let n = instance.n;
    let s = &instance.scores;
    let mut g = EvidenceGraph::new(n + 1);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let at = weights.w4 * s.at[i][j];
            g.push(j, i, at + weights.w3 * s.fu[i][0], EdgeTag::Support);
            g.push(j, i, at + weights.w3 * s.fu[i][1], EdgeTag::Attack);
        }
    }
    for i in 0..n {
        g.push(n, i, weights.w1 * s.cc[i] + weights.w3 * s.fu[i][2], EdgeTag::Root);
    }
    g
}

/// Labels of a microtext tree: children of the virtual root are central
/// claims, the incoming edge tag gives the function, and roles propagate
/// down from the central claim (support keeps the role, attack flips it).
pub fn read_off_microtext(arb: &Arborescence) -> MicrotextLabels {
    let root = arb.root;
    let n = arb.head.len() - 1;
    let mut labels = MicrotextLabels {
        cc: vec![false; n],
        ro: vec![true; n],
        fu: vec![Function::None; n],
        at: vec![vec![false; n]; n],
    };
    let mut queue: VecDeque<usize> = arb.children(root).collect();
    for &c in &queue {
        labels.cc[c] = true;
    }
    while let Some(u) = queue.pop_front() {
        for v in arb.children(u) {
            labels.at[v][u] = true;
            let tag = arb.edge_tag[v].expect("non-root nodes carry a tag");
            labels.fu[v] = match tag {
                EdgeTag::Attack => Function::Attack,
                _ => Function::Support,
            };
            labels.ro[v] = if tag == EdgeTag::Attack { !labels.ro[u] } else { labels.ro[u] };
            queue.push_back(v);
        }
    }
    labels
}

/// The evidence tree behind [`decode_microtext`].
///
/// Each segment is tried as the sole child of the virtual root; the
/// candidate maximizing tree weight plus the role scores of its proponent
/// segments wins (lowest index on ties).
pub fn microtext_tree(instance: &MicrotextInstance, weights: &JointWeights) -> Result<Arborescence, MstError> {
    let n = instance.n;
    let full = build_graph_microtext(instance, weights);
    let mut best: Option<(f64, Arborescence)> = None;
    for candidate in 0..n {
        let mut g = full.clone();
        g.edges.retain(|e| e.src != n || e.dst == candidate);
        let arb = max_arborescence(&g, n)?;
        let labels = read_off_microtext(&arb);
        let role: f64 = (0..n)
            .filter(|&i| labels.ro[i])
            .map(|i| weights.w2 * instance.scores.ro[i])
            .sum();
        let total = arb.total_weight + role;
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, arb));
        }
    }
    Ok(best.expect("instances have at least one segment").1)
}

/// Decode a microtext with the evidence graph.
pub fn decode_microtext(
    instance: &MicrotextInstance,
    weights: &JointWeights,
) -> Result<Decoded<MicrotextLabels>, MstError> {
    let labels = read_off_microtext(&microtext_tree(instance, weights)?);
    Ok(Decoded {
        objective: crate::microtext::objective(instance, weights, &labels),
        labels,
        nodes_explored: 0,
    })
}

/// Evidence graph for an essay paragraph: `j -> i` carries
/// `beta * P_i + (1 - beta) * SUP_ij`, root edges carry `beta * C_i`.
pub fn build_graph_essays(instance: &EssayInstance, beta: f64) -> EvidenceGraph {
    let n = instance.n;
    let s = &instance.scores;
    let mut g = EvidenceGraph::new(n + 1);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            g.push(j, i, beta * s.premise[i] + (1.0 - beta) * s.sup[i][j], EdgeTag::Support);
        }
    }
    for i in 0..n {
        g.push(n, i, beta * s.claim[i], EdgeTag::Root);
    }
    g
}

/// Children of the virtual root are claims; every other component is a
/// premise supporting its head.
pub fn read_off_essays(arb: &Arborescence) -> EssayLabels {
    let n = arb.head.len() - 1;
    let mut labels = EssayLabels {
        ctype: vec![ComponentType::Premise; n],
        rel: vec![vec![false; n]; n],
    };
    for i in 0..n {
        match arb.head[i] {
            Some(h) if h == arb.root => labels.ctype[i] = ComponentType::Claim,
            Some(h) => labels.rel[i][h] = true,
            None => {}
        }
    }
    labels
}

/// The evidence tree behind [`decode_essays`].
pub fn essay_tree(instance: &EssayInstance, weights: &JointWeights) -> Result<Arborescence, MstError> {
    max_arborescence(&build_graph_essays(instance, weights.beta), instance.n)
}

pub fn decode_essays(instance: &EssayInstance, weights: &JointWeights) -> Result<Decoded<EssayLabels>, MstError> {
    let labels = read_off_essays(&essay_tree(instance, weights)?);
    Ok(Decoded {
        objective: crate::essays::objective(instance, weights, &labels),
        labels,
        nodes_explored: 0,
    })
}
