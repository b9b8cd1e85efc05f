//! Maximum spanning arborescences: a hand-made graph first, then the
//! evidence graph of a synthetic microtext.

use argjoint::mst::{self, max_arborescence, EdgeTag, EvidenceGraph};
use argjoint::synth::{gen_microtext, NoiseSpec};
use argjoint::JointWeights;

fn main() {
    // root 0; the best in-edges of 1 and 2 form a cycle that gets contracted
    let mut g = EvidenceGraph::new(4);
    g.push(0, 1, 0.2, EdgeTag::Root);
    g.push(0, 2, 0.1, EdgeTag::Root);
    g.push(2, 1, 0.9, EdgeTag::Support);
    g.push(1, 2, 0.8, EdgeTag::Attack);
    g.push(1, 3, 0.4, EdgeTag::Support);
    g.push(2, 3, 0.6, EdgeTag::Attack);
    let tree = max_arborescence(&g, 0).unwrap();
    for v in 1..4 {
        println!("{v} <- {} ({:?})", tree.head[v].unwrap(), tree.edge_tag[v].unwrap());
    }
    println!("weight {:.2}, valid {}", tree.total_weight, tree.is_valid());

    let inst = gen_microtext("m", 6, &NoiseSpec::new(0.6, 4)).unwrap();
    let w = JointWeights::default();
    let graph = mst::build_graph_microtext(&inst, &w);
    let tree = mst::microtext_tree(&inst, &w).unwrap();
    println!("\nevidence graph: {} nodes, {} edges", graph.n_nodes, graph.edges.len());
    let decoded = mst::read_off_microtext(&tree);
    println!("gold cc {:?}", inst.gold.cc);
    println!("mst  cc {:?}", decoded.cc);
    println!("gold fu {:?}", inst.gold.fu);
    println!("mst  fu {:?}", decoded.fu);
}
