//! Seeded random graphs for property checks and the separation search.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apg::{Apg, NodeId};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random APG with between 1 and `max_nodes` nodes.
///
/// Accessibility comes from a random spanning tree rooted at the root; every
/// other ordered pair (self-loops included) becomes an edge with probability
/// `edge_prob`. Node ids are shuffled so the root is not always node 0.
pub fn random_apg<R: Rng>(rng: &mut R, max_nodes: usize, edge_prob: f64) -> Apg {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let mut children = vec![Vec::new(); n];
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        children[parent].push(v);
    }
    for kids in children.iter_mut() {
        for to in 0..n {
            if !kids.contains(&to) && rng.gen_bool(edge_prob) {
                kids.push(to);
            }
        }
    }
    shuffled(rng, children, 0)
}

/// A random well-founded APG: edges only run from later to earlier nodes of a
/// hidden order, so there is no cycle.
pub fn random_well_founded<R: Rng>(rng: &mut R, max_nodes: usize, edge_prob: f64) -> Apg {
    let n = rng.gen_range(1..=max_nodes.max(1));
    // node n-1 is the root; every other node gets a parent above it
    let mut children = vec![Vec::new(); n];
    for v in 0..n.saturating_sub(1) {
        let parent = rng.gen_range(v + 1..n);
        children[parent].push(v);
    }
    for (from, kids) in children.iter_mut().enumerate() {
        for to in 0..from {
            if !kids.contains(&to) && rng.gen_bool(edge_prob) {
                kids.push(to);
            }
        }
    }
    shuffled(rng, children, n - 1)
}

/// A random graph with `nodes` nodes and `edges` distinct edges (fewer only
/// if the complete graph has fewer), rooted at node 0. Used for timing runs.
pub fn random_large<R: Rng>(rng: &mut R, nodes: usize, edges: usize) -> Apg {
    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); nodes];
    // a random spanning tree keeps every node reachable
    for v in 1..nodes {
        let parent = rng.gen_range(0..v);
        children[parent].push(v);
    }
    let mut present: HashSet<(NodeId, NodeId)> = children
        .iter()
        .enumerate()
        .flat_map(|(a, k)| k.iter().map(move |&b| (a, b)))
        .collect();
    let target = edges.min(nodes * nodes);
    while present.len() < target {
        let (a, b) = (rng.gen_range(0..nodes), rng.gen_range(0..nodes));
        if present.insert((a, b)) {
            children[a].push(b);
        }
    }
    for kids in &mut children {
        kids.sort_unstable();
    }
    Apg::new(children, 0).expect("spanning tree makes the graph accessible")
}

fn shuffled<R: Rng>(rng: &mut R, children: Vec<Vec<NodeId>>, root: NodeId) -> Apg {
    let n = children.len();
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(rng);
    let mut out = vec![Vec::new(); n];
    for (old, kids) in children.into_iter().enumerate() {
        out[perm[old]] = kids.into_iter().map(|c| perm[c]).collect();
    }
    Apg::new(out, perm[root]).expect("generated graph is accessible")
}
