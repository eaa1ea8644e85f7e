//! Accessible pointed graphs, the carrier of every set presentation.
//!
//! An edge `a -> b` means "b is an element of a". Children are kept as sorted,
//! duplicate-free vectors, so parallel edges cannot exist.

mod json;
mod tree;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub use json::GraphJson;
pub use tree::{unfold, FiniteTree};

pub use crate::search::{pointed_isomorphic, pointed_isomorphic_with};
use crate::{Error, Result};

pub type NodeId = usize;

/// A directed graph with a designated root that may still contain duplicate
/// edges and nodes the root cannot reach.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub children: Vec<Vec<NodeId>>,
    pub root: NodeId,
    pub labels: BTreeMap<NodeId, String>,
}

impl RawGraph {
    pub fn new(children: Vec<Vec<NodeId>>, root: NodeId) -> Result<Self> {
        let raw = RawGraph {
            children,
            root,
            labels: BTreeMap::new(),
        };
        raw.validate()?;
        Ok(raw)
    }

    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)], root: NodeId) -> Result<Self> {
        let mut children = vec![Vec::new(); node_count];
        for &(from, to) in edges {
            if from >= node_count || to >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {from}->{to} out of range for {node_count} nodes"
                )));
            }
            children[from].push(to);
        }
        RawGraph::new(children, root)
    }

    fn validate(&self) -> Result<()> {
        let n = self.children.len();
        if self.root >= n {
            return Err(Error::InvalidGraph(format!(
                "root {} out of range for {n} nodes",
                self.root
            )));
        }
        for (from, kids) in self.children.iter().enumerate() {
            if let Some(&bad) = kids.iter().find(|&&c| c >= n) {
                return Err(Error::InvalidGraph(format!(
                    "edge {from}->{bad} out of range for {n} nodes"
                )));
            }
        }
        if let Some((&bad, _)) = self.labels.range(n..).next() {
            return Err(Error::InvalidGraph(format!("label on missing node {bad}")));
        }
        Ok(())
    }
}

/// Maps each node of an input graph to its index in a derived graph, if it
/// survived.
pub type Translation = Vec<Option<NodeId>>;

/// Restricts a raw graph to the nodes reachable from its root.
///
/// Surviving nodes keep their relative order, so an already accessible graph
/// comes back unchanged with the identity translation.
pub fn trim_to_accessible(raw: &RawGraph) -> (Apg, Translation) {
    let reach = reachable(&raw.children, raw.root);
    let mut translation = vec![None; raw.children.len()];
    let mut next = 0;
    for (old, &r) in reach.iter().enumerate() {
        if r {
            translation[old] = Some(next);
            next += 1;
        }
    }
    let mut children = vec![Vec::new(); next];
    for (old, kids) in raw.children.iter().enumerate() {
        if let Some(new) = translation[old] {
            let mut mapped: Vec<NodeId> = kids.iter().map(|&c| translation[c].unwrap()).collect();
            mapped.sort_unstable();
            mapped.dedup();
            children[new] = mapped;
        }
    }
    let labels = raw
        .labels
        .iter()
        .filter_map(|(&n, l)| translation[n].map(|m| (m, l.clone())))
        .collect();
    let apg = Apg {
        children,
        root: translation[raw.root].unwrap(),
        labels,
    };
    (apg, translation)
}

pub(crate) fn reachable(children: &[Vec<NodeId>], root: NodeId) -> Vec<bool> {
    let mut seen = vec![false; children.len()];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &c in &children[v] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    seen
}

/// A finite accessible pointed graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Apg {
    children: Vec<Vec<NodeId>>,
    root: NodeId,
    labels: BTreeMap<NodeId, String>,
}

impl Apg {
    /// Builds an APG, rejecting out-of-range ids, duplicate edges and nodes
    /// the root cannot reach.
    pub fn new(mut children: Vec<Vec<NodeId>>, root: NodeId) -> Result<Self> {
        let n = children.len();
        if root >= n {
            return Err(Error::InvalidGraph(format!("root {root} out of range for {n} nodes")));
        }
        for (from, kids) in children.iter_mut().enumerate() {
            if let Some(&bad) = kids.iter().find(|&&c| c >= n) {
                return Err(Error::InvalidGraph(format!(
                    "edge {from}->{bad} out of range for {n} nodes"
                )));
            }
            kids.sort_unstable();
            if let Some(w) = kids.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge {from}->{}", w[0])));
            }
        }
        if let Some(unreached) = reachable(&children, root).iter().position(|r| !r) {
            return Err(Error::InvalidGraph(format!(
                "node {unreached} is not reachable from root {root}"
            )));
        }
        Ok(Apg {
            children,
            root,
            labels: BTreeMap::new(),
        })
    }

    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)], root: NodeId) -> Result<Self> {
        let mut children = vec![Vec::new(); node_count];
        for &(from, to) in edges {
            if from >= node_count || to >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {from}->{to} out of range for {node_count} nodes"
                )));
            }
            children[from].push(to);
        }
        Apg::new(children, root)
    }

    pub fn with_labels(mut self, labels: BTreeMap<NodeId, String>) -> Result<Self> {
        if let Some((&bad, _)) = labels.range(self.node_count()..).next() {
            return Err(Error::InvalidGraph(format!("label on missing node {bad}")));
        }
        self.labels = labels;
        Ok(self)
    }

    /// The Quine atom: one node that is its own only element.
    pub fn quine_atom() -> Self {
        Apg {
            children: vec![vec![0]],
            root: 0,
            labels: BTreeMap::new(),
        }
    }

    pub fn empty_set() -> Self {
        Apg::numeral(0)
    }

    /// The von Neumann numeral `k`; node `i` is the numeral `i` and the root
    /// is node `k`.
    pub fn numeral(k: usize) -> Self {
        Apg {
            children: (0..=k).map(|i| (0..i).collect()).collect(),
            root: k,
            labels: BTreeMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.children[node]
    }

    pub fn child_lists(&self) -> &[Vec<NodeId>] {
        &self.children
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.children[from].binary_search(&to).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(from, kids)| kids.iter().map(move |&to| (from, to)))
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, String> {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> Option<&str> {
        self.labels.get(&node).map(String::as_str)
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Parent lists, sorted ascending.
    pub fn parents(&self) -> Vec<Vec<NodeId>> {
        let mut parents = vec![Vec::new(); self.node_count()];
        for (from, to) in self.edges() {
            parents[to].push(from);
        }
        parents
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            children: self.children.clone(),
            root: self.root,
            labels: self.labels.clone(),
        }
    }

    /// The same graph with a different root, trimmed to what that root reaches.
    pub fn rerooted(&self, root: NodeId) -> (Apg, Translation) {
        let mut raw = self.to_raw();
        raw.root = root;
        trim_to_accessible(&raw)
    }

    /// The sub-APG of the points accessible from `node`.
    pub fn sub_apg(&self, node: NodeId) -> Apg {
        self.rerooted(node).0
    }

    /// Renumbers nodes with `perm[old] = new`. `perm` must be a permutation.
    pub fn permuted(&self, perm: &[NodeId]) -> Apg {
        let n = self.node_count();
        debug_assert_eq!(perm.len(), n);
        let mut children = vec![Vec::new(); n];
        for (old, kids) in self.children.iter().enumerate() {
            let mut mapped: Vec<NodeId> = kids.iter().map(|&c| perm[c]).collect();
            mapped.sort_unstable();
            children[perm[old]] = mapped;
        }
        Apg {
            children,
            root: perm[self.root],
            labels: self.labels.iter().map(|(&k, v)| (perm[k], v.clone())).collect(),
        }
    }

    /// Relabels nodes in breadth-first order from the root, visiting children
    /// in ascending order of their counting-refinement signature class.
    ///
    /// Returns the relabelled graph and the map `old -> new`.
    pub fn normalized(&self) -> (Apg, Vec<NodeId>) {
        let colors = crate::equivalence::counting_colors(self);
        self.bfs_relabel(|c| (colors[c], c))
    }

    fn bfs_relabel<K: Ord>(&self, key: impl Fn(NodeId) -> K) -> (Apg, Vec<NodeId>) {
        let n = self.node_count();
        let mut perm = vec![usize::MAX; n];
        let mut queue = VecDeque::from([self.root]);
        perm[self.root] = 0;
        let mut next = 1;
        while let Some(v) = queue.pop_front() {
            let mut kids = self.children[v].clone();
            kids.sort_by_key(|&c| key(c));
            for c in kids {
                if perm[c] == usize::MAX {
                    perm[c] = next;
                    next += 1;
                    queue.push_back(c);
                }
            }
        }
        (self.permuted(&perm), perm)
    }

    /// Like [`Apg::normalized`], but ties between children of equal counting
    /// class are broken by a canonical labeling, so graphs that are relabelings
    /// of each other normalize to the same graph. Meant for canonical pictures;
    /// the tie-breaking search is exponential on highly symmetric graphs.
    pub fn canonically_ordered(&self) -> (Apg, Vec<NodeId>) {
        let colors = crate::equivalence::counting_colors(self);
        let distinct: BTreeSet<usize> = colors.iter().copied().collect();
        if distinct.len() == self.node_count() {
            return self.normalized();
        }
        let labels = crate::search::canonical_labeling(self, &colors);
        self.bfs_relabel(|c| (colors[c], labels[c]))
    }

    pub fn is_self_loop(&self, node: NodeId) -> bool {
        self.has_edge(node, node)
    }

    /// True iff the child relation has no cycle. Every node is reachable from
    /// the root, so any cycle makes the root ill-founded too.
    pub fn is_well_founded(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Nodes ordered so every child precedes its parents, or `None` if there
    /// is a cycle.
    pub(crate) fn topological_order(&self) -> Option<Vec<NodeId>> {
        let n = self.node_count();
        let parents = self.parents();
        let mut pending: Vec<usize> = self.children.iter().map(Vec::len).collect();
        let mut order: Vec<NodeId> = (0..n).filter(|&v| pending[v] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &p in &parents[v] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    order.push(p);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Nodes that lie on or reach a cycle.
    pub fn ill_founded_nodes(&self) -> Vec<bool> {
        let parents = self.parents();
        let mut pending: Vec<usize> = self.children.iter().map(Vec::len).collect();
        let mut grounded = vec![false; self.node_count()];
        let mut stack: Vec<NodeId> = self.nodes().filter(|&v| pending[v] == 0).collect();
        while let Some(v) = stack.pop() {
            grounded[v] = true;
            for &p in &parents[v] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    stack.push(p);
                }
            }
        }
        grounded.into_iter().map(|g| !g).collect()
    }

    /// Set-theoretic rank of every node: 0 for childless nodes, otherwise one
    /// more than the largest child rank.
    pub fn rank_map(&self) -> Result<Vec<usize>> {
        let order = self.topological_order().ok_or_else(|| {
            let bad = self.ill_founded_nodes();
            Error::NotWellFounded {
                node: bad.iter().position(|&b| b).unwrap_or(self.root),
            }
        })?;
        let mut rank = vec![0; self.node_count()];
        for v in order {
            rank[v] = self.children[v].iter().map(|&c| rank[c] + 1).max().unwrap_or(0);
        }
        Ok(rank)
    }

    /// Nodes with literally identical child sets, as a witness against plain
    /// extensionality.
    pub fn extensionality_witness(&self) -> Option<(NodeId, NodeId)> {
        let mut seen: BTreeMap<&[NodeId], NodeId> = BTreeMap::new();
        for v in self.nodes() {
            if let Some(&u) = seen.get(self.children[v].as_slice()) {
                return Some((u, v));
            }
            seen.insert(&self.children[v], v);
        }
        None
    }

    /// The Apg of a disjoint union of `self` and `other` under a fresh root
    /// whose children are the two old roots. Returns the union plus the
    /// offset of `other`'s nodes; `self`'s nodes keep their ids.
    pub fn disjoint_union(&self, other: &Apg) -> (Apg, NodeId) {
        let offset = self.node_count();
        let mut children = self.children.clone();
        children.extend(
            other
                .children
                .iter()
                .map(|kids| kids.iter().map(|&c| c + offset).collect::<Vec<_>>()),
        );
        let root = children.len();
        let mut top = vec![self.root, other.root + offset];
        top.sort_unstable();
        top.dedup();
        children.push(top);
        (
            Apg {
                children,
                root,
                labels: BTreeMap::new(),
            },
            offset,
        )
    }
}

/// An equivalence partition of the nodes of a graph.
///
/// Class ids are contiguous from 0 and numbered in order of first occurrence,
/// so two partitions are equal exactly when they group nodes the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    class_count: usize,
}

impl Partition {
    /// Builds a partition from arbitrary labels; equal labels share a class.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Self {
        let mut ids: BTreeMap<L, usize> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for l in labels {
            let next = ids.len();
            class_of.push(*ids.entry(l.clone()).or_insert(next));
        }
        Partition {
            class_count: ids.len(),
            class_of,
        }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
            class_count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            class_of: vec![0; n],
            class_count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn class_of(&self, node: NodeId) -> usize {
        self.class_of[node]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same_class(&self, a: NodeId, b: NodeId) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.class_count == self.class_of.len()
    }

    pub fn classes(&self) -> Vec<Vec<NodeId>> {
        let mut classes = vec![Vec::new(); self.class_count];
        for (v, &c) in self.class_of.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }

    /// Two distinct nodes sharing a class, if any.
    pub fn merging_pair(&self) -> Option<(NodeId, NodeId)> {
        let mut first = vec![None; self.class_count];
        for (v, &c) in self.class_of.iter().enumerate() {
            match first[c] {
                Some(u) => return Some((u, v)),
                None => first[c] = Some(v),
            }
        }
        None
    }

    /// True iff every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image = vec![None; self.class_count];
        self.class_of
            .iter()
            .zip(&coarser.class_of)
            .all(|(&fine, &coarse)| match image[fine] {
                None => {
                    image[fine] = Some(coarse);
                    true
                }
                Some(c) => c == coarse,
            })
    }
}

/// Collapses each class of `partition` to one node.
///
/// The children of a class are the classes of the children of all its
/// members, merged into a set. The result is normalized (see
/// [`Apg::normalized`]); the returned projection maps every original node to
/// its class node and is a decoration of `g` onto the quotient.
pub fn quotient(g: &Apg, partition: &Partition) -> (Apg, Vec<NodeId>) {
    assert_eq!(partition.len(), g.node_count(), "partition does not match graph");
    let mut children = vec![Vec::new(); partition.class_count()];
    for (from, to) in g.edges() {
        children[partition.class_of(from)].push(partition.class_of(to));
    }
    for kids in &mut children {
        kids.sort_unstable();
        kids.dedup();
    }
    let labels = g
        .labels
        .iter()
        .map(|(&n, l)| (partition.class_of(n), l.clone()))
        .collect();
    let raw = RawGraph {
        children,
        root: partition.class_of(g.root),
        labels,
    };
    // Every class contains a reachable node, so nothing is dropped here.
    let (collapsed, translation) = trim_to_accessible(&raw);
    let (normal, perm) = collapsed.normalized();
    let projection = partition
        .class_ids()
        .iter()
        .map(|&c| perm[translation[c].expect("class unreachable")])
        .collect();
    (normal, projection)
}
