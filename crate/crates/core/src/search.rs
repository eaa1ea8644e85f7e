//! Root-preserving isomorphism and automorphism search.
//!
//! Both searches run on the disjoint union of two graphs (for automorphisms,
//! a graph and its copy). Nodes carry colors that are refined until
//! equitable: two nodes of one color have the same number of children and the
//! same number of parents in every color. Colors are ranked by their
//! signatures, so the refinement commutes with isomorphism and a color class
//! whose two sides differ in size proves there is no isomorphism below the
//! current branch. Branching individualizes one node on each side.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;

use crate::apg::{Apg, NodeId};
use crate::{Limits, Result};

/// A root-preserving isomorphism `g1 -> g2` given as `map[v1] = v2`, if one
/// exists. Uses the default node cap.
pub fn pointed_isomorphic(g1: &Apg, g2: &Apg) -> Result<Option<Vec<NodeId>>> {
    pointed_isomorphic_with(g1, g2, &Limits::default())
}

pub fn pointed_isomorphic_with(g1: &Apg, g2: &Apg, limits: &Limits) -> Result<Option<Vec<NodeId>>> {
    limits.check_iso(g1.node_count())?;
    limits.check_iso(g2.node_count())?;
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let pair = Pair::new(g1, g2);
    let mut colors = vec![0; pair.len()];
    colors[g1.root()] = 1;
    colors[pair.offset + g2.root()] = 1;
    Ok(pair.find(colors))
}

/// Automorphisms of `g` fixing its root, as a strong generating set plus the
/// group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    /// Number of nodes acted on.
    pub degree: usize,
    /// Generators as permutations `p[v] = image of v`; none for the trivial
    /// group.
    pub generators: Vec<Vec<NodeId>>,
    pub order: BigUint,
    /// Base points fixed one after another, with the orbit size of each in the
    /// stabilizer of its predecessors.
    pub base: Vec<(NodeId, usize)>,
}

impl AutomorphismGroup {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    /// Every element of the group, identity first, by closing the generators
    /// under composition. `None` if the order exceeds `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<NodeId>>> {
        if self.order > BigUint::from(limit) {
            return None;
        }
        let identity: Vec<NodeId> = (0..self.degree).collect();
        let mut seen = BTreeSet::from([identity.clone()]);
        let mut out = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    out.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Some(out)
    }
}

/// `(f ∘ g)(v) = f(g(v))`.
pub fn compose(f: &[NodeId], g: &[NodeId]) -> Vec<NodeId> {
    g.iter().map(|&v| f[v]).collect()
}

pub fn invert(p: &[NodeId]) -> Vec<NodeId> {
    let mut inv = vec![0; p.len()];
    for (v, &image) in p.iter().enumerate() {
        inv[image] = v;
    }
    inv
}

/// True iff `p` is a root-fixing bijection preserving and reflecting edges.
pub fn is_automorphism(g: &Apg, p: &[NodeId]) -> bool {
    is_isomorphism(g, g, p)
}

pub fn is_isomorphism(g1: &Apg, g2: &Apg, map: &[NodeId]) -> bool {
    let n = g1.node_count();
    if map.len() != n || g2.node_count() != n || map[g1.root()] != g2.root() {
        return false;
    }
    let mut hit = vec![false; n];
    for &image in map {
        if image >= n || std::mem::replace(&mut hit[image], true) {
            return false;
        }
    }
    g1.edge_count() == g2.edge_count() && g1.edges().all(|(a, b)| g2.has_edge(map[a], map[b]))
}

/// The automorphism group of `g`, with the default node cap.
pub fn automorphisms(g: &Apg, seed: &[usize]) -> Result<AutomorphismGroup> {
    automorphisms_with(g, seed, &Limits::default())
}

/// Computes the automorphism group by a base-and-orbit search.
///
/// `seed` is an initial coloring that every automorphism must preserve (for
/// example the counting partition). For each base point the orbit under the
/// pointwise stabilizer of the earlier base points is built by searching one
/// automorphism per candidate image, skipping candidates already reached
/// through generators found at that level.
pub fn automorphisms_with(g: &Apg, seed: &[usize], limits: &Limits) -> Result<AutomorphismGroup> {
    limits.check_iso(g.node_count())?;
    Ok(stabilizer_chain(g, seed, false))
}

/// Whether `g` has a non-identity automorphism; stops at the first one.
pub fn first_nontrivial_automorphism(g: &Apg, seed: &[usize], limits: &Limits) -> Result<Option<Vec<NodeId>>> {
    limits.check_iso(g.node_count())?;
    Ok(stabilizer_chain(g, seed, true).generators.into_iter().next())
}

fn stabilizer_chain(g: &Apg, seed: &[usize], stop_early: bool) -> AutomorphismGroup {
    let n = g.node_count();
    assert_eq!(seed.len(), n, "seed coloring does not match graph");
    let pair = Pair::new(g, g);
    let mut colors: Vec<usize> = seed.iter().chain(seed).map(|&c| c + 1).collect();
    colors[g.root()] = 0;
    colors[n + g.root()] = 0;
    let mut group = AutomorphismGroup {
        degree: n,
        generators: Vec::new(),
        order: BigUint::from(1u32),
        base: Vec::new(),
    };
    loop {
        pair.refine(&mut colors);
        let Some(cell) = pair.target_cell(&colors) else {
            break;
        };
        let v = cell.0;
        let mut level_gens: Vec<Vec<NodeId>> = Vec::new();
        let mut orbit = BTreeSet::from([v]);
        for &w in &cell.1 {
            if orbit.contains(&w) {
                continue;
            }
            let mut trial = colors.clone();
            pair.individualize(&mut trial, v, w);
            if let Some(p) = pair.find(trial) {
                level_gens.push(p);
                if stop_early {
                    group.generators = level_gens;
                    return group;
                }
                orbit = orbit_of(v, &level_gens);
            }
        }
        group.order *= BigUint::from(orbit.len());
        group.base.push((v, orbit.len()));
        group.generators.extend(level_gens);
        pair.individualize(&mut colors, v, v);
    }
    group
}

fn orbit_of(v: NodeId, gens: &[Vec<NodeId>]) -> BTreeSet<NodeId> {
    let mut orbit = BTreeSet::from([v]);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            if orbit.insert(g[x]) {
                queue.push_back(g[x]);
            }
        }
    }
    orbit
}

/// Two graphs side by side: left nodes `0..offset`, right nodes
/// `offset..2*offset`.
struct Pair {
    offset: usize,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

/// Left and right members of one color class.
type Cell = (Vec<NodeId>, Vec<NodeId>);

impl Pair {
    fn new(g1: &Apg, g2: &Apg) -> Pair {
        let offset = g1.node_count();
        let mut children: Vec<Vec<usize>> = g1.child_lists().to_vec();
        children.extend(
            g2.child_lists()
                .iter()
                .map(|kids| kids.iter().map(|&c| c + offset).collect::<Vec<_>>()),
        );
        let mut parents = vec![Vec::new(); children.len()];
        for (from, kids) in children.iter().enumerate() {
            for &to in kids {
                parents[to].push(from);
            }
        }
        Pair {
            offset,
            children,
            parents,
        }
    }

    /// One graph with no partner; only the refinement and labeling methods
    /// apply.
    fn new_single(g: &Apg) -> Pair {
        let children = g.child_lists().to_vec();
        let mut parents = vec![Vec::new(); children.len()];
        for (from, kids) in children.iter().enumerate() {
            for &to in kids {
                parents[to].push(from);
            }
        }
        Pair {
            offset: children.len(),
            children,
            parents,
        }
    }

    fn len(&self) -> usize {
        self.children.len()
    }

    fn canonical_leaf(&self, mut colors: Vec<usize>, best: &mut Option<(Vec<Vec<NodeId>>, Vec<NodeId>)>) {
        self.refine(&mut colors);
        let mut cells: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let target = cells.values().filter(|c| c.len() > 1).min_by_key(|c| c.len());
        match target {
            None => {
                // discrete: colors are ranks 0..n, i.e. a permutation
                let mut cert = vec![Vec::new(); self.len()];
                for (v, kids) in self.children.iter().enumerate() {
                    let mut image: Vec<NodeId> = kids.iter().map(|&c| colors[c]).collect();
                    image.sort_unstable();
                    cert[colors[v]] = image;
                }
                if best.as_ref().is_none_or(|(b, _)| cert < *b) {
                    *best = Some((cert, colors));
                }
            }
            Some(cell) => {
                let fresh = colors.iter().max().map_or(0, |m| m + 1);
                for &w in cell {
                    let mut trial = colors.clone();
                    trial[w] = fresh;
                    self.canonical_leaf(trial, best);
                }
            }
        }
    }

    /// Refines to an equitable coloring with colors ranked by signature.
    fn refine(&self, colors: &mut [usize]) {
        let mut count = distinct(colors);
        loop {
            let keys: Vec<Vec<usize>> = (0..self.len())
                .map(|v| {
                    let mut out: Vec<usize> = self.children[v].iter().map(|&c| colors[c]).collect();
                    let mut inc: Vec<usize> = self.parents[v].iter().map(|&p| colors[p]).collect();
                    out.sort_unstable();
                    inc.sort_unstable();
                    let mut key = Vec::with_capacity(out.len() + inc.len() + 2);
                    key.push(colors[v]);
                    key.push(out.len());
                    key.extend(out);
                    key.extend(inc);
                    key
                })
                .collect();
            let ranks: BTreeMap<&Vec<usize>, usize> = keys
                .iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, k)| (k, i))
                .collect();
            for (v, key) in keys.iter().enumerate() {
                colors[v] = ranks[key];
            }
            if ranks.len() == count {
                return;
            }
            count = ranks.len();
        }
    }

    /// Gives `left` and `offset + right` a color of their own.
    fn individualize(&self, colors: &mut [usize], left: NodeId, right: NodeId) {
        let fresh = colors.iter().max().map_or(0, |m| m + 1);
        colors[left] = fresh;
        colors[self.offset + right] = fresh;
    }

    /// Per color: (left members, right members), or `None` if some color is
    /// unbalanced.
    fn cells(&self, colors: &[usize]) -> Option<BTreeMap<usize, Cell>> {
        let mut cells: BTreeMap<usize, Cell> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            let cell = cells.entry(c).or_default();
            if v < self.offset {
                cell.0.push(v);
            } else {
                cell.1.push(v - self.offset);
            }
        }
        cells.values().all(|(l, r)| l.len() == r.len()).then_some(cells)
    }

    /// The smallest non-singleton cell (ties broken by color): its first left
    /// node and all its right nodes.
    fn target_cell(&self, colors: &[usize]) -> Option<(NodeId, Vec<NodeId>)> {
        let cells = self.cells(colors).expect("automorphism coloring is balanced");
        cells
            .into_values()
            .filter(|(l, _)| l.len() > 1)
            .min_by_key(|(l, _)| l.len())
            .map(|(l, r)| (l[0], r))
    }

    /// Depth-first search for an isomorphism left -> right compatible with
    /// `colors`.
    fn find(&self, mut colors: Vec<usize>) -> Option<Vec<NodeId>> {
        self.refine(&mut colors);
        let cells = self.cells(&colors)?;
        let branch = cells.values().filter(|(l, _)| l.len() > 1).min_by_key(|(l, _)| l.len());
        match branch {
            None => {
                let mut map = vec![0; self.offset];
                for (l, r) in cells.values() {
                    map[l[0]] = r[0];
                }
                self.is_iso(&map).then_some(map)
            }
            Some((l, r)) => {
                let v = l[0];
                r.iter().find_map(|&w| {
                    let mut trial = colors.clone();
                    self.individualize(&mut trial, v, w);
                    self.find(trial)
                })
            }
        }
    }

    fn is_iso(&self, map: &[NodeId]) -> bool {
        (0..self.offset).all(|v| {
            let mut image: Vec<usize> = self.children[v].iter().map(|&c| map[c] + self.offset).collect();
            image.sort_unstable();
            image == self.children[map[v] + self.offset]
        })
    }
}

/// An isomorphism-invariant labeling `old -> new` of the nodes of `g`.
///
/// Explores every leaf of the individualization-refinement tree (seeded by
/// `seed` with the root singled out) and keeps the labeling whose relabeled
/// edge lists are smallest. Graphs related by a relabeling get identical
/// relabeled graphs. Every leaf is visited, so this is only for graphs with
/// few automorphisms, such as canonical pictures.
pub fn canonical_labeling(g: &Apg, seed: &[usize]) -> Vec<NodeId> {
    let n = g.node_count();
    assert_eq!(seed.len(), n, "seed coloring does not match graph");
    let single = Pair::new_single(g);
    let mut colors: Vec<usize> = seed.iter().map(|&c| c + 1).collect();
    colors[g.root()] = 0;
    let mut best: Option<(Vec<Vec<NodeId>>, Vec<NodeId>)> = None;
    single.canonical_leaf(colors, &mut best);
    best.expect("the search tree has a leaf").1
}

fn distinct(colors: &[usize]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

/// Every root-fixing automorphism by trying all permutations. Only for tiny
/// graphs; used as an oracle.
pub fn automorphisms_exhaustive(g: &Apg) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    assert!(n <= 9, "exhaustive automorphism search is limited to 9 nodes");
    let mut out = Vec::new();
    let mut perm: Vec<NodeId> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        if is_automorphism(g, p) {
            out.push(p.to_vec());
        }
    });
    out
}

/// A root-preserving isomorphism found by trying every bijection. Oracle only.
pub fn pointed_isomorphic_exhaustive(g1: &Apg, g2: &Apg) -> Option<Vec<NodeId>> {
    let n = g1.node_count();
    assert!(n <= 9, "exhaustive isomorphism search is limited to 9 nodes");
    if g2.node_count() != n {
        return None;
    }
    let mut perm: Vec<NodeId> = (0..n).collect();
    let mut found = None;
    permutations(&mut perm, 0, &mut |p| {
        if found.is_none() && is_isomorphism(g1, g2, p) {
            found = Some(p.to_vec());
        }
    });
    found
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle(root: NodeId) -> Apg {
        Apg::from_edges(2, &[(0, 1), (1, 0)], root).unwrap()
    }

    fn trivial_seed(g: &Apg) -> Vec<usize> {
        vec![0; g.node_count()]
    }

    #[test]
    fn iso_examples() {
        let omega = Apg::quine_atom();
        assert_eq!(pointed_isomorphic(&omega, &omega).unwrap(), Some(vec![0]));
        assert_eq!(pointed_isomorphic(&omega, &two_cycle(0)).unwrap(), None);
        let map = pointed_isomorphic(&two_cycle(0), &two_cycle(1)).unwrap().unwrap();
        assert_eq!(map, vec![1, 0]);
    }

    #[test]
    fn iso_cap() {
        let g = Apg::numeral(10);
        let limits = Limits {
            iso_nodes: 5,
            ..Limits::default()
        };
        assert!(matches!(
            pointed_isomorphic_with(&g, &g, &limits),
            Err(crate::Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn doubleton_of_atoms_has_swap() {
        let g = Apg::from_edges(3, &[(0, 1), (0, 2), (1, 1), (2, 2)], 0).unwrap();
        let group = automorphisms(&g, &trivial_seed(&g)).unwrap();
        assert_eq!(group.order, BigUint::from(2u32));
        assert_eq!(group.generators, vec![vec![0, 2, 1]]);
    }

    #[test]
    fn three_cycle_is_rigid_when_rooted() {
        let g = Apg::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 0).unwrap();
        assert!(automorphisms(&g, &trivial_seed(&g)).unwrap().is_trivial());
        assert_eq!(automorphisms_exhaustive(&g).len(), 1);
    }

    #[test]
    fn many_atoms_order_is_factorial() {
        let k = 6;
        let mut edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
        edges.extend((1..=k).map(|i| (i, i)));
        let g = Apg::from_edges(k + 1, &edges, 0).unwrap();
        let group = automorphisms(&g, &trivial_seed(&g)).unwrap();
        assert_eq!(group.order, BigUint::from(720u32));
        assert_eq!(group.elements(1000).unwrap().len(), 720);
        for p in &group.generators {
            assert!(is_automorphism(&g, p));
        }
    }

    #[test]
    fn compose_and_invert() {
        let p = vec![1, 2, 0];
        assert_eq!(compose(&p, &invert(&p)), vec![0, 1, 2]);
        assert_eq!(compose(&p, &p), vec![2, 0, 1]);
    }
}
