//! Reference oracles. Each is written from the definitions, independently of
//! the library algorithms it checks, and is only meant for small inputs.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hyperset::apg::{Apg, NodeId};
use proptest::prelude::*;

/// Greatest bisimulation by shrinking the full relation until it is stable.
pub fn naive_bisimulation(g: &Apg) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut rel = vec![vec![true; n]; n];
    let covered =
        |rel: &Vec<Vec<bool>>, xs: &[NodeId], ys: &[NodeId]| xs.iter().all(|&a| ys.iter().any(|&b| rel[a][b]));
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if rel[x][y] {
                    let (cx, cy) = (g.children(x), g.children(y));
                    if !covered(&rel, cx, cy) || !covered(&rel, cy, cx) {
                        rel[x][y] = false;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Whether a partition given by class ids induces exactly `rel`.
pub fn partition_matches(class_of: &[usize], rel: &[Vec<bool>]) -> bool {
    let n = class_of.len();
    (0..n).all(|x| (0..n).all(|y| (class_of[x] == class_of[y]) == rel[x][y]))
}

/// Interned codes of depth-truncated unfoldings: two nodes share a code iff
/// their unfoldings cut at `depth` are isomorphic as unordered trees.
/// A vertex at the cut keeps only its arity.
pub fn unfolding_codes(children: &[Vec<NodeId>], depth: usize) -> Vec<usize> {
    let mut table: BTreeMap<(bool, Vec<usize>), usize> = BTreeMap::new();
    let mut intern = |key: (bool, Vec<usize>)| {
        let next = table.len();
        *table.entry(key).or_insert(next)
    };
    let mut codes: Vec<usize> = children.iter().map(|k| intern((false, vec![k.len()]))).collect();
    for _ in 0..depth {
        codes = children
            .iter()
            .map(|kids| {
                let mut sub: Vec<usize> = kids.iter().map(|&c| codes[c]).collect();
                sub.sort_unstable();
                intern((true, sub))
            })
            .collect();
    }
    codes
}

/// SAFA equality from the tree semantics: nodes whose unfoldings (cut at one
/// more than the node count) are isomorphic denote the same set; merging them
/// can make child sets shrink, so repeat until nothing merges, then compare
/// the roots.
pub fn safa_equal_oracle(g1: &Apg, g2: &Apg) -> bool {
    let off = g1.node_count();
    let mut children: Vec<Vec<NodeId>> = g1.child_lists().to_vec();
    children.extend(g2.child_lists().iter().map(|k| k.iter().map(|c| c + off).collect()));
    let mut r1 = g1.root();
    let mut r2 = g2.root() + off;
    loop {
        let n = children.len();
        let codes = unfolding_codes(&children, n + 1);
        let mut class: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &codes {
            let next = class.len();
            class.entry(c).or_insert(next);
        }
        if class.len() == n {
            // no merges: compare whole unfoldings of the two roots
            return codes[r1] == codes[r2];
        }
        let mut merged = vec![BTreeSet::new(); class.len()];
        for (v, kids) in children.iter().enumerate() {
            merged[class[&codes[v]]].extend(kids.iter().map(|&c| class[&codes[c]]));
        }
        children = merged.into_iter().map(|s| s.into_iter().collect()).collect();
        r1 = class[&codes[r1]];
        r2 = class[&codes[r2]];
    }
}

/// Mostowski collapse of a well-founded graph, computed rank by rank: each
/// node's value is the set of its children's values. Returns the value id of
/// every node and the collapse as a graph over value ids, rooted at the
/// root's value.
pub fn mostowski(g: &Apg) -> (Vec<usize>, Apg) {
    let n = g.node_count();
    let mut rank = vec![usize::MAX; n];
    let mut done = 0;
    while done < n {
        for v in 0..n {
            if rank[v] == usize::MAX && g.children(v).iter().all(|&c| rank[c] != usize::MAX) {
                rank[v] = g.children(v).iter().map(|&c| rank[c] + 1).max().unwrap_or(0);
                done += 1;
            }
        }
    }
    let mut by_rank: Vec<NodeId> = (0..n).collect();
    by_rank.sort_by_key(|&v| rank[v]);
    let mut values: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut value = vec![0; n];
    for v in by_rank {
        let set: BTreeSet<usize> = g.children(v).iter().map(|&c| value[c]).collect();
        let next = values.len();
        value[v] = *values.entry(set).or_insert(next);
    }
    let mut kids = vec![Vec::new(); values.len()];
    for (set, &id) in &values {
        kids[id] = set.iter().copied().collect();
    }
    let collapse = hyperset::apg::trim_to_accessible(&hyperset::apg::RawGraph::new(kids, value[g.root()]).unwrap()).0;
    (value, collapse)
}

fn permutations(n: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    fn go(p: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if p.len() == n {
            return f(p);
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                p.push(v);
                let stop = go(p, used, n, f);
                p.pop();
                used[v] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
    go(&mut Vec::new(), &mut vec![false; n], n, f);
}

fn preserves(g1: &Apg, g2: &Apg, p: &[usize]) -> bool {
    p[g1.root()] == g2.root() && g1.edge_count() == g2.edge_count() && g1.edges().all(|(a, b)| g2.has_edge(p[a], p[b]))
}

/// Brute force over all bijections.
pub fn brute_isomorphic(g1: &Apg, g2: &Apg) -> bool {
    if g1.node_count() != g2.node_count() {
        return false;
    }
    let mut found = false;
    permutations(g1.node_count(), &mut |p| {
        found = preserves(g1, g2, p);
        found
    });
    found
}

/// Number of root-fixing automorphisms, by brute force.
pub fn brute_automorphism_count(g: &Apg) -> usize {
    let mut count = 0;
    permutations(g.node_count(), &mut |p| {
        if preserves(g, g, p) {
            count += 1;
        }
        false
    });
    count
}

/// Accessible graphs with up to `max_nodes` nodes: a random spanning tree
/// from node 0 plus random extra edges, self-loops included.
pub fn arb_apg(max_nodes: usize) -> impl Strategy<Value = Apg> {
    (1..=max_nodes).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        (parents, prop::collection::vec((0..n, 0..n), 0..=2 * n)).prop_map(move |(parents, extra)| {
            let mut edges: BTreeSet<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            edges.extend(extra);
            let edges: Vec<_> = edges.into_iter().collect();
            Apg::from_edges(n, &edges, 0).unwrap()
        })
    })
}

/// Well-founded graphs: edges only run from higher to lower node ids.
pub fn arb_well_founded(max_nodes: usize) -> impl Strategy<Value = Apg> {
    (1..=max_nodes).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (0..n - 1).map(|v| (v + 1..n).boxed()).collect();
        (parents, prop::collection::vec((0..n, 0..n), 0..=2 * n)).prop_map(move |(parents, extra)| {
            let mut edges: BTreeSet<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a > b));
            let edges: Vec<_> = edges.into_iter().collect();
            Apg::from_edges(n, &edges, n - 1).unwrap()
        })
    })
}

pub mod universes {
    use std::collections::{BTreeMap, BTreeSet};

    use hyperset::boffa::{Extension, PartialIso, SetId, Universe};
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// A universe of at most `max_sets` sets: a few atoms and numerals, then
    /// random extensions over random old sets.
    pub fn random_universe<R: Rng>(r: &mut R, max_sets: usize) -> Universe {
        let mut u = Universe::new();
        for _ in 0..r.gen_range(1..=4) {
            u.add_quine_atom();
        }
        for k in 0..r.gen_range(0..=3) {
            u.numeral(k).unwrap();
        }
        for _ in 0..40 {
            let ids: Vec<SetId> = u.ids().collect();
            let mut ext = Extension::new();
            let mut olds = Vec::new();
            for _ in 0..r.gen_range(0..=3) {
                let id = *ids.choose(r).unwrap();
                olds.push(ext.old_node(&u, id).unwrap());
            }
            let fresh: Vec<usize> = (0..r.gen_range(1..=3)).map(|_| ext.new_node()).collect();
            for &v in &fresh {
                for &c in olds.iter().chain(&fresh) {
                    if r.gen_bool(0.4) {
                        ext.add_child(v, c);
                    }
                }
            }
            let mut trial = u.clone();
            if trial.insert(&ext).is_ok() && trial.len() <= max_sets {
                u = trial;
            }
        }
        u
    }

    /// Whether membership below `x` has no cycle.
    pub fn well_founded(u: &Universe, x: SetId) -> bool {
        fn go(u: &Universe, x: SetId, state: &mut BTreeMap<SetId, bool>) -> bool {
            match state.get(&x) {
                Some(&done) => return done,
                None => {
                    state.insert(x, false);
                }
            }
            let ok = u.members(x).unwrap().iter().all(|&m| go(u, m, state));
            state.insert(x, ok);
            ok
        }
        go(u, x, &mut BTreeMap::new())
    }

    pub fn closure(u: &Universe, roots: &[SetId]) -> BTreeSet<SetId> {
        let mut seen = BTreeSet::new();
        let mut stack = roots.to_vec();
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend(u.members(x).unwrap().iter().copied());
            }
        }
        seen
    }

    /// A partial isomorphism between transitive sets: empty, an identity on a
    /// closure, or a swap of two atoms next to an identity on well-founded
    /// sets.
    pub fn random_partial_iso<R: Rng>(r: &mut R, u: &Universe) -> PartialIso {
        let ids: Vec<SetId> = u.ids().collect();
        match r.gen_range(0..3) {
            0 => PartialIso::new(),
            1 => {
                let y = *ids.choose(r).unwrap();
                closure(u, &[y]).into_iter().map(|z| (z, z)).collect()
            }
            _ => {
                let atoms = u.atoms();
                let wf: Vec<SetId> = ids.iter().copied().filter(|&y| well_founded(u, y)).collect();
                let mut f: PartialIso = match wf.choose(r) {
                    Some(&w) => closure(u, &[w]).into_iter().map(|z| (z, z)).collect(),
                    None => PartialIso::new(),
                };
                if atoms.len() >= 2 {
                    let pick: Vec<SetId> = atoms.choose_multiple(r, 2).copied().collect();
                    f.insert(pick[0], pick[1]);
                    f.insert(pick[1], pick[0]);
                }
                f
            }
        }
    }

    /// Checks that `g` extends `f`, covers `x`, is a bijection between
    /// transitive sets that preserves membership both ways, and fixes every
    /// well-founded set it touches.
    pub fn check_extension(u: &Universe, f: &PartialIso, x: SetId, g: &PartialIso) -> Result<(), String> {
        if let Some((k, _)) = f.iter().find(|(k, v)| g.get(k) != Some(v)) {
            return Err(format!("{k} changed or dropped"));
        }
        if !g.contains_key(&x) {
            return Err(format!("{x} not covered"));
        }
        let range: BTreeSet<SetId> = g.values().copied().collect();
        if range.len() != g.len() {
            return Err("not injective".into());
        }
        for (&d, &e) in g {
            let members = u.members(d).map_err(|e| e.to_string())?;
            if !members.iter().all(|m| g.contains_key(m)) {
                return Err(format!("domain not transitive at {d}"));
            }
            let target = u.members(e).map_err(|e| e.to_string())?;
            if !target.iter().all(|m| range.contains(m)) {
                return Err(format!("range not transitive at {e}"));
            }
            let image: BTreeSet<SetId> = members.iter().map(|m| g[m]).collect();
            if &image != target {
                return Err(format!("members of {d} do not map onto members of {e}"));
            }
            if well_founded(u, d) && d != e {
                return Err(format!("well-founded {d} moved to {e}"));
            }
        }
        Ok(())
    }
}

pub mod roundtrip {
    use std::path::PathBuf;

    use hyperset::apg::Apg;
    use hyperset::boffa::Universe;
    use hyperset::hsl::{flatten, flatten_boffa, parse, unparse};
    use hyperset::search::pointed_isomorphic;

    pub fn corpus_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
    }

    /// Every `.hs-set` file in the docs corpus, sorted by name.
    pub fn corpus() -> Vec<(String, String)> {
        let mut files: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
            .expect("docs corpus")
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "hs-set"))
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read_to_string(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    }

    /// unparse, parse and flatten `g`, then compare with `g`.
    pub fn graph_round_trip(g: &Apg) -> Result<(), String> {
        let text = unparse(g);
        let program = parse(&text).map_err(|e| format!("{e} in\n{text}"))?;
        let back = flatten(&program).map_err(|e| e.to_string())?;
        let (_, h) = back.iter().find(|(n, _)| n == "x0").ok_or("no x0")?;
        match pointed_isomorphic(g, h).map_err(|e| e.to_string())? {
            Some(_) => Ok(()),
            None => Err(format!("{g:?} came back as {h:?} via\n{text}")),
        }
    }

    /// Round-trips every name of a program. Programs with atoms go through a
    /// Boffa universe and use the pictures of the inserted sets.
    pub fn program_round_trip(text: &str) -> Result<usize, String> {
        let program = parse(text).map_err(|e| e.to_string())?;
        let graphs: Vec<(String, Apg)> = if program.has_atoms() {
            let mut u = Universe::new();
            let ids = flatten_boffa(&program, &mut u).map_err(|e| e.to_string())?;
            ids.into_iter().map(|(n, id)| (n, u.picture_of(id).unwrap())).collect()
        } else {
            flatten(&program).map_err(|e| e.to_string())?
        };
        for (name, g) in &graphs {
            graph_round_trip(g).map_err(|e| format!("{name}: {e}"))?;
        }
        Ok(graphs.len())
    }
}
