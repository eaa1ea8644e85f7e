//! The three node equivalences behind the anti-foundation semantics.
//!
//! * [`max_bisimulation`]: the coarsest partition where same-class nodes agree
//!   on which classes they have a child in (AFA equality).
//! * [`counting_partition`]: the coarsest partition where same-class nodes
//!   have equally many children in every class; two nodes share a class iff
//!   their tree unfoldings are isomorphic (the finite surrogate for SAFA).
//! * [`finsler_partition`]: nodes grouped by pointed isomorphism of the
//!   sub-graphs they access (FAFA / isomorphism extensionality).
//!
//! Each refines the previous one.

use std::collections::{BTreeMap, BTreeSet};

use crate::apg::{Apg, NodeId, Partition};
use crate::search::pointed_isomorphic_with;
use crate::{Limits, Result};

/// Maximal bisimulation of `g` with itself, by Paige–Tarjan relational
/// coarsest partition refinement in `O(m log n)`.
pub fn max_bisimulation(g: &Apg) -> Partition {
    let blocks = PaigeTarjan::new(g.child_lists()).run();
    Partition::from_labels(&blocks)
}

struct PaigeTarjan {
    // refinable partition
    elems: Vec<usize>,
    loc: Vec<usize>,
    blk: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    mid: Vec<usize>,
    touched: Vec<usize>,
    // compound blocks: unions of blocks the partition is already stable under
    comp_of: Vec<usize>,
    slot_in_comp: Vec<usize>,
    comps: Vec<Vec<usize>>,
    work: Vec<usize>,
    queued: Vec<bool>,
    // edges, grouped by target
    in_edges: Vec<Vec<usize>>,
    src: Vec<usize>,
    // edge -> record holding count(src, compound block of target)
    edge_count: Vec<usize>,
    count: Vec<usize>,
    out_degree: Vec<usize>,
}

impl PaigeTarjan {
    fn new(children: &[Vec<NodeId>]) -> Self {
        let n = children.len();
        let mut in_edges = vec![Vec::new(); n];
        let mut src = Vec::new();
        let mut edge_count = Vec::new();
        let mut count = Vec::new();
        for (x, kids) in children.iter().enumerate() {
            let record = count.len();
            if !kids.is_empty() {
                count.push(kids.len());
            }
            for &y in kids {
                in_edges[y].push(src.len());
                src.push(x);
                edge_count.push(record);
            }
        }
        PaigeTarjan {
            elems: (0..n).collect(),
            loc: (0..n).collect(),
            blk: vec![0; n],
            start: vec![0],
            end: vec![n],
            mid: vec![0],
            touched: Vec::new(),
            comp_of: vec![0],
            slot_in_comp: vec![0],
            comps: vec![vec![0]],
            work: Vec::new(),
            queued: vec![false],
            in_edges,
            src,
            edge_count,
            count,
            out_degree: children.iter().map(Vec::len).collect(),
        }
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    fn mark(&mut self, x: usize) {
        let b = self.blk[x];
        let pos = self.loc[x];
        let m = self.mid[b];
        if pos < m {
            return;
        }
        if m == self.start[b] {
            self.touched.push(b);
        }
        let other = self.elems[m];
        self.elems.swap(pos, m);
        self.loc[other] = pos;
        self.loc[x] = m;
        self.mid[b] = m + 1;
    }

    /// Splits every touched block into its marked and unmarked parts; the
    /// marked part becomes a new block in the same compound block.
    fn split_marked(&mut self) {
        for b in std::mem::take(&mut self.touched) {
            let (s, m) = (self.start[b], self.mid[b]);
            if m == self.end[b] {
                self.mid[b] = s;
                continue;
            }
            let nb = self.start.len();
            self.start.push(s);
            self.end.push(m);
            self.mid.push(s);
            self.start[b] = m;
            self.mid[b] = m;
            for i in s..m {
                self.blk[self.elems[i]] = nb;
            }
            let c = self.comp_of[b];
            self.comp_of.push(c);
            self.slot_in_comp.push(self.comps[c].len());
            self.comps[c].push(nb);
            if self.comps[c].len() > 1 && !self.queued[c] {
                self.queued[c] = true;
                self.work.push(c);
            }
        }
    }

    fn run(mut self) -> Vec<usize> {
        let n = self.elems.len();
        if n == 0 {
            return Vec::new();
        }
        for x in 0..n {
            if self.out_degree[x] > 0 {
                self.mark(x);
            }
        }
        self.split_marked();

        let mut stamp = vec![usize::MAX; n];
        let mut rec_b = vec![0; n];
        let mut rec_s = vec![0; n];
        let mut pre = Vec::new();
        let mut round = 0;
        while let Some(s) = self.work.pop() {
            self.queued[s] = false;
            if self.comps[s].len() < 2 {
                continue;
            }
            let (b1, b2) = (self.comps[s][0], self.comps[s][1]);
            let b = if self.size(b1) <= self.size(b2) { b1 } else { b2 };

            // move B out of S into a compound block of its own
            let slot = self.slot_in_comp[b];
            self.comps[s].swap_remove(slot);
            if let Some(&moved) = self.comps[s].get(slot) {
                self.slot_in_comp[moved] = slot;
            }
            let sb = self.comps.len();
            self.comps.push(vec![b]);
            self.queued.push(false);
            self.comp_of[b] = sb;
            self.slot_in_comp[b] = 0;
            if self.comps[s].len() > 1 && !self.queued[s] {
                self.queued[s] = true;
                self.work.push(s);
            }

            let splitter: Vec<usize> = self.elems[self.start[b]..self.end[b]].to_vec();
            pre.clear();
            for &y in &splitter {
                for i in 0..self.in_edges[y].len() {
                    let e = self.in_edges[y][i];
                    let x = self.src[e];
                    if stamp[x] != round {
                        stamp[x] = round;
                        pre.push(x);
                        rec_b[x] = self.count.len();
                        self.count.push(0);
                        rec_s[x] = self.edge_count[e];
                    }
                    self.count[rec_b[x]] += 1;
                }
            }
            round += 1;

            // stable with respect to B
            for &x in &pre {
                self.mark(x);
            }
            self.split_marked();
            // stable with respect to S \ B: separate nodes whose children in S
            // all lie in B
            for &x in &pre {
                if self.count[rec_b[x]] == self.count[rec_s[x]] {
                    self.mark(x);
                }
            }
            self.split_marked();

            for &y in &splitter {
                for i in 0..self.in_edges[y].len() {
                    let e = self.in_edges[y][i];
                    let x = self.src[e];
                    self.count[self.edge_count[e]] -= 1;
                    self.edge_count[e] = rec_b[x];
                }
            }
        }
        self.blk
    }
}

/// Invariant colors for the counting partition: the class ids are ranks of
/// refinement signatures, so isomorphic graphs get identical colorings.
pub(crate) fn counting_colors(g: &Apg) -> Vec<usize> {
    let n = g.node_count();
    let mut colors = vec![0; n];
    let mut classes = usize::from(n > 0);
    loop {
        let keys: Vec<(usize, Vec<usize>)> = g
            .nodes()
            .map(|v| {
                let mut kids: Vec<usize> = g.children(v).iter().map(|&c| colors[c]).collect();
                kids.sort_unstable();
                (colors[v], kids)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> = keys
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        for (v, key) in keys.iter().enumerate() {
            colors[v] = ranks[key];
        }
        if ranks.len() == classes {
            return colors;
        }
        classes = ranks.len();
    }
}

/// Coarsest partition where nodes of one class have the same number of
/// children in each class.
///
/// Refinement starts from the single-class partition; each round signs a node
/// with the sorted multiset of its children's classes.
pub fn counting_partition(g: &Apg) -> Partition {
    Partition::from_labels(&counting_colors(g))
}

/// Groups nodes whose accessible sub-graphs are pointed-isomorphic.
pub fn finsler_partition(g: &Apg) -> Result<Partition> {
    finsler_partition_with(g, &Limits::default())
}

pub fn finsler_partition_with(g: &Apg, limits: &Limits) -> Result<Partition> {
    limits.check_iso(g.node_count())?;
    let colors = counting_colors(g);
    let subs: Vec<Apg> = g.nodes().map(|v| g.sub_apg(v)).collect();
    // Isomorphic sub-graphs have equal size and, their roots being counting
    // equivalent, equal counting colors; only compare within such buckets.
    let mut buckets: BTreeMap<(usize, usize), Vec<NodeId>> = BTreeMap::new();
    let mut labels = vec![(0, 0); g.node_count()];
    for v in g.nodes() {
        let key = (subs[v].node_count(), colors[v]);
        let reps = buckets.entry(key).or_default();
        let mut found = None;
        for (i, &r) in reps.iter().enumerate() {
            if pointed_isomorphic_with(&subs[v], &subs[r], limits)?.is_some() {
                found = Some(i);
                break;
            }
        }
        let i = found.unwrap_or_else(|| {
            reps.push(v);
            reps.len() - 1
        });
        labels[v] = (key.0 * g.node_count() + key.1, i);
    }
    Ok(Partition::from_labels(&labels))
}
