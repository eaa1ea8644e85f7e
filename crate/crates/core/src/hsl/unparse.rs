use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write;

use crate::apg::{Apg, NodeId};

/// Prints `g` as an equation system whose first name denotes the root.
///
/// Flattening the output gives back a graph pointed-isomorphic to `g`.
/// Numerals and Kuratowski pairs are recognized where reparsing reproduces
/// the same shape; numerals win when a set is both.
pub fn unparse(g: &Apg) -> String {
    unparse_with_prefix(g, "x")
}

pub fn unparse_with_prefix(g: &Apg, prefix: &str) -> String {
    let printer = Printer::new(g);
    let mut names = BTreeMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([g.root()]);
    let mut seen = vec![false; g.node_count()];
    seen[g.root()] = true;
    while let Some(v) = queue.pop_front() {
        if printer.named[v] {
            names.insert(v, format!("{prefix}{}", order.len()));
            order.push(v);
        }
        for &c in g.children(v) {
            if !seen[c] {
                seen[c] = true;
                queue.push_back(c);
            }
        }
    }
    let mut out = String::new();
    for &v in &order {
        let mut body = String::new();
        printer.body(v, &names, &mut body);
        let _ = writeln!(out, "{} = {body};", names[&v]);
    }
    out
}

struct Printer<'a> {
    g: &'a Apg,
    numeral: Vec<Option<usize>>,
    pair: Vec<Option<(NodeId, NodeId)>>,
    named: Vec<bool>,
}

impl<'a> Printer<'a> {
    fn new(g: &'a Apg) -> Self {
        let n = g.node_count();
        let parents = g.parents();
        let indegree: Vec<usize> = parents.iter().map(Vec::len).collect();

        // numeral k: children are numerals with values exactly 0..k
        let mut value: Vec<Option<usize>> = vec![None; n];
        let mut changed = true;
        while changed {
            changed = false;
            for v in g.nodes() {
                if value[v].is_some() {
                    continue;
                }
                let vals: Option<Vec<usize>> = g.children(v).iter().map(|&c| value[c]).collect();
                if let Some(mut vals) = vals {
                    vals.sort_unstable();
                    if vals.iter().enumerate().all(|(i, &k)| i == k) {
                        value[v] = Some(vals.len());
                        changed = true;
                    }
                }
            }
        }
        // pair syntax recreates its two helper sets, so helpers are never
        // printed on their own
        let root = g.root();
        let helper = |s: NodeId, p: NodeId| s != root && s != p && indegree[s] == 1;
        let mut pair = vec![None; n];
        let mut is_helper = vec![false; n];
        for p in g.nodes() {
            let kids = g.children(p);
            if kids.len() != 2 || value[p].is_some() {
                continue;
            }
            for (s, d) in [(kids[0], kids[1]), (kids[1], kids[0])] {
                if !(helper(s, p) && helper(d, p)) {
                    continue;
                }
                let (sk, dk) = (g.children(s), g.children(d));
                if sk.len() != 1 || dk.len() != 2 {
                    continue;
                }
                let a = sk[0];
                let b = if dk[0] == a {
                    dk[1]
                } else if dk[1] == a {
                    dk[0]
                } else {
                    continue;
                };
                if [a, b].iter().any(|&x| x == s || x == d) {
                    continue;
                }
                pair[p] = Some((a, b));
                is_helper[s] = true;
                is_helper[d] = true;
                break;
            }
        }

        // a reparsed literal shares one node per value, so print a numeral only
        // when every value up to it occurs exactly once outside pair helpers
        let mut occurrences: BTreeMap<usize, usize> = BTreeMap::new();
        for v in g.nodes().filter(|&v| !is_helper[v]) {
            if let Some(k) = value[v] {
                *occurrences.entry(k).or_default() += 1;
            }
        }
        let unique_upto = |k: usize| (0..=k).all(|j| occurrences.get(&j) == Some(&1));
        let numeral: Vec<Option<usize>> = g
            .nodes()
            .map(|v| value[v].filter(|&k| !is_helper[v] && unique_upto(k)))
            .collect();

        let named = g
            .nodes()
            .map(|v| v == root || (numeral[v].is_none() && indegree[v] != 1))
            .collect();
        Printer {
            g,
            numeral,
            pair,
            named,
        }
    }

    /// The term for a reference to `v` from another term.
    fn reference(&self, v: NodeId, names: &BTreeMap<NodeId, String>, out: &mut String) {
        if let Some(k) = self.numeral[v] {
            let _ = write!(out, "{k}");
        } else if let Some(name) = names.get(&v) {
            out.push_str(name);
        } else {
            self.body(v, names, out);
        }
    }

    fn body(&self, v: NodeId, names: &BTreeMap<NodeId, String>, out: &mut String) {
        if let Some(k) = self.numeral[v] {
            let _ = write!(out, "{k}");
            return;
        }
        if self.pair[v].is_some() {
            out.push('<');
            let mut cur = v;
            let mut first = true;
            // flatten right-nested pairs whose tail would be printed inline
            while let Some((a, b)) = self.pair[cur] {
                if !first {
                    out.push_str(", ");
                }
                first = false;
                self.reference(a, names, out);
                if self.inline(b) && self.pair[b].is_some() {
                    cur = b;
                } else {
                    out.push_str(", ");
                    self.reference(b, names, out);
                    break;
                }
            }
            out.push('>');
            return;
        }
        out.push('{');
        for (i, &c) in self.g.children(v).iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.reference(c, names, out);
        }
        out.push('}');
    }

    fn inline(&self, v: NodeId) -> bool {
        !self.named[v] && self.numeral[v].is_none()
    }
}
