//! A finite extensional store of sets under Boffa semantics.
//!
//! Equality is identity of set ids. The store is extensional: no two ids have
//! the same member set. Isomorphic but distinct sets may coexist, so any
//! number of Quine atoms can be added, and any extensional end-extension of a
//! transitive part of the store can be realized on top of it.
//!
//! Every mutating operation validates its input before touching the store;
//! a failed operation leaves the universe unchanged.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::apg::{Apg, NodeId, RawGraph};
use crate::{Error, Result};

/// Identity of a set in a [`Universe`]. Ids are never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SetId(pub u64);

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    members: BTreeSet<SetId>,
    label: Option<String>,
}

/// A partial ∈-isomorphism between transitive sets of ids.
pub type PartialIso = BTreeMap<SetId, SetId>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Universe {
    sets: BTreeMap<SetId, Entry>,
    by_members: BTreeMap<Vec<SetId>, SetId>,
    gadgets: BTreeMap<Vec<SetId>, SetId>,
    next_id: u64,
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, id: SetId) -> bool {
        self.sets.contains_key(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = SetId> + '_ {
        self.sets.keys().copied()
    }

    pub fn members(&self, id: SetId) -> Result<&BTreeSet<SetId>> {
        self.sets.get(&id).map(|e| &e.members).ok_or(Error::UnknownSet(id.0))
    }

    pub fn is_member(&self, x: SetId, y: SetId) -> bool {
        self.sets.get(&y).is_some_and(|e| e.members.contains(&x))
    }

    pub fn label(&self, id: SetId) -> Option<&str> {
        self.sets.get(&id).and_then(|e| e.label.as_deref())
    }

    pub fn set_label(&mut self, id: SetId, label: impl Into<String>) -> Result<()> {
        let entry = self.sets.get_mut(&id).ok_or(Error::UnknownSet(id.0))?;
        entry.label = Some(label.into());
        Ok(())
    }

    /// The set whose members are exactly `members`, if the store has one.
    pub fn find(&self, members: &BTreeSet<SetId>) -> Option<SetId> {
        self.by_members
            .get(&members.iter().copied().collect::<Vec<_>>())
            .copied()
    }

    pub fn is_quine_atom(&self, id: SetId) -> bool {
        self.sets
            .get(&id)
            .is_some_and(|e| e.members.len() == 1 && e.members.contains(&id))
    }

    pub fn atoms(&self) -> Vec<SetId> {
        self.ids().filter(|&id| self.is_quine_atom(id)).collect()
    }

    fn mint(&mut self) -> SetId {
        let id = SetId(self.next_id);
        self.next_id += 1;
        id
    }

    fn store(&mut self, id: SetId, members: BTreeSet<SetId>, label: Option<String>) {
        let key: Vec<SetId> = members.iter().copied().collect();
        let clash = self.by_members.insert(key, id);
        debug_assert!(clash.is_none(), "extensionality violated by {id}");
        self.sets.insert(id, Entry { members, label });
    }

    /// Adds a fresh Quine atom `x = {x}`.
    pub fn add_quine_atom(&mut self) -> SetId {
        let id = self.mint();
        self.store(id, BTreeSet::from([id]), None);
        id
    }

    pub fn add_labeled_atom(&mut self, label: impl Into<String>) -> SetId {
        let id = self.add_quine_atom();
        self.sets.get_mut(&id).unwrap().label = Some(label.into());
        id
    }

    /// Checks the store invariants: members exist, ids are below the counter,
    /// and no two ids share a member set.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut seen: BTreeMap<&BTreeSet<SetId>, SetId> = BTreeMap::new();
        for (&id, entry) in &self.sets {
            if id.0 >= self.next_id {
                return Err(format!("{id} is not below the id counter {}", self.next_id));
            }
            if let Some(m) = entry.members.iter().find(|m| !self.sets.contains_key(m)) {
                return Err(format!("{id} has missing member {m}"));
            }
            if let Some(other) = seen.insert(&entry.members, id) {
                return Err(format!("{other} and {id} have the same members"));
            }
        }
        if self.by_members.len() != self.sets.len() {
            return Err("member index out of sync".into());
        }
        Ok(())
    }

    /// Ids reachable from `roots` through membership, roots included.
    pub fn transitive_closure(&self, roots: impl IntoIterator<Item = SetId>) -> Result<BTreeSet<SetId>> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<SetId> = roots.into_iter().collect();
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend(self.members(x)?.iter().copied());
            }
        }
        Ok(seen)
    }

    pub fn is_transitive(&self, ids: &BTreeSet<SetId>) -> bool {
        ids.iter()
            .all(|&x| self.members(x).is_ok_and(|m| m.iter().all(|y| ids.contains(y))))
    }

    /// Whether membership below `id` is well-founded.
    pub fn is_well_founded(&self, id: SetId) -> Result<bool> {
        let (g, _) = self.picture_with_ids(id)?;
        Ok(g.is_well_founded())
    }

    /// The canonical picture of `x`: its transitive closure with membership,
    /// rooted at `x`. Node 0 is `x`; the rest follow in breadth-first order.
    pub fn picture_of(&self, x: SetId) -> Result<Apg> {
        Ok(self.picture_with_ids(x)?.0)
    }

    /// [`Universe::picture_of`] plus the set id of every picture node.
    pub fn picture_with_ids(&self, x: SetId) -> Result<(Apg, Vec<SetId>)> {
        self.members(x)?;
        let mut index = BTreeMap::from([(x, 0usize)]);
        let mut ids = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for &m in self.members(y)? {
                if let std::collections::btree_map::Entry::Vacant(e) = index.entry(m) {
                    e.insert(ids.len());
                    ids.push(m);
                    queue.push_back(m);
                }
            }
        }
        let children = ids
            .iter()
            .map(|y| self.sets[y].members.iter().map(|m| index[m]).collect())
            .collect();
        let labels = ids
            .iter()
            .enumerate()
            .filter_map(|(i, y)| self.label(*y).map(|l| (i, l.to_string())))
            .collect();
        let g = Apg::new(children, 0)?.with_labels(labels)?;
        Ok((g, ids))
    }

    /// Realizes an extensional graph that end-extends a transitive part of
    /// the store.
    ///
    /// Old nodes must map to ids whose members are exactly the images of
    /// their children, and the old part must be closed under membership. New
    /// nodes that reach no cycle of new nodes are built bottom-up and reuse
    /// an existing id whenever one has the same members, as extensionality
    /// forces; every other new node gets a fresh id. Returns the id of every
    /// node; the map is the identity on the old part.
    pub fn realize(&mut self, ext: &Extension) -> Result<Vec<SetId>> {
        let n = ext.children.len();
        ext.validate_shape()?;
        let mut old_seen = BTreeMap::new();
        for (v, old) in ext.old.iter().enumerate() {
            let Some(id) = *old else { continue };
            let members = self.members(id)?;
            if let Some(prev) = old_seen.insert(id, v) {
                return Err(Error::NotEndExtension(format!(
                    "nodes {prev} and {v} both stand for {id}"
                )));
            }
            let mut claimed = BTreeSet::new();
            for &c in &ext.children[v] {
                match ext.old[c] {
                    Some(cid) => {
                        claimed.insert(cid);
                    }
                    None => {
                        return Err(Error::NotEndExtension(format!(
                            "old set {id} gains the new member node {c}"
                        )))
                    }
                }
            }
            if &claimed != members {
                return Err(Error::NotEndExtension(format!(
                    "node {v} does not reproduce the members of {id}"
                )));
            }
        }
        if let Some((u, v)) = ext.extensionality_witness() {
            return Err(Error::NotExtensional(u, v));
        }

        // new nodes that reach no cycle among new nodes, children first
        let is_new = |v: usize| ext.old[v].is_none();
        let mut parents = vec![Vec::new(); n];
        let mut pending = vec![0usize; n];
        for v in (0..n).filter(|&v| is_new(v)) {
            for &c in &ext.children[v] {
                if is_new(c) {
                    parents[c].push(v);
                    pending[v] += 1;
                }
            }
        }
        let mut grounded: Vec<usize> = (0..n).filter(|&v| is_new(v) && pending[v] == 0).collect();
        let mut i = 0;
        while i < grounded.len() {
            let v = grounded[i];
            i += 1;
            for &p in &parents[v] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    grounded.push(p);
                }
            }
        }

        let mut out: Vec<Option<SetId>> = ext.old.clone();
        for &v in &grounded {
            let members: BTreeSet<SetId> = ext.children[v].iter().map(|&c| out[c].unwrap()).collect();
            let id = match self.find(&members) {
                Some(existing) => existing,
                None => {
                    let id = self.mint();
                    self.store(id, members, ext.labels.get(&v).cloned());
                    id
                }
            };
            out[v] = Some(id);
        }
        let cyclic: Vec<usize> = (0..n).filter(|&v| out[v].is_none()).collect();
        for &v in &cyclic {
            out[v] = Some(self.mint());
        }
        for &v in &cyclic {
            let id = out[v].unwrap();
            let members = ext.children[v].iter().map(|&c| out[c].unwrap()).collect();
            self.store(id, members, ext.labels.get(&v).cloned());
        }
        Ok(out.into_iter().map(Option::unwrap).collect())
    }

    /// Like [`Universe::realize`], but first merges nodes of `ext` with
    /// identical child sets until none remain, so any graph over the store
    /// can be inserted. Returns the id of every original node.
    pub fn insert(&mut self, ext: &Extension) -> Result<Vec<SetId>> {
        ext.validate_shape()?;
        let class = extensional_reduction(&ext.children);
        let classes = class.iter().max().map_or(0, |m| m + 1);
        let mut reduced = Extension {
            children: vec![Vec::new(); classes],
            old: vec![None; classes],
            labels: BTreeMap::new(),
        };
        for (v, kids) in ext.children.iter().enumerate() {
            let c = class[v];
            let mut mapped: Vec<usize> = kids.iter().map(|&k| class[k]).collect();
            mapped.sort_unstable();
            mapped.dedup();
            reduced.children[c] = mapped;
            if let Some(id) = ext.old[v] {
                match reduced.old[c] {
                    Some(prev) if prev != id => {
                        return Err(Error::NotEndExtension(format!(
                            "distinct sets {prev} and {id} would have to be equal"
                        )))
                    }
                    _ => reduced.old[c] = Some(id),
                }
            }
            if let Some(l) = ext.labels.get(&v) {
                reduced.labels.entry(c).or_insert_with(|| l.clone());
            }
        }
        let ids = self.realize(&reduced)?;
        Ok(class.iter().map(|&c| ids[c]).collect())
    }

    /// Inserts every node of `g` (merging syntactic duplicates first) and
    /// returns the id of its root.
    pub fn insert_apg(&mut self, g: &Apg) -> Result<SetId> {
        let mut ext = Extension::new();
        for _ in g.nodes() {
            ext.new_node();
        }
        for (a, b) in g.edges() {
            ext.add_child(a, b);
        }
        for (&v, l) in g.labels() {
            ext.set_label(v, l.clone());
        }
        Ok(self.insert(&ext)?[g.root()])
    }

    /// The von Neumann numeral `k`, reused if present.
    pub fn numeral(&mut self, k: usize) -> Result<SetId> {
        self.insert_apg(&Apg::numeral(k))
    }

    /// The Kuratowski pair `{{a}, {a, b}}`.
    pub fn pair(&mut self, a: SetId, b: SetId) -> Result<SetId> {
        let mut ext = Extension::new();
        let (na, nb) = (ext.old_node(self, a)?, ext.old_node(self, b)?);
        let p = ext.pair_node(na, nb);
        Ok(self.insert(&ext)?[p])
    }

    /// Right-nested tuple `<c0, <c1, ... <c_{k-2}, c_{k-1}>>>`; at least two
    /// components.
    pub fn tuple(&mut self, components: &[SetId]) -> Result<SetId> {
        let mut ext = Extension::new();
        let nodes = components
            .iter()
            .map(|&c| ext.old_node(self, c))
            .collect::<Result<Vec<_>>>()?;
        let t = ext.tuple_node(&nodes);
        Ok(self.insert(&ext)?[t])
    }

    /// A set `x` with `x = <x, c0, c1, ...>`, memoized per component list.
    pub fn tuple_gadget(&mut self, components: &[SetId]) -> Result<SetId> {
        if components.is_empty() {
            return Err(Error::NotEndExtension("a gadget needs at least one component".into()));
        }
        if let Some(&x) = self.gadgets.get(components) {
            return Ok(x);
        }
        let mut ext = Extension::new();
        let x = ext.new_node();
        let mut nodes = vec![x];
        for &c in components {
            nodes.push(ext.old_node(self, c)?);
        }
        let t = ext.tuple_node(&nodes);
        // x is the tuple node itself: move t's children onto x
        let kids = std::mem::take(&mut ext.children[t]);
        ext.children[x] = kids;
        let ids = self.insert(&ext)?;
        let id = ids[x];
        self.gadgets.insert(components.to_vec(), id);
        Ok(id)
    }

    /// Splits a Kuratowski pair `{{a}, {a, b}}` into `(a, b)`.
    pub fn decode_pair(&self, p: SetId) -> Option<(SetId, SetId)> {
        let outer = self.members(p).ok()?;
        if outer.is_empty() || outer.len() > 2 {
            return None;
        }
        let mut inter: Option<BTreeSet<SetId>> = None;
        let mut union = BTreeSet::new();
        for &m in outer {
            let ms = self.members(m).ok()?;
            union.extend(ms.iter().copied());
            inter = Some(match inter {
                None => ms.clone(),
                Some(acc) => acc.intersection(ms).copied().collect(),
            });
        }
        let inter = inter?;
        if inter.len() != 1 {
            return None;
        }
        let a = *inter.iter().next().unwrap();
        let b = match union.len() {
            1 => a,
            2 => *union.iter().find(|&&u| u != a)?,
            _ => return None,
        };
        // confirm the shape exactly
        let single = self.find(&BTreeSet::from([a]))?;
        let double = self.find(&BTreeSet::from([a, b]))?;
        (outer == &BTreeSet::from([single, double])).then_some((a, b))
    }

    /// Decodes a right-nested tuple of exactly `arity` components.
    pub fn decode_tuple(&self, t: SetId, arity: usize) -> Option<Vec<SetId>> {
        let mut out = Vec::with_capacity(arity);
        let mut rest = t;
        for _ in 0..arity.checked_sub(1)? {
            let (head, tail) = self.decode_pair(rest)?;
            out.push(head);
            rest = tail;
        }
        out.push(rest);
        Some(out)
    }

    /// Checks that `f` is an ∈-isomorphism between transitive sets of ids.
    pub fn check_partial_iso(&self, f: &PartialIso) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidIsomorphism(m));
        let dom: BTreeSet<SetId> = f.keys().copied().collect();
        let ran: BTreeSet<SetId> = f.values().copied().collect();
        if ran.len() != dom.len() {
            return bad("map is not injective".into());
        }
        for id in dom.iter().chain(&ran) {
            self.members(*id)?;
        }
        if !self.is_transitive(&dom) {
            return bad("domain is not transitive".into());
        }
        if !self.is_transitive(&ran) {
            return bad("range is not transitive".into());
        }
        for (&x, &fx) in f {
            let image: BTreeSet<SetId> = self.members(x)?.iter().map(|m| f[m]).collect();
            if &image != self.members(fx)? {
                return bad(format!("members of {x} do not map onto members of {fx}"));
            }
        }
        Ok(())
    }

    /// One forth step of the back-and-forth system of isomorphisms between
    /// transitive sets: extends `f` so that `x` is in its domain.
    ///
    /// The membership structure of `TC({x})` outside the domain is copied over
    /// the range of `f` and realized, so the universe may grow.
    pub fn extend_iso_step(&mut self, f: &PartialIso, x: SetId) -> Result<PartialIso> {
        self.check_partial_iso(f)?;
        if f.contains_key(&x) {
            return Ok(f.clone());
        }
        let fresh: Vec<SetId> = self
            .transitive_closure([x])?
            .into_iter()
            .filter(|y| !f.contains_key(y))
            .collect();
        let mut ext = Extension::new();
        let mut range_node = BTreeMap::new();
        for &r in f.values() {
            range_node.insert(r, ext.new_old(r));
        }
        for (&r, &v) in &range_node {
            for m in self.members(r)? {
                ext.add_child(v, range_node[m]);
            }
        }
        let new_node: BTreeMap<SetId, usize> = fresh.iter().map(|&y| (y, ext.new_node())).collect();
        for &y in &fresh {
            for m in self.members(y)?.clone() {
                let child = match f.get(&m) {
                    Some(fm) => range_node[fm],
                    None => new_node[&m],
                };
                ext.add_child(new_node[&y], child);
            }
        }
        let ids = self.realize(&ext)?;
        let mut g = f.clone();
        for (&y, &v) in &new_node {
            g.insert(y, ids[v]);
        }
        Ok(g)
    }

    pub fn to_json(&self) -> UniverseJson {
        let name = |id: &SetId| id.0.to_string();
        UniverseJson {
            nodes: self.sets.keys().map(name).collect(),
            edges: self
                .sets
                .iter()
                .flat_map(|(id, e)| e.members.iter().map(move |m| [name(id), name(m)]))
                .collect(),
            labels: self
                .sets
                .iter()
                .filter_map(|(id, e)| e.label.clone().map(|l| (name(id), l)))
                .collect(),
            atoms: self.atoms().iter().map(name).collect(),
            next_id: self.next_id,
            gadgets: self
                .gadgets
                .iter()
                .map(|(k, v)| GadgetJson {
                    components: k.iter().map(name).collect(),
                    set: name(v),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &UniverseJson) -> Result<Universe> {
        let parse = |s: &String| {
            s.parse::<u64>()
                .map(SetId)
                .map_err(|_| Error::Json(format!("set ids are decimal numbers, got {s:?}")))
        };
        let mut members: BTreeMap<SetId, BTreeSet<SetId>> = BTreeMap::new();
        for n in &json.nodes {
            if members.insert(parse(n)?, BTreeSet::new()).is_some() {
                return Err(Error::Json(format!("duplicate set id {n}")));
            }
        }
        for [a, b] in &json.edges {
            let (a, b) = (parse(a)?, parse(b)?);
            if !members.contains_key(&b) {
                return Err(Error::UnknownSet(b.0));
            }
            let entry = members.get_mut(&a).ok_or(Error::UnknownSet(a.0))?;
            if !entry.insert(b) {
                return Err(Error::Json(format!("duplicate edge {a} -> {b}")));
            }
        }
        let mut u = Universe {
            next_id: json.next_id,
            ..Universe::default()
        };
        for (id, m) in members {
            if u.find(&m).is_some() {
                return Err(Error::Json(format!("{id} duplicates the members of another set")));
            }
            u.store(id, m, None);
        }
        for (id, l) in &json.labels {
            u.set_label(parse(id)?, l.clone())?;
        }
        for a in &json.atoms {
            if !u.is_quine_atom(parse(a)?) {
                return Err(Error::Json(format!("{a} is listed as an atom but is not x = {{x}}")));
            }
        }
        for gadget in &json.gadgets {
            let comps = gadget.components.iter().map(parse).collect::<Result<Vec<_>>>()?;
            u.gadgets.insert(comps, parse(&gadget.set)?);
        }
        u.check_invariants().map_err(Error::Json)?;
        Ok(u)
    }
}

/// JSON form of a universe: the graph format without a root, plus the list
/// of Quine atoms, the id counter and memoized gadgets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseJson {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub atoms: Vec<String>,
    pub next_id: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gadgets: Vec<GadgetJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetJson {
    pub components: Vec<String>,
    pub set: String,
}

/// A graph to be realized in a universe. Nodes marked old stand for existing
/// sets; the rest are new.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extension {
    pub children: Vec<Vec<NodeId>>,
    pub old: Vec<Option<SetId>>,
    pub labels: BTreeMap<NodeId, String>,
}

impl Extension {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_node(&mut self) -> NodeId {
        self.children.push(Vec::new());
        self.old.push(None);
        self.children.len() - 1
    }

    /// A node standing for the existing set `id`. Its members are not added;
    /// see [`Extension::old_node`].
    pub fn new_old(&mut self, id: SetId) -> NodeId {
        let v = self.new_node();
        self.old[v] = Some(id);
        v
    }

    /// The node standing for `id`, adding `id`'s whole transitive closure as
    /// old nodes if it is not present yet.
    pub fn old_node(&mut self, u: &Universe, id: SetId) -> Result<NodeId> {
        let index: BTreeMap<SetId, NodeId> = self
            .old
            .iter()
            .enumerate()
            .filter_map(|(v, o)| o.map(|o| (o, v)))
            .collect();
        if let Some(&v) = index.get(&id) {
            return Ok(v);
        }
        let closure = u.transitive_closure([id])?;
        let mut index = index;
        for &s in &closure {
            index.entry(s).or_insert_with(|| self.new_old(s));
        }
        for &s in &closure {
            let v = index[&s];
            if self.children[v].is_empty() {
                for m in u.members(s)? {
                    self.children[v].push(index[m]);
                }
            }
        }
        Ok(index[&id])
    }

    pub fn add_child(&mut self, parent: NodeId, child: NodeId) {
        if !self.children[parent].contains(&child) {
            self.children[parent].push(child);
        }
    }

    pub fn set_label(&mut self, node: NodeId, label: String) {
        self.labels.insert(node, label);
    }

    /// New nodes for the Kuratowski pair `{{a}, {a, b}}`; returns the pair.
    pub fn pair_node(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let single = self.new_node();
        self.add_child(single, a);
        let double = self.new_node();
        self.add_child(double, a);
        self.add_child(double, b);
        let p = self.new_node();
        self.add_child(p, single);
        self.add_child(p, double);
        p
    }

    /// Right-nested tuple of at least two nodes.
    pub fn tuple_node(&mut self, parts: &[NodeId]) -> NodeId {
        assert!(parts.len() >= 2, "tuples have at least two components");
        let mut acc = parts[parts.len() - 1];
        for &p in parts[..parts.len() - 1].iter().rev() {
            acc = self.pair_node(p, acc);
        }
        acc
    }

    fn validate_shape(&self) -> Result<()> {
        let n = self.children.len();
        if self.old.len() != n {
            return Err(Error::InvalidGraph("old-part table does not match node count".into()));
        }
        for (v, kids) in self.children.iter().enumerate() {
            if let Some(&bad) = kids.iter().find(|&&c| c >= n) {
                return Err(Error::InvalidGraph(format!("edge {v}->{bad} out of range")));
            }
        }
        Ok(())
    }

    fn extensionality_witness(&self) -> Option<(NodeId, NodeId)> {
        let mut seen: BTreeMap<Vec<NodeId>, NodeId> = BTreeMap::new();
        for (v, kids) in self.children.iter().enumerate() {
            let mut key = kids.clone();
            key.sort_unstable();
            key.dedup();
            if let Some(&u) = seen.get(&key) {
                return Some((u, v));
            }
            seen.insert(key, v);
        }
        None
    }

    pub fn to_raw(&self, root: NodeId) -> Result<RawGraph> {
        RawGraph::new(self.children.clone(), root)
    }
}

/// Repeatedly merges nodes whose child sets have become identical. Returns
/// a class index per node; on well-founded graphs this is the Mostowski
/// collapse, on cyclic ones it merges only what plain extensionality forces.
pub fn extensional_reduction(children: &[Vec<NodeId>]) -> Vec<usize> {
    // each round only merges classes, so a round that merges nothing is final
    let mut class: Vec<usize> = (0..children.len()).collect();
    let mut count = children.len();
    loop {
        let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let next: Vec<usize> = children
            .iter()
            .map(|kids| {
                let mut key: Vec<usize> = kids.iter().map(|&c| class[c]).collect();
                key.sort_unstable();
                key.dedup();
                let fresh = ids.len();
                *ids.entry(key).or_insert(fresh)
            })
            .collect();
        if ids.len() == count {
            return class;
        }
        count = ids.len();
        class = next;
    }
}
