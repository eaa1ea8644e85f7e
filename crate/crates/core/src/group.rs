//! Transitive sets with a prescribed automorphism group.
//!
//! For a finite group `G` the set `A_G` is the transitive closure of
//! numerals `0..n` (a rigid copy of `G`), one Quine atom `a_g` per element,
//! and gadgets `r_{g,h} = <r_{g,h}, a_g, h, a_{gh}>`. Its automorphisms are
//! exactly the left translations of the atoms, so `Aut(A_G) ≅ G`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::boffa::{Extension, SetId, Universe};
use crate::canon;
use crate::search::compose;
use crate::{Error, Limits, Result};

/// Largest order accepted by [`groups_isomorphic`].
pub const MAX_ISO_ORDER: usize = 12;

/// A finite group by its multiplication table: `table[g][h] = g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Validates closure, identity, associativity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<GroupTable> {
        let bad = |m: String| Err(Error::InvalidGroup(m));
        let n = table.len();
        if n == 0 {
            return bad("a group has at least one element".into());
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {g} has {} entries, expected {n}", row.len()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return bad(format!("entry {x} in row {g} is out of range"));
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element".into());
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("({a}·{b})·{c} differs from {a}·({b}·{c})"));
                    }
                }
            }
        }
        for (g, row) in table.iter().enumerate() {
            if !(0..n).any(|h| row[h] == identity && table[h][g] == identity) {
                return bad(format!("element {g} has no inverse"));
            }
        }
        Ok(GroupTable { table, identity })
    }

    pub fn cyclic(n: usize) -> GroupTable {
        GroupTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
            .expect("cyclic tables are groups")
    }

    /// The Klein four-group `Z2 × Z2`, elements coded as bit pairs.
    pub fn klein() -> GroupTable {
        GroupTable::new((0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()).expect("xor table is a group")
    }

    /// Permutations of `0..k` under composition, listed lexicographically.
    pub fn symmetric(k: usize) -> GroupTable {
        let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
        // lexicographic enumeration by next-permutation
        loop {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            perms.push(p);
        }
        let index: BTreeMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|f| perms.iter().map(|g| index[&compose(f, g)]).collect())
            .collect();
        GroupTable::new(table).expect("permutations form a group")
    }

    /// `z1`..`z4`, `v4` or `s3`.
    pub fn preset(name: &str) -> Option<GroupTable> {
        Some(match name.to_ascii_lowercase().as_str() {
            "z1" => GroupTable::cyclic(1),
            "z2" => GroupTable::cyclic(2),
            "z3" => GroupTable::cyclic(3),
            "z4" => GroupTable::cyclic(4),
            "v4" => GroupTable::klein(),
            "s3" => GroupTable::symmetric(3),
            _ => return None,
        })
    }

    pub const PRESETS: [&'static str; 6] = ["z1", "z2", "z3", "z4", "v4", "s3"];

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn from_json_str(text: &str) -> Result<GroupTable> {
        let json: GroupJson = serde_json::from_str(text)?;
        if json.order != json.table.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} does not match a table with {} rows",
                json.order,
                json.table.len()
            )));
        }
        GroupTable::new(json.table)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GroupJson {
            order: self.order(),
            table: self.table.clone(),
        })
        .expect("tables serialize")
    }
}

/// Whether two groups are isomorphic, by extending images of a generating set.
pub fn groups_isomorphic(g: &GroupTable, h: &GroupTable) -> Result<bool> {
    for t in [g, h] {
        if t.order() > MAX_ISO_ORDER {
            return Err(Error::OrderTooLarge {
                order: t.order(),
                limit: MAX_ISO_ORDER,
            });
        }
    }
    if g.order() != h.order() {
        return Ok(false);
    }
    let orders = |t: &GroupTable| {
        let mut v: Vec<usize> = (0..t.order()).map(|x| t.element_order(x)).collect();
        v.sort_unstable();
        v
    };
    if orders(g) != orders(h) || g.is_abelian() != h.is_abelian() {
        return Ok(false);
    }
    let gens = generators(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            (0..h.order())
                .filter(|&y| h.element_order(y) == g.element_order(x))
                .collect()
        })
        .collect();
    let mut images = vec![0; gens.len()];
    Ok(assign(g, h, &gens, &candidates, &mut images, 0))
}

fn assign(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    i: usize,
) -> bool {
    if i == gens.len() {
        return extends_to_isomorphism(g, h, gens, images);
    }
    for &y in &candidates[i] {
        images[i] = y;
        if assign(g, h, gens, candidates, images, i + 1) {
            return true;
        }
    }
    false
}

/// Greedy generating set: add any element outside the subgroup so far.
fn generators(g: &GroupTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = BTreeSet::from([g.identity()]);
    while span.len() < g.order() {
        let x = (0..g.order()).find(|x| !span.contains(x)).unwrap();
        gens.push(x);
        span = closure(g, &gens);
    }
    gens
}

fn closure(g: &GroupTable, gens: &[usize]) -> BTreeSet<usize> {
    let mut span = BTreeSet::from([g.identity()]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if span.insert(y) {
                queue.push_back(y);
            }
        }
    }
    span
}

fn extends_to_isomorphism(g: &GroupTable, h: &GroupTable, gens: &[usize], images: &[usize]) -> bool {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity()] = h.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let (y, fy) = (g.mul(x, s), h.mul(map[x], t));
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return false;
            }
        }
    }
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    distinct.len() == n && (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])))
}

/// A set `x` with `x = <x, a, b>`; the same pair always yields the same set.
pub fn make_order_gadget(u: &mut Universe, a: SetId, b: SetId) -> Result<SetId> {
    u.tuple_gadget(&[a, b])
}

/// The universe holding `A_G` and the ids of its building blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgArtifact {
    pub group: GroupTable,
    pub universe: Universe,
    pub root: SetId,
    /// `numerals[h]` is the von Neumann numeral `h`.
    pub numerals: Vec<SetId>,
    /// `atoms[g]` is the Quine atom `a_g`.
    pub atoms: Vec<SetId>,
    /// `gadgets[g][h]` is `r_{g,h}`.
    pub gadgets: Vec<Vec<SetId>>,
}

pub fn build_a_g(group: &GroupTable) -> Result<AgArtifact> {
    build_a_g_with(group, &Limits::default())
}

pub fn build_a_g_with(group: &GroupTable, limits: &Limits) -> Result<AgArtifact> {
    let n = group.order();
    if n > limits.group_order {
        return Err(Error::GroupTooLarge {
            order: n,
            limit: limits.group_order,
        });
    }
    let mut u = Universe::new();
    let numerals = (0..n).map(|h| u.numeral(h)).collect::<Result<Vec<_>>>()?;
    let atoms: Vec<SetId> = (0..n).map(|g| u.add_labeled_atom(format!("a{g}"))).collect();
    let mut gadgets = vec![Vec::with_capacity(n); n];
    for g in 0..n {
        for h in 0..n {
            let r = u.tuple_gadget(&[atoms[g], numerals[h], atoms[group.mul(g, h)]])?;
            gadgets[g].push(r);
        }
    }
    let objects = numerals.iter().chain(&atoms).chain(gadgets.iter().flatten()).copied();
    let closure = u.transitive_closure(objects)?;
    let mut ext = Extension::new();
    let root = ext.new_node();
    for &x in &closure {
        let v = ext.old_node(&u, x)?;
        ext.add_child(root, v);
    }
    let root = u.realize(&ext)?[root];
    Ok(AgArtifact {
        group: group.clone(),
        universe: u,
        root,
        numerals,
        atoms,
        gadgets,
    })
}

/// `Aut(A_G)` read back as a group, with the checks that tie it to `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroupReport {
    /// Composition table over the automorphisms, identity first.
    pub table: GroupTable,
    /// `j[g]` indexes the automorphism sending `a_e` to `a_g`.
    pub j: Vec<Option<usize>>,
    /// Every automorphism is the identity on numerals.
    pub numerals_fixed: bool,
    /// Every automorphism acts on atoms as a left translation `a_h ↦ a_{gh}`.
    pub left_translations: bool,
    /// Every automorphism sends `r_{g',h}` to `r_{g·g',h}`.
    pub gadgets_follow: bool,
    /// `j_{gh} = j_g ∘ j_h` for all `g, h`.
    pub homomorphism: bool,
}

impl AutGroupReport {
    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn verified(&self) -> bool {
        self.numerals_fixed && self.left_translations && self.gadgets_follow && self.homomorphism
    }
}

pub fn aut_group_of(art: &AgArtifact) -> Result<AutGroupReport> {
    aut_group_of_with(art, &Limits::default())
}

pub fn aut_group_of_with(art: &AgArtifact, limits: &Limits) -> Result<AutGroupReport> {
    let (pic, ids) = art.universe.picture_with_ids(art.root)?;
    let node: BTreeMap<SetId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let group = canon::automorphisms_with(&pic, limits)?;
    let cap = limits.group_order.max(art.group.order()) * 64;
    let auts = group.elements(cap).ok_or(Error::SizeLimitExceeded {
        what: "automorphism group order",
        actual: group.order_u64().map_or(usize::MAX, |o| o as usize),
        limit: cap,
    })?;

    let n = art.group.order();
    let g = &art.group;
    let atom_index: BTreeMap<usize, usize> = art.atoms.iter().enumerate().map(|(i, a)| (node[a], i)).collect();
    let mut numerals_fixed = true;
    let mut left_translations = true;
    let mut gadgets_follow = true;
    let mut j = vec![None; n];
    for (k, p) in auts.iter().enumerate() {
        numerals_fixed &= art.numerals.iter().all(|x| p[node[x]] == node[x]);
        let image = |x: &SetId| atom_index.get(&p[node[x]]).copied();
        let Some(shift) = image(&art.atoms[g.identity()]) else {
            left_translations = false;
            continue;
        };
        left_translations &= (0..n).all(|h| image(&art.atoms[h]) == Some(g.mul(shift, h)));
        gadgets_follow &=
            (0..n).all(|a| (0..n).all(|h| p[node[&art.gadgets[a][h]]] == node[&art.gadgets[g.mul(shift, a)][h]]));
        j[shift].get_or_insert(k);
    }

    let index: BTreeMap<&Vec<usize>, usize> = auts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let table: Vec<Vec<usize>> = auts
        .iter()
        .map(|f| auts.iter().map(|h| index[&compose(f, h)]).collect())
        .collect();
    let homomorphism = j.iter().all(Option::is_some)
        && (0..n).all(|a| {
            (0..n).all(|b| {
                let (ja, jb, jab) = (j[a].unwrap(), j[b].unwrap(), j[g.mul(a, b)].unwrap());
                table[ja][jb] == jab
            })
        });
    Ok(AutGroupReport {
        table: GroupTable::new(table)?,
        j,
        numerals_fixed,
        left_translations,
        gadgets_follow,
        homomorphism,
    })
}
