//! Finite stages of the cumulative hierarchy over a set of Quine atoms.
//!
//! Level 0 is the atoms; level `j + 1` is every subset of level `j`. An atom
//! `a` satisfies `a = {a}`, so the subset `{a}` is the atom itself and atoms
//! persist through the levels. Levels are cumulative, so the top level holds
//! every element.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::apg::Apg;
use crate::canon;
use crate::{Error, Limits, Result};

pub type ElemId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Element {
    members: Vec<ElemId>,
    atom: bool,
    first_level: usize,
}

/// `WF_k(A)` for `|A| = atom_count`, with every element enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelledUniverse {
    atom_count: usize,
    elements: Vec<Element>,
    levels: Vec<Vec<ElemId>>,
    index: BTreeMap<Vec<ElemId>, ElemId>,
}

pub fn build_universe(atom_count: usize, levels: usize) -> Result<LevelledUniverse> {
    build_universe_with(atom_count, levels, &Limits::default())
}

pub fn build_universe_with(atom_count: usize, levels: usize, limits: &Limits) -> Result<LevelledUniverse> {
    let cap = limits.wf_elements;
    let too_big = |actual| Error::SizeLimitExceeded {
        what: "levelled universe element count",
        actual,
        limit: cap,
    };
    if atom_count > cap {
        return Err(too_big(atom_count));
    }
    let mut u = LevelledUniverse {
        atom_count,
        elements: Vec::new(),
        levels: Vec::new(),
        index: BTreeMap::new(),
    };
    for a in 0..atom_count {
        u.elements.push(Element {
            members: vec![a],
            atom: true,
            first_level: 0,
        });
        u.index.insert(vec![a], a);
    }
    u.levels.push((0..atom_count).collect());
    for level in 1..=levels {
        let prev = u.levels[level - 1].clone();
        let subsets = u32::try_from(prev.len())
            .ok()
            .and_then(|bits| 1usize.checked_shl(bits))
            .filter(|&s| s <= cap)
            .ok_or_else(|| too_big(usize::MAX))?;
        let mut current = Vec::with_capacity(subsets);
        for mask in 0..subsets {
            let members: Vec<ElemId> = prev
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let id = match u.index.get(&members) {
                Some(&id) => id,
                None => {
                    if u.elements.len() >= cap {
                        return Err(too_big(u.elements.len() + 1));
                    }
                    let id = u.elements.len();
                    u.index.insert(members.clone(), id);
                    u.elements.push(Element {
                        members,
                        atom: false,
                        first_level: level,
                    });
                    id
                }
            };
            current.push(id);
        }
        current.sort_unstable();
        u.levels.push(current);
    }
    Ok(u)
}

impl LevelledUniverse {
    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// Index of the top level `k`.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, j: usize) -> &[ElemId] {
        &self.levels[j]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Every element; this is the top level.
    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.elements.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_atom(&self, x: ElemId) -> bool {
        self.elements[x].atom
    }

    pub fn members(&self, x: ElemId) -> &[ElemId] {
        &self.elements[x].members
    }

    pub fn is_member(&self, x: ElemId, y: ElemId) -> bool {
        self.elements[y].members.binary_search(&x).is_ok()
    }

    /// The element with exactly these members, if any.
    pub fn find(&self, members: &[ElemId]) -> Option<ElemId> {
        self.index.get(members).copied()
    }

    /// Least level containing `x`; 0 for atoms.
    pub fn rank(&self, x: ElemId) -> usize {
        self.elements[x].first_level
    }

    /// Whether no atom lies in the transitive closure of `x`.
    pub fn is_pure(&self, x: ElemId) -> bool {
        !self.is_atom(x) && self.members(x).iter().all(|&m| self.is_pure(m))
    }

    /// A universe-independent rendering: atoms print as `a0`, `a1`, ...
    pub fn shape(&self, x: ElemId) -> String {
        if self.is_atom(x) {
            return format!("a{x}");
        }
        let inner: Vec<String> = self.members(x).iter().map(|&m| self.shape(m)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// The top level as a graph: one node per element plus a root whose
    /// children are all elements. Node `i < len()` is element `i`.
    pub fn to_apg(&self) -> Apg {
        let mut children: Vec<Vec<usize>> = self.elements.iter().map(|e| e.members.clone()).collect();
        children.push(self.elements().collect());
        Apg::new(children, self.len()).expect("every element is a child of the root")
    }
}

/// The lift of an atom map through the levels: atoms go where the atom map
/// sends them and any other set goes to the set of images of its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedMap {
    pub atom_map: Vec<usize>,
    pub full_map: Vec<ElemId>,
}

impl ExtendedMap {
    pub fn apply(&self, x: ElemId) -> ElemId {
        self.full_map[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ExtendedMap) -> ExtendedMap {
        ExtendedMap {
            atom_map: other.atom_map.iter().map(|&a| self.atom_map[a]).collect(),
            full_map: other.full_map.iter().map(|&x| self.full_map[x]).collect(),
        }
    }
}

/// Lifts the atom map `sigma` from `src` into `dst`.
pub fn extend_map(src: &LevelledUniverse, dst: &LevelledUniverse, sigma: &[usize]) -> Result<ExtendedMap> {
    if sigma.len() != src.atom_count {
        return Err(Error::InvalidAtomMap(format!(
            "map has {} entries for {} atoms",
            sigma.len(),
            src.atom_count
        )));
    }
    if let Some(&bad) = sigma.iter().find(|&&a| a >= dst.atom_count) {
        return Err(Error::InvalidAtomMap(format!(
            "image {bad} is not one of the {} target atoms",
            dst.atom_count
        )));
    }
    if dst.top() < src.top() {
        return Err(Error::InvalidAtomMap(format!(
            "target has {} levels, source has {}",
            dst.top(),
            src.top()
        )));
    }
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    for (a, &img) in sigma.iter().enumerate() {
        if let Some(prev) = first.insert(img, a) {
            return Err(Error::NotInjective(prev, a));
        }
    }
    let mut full_map = vec![0; src.len()];
    // members are always created before the sets that contain them
    for x in src.elements() {
        full_map[x] = if src.is_atom(x) {
            sigma[x]
        } else {
            let mut image: Vec<ElemId> = src.members(x).iter().map(|&m| full_map[m]).collect();
            image.sort_unstable();
            dst.find(&image).expect("images of level-j sets lie in level j")
        };
    }
    Ok(ExtendedMap {
        atom_map: sigma.to_vec(),
        full_map,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Automorphism,
    ProperEmbedding,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Automorphism => "automorphism",
            MapKind::ProperEmbedding => "proper-embedding",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapReport {
    pub kind: MapKind,
    pub injective: bool,
    pub surjective: bool,
    /// `x ∈ y ⇔ m(x) ∈ m(y)` over every pair of source elements.
    pub membership_preserved: bool,
    pub rank_preserved: bool,
    /// Pure sets go to pure sets of the same shape.
    pub pure_sets_fixed: bool,
    pub pairs_checked: usize,
    /// Elements with `m(x) = x`; only meaningful when source and target coincide.
    pub fixed_points: usize,
    pub missed: usize,
}

pub fn classify_map(src: &LevelledUniverse, dst: &LevelledUniverse, m: &ExtendedMap) -> MapReport {
    let n = src.len();
    let mut hit = vec![false; dst.len()];
    let mut injective = true;
    for x in src.elements() {
        let y = m.apply(x);
        injective &= !std::mem::replace(&mut hit[y], true);
    }
    let missed = hit.iter().filter(|h| !**h).count();
    let mut membership_preserved = true;
    for x in src.elements() {
        for y in src.elements() {
            if src.is_member(x, y) != dst.is_member(m.apply(x), m.apply(y)) {
                membership_preserved = false;
            }
        }
    }
    let rank_preserved = src.elements().all(|x| src.rank(x) == dst.rank(m.apply(x)));
    let pure_sets_fixed = src
        .elements()
        .filter(|&x| src.is_pure(x))
        .all(|x| src.shape(x) == dst.shape(m.apply(x)));
    let surjective = missed == 0;
    MapReport {
        kind: if injective && surjective {
            MapKind::Automorphism
        } else {
            MapKind::ProperEmbedding
        },
        injective,
        surjective,
        membership_preserved,
        rank_preserved,
        pure_sets_fixed,
        pairs_checked: n * n,
        fixed_points: src.elements().filter(|&x| m.apply(x) == x).count(),
        missed,
    }
}

/// Automorphisms of the membership structure of the top level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfAutomorphisms {
    pub order: BigUint,
    /// Generators as maps on elements.
    pub generators: Vec<Vec<ElemId>>,
    group: crate::search::AutomorphismGroup,
}

impl WfAutomorphisms {
    /// Every automorphism, if there are at most `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<ElemId>>> {
        let n = self.group.degree - 1;
        self.group
            .elements(limit)
            .map(|all| all.into_iter().map(|p| p[..n].to_vec()).collect())
    }
}

pub fn all_automorphisms(u: &LevelledUniverse) -> Result<WfAutomorphisms> {
    all_automorphisms_with(u, &Limits::default())
}

pub fn all_automorphisms_with(u: &LevelledUniverse, limits: &Limits) -> Result<WfAutomorphisms> {
    let g = u.to_apg();
    let group = canon::automorphisms_with(&g, limits)?;
    let n = u.len();
    Ok(WfAutomorphisms {
        order: group.order.clone(),
        generators: group.generators.iter().map(|p| p[..n].to_vec()).collect(),
        group,
    })
}

/// Parses a permutation of `0..n` in cycle notation, e.g. `(0 1)(2 3 4)`.
/// Commas may separate entries; the empty string is the identity.
pub fn parse_cycles(text: &str, n: usize) -> Result<Vec<usize>> {
    let bad = |m: String| Error::InvalidAtomMap(m);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut moved = vec![false; n];
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| bad(format!("expected a cycle like (0 1), found {rest:?}")))?;
        let cycle: Vec<usize> = body
            .0
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| bad(format!("{s:?} is not an atom index"))))
            .collect::<Result<_>>()?;
        for (i, &a) in cycle.iter().enumerate() {
            if a >= n {
                return Err(bad(format!("atom {a} out of range for {n} atoms")));
            }
            if std::mem::replace(&mut moved[a], true) {
                return Err(bad(format!("atom {a} appears twice")));
            }
            perm[a] = cycle[(i + 1) % cycle.len()];
        }
        rest = body.1.trim_start();
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_level_sizes() {
        let u = build_universe(0, 4).unwrap();
        assert_eq!(u.level_sizes(), vec![0, 1, 2, 4, 16]);
    }

    #[test]
    fn atoms_survive_powerset() {
        let u = build_universe(2, 1).unwrap();
        assert_eq!(u.level(1).len(), 4);
        assert!(u.level(1).contains(&0) && u.level(1).contains(&1));
        assert_eq!(build_universe(2, 2).unwrap().level(2).len(), 16);
    }

    #[test]
    fn ranks() {
        let u = build_universe(1, 2).unwrap();
        assert_eq!(u.rank(0), 0);
        let empty = u.find(&[]).unwrap();
        assert_eq!(u.rank(empty), 1);
        let pair = u.find(&[0, empty]).unwrap();
        assert_eq!(u.rank(pair), 2);
    }

    #[test]
    fn cap() {
        let limits = Limits {
            wf_elements: 100,
            ..Limits::default()
        };
        assert!(matches!(
            build_universe_with(0, 5, &limits),
            Err(Error::SizeLimitExceeded { .. })
        ));
        assert!(matches!(build_universe(0, 6), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn identity_extends_to_identity() {
        let u = build_universe(2, 2).unwrap();
        let m = extend_map(&u, &u, &[0, 1]).unwrap();
        assert_eq!(m.full_map, (0..u.len()).collect::<Vec<_>>());
    }

    #[test]
    fn transposition_fixes_eight() {
        let u = build_universe(2, 2).unwrap();
        let m = extend_map(&u, &u, &[1, 0]).unwrap();
        let r = classify_map(&u, &u, &m);
        assert_eq!(r.kind, MapKind::Automorphism);
        assert!(r.membership_preserved);
        assert_eq!(r.fixed_points, 8);
        assert_eq!(m.compose(&m).full_map, (0..u.len()).collect::<Vec<_>>());
    }

    #[test]
    fn three_cycle_has_order_three() {
        let u = build_universe(3, 2).unwrap();
        let m = extend_map(&u, &u, &[1, 2, 0]).unwrap();
        let id: Vec<usize> = (0..u.len()).collect();
        assert_ne!(m.full_map, id);
        assert_ne!(m.compose(&m).full_map, id);
        assert_eq!(m.compose(&m).compose(&m).full_map, id);
    }

    #[test]
    fn embedding_into_more_atoms() {
        let small = build_universe(2, 2).unwrap();
        let big = build_universe(3, 2).unwrap();
        let m = extend_map(&small, &big, &[0, 1]).unwrap();
        let r = classify_map(&small, &big, &m);
        assert_eq!(r.kind, MapKind::ProperEmbedding);
        assert!(r.injective && !r.surjective);
        assert!(r.membership_preserved && r.rank_preserved && r.pure_sets_fixed);
    }

    #[test]
    fn map_errors() {
        let u = build_universe(2, 1).unwrap();
        assert_eq!(extend_map(&u, &u, &[0, 0]), Err(Error::NotInjective(0, 1)));
        assert!(matches!(extend_map(&u, &u, &[0]), Err(Error::InvalidAtomMap(_))));
        assert!(matches!(extend_map(&u, &u, &[0, 2]), Err(Error::InvalidAtomMap(_))));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(
            all_automorphisms(&build_universe(1, 2).unwrap()).unwrap().order,
            1u32.into()
        );
        assert_eq!(
            all_automorphisms(&build_universe(2, 2).unwrap()).unwrap().order,
            2u32.into()
        );
        assert_eq!(
            all_automorphisms(&build_universe(3, 2).unwrap()).unwrap().order,
            6u32.into()
        );
    }

    #[test]
    fn cycles() {
        assert_eq!(parse_cycles("(0 1)(2)", 3).unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_cycles("(0,1,2)", 3).unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles("", 2).unwrap(), vec![0, 1]);
        assert!(parse_cycles("(0 3)", 3).is_err());
        assert!(parse_cycles("(0 1)(1 2)", 3).is_err());
        assert!(parse_cycles("0 1", 3).is_err());
    }
}
