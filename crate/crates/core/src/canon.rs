//! Canonical forms and equality under the isomorphism-extensional semantics,
//! plus the automorphism and rigidity queries built on the search engine.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::apg::{quotient, Apg, NodeId, Partition};
use crate::equivalence::{counting_colors, counting_partition, finsler_partition_with, max_bisimulation};
use crate::search::{self, AutomorphismGroup};
use crate::{Error, Limits, Result};

/// Which anti-foundation axiom decides set equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    /// Aczel: bisimilar graphs picture the same set.
    Afa,
    /// Scott: sets are determined by their (rigid) tree unfoldings.
    Safa,
    /// Finsler: sets are determined by the isomorphism type of their pictures.
    Fafa,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::Afa, Semantics::Safa, Semantics::Fafa];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Afa => "afa",
            Semantics::Safa => "safa",
            Semantics::Fafa => "fafa",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "afa" => Ok(Semantics::Afa),
            "safa" => Ok(Semantics::Safa),
            "fafa" => Ok(Semantics::Fafa),
            other => Err(format!("unknown semantics `{other}` (expected afa, safa or fafa)")),
        }
    }
}

/// A canonical picture together with the decoration that sends every node of
/// the input graph to the canonical node denoting the same set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonResult {
    pub canonical: Apg,
    pub decoration: Vec<NodeId>,
}

pub fn canonicalize(g: &Apg, semantics: Semantics) -> Result<CanonResult> {
    canonicalize_with(g, semantics, &Limits::default())
}

/// Collapses `g` to the canonical picture of its root set.
///
/// AFA needs one quotient by the maximal bisimulation. Under SAFA and FAFA a
/// quotient can merge parallel edges and so enable further merging, so the
/// partition/quotient step repeats until the partition comes out discrete.
/// FAFA pictures must also be plainly extensional; nodes with identical child
/// sets are merged when the Finsler partition has nothing left to merge.
pub fn canonicalize_with(g: &Apg, semantics: Semantics, limits: &Limits) -> Result<CanonResult> {
    let mut current = g.clone();
    let mut decoration: Vec<NodeId> = g.nodes().collect();
    loop {
        let partition = match semantics {
            Semantics::Afa => max_bisimulation(&current),
            Semantics::Safa => counting_partition(&current),
            Semantics::Fafa => {
                let p = finsler_partition_with(&current, limits)?;
                if p.is_discrete() {
                    extensional_partition(&current)
                } else {
                    p
                }
            }
        };
        let done = partition.is_discrete() || semantics == Semantics::Afa;
        let (next, step) = quotient(&current, &partition);
        for d in &mut decoration {
            *d = step[*d];
        }
        current = next;
        if done {
            let (ordered, perm) = current.canonically_ordered();
            for d in &mut decoration {
                *d = perm[*d];
            }
            let current = ordered;
            return Ok(CanonResult {
                canonical: current,
                decoration,
            });
        }
    }
}

/// Merges nodes with literally identical child sets.
fn extensional_partition(g: &Apg) -> Partition {
    Partition::from_labels(g.child_lists())
}

pub fn equal(g1: &Apg, g2: &Apg, semantics: Semantics) -> Result<bool> {
    equal_with(g1, g2, semantics, &Limits::default())
}

/// Whether two graphs picture the same set: canonicalize both, then test for
/// a root-preserving isomorphism.
pub fn equal_with(g1: &Apg, g2: &Apg, semantics: Semantics, limits: &Limits) -> Result<bool> {
    let c1 = canonicalize_with(g1, semantics, limits)?.canonical;
    let c2 = canonicalize_with(g2, semantics, limits)?.canonical;
    Ok(search::pointed_isomorphic_with(&c1, &c2, limits)?.is_some())
}

/// AFA equality by bisimilarity of the two roots in a disjoint union.
pub fn afa_equal_by_union(g1: &Apg, g2: &Apg) -> bool {
    let (union, offset) = g1.disjoint_union(g2);
    max_bisimulation(&union).same_class(g1.root(), g2.root() + offset)
}

/// Outcome of [`is_canonical_picture`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PictureVerdict {
    Canonical,
    /// Two distinct nodes that picture the same set.
    Merges(NodeId, NodeId),
}

impl PictureVerdict {
    pub fn is_canonical(self) -> bool {
        self == PictureVerdict::Canonical
    }
}

pub fn is_canonical_picture(g: &Apg, semantics: Semantics) -> Result<PictureVerdict> {
    is_canonical_picture_with(g, semantics, &Limits::default())
}

/// A graph is a canonical picture iff its semantics' partition is discrete:
/// strong extensionality for AFA, rigid unfoldings for SAFA, and for FAFA
/// plain extensionality plus pairwise non-isomorphic accessible sub-graphs.
pub fn is_canonical_picture_with(g: &Apg, semantics: Semantics, limits: &Limits) -> Result<PictureVerdict> {
    let partition = match semantics {
        Semantics::Afa => max_bisimulation(g),
        Semantics::Safa => counting_partition(g),
        Semantics::Fafa => {
            if let Some((u, v)) = g.extensionality_witness() {
                return Ok(PictureVerdict::Merges(u, v));
            }
            finsler_partition_with(g, limits)?
        }
    };
    Ok(match partition.merging_pair() {
        None => PictureVerdict::Canonical,
        Some((u, v)) => PictureVerdict::Merges(u, v),
    })
}

pub fn automorphisms(g: &Apg) -> Result<AutomorphismGroup> {
    automorphisms_with(g, &Limits::default())
}

/// All root-preserving automorphisms of `g`, as generators plus order. The
/// search is seeded with the counting partition, which automorphisms preserve.
pub fn automorphisms_with(g: &Apg, limits: &Limits) -> Result<AutomorphismGroup> {
    search::automorphisms_with(g, &counting_colors(g), limits)
}

/// Oracle mode: every automorphism by exhaustive enumeration, for at most 8
/// nodes.
pub fn automorphisms_exhaustive(g: &Apg) -> Result<Vec<Vec<NodeId>>> {
    if g.node_count() > 8 {
        return Err(Error::SizeLimitExceeded {
            what: "exhaustive automorphism node count",
            actual: g.node_count(),
            limit: 8,
        });
    }
    Ok(search::automorphisms_exhaustive(g))
}

pub fn is_rigid(g: &Apg) -> Result<bool> {
    is_rigid_with(g, &Limits::default())
}

pub fn is_rigid_with(g: &Apg, limits: &Limits) -> Result<bool> {
    Ok(search::first_nontrivial_automorphism(g, &counting_colors(g), limits)?.is_none())
}

/// Graphviz rendering: nodes are named by id and the root is drawn doubled.
pub fn to_dot(g: &Apg) -> String {
    let mut out = String::from("digraph apg {\n");
    for v in g.nodes() {
        let shape = if v == g.root() { "doublecircle" } else { "circle" };
        let _ = write!(out, "  n{v} [shape={shape}, label=\"{v}\"");
        if let Some(l) = g.label(v) {
            let _ = write!(out, ", xlabel=\"{}\"", l.replace('"', "\\\""));
        }
        out.push_str("];\n");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::pointed_isomorphic;

    fn x_omega() -> Apg {
        Apg::from_edges(2, &[(0, 0), (0, 1), (1, 1)], 0).unwrap()
    }

    fn two_cycle() -> Apg {
        Apg::from_edges(2, &[(0, 1), (1, 0)], 0).unwrap()
    }

    fn atom_doubleton() -> Apg {
        Apg::from_edges(3, &[(0, 1), (0, 2), (1, 1), (2, 2)], 0).unwrap()
    }

    #[test]
    fn omega_is_fixed_by_every_mode() {
        for s in Semantics::ALL {
            let c = canonicalize(&Apg::quine_atom(), s).unwrap();
            assert_eq!(c.canonical, Apg::quine_atom());
            assert_eq!(c.decoration, vec![0]);
        }
    }

    #[test]
    fn safa_collapses_three_cycle() {
        let g = Apg::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 0).unwrap();
        let c = canonicalize(&g, Semantics::Safa).unwrap();
        assert_eq!(c.canonical, Apg::quine_atom());
        assert_eq!(c.decoration, vec![0, 0, 0]);
    }

    #[test]
    fn safa_needs_a_second_pass() {
        // t -> p, t -> q, p -> q, q -> q
        let g = Apg::from_edges(3, &[(0, 1), (0, 2), (1, 2), (2, 2)], 0).unwrap();
        assert_eq!(counting_partition(&g).class_count(), 2);
        let c = canonicalize(&g, Semantics::Safa).unwrap();
        assert_eq!(c.canonical, Apg::quine_atom());
    }

    #[test]
    fn equality_examples() {
        let omega = Apg::quine_atom();
        for s in Semantics::ALL {
            assert!(equal(&omega, &two_cycle(), s).unwrap(), "{s}");
        }
        assert!(equal(&x_omega(), &omega, Semantics::Afa).unwrap());
        assert!(!equal(&x_omega(), &omega, Semantics::Safa).unwrap());
        assert!(!equal(&x_omega(), &omega, Semantics::Fafa).unwrap());
        // numeral 2 against a literal {0, {0}} with its own empty-set nodes
        let literal = Apg::from_edges(4, &[(0, 1), (0, 2), (2, 3)], 0).unwrap();
        for s in Semantics::ALL {
            assert!(equal(&Apg::numeral(2), &literal, s).unwrap(), "{s}");
        }
    }

    #[test]
    fn fafa_merges_plain_duplicates() {
        // u = {u}, root = {u}: the root is the Quine atom again
        let g = Apg::from_edges(2, &[(0, 1), (1, 1)], 0).unwrap();
        assert!(finsler_partition_with(&g, &Limits::default()).unwrap().is_discrete());
        let c = canonicalize(&g, Semantics::Fafa).unwrap();
        assert_eq!(c.canonical, Apg::quine_atom());
    }

    #[test]
    fn canonical_picture_checks() {
        for s in Semantics::ALL {
            assert!(is_canonical_picture(&Apg::quine_atom(), s).unwrap().is_canonical());
        }
        assert_eq!(
            is_canonical_picture(&x_omega(), Semantics::Afa).unwrap(),
            PictureVerdict::Merges(0, 1)
        );
        assert!(is_canonical_picture(&x_omega(), Semantics::Safa)
            .unwrap()
            .is_canonical());
        assert!(is_canonical_picture(&x_omega(), Semantics::Fafa)
            .unwrap()
            .is_canonical());
        assert_eq!(
            is_canonical_picture(&atom_doubleton(), Semantics::Safa).unwrap(),
            PictureVerdict::Merges(1, 2)
        );
    }

    #[test]
    fn automorphism_examples() {
        assert!(automorphisms(&Apg::numeral(4)).unwrap().is_trivial());
        assert_eq!(automorphisms(&atom_doubleton()).unwrap().order_u64(), Some(2));
        let cycle = Apg::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 0).unwrap();
        assert_eq!(automorphisms(&cycle).unwrap().order_u64(), Some(1));
        assert_eq!(automorphisms_exhaustive(&cycle).unwrap().len(), 1);
    }

    #[test]
    fn rigidity_examples() {
        assert!(is_rigid(&Apg::quine_atom()).unwrap());
        assert!(!is_rigid(&atom_doubleton()).unwrap());
        assert!(is_rigid(&Apg::numeral(3)).unwrap());
    }

    #[test]
    fn shortcut_agrees_on_examples() {
        assert!(afa_equal_by_union(&x_omega(), &Apg::quine_atom()));
        assert!(!afa_equal_by_union(&Apg::numeral(1), &Apg::quine_atom()));
    }

    #[test]
    fn decoration_law_holds() {
        let g = Apg::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 3)], 0).unwrap();
        for s in Semantics::ALL {
            let c = canonicalize(&g, s).unwrap();
            for v in g.nodes() {
                let mut image: Vec<NodeId> = g.children(v).iter().map(|&k| c.decoration[k]).collect();
                image.sort_unstable();
                image.dedup();
                assert_eq!(image, c.canonical.children(c.decoration[v]));
            }
            assert!(
                pointed_isomorphic(&c.canonical, &canonicalize(&c.canonical, s).unwrap().canonical)
                    .unwrap()
                    .is_some()
            );
        }
    }

    #[test]
    fn dot_marks_root() {
        let dot = to_dot(&Apg::quine_atom());
        assert!(dot.contains("n0 [shape=doublecircle"));
        assert!(dot.contains("n0 -> n0;"));
    }

    #[test]
    fn semantics_round_trips_through_text() {
        for s in Semantics::ALL {
            assert_eq!(s.to_string().parse::<Semantics>().unwrap(), s);
        }
        assert!("boffa".parse::<Semantics>().is_err());
    }
}
