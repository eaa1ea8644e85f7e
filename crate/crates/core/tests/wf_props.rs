use std::collections::{BTreeMap, BTreeSet};

use hyperset::wf::{all_automorphisms, build_universe, classify_map, extend_map, LevelledUniverse, MapKind};
use hyperset::Error;

/// Hereditarily finite sets over atoms, as values. A singleton of an atom is
/// the atom itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum V {
    Atom(usize),
    Set(BTreeSet<V>),
}

fn mk(set: BTreeSet<V>) -> V {
    if set.len() == 1 {
        if let Some(V::Atom(a)) = set.iter().next() {
            return V::Atom(*a);
        }
    }
    V::Set(set)
}

fn oracle_levels(n: usize, k: usize) -> Vec<BTreeSet<V>> {
    let mut levels = vec![(0..n).map(V::Atom).collect::<BTreeSet<V>>()];
    for _ in 0..k {
        let prev: Vec<V> = levels.last().unwrap().iter().cloned().collect();
        let next: BTreeSet<V> = (0u64..1 << prev.len())
            .map(|mask| {
                mk(prev
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v.clone())
                    .collect())
            })
            .collect();
        levels.push(next);
    }
    levels
}

fn value_of(u: &LevelledUniverse, x: usize) -> V {
    if u.is_atom(x) {
        V::Atom(x)
    } else {
        mk(u.members(x).iter().map(|&m| value_of(u, m)).collect())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts bijections of the top level that preserve membership both ways, by
/// backtracking over elements in order.
fn brute_membership_automorphisms(u: &LevelledUniverse) -> usize {
    fn go(u: &LevelledUniverse, map: &mut Vec<usize>, used: &mut Vec<bool>) -> usize {
        let x = map.len();
        if x == u.len() {
            return 1;
        }
        let mut count = 0;
        for y in 0..u.len() {
            if used[y] {
                continue;
            }
            let consistent = (0..x)
                .all(|z| u.is_member(z, x) == u.is_member(map[z], y) && u.is_member(x, z) == u.is_member(y, map[z]))
                && u.is_member(x, x) == u.is_member(y, y);
            if consistent {
                used[y] = true;
                map.push(y);
                count += go(u, map, used);
                map.pop();
                used[y] = false;
            }
        }
        count
    }
    go(u, &mut Vec::new(), &mut vec![false; u.len()])
}

#[test]
fn levels_match_the_value_model() {
    for (n, k) in [(0, 4), (1, 3), (2, 2), (3, 2)] {
        let u = build_universe(n, k).unwrap();
        let oracle = oracle_levels(n, k);
        for (j, level) in oracle.iter().enumerate() {
            let ours: BTreeSet<V> = u.level(j).iter().map(|&x| value_of(&u, x)).collect();
            assert_eq!(&ours, level, "n={n} level {j}");
            assert_eq!(u.level(j).len(), level.len());
        }
        for x in u.elements() {
            let first = oracle.iter().position(|l| l.contains(&value_of(&u, x))).unwrap();
            assert_eq!(u.rank(x), first);
        }
    }
    assert_eq!(build_universe(0, 4).unwrap().level_sizes(), vec![0, 1, 2, 4, 16]);
}

#[test]
fn automorphisms_are_the_lifted_permutations() {
    for n in 1..=3 {
        let u = build_universe(n, 2).unwrap();
        let group = all_automorphisms(&u).unwrap();
        let factorial: u64 = (1..=n as u64).product();
        assert_eq!(group.order, factorial.into());
        if n <= 2 {
            assert_eq!(brute_membership_automorphisms(&u), factorial as usize);
        }
        let elements = group.elements(100).unwrap();
        let lifted: BTreeMap<Vec<usize>, Vec<usize>> = permutations(n)
            .into_iter()
            .map(|s| (s.clone(), extend_map(&u, &u, &s).unwrap().full_map))
            .collect();
        for p in &elements {
            // uniqueness: an automorphism is determined by its atom restriction
            let restriction = p[..n].to_vec();
            assert_eq!(&lifted[&restriction], p);
        }
        let distinct: BTreeSet<&Vec<usize>> = lifted.values().collect();
        assert_eq!(distinct.len(), lifted.len());
    }
}

#[test]
fn lifting_is_functorial() {
    for n in 1..=3 {
        let u = build_universe(n, 2).unwrap();
        let perms = permutations(n);
        let ext: Vec<_> = perms.iter().map(|s| extend_map(&u, &u, s).unwrap()).collect();
        for (i, s) in perms.iter().enumerate() {
            for (j, t) in perms.iter().enumerate() {
                let st: Vec<usize> = t.iter().map(|&a| s[a]).collect();
                assert_eq!(extend_map(&u, &u, &st).unwrap(), ext[i].compose(&ext[j]));
            }
        }
        let identity: Vec<usize> = (0..n).collect();
        let id = extend_map(&u, &u, &identity).unwrap();
        assert!(id.full_map.iter().enumerate().all(|(x, &y)| x == y));
    }
}

#[test]
fn permutations_classify_as_automorphisms() {
    for n in 1..=3 {
        let u = build_universe(n, 2).unwrap();
        for s in permutations(n) {
            let report = classify_map(&u, &u, &extend_map(&u, &u, &s).unwrap());
            assert_eq!(report.kind, MapKind::Automorphism);
            assert!(report.membership_preserved && report.rank_preserved && report.pure_sets_fixed);
            assert_eq!(report.pairs_checked, u.len() * u.len());
        }
    }
}

#[test]
fn smaller_stage_embeds_properly() {
    let src = build_universe(2, 2).unwrap();
    let dst = build_universe(3, 2).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            if a == b {
                continue;
            }
            let m = extend_map(&src, &dst, &[a, b]).unwrap();
            let report = classify_map(&src, &dst, &m);
            assert_eq!(report.kind, MapKind::ProperEmbedding);
            assert!(report.injective && !report.surjective);
            assert!(report.membership_preserved && report.rank_preserved && report.pure_sets_fixed);
            assert_eq!(report.missed, dst.len() - src.len());
            for x in src.elements().filter(|&x| src.is_pure(x)) {
                assert_eq!(src.shape(x), dst.shape(m.apply(x)));
            }
        }
    }
}

#[test]
fn collapsing_maps_are_rejected() {
    let u = build_universe(3, 1).unwrap();
    assert!(matches!(extend_map(&u, &u, &[0, 0, 1]), Err(Error::NotInjective(0, 1))));
    assert!(matches!(extend_map(&u, &u, &[0, 1]), Err(Error::InvalidAtomMap(_))));
    assert!(matches!(extend_map(&u, &u, &[0, 1, 7]), Err(Error::InvalidAtomMap(_))));
}

#[test]
fn lifted_maps_preserve_membership_on_random_injections() {
    use rand::seq::SliceRandom;
    let mut r = hyperset::gen::rng(61);
    for _ in 0..50 {
        let n = rand::Rng::gen_range(&mut r, 1..=3);
        let m = rand::Rng::gen_range(&mut r, n..=3);
        let k = rand::Rng::gen_range(&mut r, 1..=2);
        let src = build_universe(n, k).unwrap();
        let dst = build_universe(m, k).unwrap();
        let mut pool: Vec<usize> = (0..m).collect();
        pool.shuffle(&mut r);
        let sigma = &pool[..n];
        let map = extend_map(&src, &dst, sigma).unwrap();
        for x in src.elements() {
            assert_eq!(value_of(&dst, map.apply(x)), rename(&value_of(&src, x), sigma));
        }
        let report = classify_map(&src, &dst, &map);
        assert!(report.membership_preserved && report.injective);
        assert_eq!(report.kind == MapKind::Automorphism, n == m);
    }
}

fn rename(v: &V, sigma: &[usize]) -> V {
    match v {
        V::Atom(a) => V::Atom(sigma[*a]),
        V::Set(s) => mk(s.iter().map(|w| rename(w, sigma)).collect()),
    }
}
