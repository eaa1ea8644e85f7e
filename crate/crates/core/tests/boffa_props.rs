mod common;

use common::universes::{check_extension, random_partial_iso, random_universe, well_founded};
use hyperset::boffa::{Extension, SetId, Universe};
use hyperset::canon::is_rigid;
use hyperset::gen::{random_apg, rng};
use hyperset::search::pointed_isomorphic;
use rand::Rng;

#[test]
fn hundred_atoms_stay_distinct() {
    let mut u = Universe::new();
    let mut atoms = Vec::new();
    for _ in 0..100 {
        let a = u.add_quine_atom();
        u.check_invariants().unwrap();
        assert!(u.is_quine_atom(a));
        assert!(!atoms.contains(&a));
        atoms.push(a);
    }
    assert_eq!(u.atoms(), atoms);
}

#[test]
fn isomorphic_but_unequal_atoms() {
    let mut u = Universe::new();
    let a = u.add_quine_atom();
    let b = u.add_quine_atom();
    let (pa, pb) = (u.picture_of(a).unwrap(), u.picture_of(b).unwrap());
    assert!(pointed_isomorphic(&pa, &pb).unwrap().is_some());
    assert_ne!(a, b);
}

#[test]
fn extension_steps_are_verified() {
    let mut r = rng(41);
    for task in 0..100 {
        let mut u = random_universe(&mut r, 60);
        assert!(u.len() <= 60);
        let f = random_partial_iso(&mut r, &u);
        u.check_partial_iso(&f).unwrap();
        let ids: Vec<SetId> = u.ids().collect();
        let x = ids[r.gen_range(0..ids.len())];
        let g = u.extend_iso_step(&f, x).unwrap();
        u.check_invariants().unwrap();
        if let Err(e) = check_extension(&u, &f, x, &g) {
            panic!("task {task}: {e}");
        }
    }
}

#[test]
fn repeated_steps_grow_the_orbit() {
    // extending the identity on {∅} to fresh atoms keeps minting new atoms
    let mut u = Universe::new();
    let empty = u.numeral(0).unwrap();
    let a = u.add_quine_atom();
    let f = [(empty, empty)].into_iter().collect();
    let mut images = std::collections::BTreeSet::new();
    for _ in 0..5 {
        let g = u.extend_iso_step(&f, a).unwrap();
        images.insert(g[&a]);
    }
    assert_eq!(images.len(), 5);
}

#[test]
fn realize_is_identity_on_old_part() {
    let mut r = rng(42);
    for _ in 0..100 {
        let mut u = random_universe(&mut r, 40);
        let ids: Vec<SetId> = u.ids().collect();
        let mut ext = Extension::new();
        let old: Vec<(usize, SetId)> = (0..3)
            .map(|_| {
                let id = ids[r.gen_range(0..ids.len())];
                (ext.old_node(&u, id).unwrap(), id)
            })
            .collect();
        let g = random_apg(&mut r, 4, 0.3);
        let base = ext.children.len();
        for _ in g.nodes() {
            ext.new_node();
        }
        for (a, b) in g.edges() {
            ext.add_child(base + a, base + b);
        }
        for &(v, _) in &old {
            if r.gen_bool(0.5) {
                ext.add_child(base + g.root(), v);
            }
        }
        let before = u.clone();
        match u.realize(&ext) {
            Ok(map) => {
                for (v, o) in ext.old.iter().enumerate() {
                    if let Some(id) = o {
                        assert_eq!(map[v], *id);
                        assert_eq!(u.members(*id).unwrap(), before.members(*id).unwrap());
                    }
                }
                for &(v, id) in &old {
                    assert_eq!(map[v], id);
                }
                u.check_invariants().unwrap();
            }
            Err(_) => assert_eq!(u, before),
        }
    }
}

#[test]
fn well_founded_sets_are_rigid_and_unique() {
    let mut r = rng(43);
    for _ in 0..30 {
        let u = random_universe(&mut r, 60);
        let wf: Vec<SetId> = u.ids().filter(|&x| well_founded(&u, x)).collect();
        let pics: Vec<_> = wf.iter().map(|&x| u.picture_of(x).unwrap()).collect();
        for (i, p) in pics.iter().enumerate() {
            assert!(is_rigid(p).unwrap());
            assert!(u.is_well_founded(wf[i]).unwrap());
            for q in &pics[i + 1..] {
                assert!(pointed_isomorphic(p, q).unwrap().is_none());
            }
        }
    }
}

#[test]
fn json_round_trip_is_exact() {
    let mut r = rng(44);
    for _ in 0..30 {
        let mut u = random_universe(&mut r, 60);
        let zero = u.numeral(0).unwrap();
        u.tuple_gadget(&[zero]).unwrap();
        let text = serde_json::to_string(&u.to_json()).unwrap();
        let back = Universe::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, u);
    }
}
