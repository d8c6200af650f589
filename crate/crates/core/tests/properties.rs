use proptest::prelude::*;

use haar_core::auto::{automorphism_group, find_isomorphism};
use haar_core::haar::{affine_isomorphism, build_haar};
use haar_core::perm::{Perm, PermGroup};
use haar_core::theorem::decide_iso_valency4;
use haar_core::zn::{self, AffineWitness, ZnSet};

fn four_set(n: u32) -> impl Strategy<Value = ZnSet> {
    proptest::sample::subsequence((1..n).collect::<Vec<u32>>(), 3)
        .prop_map(move |rest| ZnSet::new(n, std::iter::once(0).chain(rest)).unwrap())
}

fn connected_pair() -> impl Strategy<Value = (ZnSet, ZnSet)> {
    (6u32..=40)
        .prop_flat_map(|n| (four_set(n), four_set(n)))
        .prop_filter("connected", |(s, t)| {
            let n = s.modulus();
            zn::subgroup_index(n, &s.differences()) == n && zn::subgroup_index(n, &t.differences()) == n
        })
}

fn unit_and_shift() -> impl Strategy<Value = (u32, u32, u32)> {
    (3u32..=40).prop_flat_map(|n| {
        let units = zn::units(n).unwrap();
        (Just(n), proptest::sample::select(units), 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_is_an_affine_invariant((n, a, b) in unit_and_shift(), seed in any::<u64>()) {
        let elems: Vec<u32> = (0..4).map(|i| ((seed >> (8 * i)) as u32) % n).collect();
        let s = ZnSet::from_residues(n, elems).unwrap();
        let t = zn::apply_affine(&s, AffineWitness { a, b }).unwrap();
        prop_assert_eq!(zn::canonical_affine_form(&s).0, zn::canonical_affine_form(&t).0);
        let w = zn::affinely_equivalent(&s, &t).unwrap().unwrap();
        prop_assert_eq!(zn::apply_affine(&s, w).unwrap(), t);
    }

    #[test]
    fn affine_maps_are_isomorphisms(((n, a, b), s) in unit_and_shift().prop_flat_map(|(n, a, b)| (Just((n, a, b)), four_set(n.max(4))))) {
        let s = ZnSet::from_residues(n, s.elems().iter().copied()).unwrap();
        let t = zn::apply_affine(&s, AffineWitness { a, b }).unwrap();
        let f = affine_isomorphism(n, AffineWitness { a, b }).unwrap();
        prop_assert!(build_haar(&s).unwrap().maps_onto(&f, &build_haar(&t).unwrap()));
    }

    #[test]
    fn decision_matches_search((s, t) in connected_pair()) {
        let d = decide_iso_valency4(&s, &t).unwrap();
        let gs = build_haar(&s).unwrap();
        let gt = build_haar(&t).unwrap();
        let found = find_isomorphism(&gs, &gt);
        prop_assert_eq!(d.isomorphic, found.is_some(), "{} vs {}", s, t);
        if let Some(f) = d.isomorphism {
            prop_assert!(gs.maps_onto(&f, &gt));
        }
        if let Some(f) = found {
            prop_assert!(gs.maps_onto(&f, &gt));
        }
        prop_assert_eq!(decide_iso_valency4(&t, &s).unwrap().isomorphic, d.isomorphic);
    }

    #[test]
    fn chain_order_matches_enumeration(degree in 2usize..=7, seeds in proptest::collection::vec(any::<u64>(), 1..=3)) {
        let gens: Vec<Perm> = seeds
            .iter()
            .map(|&seed| {
                let mut images: Vec<u32> = (0..degree as u32).collect();
                let mut x = seed;
                for i in (1..degree).rev() {
                    images.swap(i, (x % (i as u64 + 1)) as usize);
                    x /= i as u64 + 1;
                }
                Perm::from_images(images).unwrap()
            })
            .collect();
        let g = PermGroup::new(degree, gens.clone());
        let elems = g.closure_elements(10_000).unwrap();
        prop_assert_eq!(g.order(), elems.len() as u128);
        for e in &elems {
            prop_assert!(g.contains(e));
        }
    }

    #[test]
    fn automorphism_group_elements_preserve_edges(s in (5u32..=24).prop_flat_map(four_set)) {
        let g = build_haar(&s).unwrap();
        let group = automorphism_group(&g);
        for f in group.generators() {
            prop_assert!(g.is_automorphism(f));
        }
        prop_assert_eq!(group.order() % (2 * s.modulus() as u128), 0);
    }
}

#[test]
fn exceptional_pairs_beyond_the_sweep() {
    use haar_core::theorem::{condition2_holds, Quadruple, Route};
    let mut seen = 0;
    for n in [32u32, 48, 64] {
        for u in (2..n / 2).step_by(2) {
            for v in 1..n / 2 {
                let Ok(q) = Quadruple::new(n, u, v) else { continue };
                if !condition2_holds(&q) {
                    continue;
                }
                let d = decide_iso_valency4(&q.set(), &q.partner_set()).unwrap();
                assert!(d.isomorphic, "{q}");
                if d.route == Route::Exceptional {
                    let found =
                        find_isomorphism(&build_haar(&q.set()).unwrap(), &build_haar(&q.partner_set()).unwrap());
                    assert!(found.is_some(), "{q}");
                    assert!(zn::affinely_equivalent(&q.set(), &q.partner_set()).unwrap().is_none());
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 0);
}
