mod support;

use std::sync::Arc;

use finshape::covers::{canonical_projection_closed, canonical_projection_from_basis, leq_c};
use finshape::homology::{chain_complex, homology, weak_invariants};
use finshape::homotopy::{are_homotopic, core, core_with_priority, homotopy_equivalent, self_map};
use finshape::prosystem::{build_m, sw_compare, verify_coherence, SwOptions, SystemKind, Verdict};
use finshape::simplicial::{barycentric, finite_subdivision, induced_map, order_complex, SimplicialComplex};
use finshape::snf::{smith_decomposition, smith_normal_form, SparseMatrix};
use finshape::{Collapsibility, ContinuousMap, Cover, ElementSet, FiniteSpace, Guards};
use num_bigint::BigInt;
use proptest::prelude::*;

const FACES: usize = 100_000;

fn space(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max, prop::collection::vec(any::<bool>(), max * (max - 1) / 2)).prop_map(|(n, bits)| {
        let mut pairs = Vec::new();
        let mut k = 0;
        for j in 0..n {
            for i in 0..j {
                if bits[k] {
                    pairs.push((i, j));
                }
                k += 1;
            }
        }
        FiniteSpace::from_relation((0..n).map(|i| format!("p{i}")).collect(), &pairs).unwrap()
    })
}

fn with_permutation(max: usize) -> impl Strategy<Value = (FiniteSpace, Vec<usize>)> {
    space(max).prop_flat_map(|x| {
        let n = x.len();
        (Just(x), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn relabel(x: &FiniteSpace, perm: &[usize]) -> FiniteSpace {
    // Element perm[i] of the copy plays the role of element i.
    let n = x.len();
    let mut inverse = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    FiniteSpace::from_order((0..n).map(|i| format!("q{i}")).collect(), |a, b| x.leq(inverse[a], inverse[b])).unwrap()
}

fn with_cover(max: usize) -> impl Strategy<Value = (Arc<FiniteSpace>, Cover)> {
    space(max).prop_flat_map(|x| {
        let opens: Vec<ElementSet> =
            x.all_opens(16).unwrap().into_iter().map(|o| o.into_members()).filter(|o| !o.is_empty()).collect();
        let k = opens.len();
        let x = Arc::new(x);
        prop::collection::vec(any::<bool>(), k).prop_map(move |pick| {
            let mut members: Vec<ElementSet> =
                opens.iter().zip(&pick).filter(|(_, &p)| p).map(|(o, _)| o.clone()).collect();
            members.push(x.full_set());
            (x.clone(), Cover::new(x.clone(), members).unwrap())
        })
    })
}

fn complex() -> impl Strategy<Value = SimplicialComplex> {
    (2usize..8).prop_flat_map(|v| {
        prop::collection::vec(prop::collection::btree_set(0..v, 1..=4), 1..7).prop_map(move |facets| {
            let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
            SimplicialComplex::from_facets((0..v).map(|i| i.to_string()).collect(), &facets, FACES).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn topology_round_trip(x in space(6)) {
        let opens: Vec<Vec<String>> = x
            .all_opens(16)
            .unwrap()
            .iter()
            .map(|o| o.members().iter().map(|i| x.label(i).to_string()).collect())
            .collect();
        let y = FiniteSpace::from_topology(x.labels().to_vec(), &opens).unwrap();
        prop_assert!(y.is_homeomorphic(&x, 24).unwrap().is_some());
        prop_assert_eq!(y, x);
    }

    #[test]
    fn minimal_open_is_smallest(x in space(6)) {
        let opens = x.all_opens(16).unwrap();
        for p in 0..x.len() {
            let u = x.minimal_open_at(p);
            for o in opens.iter().filter(|o| o.contains(p)) {
                prop_assert!(u.members().is_subset(o.members()));
            }
        }
    }

    #[test]
    fn continuity_matches_preimages(x in space(5), y in space(5), seed in prop::collection::vec(0usize..64, 5)) {
        let (x, y) = (Arc::new(x), Arc::new(y));
        let assignment: Vec<usize> = (0..x.len()).map(|i| seed[i] % y.len()).collect();
        let preimages_open = y.all_opens(16).unwrap().iter().all(|o| {
            let pre = ElementSet::from_indices(x.len(), (0..x.len()).filter(|&i| o.contains(assignment[i])));
            x.is_open(&pre)
        });
        prop_assert_eq!(ContinuousMap::new(x, y, assignment).is_ok(), preimages_open);
    }

    #[test]
    fn homeomorphism_is_an_equivalence((x, perm) in with_permutation(6), (_, perm2) in with_permutation(6)) {
        let y = relabel(&x, &perm);
        prop_assert!(x.is_homeomorphic(&x, 24).unwrap().is_some());
        prop_assert!(x.is_homeomorphic(&y, 24).unwrap().is_some());
        prop_assert!(y.is_homeomorphic(&x, 24).unwrap().is_some());
        if perm2.len() == x.len() {
            let z = relabel(&y, &perm2);
            prop_assert!(x.is_homeomorphic(&z, 24).unwrap().is_some());
        }
    }

    #[test]
    fn fences_are_valid(x in space(5), seed in prop::collection::vec(0usize..64, 10)) {
        let x = Arc::new(x);
        let g = Guards::default();
        let maps = finshape::homotopy::continuous_maps(&x, &x, 100_000).unwrap();
        let f = &self_map(&x, maps[seed[0] % maps.len()].clone()).unwrap();
        let h = &self_map(&x, maps[seed[1] % maps.len()].clone()).unwrap();
        if let Some(fence) = are_homotopic(f, h, &g).unwrap() {
            prop_assert!(fence.is_valid());
            prop_assert_eq!(fence.maps().first().unwrap(), f);
            prop_assert_eq!(fence.maps().last().unwrap(), h);
        }
        if f.is_below(h) && f != h {
            prop_assert_eq!(are_homotopic(f, h, &g).unwrap().unwrap().len(), 1);
        }
    }

    #[test]
    fn core_is_independent_of_removal_order((x, perm) in with_permutation(7)) {
        let a = core(&x);
        let b = core_with_priority(&x, &perm);
        prop_assert!(a.space().is_homeomorphic(b.space(), 24).unwrap().is_some());
        prop_assert!(finshape::homotopy::beat_points(b.space()).is_empty());
    }

    #[test]
    fn homotopy_equivalence_preserves_homology(x in space(5), y in space(5)) {
        if homotopy_equivalent(&x, &y, &Guards::default()).unwrap() {
            prop_assert_eq!(
                weak_invariants(&x, FACES).unwrap().trimmed(),
                weak_invariants(&y, FACES).unwrap().trimmed()
            );
        }
    }

    #[test]
    fn order_complex_is_functorial(x in space(5), seed in prop::collection::vec(0usize..64, 2)) {
        let x = Arc::new(x);
        let maps = finshape::homotopy::continuous_maps(&x, &x, 100_000).unwrap();
        let f = &self_map(&x, maps[seed[0] % maps.len()].clone()).unwrap();
        let g = &self_map(&x, maps[seed[1] % maps.len()].clone()).unwrap();
        let id = induced_map(&ContinuousMap::identity(x.clone()), FACES).unwrap();
        prop_assert!(id.vertex_assignment().iter().enumerate().all(|(i, &v)| i == v));
        let composite = induced_map(&f.then(g).unwrap(), FACES).unwrap();
        let stepwise = induced_map(f, FACES).unwrap().then(&induced_map(g, FACES).unwrap()).unwrap();
        prop_assert_eq!(composite.vertex_assignment(), stepwise.vertex_assignment());
    }

    #[test]
    fn cover_order_complex_sits_in_nerve((_, u) in with_cover(5)) {
        let k = order_complex(&u.to_poset(), FACES).unwrap();
        let n = u.nerve(FACES).unwrap();
        for f in k.faces() {
            prop_assert!(n.contains_face(f));
        }
    }

    #[test]
    fn subdivision_preserves_homology(k in complex()) {
        let b = barycentric(&k, FACES).unwrap();
        prop_assert_eq!(b.euler_characteristic(), k.euler_characteristic());
        prop_assert_eq!(homology(&b).unwrap().trimmed(), homology(&k).unwrap().trimmed());
    }

    #[test]
    fn boundary_squares_to_zero_and_euler(k in complex()) {
        prop_assert!(chain_complex(&k).boundary_squares_to_zero());
        prop_assert_eq!(homology(&k).unwrap().euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn cone_collapse_point(k in complex()) {
        if k.is_cone().is_some() {
            prop_assert_eq!(k.collapsible(100_000), Collapsibility::Collapsible);
        }
        if k.collapsible(100_000) == Collapsibility::Collapsible {
            prop_assert!(homology(&k).unwrap().is_point());
        }
    }

    #[test]
    fn homology_matches_rank_oracle(k in complex()) {
        let h = homology(&k).unwrap();
        let o = support::rank_homology(&k);
        for d in 0..o.betti.len() {
            prop_assert_eq!(h.betti(d), o.betti[d]);
            prop_assert_eq!(h.torsion(d).iter().filter(|&&t| t % 2 == 0).count(), o.even_torsion[d]);
        }
    }

    #[test]
    fn smith_form_reassembles(m in prop::collection::vec(prop::collection::vec(-6i64..6, 4), 1..5)) {
        let dec = smith_decomposition(&m);
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let mul = |a: &Vec<Vec<BigInt>>, b: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            (0..a.len())
                .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
                .collect()
        };
        prop_assert_eq!(mul(&mul(&dec.u, &big), &dec.v), dec.d.clone());
        let diag = dec.diagonal();
        let nonzero: Vec<BigInt> = diag.into_iter().filter(|d| *d != BigInt::from(0)).collect();
        for w in nonzero.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
        }
        let sparse = smith_normal_form(&SparseMatrix::from_dense(&m));
        prop_assert_eq!(sparse.invariant_factors, nonzero);
        prop_assert_eq!(sparse.rank, support::rank_rational(&m));
    }

    #[test]
    fn basis_like_matches_definition((_, u) in with_cover(6)) {
        prop_assert_eq!(u.is_basis_like(), support::basis_like_by_definition(u.members()));
    }

    #[test]
    fn closure_is_closed_and_basis_like((_, u) in with_cover(6)) {
        let c = u.intersection_closure();
        prop_assert!(c.is_intersection_closed() && c.is_basis_like());
        let fine = u.meets(&c).unwrap();
        let p = canonical_projection_closed(&fine, &c).unwrap();
        prop_assert!(p.is_valid());
    }

    #[test]
    fn basis_projects_onto_basis_like_covers((x, u) in with_cover(6)) {
        let b = Cover::minimal_basis(x.clone());
        if u.is_basis_like() {
            let p = canonical_projection_from_basis(&b, &u).unwrap();
            prop_assert!(p.is_valid());
            if let Some(q) = leq_c(&u, &b).unwrap() {
                prop_assert!(q.is_valid());
                prop_assert!(homotopy_equivalent(&u.to_poset(), &b.to_poset(), &Guards::default()).unwrap());
            }
        } else {
            prop_assert!(canonical_projection_from_basis(&b, &u).is_err());
        }
    }

    #[test]
    fn leq_witnesses_are_projections((x, u) in with_cover(5), pick in prop::collection::vec(any::<bool>(), 32)) {
        let members: Vec<ElementSet> = u.members().iter().zip(&pick).filter(|(_, &p)| p).map(|(m, _)| m.clone())
            .chain([x.full_set()]).collect();
        let v = Cover::new(x.clone(), members).unwrap();
        for (a, b) in [(&u, &v), (&v, &u), (&u, &u)] {
            if let Some(p) = leq_c(a, b).unwrap() {
                prop_assert!(p.is_valid());
            } else {
                prop_assert!(!std::ptr::eq(a, b));
            }
        }
    }

    #[test]
    fn verdicts_are_symmetric_and_sound(x in space(5), y in space(5)) {
        let o = SwOptions::default();
        let g = Guards::default();
        let v = sw_compare(&x, &y, &o);
        prop_assert_eq!(v.verdict, sw_compare(&y, &x, &o).verdict);
        prop_assert!(v.revalidate(&x, &y, &g).unwrap());
        prop_assert_eq!(sw_compare(&x, &x, &o).verdict, Verdict::Equivalent);
        let same = weak_invariants(&x, FACES).unwrap().trimmed() == weak_invariants(&y, FACES).unwrap().trimmed();
        match v.verdict {
            Verdict::Distinct => prop_assert!(!same),
            Verdict::Equivalent => prop_assert!(same),
            Verdict::Unknown => {}
        }
        if homotopy_equivalent(&x, &y, &g).unwrap() {
            prop_assert_eq!(v.verdict, Verdict::Equivalent);
        }
    }

    #[test]
    fn subdivision_is_weakly_equivalent(x in space(5)) {
        let sd = finite_subdivision(&x, FACES).unwrap();
        prop_assert_eq!(weak_invariants(&x, FACES).unwrap().trimmed(), weak_invariants(&sd, FACES).unwrap().trimmed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn full_systems_are_directed_and_coherent(x in space(4)) {
        let x = Arc::new(x);
        let g = Guards::default();
        if let Ok(s) = build_m(&x, SystemKind::Full, &g) {
            prop_assert!(s.is_directed());
            let r = verify_coherence(&s, &g, false);
            prop_assert!(r.passed(), "{:?}", r.failures);
        }
    }
}
