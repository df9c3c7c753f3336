//! Frozen reference values, each computed by a brute-force oracle that
//! shares no code with the library.

mod support;

use std::sync::Arc;

use finshape::census::{census, posets_up_to_iso};
use finshape::covers::{count_covers, enumerate_covers};
use finshape::homology::homology;
use finshape::prosystem::{build_m, verify_coherence, verify_rudimentary, SystemKind};
use finshape::simplicial::{finite_subdivision, order_complex};
use finshape::{CoverFilter, ElementSet, FiniteSpace, Guards};

use support::{basis_like_by_definition, circle, projective_plane, rank_homology, torus};

/// Every non-empty down-set, by brute force over all subsets.
fn opens_by_brute_force(x: &FiniteSpace) -> Vec<ElementSet> {
    let n = x.len();
    (1u32..1 << n)
        .map(|m| ElementSet::from_indices(n, (0..n).filter(|&i| m >> i & 1 == 1)))
        .filter(|s| s.iter().all(|y| (0..n).all(|z| !x.leq(z, y) || s.contains(z))))
        .collect()
}

/// Basis-like covers by brute force over all families of opens.
fn basis_like_by_brute_force(x: &FiniteSpace) -> usize {
    let opens = opens_by_brute_force(x);
    let full = x.full_set();
    (1u64..1 << opens.len())
        .filter(|&m| {
            let members: Vec<ElementSet> =
                opens.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, o)| o.clone()).collect();
            let mut union = ElementSet::empty(x.len());
            for o in &members {
                union.union_with(o);
            }
            union == full && basis_like_by_definition(&members)
        })
        .count()
}

#[test]
fn poset_census_counts() {
    let counts: Vec<usize> = (1..=6).map(|n| posets_up_to_iso(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 2, 5, 16, 63, 318]);
}

#[test]
fn basis_like_counts_match_brute_force() {
    let g = Guards::default();
    for x in census(4).unwrap() {
        let x = Arc::new(x);
        let fast = count_covers(&x, CoverFilter::BasisLike, &g).unwrap() as usize;
        assert_eq!(fast, enumerate_covers(&x, CoverFilter::BasisLike, &g).unwrap().count());
        assert_eq!(fast, basis_like_by_brute_force(&x), "{:?}", x.labels());
    }
}

#[test]
fn basis_like_totals() {
    let g = Guards::default();
    let totals: Vec<u128> = (1..=4)
        .map(|n| {
            posets_up_to_iso(n)
                .unwrap()
                .into_iter()
                .map(|x| count_covers(&x, CoverFilter::BasisLike, &g).unwrap())
                .sum()
        })
        .collect();
    assert_eq!(totals, vec![1, 7, 109, 7357]);
}

#[test]
fn intersection_closed_counts_match_brute_force() {
    let g = Guards::default();
    for x in census(4).unwrap() {
        let x = Arc::new(x);
        let all: Vec<_> = enumerate_covers(&x, CoverFilter::All, &g).unwrap().collect();
        let expected = all.iter().filter(|c| c.is_intersection_closed()).count();
        let closed = enumerate_covers(&x, CoverFilter::IntersectionClosed, &g).unwrap().count();
        assert_eq!(closed, expected);
        let opens = opens_by_brute_force(&x).len();
        assert_eq!(x.all_opens(16).unwrap().len(), opens + 1);
    }
}

#[test]
fn circle_values() {
    let x = circle();
    let g = Guards::default();
    assert_eq!(count_covers(&x, CoverFilter::BasisLike, &g).unwrap(), 34);
    let s = build_m(&x, SystemKind::Full, &g).unwrap();
    assert_eq!(s.len(), 34);
    let r = verify_coherence(&s, &g, false);
    assert!(r.passed());
    let r = verify_rudimentary(&x, &g).unwrap();
    assert!(r.passed());
    assert!(r.above_basis.is_empty());
    let sd = finite_subdivision(&x, g.faces).unwrap();
    assert_eq!(sd.len(), 8);
    assert_eq!(homology(&order_complex(&sd, g.faces).unwrap()).unwrap().to_string(), "(Z; Z)");
}

#[test]
fn classical_surfaces() {
    let rp2 = rank_homology(&projective_plane());
    assert_eq!(rp2.betti, vec![1, 0, 0]);
    assert_eq!(rp2.even_torsion, vec![0, 1, 0]);
    let h = homology(&projective_plane()).unwrap();
    assert_eq!(h.torsion(1), &[2]);
    let t = rank_homology(&torus());
    assert_eq!(t.betti, vec![1, 2, 1]);
    assert_eq!(t.even_torsion, vec![0, 0, 0]);
}
