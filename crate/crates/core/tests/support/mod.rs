//! Reference computations used to cross-check the library.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use finshape::simplicial::SimplicialComplex;
use finshape::{ElementSet, FiniteSpace};
use num_bigint::BigInt;
use num_traits::Zero;

/// Boundary matrices built directly from the face list, without the
/// library's chain complex.
pub fn boundary_matrices(k: &SimplicialComplex) -> Vec<Vec<Vec<i64>>> {
    let top = k.dimension().map_or(0, |d| d + 1);
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
    for f in k.faces() {
        by_dim[f.len() - 1].push(f.clone());
    }
    let mut out = vec![Vec::new()];
    for d in 1..top {
        let pos: HashMap<&Vec<usize>, usize> = by_dim[d - 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut m = vec![vec![0i64; by_dim[d].len()]; by_dim[d - 1].len()];
        for (c, f) in by_dim[d].iter().enumerate() {
            for i in 0..f.len() {
                let mut g = f.clone();
                g.remove(i);
                m[pos[&g]][c] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
        out.push(m);
    }
    out
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_rational(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j]) / &prev;
                a[r][j] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank over the field with two elements.
pub fn rank_mod2(m: &[Vec<i64>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<u64>> = m
        .iter()
        .map(|r| {
            let mut bits = vec![0u64; cols.div_ceil(64)];
            for (j, &v) in r.iter().enumerate() {
                if v.rem_euclid(2) == 1 {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let bit = |r: &Vec<u64>| r[c / 64] >> (c % 64) & 1 == 1;
        let Some(p) = (rank..rows.len()).find(|&r| bit(&rows[r])) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row) {
                for (w, pw) in row.iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers and the number of even torsion coefficients per
/// dimension, from rational and mod-2 ranks alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankHomology {
    pub betti: Vec<usize>,
    pub even_torsion: Vec<usize>,
}

pub fn rank_homology(k: &SimplicialComplex) -> RankHomology {
    let ms = boundary_matrices(k);
    let top = ms.len();
    let sizes: Vec<usize> = (0..top).map(|d| k.faces().iter().filter(|f| f.len() == d + 1).count()).collect();
    let rq: Vec<usize> = ms.iter().map(|m| rank_rational(m)).collect();
    let r2: Vec<usize> = ms.iter().map(|m| rank_mod2(m)).collect();
    let at = |v: &Vec<usize>, d: usize| v.get(d).copied().unwrap_or(0);
    RankHomology {
        betti: (0..top).map(|d| sizes[d] - at(&rq, d) - at(&rq, d + 1)).collect(),
        even_torsion: (0..top).map(|d| at(&rq, d + 1) - at(&r2, d + 1)).collect(),
    }
}

/// The six-vertex triangulation of the real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    let facets =
        [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_facets((0..6).map(|i| format!("v{i}")).collect(), &facets, 1000).unwrap()
}

/// The seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets((0..7).map(|i| format!("v{i}")).collect(), &facets, 1000).unwrap()
}

/// The four-point circle model: `a, b < c, d`.
pub fn circle() -> Arc<FiniteSpace> {
    Arc::new(
        FiniteSpace::from_topology(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            &[
                vec![],
                vec!["a"],
                vec!["b"],
                vec!["a", "b"],
                vec!["a", "b", "c"],
                vec!["a", "b", "d"],
                vec!["a", "b", "c", "d"],
            ],
        )
        .unwrap(),
    )
}

/// `l` and `r` above `m`.
pub fn wedge() -> Arc<FiniteSpace> {
    Arc::new(FiniteSpace::from_hasse(["l", "m", "r"].map(String::from).to_vec(), &[("m", "l"), ("m", "r")]).unwrap())
}

/// Basis-like check straight from the definition.
pub fn basis_like_by_definition(members: &[ElementSet]) -> bool {
    members.iter().all(|u| {
        members.iter().all(|v| {
            let uv = u.intersection(v);
            let ok = uv.iter().all(|x| members.iter().any(|w| w.contains(x) && w.is_subset(&uv)));
            ok
        })
    })
}
