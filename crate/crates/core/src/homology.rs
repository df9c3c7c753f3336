//! Integer simplicial homology.
//!
//! Simplices are oriented by increasing vertex index; the boundary of
//! `[v_0, ..., v_d]` is `sum_i (-1)^i [v_0, ..., v_i^, ..., v_d]`. Each
//! boundary matrix is put in Smith normal form, which gives
//! `H_d = Z^(c_d - rank d_d - rank d_(d+1)) + torsion of d_(d+1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poset::FiniteSpace;
use crate::simplicial::{order_complex, SimplicialComplex};
use crate::snf::{smith_normal_form, SmithForm, SparseMatrix};
use crate::{Error, Result};

/// Boundary matrices of a complex, `boundaries[d]` mapping `d`-chains to
/// `(d-1)`-chains (rows are `(d-1)`-faces, columns `d`-faces in the
/// complex's face order). `boundaries[0]` is the zero map to the zero group.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Number of `d`-simplices, per dimension.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundary(&self, d: usize) -> &SparseMatrix {
        &self.boundaries[d]
    }

    pub fn top_dimension(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// Whether every composite `d_d ∘ d_(d+1)` vanishes.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (1..self.boundaries.len().saturating_sub(1))
            .all(|d| self.boundaries[d].checked_mul(&self.boundaries[d + 1]).is_some_and(|p| p.is_zero()))
    }
}

pub fn chain_complex(complex: &SimplicialComplex) -> ChainComplex {
    let dims = complex.dimension().map_or(0, |d| d + 1);
    let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); dims];
    for f in complex.faces() {
        by_dim[f.len() - 1].push(f);
    }
    let ranks: Vec<usize> = by_dim.iter().map(Vec::len).collect();
    let mut boundaries = Vec::with_capacity(dims);
    if dims > 0 {
        boundaries.push(SparseMatrix::new(0, ranks[0]));
    }
    for d in 1..dims {
        // Position of each (d-1)-face within its dimension.
        let lower: std::collections::HashMap<&[usize], usize> =
            by_dim[d - 1].iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let mut m = SparseMatrix::new(ranks[d - 1], ranks[d]);
        for (col, f) in by_dim[d].iter().enumerate() {
            for skip in 0..f.len() {
                let sub: Vec<usize> = f.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                m.push(lower[sub.as_slice()], col, sign);
            }
        }
        boundaries.push(m);
    }
    ChainComplex { ranks, boundaries }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyDim {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

/// Homology groups in dimensions `0..=dim`; trailing dimensions above the
/// complex dimension are omitted (they vanish).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct HomologyGroups {
    pub dims: Vec<HomologyDim>,
}

impl HomologyGroups {
    pub fn betti(&self, d: usize) -> usize {
        self.dims.get(d).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, d: usize) -> &[u64] {
        self.dims.get(d).map_or(&[], |g| g.torsion.as_slice())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum()
    }

    /// Drops trivial top dimensions so that equal groups compare equal
    /// regardless of the dimension of the complex they came from.
    pub fn trimmed(&self) -> HomologyGroups {
        let mut dims = self.dims.clone();
        while dims.last().is_some_and(|g| g.betti == 0 && g.torsion.is_empty()) {
            dims.pop();
        }
        HomologyGroups { dims }
    }

    /// Homology of a point.
    pub fn point() -> HomologyGroups {
        HomologyGroups { dims: vec![HomologyDim { betti: 1, torsion: Vec::new() }] }
    }

    pub fn is_point(&self) -> bool {
        self.trimmed() == Self::point()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

impl fmt::Display for HomologyGroups {
    /// `(Z; Z)` style: one entry per dimension, `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.trimmed();
        let parts: Vec<String> = t
            .dims
            .iter()
            .map(|g| {
                let mut summands = Vec::new();
                match g.betti {
                    0 => {}
                    1 => summands.push("Z".to_string()),
                    b => summands.push(format!("Z^{b}")),
                }
                summands.extend(g.torsion.iter().map(|q| format!("Z/{q}")));
                if summands.is_empty() {
                    "0".to_string()
                } else {
                    summands.join("+")
                }
            })
            .collect();
        write!(f, "({})", parts.join("; "))
    }
}

pub fn homology(complex: &SimplicialComplex) -> Result<HomologyGroups> {
    let cc = chain_complex(complex);
    let forms: Vec<SmithForm> = cc.boundaries.iter().map(smith_normal_form).collect();
    let mut dims = Vec::with_capacity(cc.ranks.len());
    for d in 0..cc.ranks.len() {
        let rank_out = forms[d].rank;
        let (rank_in, torsion) = match forms.get(d + 1) {
            Some(f) => (
                f.rank,
                f.torsion()
                    .map(|t| u64::try_from(t).map_err(|_| Error::TorsionOverflow))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => (0, Vec::new()),
        };
        dims.push(HomologyDim { betti: cc.ranks[d] - rank_out - rank_in, torsion });
    }
    Ok(HomologyGroups { dims })
}

/// Homology of the order complex, a weak homotopy invariant of the space.
pub fn weak_invariants(space: &FiniteSpace, face_guard: usize) -> Result<HomologyGroups> {
    homology(&order_complex(space, face_guard)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_boundary() {
        let edge = SimplicialComplex::simplex(2);
        let cc = chain_complex(&edge);
        assert_eq!(cc.boundary(1).to_dense(), vec![vec![-1], vec![1]]);
        assert_eq!(cc.boundary(0).rows(), 0);
        let pt = chain_complex(&SimplicialComplex::simplex(1));
        assert_eq!(pt.ranks(), &[1]);
    }

    #[test]
    fn sphere_and_simplex() {
        for n in 2..7 {
            let s = homology(&SimplicialComplex::simplex(n)).unwrap();
            assert!(s.is_point());
            let b = homology(&SimplicialComplex::simplex_boundary(n)).unwrap();
            let d = n - 2;
            for k in 0..=d {
                let expected = if d == 0 { 2 * usize::from(k == 0) } else { usize::from(k == 0 || k == d) };
                assert_eq!(b.betti(k), expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn display() {
        let g = HomologyGroups {
            dims: vec![
                HomologyDim { betti: 1, torsion: vec![] },
                HomologyDim { betti: 0, torsion: vec![2] },
                HomologyDim { betti: 0, torsion: vec![] },
            ],
        };
        assert_eq!(g.to_string(), "(Z; Z/2)");
        assert_eq!(HomologyGroups::point().to_string(), "(Z)");
    }
}
