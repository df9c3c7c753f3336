//! Order-isomorphism search by backtracking.
//!
//! Elements of the source are assigned in a linear extension so every
//! candidate is checked against all earlier assignments in both directions.
//! Candidates are pruned by a per-element signature (down/up-set sizes,
//! heights, covering degrees) that any isomorphism must preserve.

use crate::poset::FiniteSpace;
use crate::{Error, Result};

type Signature = (usize, usize, usize, usize, usize, usize);

fn signatures(x: &FiniteSpace) -> Vec<Signature> {
    let n = x.len();
    let heights = x.element_heights();
    // Heights measured from the top.
    let mut depth = vec![0usize; n];
    let mut order = x.linear_extension();
    order.reverse();
    for &v in &order {
        depth[v] = x.up(v).iter().filter(|&w| w != v).map(|w| depth[w] + 1).max().unwrap_or(0);
    }
    let mut lower_covers = vec![0usize; n];
    let mut upper_covers = vec![0usize; n];
    for (a, b) in x.covering_pairs() {
        upper_covers[a] += 1;
        lower_covers[b] += 1;
    }
    (0..n).map(|v| (x.down(v).len(), x.up(v).len(), heights[v], depth[v], lower_covers[v], upper_covers[v])).collect()
}

pub(crate) fn find_isomorphism(x: &FiniteSpace, y: &FiniteSpace, guard: usize) -> Result<Option<Vec<usize>>> {
    if x.len() != y.len() {
        return Ok(None);
    }
    if x.len() > guard {
        return Err(Error::SizeGuardExceeded { what: "isomorphism search", limit: guard, actual: x.len() });
    }
    let sx = signatures(x);
    let sy = signatures(y);
    let mut a = sx.clone();
    let mut b = sy.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Ok(None);
    }
    let order = x.linear_extension();
    let candidates: Vec<Vec<usize>> =
        order.iter().map(|&v| (0..y.len()).filter(|&w| sy[w] == sx[v]).collect()).collect();
    let mut map = vec![usize::MAX; x.len()];
    let mut used = vec![false; y.len()];
    if extend(x, y, &order, &candidates, 0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn extend(
    x: &FiniteSpace,
    y: &FiniteSpace,
    order: &[usize],
    candidates: &[Vec<usize>],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    for &w in &candidates[pos] {
        if used[w] {
            continue;
        }
        let consistent = order[..pos].iter().all(|&u| {
            let fu = map[u];
            x.leq(u, v) == y.leq(fu, w) && x.leq(v, u) == y.leq(w, fu)
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(x, y, order, candidates, pos + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_vs_antichain() {
        let c = FiniteSpace::chain(3);
        let a = FiniteSpace::antichain(3);
        assert_eq!(find_isomorphism(&c, &a, 24).unwrap(), None);
        assert_eq!(find_isomorphism(&c, &c, 24).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn guard() {
        let a = FiniteSpace::antichain(30);
        assert!(matches!(find_isomorphism(&a, &a, 24), Err(Error::SizeGuardExceeded { .. })));
    }

    #[test]
    fn relabelled_copy() {
        let x = FiniteSpace::from_hasse(
            ["p", "q", "r", "s"].map(String::from).to_vec(),
            &[("s", "p"), ("s", "q"), ("r", "p")],
        )
        .unwrap();
        let y = FiniteSpace::from_hasse(
            ["1", "2", "3", "4"].map(String::from).to_vec(),
            &[("1", "3"), ("2", "3"), ("2", "4")],
        )
        .unwrap();
        let f = find_isomorphism(&x, &y, 24).unwrap().unwrap();
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(x.leq(u, v), y.leq(f[u], f[v]));
            }
        }
    }
}
