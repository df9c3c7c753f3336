//! Posets up to isomorphism, and seeded random spaces and covers.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::bitset::ElementSet;
use crate::covers::Cover;
use crate::poset::FiniteSpace;
use crate::{Error, Result};

const CENSUS_LIMIT: usize = 7;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

type Fingerprint = (Vec<(usize, usize)>, usize);

/// Isomorphism-invariant fingerprint used to bucket candidates.
fn fingerprint(x: &FiniteSpace) -> Fingerprint {
    let mut sig: Vec<(usize, usize)> = (0..x.len()).map(|v| (x.down(v).len(), x.up(v).len())).collect();
    sig.sort_unstable();
    (sig, x.covering_pairs().len())
}

/// One representative of every isomorphism class of posets with exactly
/// `n` elements, labelled `0..n` in a linear extension. Supported up to
/// seven elements.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<FiniteSpace>> {
    if n > CENSUS_LIMIT {
        return Err(Error::SizeGuardExceeded { what: "poset census", limit: CENSUS_LIMIT, actual: n });
    }
    let mut level = vec![FiniteSpace::from_downsets_unchecked(vec![], vec![])];
    for m in 1..=n {
        // Every poset arises from a smaller one by adding a maximal element
        // above some down-set.
        let mut buckets: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
        let mut next: Vec<FiniteSpace> = Vec::new();
        for p in &level {
            for below in p.all_opens(usize::MAX)? {
                let mut down: Vec<ElementSet> =
                    (0..p.len()).map(|v| ElementSet::from_indices(m, p.down(v).iter())).collect();
                let mut top = ElementSet::from_indices(m, below.members().iter());
                top.insert(m - 1);
                down.push(top);
                let candidate = FiniteSpace::from_downsets_unchecked(labels(m), down);
                let bucket = buckets.entry(fingerprint(&candidate)).or_default();
                let mut seen = false;
                for &i in bucket.iter() {
                    if next[i].is_homeomorphic(&candidate, usize::MAX)?.is_some() {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    bucket.push(next.len());
                    next.push(candidate);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// All posets with at most `n` elements (and at least one), smallest first.
pub fn census(n: usize) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for m in 1..=n {
        out.extend(posets_up_to_iso(m)?);
    }
    Ok(out)
}

/// Random poset on `n` elements: each pair `i < j` is related `i <= j`
/// with probability `density`, then closed transitively.
pub fn random_poset<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> FiniteSpace {
    let mut pairs = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    FiniteSpace::from_relation(labels(n), &pairs).expect("forward edges are acyclic")
}

/// Random cover: each non-empty open set is kept with probability one
/// half, then minimal open sets of uncovered points are added.
pub fn random_cover<R: Rng + ?Sized>(space: &Arc<FiniteSpace>, rng: &mut R, open_guard: usize) -> Result<Cover> {
    let mut members: Vec<ElementSet> = space
        .all_opens(open_guard)?
        .into_iter()
        .map(|o| o.into_members())
        .filter(|o| !o.is_empty() && rng.gen_bool(0.5))
        .collect();
    let mut covered = ElementSet::empty(space.len());
    for m in &members {
        covered.union_with(m);
    }
    for x in space.full_set().difference(&covered).iter() {
        if !covered.contains(x) {
            covered.union_with(space.down(x));
            members.push(space.down(x).clone());
        }
    }
    Cover::new(space.clone(), members)
}
