//! The inverse system of cover posets attached to a finite space, and
//! weak-homotopy comparison verdicts.
//!
//! The system is indexed by basis-like covers ordered by `>=_C`; each
//! related pair carries one chosen projection as its bond. Bonds only
//! matter up to homotopy, so coherence is checked as "composite bond is
//! homotopic to direct bond" on every chain of three indices.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::covers::{
    canonical_projection_from_basis, count_covers, enumerate_covers, leq_c, projection_fence, Cover, CoverFilter,
    Projection,
};
use crate::homology::{weak_invariants, HomologyGroups};
use crate::homotopy::{beat_points, core, BeatDirection, BeatRemoval, Core};
use crate::poset::FiniteSpace;
use crate::simplicial::finite_subdivision;
use crate::{Error, Guards, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// Every basis-like cover.
    Full,
    /// The minimal basis alone; it is cofinal in the full system.
    Rudimentary,
}

#[derive(Debug, Clone)]
pub struct InverseSystem {
    space: Arc<FiniteSpace>,
    kind: SystemKind,
    index: Vec<Cover>,
    objects: Vec<Arc<FiniteSpace>>,
    /// `(fine, coarse) -> projection`, present exactly when `fine >=_C coarse`.
    bonds: BTreeMap<(usize, usize), Vec<usize>>,
}

impl InverseSystem {
    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn index(&self) -> &[Cover] {
        &self.index
    }

    /// The cover posets.
    pub fn objects(&self) -> &[Arc<FiniteSpace>] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn related(&self, fine: usize, coarse: usize) -> bool {
        self.bonds.contains_key(&(fine, coarse))
    }

    /// Number of related pairs, including each index with itself.
    pub fn relation_size(&self) -> usize {
        self.bonds.len()
    }

    pub fn bond(&self, fine: usize, coarse: usize) -> Option<Projection<'_>> {
        self.bonds
            .get(&(fine, coarse))
            .map(|a| Projection::new_unchecked(&self.index[fine], &self.index[coarse], a.clone()))
    }

    /// Overwrites a bond without any checks.
    pub fn replace_bond(&mut self, fine: usize, coarse: usize, assignment: Vec<usize>) {
        self.bonds.insert((fine, coarse), assignment);
    }

    /// Position of the minimal basis in the index.
    pub fn basis_position(&self) -> Option<usize> {
        let basis = Cover::minimal_basis(self.space.clone());
        self.index.iter().position(|c| *c == basis)
    }

    /// Every two indices have a common index above them.
    pub fn is_directed(&self) -> bool {
        let k = self.index.len();
        let mut above = vec![ElementSet::empty(k); k];
        for &(fine, coarse) in self.bonds.keys() {
            above[coarse].insert(fine);
        }
        (0..k).all(|i| (i..k).all(|j| above[i].intersects(&above[j])))
    }
}

/// Builds the system of cover posets of `space`.
///
/// The full system is refused when the space has more than `guards.index`
/// basis-like covers.
pub fn build_m(space: &Arc<FiniteSpace>, kind: SystemKind, guards: &Guards) -> Result<InverseSystem> {
    let index: Vec<Cover> = match kind {
        SystemKind::Rudimentary => vec![Cover::minimal_basis(space.clone())],
        SystemKind::Full => {
            let count = count_covers(space, CoverFilter::BasisLike, guards)?;
            if count > guards.index as u128 {
                return Err(Error::SizeGuardExceeded {
                    what: "pro-system index",
                    limit: guards.index,
                    actual: usize::try_from(count).unwrap_or(usize::MAX),
                });
            }
            enumerate_covers(space, CoverFilter::BasisLike, guards)?.collect()
        }
    };
    let mut bonds = BTreeMap::new();
    for (i, fine) in index.iter().enumerate() {
        for (j, coarse) in index.iter().enumerate() {
            if let Some(p) = leq_c(fine, coarse)? {
                bonds.insert((i, j), p.assignment().to_vec());
            }
        }
    }
    let objects = index.iter().map(|c| Arc::new(c.to_poset())).collect();
    Ok(InverseSystem { space: space.clone(), kind, index, objects, bonds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceFailure {
    pub fine: usize,
    pub middle: usize,
    pub coarse: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub index_size: usize,
    pub relation_edges: usize,
    pub directed: bool,
    pub triples_checked: usize,
    pub failures: Vec<CoherenceFailure>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.directed && self.failures.is_empty()
    }
}

/// Re-validates every bond and checks, for every chain
/// `fine >=_C middle >=_C coarse`, that the composite bond is homotopic to
/// the direct one. Failures are listed in index order.
pub fn verify_coherence(system: &InverseSystem, guards: &Guards, parallel: bool) -> CoherenceReport {
    let k = system.len();
    let mut failures = Vec::new();
    let mut invalid = std::collections::BTreeSet::new();
    for (&(fine, coarse), a) in &system.bonds {
        let p = Projection::new_unchecked(&system.index[fine], &system.index[coarse], a.clone());
        if let Err(e) = p.validate() {
            invalid.insert((fine, coarse));
            failures.push(CoherenceFailure { fine, middle: fine, coarse, reason: format!("invalid bond: {e}") });
        }
    }
    // Triples through an invalid bond are skipped: the bond itself is
    // already reported, and composites of valid bonds are valid.
    let check_from = |fine: usize| -> (usize, Vec<CoherenceFailure>) {
        let mut checked = 0;
        let mut out = Vec::new();
        for middle in 0..k {
            let Some(first) = system.bonds.get(&(fine, middle)) else {
                continue;
            };
            for coarse in 0..k {
                let Some(second) = system.bonds.get(&(middle, coarse)) else {
                    continue;
                };
                checked += 1;
                let fail = |reason: &str| CoherenceFailure { fine, middle, coarse, reason: reason.to_string() };
                let Some(direct) = system.bonds.get(&(fine, coarse)) else {
                    out.push(fail("no direct bond"));
                    continue;
                };
                if [(fine, middle), (middle, coarse), (fine, coarse)].iter().any(|b| invalid.contains(b)) {
                    continue;
                }
                let composite: Vec<usize> = first.iter().map(|&v| second[v]).collect();
                if composite == *direct {
                    continue;
                }
                let (u, w) = (&system.index[fine], &system.index[coarse]);
                let composite = Projection::new_unchecked(u, w, composite);
                let direct = Projection::new_unchecked(u, w, direct.clone());
                match projection_fence(&composite, &direct, guards) {
                    Ok(Some(_)) => {}
                    Ok(None) => out.push(fail("composite and direct bonds are not homotopic")),
                    Err(e) => out.push(fail(&e.to_string())),
                }
            }
        }
        (checked, out)
    };
    let per_index: Vec<(usize, Vec<CoherenceFailure>)> =
        if parallel { (0..k).into_par_iter().map(check_from).collect() } else { (0..k).map(check_from).collect() };
    let mut triples_checked = 0;
    for (checked, f) in per_index {
        triples_checked += checked;
        failures.extend(f);
    }
    CoherenceReport {
        index_size: k,
        relation_edges: system.relation_size(),
        directed: system.is_directed(),
        triples_checked,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RudimentaryReport {
    pub covers_checked: usize,
    /// Covers `u` other than the minimal basis with `u >=_C` basis.
    pub above_basis: Vec<Vec<String>>,
    pub failures: Vec<String>,
}

impl RudimentaryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the minimal basis lies above every basis-like cover, and
/// that every cover above the minimal basis is homotopy equivalent to it.
///
/// Refused when the space has more than `guards.covers` basis-like covers.
pub fn verify_rudimentary(space: &Arc<FiniteSpace>, guards: &Guards) -> Result<RudimentaryReport> {
    let count = count_covers(space, CoverFilter::BasisLike, guards)?;
    if count > guards.covers as u128 {
        return Err(Error::SizeGuardExceeded {
            what: "basis-like cover enumeration",
            limit: guards.covers,
            actual: usize::try_from(count).unwrap_or(usize::MAX),
        });
    }
    let basis = Cover::minimal_basis(space.clone());
    let basis_core = core(&basis.to_poset());
    let mut report = RudimentaryReport { covers_checked: 0, above_basis: Vec::new(), failures: Vec::new() };
    for u in enumerate_covers(space, CoverFilter::BasisLike, guards)? {
        report.covers_checked += 1;
        match canonical_projection_from_basis(&basis, &u) {
            Ok(p) if p.is_valid() => {}
            Ok(_) => report.failures.push(format!("{:?}: canonical projection invalid", u.member_labels())),
            Err(e) => report.failures.push(format!("{:?}: {e}", u.member_labels())),
        }
        if u == basis || leq_c(&u, &basis)?.is_none() {
            continue;
        }
        report.above_basis.push(u.member_labels());
        let c = core(&u.to_poset());
        if c.space().is_homeomorphic(basis_core.space(), guards.elements)?.is_none() {
            report.failures.push(format!("{:?}: above the minimal basis but not equivalent to it", u.member_labels()));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Distinct,
    Equivalent,
    Unknown,
}

/// An isomorphism between a core of `sd^left X` and a core of `sd^right Y`,
/// where `sd` is the finite barycentric subdivision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreCertificate {
    pub left_subdivisions: usize,
    pub right_subdivisions: usize,
    pub left_removals: Vec<BeatRemoval>,
    pub right_removals: Vec<BeatRemoval>,
    /// Matched labels `(left core element, right core element)`.
    pub isomorphism: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Invariants { left: HomologyGroups, right: HomologyGroups },
    Certificate(CoreCertificate),
    Inconclusive { reason: String, left: Option<HomologyGroups>, right: Option<HomologyGroups> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwVerdict {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwOptions {
    /// Largest number of subdivisions applied to either side.
    pub subdivisions: usize,
    pub guards: Guards,
}

impl Default for SwOptions {
    fn default() -> Self {
        SwOptions { subdivisions: 1, guards: Guards::default() }
    }
}

fn subdivide(space: &FiniteSpace, times: usize, face_guard: usize) -> Result<FiniteSpace> {
    let mut s = space.clone();
    for _ in 0..times {
        s = finite_subdivision(&s, face_guard)?;
    }
    Ok(s)
}

/// Compares the weak homotopy types of two finite spaces.
///
/// `Distinct` when the homology of the order complexes differs;
/// `Equivalent` when the cores of some subdivisions are isomorphic;
/// `Unknown` otherwise, including when a size guard stops the search.
pub fn sw_compare(x: &FiniteSpace, y: &FiniteSpace, options: &SwOptions) -> SwVerdict {
    let g = &options.guards;
    let hx = weak_invariants(x, g.faces).map(|h| h.trimmed());
    let hy = weak_invariants(y, g.faces).map(|h| h.trimmed());
    let (hx, hy) = match (hx, hy) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            let reason = [a.as_ref().err(), b.as_ref().err()]
                .into_iter()
                .flatten()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return SwVerdict {
                verdict: Verdict::Unknown,
                evidence: Evidence::Inconclusive { reason, left: a.ok(), right: b.ok() },
            };
        }
    };
    if hx != hy {
        return SwVerdict { verdict: Verdict::Distinct, evidence: Evidence::Invariants { left: hx, right: hy } };
    }
    let k = options.subdivisions;
    let mut attempts: Vec<(usize, usize)> = (0..=k).flat_map(|i| (0..=k).map(move |j| (i, j))).collect();
    attempts.sort_by_key(|&(i, j)| (i + j, i.max(j), i));
    let mut notes = Vec::new();
    let mut left_cores: Vec<Option<Result<Core>>> = (0..=k).map(|_| None).collect();
    let mut right_cores: Vec<Option<Result<Core>>> = (0..=k).map(|_| None).collect();
    for (i, j) in attempts {
        let cx = match left_cores[i].get_or_insert_with(|| subdivide(x, i, g.faces).map(|s| core(&s))) {
            Ok(c) => c,
            Err(e) => {
                notes.push(format!("left subdivision {i}: {e}"));
                continue;
            }
        };
        let cy = match right_cores[j].get_or_insert_with(|| subdivide(y, j, g.faces).map(|s| core(&s))) {
            Ok(c) => c,
            Err(e) => {
                notes.push(format!("right subdivision {j}: {e}"));
                continue;
            }
        };
        match cx.space().is_homeomorphic(cy.space(), g.elements) {
            Ok(Some(iso)) => {
                let isomorphism = iso
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| (cx.space().label(a).to_string(), cy.space().label(b).to_string()))
                    .collect();
                return SwVerdict {
                    verdict: Verdict::Equivalent,
                    evidence: Evidence::Certificate(CoreCertificate {
                        left_subdivisions: i,
                        right_subdivisions: j,
                        left_removals: cx.removal_trace().to_vec(),
                        right_removals: cy.removal_trace().to_vec(),
                        isomorphism,
                    }),
                };
            }
            Ok(None) => {}
            Err(e) => notes.push(format!("cores at ({i}, {j}): {e}")),
        }
    }
    let mut reason = "invariants agree but no core isomorphism was found".to_string();
    if !notes.is_empty() {
        reason = format!("{reason} ({})", notes.join("; "));
    }
    SwVerdict {
        verdict: Verdict::Unknown,
        evidence: Evidence::Inconclusive { reason, left: Some(hx), right: Some(hy) },
    }
}

/// Replays a beat-point removal sequence, checking each step; returns the
/// remaining subspace if it is beat-point free.
fn replay_removals(space: &FiniteSpace, removals: &[BeatRemoval]) -> Result<FiniteSpace> {
    let mut current = space.clone();
    for r in removals {
        let x = current.index_of(&r.label)?;
        let t = current.index_of(&r.towards)?;
        let is_beat = beat_points(&current).contains(&(x, r.direction));
        let neighbour = match r.direction {
            BeatDirection::Down => current.lt(t, x),
            BeatDirection::Up => current.lt(x, t),
        };
        if !is_beat || !neighbour {
            return Err(Error::Parse(format!("{} is not a beat point here", r.label)));
        }
        let mut keep = current.full_set();
        keep.remove(x);
        current = current.subspace(&keep).0;
    }
    if !beat_points(&current).is_empty() {
        return Err(Error::Parse("removal sequence stops before a core".into()));
    }
    Ok(current)
}

impl SwVerdict {
    /// Recomputes the evidence from scratch: differing invariants for
    /// `Distinct`, a replayable removal sequence and an order isomorphism
    /// for `Equivalent`. `Unknown` verdicts carry no claim and always pass.
    pub fn revalidate(&self, x: &FiniteSpace, y: &FiniteSpace, guards: &Guards) -> Result<bool> {
        match (&self.verdict, &self.evidence) {
            (Verdict::Distinct, Evidence::Invariants { left, right }) => {
                let hx = weak_invariants(x, guards.faces)?.trimmed();
                let hy = weak_invariants(y, guards.faces)?.trimmed();
                Ok(hx == *left && hy == *right && hx != hy)
            }
            (Verdict::Equivalent, Evidence::Certificate(c)) => {
                let sx = subdivide(x, c.left_subdivisions, guards.faces)?;
                let sy = subdivide(y, c.right_subdivisions, guards.faces)?;
                let (Ok(cx), Ok(cy)) =
                    (replay_removals(&sx, &c.left_removals), replay_removals(&sy, &c.right_removals))
                else {
                    return Ok(false);
                };
                if c.isomorphism.len() != cx.len() || cx.len() != cy.len() {
                    return Ok(false);
                }
                let mut map = vec![usize::MAX; cx.len()];
                let mut hit = vec![false; cy.len()];
                for (a, b) in &c.isomorphism {
                    let (a, b) = (cx.index_of(a)?, cy.index_of(b)?);
                    if map[a] != usize::MAX || hit[b] {
                        return Ok(false);
                    }
                    map[a] = b;
                    hit[b] = true;
                }
                Ok((0..cx.len()).all(|a| (0..cx.len()).all(|b| cx.leq(a, b) == cy.leq(map[a], map[b]))))
            }
            (Verdict::Unknown, Evidence::Inconclusive { .. }) => Ok(true),
            _ => Ok(false),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::homotopy_equivalent;

    fn circle() -> Arc<FiniteSpace> {
        Arc::new(
            FiniteSpace::from_hasse(
                ["a", "b", "c", "d"].map(String::from).to_vec(),
                &[("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn rudimentary_system() {
        let x = circle();
        let s = build_m(&x, SystemKind::Rudimentary, &Guards::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.objects()[0].is_homeomorphic(&x, 24).unwrap().is_some());
        let r = verify_coherence(&s, &Guards::default(), false);
        assert!(r.passed());
        assert_eq!(r.triples_checked, 1);
    }

    #[test]
    fn full_system_of_circle() {
        let x = circle();
        let g = Guards::default();
        let s = build_m(&x, SystemKind::Full, &g).unwrap();
        let b = s.basis_position().unwrap();
        assert!((0..s.len()).all(|i| s.related(b, i)));
        assert!(s.is_directed());
        let r = verify_coherence(&s, &g, false);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r, verify_coherence(&s, &g, true));
    }

    #[test]
    fn corrupted_bond_is_reported() {
        let x = circle();
        let g = Guards::default();
        let mut s = build_m(&x, SystemKind::Full, &g).unwrap();
        let b = s.basis_position().unwrap();
        let target = (0..s.len()).find(|&i| s.index()[i].len() > 1 && i != b).unwrap();
        let bad = vec![0; s.index()[b].len()];
        let current = s.bond(b, target).unwrap().assignment().to_vec();
        assert_ne!(current, bad);
        s.replace_bond(b, target, bad);
        assert!(!verify_coherence(&s, &g, false).passed());
    }

    #[test]
    fn rudimentary_check() {
        let x = circle();
        let r = verify_rudimentary(&x, &Guards::default()).unwrap();
        assert!(r.passed());
        let pt = Arc::new(FiniteSpace::singleton("p"));
        let r = verify_rudimentary(&pt, &Guards::default()).unwrap();
        assert_eq!(r.covers_checked, 1);
        assert!(r.passed());
    }

    #[test]
    fn verdicts() {
        let x = circle();
        let g = Guards::default();
        let o = SwOptions::default();
        let basis_poset = Cover::minimal_basis(x.clone()).to_poset();
        let v = sw_compare(&x, &basis_poset, &o);
        assert_eq!(v.verdict, Verdict::Equivalent);
        assert!(v.revalidate(&x, &basis_poset, &g).unwrap());
        let pt = FiniteSpace::singleton("p");
        let v = sw_compare(&x, &pt, &o);
        assert_eq!(v.verdict, Verdict::Distinct);
        assert!(v.revalidate(&x, &pt, &g).unwrap());
        let sd = finite_subdivision(&x, g.faces).unwrap();
        let v = sw_compare(&x, &sd, &o);
        assert_eq!(v.verdict, Verdict::Equivalent);
        assert!(v.revalidate(&x, &sd, &g).unwrap());
        assert!(homotopy_equivalent(&x, &x, &g).unwrap());
    }

    #[test]
    fn forged_certificate_fails() {
        let x = circle();
        let g = Guards::default();
        let v = sw_compare(&x, &x, &SwOptions::default());
        assert!(v.revalidate(&x, &x, &g).unwrap());
        let pairs = [("a", "c"), ("c", "a"), ("b", "b"), ("d", "d")];
        let forged = SwVerdict {
            verdict: Verdict::Equivalent,
            evidence: Evidence::Certificate(CoreCertificate {
                left_subdivisions: 0,
                right_subdivisions: 0,
                left_removals: vec![],
                right_removals: vec![],
                isomorphism: pairs.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect(),
            }),
        };
        assert!(!forged.revalidate(&x, &x, &g).unwrap());
        let flipped = SwVerdict { verdict: Verdict::Distinct, evidence: v.evidence.clone() };
        assert!(!flipped.revalidate(&x, &x, &g).unwrap());
    }
}
