//! Open covers of finite spaces and the projection order between them.
//!
//! A cover is read as a finite space in its own right (members ordered by
//! inclusion). `fine >=_C coarse` holds when `fine` refines `coarse` through
//! an order-preserving, enlarging member map `p: fine -> coarse`
//! (`U ⊆ p(U)`); such a map is a [`Projection`].
//!
//! A cover is basis-like exactly when, for every point `x`, the members
//! containing `x` have a smallest element. [`enumerate_covers`] uses this to
//! generate basis-like covers directly: pick the smallest member `M_x` for
//! every point (consistently), then add any set of further opens that are
//! unions of the chosen `M_x`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::homotopy::{are_homotopic, for_each_map};
use crate::poset::{same_space, ContinuousMap, FiniteSpace};
use crate::simplicial::{nerve, SimplicialComplex};
use crate::{Error, Guards, Result};

/// Canonical member order: by size, then by set.
fn member_order(a: &ElementSet, b: &ElementSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A finite open cover of a finite space, stored extensionally: members are
/// distinct, non-empty, open and sorted by size.
#[derive(Clone)]
pub struct Cover {
    space: Arc<FiniteSpace>,
    members: Vec<ElementSet>,
}

impl PartialEq for Cover {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_space(&self.space, &other.space)
    }
}

impl Eq for Cover {}

impl std::fmt::Debug for Cover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.member_labels()).finish()
    }
}

impl Cover {
    /// Validates and normalises a cover: duplicates merge, members must be
    /// non-empty open sets whose union is the space.
    pub fn new(space: Arc<FiniteSpace>, members: Vec<ElementSet>) -> Result<Self> {
        let mut union = ElementSet::empty(space.len());
        for m in &members {
            if m.is_empty() {
                return Err(Error::EmptyCoverMember);
            }
            if !space.is_open(m) {
                return Err(Error::NotOpen(space.format_set(m)));
            }
            union.union_with(m);
        }
        if let Some(x) = space.full_set().difference(&union).first() {
            return Err(Error::NotACover(space.label(x).to_string()));
        }
        Ok(Self::normalised(space, members))
    }

    pub fn from_labels<S: AsRef<str>>(space: Arc<FiniteSpace>, members: &[Vec<S>]) -> Result<Self> {
        let sets = members
            .iter()
            .map(|m| {
                let mut s = ElementSet::empty(space.len());
                for l in m {
                    s.insert(space.index_of(l.as_ref())?);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, sets)
    }

    fn normalised(space: Arc<FiniteSpace>, mut members: Vec<ElementSet>) -> Self {
        members.sort_by(member_order);
        members.dedup();
        Cover { space, members }
    }

    /// Members must already be sorted in canonical order and valid.
    pub(crate) fn new_unchecked(space: Arc<FiniteSpace>, members: Vec<ElementSet>) -> Self {
        debug_assert!(members.windows(2).all(|w| member_order(&w[0], &w[1]) == Ordering::Less));
        Cover { space, members }
    }

    /// The cover `{U_x}` of minimal open sets; as a poset it is isomorphic
    /// to the space via `U ↦ max U`.
    pub fn minimal_basis(space: Arc<FiniteSpace>) -> Cover {
        let members = (0..space.len()).map(|x| space.down(x).clone()).collect();
        Self::normalised(space, members)
    }

    /// The one-member cover `{X}`.
    pub fn trivial(space: Arc<FiniteSpace>) -> Cover {
        let members = if space.is_empty() { vec![] } else { vec![space.full_set()] };
        Cover { space, members }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn members(&self) -> &[ElementSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_labels(&self) -> Vec<String> {
        self.members.iter().map(|m| self.space.format_set(m)).collect()
    }

    /// Index of `set` among the members.
    pub fn position(&self, set: &ElementSet) -> Option<usize> {
        self.members.binary_search_by(|m| member_order(m, set)).ok()
    }

    /// The smallest member containing `set`, if the members containing it
    /// have a minimum.
    pub fn minimum_containing(&self, set: &ElementSet) -> Option<usize> {
        let mut meet: Option<ElementSet> = None;
        for m in &self.members {
            if set.is_subset(m) {
                match meet.as_mut() {
                    None => meet = Some(m.clone()),
                    Some(acc) => acc.intersect_with(m),
                }
            }
        }
        self.position(&meet?)
    }

    /// Every point lies in a member contained in any intersection of two
    /// members through it. Checked as: the members containing each point
    /// have a minimum.
    pub fn is_basis_like(&self) -> bool {
        (0..self.space.len()).all(|x| self.minimum_containing(&ElementSet::singleton(self.space.len(), x)).is_some())
    }

    /// Closed under non-empty pairwise intersections.
    pub fn is_intersection_closed(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..].iter().all(|b| {
                let c = a.intersection(b);
                c.is_empty() || self.position(&c).is_some()
            })
        })
    }

    /// Whether this is the cover by minimal open sets.
    pub fn is_minimal_basis(&self) -> bool {
        *self == Cover::minimal_basis(self.space.clone())
    }

    /// The cover as a poset under inclusion; element `i` is member `i`.
    pub fn to_poset(&self) -> FiniteSpace {
        let k = self.members.len();
        let labels = self.member_labels();
        let down = self
            .members
            .iter()
            .map(|m| ElementSet::from_indices(k, (0..k).filter(|&j| self.members[j].is_subset(m))))
            .collect();
        FiniteSpace::from_downsets_unchecked(labels, down)
    }

    pub fn nerve(&self, face_guard: usize) -> Result<SimplicialComplex> {
        nerve(self.member_labels(), &self.members, face_guard)
    }

    /// Every member of `self` lies inside some member of `coarse`.
    pub fn refines(&self, coarse: &Cover) -> Result<bool> {
        self.check_same_space(coarse)?;
        Ok(self.members.iter().all(|u| coarse.members.iter().any(|v| u.is_subset(v))))
    }

    fn check_same_space(&self, other: &Cover) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Smallest cover containing `self` and closed under non-empty pairwise
    /// intersections.
    pub fn intersection_closure(&self) -> Cover {
        let mut members = self.members.clone();
        let mut start = 0;
        loop {
            let mut fresh = Vec::new();
            for i in 0..members.len() {
                for j in (i + 1).max(start)..members.len() {
                    let c = members[i].intersection(&members[j]);
                    if !c.is_empty() && !members.contains(&c) && !fresh.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            start = members.len();
            members.extend(fresh);
        }
        Self::normalised(self.space.clone(), members)
    }

    /// All non-empty intersections `A ∩ B` with `A` in `self`, `B` in `other`.
    pub fn meets(&self, other: &Cover) -> Result<Cover> {
        self.check_same_space(other)?;
        let members = self
            .members
            .iter()
            .flat_map(|a| other.members.iter().map(move |b| a.intersection(b)))
            .filter(|c| !c.is_empty())
            .collect();
        Ok(Self::normalised(self.space.clone(), members))
    }
}

/// An order-preserving, enlarging member map `fine -> coarse`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection<'a> {
    fine: &'a Cover,
    coarse: &'a Cover,
    assignment: Vec<usize>,
}

impl<'a> Projection<'a> {
    pub fn new(fine: &'a Cover, coarse: &'a Cover, assignment: Vec<usize>) -> Result<Self> {
        fine.check_same_space(coarse)?;
        let p = Projection { fine, coarse, assignment };
        p.validate()?;
        Ok(p)
    }

    /// Skips validation; [`Projection::validate`] reports what is wrong.
    pub fn new_unchecked(fine: &'a Cover, coarse: &'a Cover, assignment: Vec<usize>) -> Self {
        Projection { fine, coarse, assignment }
    }

    pub fn validate(&self) -> Result<()> {
        if self.assignment.len() != self.fine.len() {
            return Err(Error::MapMismatch("projection has the wrong number of entries".into()));
        }
        if self.assignment.iter().any(|&v| v >= self.coarse.len()) {
            return Err(Error::MapMismatch("projection target out of range".into()));
        }
        let space = &self.fine.space;
        for (u, &v) in self.fine.members.iter().zip(&self.assignment) {
            if !u.is_subset(&self.coarse.members[v]) {
                return Err(Error::NotRefinement(format!(
                    "{} is not inside its image {}",
                    space.format_set(u),
                    space.format_set(&self.coarse.members[v])
                )));
            }
        }
        for (i, a) in self.fine.members.iter().enumerate() {
            for (j, b) in self.fine.members.iter().enumerate() {
                if a.is_subset(b)
                    && !self.coarse.members[self.assignment[i]].is_subset(&self.coarse.members[self.assignment[j]])
                {
                    return Err(Error::NotContinuous(format!(
                        "{} ⊆ {} but their images are not nested",
                        space.format_set(a),
                        space.format_set(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn fine(&self) -> &'a Cover {
        self.fine
    }

    pub fn coarse(&self) -> &'a Cover {
        self.coarse
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn image(&self, member: usize) -> &'a ElementSet {
        &self.coarse.members[self.assignment[member]]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Projection<'a>) -> Result<Projection<'a>> {
        if self.coarse != next.fine {
            return Err(Error::EndpointMismatch);
        }
        Ok(Projection {
            fine: self.fine,
            coarse: next.coarse,
            assignment: self.assignment.iter().map(|&v| next.assignment[v]).collect(),
        })
    }

    /// `self(U) ⊆ other(U)` for every member `U`.
    pub fn is_below(&self, other: &Projection<'_>) -> bool {
        self.assignment
            .iter()
            .zip(&other.assignment)
            .all(|(&a, &b)| self.coarse.members[a].is_subset(&self.coarse.members[b]))
    }

    fn same_endpoints(&self, other: &Projection<'_>) -> bool {
        self.fine == other.fine && self.coarse == other.coarse
    }

    /// The projection as a continuous map between the cover posets.
    pub fn to_continuous_map(&self) -> Result<ContinuousMap> {
        ContinuousMap::new(Arc::new(self.fine.to_poset()), Arc::new(self.coarse.to_poset()), self.assignment.clone())
    }
}

/// Coarse members containing each fine member; `None` if some fine member
/// is not contained in any.
fn candidate_sets(fine: &Cover, coarse: &Cover) -> Option<Vec<ElementSet>> {
    fine.members
        .iter()
        .map(|u| {
            let set =
                ElementSet::from_indices(coarse.len(), (0..coarse.len()).filter(|&j| u.is_subset(&coarse.members[j])));
            (!set.is_empty()).then_some(set)
        })
        .collect()
}

/// Projection sending each fine member to the smallest coarse member
/// containing it, when all those minima exist. It is then order preserving
/// and lies below every other projection.
pub fn minimum_projection<'a>(fine: &'a Cover, coarse: &'a Cover) -> Option<Projection<'a>> {
    let assignment = fine.members.iter().map(|u| coarse.minimum_containing(u)).collect::<Option<Vec<_>>>()?;
    Some(Projection { fine, coarse, assignment })
}

/// Decides `fine >=_C coarse` and returns a witnessing projection.
///
/// The canonical choice (smallest containing member) is tried first, then
/// a lexicographic backtracking search over order-preserving member maps.
pub fn leq_c<'a>(fine: &'a Cover, coarse: &'a Cover) -> Result<Option<Projection<'a>>> {
    fine.check_same_space(coarse)?;
    if let Some(p) = minimum_projection(fine, coarse) {
        return Ok(Some(p));
    }
    let Some(allowed) = candidate_sets(fine, coarse) else {
        return Ok(None);
    };
    let fine_poset = fine.to_poset();
    let coarse_poset = coarse.to_poset();
    let mut found = None;
    for_each_map(&fine_poset, &coarse_poset, Some(&allowed), |m| {
        found = Some(m.to_vec());
        false
    });
    Ok(found.map(|assignment| Projection { fine, coarse, assignment }))
}

/// Every projection `fine -> coarse`, or an error once more than `limit`
/// exist.
pub fn all_projections<'a>(fine: &'a Cover, coarse: &'a Cover, limit: usize) -> Result<Vec<Projection<'a>>> {
    fine.check_same_space(coarse)?;
    let Some(allowed) = candidate_sets(fine, coarse) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut exceeded = false;
    for_each_map(&fine.to_poset(), &coarse.to_poset(), Some(&allowed), |m| {
        if out.len() == limit {
            exceeded = true;
            return false;
        }
        out.push(Projection { fine, coarse, assignment: m.to_vec() });
        true
    });
    if exceeded {
        return Err(Error::SizeGuardExceeded { what: "projection enumeration", limit, actual: limit + 1 });
    }
    Ok(out)
}

/// The projection from the minimal basis to a basis-like cover: each `U_x`
/// goes to the smallest member of `target` containing it.
pub fn canonical_projection_from_basis<'a>(basis: &'a Cover, target: &'a Cover) -> Result<Projection<'a>> {
    basis.check_same_space(target)?;
    let space = &basis.space;
    if basis.len() != space.len() || (0..space.len()).any(|x| basis.position(space.down(x)).is_none()) {
        return Err(Error::MapMismatch("source cover is not the minimal basis".into()));
    }
    // A member contains x exactly when it contains U_x, so the smallest
    // member containing U_x exists iff the target is basis-like at x.
    let mut assignment = Vec::with_capacity(basis.len());
    for u in &basis.members {
        match target.minimum_containing(u) {
            Some(v) => assignment.push(v),
            None => return Err(Error::NotBasisLike(space.format_set(u))),
        }
    }
    let p = Projection { fine: basis, coarse: target, assignment };
    p.validate()?;
    Ok(p)
}

/// `p(U) = ⋂ { V ∈ coarse : U ⊆ V }`, for an intersection-closed `coarse`
/// refined by `fine`.
pub fn canonical_projection_closed<'a>(fine: &'a Cover, coarse: &'a Cover) -> Result<Projection<'a>> {
    fine.check_same_space(coarse)?;
    if !coarse.is_intersection_closed() {
        return Err(Error::NotIntersectionClosed);
    }
    let space = &fine.space;
    let mut assignment = Vec::with_capacity(fine.len());
    for u in &fine.members {
        let mut meet: Option<ElementSet> = None;
        for v in coarse.members.iter().filter(|v| u.is_subset(v)) {
            match meet.as_mut() {
                None => meet = Some(v.clone()),
                Some(acc) => acc.intersect_with(v),
            }
        }
        let meet = meet.ok_or_else(|| Error::NotRefinement(space.format_set(u)))?;
        assignment.push(coarse.position(&meet).expect("intersection-closed"));
    }
    Ok(Projection { fine, coarse, assignment })
}

/// An upper bound of two covers under `>=_C` with its two projections.
#[derive(Debug, Clone)]
pub struct CommonRefinement {
    pub cover: Cover,
    pub to_first: Vec<usize>,
    pub to_second: Vec<usize>,
}

impl CommonRefinement {
    pub fn first_projection<'a>(&'a self, first: &'a Cover) -> Result<Projection<'a>> {
        Projection::new(&self.cover, first, self.to_first.clone())
    }

    pub fn second_projection<'a>(&'a self, second: &'a Cover) -> Result<Projection<'a>> {
        Projection::new(&self.cover, second, self.to_second.clone())
    }
}

/// Common upper bound of two basis-like covers: the minimal basis with its
/// canonical projections (or the cover itself with identities when both
/// arguments are equal).
pub fn common_refinement(a: &Cover, b: &Cover) -> Result<CommonRefinement> {
    a.check_same_space(b)?;
    if a == b {
        let id: Vec<usize> = (0..a.len()).collect();
        return Ok(CommonRefinement { cover: a.clone(), to_first: id.clone(), to_second: id });
    }
    let basis = Cover::minimal_basis(a.space.clone());
    let to_first = canonical_projection_from_basis(&basis, a)?.assignment;
    let to_second = canonical_projection_from_basis(&basis, b)?.assignment;
    Ok(CommonRefinement { cover: basis, to_first, to_second })
}

/// Common upper bound of two intersection-closed covers: the intersection
/// closure of their pairwise meets, with the intersection projections.
pub fn common_refinement_closed(a: &Cover, b: &Cover) -> Result<CommonRefinement> {
    let cover = a.meets(b)?.intersection_closure();
    let to_first = canonical_projection_closed(&cover, a)?.assignment;
    let to_second = canonical_projection_closed(&cover, b)?.assignment;
    Ok(CommonRefinement { cover, to_first, to_second })
}

/// A fence between two projections with the same endpoints, as member
/// assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionFence {
    pub maps: Vec<Vec<usize>>,
}

impl ProjectionFence {
    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Finds a fence between two projections, cheapest certificate first:
/// equal, comparable, both above the minimum projection, then a general
/// search over maps of the cover posets.
pub fn projection_fence(p: &Projection<'_>, q: &Projection<'_>, guards: &Guards) -> Result<Option<ProjectionFence>> {
    if !p.same_endpoints(q) {
        return Err(Error::EndpointMismatch);
    }
    let maps = |ms: &[&Projection<'_>]| ProjectionFence { maps: ms.iter().map(|m| m.assignment.clone()).collect() };
    if p.assignment == q.assignment {
        return Ok(Some(maps(&[p])));
    }
    if p.is_below(q) || q.is_below(p) {
        return Ok(Some(maps(&[p, q])));
    }
    if let Some(m) = minimum_projection(p.fine, p.coarse) {
        if m.is_valid() {
            return Ok(Some(maps(&[p, &m, q])));
        }
    }
    for below in [true, false] {
        if let Some(r) = bounding_projection(p, q, below) {
            let r = Projection::new_unchecked(p.fine, p.coarse, r);
            return Ok(Some(maps(&[p, &r, q])));
        }
    }
    let fence = are_homotopic(&p.to_continuous_map()?, &q.to_continuous_map()?, guards)?;
    Ok(fence.map(|f| ProjectionFence { maps: f.maps().iter().map(|m| m.assignment().to_vec()).collect() }))
}

/// A projection below (or above) both `p` and `q`, if one exists.
fn bounding_projection(p: &Projection<'_>, q: &Projection<'_>, below: bool) -> Option<Vec<usize>> {
    let coarse = p.coarse;
    let allowed = p
        .fine
        .members
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let (a, b) = (p.image(i), q.image(i));
            let set = ElementSet::from_indices(
                coarse.len(),
                (0..coarse.len()).filter(|&j| {
                    let v = &coarse.members[j];
                    u.is_subset(v)
                        && if below { v.is_subset(a) && v.is_subset(b) } else { a.is_subset(v) && b.is_subset(v) }
                }),
            );
            (!set.is_empty()).then_some(set)
        })
        .collect::<Option<Vec<_>>>()?;
    let mut found = None;
    for_each_map(&p.fine.to_poset(), &coarse.to_poset(), Some(&allowed), |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

pub fn projections_homotopic(p: &Projection<'_>, q: &Projection<'_>, guards: &Guards) -> Result<bool> {
    Ok(projection_fence(p, q, guards)?.is_some())
}

/// Which covers [`enumerate_covers`] produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverFilter {
    /// Every family of non-empty opens whose union is the space.
    All,
    /// Basis-like covers (the index family of the pro-system).
    BasisLike,
    /// Covers closed under non-empty intersections.
    IntersectionClosed,
}

fn nonempty_opens(space: &FiniteSpace, guards: &Guards) -> Result<Vec<ElementSet>> {
    let mut opens: Vec<ElementSet> =
        space.all_opens(guards.opens)?.into_iter().map(|o| o.into_members()).filter(|o| !o.is_empty()).collect();
    opens.sort_by(member_order);
    Ok(opens)
}

/// A consistent choice of smallest member per point, plus the opens that
/// may be added on top of it.
struct Kernel {
    members: Vec<usize>,
    extras: Vec<usize>,
}

fn kernels(space: &FiniteSpace, opens: &[ElementSet]) -> Vec<Kernel> {
    let n = space.len();
    let candidates: Vec<Vec<usize>> =
        (0..n).map(|x| (0..opens.len()).filter(|&o| opens[o].contains(x)).collect()).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    choose_kernel(opens, &candidates, 0, &mut choice, &mut out);
    out
}

fn choose_kernel(
    opens: &[ElementSet],
    candidates: &[Vec<usize>],
    x: usize,
    choice: &mut Vec<usize>,
    out: &mut Vec<Kernel>,
) {
    let n = candidates.len();
    if x == n {
        let mut members = choice.clone();
        members.sort_unstable();
        members.dedup();
        let extras = (0..opens.len())
            .filter(|o| members.binary_search(o).is_err())
            .filter(|&o| opens[o].iter().all(|y| opens[choice[y]].is_subset(&opens[o])))
            .collect();
        out.push(Kernel { members, extras });
        return;
    }
    for &o in &candidates[x] {
        let m = &opens[o];
        let consistent = (0..x).all(|z| {
            let mz = &opens[choice[z]];
            (!mz.contains(x) || m.is_subset(mz)) && (!m.contains(z) || mz.is_subset(m))
        });
        if consistent {
            choice[x] = o;
            choose_kernel(opens, candidates, x + 1, choice, out);
        }
    }
}

/// Number of covers [`enumerate_covers`] would produce (for `All`, the
/// number of candidate families it scans).
pub fn count_covers(space: &FiniteSpace, filter: CoverFilter, guards: &Guards) -> Result<u128> {
    let opens = nonempty_opens(space, guards)?;
    match filter {
        CoverFilter::All => Ok(1u128.checked_shl(opens.len() as u32).unwrap_or(u128::MAX)),
        CoverFilter::BasisLike => Ok(kernels(space, &opens)
            .iter()
            .map(|k| 1u128.checked_shl(k.extras.len() as u32).unwrap_or(u128::MAX))
            .fold(0u128, u128::saturating_add)),
        CoverFilter::IntersectionClosed => Ok(intersection_closed(space, &opens, guards)?.len() as u128),
    }
}

/// Deterministic stream of covers of `space`.
///
/// `All` scans every family of non-empty opens and is refused when there
/// are more than `guards.covers` families to scan; `BasisLike` is generated
/// directly and never scans non-basis-like families; `IntersectionClosed`
/// is collected eagerly and refused beyond `guards.covers` results.
pub fn enumerate_covers(space: &Arc<FiniteSpace>, filter: CoverFilter, guards: &Guards) -> Result<CoverStream> {
    let opens = nonempty_opens(space, guards)?;
    let space = space.clone();
    let inner: Box<dyn Iterator<Item = Cover> + Send> =
        match filter {
            CoverFilter::All => {
                let k = opens.len();
                let scanned = 1usize.checked_shl(k as u32).filter(|&s| s <= guards.covers);
                let Some(scanned) = scanned else {
                    return Err(Error::SizeGuardExceeded {
                        what: "cover enumeration",
                        limit: guards.covers,
                        actual: 1usize.checked_shl(k as u32).unwrap_or(usize::MAX),
                    });
                };
                let full = space.full_set();
                Box::new((1..scanned).filter_map(move |mask| {
                    let mut union = ElementSet::empty(space.len());
                    let mut members = Vec::new();
                    for (i, o) in opens.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            union.union_with(o);
                            members.push(o.clone());
                        }
                    }
                    (union == full).then(|| Cover::new_unchecked(space.clone(), members))
                }))
            }
            CoverFilter::BasisLike => {
                let ks = kernels(&space, &opens);
                if let Some(k) = ks.iter().find(|k| k.extras.len() >= 64) {
                    return Err(Error::SizeGuardExceeded {
                        what: "basis-like cover enumeration",
                        limit: 63,
                        actual: k.extras.len(),
                    });
                }
                let opens = Arc::new(opens);
                Box::new(ks.into_iter().flat_map(move |k| {
                    let space = space.clone();
                    let opens = opens.clone();
                    (0u64..1 << k.extras.len()).map(move |mask| {
                        let mut idx = k.members.clone();
                        idx.extend(k.extras.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &o)| o));
                        idx.sort_unstable();
                        Cover::new_unchecked(space.clone(), idx.into_iter().map(|o| opens[o].clone()).collect())
                    })
                }))
            }
            CoverFilter::IntersectionClosed => {
                let found = intersection_closed(&space, &opens, guards)?;
                Box::new(found.into_iter().map(move |idx| {
                    Cover::new_unchecked(space.clone(), idx.iter().map(|o| opens[o].clone()).collect())
                }))
            }
        };
    Ok(CoverStream { inner })
}

/// Covering families closed under non-empty intersection, as sets of open
/// indices, in lectic order (Ganter's next-closure).
fn intersection_closed(space: &FiniteSpace, opens: &[ElementSet], guards: &Guards) -> Result<Vec<ElementSet>> {
    let k = opens.len();
    let lookup: HashMap<&ElementSet, usize> = opens.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let closure = |seed: &ElementSet| -> ElementSet {
        let mut family = seed.clone();
        loop {
            let members: Vec<usize> = family.iter().collect();
            let mut grown = false;
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    let c = opens[i].intersection(&opens[j]);
                    if !c.is_empty() {
                        let ci = lookup[&c];
                        if !family.contains(ci) {
                            family.insert(ci);
                            grown = true;
                        }
                    }
                }
            }
            if !grown {
                return family;
            }
        }
    };
    let full = space.full_set();
    let covers = |family: &ElementSet| {
        let mut u = ElementSet::empty(space.len());
        for i in family.iter() {
            u.union_with(&opens[i]);
        }
        u == full
    };
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut current = closure(&ElementSet::empty(k));
    loop {
        visited += 1;
        if visited > guards.covers {
            return Err(Error::SizeGuardExceeded {
                what: "intersection-closed cover enumeration",
                limit: guards.covers,
                actual: visited,
            });
        }
        if covers(&current) {
            out.push(current.clone());
        }
        let mut next = None;
        let mut a = current.clone();
        for i in (0..k).rev() {
            if a.contains(i) {
                a.remove(i);
                continue;
            }
            let mut seed = a.clone();
            seed.insert(i);
            let b = closure(&seed);
            // No new element below i.
            if b.difference(&a).first() == Some(i) {
                next = Some(b);
                break;
            }
        }
        match next {
            Some(b) => current = b,
            None => break,
        }
    }
    Ok(out)
}

pub struct CoverStream {
    inner: Box<dyn Iterator<Item = Cover> + Send>,
}

impl Iterator for CoverStream {
    type Item = Cover;

    fn next(&mut self) -> Option<Cover> {
        self.inner.next()
    }
}

/// Covers of a small space encoded as bitmasks over its non-empty opens
/// (bit `i` set when open `i` is a member). Needs at most 16 points and
/// 64 non-empty opens; bit order agrees with [`Cover`] member order.
pub struct OpenIndex {
    space: Arc<FiniteSpace>,
    opens: Vec<ElementSet>,
    masks: Vec<u64>,
    /// Open index of each element mask, `u8::MAX` for non-open sets.
    lookup: Vec<u8>,
    down: Vec<u64>,
}

fn to_mask(set: &ElementSet) -> u64 {
    set.iter().fold(0, |m, x| m | 1 << x)
}

impl OpenIndex {
    pub const MAX_POINTS: usize = 16;

    pub fn new(space: &Arc<FiniteSpace>, guards: &Guards) -> Result<Self> {
        let n = space.len();
        if n > Self::MAX_POINTS {
            return Err(Error::SizeGuardExceeded { what: "open index points", limit: Self::MAX_POINTS, actual: n });
        }
        let opens = nonempty_opens(space, guards)?;
        if opens.len() > 64 {
            return Err(Error::SizeGuardExceeded { what: "open index size", limit: 64, actual: opens.len() });
        }
        let masks: Vec<u64> = opens.iter().map(to_mask).collect();
        let mut lookup = vec![u8::MAX; 1 << n];
        for (i, &m) in masks.iter().enumerate() {
            lookup[m as usize] = i as u8;
        }
        let down = (0..n).map(|x| to_mask(space.down(x))).collect();
        Ok(OpenIndex { space: space.clone(), opens, masks, lookup, down })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn opens(&self) -> &[ElementSet] {
        &self.opens
    }

    pub fn open_mask(&self, open: usize) -> u64 {
        self.masks[open]
    }

    pub fn cover(&self, family: u64) -> Cover {
        let members = bits(family).map(|o| self.opens[o].clone()).collect();
        Cover::new_unchecked(self.space.clone(), members)
    }

    pub fn family_of(&self, cover: &Cover) -> Option<u64> {
        cover.members.iter().try_fold(0u64, |f, m| {
            let o = self.lookup[to_mask(m) as usize];
            (o != u8::MAX).then_some(f | 1 << o)
        })
    }

    /// The family of minimal open sets.
    pub fn minimal_basis(&self) -> u64 {
        self.down.iter().fold(0, |f, &d| f | 1 << self.lookup[d as usize])
    }

    /// Members of `family` covering the space.
    pub fn is_cover(&self, family: u64) -> bool {
        let full = (1u64 << self.space.len()) - 1;
        bits(family).fold(0, |u, o| u | self.masks[o]) == full
    }

    /// Open index of the smallest member of `family` containing `set`.
    pub fn minimum_containing(&self, family: u64, set: u64) -> Option<usize> {
        let own = self.lookup[set as usize];
        if own != u8::MAX && family >> own & 1 == 1 {
            return Some(own as usize);
        }
        let mut meet = u64::MAX;
        let mut any = false;
        for o in bits(family) {
            let m = self.masks[o];
            if set & !m == 0 {
                meet &= m;
                any = true;
            }
        }
        if !any {
            return None;
        }
        let o = self.lookup[meet as usize];
        (o != u8::MAX && family >> o & 1 == 1).then_some(o as usize)
    }

    pub fn is_basis_like(&self, family: u64) -> bool {
        (0..self.space.len()).all(|x| self.minimum_containing(family, 1 << x).is_some())
    }

    /// Sends each member of `fine` to the smallest member of `coarse`
    /// containing it, as open indices in member order.
    pub fn minimum_projection(&self, fine: u64, coarse: u64) -> Option<Vec<u8>> {
        bits(fine).map(|o| self.minimum_containing(coarse, self.masks[o]).map(|v| v as u8)).collect()
    }

    /// Whether `assignment` (open indices, in member order of `fine`) is an
    /// enlarging, order-preserving map into `coarse`.
    pub fn is_projection(&self, fine: u64, coarse: u64, assignment: &[u8]) -> bool {
        let mut sources = [0u64; 64];
        let mut images = [0u64; 64];
        let mut k = 0;
        let mut identity = fine == coarse;
        for o in bits(fine) {
            let Some(&a) = assignment.get(k) else { return false };
            if coarse >> a & 1 == 0 || self.masks[o] & !self.masks[a as usize] != 0 {
                return false;
            }
            identity &= a as usize == o;
            sources[k] = self.masks[o];
            images[k] = self.masks[a as usize];
            k += 1;
        }
        if k != assignment.len() {
            return false;
        }
        identity || (0..k).all(|a| (0..k).all(|b| sources[a] & !sources[b] != 0 || images[a] & !images[b] == 0))
    }

    /// `fine >=_C coarse`, with a witness in open indices. Falls back to the
    /// general search when the minimum projection does not exist.
    pub fn leq(&self, fine: u64, coarse: u64) -> Option<Vec<u8>> {
        if let Some(p) = self.minimum_projection(fine, coarse) {
            return Some(p);
        }
        let refines = bits(fine).all(|o| bits(coarse).any(|v| self.masks[o] & !self.masks[v] == 0));
        if !refines {
            return None;
        }
        let (f, c) = (self.cover(fine), self.cover(coarse));
        let p = leq_c(&f, &c).expect("same space")?;
        let targets: Vec<usize> = bits(coarse).collect();
        Some(p.assignment().iter().map(|&j| targets[j] as u8).collect())
    }

    /// Calls `visit` on every basis-like cover, in the order of
    /// [`enumerate_covers`]; stops early when `visit` returns `false`.
    /// Returns the number of covers visited.
    pub fn for_each_basis_like<F: FnMut(u64) -> bool>(&self, mut visit: F) -> u64 {
        let mut count = 0;
        for k in kernels(&self.space, &self.opens) {
            let base = k.members.iter().fold(0u64, |f, &o| f | 1 << o);
            let extras = k.extras.iter().fold(0u64, |f, &o| f | 1 << o);
            let mut sub = 0u64;
            loop {
                count += 1;
                if !visit(base | sub) {
                    return count;
                }
                if sub == extras {
                    break;
                }
                sub = sub.wrapping_sub(extras) & extras;
            }
        }
        count
    }
}

fn bits(mut family: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (family != 0).then(|| {
            let o = family.trailing_zeros() as usize;
            family &= family - 1;
            o
        })
    })
}
