//! Homotopy of maps between finite spaces, beat points and cores.
//!
//! Two maps `f, g: X -> Y` are homotopic exactly when they are joined by a
//! fence `f = f_0 <= f_1 >= f_2 <= ... f_n = g` of continuous maps compared
//! pointwise. A beat point is an element whose strict down-set has a maximum
//! (down-beat) or whose strict up-set has a minimum (up-beat); removing one
//! does not change the homotopy type, and a space without beat points (a
//! minimal space) is homotopy equivalent to another minimal space only if
//! they are homeomorphic.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::poset::{same_space, ContinuousMap, FiniteSpace};
use crate::{Error, Guards, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeatDirection {
    Down,
    Up,
}

/// A homotopy witness: consecutive maps are pointwise comparable.
#[derive(Debug, Clone)]
pub struct Fence {
    maps: Vec<ContinuousMap>,
}

impl Fence {
    /// Validates the comparability of consecutive maps.
    pub fn new(maps: Vec<ContinuousMap>) -> Result<Self> {
        let fence = Fence { maps };
        if fence.maps.is_empty() {
            return Err(Error::MapMismatch("a fence needs at least one map".into()));
        }
        if !fence.is_valid() {
            return Err(Error::MapMismatch("consecutive maps in a fence must be pointwise comparable".into()));
        }
        Ok(fence)
    }

    pub fn maps(&self) -> &[ContinuousMap] {
        &self.maps
    }

    /// Number of comparisons in the fence (maps minus one).
    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Re-checks every link: same endpoints and comparable in one direction.
    pub fn is_valid(&self) -> bool {
        let first = &self.maps[0];
        self.maps.iter().all(|m| same_space(m.source(), first.source()) && same_space(m.target(), first.target()))
            && self.maps.windows(2).all(|w| w[0].is_below(&w[1]) || w[1].is_below(&w[0]))
    }
}

/// Visits every order-preserving map `source -> target` whose value at `x`
/// lies in `allowed[x]`. The visitor returns `false` to stop early. Returns
/// the number of maps visited.
pub fn for_each_map<F>(
    source: &FiniteSpace,
    target: &FiniteSpace,
    allowed: Option<&[ElementSet]>,
    mut visit: F,
) -> usize
where
    F: FnMut(&[usize]) -> bool,
{
    let order = source.linear_extension();
    let n = source.len();
    // Lower covers are enough to enforce monotonicity.
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in source.covering_pairs() {
        lower[b].push(a);
    }
    let mut assignment = vec![0usize; n];
    let mut count = 0usize;
    let mut stop = false;
    descend(target, allowed, &order, &lower, 0, &mut assignment, &mut count, &mut stop, &mut visit);
    count
}

#[allow(clippy::too_many_arguments)]
fn descend<F>(
    target: &FiniteSpace,
    allowed: Option<&[ElementSet]>,
    order: &[usize],
    lower: &[Vec<usize>],
    pos: usize,
    assignment: &mut [usize],
    count: &mut usize,
    stop: &mut bool,
    visit: &mut F,
) where
    F: FnMut(&[usize]) -> bool,
{
    if *stop {
        return;
    }
    if pos == order.len() {
        *count += 1;
        if !visit(assignment) {
            *stop = true;
        }
        return;
    }
    let x = order[pos];
    let mut candidates = match allowed {
        Some(a) => a[x].clone(),
        None => target.full_set(),
    };
    for &w in &lower[x] {
        candidates.intersect_with(target.up(assignment[w]));
    }
    for y in candidates.iter() {
        assignment[x] = y;
        descend(target, allowed, order, lower, pos + 1, assignment, count, stop, visit);
        if *stop {
            return;
        }
    }
}

/// All continuous maps `source -> target`, or an error once more than
/// `limit` exist.
pub fn continuous_maps(source: &FiniteSpace, target: &FiniteSpace, limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut exceeded = false;
    for_each_map(source, target, None, |m| {
        if out.len() == limit {
            exceeded = true;
            return false;
        }
        out.push(m.to_vec());
        true
    });
    if exceeded {
        return Err(Error::SizeGuardExceeded { what: "continuous-map enumeration", limit, actual: limit + 1 });
    }
    Ok(out)
}

/// Searches for a fence from `f` to `g`.
///
/// Direct comparability is tried first; otherwise the connected component
/// of `f` in the graph of all continuous maps (edges join pointwise
/// comparable maps) is explored breadth-first, so the fence returned is a
/// shortest one in that graph.
pub fn are_homotopic(f: &ContinuousMap, g: &ContinuousMap, guards: &Guards) -> Result<Option<Fence>> {
    if !same_space(f.source(), g.source()) || !same_space(f.target(), g.target()) {
        return Err(Error::MapMismatch("maps have different endpoints".into()));
    }
    if f.assignment() == g.assignment() {
        return Ok(Some(Fence { maps: vec![f.clone()] }));
    }
    if f.is_below(g) || g.is_below(f) {
        return Ok(Some(Fence { maps: vec![f.clone(), g.clone()] }));
    }
    let source = f.source();
    let target = f.target();
    let all = continuous_maps(source, target, guards.maps)?;
    let ids: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let start = ids[f.assignment()];
    let goal = ids[g.assignment()];
    let mut parent = vec![usize::MAX; all.len()];
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            break;
        }
        let m = &all[cur];
        let above: Vec<ElementSet> = m.iter().map(|&y| target.up(y).clone()).collect();
        let below: Vec<ElementSet> = m.iter().map(|&y| target.down(y).clone()).collect();
        for allowed in [&above, &below] {
            for_each_map(source, target, Some(allowed), |n| {
                let id = ids[n];
                if parent[id] == usize::MAX {
                    parent[id] = cur;
                    queue.push_back(id);
                }
                true
            });
        }
    }
    if parent[goal] == usize::MAX {
        return Ok(None);
    }
    let mut path = vec![goal];
    while *path.last().unwrap() != start {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    let maps = path
        .into_iter()
        .map(|i| ContinuousMap::new_unchecked(source.clone(), target.clone(), all[i].clone()))
        .collect();
    Ok(Some(Fence { maps }))
}

/// All beat points with their direction, ordered by element index; an
/// element that is both a down- and an up-beat point appears twice.
pub fn beat_points(space: &FiniteSpace) -> Vec<(usize, BeatDirection)> {
    let n = space.len();
    let mut lower = vec![0usize; n];
    let mut upper = vec![0usize; n];
    for (a, b) in space.covering_pairs() {
        upper[a] += 1;
        lower[b] += 1;
    }
    let mut out = Vec::new();
    for x in 0..n {
        if lower[x] == 1 {
            out.push((x, BeatDirection::Down));
        }
        if upper[x] == 1 {
            out.push((x, BeatDirection::Up));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeatRemoval {
    pub label: String,
    pub direction: BeatDirection,
    /// The unique element covered by (down) or covering (up) the removed point.
    pub towards: String,
}

/// A minimal (beat-point free) subspace together with how it was reached.
#[derive(Debug, Clone)]
pub struct Core {
    space: FiniteSpace,
    removal_trace: Vec<BeatRemoval>,
    retained: Vec<usize>,
    retraction: Vec<usize>,
}

impl Core {
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn removal_trace(&self) -> &[BeatRemoval] {
        &self.removal_trace
    }

    /// Original index of each core element.
    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    /// The retraction of the original space onto the core, as core indices.
    /// It is continuous and fixes the core.
    pub fn retraction(&self) -> &[usize] {
        &self.retraction
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
}

/// Core by repeatedly removing the lowest-index beat point.
pub fn core(space: &FiniteSpace) -> Core {
    let priority: Vec<usize> = (0..space.len()).collect();
    core_with_priority(space, &priority)
}

/// Core by repeatedly removing the beat point of smallest `priority`.
pub fn core_with_priority(space: &FiniteSpace, priority: &[usize]) -> Core {
    let n = space.len();
    let mut alive = space.full_set();
    let mut trace = Vec::new();
    // Where each removed point was sent, as an original index.
    let mut sent_to: Vec<usize> = (0..n).collect();
    loop {
        let (sub, orig) = space.subspace(&alive);
        let best = beat_points(&sub).into_iter().min_by_key(|&(x, dir)| (priority[orig[x]], dir == BeatDirection::Up));
        let Some((x, dir)) = best else { break };
        let strict = match dir {
            BeatDirection::Down => sub.down(x),
            BeatDirection::Up => sub.up(x),
        };
        // The maximum of the strict down-set is the element of largest
        // down-set inside it (dually for up).
        let towards = strict
            .iter()
            .filter(|&y| y != x)
            .max_by_key(|&y| match dir {
                BeatDirection::Down => sub.down(y).len(),
                BeatDirection::Up => sub.up(y).len(),
            })
            .expect("beat point has a neighbour");
        trace.push(BeatRemoval {
            label: sub.label(x).to_string(),
            direction: dir,
            towards: sub.label(towards).to_string(),
        });
        sent_to[orig[x]] = orig[towards];
        alive.remove(orig[x]);
    }
    let (core_space, retained) = space.subspace(&alive);
    let mut position = vec![usize::MAX; n];
    for (k, &o) in retained.iter().enumerate() {
        position[o] = k;
    }
    let retraction = (0..n)
        .map(|mut x| {
            while !alive.contains(x) {
                x = sent_to[x];
            }
            position[x]
        })
        .collect();
    Core { space: core_space, removal_trace: trace, retained, retraction }
}

/// Contractible iff the core is a single point.
pub fn is_contractible(space: &FiniteSpace) -> bool {
    core(space).len() == 1
}

/// Homotopy equivalence of finite spaces, decided by comparing cores.
pub fn homotopy_equivalent(x: &FiniteSpace, y: &FiniteSpace, guards: &Guards) -> Result<bool> {
    let cx = core(x);
    let cy = core(y);
    Ok(cx.space().is_homeomorphic(cy.space(), guards.elements)?.is_some())
}

/// Convenience wrapper turning an index assignment into a map of `space`.
pub fn self_map(space: &Arc<FiniteSpace>, assignment: Vec<usize>) -> Result<ContinuousMap> {
    ContinuousMap::new(space.clone(), space.clone(), assignment)
}
