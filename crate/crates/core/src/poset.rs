//! Finite T0-spaces and their specialization orders.
//!
//! A finite T0-space and a finite poset carry the same information: the
//! minimal open set `U_x` of a point is its down-set, and `x <= y` exactly
//! when `U_x` is contained in `U_y`. [`FiniteSpace`] stores the order as a
//! dense bit matrix (one down-set and one up-set per element) and every
//! algorithm works on element indices; labels are only for I/O.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::iso;
use crate::{Error, Result};

#[derive(Clone)]
pub struct FiniteSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    down: Vec<ElementSet>,
    up: Vec<ElementSet>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.down == other.down
    }
}

impl Eq for FiniteSpace {}

impl std::fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let edges: Vec<_> =
            self.covering_pairs().into_iter().map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b])).collect();
        f.debug_struct("FiniteSpace").field("elements", &self.labels).field("hasse", &edges).finish()
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

fn up_from_down(down: &[ElementSet]) -> Vec<ElementSet> {
    let n = down.len();
    let mut up = vec![ElementSet::empty(n); n];
    for (y, d) in down.iter().enumerate() {
        for x in d.iter() {
            up[x].insert(y);
        }
    }
    up
}

impl FiniteSpace {
    /// Builds a space from trusted down-sets. The caller guarantees that the
    /// relation is a partial order.
    pub(crate) fn from_downsets_unchecked(labels: Vec<String>, down: Vec<ElementSet>) -> Self {
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let up = up_from_down(&down);
        FiniteSpace { labels, index, down, up }
    }

    /// Builds a space from an order predicate `leq(x, y)` and validates that
    /// it is a partial order.
    pub fn from_order<F>(labels: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut down = vec![ElementSet::empty(n); n];
        for (y, d) in down.iter_mut().enumerate() {
            for x in 0..n {
                if leq(x, y) {
                    d.insert(x);
                }
            }
        }
        let up = up_from_down(&down);
        let space = FiniteSpace { labels, index, down, up };
        space.validate_order()?;
        Ok(space)
    }

    fn validate_order(&self) -> Result<()> {
        for x in 0..self.len() {
            if !self.down[x].contains(x) {
                return Err(Error::NotAPartialOrder(format!("`{}` is not related to itself", self.labels[x])));
            }
            for y in self.down[x].iter() {
                if y != x && self.down[y].contains(x) {
                    return Err(Error::NotAPartialOrder(format!(
                        "`{}` and `{}` are mutually related",
                        self.labels[x], self.labels[y]
                    )));
                }
                if !self.down[y].is_subset(&self.down[x]) {
                    return Err(Error::NotAPartialOrder(format!(
                        "relation is not transitive below `{}`",
                        self.labels[x]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Reflexive-transitive closure of `lower <= upper` pairs given by index.
    pub fn from_relation(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut up: Vec<ElementSet> = (0..n).map(|i| ElementSet::singleton(n, i)).collect();
        for &(lo, hi) in pairs {
            if lo >= n || hi >= n {
                return Err(Error::UnknownElement(format!("index {}", lo.max(hi))));
            }
            if lo == hi {
                return Err(Error::CycleDetected(labels[lo].clone()));
            }
            up[lo].insert(hi);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(Error::CycleDetected(labels[x].clone()));
                }
            }
        }
        let down = up_from_down(&up);
        Ok(FiniteSpace { labels, index, down, up })
    }

    /// Builds a space from the edges of its Hasse diagram (or any acyclic
    /// relation whose transitive closure is the order).
    pub fn from_hasse<S: AsRef<str>>(labels: Vec<String>, edges: &[(S, S)]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.to_string()));
        let pairs =
            edges.iter().map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?))).collect::<Result<Vec<_>>>()?;
        Self::from_relation(labels, &pairs)
    }

    /// Recovers the specialization order from a list of open sets.
    ///
    /// The family must contain the empty set and the whole space and be
    /// closed under pairwise unions and intersections; distinct points must
    /// have distinct minimal open sets.
    pub fn from_topology<S: AsRef<str>>(labels: Vec<String>, opens: &[Vec<S>]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut family: Vec<ElementSet> = Vec::with_capacity(opens.len());
        for open in opens {
            let mut set = ElementSet::empty(n);
            for l in open {
                let i = *index.get(l.as_ref()).ok_or_else(|| Error::UnknownElement(l.as_ref().to_string()))?;
                set.insert(i);
            }
            if !family.contains(&set) {
                family.push(set);
            }
        }
        let show = |s: &ElementSet| {
            let names: Vec<_> = s.iter().map(|i| labels[i].as_str()).collect();
            format!("{{{}}}", names.join(","))
        };
        if !family.contains(&ElementSet::empty(n)) {
            return Err(Error::NotATopology("the empty set is not open".into()));
        }
        if !family.contains(&ElementSet::full(n)) {
            return Err(Error::NotATopology("the whole space is not open".into()));
        }
        for a in &family {
            for b in &family {
                let u = a.union(b);
                if !family.contains(&u) {
                    return Err(Error::NotATopology(format!("union {} is missing", show(&u))));
                }
                let i = a.intersection(b);
                if !family.contains(&i) {
                    return Err(Error::NotATopology(format!("intersection {} is missing", show(&i))));
                }
            }
        }
        let mut down = Vec::with_capacity(n);
        for x in 0..n {
            let mut ux = ElementSet::full(n);
            for o in family.iter().filter(|o| o.contains(x)) {
                ux.intersect_with(o);
            }
            down.push(ux);
        }
        for x in 0..n {
            for y in x + 1..n {
                if down[x] == down[y] {
                    return Err(Error::NotT0(labels[x].clone(), labels[y].clone()));
                }
            }
        }
        // x <= y iff U_x is inside U_y, i.e. x is in U_y.
        let up = up_from_down(&down);
        Ok(FiniteSpace { labels, index, down, up })
    }

    /// One-point space.
    pub fn singleton(label: &str) -> Self {
        Self::from_downsets_unchecked(vec![label.to_string()], vec![ElementSet::singleton(1, 0)])
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let down = (0..n).map(|i| ElementSet::from_indices(n, 0..=i)).collect();
        Self::from_downsets_unchecked(labels, down)
    }

    /// `n` pairwise incomparable points.
    pub fn antichain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let down = (0..n).map(|i| ElementSet::singleton(n, i)).collect();
        Self::from_downsets_unchecked(labels, down)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `U_x = { y : y <= x }`.
    #[inline]
    pub fn down(&self, x: usize) -> &ElementSet {
        &self.down[x]
    }

    /// `F_x = { y : y >= x }`.
    #[inline]
    pub fn up(&self, x: usize) -> &ElementSet {
        &self.up[x]
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// Formats a subset as `{a,b,c}` in index order.
    pub fn format_set(&self, set: &ElementSet) -> String {
        let names: Vec<_> = set.iter().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The minimal open set of `label`.
    pub fn minimal_open(&self, label: &str) -> Result<OpenSet> {
        Ok(OpenSet(self.down[self.index_of(label)?].clone()))
    }

    pub fn minimal_open_at(&self, x: usize) -> OpenSet {
        OpenSet(self.down[x].clone())
    }

    pub fn is_open(&self, set: &ElementSet) -> bool {
        set.iter().all(|x| self.down[x].is_subset(set))
    }

    /// Validates that `set` is a down-set and wraps it.
    pub fn open_set(&self, set: ElementSet) -> Result<OpenSet> {
        if self.is_open(&set) {
            Ok(OpenSet(set))
        } else {
            Err(Error::NotOpen(self.format_set(&set)))
        }
    }

    pub fn open_set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<OpenSet> {
        let mut set = ElementSet::empty(self.len());
        for l in labels {
            set.insert(self.index_of(l.as_ref())?);
        }
        self.open_set(set)
    }

    /// Covering relation `(lower, upper)` sorted by index: the Hasse diagram,
    /// i.e. the transitive reduction of the order.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].iter() {
                if y != x && self.up[x].intersection(&self.down[y]).len() == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Elements sorted so that every element comes after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.down[x].len(), x));
        order
    }

    /// Length of the longest chain ending at each element (minimal elements
    /// have height 0).
    pub fn element_heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for x in self.linear_extension() {
            h[x] = self.down[x].iter().filter(|&y| y != x).map(|y| h[y] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Number of edges in a longest chain; `None` for the empty space.
    pub fn height(&self) -> Option<usize> {
        self.element_heights().into_iter().max()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.down[x].len() == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.up[x].len() == 1).collect()
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.down[x].len() == self.len())
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.up[x].len() == self.len())
    }

    /// Connected components of the comparability graph, each sorted, in
    /// order of their smallest element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = ElementSet::empty(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = ElementSet::singleton(n, start);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(x) = stack.pop() {
                for y in self.down[x].union(&self.up[x]).iter() {
                    if !seen.contains(y) {
                        seen.insert(y);
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            out.push(comp.iter().collect());
        }
        out
    }

    /// Every open set (down-set), including the empty set and the whole
    /// space, ordered by size and then by member indices.
    pub fn all_opens(&self, guard: usize) -> Result<Vec<OpenSet>> {
        if self.len() > guard {
            return Err(Error::SizeGuardExceeded { what: "open-set enumeration", limit: guard, actual: self.len() });
        }
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut current = ElementSet::empty(self.len());
        self.collect_downsets(&order, 0, &mut current, &mut out);
        out.sort_by_cached_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
        Ok(out.into_iter().map(OpenSet).collect())
    }

    fn collect_downsets(&self, order: &[usize], pos: usize, current: &mut ElementSet, out: &mut Vec<ElementSet>) {
        if pos == order.len() {
            out.push(current.clone());
            return;
        }
        let x = order[pos];
        self.collect_downsets(order, pos + 1, current, out);
        let mut below = self.down[x].clone();
        below.remove(x);
        if below.is_subset(current) {
            current.insert(x);
            self.collect_downsets(order, pos + 1, current, out);
            current.remove(x);
        }
    }

    /// Subspace on `keep`, preserving index order. Returns the subspace and
    /// the original index of each of its elements.
    pub fn subspace(&self, keep: &ElementSet) -> (FiniteSpace, Vec<usize>) {
        let kept: Vec<usize> = keep.iter().collect();
        let m = kept.len();
        let labels = kept.iter().map(|&i| self.labels[i].clone()).collect();
        let down = kept
            .iter()
            .map(|&y| {
                ElementSet::from_indices(m, kept.iter().enumerate().filter(|(_, &x)| self.leq(x, y)).map(|(k, _)| k))
            })
            .collect();
        (Self::from_downsets_unchecked(labels, down), kept)
    }

    /// An order isomorphism `self -> other` (as an index map), if one exists.
    ///
    /// Spaces larger than `guard` elements are rejected with
    /// [`Error::SizeGuardExceeded`]; spaces of different sizes are never
    /// isomorphic and are answered directly.
    pub fn is_homeomorphic(&self, other: &FiniteSpace, guard: usize) -> Result<Option<Vec<usize>>> {
        iso::find_isomorphism(self, other, guard)
    }

    /// Hasse diagram as a DOT digraph. Edges point from the lower to the
    /// upper element and the layout is bottom-to-top.
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for l in &self.labels {
            let _ = writeln!(out, "  {};", dot_id(l));
        }
        for (a, b) in self.covering_pairs() {
            let _ = writeln!(out, "  {} -> {};", dot_id(&self.labels[a]), dot_id(&self.labels[b]));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// An open set of a finite space: a down-closed set of element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OpenSet(pub(crate) ElementSet);

impl OpenSet {
    pub fn members(&self) -> &ElementSet {
        &self.0
    }

    pub fn into_members(self) -> ElementSet {
        self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Whether `assignment` (source index to target index) preserves the order.
pub fn is_order_preserving(source: &FiniteSpace, target: &FiniteSpace, assignment: &[usize]) -> bool {
    assignment.len() == source.len()
        && assignment.iter().all(|&y| y < target.len())
        && (0..source.len()).all(|x| source.down(x).iter().all(|w| target.leq(assignment[w], assignment[x])))
}

/// A continuous (order-preserving) map between finite spaces.
#[derive(Clone, Debug)]
pub struct ContinuousMap {
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    assignment: Vec<usize>,
}

impl PartialEq for ContinuousMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && same_space(&self.source, &other.source)
            && same_space(&self.target, &other.target)
    }
}

impl Eq for ContinuousMap {}

pub(crate) fn same_space(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ContinuousMap {
    pub fn new(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::MapMismatch(format!(
                "assignment has {} entries for a {}-point source",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= target.len()) {
            return Err(Error::MapMismatch(format!("target index {bad} out of range")));
        }
        for x in 0..source.len() {
            for w in source.down(x).iter() {
                if !target.leq(assignment[w], assignment[x]) {
                    return Err(Error::NotContinuous(format!(
                        "{} <= {} but {} is not below {}",
                        source.label(w),
                        source.label(x),
                        target.label(assignment[w]),
                        target.label(assignment[x])
                    )));
                }
            }
        }
        Ok(ContinuousMap { source, target, assignment })
    }

    /// Builds a map from `(source label, target label)` pairs.
    pub fn from_labels<S: AsRef<str>>(
        source: Arc<FiniteSpace>,
        target: Arc<FiniteSpace>,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut assignment = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            assignment[source.index_of(a.as_ref())?] = target.index_of(b.as_ref())?;
        }
        if let Some(x) = assignment.iter().position(|&y| y == usize::MAX) {
            return Err(Error::MapMismatch(format!("no image given for `{}`", source.label(x))));
        }
        Self::new(source, target, assignment)
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, assignment: Vec<usize>) -> Self {
        ContinuousMap { source, target, assignment }
    }

    pub fn identity(space: Arc<FiniteSpace>) -> Self {
        let assignment = (0..space.len()).collect();
        ContinuousMap { source: space.clone(), target: space, assignment }
    }

    pub fn constant(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, value: usize) -> Result<Self> {
        let assignment = vec![value; source.len()];
        Self::new(source, target, assignment)
    }

    pub fn source(&self) -> &Arc<FiniteSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSpace> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &ContinuousMap) -> Result<ContinuousMap> {
        if !same_space(&self.target, &after.source) {
            return Err(Error::MapMismatch("composition of non-composable maps".into()));
        }
        Ok(ContinuousMap {
            source: self.source.clone(),
            target: after.target.clone(),
            assignment: self.assignment.iter().map(|&y| after.assignment[y]).collect(),
        })
    }

    /// `self(x) <= other(x)` for every `x`.
    pub fn is_below(&self, other: &ContinuousMap) -> bool {
        self.assignment.iter().zip(&other.assignment).all(|(&a, &b)| self.target.leq(a, b))
    }
}
