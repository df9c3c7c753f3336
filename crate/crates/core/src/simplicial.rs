//! Finite abstract simplicial complexes: order complexes, face posets,
//! barycentric subdivision, nerves, simplicial maps and cheap
//! contractibility certificates (cones, collapses).

use std::collections::HashMap;
use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::poset::{ContinuousMap, FiniteSpace};
use crate::{Error, Result};

/// A face as a strictly increasing list of vertex indices.
pub type Simplex = Vec<usize>;

/// A complex with every face stored explicitly, sorted by dimension and then
/// lexicographically.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    faces: Vec<Simplex>,
    lookup: HashMap<Simplex, usize>,
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let facets: Vec<_> = self.facets().iter().map(|s| self.format_face(s)).collect();
        f.debug_struct("SimplicialComplex").field("vertices", &self.vertices).field("facets", &facets).finish()
    }
}

fn guard_faces(count: usize, limit: usize) -> Result<()> {
    if count > limit {
        Err(Error::SizeGuardExceeded { what: "face enumeration", limit, actual: count })
    } else {
        Ok(())
    }
}

impl SimplicialComplex {
    pub(crate) fn from_faces_unchecked(vertices: Vec<String>, mut faces: Vec<Simplex>) -> Self {
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let lookup = faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        SimplicialComplex { vertices, faces, lookup }
    }

    /// Closes `facets` under non-empty subsets. Every vertex becomes a face
    /// even if no facet mentions it.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<usize>], face_guard: usize) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        let mut faces: Vec<Simplex> = Vec::new();
        for v in 0..vertices.len() {
            if seen.insert(vec![v]) {
                faces.push(vec![v]);
            }
        }
        for facet in facets {
            let mut f = facet.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::InvalidComplex("empty facet".into()));
            }
            if let Some(&bad) = f.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidComplex(format!("vertex index {bad} out of range")));
            }
            if f.len() >= usize::BITS as usize - 1 {
                return Err(Error::SizeGuardExceeded {
                    what: "face enumeration",
                    limit: face_guard,
                    actual: usize::MAX,
                });
            }
            for mask in 1usize..(1 << f.len()) {
                let sub: Simplex = (0..f.len()).filter(|k| mask >> k & 1 == 1).map(|k| f[k]).collect();
                if seen.insert(sub.clone()) {
                    faces.push(sub);
                    guard_faces(faces.len(), face_guard)?;
                }
            }
        }
        Ok(Self::from_faces_unchecked(vertices, faces))
    }

    pub fn from_facet_labels<S: AsRef<str>>(
        vertices: Vec<String>,
        facets: &[Vec<S>],
        face_guard: usize,
    ) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let facets = facets
            .iter()
            .map(|f| {
                f.iter()
                    .map(|l| {
                        index.get(l.as_ref()).copied().ok_or_else(|| Error::UnknownElement(l.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_facets(vertices.clone(), &facets, face_guard)
    }

    /// The full simplex on `n` vertices labelled `0..n`.
    pub fn simplex(n: usize) -> Self {
        let vertices = (0..n).map(|i| i.to_string()).collect();
        let facet: Vec<usize> = (0..n).collect();
        Self::from_facets(vertices, &[facet], usize::MAX).expect("simplex")
    }

    /// Boundary of the simplex on `n` vertices (a sphere of dimension `n - 2`).
    pub fn simplex_boundary(n: usize) -> Self {
        let vertices = (0..n).map(|i| i.to_string()).collect();
        let facets: Vec<Vec<usize>> = (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect();
        Self::from_facets(vertices, &facets, usize::MAX).expect("sphere")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().filter(move |f| f.len() == d + 1)
    }

    pub fn index_of_face(&self, face: &[usize]) -> Option<usize> {
        self.lookup.get(face).copied()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        self.lookup.contains_key(face)
    }

    /// Largest face dimension; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.last().map(|f| f.len() - 1)
    }

    /// Number of faces in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for f in &self.faces {
            out[f.len() - 1] += 1;
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Maximal faces in face order.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered = vec![false; self.faces.len()];
        for f in &self.faces {
            if f.len() < 2 {
                continue;
            }
            for skip in 0..f.len() {
                let sub: Simplex = f.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
                covered[self.lookup[&sub]] = true;
            }
        }
        self.faces.iter().zip(covered).filter(|(_, c)| !c).map(|(f, _)| f.clone()).collect()
    }

    pub fn format_face(&self, face: &[usize]) -> String {
        let names: Vec<_> = face.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// A vertex lying in every maximal face, if any. A complex with such a
    /// vertex is a cone and hence contractible.
    pub fn is_cone(&self) -> Option<usize> {
        let facets = self.facets();
        if facets.is_empty() {
            return None;
        }
        (0..self.vertices.len()).find(|v| facets.iter().all(|f| f.binary_search(v).is_ok()))
    }

    /// Searches for a sequence of elementary collapses down to one vertex.
    ///
    /// The search is greedy with backtracking and gives up with
    /// [`Collapsibility::Unknown`] after `step_bound` elementary collapses.
    pub fn collapsible(&self, step_bound: usize) -> Collapsibility {
        crate::simplicial::collapse::search(self, step_bound)
    }
}

/// Outcome of the collapse search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Collapsibility {
    Collapsible,
    NotCollapsible,
    /// The step bound was hit before the search finished.
    Unknown,
}

mod collapse {
    use super::{Collapsibility, SimplicialComplex};

    struct State {
        alive: Vec<bool>,
        /// Alive faces of one dimension more containing the face.
        cofaces: Vec<Vec<usize>>,
        up_count: Vec<usize>,
        boundary: Vec<Vec<usize>>,
        remaining: usize,
        steps: usize,
    }

    impl State {
        fn free_pairs(&self) -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            for s in 0..self.alive.len() {
                if self.alive[s] && self.up_count[s] == 1 {
                    let t = *self.cofaces[s].iter().find(|&&t| self.alive[t]).unwrap();
                    if self.up_count[t] == 0 {
                        out.push((s, t));
                    }
                }
            }
            out
        }

        fn apply(&mut self, s: usize, t: usize, delta: isize) {
            let alive = delta < 0;
            self.alive[s] = !alive;
            self.alive[t] = !alive;
            for &f in self.boundary[t].iter().chain(self.boundary[s].iter()) {
                self.up_count[f] = (self.up_count[f] as isize + delta) as usize;
            }
            self.remaining = (self.remaining as isize + 2 * delta) as usize;
        }
    }

    pub(super) fn search(complex: &SimplicialComplex, step_bound: usize) -> Collapsibility {
        let faces = complex.faces();
        let n = faces.len();
        if n == 0 {
            return Collapsibility::NotCollapsible;
        }
        let mut cofaces = vec![Vec::new(); n];
        let mut boundary = vec![Vec::new(); n];
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for skip in 0..f.len() {
                let sub: Vec<usize> = f.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
                let j = complex.index_of_face(&sub).expect("closed complex");
                cofaces[j].push(i);
                boundary[i].push(j);
            }
        }
        let up_count = cofaces.iter().map(Vec::len).collect();
        let mut state = State { alive: vec![true; n], cofaces, up_count, boundary, remaining: n, steps: 0 };
        match descend(&mut state, step_bound) {
            Some(true) => Collapsibility::Collapsible,
            Some(false) => Collapsibility::NotCollapsible,
            None => Collapsibility::Unknown,
        }
    }

    /// `Some(true)` when a collapse sequence reaches a point, `Some(false)`
    /// when every branch is stuck, `None` when out of budget.
    fn descend(state: &mut State, step_bound: usize) -> Option<bool> {
        if state.remaining == 1 {
            return Some(true);
        }
        let pairs = state.free_pairs();
        if pairs.is_empty() {
            return Some(false);
        }
        for (s, t) in pairs {
            if state.steps >= step_bound {
                return None;
            }
            state.steps += 1;
            state.apply(s, t, -1);
            let r = descend(state, step_bound);
            state.apply(s, t, 1);
            match r {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
        }
        Some(false)
    }
}

/// The order complex: simplices are the non-empty chains.
pub fn order_complex(space: &FiniteSpace, face_guard: usize) -> Result<SimplicialComplex> {
    let mut faces = Vec::new();
    let order = space.linear_extension();
    let mut chain = Vec::new();
    for &x in &order {
        chain.push(x);
        extend_chains(space, &mut chain, &mut faces, face_guard)?;
        chain.pop();
    }
    for f in faces.iter_mut() {
        f.sort_unstable();
    }
    Ok(SimplicialComplex::from_faces_unchecked(space.labels().to_vec(), faces))
}

fn extend_chains(space: &FiniteSpace, chain: &mut Vec<usize>, out: &mut Vec<Simplex>, guard: usize) -> Result<()> {
    out.push(chain.clone());
    guard_faces(out.len(), guard)?;
    let top = *chain.last().unwrap();
    for y in space.up(top).iter() {
        if y != top {
            chain.push(y);
            extend_chains(space, chain, out, guard)?;
            chain.pop();
        }
    }
    Ok(())
}

/// The face poset: non-empty faces ordered by inclusion. Element `i` is
/// face `i` of the complex, labelled `{v0,v1,...}`.
pub fn face_poset(complex: &SimplicialComplex) -> FiniteSpace {
    let n = complex.face_count();
    let labels = complex.faces().iter().map(|f| complex.format_face(f)).collect();
    let down = complex
        .faces()
        .iter()
        .map(|f| {
            let mut set = ElementSet::empty(n);
            for mask in 1usize..(1 << f.len()) {
                let sub: Simplex = (0..f.len()).filter(|k| mask >> k & 1 == 1).map(|k| f[k]).collect();
                set.insert(complex.lookup[&sub]);
            }
            set
        })
        .collect();
    FiniteSpace::from_downsets_unchecked(labels, down)
}

/// Barycentric subdivision, as the order complex of the face poset.
pub fn barycentric(complex: &SimplicialComplex, face_guard: usize) -> Result<SimplicialComplex> {
    order_complex(&face_poset(complex), face_guard)
}

/// Finite barycentric subdivision of a space: the face poset of its order
/// complex.
pub fn finite_subdivision(space: &FiniteSpace, face_guard: usize) -> Result<FiniteSpace> {
    Ok(face_poset(&order_complex(space, face_guard)?))
}

/// Nerve of a family of sets: one vertex per set, one simplex per
/// subfamily with non-empty common intersection.
pub fn nerve(labels: Vec<String>, members: &[ElementSet], face_guard: usize) -> Result<SimplicialComplex> {
    if members.iter().any(ElementSet::is_empty) {
        return Err(Error::EmptyCoverMember);
    }
    let mut faces = Vec::new();
    let mut stack = Vec::new();
    for i in 0..members.len() {
        stack.push(i);
        nerve_extend(members, &mut stack, members[i].clone(), &mut faces, face_guard)?;
        stack.pop();
    }
    Ok(SimplicialComplex::from_faces_unchecked(labels, faces))
}

fn nerve_extend(
    members: &[ElementSet],
    stack: &mut Vec<usize>,
    common: ElementSet,
    out: &mut Vec<Simplex>,
    guard: usize,
) -> Result<()> {
    out.push(stack.clone());
    guard_faces(out.len(), guard)?;
    let last = *stack.last().unwrap();
    for j in last + 1..members.len() {
        let next = common.intersection(&members[j]);
        if !next.is_empty() {
            stack.push(j);
            nerve_extend(members, stack, next, out, guard)?;
            stack.pop();
        }
    }
    Ok(())
}

/// A vertex map sending faces to faces.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    vertex_assignment: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        vertex_assignment: Vec<usize>,
    ) -> Result<Self> {
        if vertex_assignment.len() != source.vertices().len() {
            return Err(Error::MapMismatch("vertex assignment has the wrong length".into()));
        }
        for f in source.faces() {
            let image = image_of(&vertex_assignment, f);
            if !target.contains_face(&image) {
                return Err(Error::MapMismatch(format!(
                    "face {} maps to non-face {}",
                    source.format_face(f),
                    target.format_face(&image)
                )));
            }
        }
        Ok(SimplicialMap { source, target, vertex_assignment })
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn vertex_assignment(&self) -> &[usize] {
        &self.vertex_assignment
    }

    pub fn image(&self, face: &[usize]) -> Simplex {
        image_of(&self.vertex_assignment, face)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &SimplicialMap) -> Result<SimplicialMap> {
        if *self.target != *after.source {
            return Err(Error::MapMismatch("composition of non-composable maps".into()));
        }
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: after.target.clone(),
            vertex_assignment: self.vertex_assignment.iter().map(|&v| after.vertex_assignment[v]).collect(),
        })
    }
}

fn image_of(assignment: &[usize], face: &[usize]) -> Simplex {
    let mut image: Simplex = face.iter().map(|&v| assignment[v]).collect();
    image.sort_unstable();
    image.dedup();
    image
}

/// The simplicial map between order complexes induced by a continuous map
/// (chains go to chains because the map is monotone).
pub fn induced_map(f: &ContinuousMap, face_guard: usize) -> Result<SimplicialMap> {
    let source = Arc::new(order_complex(f.source(), face_guard)?);
    let target = Arc::new(order_complex(f.target(), face_guard)?);
    SimplicialMap::new(source, target, f.assignment().to_vec())
}
