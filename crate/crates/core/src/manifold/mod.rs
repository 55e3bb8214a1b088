//! Combinatorial model of a monomial manifold: corner points with their index
//! sets, compact edges carrying exponent matrices, and everything derived from
//! them (chart changes between any two corners, weight connexions, centers).

mod json;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{domain, structural, Error, Result};
use crate::kernel::{CornerId, ExponentMatrix, ExponentVector, Label};

pub use json::{CornerJson, EdgeJson, ManifoldJson};
pub use validate::{Violation, ViolationKind};

/// A codimension-two center, identified by its (sorted) label pair.
pub type CenterPair = (Label, Label);

pub fn center_pair(a: Label, b: Label) -> CenterPair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub id: CornerId,
    pub index_set: BTreeSet<Label>,
}

/// A compact edge between two corners. `forward` is `C^{from,to}` (rows
/// `I_to`, columns `I_from`); `backward` is its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: CornerId,
    pub to: CornerId,
    pub shared: BTreeSet<Label>,
    pub forward: ExponentMatrix,
    pub backward: ExponentMatrix,
}

impl Edge {
    /// `C^{p,q}` where `p` is the given endpoint.
    pub fn matrix_from(&self, p: &CornerId) -> &ExponentMatrix {
        if *p == self.from {
            &self.forward
        } else {
            &self.backward
        }
    }

    pub fn other(&self, p: &CornerId) -> &CornerId {
        if *p == self.from {
            &self.to
        } else {
            &self.from
        }
    }
}

/// Where a manifold came from, when it is the end of a blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub center: CenterPair,
    pub new_label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialManifold {
    dimension: usize,
    components: BTreeSet<Label>,
    corners: BTreeMap<CornerId, Corner>,
    edges: BTreeMap<(CornerId, CornerId), Edge>,
    adjacency: BTreeMap<CornerId, BTreeSet<CornerId>>,
    next_corner: u64,
    next_exceptional: u64,
    provenance: Option<Provenance>,
}

fn edge_key(a: &CornerId, b: &CornerId) -> (CornerId, CornerId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl MonomialManifold {
    /// The m-corner: a single corner carrying all `labels`, no edges.
    pub fn make_corner(dimension: usize, labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let labels: Vec<Label> = labels.into_iter().collect();
        let index_set: BTreeSet<Label> = labels.iter().cloned().collect();
        if index_set.len() != labels.len() {
            return Err(structural("corner labels must be distinct"));
        }
        if labels.len() != dimension {
            return Err(structural(format!(
                "a corner of dimension {dimension} needs {dimension} labels, got {}",
                labels.len()
            )));
        }
        let corner = Corner {
            id: CornerId::generated(0),
            index_set: index_set.clone(),
        };
        Self::from_parts(dimension, index_set, vec![corner], Vec::new())
    }

    /// Assembles a manifold from corners and edges `(p, q, C^{pq})`. Only the
    /// shape of the data is checked here (so that corrupt inputs can still be
    /// diagnosed by [`MonomialManifold::validate`]); singular edge matrices are
    /// rejected because their inverse cannot be stored.
    pub fn from_parts(
        dimension: usize,
        components: BTreeSet<Label>,
        corners: Vec<Corner>,
        edges: Vec<(CornerId, CornerId, ExponentMatrix)>,
    ) -> Result<Self> {
        let edges = edges.into_iter().map(|(p, q, c)| (p, q, c, None)).collect();
        Self::from_parts_with_inverses(dimension, components, corners, edges)
    }

    pub(crate) fn from_parts_with_inverses(
        dimension: usize,
        components: BTreeSet<Label>,
        corners: Vec<Corner>,
        edges: Vec<(CornerId, CornerId, ExponentMatrix, Option<ExponentMatrix>)>,
    ) -> Result<Self> {
        let mut corner_map = BTreeMap::new();
        for c in corners {
            let id = c.id.clone();
            if corner_map.insert(id.clone(), c).is_some() {
                return Err(structural(format!("corner id {id} appears twice")));
            }
        }
        let next_corner = corner_map
            .keys()
            .filter_map(CornerId::generated_index)
            .max()
            .map_or(0, |k| k + 1);
        let next_exceptional = components
            .iter()
            .filter_map(Label::exceptional_index)
            .max()
            .map_or(1, |k| k + 1);
        let mut m = MonomialManifold {
            dimension,
            components,
            adjacency: corner_map.keys().map(|k| (k.clone(), BTreeSet::new())).collect(),
            corners: corner_map,
            edges: BTreeMap::new(),
            next_corner,
            next_exceptional,
            provenance: None,
        };
        for (p, q, matrix, inverse) in edges {
            m.insert_edge(&p, &q, matrix, inverse)?;
        }
        Ok(m)
    }

    /// Inserts the edge `p → q` carrying `C^{pq}`. A known exact inverse can
    /// be passed to skip the elimination; it is trusted here and checked by
    /// [`MonomialManifold::validate`].
    pub(crate) fn insert_edge(
        &mut self,
        p: &CornerId,
        q: &CornerId,
        matrix: ExponentMatrix,
        inverse: Option<ExponentMatrix>,
    ) -> Result<()> {
        if p == q {
            return Err(structural(format!("edge from {p} to itself")));
        }
        let ip = &self
            .corners
            .get(p)
            .ok_or_else(|| structural(format!("edge endpoint {p} is not a corner")))?
            .index_set;
        let iq = &self
            .corners
            .get(q)
            .ok_or_else(|| structural(format!("edge endpoint {q} is not a corner")))?
            .index_set;
        if matrix.row_set() != *iq || matrix.col_set() != *ip {
            return Err(structural(format!(
                "edge matrix {p}→{q} must have rows I_{q} and columns I_{p}"
            )));
        }
        let shared: BTreeSet<Label> = ip.intersection(iq).cloned().collect();
        let inverse = match inverse {
            Some(inv) if inv.row_set() == *ip && inv.col_set() == *iq => inv,
            Some(_) => return Err(structural(format!("inverse of edge matrix {p}→{q} has the wrong shape"))),
            None => matrix.inverse()?,
        };
        let key = edge_key(p, q);
        let (forward, backward) = if key.0 == *p { (matrix, inverse) } else { (inverse, matrix) };
        let edge = Edge {
            from: key.0.clone(),
            to: key.1.clone(),
            shared,
            forward,
            backward,
        };
        if self.edges.insert(key.clone(), edge).is_some() {
            return Err(structural(format!("two edges between {} and {}", key.0, key.1)));
        }
        self.adjacency.get_mut(p).expect("checked").insert(q.clone());
        self.adjacency.get_mut(q).expect("checked").insert(p.clone());
        Ok(())
    }

    /// Returns a copy whose edge `p → q` carries `matrix` (and its inverse in
    /// the other direction). Intended for diagnostics and corruption tests.
    pub fn replace_edge_matrix(&self, p: &CornerId, q: &CornerId, matrix: ExponentMatrix) -> Result<Self> {
        let key = edge_key(p, q);
        if !self.edges.contains_key(&key) {
            return Err(structural(format!("no edge between {p} and {q}")));
        }
        let mut out = self.clone();
        out.edges.remove(&key);
        out.adjacency.get_mut(p).expect("edge endpoint").remove(q);
        out.adjacency.get_mut(q).expect("edge endpoint").remove(p);
        out.insert_edge(p, q, matrix, None)?;
        Ok(out)
    }

    pub(crate) fn set_counters(&mut self, next_corner: u64, next_exceptional: u64) {
        self.next_corner = next_corner;
        self.next_exceptional = next_exceptional;
    }

    pub(crate) fn next_corner_index(&self) -> u64 {
        self.next_corner
    }

    pub(crate) fn next_exceptional_index(&self) -> u64 {
        self.next_exceptional
    }

    pub(crate) fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = Some(provenance);
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn components(&self) -> &BTreeSet<Label> {
        &self.components
    }

    pub fn corners(&self) -> impl Iterator<Item = &Corner> {
        self.corners.values()
    }

    pub fn corner_ids(&self) -> impl Iterator<Item = &CornerId> {
        self.corners.keys()
    }

    pub fn corner_count(&self) -> usize {
        self.corners.len()
    }

    pub fn corner(&self, id: &CornerId) -> Option<&Corner> {
        self.corners.get(id)
    }

    pub(crate) fn require_corner(&self, id: &CornerId) -> Result<&Corner> {
        self.corners
            .get(id)
            .ok_or_else(|| structural(format!("{id} is not a corner of this manifold")))
    }

    pub fn index_set(&self, id: &CornerId) -> Result<&BTreeSet<Label>> {
        Ok(&self.require_corner(id)?.index_set)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_between(&self, p: &CornerId, q: &CornerId) -> Option<&Edge> {
        self.edges.get(&edge_key(p, q))
    }

    pub fn neighbors(&self, p: &CornerId) -> impl Iterator<Item = &CornerId> {
        self.adjacency.get(p).into_iter().flatten()
    }

    /// Corners lying on `E_J`, i.e. with `J ⊆ I_p`, in id order.
    pub fn corners_containing(&self, labels: &BTreeSet<Label>) -> Vec<&CornerId> {
        self.corners
            .values()
            .filter(|c| labels.is_subset(&c.index_set))
            .map(|c| &c.id)
            .collect()
    }

    /// The corner whose index set is exactly `labels`, if any.
    pub fn corner_with_index_set(&self, labels: &BTreeSet<Label>) -> Option<&CornerId> {
        self.corners.values().find(|c| c.index_set == *labels).map(|c| &c.id)
    }

    /// Breadth-first path from `p` to `q` using only edges inside `E_J`
    /// (edges whose shared labels contain `J`). Neighbours are visited in id
    /// order.
    pub fn path_inside(&self, p: &CornerId, q: &CornerId, labels: &BTreeSet<Label>) -> Result<Vec<CornerId>> {
        self.require_corner(p)?;
        self.require_corner(q)?;
        let mut parent: BTreeMap<&CornerId, &CornerId> = BTreeMap::new();
        let mut queue = VecDeque::from([p]);
        let mut seen = BTreeSet::from([p]);
        while let Some(cur) = queue.pop_front() {
            if cur == q {
                let mut path = vec![q.clone()];
                let mut at = q;
                while let Some(prev) = parent.get(at) {
                    path.push((*prev).clone());
                    at = prev;
                }
                path.reverse();
                return Ok(path);
            }
            for next in self.neighbors(cur) {
                let edge = self.edge_between(cur, next).expect("adjacency mirrors edges");
                if labels.is_subset(&edge.shared) && seen.insert(next) {
                    parent.insert(next, cur);
                    queue.push_back(next);
                }
            }
        }
        Err(Error::Connectivity {
            from: p.to_string(),
            to: q.to_string(),
            labels: labels.iter().map(Label::as_str).collect::<Vec<_>>().join(","),
        })
    }

    /// Product of edge matrices along a path `p = p_0, p_1, …, p_k = q`:
    /// `C^{p_{k-1} q} ⋯ C^{p_0 p_1}`.
    pub fn change_matrix_along(&self, path: &[CornerId]) -> Result<ExponentMatrix> {
        let first = path.first().ok_or_else(|| structural("empty path"))?;
        let mut acc = ExponentMatrix::identity(self.index_set(first)?);
        for w in path.windows(2) {
            let edge = self
                .edge_between(&w[0], &w[1])
                .ok_or_else(|| structural(format!("{} and {} are not adjacent", w[0], w[1])))?;
            acc = edge.matrix_from(&w[0]).mul(&acc)?;
        }
        Ok(acc)
    }

    /// `C^{pq}`: rows `I_q`, columns `I_p`, so that `λ_p = λ_q C^{pq}`.
    pub fn change_matrix(&self, p: &CornerId, q: &CornerId) -> Result<ExponentMatrix> {
        let shared: BTreeSet<Label> = self.index_set(p)?.intersection(self.index_set(q)?).cloned().collect();
        let path = self.path_inside(p, q, &shared)?;
        self.change_matrix_along(&path)
    }

    /// `γ^{pq}`: the diagonal of `C^{pq}` on `I_p ∩ I_q`.
    pub fn weight_connexion(&self, p: &CornerId, q: &CornerId) -> Result<ExponentVector> {
        let shared: BTreeSet<Label> = self.index_set(p)?.intersection(self.index_set(q)?).cloned().collect();
        if shared.is_empty() {
            return Err(domain(format!("corners {p} and {q} share no component")));
        }
        let c = self.change_matrix(p, q)?;
        ExponentVector::new(shared.into_iter().map(|l| {
            let v = c.entry(&l, &l).clone();
            (l, v)
        }))
    }

    /// All label pairs `{i, j}` lying in the index set of some corner.
    pub fn codim2_centers(&self) -> BTreeSet<CenterPair> {
        let mut out = BTreeSet::new();
        for c in self.corners.values() {
            let labels: Vec<&Label> = c.index_set.iter().collect();
            for (k, a) in labels.iter().enumerate() {
                for b in &labels[k + 1..] {
                    out.insert(center_pair((*a).clone(), (*b).clone()));
                }
            }
        }
        out
    }

    pub fn corners_on_center(&self, center: &CenterPair) -> Vec<&CornerId> {
        let labels = BTreeSet::from([center.0.clone(), center.1.clone()]);
        self.corners_containing(&labels)
    }

    /// Equality up to renaming corner ids, matching corners by index set.
    /// Requires index sets to be unique, as they are in valid manifolds.
    pub fn is_isomorphic_to(&self, other: &MonomialManifold) -> bool {
        if self.dimension != other.dimension
            || self.components != other.components
            || self.corner_count() != other.corner_count()
            || self.edge_count() != other.edge_count()
        {
            return false;
        }
        let mut rename = BTreeMap::new();
        for c in self.corners.values() {
            match other.corner_with_index_set(&c.index_set) {
                Some(id) => {
                    rename.insert(&c.id, id);
                }
                None => return false,
            }
        }
        if rename.values().collect::<BTreeSet<_>>().len() != rename.len() {
            return false;
        }
        self.edges.values().all(|e| {
            other
                .edge_between(rename[&e.from], rename[&e.to])
                .is_some_and(|f| f.matrix_from(rename[&e.from]) == &e.forward)
        })
    }

    /// A fresh exceptional label `E∞k` not used by this manifold.
    pub fn fresh_exceptional_label(&self) -> Label {
        let mut k = self.next_exceptional;
        loop {
            let label = Label::exceptional(k);
            if !self.components.contains(&label) {
                return label;
            }
            k += 1;
        }
    }
}
