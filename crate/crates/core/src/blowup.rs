//! Combinatorial blow-ups with codimension-two centers and the stars
//! (finite towers) they form.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{domain, structural, Error, Result};
use crate::kernel::{CornerId, ExponentMatrix, ExponentVector, Label, Rat};
use crate::manifold::{center_pair, CenterPair, Corner, MonomialManifold, Provenance};
use crate::standardization::{validate_realizable, GlobalStandardization};

/// A center `E_i ∩ E_j` together with the standardization used to blow it up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCenter {
    pair: CenterPair,
    standardization: GlobalStandardization,
}

impl BlowupCenter {
    /// Checks that the pair is realized by a corner of `m` and that `lambda`
    /// is a realizable standardization of `m`.
    pub fn new(m: &MonomialManifold, a: Label, b: Label, lambda: GlobalStandardization) -> Result<Self> {
        if a == b {
            return Err(domain(format!("center {{{a}, {b}}} needs two distinct labels")));
        }
        let pair = center_pair(a, b);
        if m.corners_on_center(&pair).is_empty() {
            return Err(domain(format!("center {{{}, {}}} is not realized by any corner", pair.0, pair.1)));
        }
        if !validate_realizable(m, &lambda) {
            return Err(domain("standardization is not realizable on this manifold"));
        }
        Ok(BlowupCenter { pair, standardization: lambda })
    }

    pub fn pair(&self) -> &CenterPair {
        &self.pair
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        BTreeSet::from([self.pair.0.clone(), self.pair.1.clone()])
    }

    pub fn standardization(&self) -> &GlobalStandardization {
        &self.standardization
    }
}

/// One blow-up `π: after → before`.
#[derive(Clone, Debug)]
pub struct BlowupStep {
    pub center: BlowupCenter,
    pub new_label: Label,
    pub before: Arc<MonomialManifold>,
    pub after: Arc<MonomialManifold>,
    /// New corner id → the corner of `before` it maps to.
    pub parents: BTreeMap<CornerId, CornerId>,
    /// New corner id → `B_{p'}` (rows `I_p`, columns `I_{p'}`).
    pub morphisms: BTreeMap<CornerId, ExponentMatrix>,
}

impl BlowupStep {
    pub fn parent(&self, p_new: &CornerId) -> Result<&CornerId> {
        self.parents
            .get(p_new)
            .ok_or_else(|| structural(format!("{p_new} is not a corner of the blown-up manifold")))
    }

    pub fn morphism(&self, p_new: &CornerId) -> Result<&ExponentMatrix> {
        self.morphisms
            .get(p_new)
            .ok_or_else(|| structural(format!("{p_new} is not a corner of the blown-up manifold")))
    }

    /// Whether `p_new` lies over the center.
    pub fn is_exceptional(&self, p_new: &CornerId) -> bool {
        self.after.corner(p_new).is_some_and(|c| c.index_set.contains(&self.new_label))
    }
}

/// `B_{p'}` for the child of `p` that drops `dropped` from the center
/// `{dropped, kept}`.
fn morphism_matrix(ip: &BTreeSet<Label>, dropped: &Label, kept: &Label, new_label: &Label, alpha: &ExponentVector) -> Result<ExponentMatrix> {
    let cols: Vec<Label> = ip
        .iter()
        .filter(|l| *l != dropped)
        .cloned()
        .chain([new_label.clone()])
        .collect();
    let ratio = &alpha[dropped] / &alpha[kept];
    let mut b = ExponentMatrix::from_fn(ip.iter().cloned(), cols, |r, c| {
        if c == new_label {
            if r == dropped {
                Rat::one()
            } else {
                Rat::zero()
            }
        } else if r == c {
            Rat::one()
        } else {
            Rat::zero()
        }
    })?;
    b = b.with_entry(kept, new_label, ratio)?;
    Ok(b)
}

/// Blows up `m` along `center`. Corners off the center keep their id with
/// `B = 1`; every corner on it is replaced by two fresh corners. New edge
/// matrices are the conjugates `B_{q'}⁻¹ C^{pq} B_{p'}`.
pub fn blow_up(m: &Arc<MonomialManifold>, center: &BlowupCenter) -> Result<BlowupStep> {
    let (i, j) = center.pair();
    let on_center = center.labels();
    if m.corners_on_center(center.pair()).is_empty() {
        return Err(domain(format!("center {{{i}, {j}}} is not realized by any corner")));
    }
    let new_label = m.fresh_exceptional_label();
    let mut next = m.next_corner_index();
    let lambda = center.standardization();

    let mut children: BTreeMap<&CornerId, Vec<CornerId>> = BTreeMap::new();
    let mut corners = Vec::new();
    let mut parents = BTreeMap::new();
    let mut morphisms = BTreeMap::new();
    for c in m.corners() {
        if !on_center.is_subset(&c.index_set) {
            parents.insert(c.id.clone(), c.id.clone());
            morphisms.insert(c.id.clone(), ExponentMatrix::identity(&c.index_set));
            children.insert(&c.id, vec![c.id.clone()]);
            corners.push(c.clone());
            continue;
        }
        let alpha = lambda
            .alpha(&c.id)
            .ok_or_else(|| structural(format!("no standardization at {}", c.id)))?;
        let mut mine = Vec::with_capacity(2);
        for (dropped, kept) in [(i, j), (j, i)] {
            let id = loop {
                let candidate = CornerId::generated(next);
                next += 1;
                if m.corner(&candidate).is_none() {
                    break candidate;
                }
            };
            let mut index_set = c.index_set.clone();
            index_set.remove(dropped);
            index_set.insert(new_label.clone());
            morphisms.insert(id.clone(), morphism_matrix(&c.index_set, dropped, kept, &new_label, alpha)?);
            parents.insert(id.clone(), c.id.clone());
            corners.push(Corner { id: id.clone(), index_set });
            mine.push(id);
        }
        children.insert(&c.id, mine);
    }

    let index_sets: BTreeMap<&CornerId, &BTreeSet<Label>> = corners.iter().map(|c| (&c.id, &c.index_set)).collect();
    let n = m.dimension();
    let adjacent = |a: &CornerId, b: &CornerId| index_sets[a].intersection(index_sets[b]).count() + 1 == n;
    let inverses = morphisms
        .iter()
        .filter(|(id, _)| !parents.get(*id).is_some_and(|p| p == *id))
        .map(|(id, b)| Ok((id.clone(), b.inverse()?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let untouched = |id: &CornerId| !inverses.contains_key(id);
    // B_{q'}⁻¹ C B_{p'}, skipping identity factors.
    let conjugate = |p_new: &CornerId, q_new: &CornerId, c: &ExponentMatrix| -> Result<ExponentMatrix> {
        let left = match inverses.get(q_new) {
            Some(inv) => inv.mul(c)?,
            None => c.clone(),
        };
        if untouched(p_new) {
            Ok(left)
        } else {
            left.mul(&morphisms[p_new])
        }
    };

    let mut edges = Vec::new();
    for kids in children.values() {
        if let [a, b] = kids.as_slice() {
            let forward = inverses[b].mul(&morphisms[a])?;
            let backward = inverses[a].mul(&morphisms[b])?;
            edges.push((a.clone(), b.clone(), forward, Some(backward)));
        }
    }
    for e in m.edges() {
        let mut lifted = 0;
        for p_new in &children[&e.from] {
            for q_new in &children[&e.to] {
                if adjacent(p_new, q_new) {
                    let forward = conjugate(p_new, q_new, &e.forward)?;
                    let backward = conjugate(q_new, p_new, &e.backward)?;
                    edges.push((p_new.clone(), q_new.clone(), forward, Some(backward)));
                    lifted += 1;
                }
            }
        }
        let expected = children[&e.from].len().min(children[&e.to].len());
        if lifted != expected {
            return Err(Error::AlgorithmInvariantViolation {
                message: format!("edge {}–{} lifted to {lifted} edges, expected {expected}", e.from, e.to),
                trace: None,
            });
        }
    }

    let mut components = m.components().clone();
    components.insert(new_label.clone());
    let mut after = MonomialManifold::from_parts_with_inverses(n, components, corners, edges)?;
    let exceptional_index = new_label.exceptional_index().unwrap_or(m.next_exceptional_index());
    after.set_counters(next, exceptional_index + 1);
    after.set_provenance(Provenance {
        center: center.pair().clone(),
        new_label: new_label.clone(),
    });
    if let Some(v) = after.validate_local().first() {
        return Err(Error::AlgorithmInvariantViolation {
            message: format!("blown-up manifold fails a local check: {v}"),
            trace: None,
        });
    }
    Ok(BlowupStep {
        center: center.clone(),
        new_label,
        before: Arc::clone(m),
        after: Arc::new(after),
        parents,
        morphisms,
    })
}

/// `λ' = λ_p B_{p'}` where `p` is the image of `p'`.
pub fn pullback_vector(lambda: &ExponentVector, step: &BlowupStep, p_new: &CornerId) -> Result<ExponentVector> {
    let b = step.morphism(p_new)?;
    if lambda.index_set() != b.row_set() {
        return Err(structural(format!(
            "exponent over {:?} does not live at the image corner {} of {p_new}",
            lambda.index_set(),
            step.parent(p_new)?
        )));
    }
    lambda.apply(b)
}

/// A finite tower of blow-ups over a root manifold.
#[derive(Clone, Debug)]
pub struct Star {
    root: Arc<MonomialManifold>,
    steps: Vec<BlowupStep>,
}

impl Star {
    pub fn new(root: Arc<MonomialManifold>) -> Self {
        Star { root, steps: Vec::new() }
    }

    pub fn root(&self) -> &Arc<MonomialManifold> {
        &self.root
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn age(&self) -> usize {
        self.steps.len()
    }

    pub fn end(&self) -> &Arc<MonomialManifold> {
        self.steps.last().map_or(&self.root, |s| &s.after)
    }

    /// Appends a step whose source is the current end.
    pub fn push(&mut self, step: BlowupStep) -> Result<()> {
        let end = self.end();
        if !Arc::ptr_eq(end, &step.before) && **end != *step.before {
            return Err(structural("blow-up step does not start at the end of the star"));
        }
        self.steps.push(step);
        Ok(())
    }

    /// Blows up the current end along `center` and appends the step.
    pub fn blow_up(&mut self, center: &BlowupCenter) -> Result<&BlowupStep> {
        let step = blow_up(self.end(), center)?;
        self.steps.push(step);
        Ok(self.steps.last().expect("just pushed"))
    }

    /// A copy whose end manifold is replaced by `end`, which must have the
    /// same corner ids. Used to inject corrupted atlases in diagnostics.
    pub fn with_end(&self, end: MonomialManifold) -> Result<Star> {
        if !self.end().corner_ids().eq(end.corner_ids()) {
            return Err(structural("replacement end manifold has different corners"));
        }
        let mut out = self.clone();
        match out.steps.last_mut() {
            Some(step) => step.after = Arc::new(end),
            None => out.root = Arc::new(end),
        }
        Ok(out)
    }

    /// The chain of corners `p_0, …, p_r = p_final` over which `p_final`
    /// lies, starting at the root.
    pub fn lineage(&self, p_final: &CornerId) -> Result<Vec<CornerId>> {
        self.end().require_corner(p_final)?;
        let mut chain = vec![p_final.clone()];
        for step in self.steps.iter().rev() {
            let parent = step.parent(chain.last().expect("nonempty"))?.clone();
            chain.push(parent);
        }
        chain.reverse();
        Ok(chain)
    }

    /// Image of `p_final` in the root manifold.
    pub fn map_end(&self, p_final: &CornerId) -> Result<CornerId> {
        Ok(self.lineage(p_final)?.swap_remove(0))
    }
}

/// `B_0 B_1 ⋯ B_{r−1}` along the lineage of `p_final`: rows `I_{p_0}`,
/// columns `I_{p_final}`, so that pulling `λ` back through the whole star is
/// `λ · compose_star(…)`.
pub fn compose_star(star: &Star, p_final: &CornerId) -> Result<ExponentMatrix> {
    let chain = star.lineage(p_final)?;
    let mut acc = ExponentMatrix::identity(star.root().index_set(&chain[0])?);
    for (step, p) in star.steps().iter().zip(&chain[1..]) {
        acc = acc.mul(step.morphism(p)?)?;
    }
    Ok(acc)
}
