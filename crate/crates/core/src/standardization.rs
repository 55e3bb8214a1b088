//! Local and global m-standardizations: positive exponent rescalings
//! `u_{p,i} = x_{p,i}^{α_{p,i}}`, one per corner, tied together by the weight
//! connexions of the atlas.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::kernel::{CornerId, ExponentMatrix, ExponentVector, Label, Rat};
use crate::manifold::MonomialManifold;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStandardization {
    corner: CornerId,
    alpha: ExponentVector,
}

impl LocalStandardization {
    pub fn new(corner: CornerId, alpha: ExponentVector) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(domain(format!("standardization {alpha} at {corner} is not strictly positive")));
        }
        Ok(LocalStandardization { corner, alpha })
    }

    pub fn corner(&self) -> &CornerId {
        &self.corner
    }

    pub fn alpha(&self) -> &ExponentVector {
        &self.alpha
    }
}

/// A family `Λ = {α_p}` total on the corners of a manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalStandardization {
    per_corner: BTreeMap<CornerId, LocalStandardization>,
}

impl GlobalStandardization {
    pub fn new(locals: impl IntoIterator<Item = LocalStandardization>) -> Result<Self> {
        let mut per_corner = BTreeMap::new();
        for local in locals {
            let id = local.corner.clone();
            if per_corner.insert(id.clone(), local).is_some() {
                return Err(structural(format!("two local standardizations at {id}")));
            }
        }
        Ok(GlobalStandardization { per_corner })
    }

    pub fn alpha(&self, corner: &CornerId) -> Option<&ExponentVector> {
        self.per_corner.get(corner).map(|l| &l.alpha)
    }

    pub fn restrict(&self, corner: &CornerId) -> Option<&LocalStandardization> {
        self.per_corner.get(corner)
    }

    pub fn locals(&self) -> impl Iterator<Item = &LocalStandardization> {
        self.per_corner.values()
    }

    /// Whether the family has one entry per corner of `m`, over that corner's
    /// index set.
    pub fn is_total_on(&self, m: &MonomialManifold) -> bool {
        self.per_corner.len() == m.corner_count()
            && m.corners()
                .all(|c| self.alpha(&c.id).is_some_and(|a| a.index_set() == c.index_set))
    }

    /// The free parameters `β_i = α_{q_i, i}` for `i ∉ I_p`, read at the
    /// base corners used by [`extend`].
    pub fn free_parameters(&self, m: &MonomialManifold, p: &CornerId) -> Result<BTreeMap<Label, Rat>> {
        let ip = m.index_set(p)?;
        m.components()
            .iter()
            .filter(|l| !ip.contains(*l))
            .map(|l| {
                let base = base_corner(m, l)?;
                let alpha = self
                    .alpha(base)
                    .ok_or_else(|| structural(format!("no standardization at {base}")))?;
                Ok((l.clone(), alpha[l].clone()))
            })
            .collect()
    }
}

/// Smallest corner id on `E_label`.
fn base_corner<'a>(m: &'a MonomialManifold, label: &Label) -> Result<&'a CornerId> {
    m.corners_containing(&BTreeSet::from([label.clone()]))
        .into_iter()
        .next()
        .ok_or_else(|| structural(format!("component {label} contains no corner")))
}

fn is_total_and_positive(m: &MonomialManifold, lambda: &GlobalStandardization) -> bool {
    lambda.is_total_on(m) && m.corners().all(|c| lambda.alpha(&c.id).is_some_and(ExponentVector::is_positive))
}

/// Checks `α_{p,ℓ} = γ^{pq}_ℓ α_{q,ℓ}` on every edge and shared label. On a
/// valid atlas this is equivalent to the relation for every pair of corners,
/// as connexions multiply along paths inside each `E_ℓ`.
pub fn validate_realizable(m: &MonomialManifold, lambda: &GlobalStandardization) -> bool {
    is_total_and_positive(m, lambda)
        && m.edges().all(|e| {
            let (ap, aq) = (&lambda.per_corner[&e.from].alpha, &lambda.per_corner[&e.to].alpha);
            e.shared.iter().all(|l| ap[l] == e.forward.entry(l, l) * &aq[l])
        })
}

/// [`validate_realizable`] evaluated directly on every pair of corners with
/// a common label, through derived chart changes.
pub fn validate_realizable_pairwise(m: &MonomialManifold, lambda: &GlobalStandardization) -> bool {
    if !is_total_and_positive(m, lambda) {
        return false;
    }
    let ids: Vec<&CornerId> = m.corner_ids().collect();
    ids.iter().enumerate().all(|(k, p)| {
        ids[k + 1..].iter().all(|q| {
            if m.index_set(p).unwrap().is_disjoint(m.index_set(q).unwrap()) {
                return true;
            }
            let Ok(gamma) = m.weight_connexion(p, q) else {
                return false;
            };
            let (ap, aq) = (&lambda.per_corner[*p].alpha, &lambda.per_corner[*q].alpha);
            let ok = gamma.iter().all(|(l, g)| ap[l] == g * &aq[l]);
            ok
        })
    })
}

/// Extends a local standardization at `p` to the whole manifold. `beta` gives
/// a positive value for each component not through `p`; every label `i` is
/// then propagated from its base corner by `α_{r,i} = γ^{r q_i}_i β_i`.
pub fn extend(
    m: &MonomialManifold,
    local: &LocalStandardization,
    beta: &BTreeMap<Label, Rat>,
) -> Result<GlobalStandardization> {
    let p = &local.corner;
    let ip = m.index_set(p)?;
    if local.alpha.index_set() != *ip {
        return Err(structural(format!("standardization at {p} is not over I_{p}")));
    }
    let outside: BTreeSet<&Label> = m.components().iter().filter(|l| !ip.contains(*l)).collect();
    let given: BTreeSet<&Label> = beta.keys().collect();
    if outside != given {
        return Err(structural(format!(
            "free parameters must be given exactly for {:?}, got {:?}",
            outside, given
        )));
    }
    if beta.values().any(|b| !b.is_positive()) {
        return Err(domain("free parameters must be strictly positive"));
    }
    let mut bases: BTreeMap<&Label, (&CornerId, &Rat)> = BTreeMap::new();
    for l in ip {
        bases.insert(l, (p, &local.alpha[l]));
    }
    for l in outside {
        bases.insert(l, (base_corner(m, l)?, &beta[l]));
    }
    // Each label is carried breadth-first from its base corner across the
    // edges inside E_l, with α_{r,l} = C^{rs}_{ll} α_{s,l}.
    let mut values: BTreeMap<&CornerId, Vec<(Label, Rat)>> = BTreeMap::new();
    for (l, (base, value)) in &bases {
        let mut seen = BTreeSet::from([*base]);
        let mut queue = VecDeque::from([(*base, (*value).clone())]);
        while let Some((s, alpha_s)) = queue.pop_front() {
            for r in m.neighbors(s) {
                let edge = m.edge_between(r, s).expect("adjacency mirrors edges");
                if edge.shared.contains(*l) && seen.insert(r) {
                    queue.push_back((r, edge.matrix_from(r).entry(l, l) * &alpha_s));
                }
            }
            values.entry(s).or_default().push(((*l).clone(), alpha_s));
        }
    }
    let mut locals = Vec::with_capacity(m.corner_count());
    for corner in m.corners() {
        let entries = values.remove(&corner.id).unwrap_or_default();
        let alpha = ExponentVector::new(entries)?;
        if alpha.index_set() != corner.index_set {
            return Err(structural(format!(
                "the corners on some component through {} are not connected inside it",
                corner.id
            )));
        }
        locals.push(LocalStandardization::new(corner.id.clone(), alpha)?);
    }
    GlobalStandardization::new(locals)
}

/// [`extend`] with every free parameter set to 1.
pub fn extend_with_unit_parameters(m: &MonomialManifold, local: &LocalStandardization) -> Result<GlobalStandardization> {
    let ip = m.index_set(&local.corner)?;
    let beta = m
        .components()
        .iter()
        .filter(|l| !ip.contains(*l))
        .map(|l| (l.clone(), Rat::one()))
        .collect();
    extend(m, local, &beta)
}

/// `A = D_{α_q} C^{pq} D_{α_p}⁻¹`, the chart change in the standardized
/// coordinates.
pub fn standardized_change(
    m: &MonomialManifold,
    lambda: &GlobalStandardization,
    p: &CornerId,
    q: &CornerId,
) -> Result<ExponentMatrix> {
    let ap = lambda.alpha(p).ok_or_else(|| structural(format!("no standardization at {p}")))?;
    let aq = lambda.alpha(q).ok_or_else(|| structural(format!("no standardization at {q}")))?;
    let c = m.change_matrix(p, q)?;
    ExponentMatrix::diagonal(aq)
        .mul(&c)?
        .mul(&ExponentMatrix::diagonal(ap).inverse()?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalStandardizationJson {
    pub corner: CornerId,
    pub alpha: BTreeMap<Label, Rat>,
}

impl From<&LocalStandardization> for LocalStandardizationJson {
    fn from(l: &LocalStandardization) -> Self {
        LocalStandardizationJson {
            corner: l.corner.clone(),
            alpha: l.alpha.clone().into_map(),
        }
    }
}

impl TryFrom<&LocalStandardizationJson> for LocalStandardization {
    type Error = Error;

    fn try_from(json: &LocalStandardizationJson) -> Result<Self> {
        let alpha = ExponentVector::new(json.alpha.iter().map(|(l, v)| (l.clone(), v.clone())))?;
        LocalStandardization::new(json.corner.clone(), alpha)
    }
}

impl GlobalStandardization {
    pub fn to_json(&self) -> Vec<LocalStandardizationJson> {
        self.per_corner.values().map(LocalStandardizationJson::from).collect()
    }

    pub fn from_json(entries: &[LocalStandardizationJson]) -> Result<Self> {
        GlobalStandardization::new(
            entries
                .iter()
                .map(LocalStandardization::try_from)
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Corner;

    fn lbl(names: &[&str]) -> Vec<Label> {
        names.iter().map(|s| Label::from(*s)).collect()
    }

    fn two_corners(gamma: &str) -> MonomialManifold {
        // C^{pq}[a, a] = γ, so γ^{pq}_a = γ.
        let p = Corner { id: "p".into(), index_set: ["a", "b"].map(Label::from).into() };
        let q = Corner { id: "q".into(), index_set: ["a", "c"].map(Label::from).into() };
        let c = ExponentMatrix::parse(&["a", "c"], &["a", "b"], &[&[gamma, "1"], &["0", "-1"]]).unwrap();
        MonomialManifold::from_parts(2, ["a", "b", "c"].map(Label::from).into(), vec![p, q], vec![("p".into(), "q".into(), c)])
            .unwrap()
    }

    fn local(corner: &str, labels: &[&str], values: &[&str]) -> LocalStandardization {
        LocalStandardization::new(corner.into(), ExponentVector::parse(labels, values).unwrap()).unwrap()
    }

    #[test]
    fn single_corner_accepts_any_positive_alpha() {
        let m = MonomialManifold::make_corner(2, lbl(&["E1", "E2"])).unwrap();
        let u = local("c0", &["E1", "E2"], &["7/3", "1/9"]);
        let lambda = GlobalStandardization::new([u.clone()]).unwrap();
        assert!(validate_realizable(&m, &lambda));
        assert_eq!(extend(&m, &u, &BTreeMap::new()).unwrap(), lambda);
    }

    #[test]
    fn realizability_by_direct_substitution() {
        let m = two_corners("2");
        let good = GlobalStandardization::new([
            local("p", &["a", "b"], &["2", "1"]),
            local("q", &["a", "c"], &["1", "5"]),
        ])
        .unwrap();
        assert!(validate_realizable(&m, &good));
        let bad = GlobalStandardization::new([
            local("p", &["a", "b"], &["1", "1"]),
            local("q", &["a", "c"], &["1", "1"]),
        ])
        .unwrap();
        assert!(!validate_realizable(&m, &bad));
    }

    #[test]
    fn extension_is_injective_in_the_free_parameters() {
        let m = two_corners("3/2");
        let u = local("p", &["a", "b"], &["3", "1"]);
        let beta1 = BTreeMap::from([(Label::from("c"), Rat::one())]);
        let beta2 = BTreeMap::from([(Label::from("c"), Rat::from_integer(4))]);
        let l1 = extend(&m, &u, &beta1).unwrap();
        let l2 = extend(&m, &u, &beta2).unwrap();
        assert!(validate_realizable(&m, &l1) && validate_realizable(&m, &l2));
        assert_ne!(l1, l2);
        assert_eq!(l1.alpha(&"p".into()), l2.alpha(&"p".into()));
        assert_eq!(l1.alpha(&"q".into()).unwrap()[&"a".into()], Rat::from_integer(2));
        assert_eq!(l1.free_parameters(&m, &"p".into()).unwrap(), beta1);
    }

    #[test]
    fn extension_rejects_bad_parameters() {
        let m = two_corners("2");
        let u = local("p", &["a", "b"], &["1", "1"]);
        assert!(extend(&m, &u, &BTreeMap::new()).is_err());
        let zero = BTreeMap::from([(Label::from("c"), Rat::zero())]);
        assert!(matches!(extend(&m, &u, &zero), Err(Error::Domain(_))));
        assert!(LocalStandardization::new("p".into(), ExponentVector::parse(&["a"], &["0"]).unwrap()).is_err());
    }

    #[test]
    fn standardized_change_has_unit_diagonal() {
        let m = two_corners("5/7");
        let u = local("p", &["a", "b"], &["2", "3"]);
        let lambda = extend_with_unit_parameters(&m, &u).unwrap();
        let a = standardized_change(&m, &lambda, &"p".into(), &"q".into()).unwrap();
        assert!(a.entry(&"a".into(), &"a".into()).is_one());
    }
}
