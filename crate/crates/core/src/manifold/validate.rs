use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::MonomialManifold;
use crate::kernel::{CornerId, ExponentMatrix, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// A corner index set does not have `dimension` labels, or uses labels
    /// outside the component set.
    CornerIndexSet,
    /// Two corners carry the same index set.
    DuplicateCorner,
    /// A boundary component lies on no corner.
    ComponentWithoutCorner,
    /// Edge endpoints do not share exactly `n − 1` labels.
    EdgeSharedLabels,
    /// Diagonal entry on a shared label is not strictly positive.
    EdgeDiagonalNotPositive,
    /// Off-diagonal entry between two shared labels is nonzero.
    EdgeSharedOffDiagonal,
    /// The row of the target's own label has a nonzero entry on a shared
    /// label.
    EdgeNewRowOnShared,
    /// Stored forward and backward matrices are not mutual inverses.
    EdgeInverse,
    /// Three or more corners contain the same `n − 1` labels.
    EdgeOvercrowded,
    /// The product of edge matrices around a cycle is not the identity.
    CycleIdentity,
    /// A derived chart change fails diagonal positivity or off-diagonal
    /// vanishing on the shared labels.
    DerivedChangeShape,
    /// The corners on some `E_J` are not connected by edges inside `E_J`.
    StratumDisconnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

fn fmt_labels(labels: &BTreeSet<Label>) -> String {
    let names: Vec<&str> = labels.iter().map(Label::as_str).collect();
    format!("{{{}}}", names.join(","))
}

impl MonomialManifold {
    /// Checks every structural constraint of the combinatorial data and
    /// returns the violations found (empty means valid).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.validate_local();
        let mut push = |kind, message: String| out.push(Violation { kind, message });
        let cycles_ok = self.check_cycles(&mut push);
        self.check_derived_changes(cycles_ok, &mut push);
        self.check_stratum_connectivity(&mut push);
        out
    }

    /// The corner and per-edge checks only: index sets, triangular edge
    /// matrices, stored inverses and edge crowding.
    pub fn validate_local(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind, message: String| out.push(Violation { kind, message });
        let n = self.dimension;

        let mut seen_sets: BTreeMap<&BTreeSet<Label>, &CornerId> = BTreeMap::new();
        for c in self.corners.values() {
            if c.index_set.len() != n || !c.index_set.is_subset(&self.components) {
                push(
                    ViolationKind::CornerIndexSet,
                    format!("corner {} has index set {}", c.id, fmt_labels(&c.index_set)),
                );
            }
            if let Some(other) = seen_sets.insert(&c.index_set, &c.id) {
                push(
                    ViolationKind::DuplicateCorner,
                    format!("corners {other} and {} share index set {}", c.id, fmt_labels(&c.index_set)),
                );
            }
        }
        for label in &self.components {
            if !self.corners.values().any(|c| c.index_set.contains(label)) {
                push(ViolationKind::ComponentWithoutCorner, format!("component {label} contains no corner"));
            }
        }

        let mut by_shared: BTreeMap<&BTreeSet<Label>, usize> = BTreeMap::new();
        for e in self.edges.values() {
            *by_shared.entry(&e.shared).or_default() += 1;
            let tag = format!("edge {}–{}", e.from, e.to);
            if e.shared.len() + 1 != n {
                push(
                    ViolationKind::EdgeSharedLabels,
                    format!("{tag} shares {} instead of {} labels", fmt_labels(&e.shared), n.saturating_sub(1)),
                );
                continue;
            }
            for (source, target, c) in [(&e.from, &e.to, &e.forward), (&e.to, &e.from, &e.backward)] {
                let own_target: Vec<&Label> = self.corners[target]
                    .index_set
                    .iter()
                    .filter(|l| !e.shared.contains(*l))
                    .collect();
                for l in &e.shared {
                    if !c.entry(l, l).is_positive() {
                        push(
                            ViolationKind::EdgeDiagonalNotPositive,
                            format!("C^{{{source}{target}}}[{l},{l}] = {}", c.entry(l, l)),
                        );
                    }
                    for m in &e.shared {
                        if l != m && !c.entry(l, m).is_zero() {
                            push(
                                ViolationKind::EdgeSharedOffDiagonal,
                                format!("C^{{{source}{target}}}[{l},{m}] = {}", c.entry(l, m)),
                            );
                        }
                    }
                    for iq in &own_target {
                        if !c.entry(iq, l).is_zero() {
                            push(
                                ViolationKind::EdgeNewRowOnShared,
                                format!("C^{{{source}{target}}}[{iq},{l}] = {}", c.entry(iq, l)),
                            );
                        }
                    }
                }
            }
            let inverse_ok = e.forward.mul(&e.backward).is_ok_and(|m| m.is_identity())
                && e.backward.mul(&e.forward).is_ok_and(|m| m.is_identity());
            if !inverse_ok {
                push(ViolationKind::EdgeInverse, format!("{tag}: stored matrices are not mutual inverses"));
            }
        }
        for (shared, count) in by_shared {
            if count > 1 && shared.len() + 1 == n {
                let corners = self.corners_containing(shared).len();
                if corners > 2 {
                    push(
                        ViolationKind::EdgeOvercrowded,
                        format!("{corners} corners lie on the edge {}", fmt_labels(shared)),
                    );
                }
            }
        }
        out
    }

    /// Builds BFS spanning trees and checks every non-tree edge closes its
    /// fundamental cycle to the identity. Returns the per-corner tree
    /// transports `C^{root, p}` when every cycle closes.
    fn check_cycles(&self, push: &mut impl FnMut(ViolationKind, String)) -> Option<BTreeMap<CornerId, (CornerId, ExponentMatrix)>> {
        let mut transport: BTreeMap<CornerId, (CornerId, ExponentMatrix)> = BTreeMap::new();
        let mut tree_edges = BTreeSet::new();
        for root in self.corners.keys() {
            if transport.contains_key(root) {
                continue;
            }
            transport.insert(root.clone(), (root.clone(), ExponentMatrix::identity(&self.corners[root].index_set)));
            let mut queue = VecDeque::from([root.clone()]);
            while let Some(cur) = queue.pop_front() {
                for next in self.neighbors(&cur) {
                    if transport.contains_key(next) {
                        continue;
                    }
                    let edge = self.edge_between(&cur, next).expect("adjacency mirrors edges");
                    let acc = &transport[&cur].1;
                    let Ok(product) = edge.matrix_from(&cur).mul(acc) else {
                        continue;
                    };
                    transport.insert(next.clone(), (root.clone(), product));
                    tree_edges.insert((edge.from.clone(), edge.to.clone()));
                    queue.push_back(next.clone());
                }
            }
        }
        let mut ok = true;
        for (key, edge) in &self.edges {
            if tree_edges.contains(key) {
                continue;
            }
            let (Some((_, ta)), Some((_, tb))) = (transport.get(&edge.from), transport.get(&edge.to)) else {
                continue;
            };
            let closes = edge.forward.mul(ta).is_ok_and(|m| m == *tb);
            if !closes {
                ok = false;
                push(
                    ViolationKind::CycleIdentity,
                    format!("cycle through edge {}–{} does not compose to the identity", edge.from, edge.to),
                );
            }
        }
        ok.then_some(transport)
    }

    fn check_derived_changes(
        &self,
        transport: Option<BTreeMap<CornerId, (CornerId, ExponentMatrix)>>,
        push: &mut impl FnMut(ViolationKind, String),
    ) {
        let inverses: Option<BTreeMap<&CornerId, ExponentMatrix>> = transport.as_ref().and_then(|t| {
            t.iter()
                .map(|(p, (_, m))| m.inverse().ok().map(|inv| (p, inv)))
                .collect()
        });
        let ids: Vec<&CornerId> = self.corners.keys().collect();
        for (k, p) in ids.iter().enumerate() {
            for q in &ids[k + 1..] {
                let ip = &self.corners[*p].index_set;
                let iq = &self.corners[*q].index_set;
                let shared: BTreeSet<Label> = ip.intersection(iq).cloned().collect();
                if shared.is_empty() {
                    continue;
                }
                // With all cycles closing, C^{pq} = T_q T_p⁻¹ for the tree transports.
                let derived = match (&transport, &inverses) {
                    (Some(t), Some(inv)) if t[*p].0 == t[*q].0 => t[*q].1.mul(&inv[*p]).ok(),
                    _ => self.change_matrix(p, q).ok(),
                };
                let Some(c) = derived else { continue };
                let bad = shared.iter().any(|l| {
                    !c.entry(l, l).is_positive() || shared.iter().any(|m| l != m && !c.entry(l, m).is_zero())
                });
                if bad {
                    push(
                        ViolationKind::DerivedChangeShape,
                        format!("C^{{{p}{q}}} is not diagonal-positive on {}", fmt_labels(&shared)),
                    );
                }
            }
        }
    }

    fn check_stratum_connectivity(&self, push: &mut impl FnMut(ViolationKind, String)) {
        let mut realized: BTreeSet<BTreeSet<Label>> = BTreeSet::new();
        for c in self.corners.values() {
            let labels: Vec<&Label> = c.index_set.iter().collect();
            if labels.len() > 20 {
                continue;
            }
            for mask in 0u32..(1 << labels.len()) {
                let subset = labels
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, l)| (*l).clone())
                    .collect();
                realized.insert(subset);
            }
        }
        for subset in realized {
            let members = self.corners_containing(&subset);
            let Some(start) = members.first() else { continue };
            let mut seen = BTreeSet::from([*start]);
            let mut queue = VecDeque::from([*start]);
            while let Some(cur) = queue.pop_front() {
                for next in self.neighbors(cur) {
                    let edge = self.edge_between(cur, next).expect("adjacency mirrors edges");
                    if subset.is_subset(&edge.shared) && seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
            if seen.len() != members.len() {
                push(
                    ViolationKind::StratumDisconnected,
                    format!(
                        "E_{} is not connected: {} of {} corners reachable",
                        fmt_labels(&subset),
                        seen.len(),
                        members.len()
                    ),
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Corner;

    #[test]
    fn nonzero_new_row_on_shared_label_is_flagged() {
        let p = Corner { id: "p".into(), index_set: ["a", "b"].map(Label::from).into() };
        let q = Corner { id: "q".into(), index_set: ["a", "c"].map(Label::from).into() };
        // Row c (q's own label) has a nonzero entry on the shared label a.
        let c = ExponentMatrix::parse(&["a", "c"], &["a", "b"], &[&["1", "0"], &["1", "1"]]).unwrap();
        let m = MonomialManifold::from_parts(2, ["a", "b", "c"].map(Label::from).into(), vec![p, q], vec![("p".into(), "q".into(), c)])
            .unwrap();
        let kinds: BTreeSet<ViolationKind> = m.validate().into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::EdgeNewRowOnShared), "{kinds:?}");
    }

    #[test]
    fn nonpositive_diagonal_is_flagged() {
        let p = Corner { id: "p".into(), index_set: ["a", "b"].map(Label::from).into() };
        let q = Corner { id: "q".into(), index_set: ["a", "c"].map(Label::from).into() };
        let c = ExponentMatrix::parse(&["a", "c"], &["a", "b"], &[&["-1", "0"], &["0", "1"]]).unwrap();
        let m = MonomialManifold::from_parts(2, ["a", "b", "c"].map(Label::from).into(), vec![p, q], vec![("p".into(), "q".into(), c)])
            .unwrap();
        let kinds: BTreeSet<ViolationKind> = m.validate().into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::EdgeDiagonalNotPositive));
        assert!(kinds.contains(&ViolationKind::DerivedChangeShape));
    }

    #[test]
    fn wrong_corner_size_is_flagged() {
        let p = Corner { id: "p".into(), index_set: ["a"].map(Label::from).into() };
        let m = MonomialManifold::from_parts(2, ["a"].map(Label::from).into(), vec![p], vec![]).unwrap();
        assert!(m.validate().iter().any(|v| v.kind == ViolationKind::CornerIndexSet));
    }
}
