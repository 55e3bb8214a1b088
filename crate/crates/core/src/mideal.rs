//! m-functions, finitely generated m-ideals, uncoupled centers and the
//! principalization loop driven by adapted blow-ups.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::blowup::{pullback_vector, BlowupCenter, BlowupStep, Star};
use crate::error::{domain, structural, Error, Result};
use crate::kernel::{minimal_elements, CornerId, ExponentVector, Label, Rat};
use crate::manifold::{CenterPair, MonomialManifold};
use crate::standardization::{extend_with_unit_parameters, GlobalStandardization, LocalStandardization};

/// A chart-consistent family `{λ_p}` of nonnegative exponents, one per corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFunction {
    data: BTreeMap<CornerId, ExponentVector>,
}

fn not_effective(corner: &CornerId, v: &ExponentVector) -> Error {
    Error::NotEffective {
        corner: corner.to_string(),
        vector: v.to_string(),
    }
}

impl MFunction {
    /// Propagates `λ_p` to every corner by `λ_q = λ_p C^{qp}`.
    pub fn from_corner(m: &MonomialManifold, p: &CornerId, lambda: ExponentVector) -> Result<Self> {
        if lambda.index_set() != *m.index_set(p)? {
            return Err(structural(format!("exponent {lambda} is not over I_{p}")));
        }
        if !lambda.is_nonnegative() {
            return Err(not_effective(p, &lambda));
        }
        let mut data = BTreeMap::new();
        for q in m.corner_ids() {
            let v = if q == p {
                lambda.clone()
            } else {
                lambda.apply(&m.change_matrix(q, p)?)?
            };
            if !v.is_nonnegative() {
                return Err(not_effective(q, &v));
            }
            data.insert(q.clone(), v);
        }
        Ok(MFunction { data })
    }

    /// Takes an explicit family and checks it against the atlas.
    pub fn from_data(m: &MonomialManifold, data: BTreeMap<CornerId, ExponentVector>) -> Result<Self> {
        let f = MFunction { data };
        if !f.is_consistent(m) {
            return Err(structural("exponent family is not an m-function on this manifold"));
        }
        Ok(f)
    }

    pub fn at(&self, p: &CornerId) -> Result<&ExponentVector> {
        self.data
            .get(p)
            .ok_or_else(|| structural(format!("m-function has no data at {p}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CornerId, &ExponentVector)> {
        self.data.iter()
    }

    /// Total on the corners of `m`, nonnegative, and `λ_p = λ_q C^{pq}` on
    /// every edge.
    pub fn is_consistent(&self, m: &MonomialManifold) -> bool {
        let total = self.data.len() == m.corner_count()
            && m.corners().all(|c| {
                self.data
                    .get(&c.id)
                    .is_some_and(|v| v.index_set() == c.index_set && v.is_nonnegative())
            });
        total
            && m.edges().all(|e| {
                self.data[&e.to]
                    .apply(&e.forward)
                    .is_ok_and(|v| v == self.data[&e.from])
            })
    }

    /// `λ'_{p'} = λ_p B_{p'}` at every corner of the blown-up manifold.
    pub fn pullback(&self, step: &BlowupStep) -> Result<MFunction> {
        let mut data = BTreeMap::new();
        for p_new in step.after.corner_ids() {
            let v = pullback_vector(self.at(step.parent(p_new)?)?, step, p_new)?;
            data.insert(p_new.clone(), v);
        }
        Ok(MFunction { data })
    }
}

/// An ideal generated by finitely many m-functions over one manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MIdeal {
    generators: Vec<MFunction>,
}

impl MIdeal {
    pub fn new(generators: Vec<MFunction>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::ZeroSeries);
        }
        let corners: BTreeSet<&CornerId> = generators[0].data.keys().collect();
        if generators.iter().any(|g| g.data.keys().collect::<BTreeSet<_>>() != corners) {
            return Err(structural("generators live on different manifolds"));
        }
        Ok(MIdeal { generators })
    }

    /// Generators given by their exponents at one corner.
    pub fn from_corner(m: &MonomialManifold, p: &CornerId, exponents: impl IntoIterator<Item = ExponentVector>) -> Result<Self> {
        let generators = exponents
            .into_iter()
            .map(|v| MFunction::from_corner(m, p, v))
            .collect::<Result<Vec<_>>>()?;
        MIdeal::new(generators)
    }

    pub fn generators(&self) -> &[MFunction] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn pullback(&self, step: &BlowupStep) -> Result<MIdeal> {
        Ok(MIdeal {
            generators: self.generators.iter().map(|g| g.pullback(step)).collect::<Result<_>>()?,
        })
    }

    /// `(Γ_p)^min`: the minimal generator exponents at `p`.
    pub fn local_min_data(&self, p: &CornerId) -> Result<Vec<ExponentVector>> {
        let at_p = self.generators.iter().map(|g| g.at(p)).collect::<Result<Vec<_>>>()?;
        minimal_elements(at_p)
    }

    pub fn corner_ids(&self) -> impl Iterator<Item = &CornerId> {
        self.generators[0].data.keys()
    }

    /// Whether one generator divides all the others at every corner.
    pub fn is_locally_principal(&self) -> bool {
        self.corner_ids()
            .all(|p| self.local_min_data(p).is_ok_and(|min| min.len() == 1))
    }
}

fn differences(lambda: &MFunction, mu: &MFunction, p: &CornerId, center: &CenterPair) -> Result<(Rat, Rat)> {
    let (l, m) = (lambda.at(p)?, mu.at(p)?);
    let diff = |label: &Label| -> Result<Rat> {
        match (l.get(label), m.get(label)) {
            (Some(a), Some(b)) => Ok(a - b),
            _ => Err(structural(format!("corner {p} does not lie on E_{label}"))),
        }
    };
    Ok((diff(&center.0)?, diff(&center.1)?))
}

/// The sign test `(λ_i − μ_i)(λ_j − μ_j) < 0` evaluated at corner `p`.
pub fn is_uncoupled_at(lambda: &MFunction, mu: &MFunction, p: &CornerId, center: &CenterPair) -> Result<bool> {
    let (di, dj) = differences(lambda, mu, p, center)?;
    Ok((di * dj).is_negative())
}

/// `Ω`: the centers uncoupled for the pair, each tested at its smallest-id
/// corner.
pub fn uncoupled_centers(lambda: &MFunction, mu: &MFunction, m: &MonomialManifold) -> Result<BTreeSet<CenterPair>> {
    // Corners come in id order, so the first corner met on a center is its
    // smallest-id corner.
    let mut seen = BTreeSet::new();
    let mut out = BTreeSet::new();
    for c in m.corners() {
        let labels: Vec<&Label> = c.index_set.iter().collect();
        for (k, a) in labels.iter().enumerate() {
            for b in &labels[k + 1..] {
                let center = ((*a).clone(), (*b).clone());
                if seen.insert(center.clone()) && is_uncoupled_at(lambda, mu, &c.id, &center)? {
                    out.insert(center);
                }
            }
        }
    }
    Ok(out)
}

/// A pair of generators with its cached uncoupled set.
#[derive(Clone, Debug)]
pub struct PairState {
    pub lambda: MFunction,
    pub mu: MFunction,
    omega: BTreeSet<CenterPair>,
}

impl PairState {
    pub fn new(m: &MonomialManifold, lambda: MFunction, mu: MFunction) -> Result<Self> {
        let omega = uncoupled_centers(&lambda, &mu, m)?;
        Ok(PairState { lambda, mu, omega })
    }

    pub fn omega(&self) -> &BTreeSet<CenterPair> {
        &self.omega
    }

    /// `Inv = #Ω`.
    pub fn inv(&self) -> usize {
        self.omega.len()
    }

    /// Pulls both generators back and recomputes `Ω`.
    pub fn pullback(&self, step: &BlowupStep) -> Result<PairState> {
        PairState::new(&step.after, self.lambda.pullback(step)?, self.mu.pullback(step)?)
    }
}

/// The adaptedness defect `α_j(λ_i − μ_i) + α_i(λ_j − μ_j)` at `p`.
fn adaptedness_defect(lambda: &MFunction, mu: &MFunction, alpha: &ExponentVector, p: &CornerId, center: &CenterPair) -> Result<Rat> {
    let (di, dj) = differences(lambda, mu, p, center)?;
    Ok(&alpha[&center.1] * di + &alpha[&center.0] * dj)
}

/// A global standardization adapted to the pair along an uncoupled center:
/// at the smallest-id corner on the center, `α_i = |λ_i − μ_i|`,
/// `α_j = |λ_j − μ_j|` and every other entry 1, extended with unit free
/// parameters.
pub fn adapted_standardization(
    m: &MonomialManifold,
    lambda: &MFunction,
    mu: &MFunction,
    center: &CenterPair,
) -> Result<GlobalStandardization> {
    let corners = m.corners_on_center(center);
    let p = *corners
        .first()
        .ok_or_else(|| domain(format!("center {{{}, {}}} is not realized", center.0, center.1)))?;
    let (di, dj) = differences(lambda, mu, p, center)?;
    if !(&di * &dj).is_negative() {
        return Err(domain(format!("center {{{}, {}}} is not uncoupled", center.0, center.1)));
    }
    let alpha = ExponentVector::new(m.index_set(p)?.iter().map(|l| {
        let v = if *l == center.0 {
            di.abs()
        } else if *l == center.1 {
            dj.abs()
        } else {
            Rat::one()
        };
        (l.clone(), v)
    }))?;
    let lambda_global = extend_with_unit_parameters(m, &LocalStandardization::new(p.clone(), alpha)?)?;
    for q in corners {
        let a = lambda_global.alpha(q).expect("extension is total");
        if !adaptedness_defect(lambda, mu, a, q, center)?.is_zero() {
            return Err(Error::AlgorithmInvariantViolation {
                message: format!("standardization is not adapted at {q}"),
                trace: None,
            });
        }
    }
    Ok(lambda_global)
}

#[derive(Clone, Debug)]
pub struct PrincipalizeOptions {
    /// Maximum number of blow-ups before giving up.
    pub max_steps: usize,
}

impl Default for PrincipalizeOptions {
    fn default() -> Self {
        PrincipalizeOptions { max_steps: 10_000 }
    }
}

/// What happened at one blow-up of the loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    /// Generator indices of the pair being separated.
    pub pair: (usize, usize),
    pub center: CenterPair,
    pub inv_before: usize,
    pub inv_after: usize,
    /// Uncoupled centers inside the new exceptional component for pairs
    /// other than `pair`.
    pub new_uncoupled_other_pairs: usize,
}

#[derive(Clone, Debug)]
pub struct Principalization {
    pub star: Star,
    /// The ideal pulled back to the end of the star.
    pub ideal: MIdeal,
    pub records: Vec<StepRecord>,
    /// Each processed pair with its Inv when processing started.
    pub pair_invariants: Vec<((usize, usize), usize)>,
}

fn first_uncoupled_pair(m: &MonomialManifold, ideal: &MIdeal) -> Result<Option<((usize, usize), BTreeSet<CenterPair>)>> {
    let g = ideal.generators();
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            let omega = uncoupled_centers(&g[a], &g[b], m)?;
            if !omega.is_empty() {
                return Ok(Some(((a, b), omega)));
            }
        }
    }
    Ok(None)
}

fn new_uncoupled_elsewhere(m: &MonomialManifold, ideal: &MIdeal, pair: (usize, usize), new_label: &Label) -> Result<usize> {
    let g = ideal.generators();
    let mut count = 0;
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            if (a, b) == pair {
                continue;
            }
            count += uncoupled_centers(&g[a], &g[b], m)?
                .iter()
                .filter(|c| c.0 == *new_label || c.1 == *new_label)
                .count();
        }
    }
    Ok(count)
}

/// Makes `ideal` locally principal by adapted blow-ups. Pairs of generators
/// are scanned in lexicographic order; the first uncoupled pair is separated
/// completely (smallest uncoupled center first) and the scan restarts.
pub fn principalize(root: Arc<MonomialManifold>, ideal: MIdeal, options: &PrincipalizeOptions) -> Result<Principalization> {
    let mut star = Star::new(root);
    let mut ideal = ideal;
    let mut records = Vec::new();
    let mut pair_invariants = Vec::new();
    while let Some((pair, mut omega)) = first_uncoupled_pair(star.end(), &ideal)? {
        pair_invariants.push((pair, omega.len()));
        while let Some(center) = omega.first().cloned() {
            if star.age() >= options.max_steps {
                return Err(Error::BudgetExceeded {
                    budget: options.max_steps,
                    trace: Box::new(star),
                });
            }
            let m = Arc::clone(star.end());
            let (lambda, mu) = (&ideal.generators()[pair.0], &ideal.generators()[pair.1]);
            let lambda_global = adapted_standardization(&m, lambda, mu, &center)?;
            let xi = BlowupCenter::new(&m, center.0.clone(), center.1.clone(), lambda_global)?;
            let step = star.blow_up(&xi)?;
            ideal = ideal.pullback(step)?;
            let after = Arc::clone(&step.after);
            let new_label = step.new_label.clone();
            let next = uncoupled_centers(&ideal.generators()[pair.0], &ideal.generators()[pair.1], &after)?;
            if next.len() + 1 != omega.len() {
                return Err(Error::AlgorithmInvariantViolation {
                    message: format!(
                        "Inv went from {} to {} after blowing up {{{}, {}}}",
                        omega.len(),
                        next.len(),
                        center.0,
                        center.1
                    ),
                    trace: Some(Box::new(star)),
                });
            }
            records.push(StepRecord {
                pair,
                center,
                inv_before: omega.len(),
                inv_after: next.len(),
                new_uncoupled_other_pairs: new_uncoupled_elsewhere(&after, &ideal, pair, &new_label)?,
            });
            omega = next;
        }
    }
    Ok(Principalization {
        star,
        ideal,
        records,
        pair_invariants,
    })
}

/// [`principalize`] for a two-generator ideal `(λ, μ)`.
pub fn principalize_pair(root: Arc<MonomialManifold>, lambda: MFunction, mu: MFunction) -> Result<Principalization> {
    principalize(root, MIdeal::new(vec![lambda, mu])?, &PrincipalizeOptions::default())
}
