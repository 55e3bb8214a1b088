//! The end-to-end reduction driver: from a finite minimal support to a star
//! over the root corner after which the support is a single monomial at
//! every corner.

mod dot;
mod oracle;
mod trace;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::blowup::{compose_star, Star};
use crate::error::{structural, Error, Result};
use crate::gps::{minimal_support, pullback_support, SupportSet, SupportSetJson};
use crate::kernel::{CornerId, ExponentVector, Label};
use crate::manifold::{CenterPair, MonomialManifold};
use crate::mideal::{principalize, MIdeal, MFunction, Principalization, PrincipalizeOptions};

pub use dot::{export_manifold_dot, export_star_dot};
pub use oracle::numeric_oracle;
pub use trace::{
    replay, FinalCornerJson, PairInvariantJson, ReplayOutcome, ReportJson, StepJson, TraceJson, NumericCheckJson,
    TRACE_SCHEMA,
};

/// A minimal support `Δ₀` in `e` generalized variables, plus the number `k`
/// of ordinary analytic coordinates of the ambient stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionProblem {
    support: SupportSet,
    stratum_dim: usize,
}

impl ReductionProblem {
    pub fn new(support: SupportSet, stratum_dim: usize) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::ZeroSeries);
        }
        if support.variables().is_empty() {
            return Err(structural("a support needs at least one variable"));
        }
        Ok(ReductionProblem { support, stratum_dim })
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn stratum_dim(&self) -> usize {
        self.stratum_dim
    }

    /// The root m-corner `𝔾_e` with the support's variables as labels.
    pub fn root(&self) -> Result<MonomialManifold> {
        MonomialManifold::make_corner(self.support.variables().len(), self.support.variables().iter().cloned())
    }
}

/// Problem file: either `{"support": {...}, "stratum_dim": k}` or a bare
/// support.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemJson {
    Full {
        support: SupportSetJson,
        #[serde(default)]
        stratum_dim: usize,
    },
    Bare(SupportSetJson),
}

impl ProblemJson {
    pub fn into_problem(self, stratum_dim_override: Option<usize>) -> Result<ReductionProblem> {
        let (support, k) = match self {
            ProblemJson::Full { support, stratum_dim } => (support, stratum_dim),
            ProblemJson::Bare(support) => (support, 0),
        };
        ReductionProblem::new(support.try_into()?, stratum_dim_override.unwrap_or(k))
    }
}

/// Ideal file: generators given by their exponents at the root corner, in
/// label order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealProblemJson {
    pub dimension: usize,
    pub labels: Vec<Label>,
    pub generators: Vec<Vec<crate::kernel::Rat>>,
}

impl IdealProblemJson {
    pub fn into_parts(self) -> Result<(MonomialManifold, Vec<ExponentVector>)> {
        let root = MonomialManifold::make_corner(self.dimension, self.labels.iter().cloned())?;
        let generators = self
            .generators
            .iter()
            .map(|g| ExponentVector::from_values(&self.labels, g))
            .collect::<Result<Vec<_>>>()?;
        Ok((root, generators))
    }
}

/// One generator per point of the minimal support, at the root corner.
pub fn build_ideal_from_support(support: &SupportSet, root: &MonomialManifold) -> Result<MIdeal> {
    if support.is_empty() {
        return Err(Error::ZeroSeries);
    }
    let p = root
        .corner_with_index_set(support.variables())
        .ok_or_else(|| structural("no corner of the root carries the support variables"))?;
    let minimal = minimal_support(support);
    let generators = minimal
        .points()
        .iter()
        .map(|v| MFunction::from_corner(root, p, v.clone()))
        .collect::<Result<Vec<_>>>()?;
    MIdeal::new(generators)
}

/// A blow-up center of the reduction, seen in the full stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedCenter {
    pub step: usize,
    pub pair: CenterPair,
    /// `Z̄`, or `ℝ^k × Z̄` when `k > 0`.
    pub annotation: String,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

pub fn center_annotation(stratum_dim: usize) -> String {
    match stratum_dim {
        0 => "Z̄".to_string(),
        1 => "ℝ × Z̄".to_string(),
        k => format!("ℝ{} × Z̄", superscript(k)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalCorner {
    pub id: CornerId,
    pub index_set: BTreeSet<Label>,
    /// The single minimal exponent of the pulled-back support.
    pub principal_exponent: ExponentVector,
    pub generator_exponents: Vec<ExponentVector>,
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub problem: ReductionProblem,
    pub run: Principalization,
    pub final_corners: Vec<FinalCorner>,
    pub centers: Vec<AnnotatedCenter>,
}

impl ReductionReport {
    pub fn star(&self) -> &Star {
        &self.run.star
    }

    pub fn age(&self) -> usize {
        self.run.star.age()
    }

    pub fn new_uncoupled_other_pairs(&self) -> usize {
        self.run.records.iter().map(|r| r.new_uncoupled_other_pairs).sum()
    }
}

fn invariant_violation(message: String, star: &Star) -> Error {
    Error::AlgorithmInvariantViolation {
        message,
        trace: Some(Box::new(star.clone())),
    }
}

/// Per-corner data at the end of a principalization, read from the
/// pulled-back ideal.
pub(crate) fn final_corners(run: &Principalization) -> Result<Vec<FinalCorner>> {
    let end = run.star.end();
    let mut out = Vec::with_capacity(end.corner_count());
    for c in end.corners() {
        let min = run.ideal.local_min_data(&c.id)?;
        let [principal] = min.as_slice() else {
            return Err(invariant_violation(
                format!("minimal generator data at {} has {} elements", c.id, min.len()),
                &run.star,
            ));
        };
        out.push(FinalCorner {
            id: c.id.clone(),
            index_set: c.index_set.clone(),
            principal_exponent: principal.clone(),
            generator_exponents: run
                .ideal
                .generators()
                .iter()
                .map(|g| g.at(&c.id).cloned())
                .collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

/// Builds the root corner and the ideal of `Δ₀`, principalizes it, and checks
/// at every final corner that the pulled-back support is a single monomial
/// agreeing with the pulled-back ideal.
pub fn reduce(problem: &ReductionProblem, options: &PrincipalizeOptions) -> Result<ReductionReport> {
    let root = Arc::new(problem.root()?);
    let ideal = build_ideal_from_support(&problem.support, &root)?;
    let run = principalize(Arc::clone(&root), ideal, options)?;
    let star = &run.star;

    let expected_age: usize = run.pair_invariants.iter().map(|(_, inv)| inv).sum();
    if expected_age != star.age() {
        return Err(invariant_violation(
            format!("age {} differs from the summed pair invariants {expected_age}", star.age()),
            star,
        ));
    }

    let delta0 = minimal_support(&problem.support);
    for p in star.end().corner_ids() {
        let pulled = pullback_support(&delta0, &compose_star(star, p)?, true)?;
        if pulled.len() != 1 {
            return Err(invariant_violation(
                format!("pulled-back support at {p} has {} minimal points", pulled.len()),
                star,
            ));
        }
        let from_ideal: BTreeSet<ExponentVector> = run.ideal.local_min_data(p)?.into_iter().collect();
        if from_ideal != *pulled.points() {
            return Err(invariant_violation(
                format!("pulled-back ideal and pulled-back support disagree at {p}"),
                star,
            ));
        }
    }

    let final_corners = final_corners(&run)?;
    let annotation = center_annotation(problem.stratum_dim);
    let centers = run
        .records
        .iter()
        .enumerate()
        .map(|(k, r)| AnnotatedCenter {
            step: k + 1,
            pair: r.center.clone(),
            annotation: annotation.clone(),
        })
        .collect();
    Ok(ReductionReport {
        problem: problem.clone(),
        run,
        final_corners,
        centers,
    })
}

/// Runs independent reductions on scoped threads; results come back in input
/// order.
pub fn reduce_batch(problems: &[ReductionProblem], options: &PrincipalizeOptions) -> Vec<Result<ReductionReport>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = problems
            .iter()
            .map(|p| scope.spawn(move || reduce(p, options)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("reduction thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support(vars: &[&str], pts: &[&[&str]]) -> SupportSet {
        SupportSet::parse(vars, pts).unwrap()
    }

    #[test]
    fn ideal_from_support_uses_minimal_points() {
        let s = support(&["z1", "z2"], &[&["1", "0"], &["2", "0"]]);
        let root = ReductionProblem::new(s.clone(), 0).unwrap().root().unwrap();
        assert_eq!(build_ideal_from_support(&s, &root).unwrap().len(), 1);
        let s2 = support(&["z1", "z2"], &[&["2", "1"], &["0", "2"]]);
        assert_eq!(build_ideal_from_support(&s2, &root).unwrap().len(), 2);
        let empty = support(&["z1", "z2"], &[]);
        assert!(matches!(ReductionProblem::new(empty, 0), Err(Error::ZeroSeries)));
    }

    #[test]
    fn worked_reduction() {
        let p = ReductionProblem::new(support(&["z1", "z2"], &[&["2", "1"], &["0", "2"]]), 0).unwrap();
        let report = reduce(&p, &PrincipalizeOptions::default()).unwrap();
        assert_eq!(report.age(), 1);
        let principal: BTreeSet<ExponentVector> = report.final_corners.iter().map(|c| c.principal_exponent.clone()).collect();
        let expected = BTreeSet::from([
            ExponentVector::parse(&["z1", "E∞1"], &["0", "2"]).unwrap(),
            ExponentVector::parse(&["z2", "E∞1"], &["1", "4"]).unwrap(),
        ]);
        assert_eq!(principal, expected);
        assert_eq!(report.centers[0].annotation, "Z̄");
    }

    #[test]
    fn monomial_input_needs_no_blow_up() {
        for k in [0, 3] {
            let p = ReductionProblem::new(support(&["z1", "z2"], &[&["1", "1"]]), k).unwrap();
            let report = reduce(&p, &PrincipalizeOptions::default()).unwrap();
            assert_eq!(report.age(), 0);
            assert_eq!(report.final_corners[0].principal_exponent, ExponentVector::parse(&["z1", "z2"], &["1", "1"]).unwrap());
        }
    }

    #[test]
    fn stratum_dimension_annotates_centers() {
        let p = ReductionProblem::new(support(&["z1", "z2", "z3"], &[&["1", "0", "0"], &["0", "1", "1"]]), 2).unwrap();
        let report = reduce(&p, &PrincipalizeOptions::default()).unwrap();
        assert_eq!(report.age(), 2);
        assert!(report.centers.iter().all(|c| c.annotation == "ℝ² × Z̄"));
        assert_eq!(center_annotation(12), "ℝ¹² × Z̄");
    }

    #[test]
    fn batch_matches_sequential() {
        let problems: Vec<_> = [&[&["2", "1"][..], &["0", "2"]][..], &[&["3", "0"], &["1", "1"], &["0", "3"]]]
            .iter()
            .map(|pts| ReductionProblem::new(support(&["z1", "z2"], pts), 0).unwrap())
            .collect();
        let batch = reduce_batch(&problems, &PrincipalizeOptions::default());
        for (p, r) in problems.iter().zip(batch) {
            let seq = reduce(p, &PrincipalizeOptions::default()).unwrap();
            assert_eq!(r.unwrap().final_corners, seq.final_corners);
        }
    }
}
