//! Versioned, byte-stable JSON traces of a principalization and their exact
//! replay.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{center_annotation, final_corners, FinalCorner, ReductionReport};
use crate::blowup::{BlowupCenter, BlowupStep, Star};
use crate::error::{structural, Error, Result};
use crate::kernel::{CornerId, ExponentMatrix, ExponentVector, Label, MatrixJson, Rat};
use crate::manifold::{ManifoldJson, MonomialManifold};
use crate::mideal::{MIdeal, Principalization};
use crate::standardization::{GlobalStandardization, LocalStandardizationJson};

pub const TRACE_SCHEMA: &str = "monores-trace/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsJson {
    pub corner: CornerId,
    /// One row per generator, in the corner's label order.
    pub exponents: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub center: Vec<Label>,
    pub alpha_at_centers: BTreeMap<CornerId, BTreeMap<Label, Rat>>,
    pub standardization: Vec<LocalStandardizationJson>,
    pub new_label: Label,
    #[serde(rename = "B")]
    pub morphisms: BTreeMap<CornerId, MatrixJson>,
    pub parents: BTreeMap<CornerId, CornerId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalCornerJson {
    pub id: CornerId,
    pub index_set: Vec<Label>,
    pub principal_exponent: Vec<Rat>,
    pub all_generator_exponents: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterJson {
    pub step: usize,
    pub pair: Vec<Label>,
    pub annotation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairInvariantJson {
    pub pair: [usize; 2],
    pub inv: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCheckJson {
    pub samples: usize,
    pub seed: u64,
    pub max_relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub age: usize,
    pub corners: usize,
    pub stratum_dim: usize,
    pub centers: Vec<CenterJson>,
    pub pair_invariants: Vec<PairInvariantJson>,
    pub new_uncoupled_other_pairs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_check: Option<NumericCheckJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub schema: String,
    pub root: ManifoldJson,
    pub generators: GeneratorsJson,
    pub steps: Vec<StepJson>,
    pub final_corners: Vec<FinalCornerJson>,
    pub end_manifold: ManifoldJson,
    pub report: ReportJson,
}

fn values(v: &ExponentVector) -> Vec<Rat> {
    v.values().cloned().collect()
}

fn step_json(step: &BlowupStep) -> StepJson {
    let lambda = step.center.standardization();
    let alpha_at_centers = step
        .before
        .corners_on_center(step.center.pair())
        .into_iter()
        .map(|p| (p.clone(), lambda.alpha(p).expect("total standardization").clone().into_map()))
        .collect();
    let (i, j) = step.center.pair();
    StepJson {
        center: vec![i.clone(), j.clone()],
        alpha_at_centers,
        standardization: lambda.to_json(),
        new_label: step.new_label.clone(),
        morphisms: step.morphisms.iter().map(|(k, b)| (k.clone(), MatrixJson::from(b))).collect(),
        parents: step.parents.clone(),
    }
}

fn final_corner_json(c: &FinalCorner) -> FinalCornerJson {
    FinalCornerJson {
        id: c.id.clone(),
        index_set: c.index_set.iter().cloned().collect(),
        principal_exponent: values(&c.principal_exponent),
        all_generator_exponents: c.generator_exponents.iter().map(values).collect(),
    }
}

impl TraceJson {
    /// Trace of a principalization started from `root_exponents` at
    /// `root_corner` of the star's root.
    pub fn from_principalization(
        run: &Principalization,
        root_corner: &CornerId,
        root_exponents: &[ExponentVector],
        stratum_dim: usize,
    ) -> Result<Self> {
        let star = &run.star;
        let annotation = center_annotation(stratum_dim);
        let report = ReportJson {
            age: star.age(),
            corners: star.end().corner_count(),
            stratum_dim,
            centers: run
                .records
                .iter()
                .enumerate()
                .map(|(k, r)| CenterJson {
                    step: k + 1,
                    pair: vec![r.center.0.clone(), r.center.1.clone()],
                    annotation: annotation.clone(),
                })
                .collect(),
            pair_invariants: run
                .pair_invariants
                .iter()
                .map(|((a, b), inv)| PairInvariantJson { pair: [*a, *b], inv: *inv })
                .collect(),
            new_uncoupled_other_pairs: run.records.iter().map(|r| r.new_uncoupled_other_pairs).sum(),
            numeric_check: None,
        };
        Ok(TraceJson {
            schema: TRACE_SCHEMA.to_string(),
            root: star.root().to_json(),
            generators: GeneratorsJson {
                corner: root_corner.clone(),
                exponents: root_exponents.iter().map(values).collect(),
            },
            steps: star.steps().iter().map(step_json).collect(),
            final_corners: final_corners(run)?.iter().map(final_corner_json).collect(),
            end_manifold: star.end().to_json(),
            report,
        })
    }

    pub fn from_reduction(report: &ReductionReport) -> Result<Self> {
        let root = report.star().root();
        let corner = root
            .corner_with_index_set(report.problem.support().variables())
            .ok_or_else(|| structural("root corner not found"))?;
        let delta0: Vec<ExponentVector> = crate::gps::minimal_support(report.problem.support())
            .points()
            .iter()
            .cloned()
            .collect();
        Self::from_principalization(&report.run, corner, &delta0, report.problem.stratum_dim())
    }

    pub fn with_numeric_check(mut self, samples: usize, seed: u64, max_relative_error: f64) -> Self {
        self.report.numeric_check = Some(NumericCheckJson {
            samples,
            seed,
            max_relative_error,
        });
        self
    }

    /// Pretty-printed JSON with a trailing newline. Field order is fixed by
    /// the struct layout and all maps are sorted, so equal traces give equal
    /// bytes.
    pub fn to_canonical_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(TRACE_SCHEMA) => Ok(serde_json::from_value(value)?),
            Some(other) => Err(Error::Parse(format!("unsupported trace schema {other:?}"))),
            None => Err(Error::Parse("trace has no schema field".into())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReplayOutcome {
    pub star: Star,
    pub ideal: MIdeal,
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::ReplayMismatch(msg.into())
}

/// Re-executes every recorded blow-up from the root and checks that new
/// labels, parents, morphism matrices, final corner data and the end
/// manifold all reproduce exactly.
pub fn replay(trace: &TraceJson) -> Result<ReplayOutcome> {
    if trace.schema != TRACE_SCHEMA {
        return Err(Error::Parse(format!("unsupported trace schema {:?}", trace.schema)));
    }
    let root = Arc::new(MonomialManifold::try_from(&trace.root)?);
    let root_labels: Vec<Label> = root.index_set(&trace.generators.corner)?.iter().cloned().collect();
    let exponents = trace
        .generators
        .exponents
        .iter()
        .map(|row| ExponentVector::from_values(&root_labels, row))
        .collect::<Result<Vec<_>>>()?;
    let mut ideal = MIdeal::from_corner(&root, &trace.generators.corner, exponents)?;
    let mut star = Star::new(Arc::clone(&root));
    for (k, recorded) in trace.steps.iter().enumerate() {
        let n = k + 1;
        let [i, j] = recorded.center.as_slice() else {
            return Err(mismatch(format!("step {n}: center must have two labels")));
        };
        let lambda = GlobalStandardization::from_json(&recorded.standardization)?;
        for (p, alpha) in &recorded.alpha_at_centers {
            if lambda.alpha(p).map(|a| a.clone().into_map()).as_ref() != Some(alpha) {
                return Err(mismatch(format!("step {n}: alpha at {p} disagrees with the standardization")));
            }
        }
        let center = BlowupCenter::new(star.end(), i.clone(), j.clone(), lambda)?;
        let step = star.blow_up(&center)?;
        if step.new_label != recorded.new_label {
            return Err(mismatch(format!("step {n}: new label {} instead of {}", step.new_label, recorded.new_label)));
        }
        if step.parents != recorded.parents {
            return Err(mismatch(format!("step {n}: corner parents differ")));
        }
        let morphisms = recorded
            .morphisms
            .iter()
            .map(|(p, b)| Ok((p.clone(), ExponentMatrix::try_from(b)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        if step.morphisms != morphisms {
            return Err(mismatch(format!("step {n}: morphism matrices differ")));
        }
        ideal = ideal.pullback(step)?;
    }
    let run = Principalization {
        star,
        ideal,
        records: Vec::new(),
        pair_invariants: Vec::new(),
    };
    let finals: Vec<FinalCornerJson> = final_corners(&run)?.iter().map(final_corner_json).collect();
    if finals != trace.final_corners {
        return Err(mismatch("final corner data differ"));
    }
    let recorded_end = MonomialManifold::try_from(&trace.end_manifold)?;
    if !run.star.end().is_isomorphic_to(&recorded_end) {
        return Err(mismatch("end manifold differs from the recorded one"));
    }
    Ok(ReplayOutcome {
        star: run.star,
        ideal: run.ideal,
    })
}
