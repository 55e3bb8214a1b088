//! Finite-support combinatorics of generalized power series.
//!
//! A series `Σ X^λ U_λ(X)` is only ever handled through its (finite) set of
//! exponents; the units `U_λ` are opaque and never expanded.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::kernel::{minimal_elements, ExponentMatrix, ExponentVector, Label, Rat};

/// A finite set of nonnegative exponent vectors over a common variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    variables: BTreeSet<Label>,
    points: BTreeSet<ExponentVector>,
    minimal: bool,
}

impl SupportSet {
    pub fn new(
        variables: impl IntoIterator<Item = Label>,
        points: impl IntoIterator<Item = ExponentVector>,
    ) -> Result<Self> {
        let variables: BTreeSet<Label> = variables.into_iter().collect();
        let points: BTreeSet<ExponentVector> = points.into_iter().collect();
        for p in &points {
            if p.index_set() != variables {
                return Err(structural(format!(
                    "support point {p} is not over the variables {variables:?}"
                )));
            }
            if !p.is_nonnegative() {
                return Err(domain(format!("support point {p} has a negative exponent")));
            }
        }
        let minimal = is_antichain(&points);
        Ok(SupportSet { variables, points, minimal })
    }

    /// Builds a support from string rows, one row per point in variable order.
    pub fn parse(variables: &[&str], points: &[&[&str]]) -> Result<Self> {
        let labels: Vec<Label> = variables.iter().map(|s| Label::from(*s)).collect();
        let pts = points
            .iter()
            .map(|row| ExponentVector::parse(variables, row))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, pts)
    }

    pub fn variables(&self) -> &BTreeSet<Label> {
        &self.variables
    }

    pub fn points(&self) -> &BTreeSet<ExponentVector> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when the points are pairwise `≤_d`-incomparable.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }
}

fn is_antichain(points: &BTreeSet<ExponentVector>) -> bool {
    points.iter().all(|a| {
        points
            .iter()
            .all(|b| a == b || !a.values().zip(b.values()).all(|(x, y)| x <= y))
    })
}

/// `Supp_min`: the `≤_d`-minimal points, flagged minimal.
pub fn minimal_support(support: &SupportSet) -> SupportSet {
    let points = minimal_elements(&support.points).expect("support points share one index set");
    SupportSet {
        variables: support.variables.clone(),
        points: points.into_iter().collect(),
        minimal: true,
    }
}

/// `m(s) = #Supp_min(s)`; a series is of monomial type iff this is 1.
pub fn monomial_complexity(support: &SupportSet) -> Result<usize> {
    if support.is_empty() {
        return Err(Error::ZeroSeries);
    }
    Ok(minimal_support(support).len())
}

/// Forgets the coordinates outside `keep`. Duplicates collapse.
pub fn project_support(support: &SupportSet, keep: &BTreeSet<Label>) -> Result<SupportSet> {
    if !keep.is_subset(&support.variables) {
        return Err(structural(format!(
            "projection labels {keep:?} are not a subset of {:?}",
            support.variables
        )));
    }
    let points = support
        .points
        .iter()
        .map(|p| p.restrict(keep))
        .collect::<Result<Vec<_>>>()?;
    let projected = SupportSet::new(keep.iter().cloned(), points)?;
    if !support.is_empty() {
        let before = monomial_complexity(support)?;
        let after = monomial_complexity(&projected)?;
        if after > before {
            return Err(Error::AlgorithmInvariantViolation {
                message: format!("projection raised monomial complexity from {before} to {after}"),
                trace: None,
            });
        }
    }
    Ok(projected)
}

/// Entrywise rescaling `λ ↦ (γ_1 λ_1, …, γ_e λ_e)` by a positive vector.
pub fn rescale_support(support: &SupportSet, gamma: &ExponentVector) -> Result<SupportSet> {
    if gamma.index_set() != support.variables {
        return Err(structural("rescaling vector is not over the support variables"));
    }
    if !gamma.is_positive() {
        return Err(domain(format!("rescaling vector {gamma} is not strictly positive")));
    }
    let points = support
        .points
        .iter()
        .map(|p| p.hadamard(gamma))
        .collect::<Result<Vec<_>>>()?;
    let mut out = SupportSet::new(support.variables.iter().cloned(), points)?;
    out.minimal = support.minimal || out.minimal;
    Ok(out)
}

/// Transforms every point by `λ ↦ λB`, optionally keeping only the minimal
/// image points.
pub fn pullback_support(support: &SupportSet, matrix: &ExponentMatrix, minimize: bool) -> Result<SupportSet> {
    if matrix.row_set() != support.variables {
        return Err(structural(format!(
            "matrix rows {:?} do not match support variables {:?}",
            matrix.row_labels(),
            support.variables
        )));
    }
    if !matrix.is_nonnegative() {
        return Err(domain("pullback matrix has a negative entry"));
    }
    let images = support
        .points
        .iter()
        .map(|p| p.apply(matrix))
        .collect::<Result<Vec<_>>>()?;
    let image = SupportSet::new(matrix.col_labels().iter().cloned(), images)?;
    Ok(if minimize { minimal_support(&image) } else { image })
}

/// A finitely presented series `Σ X^λ U_λ`: its support plus an opaque tag per
/// point standing for the unit `U_λ` (which never vanishes at the origin).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSeries {
    support: SupportSet,
    unit_tags: BTreeMap<ExponentVector, String>,
    unit_values: Option<BTreeMap<ExponentVector, f64>>,
}

impl FiniteSeries {
    /// Every support point gets the tag `U<k>` in sorted point order.
    pub fn new(support: SupportSet) -> Self {
        let unit_tags = support
            .points
            .iter()
            .enumerate()
            .map(|(k, p)| (p.clone(), format!("U{k}")))
            .collect();
        FiniteSeries {
            support,
            unit_tags,
            unit_values: None,
        }
    }

    /// Attaches the values `U_λ(0)` used for numeric sampling; they must be
    /// nonzero and cover every point.
    pub fn with_unit_values(mut self, values: BTreeMap<ExponentVector, f64>) -> Result<Self> {
        if values.keys().ne(self.support.points.iter()) {
            return Err(structural("unit values must cover exactly the support points"));
        }
        if values.values().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(domain("a unit must not vanish at the origin"));
        }
        self.unit_values = Some(values);
        Ok(self)
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn unit_tag(&self, point: &ExponentVector) -> Option<&str> {
        self.unit_tags.get(point).map(String::as_str)
    }

    pub fn minimal_support(&self) -> SupportSet {
        minimal_support(&self.support)
    }

    pub fn monomial_complexity(&self) -> Result<usize> {
        monomial_complexity(&self.support)
    }

    pub fn is_monomial_type(&self) -> Result<bool> {
        Ok(self.monomial_complexity()? == 1)
    }

    /// `Σ U_λ(0) x^λ` at a positive point, with units frozen at their
    /// value at the origin.
    pub fn sample(&self, point: &BTreeMap<Label, f64>) -> Option<f64> {
        let units = self.unit_values.as_ref()?;
        let mut total = 0.0;
        for (lam, u) in units {
            let mut log = 0.0;
            for (label, e) in lam.iter() {
                log += e.to_f64() * point.get(label)?.ln();
            }
            total += u * log.exp();
        }
        Some(total)
    }
}

/// JSON form `{"variables": [...], "points": [["3","0"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSetJson {
    pub variables: Vec<Label>,
    pub points: Vec<Vec<Rat>>,
}

impl From<&SupportSet> for SupportSetJson {
    fn from(s: &SupportSet) -> Self {
        SupportSetJson {
            variables: s.variables.iter().cloned().collect(),
            points: s.points.iter().map(|p| p.values().cloned().collect()).collect(),
        }
    }
}

impl TryFrom<SupportSetJson> for SupportSet {
    type Error = Error;

    fn try_from(json: SupportSetJson) -> Result<Self> {
        let distinct: BTreeSet<&Label> = json.variables.iter().collect();
        if distinct.len() != json.variables.len() {
            return Err(structural("duplicate variable names"));
        }
        let points = json
            .points
            .iter()
            .map(|row| ExponentVector::from_values(&json.variables, row))
            .collect::<Result<Vec<_>>>()?;
        SupportSet::new(json.variables, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(points: &[&[&str]]) -> SupportSet {
        let n = points.first().map_or(2, |p| p.len());
        let vars: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        SupportSet::parse(&vars, points).unwrap()
    }

    fn keep(labels: &[&str]) -> BTreeSet<Label> {
        labels.iter().map(|s| Label::from(*s)).collect()
    }

    #[test]
    fn minimal_support_examples() {
        let got = minimal_support(&s(&[&["3", "0"], &["0", "2"], &["3", "2"]]));
        assert_eq!(got, minimal_support(&s(&[&["3", "0"], &["0", "2"]])));
        assert!(got.is_minimal());
        assert_eq!(got.len(), 2);
        assert_eq!(minimal_support(&s(&[&["1", "1"]])).len(), 1);
        let unit = minimal_support(&s(&[&["0", "0"], &["5", "7"]]));
        assert_eq!(unit, minimal_support(&s(&[&["0", "0"]])));
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(monomial_complexity(&s(&[&["3", "0"], &["0", "2"]])).unwrap(), 2);
        assert_eq!(monomial_complexity(&s(&[&["1", "1"]])).unwrap(), 1);
        assert_eq!(
            monomial_complexity(&s(&[&["2", "1"], &["0", "2"], &["2", "3"]])).unwrap(),
            2
        );
        let empty = SupportSet::new(keep(&["z1"]), []).unwrap();
        assert!(matches!(monomial_complexity(&empty), Err(Error::ZeroSeries)));
    }

    #[test]
    fn projection_examples() {
        let sup = s(&[&["3", "0"], &["0", "2"]]);
        let proj = project_support(&sup, &keep(&["z2"])).unwrap();
        assert_eq!(proj, SupportSet::parse(&["z2"], &[&["0"], &["2"]]).unwrap());
        assert_eq!(minimal_support(&proj), SupportSet::parse(&["z2"], &[&["0"]]).unwrap());
        assert_eq!(monomial_complexity(&proj).unwrap(), 1);

        assert_eq!(project_support(&sup, &keep(&["z1", "z2"])).unwrap(), sup);

        let dup = project_support(&s(&[&["1", "1"], &["1", "2"]]), &keep(&["z1"])).unwrap();
        assert_eq!(dup.len(), 1);
        assert!(project_support(&sup, &keep(&["w"])).is_err());
    }

    #[test]
    fn rescale_examples() {
        let sup = s(&[&["2", "1"], &["0", "2"]]);
        let gamma = ExponentVector::parse(&["z1", "z2"], &["1/2", "3"]).unwrap();
        let out = rescale_support(&sup, &gamma).unwrap();
        assert_eq!(out, s(&[&["1", "3"], &["0", "6"]]));
        assert!(out.is_minimal());
        let ones = ExponentVector::ones(sup.variables());
        assert_eq!(rescale_support(&sup, &ones).unwrap(), sup);
        let bad = ExponentVector::parse(&["z1", "z2"], &["0", "1"]).unwrap();
        assert!(matches!(rescale_support(&sup, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn pullback_examples() {
        let b = ExponentMatrix::parse(&["z1", "z2"], &["z1", "E∞1"], &[&["1", "1/2"], &["0", "1"]]).unwrap();
        let sup = s(&[&["2", "1"], &["0", "2"]]);
        let full = pullback_support(&sup, &b, false).unwrap();
        let expect = SupportSet::parse(&["z1", "E∞1"], &[&["2", "2"], &["0", "2"]]).unwrap();
        assert_eq!(full, expect);
        let min = pullback_support(&sup, &b, true).unwrap();
        assert_eq!(min, SupportSet::parse(&["z1", "E∞1"], &[&["0", "2"]]).unwrap());

        let id = ExponentMatrix::identity(sup.variables());
        assert_eq!(pullback_support(&sup, &id, false).unwrap(), sup);

        let b2 = ExponentMatrix::parse(&["z1", "z2"], &["z1", "z2"], &[&["1", "2/3"], &["0", "1"]]).unwrap();
        let out = pullback_support(&s(&[&["3", "0"], &["0", "2"]]), &b2, false).unwrap();
        assert_eq!(out, s(&[&["3", "2"], &["0", "2"]]));
        assert_eq!(minimal_support(&out), s(&[&["0", "2"]]));
    }

    #[test]
    fn json_round_trip() {
        let sup = s(&[&["3", "0"], &["0", "2"]]);
        let text = serde_json::to_string(&SupportSetJson::from(&sup)).unwrap();
        assert_eq!(text, r#"{"variables":["z1","z2"],"points":[["0","2"],["3","0"]]}"#);
        let back: SupportSet = serde_json::from_str::<SupportSetJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, sup);
    }

    #[test]
    fn series_sampling_uses_frozen_units() {
        let sup = s(&[&["1", "0"], &["0", "2"]]);
        let series = FiniteSeries::new(sup.clone());
        assert_eq!(series.monomial_complexity().unwrap(), 2);
        assert!(series.unit_tag(sup.points().iter().next().unwrap()).is_some());
        let values = sup.points().iter().map(|p| (p.clone(), 2.0)).collect();
        let series = series.with_unit_values(values).unwrap();
        let x: BTreeMap<Label, f64> = [("z1".into(), 0.5), ("z2".into(), 0.5)].into_iter().collect();
        let got = series.sample(&x).unwrap();
        assert!((got - (2.0 * 0.5 + 2.0 * 0.25)).abs() < 1e-12);
    }
}
