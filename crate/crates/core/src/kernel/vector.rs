use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Index;

use crate::error::{structural, Result};
use crate::kernel::{ExponentMatrix, Label, Rat};

/// A map from a finite set of component labels to exact rationals: a point of
/// `R^I` with no implied order on `I`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    entries: BTreeMap<Label, Rat>,
}

impl ExponentVector {
    /// Builds a vector from `(label, value)` pairs; repeated labels are an error.
    pub fn new(entries: impl IntoIterator<Item = (Label, Rat)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (label, value) in entries {
            if map.insert(label.clone(), value).is_some() {
                return Err(structural(format!("label {label} appears twice")));
            }
        }
        Ok(ExponentVector { entries: map })
    }

    /// Zips parallel label and value slices.
    pub fn from_values(labels: &[Label], values: &[Rat]) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(structural(format!(
                "{} labels but {} values",
                labels.len(),
                values.len()
            )));
        }
        Self::new(labels.iter().cloned().zip(values.iter().cloned()))
    }

    /// Convenience constructor from string literals, e.g.
    /// `ExponentVector::parse(&["E1", "E2"], &["2", "1/3"])`.
    pub fn parse(labels: &[&str], values: &[&str]) -> Result<Self> {
        let labels: Vec<Label> = labels.iter().map(|s| Label::from(*s)).collect();
        let values = values.iter().map(|v| v.parse()).collect::<Result<Vec<Rat>>>()?;
        Self::from_values(&labels, &values)
    }

    pub fn constant<'a>(labels: impl IntoIterator<Item = &'a Label>, value: &Rat) -> Self {
        ExponentVector {
            entries: labels.into_iter().map(|l| (l.clone(), value.clone())).collect(),
        }
    }

    pub fn zeros<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Self {
        Self::constant(labels, &Rat::zero())
    }

    pub fn ones<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Self {
        Self::constant(labels, &Rat::one())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.entries.keys()
    }

    pub fn index_set(&self) -> BTreeSet<Label> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rat)> {
        self.entries.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &Rat> {
        self.entries.values()
    }

    pub fn get(&self, label: &Label) -> Option<&Rat> {
        self.entries.get(label)
    }

    pub fn same_index_set(&self, other: &ExponentVector) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.keys().zip(other.entries.keys()).all(|(a, b)| a == b)
    }

    pub(crate) fn require_same_index_set(&self, other: &ExponentVector) -> Result<()> {
        if self.same_index_set(other) {
            Ok(())
        } else {
            Err(structural(format!(
                "index sets differ: {:?} vs {:?}",
                self.index_set(),
                other.index_set()
            )))
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.values().all(Rat::is_positive)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Rat::is_zero)
    }

    /// Row-vector times matrix: `(λC)(j) = Σ_i λ(i) C(i, j)`.
    pub fn apply(&self, matrix: &ExponentMatrix) -> Result<ExponentVector> {
        let rows = matrix.row_labels();
        if rows.len() != self.entries.len() || !rows.iter().zip(self.entries.keys()).all(|(a, b)| a == b) {
            return Err(structural(format!(
                "vector over {:?} cannot multiply matrix with rows {:?}",
                self.index_set(),
                rows
            )));
        }
        let entries = matrix
            .col_labels()
            .iter()
            .enumerate()
            .map(|(c, col)| {
                let mut value = Rat::zero();
                for (r, v) in self.entries.values().enumerate() {
                    let m = matrix.entry_at(r, c);
                    if !v.is_zero() && !m.is_zero() {
                        value = value + v * m;
                    }
                }
                (col.clone(), value)
            })
            .collect();
        Ok(ExponentVector { entries })
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &ExponentVector) -> Result<ExponentVector> {
        self.require_same_index_set(other)?;
        Ok(self.zip_with(other, |a, b| a * b))
    }

    pub fn sub(&self, other: &ExponentVector) -> Result<ExponentVector> {
        self.require_same_index_set(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &ExponentVector, f: impl Fn(&Rat, &Rat) -> Rat) -> ExponentVector {
        ExponentVector {
            entries: self
                .entries
                .iter()
                .zip(other.entries.values())
                .map(|((l, a), b)| (l.clone(), f(a, b)))
                .collect(),
        }
    }

    /// Keeps only the coordinates in `keep`, which must be a subset.
    pub fn restrict(&self, keep: &BTreeSet<Label>) -> Result<ExponentVector> {
        keep.iter()
            .map(|l| {
                self.entries
                    .get(l)
                    .map(|v| (l.clone(), v.clone()))
                    .ok_or_else(|| structural(format!("label {l} not in vector")))
            })
            .collect::<Result<BTreeMap<_, _>>>()
            .map(|entries| ExponentVector { entries })
    }

    pub fn map_values(&self, f: impl Fn(&Label, &Rat) -> Rat) -> ExponentVector {
        ExponentVector {
            entries: self.entries.iter().map(|(l, v)| (l.clone(), f(l, v))).collect(),
        }
    }

    pub fn into_map(self) -> BTreeMap<Label, Rat> {
        self.entries
    }
}

impl Index<&Label> for ExponentVector {
    type Output = Rat;

    fn index(&self, label: &Label) -> &Rat {
        self.entries
            .get(label)
            .unwrap_or_else(|| panic!("label {label} not in exponent vector"))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, (label, value)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label}: {value}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The division order: `a ≤_d b` iff `a(i) ≤ b(i)` for every label.
pub fn div_le(a: &ExponentVector, b: &ExponentVector) -> Result<bool> {
    a.require_same_index_set(b)?;
    Ok(a.entries.values().zip(b.entries.values()).all(|(x, y)| x <= y))
}

/// The `≤_d`-minimal elements of a finite set, deduplicated and sorted.
pub fn minimal_elements<'a, I>(points: I) -> Result<Vec<ExponentVector>>
where
    I: IntoIterator<Item = &'a ExponentVector>,
{
    let distinct: BTreeSet<&ExponentVector> = points.into_iter().collect();
    let all: Vec<&ExponentVector> = distinct.into_iter().collect();
    if let Some((first, rest)) = all.split_first() {
        for p in rest {
            first.require_same_index_set(p)?;
        }
    }
    let mut out = Vec::new();
    for (k, candidate) in all.iter().enumerate() {
        let mut dominated = false;
        for (m, other) in all.iter().enumerate() {
            if k != m && div_le(other, candidate)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.push((*candidate).clone());
        }
    }
    Ok(out)
}
