use std::collections::BTreeSet;
use std::fmt;

use crate::error::{structural, Error, Result};
use crate::kernel::{ExponentVector, Label, Rat};

/// A map `I × J → Q` with label-indexed rows and columns.
///
/// Labels are kept sorted so that two matrices with the same entries compare
/// equal regardless of the order they were built in; positions are an
/// implementation detail and never part of the interface.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    rows: Vec<Label>,
    cols: Vec<Label>,
    data: Vec<Rat>,
}

fn sorted_unique(labels: impl IntoIterator<Item = Label>, what: &str) -> Result<Vec<Label>> {
    let mut out: Vec<Label> = labels.into_iter().collect();
    out.sort();
    for w in out.windows(2) {
        if w[0] == w[1] {
            return Err(structural(format!("{what} label {} appears twice", w[0])));
        }
    }
    Ok(out)
}

impl ExponentMatrix {
    pub fn from_fn(
        rows: impl IntoIterator<Item = Label>,
        cols: impl IntoIterator<Item = Label>,
        mut f: impl FnMut(&Label, &Label) -> Rat,
    ) -> Result<Self> {
        let rows = sorted_unique(rows, "row")?;
        let cols = sorted_unique(cols, "column")?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in &rows {
            for c in &cols {
                data.push(f(r, c));
            }
        }
        Ok(ExponentMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested entries listed in the given label orders.
    pub fn from_rows(row_labels: &[Label], col_labels: &[Label], entries: &[Vec<Rat>]) -> Result<Self> {
        if entries.len() != row_labels.len() || entries.iter().any(|row| row.len() != col_labels.len()) {
            return Err(structural(format!(
                "entry table is not {}×{}",
                row_labels.len(),
                col_labels.len()
            )));
        }
        let row_pos = |l: &Label| row_labels.iter().position(|x| x == l).unwrap();
        let col_pos = |l: &Label| col_labels.iter().position(|x| x == l).unwrap();
        Self::from_fn(row_labels.iter().cloned(), col_labels.iter().cloned(), |r, c| {
            entries[row_pos(r)][col_pos(c)].clone()
        })
    }

    /// String-literal convenience constructor.
    pub fn parse(rows: &[&str], cols: &[&str], entries: &[&[&str]]) -> Result<Self> {
        let rows: Vec<Label> = rows.iter().map(|s| Label::from(*s)).collect();
        let cols: Vec<Label> = cols.iter().map(|s| Label::from(*s)).collect();
        let table = entries
            .iter()
            .map(|row| row.iter().map(|s| s.parse()).collect::<Result<Vec<Rat>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows, &cols, &table)
    }

    /// `D_𝟙` over the given labels.
    pub fn identity<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Self {
        let labels: Vec<Label> = labels.into_iter().cloned().collect();
        Self::from_fn(labels.clone(), labels, |r, c| if r == c { Rat::one() } else { Rat::zero() })
            .expect("identity labels come from a set")
    }

    /// `D_λ`.
    pub fn diagonal(v: &ExponentVector) -> Self {
        let labels: Vec<Label> = v.labels().cloned().collect();
        Self::from_fn(labels.clone(), labels, |r, c| if r == c { v[r].clone() } else { Rat::zero() })
            .expect("vector labels are unique")
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.cols
    }

    pub fn row_set(&self) -> BTreeSet<Label> {
        self.rows.iter().cloned().collect()
    }

    pub fn col_set(&self) -> BTreeSet<Label> {
        self.cols.iter().cloned().collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    fn row_index(&self, label: &Label) -> Option<usize> {
        self.rows.binary_search(label).ok()
    }

    fn col_index(&self, label: &Label) -> Option<usize> {
        self.cols.binary_search(label).ok()
    }

    pub(crate) fn entry_at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols.len() + c]
    }

    pub fn get(&self, row: &Label, col: &Label) -> Option<&Rat> {
        Some(self.entry_at(self.row_index(row)?, self.col_index(col)?))
    }

    /// Entry lookup that panics on unknown labels; for call sites where the
    /// labels are known to belong to the matrix.
    pub fn entry(&self, row: &Label, col: &Label) -> &Rat {
        self.get(row, col)
            .unwrap_or_else(|| panic!("({row}, {col}) is not an entry of this matrix"))
    }

    /// Returns a copy with one entry replaced.
    pub fn with_entry(&self, row: &Label, col: &Label, value: Rat) -> Result<Self> {
        let r = self.row_index(row).ok_or_else(|| structural(format!("no row {row}")))?;
        let c = self.col_index(col).ok_or_else(|| structural(format!("no column {col}")))?;
        let mut out = self.clone();
        out.data[r * self.cols.len() + c] = value;
        Ok(out)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Label, &Label, &Rat)> {
        let ncols = self.cols.len();
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (&self.rows[k / ncols], &self.cols[k % ncols], v))
    }

    /// Nested entries in sorted row and column order.
    pub fn to_nested(&self) -> Vec<Vec<Rat>> {
        if self.cols.is_empty() {
            return vec![Vec::new(); self.rows.len()];
        }
        self.data.chunks(self.cols.len()).map(<[Rat]>::to_vec).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .entries()
                .all(|(r, c, v)| if r == c { v.is_one() } else { v.is_zero() })
    }

    /// Exact product `(i, k) ↦ Σ_j A(i, j) B(j, k)`.
    pub fn mul(&self, rhs: &ExponentMatrix) -> Result<ExponentMatrix> {
        if self.cols != rhs.rows {
            return Err(structural(format!(
                "cannot multiply: columns {:?} vs rows {:?}",
                self.cols, rhs.rows
            )));
        }
        let inner = self.cols.len();
        let mut data = Vec::with_capacity(self.rows.len() * rhs.cols.len());
        for r in 0..self.rows.len() {
            for c in 0..rhs.cols.len() {
                let mut acc = Rat::zero();
                for j in 0..inner {
                    let (a, b) = (self.entry_at(r, j), rhs.entry_at(j, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                data.push(acc);
            }
        }
        Ok(ExponentMatrix {
            rows: self.rows.clone(),
            cols: rhs.cols.clone(),
            data,
        })
    }

    /// The exact inverse `J × I` of an `I × J` matrix, by Gauss–Jordan
    /// elimination over the rationals.
    pub fn inverse(&self) -> Result<ExponentMatrix> {
        if !self.is_square() {
            return Err(structural(format!(
                "cannot invert a {}×{} matrix",
                self.rows.len(),
                self.cols.len()
            )));
        }
        let n = self.rows.len();
        let mut a: Vec<Vec<Rat>> = self.to_nested();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|r| (0..n).map(|c| if r == c { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = a[col][col].recip()?;
            for c in 0..n {
                a[col][c] = &a[col][c] * &scale;
                inv[col][c] = &inv[col][c] * &scale;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    if !a[col][c].is_zero() {
                        let da = &factor * &a[col][c];
                        a[r][c] = &a[r][c] - da;
                    }
                    if !inv[col][c].is_zero() {
                        let di = &factor * &inv[col][c];
                        inv[r][c] = &inv[r][c] - di;
                    }
                }
            }
        }
        // Rows of `inv` follow our row order; as a matrix M⁻¹ its rows are
        // indexed by our columns and its columns by our rows.
        let mut data = Vec::with_capacity(n * n);
        for c in 0..n {
            for r in 0..n {
                data.push(inv[c][r].clone());
            }
        }
        Ok(ExponentMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            data,
        })
    }

    /// The diagonal restricted to labels that are both rows and columns.
    pub fn shared_diagonal(&self) -> ExponentVector {
        let entries = self
            .rows
            .iter()
            .filter(|l| self.col_index(l).is_some())
            .map(|l| (l.clone(), self.entry(l, l).clone()));
        ExponentVector::new(entries).expect("row labels are unique")
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} × {:?}:", self.rows, self.cols)?;
        for row in self.to_nested() {
            let cells: Vec<String> = row.iter().map(Rat::to_string).collect();
            write!(f, " [{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON form of a matrix: label arrays fix the order of `entries` for this
/// document only.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
    pub entries: Vec<Vec<Rat>>,
}

impl From<&ExponentMatrix> for MatrixJson {
    fn from(m: &ExponentMatrix) -> Self {
        MatrixJson {
            rows: m.rows.clone(),
            cols: m.cols.clone(),
            entries: m.to_nested(),
        }
    }
}

impl TryFrom<&MatrixJson> for ExponentMatrix {
    type Error = Error;

    fn try_from(json: &MatrixJson) -> Result<Self> {
        ExponentMatrix::from_rows(&json.rows, &json.cols, &json.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str], cols: &[&str], entries: &[&[&str]]) -> ExponentMatrix {
        ExponentMatrix::parse(rows, cols, entries).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(&["E1", "E2"], &["E1", "E∞1"], &[&["1", "1/2"], &["0", "1"]]);
        let left = ExponentMatrix::identity(a.row_labels());
        let right = ExponentMatrix::identity(a.col_labels());
        assert_eq!(left.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&right).unwrap(), a);
    }

    #[test]
    fn diagonal_products_multiply_entrywise() {
        let lam = ExponentVector::parse(&["a", "b"], &["2", "1/3"]).unwrap();
        let mu = ExponentVector::parse(&["a", "b"], &["5", "6"]).unwrap();
        let prod = ExponentMatrix::diagonal(&lam)
            .mul(&ExponentMatrix::diagonal(&mu))
            .unwrap();
        assert_eq!(prod, ExponentMatrix::diagonal(&lam.hadamard(&mu).unwrap()));
    }

    #[test]
    fn hand_multiplied_inverse_pair() {
        let a = m(&["1", "2"], &["1", "2"], &[&["1", "0"], &["1", "1"]]);
        let b = m(&["1", "2"], &["1", "2"], &[&["1", "0"], &["-1", "1"]]);
        assert!(a.mul(&b).unwrap().is_identity());
        assert_eq!(a.inverse().unwrap(), b);
    }

    #[test]
    fn inverse_of_diagonal_is_reciprocal() {
        let lam = ExponentVector::parse(&["x", "y"], &["3/2", "7"]).unwrap();
        let recip = lam.map_values(|_, v| v.recip().unwrap());
        assert_eq!(
            ExponentMatrix::diagonal(&lam).inverse().unwrap(),
            ExponentMatrix::diagonal(&recip)
        );
        let id = ExponentMatrix::identity(lam.index_set().iter());
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn inverse_swaps_row_and_column_sets() {
        let b = m(&["E1", "E2"], &["E2", "E∞1"], &[&["0", "1"], &["1", "2"]]);
        let inv = b.inverse().unwrap();
        assert_eq!(inv.row_set(), b.col_set());
        assert!(inv.mul(&b).unwrap().is_identity());
        assert!(b.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_matrix_is_reported() {
        let s = m(&["a", "b"], &["a", "b"], &[&["1", "2"], &["2", "4"]]);
        assert!(matches!(s.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn label_mismatch_is_structural() {
        let a = m(&["a"], &["b"], &[&["1"]]);
        assert!(matches!(a.mul(&a), Err(Error::Structural(_))));
    }

    #[test]
    fn vector_application() {
        let b = m(&["E1", "E2"], &["E1", "E∞1"], &[&["1", "1/2"], &["0", "1"]]);
        let lam = ExponentVector::parse(&["E1", "E2"], &["2", "1"]).unwrap();
        assert_eq!(
            lam.apply(&b).unwrap(),
            ExponentVector::parse(&["E1", "E∞1"], &["2", "2"]).unwrap()
        );
        let zero = ExponentVector::zeros(b.row_labels());
        assert!(zero.apply(&b).unwrap().is_zero());
        let id = ExponentMatrix::identity(lam.index_set().iter());
        assert_eq!(lam.apply(&id).unwrap(), lam);
    }

    #[test]
    fn from_rows_respects_given_order() {
        let a = m(&["E2", "E1"], &["E1"], &[&["5"], &["3"]]);
        assert_eq!(a.entry(&"E1".into(), &"E1".into()), &Rat::from_integer(3));
        assert_eq!(a.entry(&"E2".into(), &"E1".into()), &Rat::from_integer(5));
    }
}
