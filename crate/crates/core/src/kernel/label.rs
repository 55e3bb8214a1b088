use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Compares strings treating maximal digit runs as numbers, so `E2 < E10` and
/// `c9 < c10`. Falls back to bytewise order so that only equal strings compare
/// equal.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    // Digits are ASCII, so runs can be cut on bytes without splitting a
    // UTF-8 sequence.
    let (x, y) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (ei, ej) = (run_end(x, i), run_end(y, j));
        let (rx, ry) = (&x[i..ei], &y[j..ej]);
        let ord = if rx[0].is_ascii_digit() && ry[0].is_ascii_digit() {
            let tx = trim_zeros(rx);
            let ty = trim_zeros(ry);
            tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty))
        } else {
            rx.cmp(ry)
        };
        if ord != Ordering::Equal {
            return ord;
        }
        i = ei;
        j = ej;
    }
    match (i < x.len(), j < y.len()) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        _ => a.cmp(b),
    }
}

fn run_end(s: &[u8], start: usize) -> usize {
    let digit = s[start].is_ascii_digit();
    s[start..]
        .iter()
        .position(|c| c.is_ascii_digit() != digit)
        .map_or(s.len(), |k| start + k)
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().position(|c| *c != b'0').unwrap_or(s.len());
    &s[k..]
}

macro_rules! natural_string_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                natural_cmp(&self.0, &other.0)
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

natural_string_newtype!(
    /// Opaque name of a boundary component (a generalized variable).
    Label
);

natural_string_newtype!(
    /// Opaque identifier of a corner point.
    CornerId
);

/// Prefix of generated exceptional-divisor labels.
pub const EXCEPTIONAL_PREFIX: &str = "E∞";

impl Label {
    /// Creation index `k` for labels of the form `E∞k`.
    pub fn exceptional_index(&self) -> Option<u64> {
        self.0.strip_prefix(EXCEPTIONAL_PREFIX)?.parse().ok()
    }

    pub fn exceptional(k: u64) -> Self {
        Label(format!("{EXCEPTIONAL_PREFIX}{k}"))
    }
}

impl CornerId {
    /// Numeric suffix for identifiers of the form `c<k>`.
    pub fn generated_index(&self) -> Option<u64> {
        self.0.strip_prefix('c')?.parse().ok()
    }

    pub fn generated(k: u64) -> Self {
        CornerId(format!("c{k}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order_on_numeric_suffixes() {
        let mut labels: Vec<Label> = ["E10", "E∞2", "E2", "E∞10", "E1", "E∞1"]
            .into_iter()
            .map(Label::from)
            .collect();
        labels.sort();
        let names: Vec<&str> = labels.iter().map(Label::as_str).collect();
        assert_eq!(names, ["E1", "E2", "E10", "E∞1", "E∞2", "E∞10"]);
    }

    #[test]
    fn equal_only_when_identical() {
        assert_eq!(natural_cmp("c01", "c1"), "c01".cmp("c1"));
        assert_ne!(natural_cmp("c01", "c1"), Ordering::Equal);
        assert_eq!(natural_cmp("z", "z"), Ordering::Equal);
    }

    #[test]
    fn generated_names_round_trip() {
        assert_eq!(Label::exceptional(4).exceptional_index(), Some(4));
        assert_eq!(Label::from("E1").exceptional_index(), None);
        assert_eq!(CornerId::generated(12).generated_index(), Some(12));
    }
}
