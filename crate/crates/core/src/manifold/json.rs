use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Corner, MonomialManifold};
use crate::error::{structural, Error, Result};
use crate::kernel::{CornerId, ExponentMatrix, Label, MatrixJson};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerJson {
    pub id: CornerId,
    pub index_set: Vec<Label>,
}

/// One edge; `matrix` is `C^{from,to}` with rows `I_to` and columns `I_from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: CornerId,
    pub to: CornerId,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldJson {
    pub dimension: usize,
    pub components: Vec<Label>,
    pub corners: Vec<CornerJson>,
    pub edges: Vec<EdgeJson>,
}

impl From<&MonomialManifold> for ManifoldJson {
    fn from(m: &MonomialManifold) -> Self {
        ManifoldJson {
            dimension: m.dimension,
            components: m.components.iter().cloned().collect(),
            corners: m
                .corners
                .values()
                .map(|c| CornerJson {
                    id: c.id.clone(),
                    index_set: c.index_set.iter().cloned().collect(),
                })
                .collect(),
            edges: m
                .edges
                .values()
                .map(|e| EdgeJson {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    matrix: MatrixJson::from(&e.forward),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ManifoldJson> for MonomialManifold {
    type Error = Error;

    fn try_from(json: &ManifoldJson) -> Result<Self> {
        let components: BTreeSet<Label> = json.components.iter().cloned().collect();
        if components.len() != json.components.len() {
            return Err(structural("duplicate component labels"));
        }
        let corners = json
            .corners
            .iter()
            .map(|c| {
                let index_set: BTreeSet<Label> = c.index_set.iter().cloned().collect();
                if index_set.len() != c.index_set.len() {
                    return Err(structural(format!("corner {} repeats a label", c.id)));
                }
                Ok(Corner { id: c.id.clone(), index_set })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = json
            .edges
            .iter()
            .map(|e| Ok((e.from.clone(), e.to.clone(), ExponentMatrix::try_from(&e.matrix)?)))
            .collect::<Result<Vec<_>>>()?;
        MonomialManifold::from_parts(json.dimension, components, corners, edges)
    }
}

impl MonomialManifold {
    pub fn to_json(&self) -> ManifoldJson {
        ManifoldJson::from(self)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: ManifoldJson = serde_json::from_str(text)?;
        MonomialManifold::try_from(&json)
    }
}
