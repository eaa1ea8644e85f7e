use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{trim_to_accessible, Apg, RawGraph};
use crate::{Error, Result};

/// The on-disk graph format shared by every command.
///
/// ```json
/// {"nodes": ["x", "q"], "edges": [["x", "x"], ["x", "q"], ["q", "q"]], "root": "x"}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub root: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

impl GraphJson {
    /// Resolves names into a raw graph. Duplicate node names and duplicate
    /// edges are rejected.
    pub fn to_raw(&self) -> Result<RawGraph> {
        let mut index = HashMap::with_capacity(self.nodes.len());
        for (i, name) in self.nodes.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate node id {name:?}")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown node id {name:?}")))
        };
        let mut children = vec![Vec::new(); self.nodes.len()];
        let mut seen = BTreeSet::new();
        for [from, to] in &self.edges {
            let (f, t) = (lookup(from)?, lookup(to)?);
            if !seen.insert((f, t)) {
                return Err(Error::InvalidGraph(format!("duplicate edge {from:?} -> {to:?}")));
            }
            children[f].push(t);
        }
        let mut labels = BTreeMap::new();
        for (name, label) in self.labels.iter().flatten() {
            labels.insert(lookup(name)?, label.clone());
        }
        Ok(RawGraph {
            children,
            root: lookup(&self.root)?,
            labels,
        })
    }

    /// Loads an APG, dropping nodes the root cannot reach.
    pub fn to_apg(&self) -> Result<Apg> {
        Ok(trim_to_accessible(&self.to_raw()?).0)
    }

    pub fn from_apg(g: &Apg) -> GraphJson {
        let name = |v: usize| v.to_string();
        GraphJson {
            nodes: g.nodes().map(name).collect(),
            edges: g.edges().map(|(a, b)| [name(a), name(b)]).collect(),
            root: name(g.root()),
            labels: (!g.labels().is_empty()).then(|| g.labels().iter().map(|(&k, v)| (name(k), v.clone())).collect()),
        }
    }
}

impl Apg {
    pub fn from_json_str(text: &str) -> Result<Apg> {
        serde_json::from_str::<GraphJson>(text)?.to_apg()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GraphJson::from_apg(self)).expect("graph serializes")
    }
}
