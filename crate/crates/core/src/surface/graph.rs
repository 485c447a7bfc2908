use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest length accepted on a glued edge.
pub const MIN_GLUED_LENGTH: f64 = 1e-6;

/// Identifier that may be written as a JSON string or integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Id {
    Int(i64),
    Str(String),
}

impl std::fmt::Display for Id {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Id::Int(i) => write!(f, "{i}"),
            Id::Str(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Self {
        Id::Str(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: Id,
    pub from_vertex: Id,
    pub slot: usize,
    #[serde(default)]
    pub pair: Option<Id>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub ell: f64,
    #[serde(default)]
    pub tau: f64,
}

/// Serialized form of a graph together with its labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Id>,
    pub edges: Vec<EdgeRecord>,
    pub labels: BTreeMap<String, EdgeLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrientedEdge {
    pub id: Id,
    pub vertex: usize,
    pub slot: usize,
    /// The paired edge, `None` for a phantom edge.
    pub pair: Option<usize>,
}

/// Trivalent graph with an involution on its proper edges. Each vertex is a
/// pair of pants whose slot k carries boundary γ_{k+1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugmentedGraph {
    pub vertices: Vec<Id>,
    pub edges: Vec<OrientedEdge>,
    pub slots: Vec<[usize; 3]>,
}

/// Length and twist per oriented edge; paired edges carry equal values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FNLabel {
    pub ell: Vec<f64>,
    pub tau: Vec<f64>,
}

impl AugmentedGraph {
    /// Parses and validates a graph with labels.
    pub fn from_file(file: &GraphFile) -> Result<(AugmentedGraph, FNLabel)> {
        let invalid = |m: String| Error::GraphInvalid(m);
        if file.vertices.is_empty() {
            return Err(invalid("graph has no vertices".into()));
        }
        let mut vindex = HashMap::new();
        for (i, v) in file.vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(invalid(format!("duplicate vertex {v}")));
            }
        }
        let mut eindex = HashMap::new();
        for (i, e) in file.edges.iter().enumerate() {
            if eindex.insert(e.id.clone(), i).is_some() {
                return Err(invalid(format!("duplicate edge {}", e.id)));
            }
        }
        let mut slots = vec![[usize::MAX; 3]; file.vertices.len()];
        let mut edges = Vec::with_capacity(file.edges.len());
        for (i, e) in file.edges.iter().enumerate() {
            let v = *vindex
                .get(&e.from_vertex)
                .ok_or_else(|| invalid(format!("edge {} starts at unknown vertex {}", e.id, e.from_vertex)))?;
            if e.slot > 2 {
                return Err(invalid(format!("edge {} has slot {} outside 0..3", e.id, e.slot)));
            }
            if slots[v][e.slot] != usize::MAX {
                return Err(invalid(format!("vertex {} slot {} is used twice", e.from_vertex, e.slot)));
            }
            slots[v][e.slot] = i;
            let pair = match &e.pair {
                None => None,
                Some(p) => Some(
                    *eindex
                        .get(p)
                        .ok_or_else(|| invalid(format!("edge {} pairs with unknown edge {p}", e.id)))?,
                ),
            };
            edges.push(OrientedEdge {
                id: e.id.clone(),
                vertex: v,
                slot: e.slot,
                pair,
            });
        }
        for (v, s) in slots.iter().enumerate() {
            if s.contains(&usize::MAX) {
                return Err(invalid(format!("vertex {} does not have three edges", file.vertices[v])));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if let Some(j) = e.pair {
                if j == i {
                    return Err(invalid(format!("edge {} is paired with itself", e.id)));
                }
                if edges[j].pair != Some(i) {
                    return Err(invalid(format!("pairing of edge {} is not an involution", e.id)));
                }
            }
        }
        let graph = AugmentedGraph {
            vertices: file.vertices.clone(),
            edges,
            slots,
        };
        if !graph.is_connected() {
            return Err(invalid("graph is not connected".into()));
        }
        let (p, n) = graph.signature()?;
        let proper = graph.edges.iter().filter(|e| e.pair.is_some()).count() / 2;
        if 3 * p + n < 3 || proper + 3 != 3 * p + n {
            return Err(invalid(format!("edge count {proper} does not match type ({p}, {n})")));
        }

        let mut ell = vec![f64::NAN; graph.edges.len()];
        let mut tau = vec![0.0; graph.edges.len()];
        for (i, e) in graph.edges.iter().enumerate() {
            let own = file.labels.get(&e.id.to_string());
            let other = e.pair.and_then(|j| file.labels.get(&graph.edges[j].id.to_string()));
            let label = match (own, other) {
                (Some(a), Some(b)) => {
                    if a.ell != b.ell || a.tau != b.tau {
                        return Err(invalid(format!("edges {} and its pair carry different labels", e.id)));
                    }
                    *a
                }
                (Some(a), None) | (None, Some(a)) => *a,
                (None, None) => return Err(invalid(format!("edge {} has no label", e.id))),
            };
            if !(label.ell >= 0.0) || !label.ell.is_finite() || !label.tau.is_finite() {
                return Err(invalid(format!("edge {} has an invalid label", e.id)));
            }
            if e.pair.is_some() && label.ell > 0.0 && label.ell < MIN_GLUED_LENGTH {
                return Err(invalid(format!(
                    "glued edge {} has length {} below {MIN_GLUED_LENGTH}",
                    e.id, label.ell
                )));
            }
            ell[i] = label.ell;
            tau[i] = label.tau;
        }
        Ok((graph, FNLabel { ell, tau }))
    }

    pub fn from_json(text: &str) -> Result<(AugmentedGraph, FNLabel)> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::GraphInvalid(format!("malformed graph JSON: {e}")))?;
        AugmentedGraph::from_file(&file)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.slots[v] {
                if let Some(j) = self.edges[e].pair {
                    let w = self.edges[j].vertex;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.iter().all(|s| *s)
    }

    /// (genus p, number of ends n) from #vertices = 2p - 2 + n.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let n = self.edges.iter().filter(|e| e.pair.is_none()).count();
        let twice = self.vertices.len() + 2;
        if twice < n || !(twice - n).is_multiple_of(2) {
            return Err(Error::GraphInvalid(format!(
                "{} vertices and {n} phantom edges give no valid type",
                self.vertices.len()
            )));
        }
        Ok(((twice - n) / 2, n))
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id.to_string() == id)
    }

    /// Serialized form with labels attached to every oriented edge.
    pub fn to_file(&self, label: &FNLabel) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    from_vertex: self.vertices[e.vertex].clone(),
                    slot: e.slot,
                    pair: e.pair.map(|j| self.edges[j].id.clone()),
                })
                .collect(),
            labels: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    (
                        e.id.to_string(),
                        EdgeLabel {
                            ell: label.ell[i],
                            tau: label.tau[i],
                        },
                    )
                })
                .collect(),
        }
    }

    /// One vertex with three phantom edges c0, c1, c2.
    pub fn pants(lengths: [f64; 3]) -> (AugmentedGraph, FNLabel) {
        let file = GraphFile {
            vertices: vec!["q0".into()],
            edges: (0..3)
                .map(|k| EdgeRecord {
                    id: Id::Str(format!("c{k}")),
                    from_vertex: "q0".into(),
                    slot: k,
                    pair: None,
                })
                .collect(),
            labels: (0..3)
                .map(|k| (format!("c{k}"), EdgeLabel { ell: lengths[k], tau: 0.0 }))
                .collect(),
        };
        AugmentedGraph::from_file(&file).expect("pants graph is valid")
    }

    /// One vertex whose slots 0 and 1 (edges d0, d1) are glued to each other;
    /// slot 2 is the phantom edge c.
    pub fn once_punctured_torus(ell: f64, tau: f64, end_length: f64) -> Result<(AugmentedGraph, FNLabel)> {
        let file = GraphFile {
            vertices: vec!["q0".into()],
            edges: vec![
                EdgeRecord {
                    id: "d0".into(),
                    from_vertex: "q0".into(),
                    slot: 0,
                    pair: Some("d1".into()),
                },
                EdgeRecord {
                    id: "d1".into(),
                    from_vertex: "q0".into(),
                    slot: 1,
                    pair: Some("d0".into()),
                },
                EdgeRecord {
                    id: "c".into(),
                    from_vertex: "q0".into(),
                    slot: 2,
                    pair: None,
                },
            ],
            labels: [
                ("d0".to_string(), EdgeLabel { ell, tau }),
                ("c".to_string(), EdgeLabel { ell: end_length, tau: 0.0 }),
            ]
            .into_iter()
            .collect(),
        };
        AugmentedGraph::from_file(&file)
    }
}

impl FNLabel {
    /// Sets length and twist on an edge and its pair.
    pub fn set(&mut self, graph: &AugmentedGraph, edge: usize, ell: f64, tau: f64) {
        self.ell[edge] = ell;
        self.tau[edge] = tau;
        if let Some(j) = graph.edges[edge].pair {
            self.ell[j] = ell;
            self.tau[j] = tau;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: &str = r#"{
        "vertices": ["q"],
        "edges": [
            {"id": "d0", "from_vertex": "q", "slot": 0, "pair": "d1"},
            {"id": "d1", "from_vertex": "q", "slot": 1, "pair": "d0"},
            {"id": "c", "from_vertex": "q", "slot": 2, "pair": null}
        ],
        "labels": {"d0": {"ell": 1.0, "tau": 0.25}, "c": {"ell": 0.0, "tau": 0.0}}
    }"#;

    #[test]
    fn parse_torus() {
        let (g, l) = AugmentedGraph::from_json(TORUS).unwrap();
        assert_eq!(g.signature().unwrap(), (1, 1));
        assert_eq!(l.ell, vec![1.0, 1.0, 0.0]);
        assert_eq!(l.tau[1], 0.25);
    }

    #[test]
    fn pants_signature() {
        let (g, _) = AugmentedGraph::pants([1.0, 2.0, 3.0]);
        assert_eq!(g.signature().unwrap(), (0, 3));
    }

    #[test]
    fn rejects_bad_graphs() {
        let missing_slot = TORUS.replace(r#""slot": 2"#, r#""slot": 1"#);
        assert!(matches!(AugmentedGraph::from_json(&missing_slot), Err(Error::GraphInvalid(_))));
        let self_pair = TORUS.replace(r#""pair": "d1"}"#, r#""pair": "d0"}"#);
        assert!(matches!(AugmentedGraph::from_json(&self_pair), Err(Error::GraphInvalid(_))));
        let no_label = TORUS.replace(r#""c": {"ell": 0.0, "tau": 0.0}"#, r#""x": {"ell": 0.0}"#);
        assert!(matches!(AugmentedGraph::from_json(&no_label), Err(Error::GraphInvalid(_))));
        let tiny = TORUS.replace(r#""ell": 1.0"#, r#""ell": 1e-9"#);
        assert!(matches!(AugmentedGraph::from_json(&tiny), Err(Error::GraphInvalid(_))));
    }

    #[test]
    fn roundtrip() {
        let (g, l) = AugmentedGraph::once_punctured_torus(0.7, 0.1, 0.0).unwrap();
        let text = serde_json::to_string(&g.to_file(&l)).unwrap();
        let (g2, l2) = AugmentedGraph::from_json(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(l, l2);
    }
}
