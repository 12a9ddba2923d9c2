use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{NeighborOracle, VertexKey};
use crate::error::{Error, Result};

/// On-disk form of a finite graph: `{"vertices": [labels], "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

/// A finite undirected graph loaded from a [`FiniteGraphDoc`].
///
/// Keys are the big-endian vertex index, so canonical order is the order of
/// declaration. Vertices are addressed by label.
#[derive(Clone, Debug)]
pub struct FiniteGraph {
    name: String,
    labels: Vec<String>,
    by_label: HashMap<String, u32>,
    adjacency: Vec<Vec<u32>>,
}

impl FiniteGraph {
    pub fn from_doc(name: impl Into<String>, doc: &FiniteGraphDoc) -> Result<Self> {
        if doc.vertices.is_empty() {
            return Err(Error::invalid("finite graph has no vertices"));
        }
        let n = doc.vertices.len();
        let mut by_label = HashMap::with_capacity(n);
        for (i, l) in doc.vertices.iter().enumerate() {
            if by_label.insert(l.clone(), i as u32).is_some() {
                return Err(Error::invalid(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for &[i, j] in &doc.edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("edge [{i}, {j}] out of range")));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop at vertex {i}")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::invalid(format!("duplicate edge [{i}, {j}]")));
            }
            adjacency[i].push(j as u32);
            adjacency[j].push(i as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(FiniteGraph {
            name: name.into(),
            labels: doc.vertices.clone(),
            by_label,
            adjacency,
        })
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let doc: FiniteGraphDoc = serde_json::from_str(json)?;
        Self::from_doc(name, &doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(format!("finite_graph:{}", path.display()), &text)
    }

    pub fn to_doc(&self) -> FiniteGraphDoc {
        let mut edges = Vec::new();
        for (i, list) in self.adjacency.iter().enumerate() {
            for &j in list {
                if (i as u32) < j {
                    edges.push([i, j as usize]);
                }
            }
        }
        FiniteGraphDoc {
            vertices: self.labels.clone(),
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn key(i: u32) -> VertexKey {
        VertexKey::from_bytes(&i.to_be_bytes())
    }

    fn index(v: &VertexKey) -> usize {
        let b: [u8; 4] = v.as_bytes().try_into().expect("finite graph key");
        u32::from_be_bytes(b) as usize
    }
}

impl NeighborOracle for FiniteGraph {
    fn descriptor(&self) -> String {
        self.name.clone()
    }

    fn origin(&self) -> VertexKey {
        Self::key(0)
    }

    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        self.adjacency[Self::index(v)]
            .iter()
            .map(|&j| Self::key(j))
            .collect()
    }

    fn valence_bound(&self) -> Option<usize> {
        self.adjacency.iter().map(Vec::len).max()
    }

    fn label(&self, v: &VertexKey) -> String {
        self.labels[Self::index(v)].clone()
    }

    fn resolve(&self, text: &str) -> Result<VertexKey> {
        self.by_label
            .get(text.trim())
            .map(|&i| Self::key(i))
            .ok_or_else(|| Error::UnknownVertex(text.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs, Limits};

    const SQUARE: &str = r#"{"vertices": ["p", "q", "r", "s"], "edges": [[0,1],[1,2],[2,3],[3,0]]}"#;

    #[test]
    fn loads_a_cycle() {
        let g = FiniteGraph::from_json("square", SQUARE).unwrap();
        let f = bfs(&g, &g.resolve("p").unwrap(), 5, &Limits::default()).unwrap();
        assert_eq!(f.dist(&g.resolve("r").unwrap()), Some(2));
        assert!(f.frontier_complete());
        assert_eq!(g.to_doc().edges.len(), 4);
    }

    #[test]
    fn validation_errors() {
        let cases = [
            r#"{"vertices": ["p", "p"], "edges": []}"#,
            r#"{"vertices": ["p", "q"], "edges": [[0,2]]}"#,
            r#"{"vertices": ["p", "q"], "edges": [[1,1]]}"#,
            r#"{"vertices": ["p", "q"], "edges": [[0,1],[1,0]]}"#,
            r#"{"vertices": [], "edges": []}"#,
            r#"{"vertices": ["p"], "edges": [], "extra": 1}"#,
        ];
        for c in cases {
            assert!(FiniteGraph::from_json("bad", c).is_err(), "{c}");
        }
    }
}
