//! The human-writable graph file, in JSON or TOML.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Node, ResolutionGraph};

pub const SCHEMA_VERSION: u32 = 1;

/// Identifiers may be written as strings or as bare integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Id {
    Int(u64),
    Name(String),
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Id::Int(n) => write!(f, "{n}"),
            Id::Name(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Self {
        match s.parse::<u64>() {
            Ok(n) if n.to_string() == s => Id::Int(n),
            _ => Id::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: Id,
    /// `b`, with self-intersection `-b`.
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub id: Id,
    pub vertex: Id,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub schema_version: u32,
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub edges: Vec<(Id, Id)>,
    pub arrows: Vec<ArrowEntry>,
    pub root: Id,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_order: Option<Vec<Id>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentFormat {
    Json,
    Toml,
}

impl DocumentFormat {
    /// `.toml` files are TOML, everything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => DocumentFormat::Toml,
            _ => DocumentFormat::Json,
        }
    }
}

/// Line and column (both 1-based) of a byte offset.
fn locate(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

impl GraphDocument {
    /// Parses in two steps so that malformed text and a well-formed document
    /// with the wrong shape give different errors.
    pub fn parse(text: &str, format: DocumentFormat) -> Result<Self> {
        let doc: GraphDocument = match format {
            DocumentFormat::Json => {
                let value: serde_json::Value =
                    serde_json::from_str(text).map_err(|e| Error::SyntaxError {
                        line: e.line(),
                        column: e.column(),
                        message: e.to_string(),
                    })?;
                serde_json::from_value(value).map_err(|e| Error::SchemaError(e.to_string()))?
            }
            DocumentFormat::Toml => {
                let value: toml::Table = text.parse().map_err(|e: toml::de::Error| {
                    let (line, column) = e.span().map_or((0, 0), |s| locate(text, s.start));
                    Error::SyntaxError { line, column, message: e.message().to_string() }
                })?;
                toml::Value::Table(value)
                    .try_into()
                    .map_err(|e: toml::de::Error| Error::SchemaError(e.message().to_string()))?
            }
        };
        doc.check()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, DocumentFormat::from_path(path))
    }

    pub fn to_text(&self, format: DocumentFormat) -> String {
        match format {
            DocumentFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("document serializes");
                s.push('\n');
                s
            }
            DocumentFormat::Toml => toml::to_string(self).expect("document serializes"),
        }
    }

    fn check(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaError(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let mut seen = HashMap::new();
        for v in &self.vertices {
            if v.euler < 1 {
                return Err(Error::SchemaError(format!("vertex {}: euler must be at least 1", v.id)));
            }
            if seen.insert(&v.id, "vertex").is_some() {
                return Err(Error::SchemaError(format!("duplicate id {}", v.id)));
            }
        }
        for a in &self.arrows {
            if a.mult.is_some_and(|m| m < 1) {
                return Err(Error::SchemaError(format!("arrow {}: mult must be at least 1", a.id)));
            }
            if seen.insert(&a.id, "arrow").is_some() {
                return Err(Error::SchemaError(format!("duplicate id {}", a.id)));
            }
        }
        let vertex = |id: &Id, field: &str| match seen.get(id) {
            Some(&"vertex") => Ok(()),
            Some(_) => Err(Error::ReferenceError(format!("{field}: {id} is an arrow, not a vertex"))),
            None => Err(Error::ReferenceError(format!("{field}: unknown vertex {id}"))),
        };
        vertex(&self.root, "root")?;
        for (a, b) in &self.edges {
            vertex(a, "edges")?;
            vertex(b, "edges")?;
        }
        for a in &self.arrows {
            vertex(&a.vertex, &format!("arrow {}", a.id))?;
        }
        for id in self.branch_order.iter().flatten() {
            if seen.get(id) != Some(&"arrow") {
                return Err(Error::ReferenceError(format!("branch_order: unknown arrow {id}")));
            }
        }
        Ok(())
    }

    /// Index of every arrow id, for resolving a branch order.
    pub fn arrow_index(&self, id: &Id) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| &a.id == id)
            .ok_or_else(|| Error::ReferenceError(format!("unknown arrow {id}")))
    }

    pub fn to_graph(&self) -> Result<ResolutionGraph> {
        self.check()?;
        let index: HashMap<&Id, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (&v.id, i)).collect();
        let mut edges: Vec<(Node, Node)> = self
            .edges
            .iter()
            .map(|(a, b)| (Node::Vertex(index[a]), Node::Vertex(index[b])))
            .collect();
        edges.extend(
            self.arrows
                .iter()
                .enumerate()
                .map(|(k, a)| (Node::Vertex(index[&a.vertex]), Node::Arrow(k))),
        );
        let branch_order = self
            .branch_order
            .as_ref()
            .map(|ids| ids.iter().map(|id| self.arrow_index(id)).collect::<Result<Vec<_>>>())
            .transpose()?;
        Ok(ResolutionGraph {
            vertex_names: self.vertices.iter().map(|v| v.id.to_string()).collect(),
            euler: self.vertices.iter().map(|v| v.euler).collect(),
            arrow_names: self.arrows.iter().map(|a| a.id.to_string()).collect(),
            arrow_mult: self.arrows.iter().map(|a| a.mult.unwrap_or(1)).collect(),
            edges,
            root: index[&self.root],
            branch_order,
        })
    }

    /// Document for a graph whose arrow edges are listed after its vertex
    /// edges, in arrow order, each as `(vertex, arrow)`. That is the shape
    /// `to_graph` produces, so the two are inverse on it.
    pub fn from_graph(g: &ResolutionGraph) -> Result<Self> {
        let mut arrow_vertex = vec![None; g.arrow_count()];
        let mut edges = Vec::new();
        for &(a, b) in &g.edges {
            match (a, b) {
                (Node::Vertex(x), Node::Vertex(y)) => {
                    edges.push((Id::from(g.vertex_names[x].as_str()), Id::from(g.vertex_names[y].as_str())))
                }
                (Node::Vertex(v), Node::Arrow(k)) | (Node::Arrow(k), Node::Vertex(v)) => {
                    if arrow_vertex[k].replace(v).is_some() {
                        return Err(Error::ArrowheadDegree { arrow: g.arrow_names[k].clone() });
                    }
                }
                (Node::Arrow(k), Node::Arrow(_)) => {
                    return Err(Error::ArrowheadDegree { arrow: g.arrow_names[k].clone() })
                }
            }
        }
        let arrows = (0..g.arrow_count())
            .map(|k| {
                let v = arrow_vertex[k]
                    .ok_or_else(|| Error::ArrowheadDegree { arrow: g.arrow_names[k].clone() })?;
                Ok(ArrowEntry {
                    id: Id::from(g.arrow_names[k].as_str()),
                    vertex: Id::from(g.vertex_names[v].as_str()),
                    mult: Some(g.arrow_mult[k]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphDocument {
            schema_version: SCHEMA_VERSION,
            vertices: g
                .vertex_names
                .iter()
                .zip(&g.euler)
                .map(|(n, &euler)| VertexEntry { id: Id::from(n.as_str()), euler })
                .collect(),
            edges,
            arrows,
            root: Id::from(g.vertex_names[g.root].as_str()),
            branch_order: g
                .branch_order
                .as_ref()
                .map(|o| o.iter().map(|&k| Id::from(g.arrow_names[k].as_str())).collect()),
            metadata: BTreeMap::new(),
        })
    }
}
