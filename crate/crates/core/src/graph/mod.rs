//! Directed graphs whose edges come in families: a single edge, or a
//! countable bundle of parallel edges (an omega family).
//!
//! Every vertex lists its out-edges in a fixed order: single edges first in
//! declaration order, then the members of its omega family (if any). An
//! [`Edge`] is addressed by its source and its 0-based slot in that order.

mod conditions;
mod leveled;
mod path;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use conditions::*;
pub use leveled::{LevelEdge, LevelSpec, LeveledGraph};
pub(crate) use leveled::functional_cycles;
pub use path::FinitePath;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

impl VertexId {
    /// 1-based position in the vertex enumeration.
    pub fn ordinal(self) -> usize {
        self.0 + 1
    }
}

/// An edge addressed by its source vertex and its slot in the source's
/// out-edge order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub source: VertexId,
    pub slot: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Multiplicity {
    #[serde(rename = "1")]
    Single,
    #[serde(rename = "omega")]
    Omega,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

impl Degree {
    pub fn is_singular(self) -> bool {
        matches!(self, Degree::Finite(0) | Degree::Infinite)
    }
}

/// Textual edge reference: `e` for a single edge, `g[3]` for the third
/// member of the omega family `g`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EdgeRef {
    pub family: String,
    pub index: Option<usize>,
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => write!(f, "{}", self.family),
            Some(i) => write!(f, "{}[{}]", self.family, i),
        }
    }
}

impl std::str::FromStr for EdgeRef {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<EdgeRef, GraphError> {
        let bad = || GraphError::InvalidName(s.to_string());
        let (family, index) = match s.strip_suffix(']') {
            Some(rest) => {
                let (family, idx) = rest.split_once('[').ok_or_else(bad)?;
                let i: usize = idx.parse().map_err(|_| bad())?;
                if i == 0 {
                    return Err(bad());
                }
                (family, Some(i))
            }
            None => (s, None),
        };
        check_name(family)?;
        Ok(EdgeRef { family: family.to_string(), index })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: String,
    #[serde(rename = "src")]
    pub source: String,
    #[serde(rename = "rng")]
    pub range: String,
    #[serde(rename = "mult")]
    pub multiplicity: Multiplicity,
}

/// Declarative description of a graph with finitely many vertices.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<FamilySpec>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("vertex `{0}` emits more than one omega family")]
    SeveralOmegaFamilies(String),
    #[error("name `{0}` is empty or contains a reserved character")]
    InvalidName(String),
    #[error("malformed leveled graph: {0}")]
    BadLevels(String),
    #[error("{0} is not supported on leveled-infinite graphs")]
    Unsupported(&'static str),
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::DuplicateVertex(_) => "duplicate_vertex",
            GraphError::DuplicateEdge(_) => "duplicate_edge",
            GraphError::UnknownVertex { .. } => "unknown_vertex",
            GraphError::SeveralOmegaFamilies(_) => "several_omega_families",
            GraphError::InvalidName(_) => "invalid_name",
            GraphError::BadLevels(_) => "bad_levels",
            GraphError::Unsupported(_) => "unsupported",
        }
    }
}

const RESERVED: &[char] = &[':', ',', '[', ']', '/', '(', ')', '|', '!', '"', '{', '}'];

pub(crate) fn check_name(name: &str) -> Result<(), GraphError> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        return Err(GraphError::InvalidName(name.to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
struct Family {
    id: String,
    source: usize,
    range: usize,
}

#[derive(Clone, Debug)]
struct FiniteGraph {
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    families: Vec<Family>,
    by_family: HashMap<String, usize>,
    singles: Vec<Vec<usize>>,
    omega: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
enum Repr {
    Finite(FiniteGraph),
    Leveled(LeveledGraph),
}

/// A validated graph, either with finitely many vertices or leveled-infinite
/// (a finite prefix of levels followed by a block of levels repeated forever).
#[derive(Clone, Debug)]
pub struct Graph {
    repr: Repr,
}

impl Graph {
    /// Validates a declarative graph and fixes the out-edge order of every
    /// vertex (singles in declaration order, then the omega family).
    pub fn from_spec(spec: &GraphSpec) -> Result<Graph, GraphError> {
        let mut by_name = HashMap::new();
        for (i, name) in spec.vertices.iter().enumerate() {
            check_name(name)?;
            if by_name.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let n = spec.vertices.len();
        let mut families = Vec::new();
        let mut by_family = HashMap::new();
        let mut singles = vec![Vec::new(); n];
        let mut omega = vec![None; n];
        for f in &spec.edges {
            check_name(&f.id)?;
            let lookup = |v: &String| {
                by_name.get(v).copied().ok_or_else(|| GraphError::UnknownVertex {
                    edge: f.id.clone(),
                    vertex: v.clone(),
                })
            };
            let (s, r) = (lookup(&f.source)?, lookup(&f.range)?);
            let idx = families.len();
            if by_family.insert(f.id.clone(), idx).is_some() {
                return Err(GraphError::DuplicateEdge(f.id.clone()));
            }
            families.push(Family { id: f.id.clone(), source: s, range: r });
            match f.multiplicity {
                Multiplicity::Single => singles[s].push(idx),
                Multiplicity::Omega => {
                    if omega[s].replace(idx).is_some() {
                        return Err(GraphError::SeveralOmegaFamilies(f.source.clone()));
                    }
                }
            }
        }
        Ok(Graph {
            repr: Repr::Finite(FiniteGraph {
                names: spec.vertices.clone(),
                by_name,
                families,
                by_family,
                singles,
                omega,
            }),
        })
    }

    pub fn from_leveled(leveled: LeveledGraph) -> Graph {
        Graph { repr: Repr::Leveled(leveled) }
    }

    /// The graph with one vertex `v` and `n` loops named `a`, `b`, ...
    pub fn rose(n: usize) -> Graph {
        assert!((1..=26).contains(&n));
        let edges = (0..n)
            .map(|i| FamilySpec {
                id: ((b'a' + i as u8) as char).to_string(),
                source: "v".into(),
                range: "v".into(),
                multiplicity: Multiplicity::Single,
            })
            .collect();
        Graph::from_spec(&GraphSpec { vertices: vec!["v".into()], edges }).unwrap()
    }

    /// The graph with vertices `w1..wr`, edges `e1..en` from `w1` to `wr`
    /// and edges `f{i}` from `w{i+1}` to `w{i}`.
    pub fn higman_thompson(n: usize, r: usize) -> Graph {
        assert!(n >= 1 && r >= 1);
        let single = |id: String, s: usize, t: usize| FamilySpec {
            id,
            source: format!("w{s}"),
            range: format!("w{t}"),
            multiplicity: Multiplicity::Single,
        };
        let mut edges: Vec<_> = (1..=n).map(|i| single(format!("e{i}"), 1, r)).collect();
        edges.extend((1..r).map(|i| single(format!("f{i}"), i + 1, i)));
        let vertices = (1..=r).map(|i| format!("w{i}")).collect();
        Graph::from_spec(&GraphSpec { vertices, edges }).unwrap()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.repr, Repr::Finite(_))
    }

    pub fn as_leveled(&self) -> Option<&LeveledGraph> {
        match &self.repr {
            Repr::Leveled(l) => Some(l),
            Repr::Finite(_) => None,
        }
    }

    pub fn vertex_count(&self) -> Option<usize> {
        match &self.repr {
            Repr::Finite(g) => Some(g.names.len()),
            Repr::Leveled(_) => None,
        }
    }

    /// All vertices of a finite graph, or the first `bound` vertices of a
    /// leveled-infinite one.
    pub fn vertices_up_to(&self, bound: usize) -> Vec<VertexId> {
        let n = self.vertex_count().unwrap_or(bound).min(bound);
        (0..n).map(VertexId).collect()
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.vertices_up_to(usize::MAX)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertex_count().is_none_or(|n| v.0 < n)
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        match &self.repr {
            Repr::Finite(g) => g.names[v.0].clone(),
            Repr::Leveled(l) => l.vertex_name(v),
        }
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        match &self.repr {
            Repr::Finite(g) => g.by_name.get(name).map(|&i| VertexId(i)),
            Repr::Leveled(l) => l.vertex_by_name(name),
        }
    }

    pub fn out_degree(&self, v: VertexId) -> Degree {
        match &self.repr {
            Repr::Finite(g) => {
                if g.omega[v.0].is_some() {
                    Degree::Infinite
                } else {
                    Degree::Finite(g.singles[v.0].len())
                }
            }
            Repr::Leveled(l) => Degree::Finite(l.out_degree(v)),
        }
    }

    pub fn is_singular(&self, v: VertexId) -> bool {
        self.out_degree(v).is_singular()
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_degree(v) == Degree::Finite(0)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.contains_vertex(e.source)
            && match self.out_degree(e.source) {
                Degree::Finite(n) => e.slot < n,
                Degree::Infinite => true,
            }
    }

    /// Range of an edge. The edge must exist.
    pub fn range(&self, e: Edge) -> VertexId {
        match &self.repr {
            Repr::Finite(g) => {
                let s = &g.singles[e.source.0];
                let fam = if e.slot < s.len() {
                    s[e.slot]
                } else {
                    g.omega[e.source.0].expect("edge slot out of range")
                };
                VertexId(g.families[fam].range)
            }
            Repr::Leveled(l) => l.range(e),
        }
    }

    /// Number of single edges at `v`; omega slots start after them.
    pub fn single_count(&self, v: VertexId) -> usize {
        match &self.repr {
            Repr::Finite(g) => g.singles[v.0].len(),
            Repr::Leveled(l) => l.out_degree(v),
        }
    }

    /// Out-edges of `v`; an omega family contributes its first `omega_bound`
    /// members.
    pub fn edges_from(&self, v: VertexId, omega_bound: usize) -> Vec<Edge> {
        let n = match self.out_degree(v) {
            Degree::Finite(n) => n,
            Degree::Infinite => self.single_count(v) + omega_bound,
        };
        (0..n).map(|slot| Edge { source: v, slot }).collect()
    }

    pub fn edge_ref(&self, e: Edge) -> EdgeRef {
        match &self.repr {
            Repr::Finite(g) => {
                let s = &g.singles[e.source.0];
                if e.slot < s.len() {
                    EdgeRef { family: g.families[s[e.slot]].id.clone(), index: None }
                } else {
                    let fam = g.omega[e.source.0].expect("edge slot out of range");
                    EdgeRef {
                        family: g.families[fam].id.clone(),
                        index: Some(e.slot - s.len() + 1),
                    }
                }
            }
            Repr::Leveled(l) => EdgeRef { family: l.edge_name(e), index: None },
        }
    }

    pub fn edge_name(&self, e: Edge) -> String {
        self.edge_ref(e).to_string()
    }

    pub fn edge_by_ref(&self, r: &EdgeRef) -> Option<Edge> {
        match &self.repr {
            Repr::Finite(g) => {
                let &fam = g.by_family.get(&r.family)?;
                let src = g.families[fam].source;
                let s = &g.singles[src];
                match (g.omega[src] == Some(fam), r.index) {
                    (false, None) => {
                        let slot = s.iter().position(|&f| f == fam)?;
                        Some(Edge { source: VertexId(src), slot })
                    }
                    (true, Some(i)) if i >= 1 => {
                        Some(Edge { source: VertexId(src), slot: s.len() + i - 1 })
                    }
                    _ => None,
                }
            }
            Repr::Leveled(l) => match r.index {
                None => l.edge_by_name(&r.family),
                Some(_) => None,
            },
        }
    }

    pub(crate) fn require_finite(&self, what: &'static str) -> Result<usize, GraphError> {
        self.vertex_count().ok_or(GraphError::Unsupported(what))
    }

    /// The declarative form of a finite graph.
    pub fn to_spec(&self) -> Option<GraphSpec> {
        let Repr::Finite(g) = &self.repr else { return None };
        let edges = self
            .families()
            .into_iter()
            .zip(&g.families)
            .map(|((s, r, multiplicity), f)| FamilySpec {
                id: f.id.clone(),
                source: g.names[s.0].clone(),
                range: g.names[r.0].clone(),
                multiplicity,
            })
            .collect();
        Some(GraphSpec { vertices: g.names.clone(), edges })
    }

    /// Every edge family as `(source, range, multiplicity)` for finite
    /// graphs. Used by the structural checks.
    pub(crate) fn families(&self) -> Vec<(VertexId, VertexId, Multiplicity)> {
        match &self.repr {
            Repr::Finite(g) => g
                .families
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let m = if g.omega[f.source] == Some(i) {
                        Multiplicity::Omega
                    } else {
                        Multiplicity::Single
                    };
                    (VertexId(f.source), VertexId(f.range), m)
                })
                .collect(),
            Repr::Leveled(_) => Vec::new(),
        }
    }
}
