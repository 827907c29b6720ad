//! Embedding of the full group of a graph into Thompson's group `V`, the
//! full group of the rose with two loops `a` and `b`.
//!
//! A labeling numbers the vertices `w_1, w_2, ...` and the out-edges of each
//! `w_i` as `e_{i,1}, e_{i,2}, ...`. Choices among `k` options are coded by
//! the prefix code [`alpha`], and a boundary path is sent to the
//! concatenation of the codes of its start vertex and its edges.

mod algebra;
mod emit;
mod word;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::fullgroup::{FullGroup, Piece, Table, TableError};
use crate::graph::{check_condition_l, isolated_point_witnesses, Degree, Edge, FinitePath, Graph, GraphError, VertexId};
use crate::pathspace::{BoundaryPoint, PathError};

pub use algebra::{mono_mult, FormalSum, Monomial};
pub use emit::{ck_check, CkVerdict, GeneratorImage};
pub use word::{word, BinaryWord, Letter, WordError};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("graph is not embeddable: {0}")]
    NotAdmissible(String),
    #[error("bad labeling: {0}")]
    BadLabeling(String),
    #[error("alpha({j}, {i}) is undefined")]
    AlphaOutOfRange { j: usize, i: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Path(#[from] PathError),
}

impl EmbedError {
    pub fn code(&self) -> &'static str {
        match self {
            EmbedError::NotAdmissible(_) => "not_admissible",
            EmbedError::BadLabeling(_) => "bad_labeling",
            EmbedError::AlphaOutOfRange { .. } => "alpha_out_of_range",
            EmbedError::Graph(e) => e.code(),
            EmbedError::Table(e) => e.code(),
            EmbedError::Path(e) => e.code(),
        }
    }
}

fn render_degree(i: Degree) -> String {
    match i {
        Degree::Finite(k) => k.to_string(),
        Degree::Infinite => "omega".into(),
    }
}

/// The code word for choice `j` out of `i` (1-based): `b`, `ab`, `aab`, ...,
/// with the last choice `a^{i-1}` when `i` is finite. A single choice is
/// coded by the empty word.
pub fn alpha(j: usize, i: Degree) -> Result<BinaryWord, EmbedError> {
    let in_range = match i {
        Degree::Finite(k) => (1..=k).contains(&j),
        Degree::Infinite => j >= 1,
    };
    if !in_range {
        return Err(EmbedError::AlphaOutOfRange { j, i: render_degree(i) });
    }
    let mut w = BinaryWord::repeat(Letter::A, j - 1);
    if i != Degree::Finite(j) {
        w.push(Letter::B);
    }
    Ok(w)
}

/// Checks that the words `alpha(j, i)` are pairwise prefix-incomparable and
/// that every binary word of length `depth` extends exactly one of them
/// (for `i` infinite: every word except `a^depth`). `depth` must be at least
/// the longest code word.
pub fn code_partition_check(i: Degree, depth: usize) -> bool {
    let count = match i {
        Degree::Finite(k) => k,
        Degree::Infinite => depth,
    };
    let code: Vec<BinaryWord> = match (1..=count).map(|j| alpha(j, i)).collect() {
        Ok(c) => c,
        Err(_) => return false,
    };
    if count == 0 || code.iter().any(|w| w.len() > depth) || depth >= usize::BITS as usize {
        return false;
    }
    for (x, y) in code.iter().enumerate().flat_map(|(n, x)| code[n + 1..].iter().map(move |y| (x, y))) {
        if x.is_prefix_of(y) || y.is_prefix_of(x) {
            return false;
        }
    }
    (0..1usize << depth).all(|bits| {
        let mut w = BinaryWord::empty();
        for k in (0..depth).rev() {
            w.push(if bits >> k & 1 == 0 { Letter::A } else { Letter::B });
        }
        let hits = code.iter().filter(|c| c.is_prefix_of(&w)).count();
        let expected = if i == Degree::Infinite && bits == 0 { 0 } else { 1 };
        hits == expected
    })
}

/// Serialized labeling: the vertex order, and for some vertices the order
/// of their single out-edges. An omega family always comes last. Missing
/// entries mean declaration order.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct LabelingSpec {
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: BTreeMap<String, Vec<String>>,
}

/// A numbering of vertices and of the out-edges at each vertex.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Labeling {
    /// Vertices in label order; empty for enumeration order.
    order: Vec<VertexId>,
    /// Inverse of `order`.
    rank: Vec<usize>,
    /// Slots of the single edges in label order, where not declaration order.
    singles: BTreeMap<VertexId, Vec<usize>>,
}

impl Labeling {
    /// Vertices and edges numbered in declaration order.
    pub fn declaration() -> Labeling {
        Labeling::default()
    }

    pub fn from_spec(g: &Graph, spec: &LabelingSpec) -> Result<Labeling, EmbedError> {
        let mut lab = Labeling::default();
        if !spec.vertices.is_empty() {
            let n = g.require_finite("custom vertex labeling")?;
            let mut rank = vec![usize::MAX; n];
            for (i, name) in spec.vertices.iter().enumerate() {
                let v = g.vertex_by_name(name).ok_or_else(|| EmbedError::BadLabeling(format!("unknown vertex {name}")))?;
                if rank[v.0] != usize::MAX {
                    return Err(EmbedError::BadLabeling(format!("vertex {name} listed twice")));
                }
                rank[v.0] = i;
                lab.order.push(v);
            }
            if lab.order.len() != n {
                return Err(EmbedError::BadLabeling("vertex list is not a permutation".into()));
            }
            lab.rank = rank;
        }
        for (name, ids) in &spec.edges {
            g.require_finite("custom edge labeling")?;
            let v = g.vertex_by_name(name).ok_or_else(|| EmbedError::BadLabeling(format!("unknown vertex {name}")))?;
            let singles = g.single_count(v);
            let mut slots = Vec::new();
            for id in ids {
                let e = g
                    .edge_by_ref(&crate::graph::EdgeRef { family: id.clone(), index: None })
                    .filter(|e| e.source == v)
                    .ok_or_else(|| EmbedError::BadLabeling(format!("{id} is not a single edge out of {name}")))?;
                slots.push(e.slot);
            }
            let distinct: BTreeSet<usize> = slots.iter().copied().collect();
            if slots.len() != singles || distinct.len() != singles {
                return Err(EmbedError::BadLabeling(format!("edges of {name} are not a permutation")));
            }
            lab.singles.insert(v, slots);
        }
        Ok(lab)
    }

    pub fn to_spec(&self, g: &Graph) -> LabelingSpec {
        LabelingSpec {
            vertices: self.order.iter().map(|&v| g.vertex_name(v)).collect(),
            edges: self
                .singles
                .iter()
                .map(|(&v, slots)| {
                    let ids = slots.iter().map(|&slot| g.edge_name(Edge { source: v, slot })).collect();
                    (g.vertex_name(v), ids)
                })
                .collect(),
        }
    }

    /// 1-based label `i` of `w_i`.
    pub fn vertex_label(&self, v: VertexId) -> usize {
        self.rank.get(v.0).copied().unwrap_or(v.0) + 1
    }

    pub fn vertex_with_label(&self, i: usize) -> VertexId {
        self.order.get(i - 1).copied().unwrap_or(VertexId(i - 1))
    }

    /// 1-based label `j` of `e = e_{i,j}` among the out-edges of its source.
    pub fn edge_label(&self, e: Edge) -> usize {
        match self.singles.get(&e.source) {
            Some(slots) => slots.iter().position(|&s| s == e.slot).unwrap_or(e.slot) + 1,
            None => e.slot + 1,
        }
    }

    pub fn edge_with_label(&self, v: VertexId, j: usize) -> Edge {
        let slot = match self.singles.get(&v) {
            Some(slots) => slots.get(j - 1).copied().unwrap_or(j - 1),
            None => j - 1,
        };
        Edge { source: v, slot }
    }
}

/// A labeled graph that satisfies the hypotheses of the embedding: no
/// sinks, every cycle has an exit, and no semi-tails. These are checked
/// once, on construction.
#[derive(Clone, Debug)]
pub struct Embedding<'g> {
    g: &'g Graph,
    lab: Labeling,
    target: Graph,
}

impl<'g> Embedding<'g> {
    pub fn new(g: &'g Graph, lab: Labeling) -> Result<Embedding<'g>, EmbedError> {
        if let Some(w) = isolated_point_witnesses(g).into_iter().next() {
            return Err(EmbedError::NotAdmissible(format!("{w:?}")));
        }
        if !check_condition_l(g).holds {
            return Err(EmbedError::NotAdmissible("a cycle has no exit".into()));
        }
        Ok(Embedding { g, lab, target: Graph::rose(2) })
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn labeling(&self) -> &Labeling {
        &self.lab
    }

    /// The rose with two loops `a`, `b`.
    pub fn target(&self) -> &Graph {
        &self.target
    }

    fn vertex_count(&self) -> Degree {
        match self.g.vertex_count() {
            Some(n) => Degree::Finite(n),
            None => Degree::Infinite,
        }
    }

    pub fn vertex_word(&self, v: VertexId) -> BinaryWord {
        alpha(self.lab.vertex_label(v), self.vertex_count()).expect("label within vertex count")
    }

    pub fn edge_word(&self, e: Edge) -> BinaryWord {
        alpha(self.lab.edge_label(e), self.g.out_degree(e.source)).expect("label within out-degree")
    }

    /// Code of the edges alone, without the start vertex.
    pub fn phi_edgeword(&self, edges: &[Edge]) -> BinaryWord {
        let mut w = BinaryWord::empty();
        for &e in edges {
            w.extend(&self.edge_word(e));
        }
        w
    }

    pub fn phi_star(&self, mu: &FinitePath) -> BinaryWord {
        self.vertex_word(mu.start).concat(&self.phi_edgeword(&mu.edges))
    }

    pub fn phi_point(&self, p: &BoundaryPoint) -> BoundaryPoint {
        let (prefix, cycle) = match p {
            BoundaryPoint::Finite(mu) => (self.phi_star(mu), BinaryWord::repeat(Letter::A, 1)),
            BoundaryPoint::Periodic { prefix, cycle } => (self.phi_star(prefix), self.phi_edgeword(cycle)),
        };
        BoundaryPoint::periodic(&self.target, prefix.to_path(), cycle.edges())
            .expect("cycles have exits, so their code is a nonempty word")
    }

    /// Image pieces of one piece. A piece excluding `F` at `w_i` is split as
    /// `Z(mu \ F_l)` plus the cylinders `Z(mu e_{i,j})` for `j <= l` with
    /// `e_{i,j}` not in `F`, where `l` is the largest label in `F` and
    /// `F_l = {e_{i,1}, ..., e_{i,l}}`. `Z(mu \ F_l)` maps onto `Z(phi*(mu) a^l)`
    /// and is empty when `l` is the out-degree.
    fn embed_piece(&self, p: &Piece, out: &mut Vec<Piece>) {
        let (mu, lambda) = (self.phi_star(&p.mu), self.phi_star(&p.lambda));
        let plain = |x: BinaryWord, y: BinaryWord| Piece::plain(x.to_path(), y.to_path());
        let Some(l) = p.excluded.iter().map(|&e| self.lab.edge_label(e)).max() else {
            out.push(plain(mu, lambda));
            return;
        };
        let at = p.lambda.end(self.g);
        if self.g.out_degree(at) != Degree::Finite(l) {
            let a_l = BinaryWord::repeat(Letter::A, l);
            out.push(plain(mu.concat(&a_l), lambda.concat(&a_l)));
        }
        for j in 1..=l {
            let e = self.lab.edge_with_label(at, j);
            if !p.excluded.contains(&e) {
                let w = self.edge_word(e);
                out.push(plain(mu.concat(&w), lambda.concat(&w)));
            }
        }
    }

    /// The conjugate `phi t phi^-1` as a table over the rose.
    pub fn embed_table(&self, t: &Table) -> Result<Table, EmbedError> {
        FullGroup::new(self.g).validate(t)?;
        let mut pieces = Vec::new();
        for p in &t.pieces {
            self.embed_piece(p, &mut pieces);
        }
        Ok(FullGroup::new(&self.target).table(pieces)?)
    }
}
