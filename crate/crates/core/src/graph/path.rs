use super::{Edge, Graph, VertexId};

/// A finite path: a start vertex and a (possibly empty) edge sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FinitePath {
    pub start: VertexId,
    pub edges: Vec<Edge>,
}

impl FinitePath {
    pub fn trivial(v: VertexId) -> FinitePath {
        FinitePath { start: v, edges: Vec::new() }
    }

    pub fn from_edges(start: VertexId, edges: Vec<Edge>) -> FinitePath {
        FinitePath { start, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.edges.last().map_or(self.start, |&e| g.range(e))
    }

    /// Checks that consecutive edges match up and every edge exists.
    pub fn is_valid(&self, g: &Graph) -> bool {
        if !g.contains_vertex(self.start) {
            return false;
        }
        let mut at = self.start;
        for &e in &self.edges {
            if e.source != at || !g.has_edge(e) {
                return false;
            }
            at = g.range(e);
        }
        true
    }

    pub fn pushed(&self, e: Edge) -> FinitePath {
        let mut p = self.clone();
        p.edges.push(e);
        p
    }

    pub fn concat(&self, other: &FinitePath) -> FinitePath {
        let mut p = self.clone();
        p.edges.extend_from_slice(&other.edges);
        p
    }

    pub fn is_prefix_of(&self, other: &FinitePath) -> bool {
        self.start == other.start && other.edges.starts_with(&self.edges)
    }

    /// The first `n` edges.
    pub fn prefix(&self, n: usize) -> FinitePath {
        FinitePath { start: self.start, edges: self.edges[..n].to_vec() }
    }

    /// The path after the first `n` edges.
    pub fn suffix(&self, g: &Graph, n: usize) -> FinitePath {
        let start = if n == 0 { self.start } else { g.range(self.edges[n - 1]) };
        FinitePath { start, edges: self.edges[n..].to_vec() }
    }

    /// `other` with `self` removed from its front, when `self` is a prefix.
    pub fn strip_from(&self, g: &Graph, other: &FinitePath) -> Option<FinitePath> {
        self.is_prefix_of(other).then(|| other.suffix(g, self.len()))
    }
}

impl FinitePath {
    /// Literal form `v:e,g[2],f`.
    pub fn render(&self, g: &Graph) -> String {
        let edges: Vec<String> = self.edges.iter().map(|&e| g.edge_name(e)).collect();
        format!("{}:{}", g.vertex_name(self.start), edges.join(","))
    }
}
