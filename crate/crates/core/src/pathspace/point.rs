use crate::graph::{Edge, FinitePath, Graph, VertexId};

use super::PathError;

/// A representable boundary path: a finite path ending at a singular
/// vertex, or an eventually periodic infinite path `prefix cycle cycle ...`.
///
/// Eventually periodic points are kept minimal: the cycle is primitive and
/// the prefix is as short as possible. Two points are equal exactly when
/// their minimal forms are.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BoundaryPoint {
    Finite(FinitePath),
    Periodic { prefix: FinitePath, cycle: Vec<Edge> },
}

fn primitive_root(cycle: &[Edge]) -> &[Edge] {
    let n = cycle.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]) {
            return &cycle[..d];
        }
    }
    cycle
}

impl BoundaryPoint {
    pub fn finite(g: &Graph, path: FinitePath) -> Result<BoundaryPoint, PathError> {
        if !path.is_valid(g) {
            return Err(PathError::InvalidPath);
        }
        if !g.is_singular(path.end(g)) {
            return Err(PathError::NotSingular(g.vertex_name(path.end(g))));
        }
        Ok(BoundaryPoint::Finite(path))
    }

    /// The point `prefix cycle cycle ...` in minimal form.
    pub fn periodic(g: &Graph, prefix: FinitePath, cycle: Vec<Edge>) -> Result<BoundaryPoint, PathError> {
        if cycle.is_empty() {
            return Err(PathError::EmptyCycle);
        }
        let end = prefix.end(g);
        let closed = FinitePath::from_edges(end, cycle.clone());
        if !prefix.is_valid(g) || !closed.is_valid(g) || closed.end(g) != end {
            return Err(PathError::NotACycle);
        }
        Ok(Self::minimal(prefix, cycle))
    }

    fn minimal(mut prefix: FinitePath, cycle: Vec<Edge>) -> BoundaryPoint {
        let mut cycle = primitive_root(&cycle).to_vec();
        while prefix.edges.last().is_some_and(|e| e == cycle.last().unwrap()) {
            prefix.edges.pop();
            cycle.rotate_right(1);
        }
        BoundaryPoint::Periodic { prefix, cycle }
    }

    pub fn start(&self) -> VertexId {
        match self {
            BoundaryPoint::Finite(p) => p.start,
            BoundaryPoint::Periodic { prefix, .. } => prefix.start,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BoundaryPoint::Finite(_))
    }

    /// The `k`-th edge (0-based), if the point is that long.
    pub fn edge_at(&self, k: usize) -> Option<Edge> {
        match self {
            BoundaryPoint::Finite(p) => p.edges.get(k).copied(),
            BoundaryPoint::Periodic { prefix, cycle } => Some(if k < prefix.len() {
                prefix.edges[k]
            } else {
                cycle[(k - prefix.len()) % cycle.len()]
            }),
        }
    }

    /// The initial segment of length `n`, if the point is that long.
    pub fn initial(&self, n: usize) -> Option<FinitePath> {
        let edges = (0..n).map(|k| self.edge_at(k)).collect::<Option<Vec<_>>>()?;
        Some(FinitePath::from_edges(self.start(), edges))
    }

    pub fn has_prefix(&self, mu: &FinitePath) -> bool {
        self.start() == mu.start && mu.edges.iter().enumerate().all(|(k, &e)| self.edge_at(k) == Some(e))
    }

    /// Drops the first edge. A finite point of length 0 cannot be shifted.
    pub fn shift(&self, g: &Graph) -> Result<BoundaryPoint, PathError> {
        self.drop_edges(g, 1)
    }

    pub fn drop_edges(&self, g: &Graph, n: usize) -> Result<BoundaryPoint, PathError> {
        match self {
            BoundaryPoint::Finite(p) => {
                if p.len() < n {
                    return Err(PathError::ShiftTooFar);
                }
                Ok(BoundaryPoint::Finite(p.suffix(g, n)))
            }
            BoundaryPoint::Periodic { prefix, cycle } => {
                if n <= prefix.len() {
                    return Ok(Self::minimal(prefix.suffix(g, n), cycle.clone()));
                }
                let k = (n - prefix.len()) % cycle.len();
                let mut c = cycle.clone();
                c.rotate_left(k);
                Ok(Self::minimal(FinitePath::trivial(c[0].source), c))
            }
        }
    }

    /// `mu` followed by this point; `mu` must end where the point starts.
    pub fn prepend(&self, mu: &FinitePath) -> BoundaryPoint {
        match self {
            BoundaryPoint::Finite(p) => BoundaryPoint::Finite(mu.concat(p)),
            BoundaryPoint::Periodic { prefix, cycle } => Self::minimal(mu.concat(prefix), cycle.clone()),
        }
    }

    /// Whether the two points have a common tail: `shift^m x == shift^n y`
    /// for some `m, n`.
    pub fn tail_equivalent(&self, g: &Graph, other: &BoundaryPoint) -> bool {
        match (self, other) {
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => p.end(g) == q.end(g),
            (BoundaryPoint::Periodic { cycle: c, .. }, BoundaryPoint::Periodic { cycle: d, .. }) => {
                c.len() == d.len() && (0..c.len()).any(|r| (0..c.len()).all(|i| c[(i + r) % c.len()] == d[i]))
            }
            _ => false,
        }
    }

    /// Literal form: `v:e,f !` for finite points, `v:e / (g,h)` otherwise.
    pub fn render(&self, g: &Graph) -> String {
        match self {
            BoundaryPoint::Finite(p) => format!("{} !", p.render(g)),
            BoundaryPoint::Periodic { prefix, cycle } => {
                let c: Vec<String> = cycle.iter().map(|&e| g.edge_name(e)).collect();
                format!("{} / ({})", prefix.render(g), c.join(","))
            }
        }
    }
}
