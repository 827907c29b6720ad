//! Bratteli diagrams, the finite groups `Gamma_N` of range-preserving
//! permutations of paths from level 0 to level `N`, and their action on the
//! boundary of the underlying graph.
//!
//! A diagram lists levels `V_0..V_M` and edge sets `E_1..E_M`, `E_n` going
//! from `V_{n-1}` to `V_n`. A repeat rule `{from: f, period: p}` requires
//! `M = f + p` and `|V_M| = |V_f|`: levels `f..M-1` then repeat forever, and
//! the edges `E_M` into `V_M` are read as edges into the next copy of `V_f`,
//! matching vertices by position.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::embed::{EmbedError, Embedding, Labeling};
use crate::fullgroup::{Piece, Table};
use crate::graph::{Edge, FamilySpec, FinitePath, Graph, GraphError, GraphSpec, LevelEdge, LevelSpec, LeveledGraph, Multiplicity, VertexId};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum BratteliError {
    #[error("malformed diagram: {0}")]
    BadDiagram(String),
    #[error("level {level} is beyond the last declared level {last}")]
    LevelOutOfRange { level: usize, last: usize },
    #[error("not an element of the group: {0}")]
    BadElement(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

impl BratteliError {
    pub fn code(&self) -> &'static str {
        match self {
            BratteliError::BadDiagram(_) => "bad_diagram",
            BratteliError::LevelOutOfRange { .. } => "level_out_of_range",
            BratteliError::BadElement(_) => "bad_element",
            BratteliError::Graph(e) => e.code(),
            BratteliError::Embed(e) => e.code(),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RepeatRule {
    pub from: usize,
    pub period: usize,
}

/// `{"levels": [["v0"], ["u", "u2"]], "edges": [[["v0", "u"], ...]], "repeat": {...}}`
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub levels: Vec<Vec<String>>,
    pub edges: Vec<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<RepeatRule>,
}

#[derive(Clone, Debug)]
pub struct BratteliDiagram {
    spec: DiagramSpec,
    graph: Graph,
}

fn edge_id(n: usize, k: usize) -> String {
    format!("e{n}_{k}")
}

impl BratteliDiagram {
    pub fn new(spec: DiagramSpec) -> Result<BratteliDiagram, BratteliError> {
        let bad = |m: String| BratteliError::BadDiagram(m);
        let m = spec.levels.len().checked_sub(1).ok_or_else(|| bad("no levels".into()))?;
        if spec.edges.len() != m {
            return Err(bad(format!("{} levels need {} edge sets, found {}", m + 1, m, spec.edges.len())));
        }
        let mut level_of = BTreeMap::new();
        for (l, names) in spec.levels.iter().enumerate() {
            if names.is_empty() {
                return Err(bad(format!("level {l} is empty")));
            }
            for name in names {
                if level_of.insert(name.as_str(), l).is_some() {
                    return Err(GraphError::DuplicateVertex(name.clone()).into());
                }
            }
        }
        for (i, es) in spec.edges.iter().enumerate() {
            let n = i + 1;
            for (s, r) in es {
                if level_of.get(s.as_str()) != Some(&(n - 1)) || level_of.get(r.as_str()) != Some(&n) {
                    return Err(bad(format!("edge {s} -> {r} in E_{n} does not go from level {} to level {n}", n - 1)));
                }
            }
            if let Some(v) = spec.levels[n - 1].iter().find(|v| !es.iter().any(|(s, _)| s == *v)) {
                if spec.repeat.is_some() {
                    return Err(bad(format!("vertex {v} on level {} emits no edges", n - 1)));
                }
            }
        }
        let graph = match spec.repeat {
            None => Self::finite_graph(&spec)?,
            Some(rule) => Self::leveled_graph(&spec, rule, m)?,
        };
        Ok(BratteliDiagram { spec, graph })
    }

    fn finite_graph(spec: &DiagramSpec) -> Result<Graph, BratteliError> {
        let vertices = spec.levels.concat();
        let edges = spec
            .edges
            .iter()
            .enumerate()
            .flat_map(|(i, es)| {
                es.iter().enumerate().map(move |(k, (s, r))| FamilySpec {
                    id: edge_id(i + 1, k + 1),
                    source: s.clone(),
                    range: r.clone(),
                    multiplicity: Multiplicity::Single,
                })
            })
            .collect();
        Ok(Graph::from_spec(&GraphSpec { vertices, edges })?)
    }

    fn leveled_graph(spec: &DiagramSpec, rule: RepeatRule, m: usize) -> Result<Graph, BratteliError> {
        let bad = |msg: String| BratteliError::BadDiagram(msg);
        if rule.period == 0 || rule.from + rule.period != m {
            return Err(bad(format!(
                "repeat from {} with period {} needs exactly {} declared levels after level 0",
                rule.from,
                rule.period,
                rule.from + rule.period
            )));
        }
        if spec.levels[m].len() != spec.levels[rule.from].len() {
            return Err(bad(format!("level {m} must have as many vertices as level {}", rule.from)));
        }
        let level = |l: usize| {
            let edges = spec.edges[l]
                .iter()
                .enumerate()
                .map(|(k, (s, r))| {
                    let range = if l + 1 == m {
                        let pos = spec.levels[m].iter().position(|v| v == r).expect("validated range");
                        spec.levels[rule.from][pos].clone()
                    } else {
                        r.clone()
                    };
                    LevelEdge { id: format!("e{{i}}_{}", k + 1), source: s.clone(), range, next: true }
                })
                .collect();
            LevelSpec { vertices: spec.levels[l].clone(), edges }
        };
        let prefix = (0..rule.from).map(level).collect();
        let block = (rule.from..m).map(level).collect();
        Ok(Graph::from_leveled(LeveledGraph::new(prefix, block)?))
    }

    pub fn spec(&self) -> &DiagramSpec {
        &self.spec
    }

    /// The underlying graph, forgetting levels. Vertices are enumerated
    /// level by level; edge `k` of `E_n` is named `e{n}_{k}`.
    pub fn underlying_graph(&self) -> &Graph {
        &self.graph
    }

    /// Last level with paths of that length from level 0, if bounded.
    pub fn last_level(&self) -> Option<usize> {
        self.spec.repeat.is_none().then(|| self.spec.levels.len() - 1)
    }

    fn level_zero(&self) -> Vec<VertexId> {
        let g = &self.graph;
        self.spec.levels[0].iter().map(|v| g.vertex_by_name(v).expect("level 0 vertex")).collect()
    }

    /// All paths from level 0 to level `n`, in lexicographic order.
    pub fn paths(&self, n: usize) -> Result<Vec<FinitePath>, BratteliError> {
        if let Some(last) = self.last_level() {
            if n > last {
                return Err(BratteliError::LevelOutOfRange { level: n, last });
            }
        }
        let g = &self.graph;
        let mut paths: Vec<FinitePath> = self.level_zero().into_iter().map(FinitePath::trivial).collect();
        for _ in 0..n {
            paths = paths
                .iter()
                .flat_map(|p| g.edges_from(p.end(g), 0).into_iter().map(move |e| p.pushed(e)))
                .collect();
        }
        Ok(paths)
    }

    pub fn gamma_group(&self, n: usize) -> Result<GammaGroup, BratteliError> {
        let paths = self.paths(n)?;
        let mut classes: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (k, p) in paths.iter().enumerate() {
            classes.entry(p.end(&self.graph)).or_default().push(k);
        }
        Ok(GammaGroup { level: n, paths, classes: classes.into_values().collect() })
    }

    /// Pieces `(sigma(p), {}, p)` for the paths `p` that `sigma` moves.
    pub fn gamma_to_table(&self, el: &GammaElement) -> Result<Table, BratteliError> {
        let group = self.gamma_group(el.level)?;
        group.check(el)?;
        let pieces = (0..group.paths.len())
            .filter(|&k| el.perm[k] != k)
            .map(|k| Piece::plain(group.paths[el.perm[k]].clone(), group.paths[k].clone()))
            .collect();
        Ok(Table::new(pieces))
    }

    /// The image of an element in Thompson's group `V`.
    pub fn af_to_v(&self, el: &GammaElement, lab: Labeling) -> Result<Table, BratteliError> {
        let t = self.gamma_to_table(el)?;
        Ok(Embedding::new(&self.graph, lab)?.embed_table(&t)?)
    }
}

/// The group `Gamma_N`: permutations of the paths from level 0 to level `N`
/// that preserve the range of every path.
#[derive(Clone, Debug)]
pub struct GammaGroup {
    level: usize,
    paths: Vec<FinitePath>,
    /// Indices of paths grouped by range vertex.
    classes: Vec<Vec<usize>>,
}

/// A permutation `perm` of the paths of [`GammaGroup::paths`]: path `k` is
/// sent to path `perm[k]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GammaElement {
    pub level: usize,
    pub perm: Vec<usize>,
}

impl GammaElement {
    pub fn identity(level: usize, size: usize) -> GammaElement {
        GammaElement { level, perm: (0..size).collect() }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &GammaElement) -> GammaElement {
        GammaElement { level: self.level, perm: other.perm.iter().map(|&k| self.perm[k]).collect() }
    }

    pub fn inverse(&self) -> GammaElement {
        let mut perm = vec![0; self.perm.len()];
        for (k, &j) in self.perm.iter().enumerate() {
            perm[j] = k;
        }
        GammaElement { level: self.level, perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &j)| k == j)
    }

    /// Order as a permutation: the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.perm.len()];
        let mut order = 1;
        for start in 0..self.perm.len() {
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.perm[k];
                len += 1;
            }
            if len > 0 {
                order = num_integer::lcm(order, len);
            }
        }
        order
    }
}

impl GammaGroup {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn paths(&self) -> &[FinitePath] {
        &self.paths
    }

    pub fn identity(&self) -> GammaElement {
        GammaElement::identity(self.level, self.paths.len())
    }

    /// `prod over v of (number of paths ending at v)!`, if it fits.
    pub fn order(&self) -> Option<u128> {
        self.classes.iter().try_fold(1u128, |acc, c| (1..=c.len() as u128).try_fold(acc, |x, k| x.checked_mul(k)))
    }

    pub fn check(&self, el: &GammaElement) -> Result<(), BratteliError> {
        let bad = |m: &str| Err(BratteliError::BadElement(m.into()));
        if el.level != self.level || el.perm.len() != self.paths.len() {
            return bad("wrong level or size");
        }
        let mut hit = vec![false; el.perm.len()];
        for &j in &el.perm {
            if j >= hit.len() || std::mem::replace(&mut hit[j], true) {
                return bad("not a permutation");
            }
        }
        for c in &self.classes {
            if c.iter().any(|&k| !c.contains(&el.perm[k])) {
                return bad("moves a path to a different range vertex");
            }
        }
        Ok(())
    }

    /// Every element, as independent permutations of each range class.
    pub fn elements(&self) -> impl Iterator<Item = GammaElement> + '_ {
        self.classes
            .iter()
            .map(|c| c.iter().copied().permutations(c.len()).collect::<Vec<_>>())
            .multi_cartesian_product()
            .map(move |choice| {
                let mut perm: Vec<usize> = (0..self.paths.len()).collect();
                for (c, image) in self.classes.iter().zip(choice) {
                    for (&k, j) in c.iter().zip(image) {
                        perm[k] = j;
                    }
                }
                GammaElement { level: self.level, perm }
            })
    }

    /// The element swapping paths `i` and `j`, which must end at the same
    /// vertex.
    pub fn transposition(&self, i: usize, j: usize) -> Result<GammaElement, BratteliError> {
        let mut el = self.identity();
        el.perm.swap(i, j);
        self.check(&el)?;
        Ok(el)
    }

    /// The same permutation one level down: `p e -> sigma(p) e`.
    pub fn extend(&self, b: &BratteliDiagram, el: &GammaElement) -> Result<GammaElement, BratteliError> {
        self.check(el)?;
        let next = b.gamma_group(self.level + 1)?;
        let index: BTreeMap<&FinitePath, usize> = next.paths.iter().enumerate().map(|(k, p)| (p, k)).collect();
        let perm = next
            .paths
            .iter()
            .map(|q| {
                let k = self.paths.iter().position(|p| p.is_prefix_of(q)).expect("paths extend");
                let e: Edge = q.edges[self.level];
                index[&self.paths[el.perm[k]].pushed(e)]
            })
            .collect();
        Ok(GammaElement { level: self.level + 1, perm })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fullgroup::FullGroup;
    use crate::graph::isolated_point_witnesses;

    fn pairs(es: &[(&str, &str)]) -> Vec<(String, String)> {
        es.iter().map(|(s, r)| (s.to_string(), r.to_string())).collect()
    }

    fn names(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|v| v.to_string()).collect()
    }

    /// Two paths into `u`, one into `u2`, then a full bipartite level that
    /// repeats.
    pub(crate) fn order_two() -> BratteliDiagram {
        BratteliDiagram::new(DiagramSpec {
            levels: vec![names(&["v0"]), names(&["u", "u2"]), names(&["x", "x2"])],
            edges: vec![
                pairs(&[("v0", "u"), ("v0", "u"), ("v0", "u2")]),
                pairs(&[("u", "x"), ("u", "x2"), ("u2", "x"), ("u2", "x2")]),
            ],
            repeat: Some(RepeatRule { from: 1, period: 1 }),
        })
        .unwrap()
    }

    #[test]
    fn validation() {
        let ok = order_two();
        assert!(!ok.underlying_graph().is_finite());
        let mut spec = ok.spec().clone();
        spec.repeat = Some(RepeatRule { from: 1, period: 2 });
        assert!(matches!(BratteliDiagram::new(spec.clone()), Err(BratteliError::BadDiagram(_))));
        spec.repeat = None;
        spec.edges[1].push(("v0".into(), "x".into()));
        assert!(matches!(BratteliDiagram::new(spec), Err(BratteliError::BadDiagram(_))));
    }

    #[test]
    fn underlying_graphs() {
        let b = BratteliDiagram::new(DiagramSpec {
            levels: vec![names(&["v0"]), names(&["u"])],
            edges: vec![pairs(&[("v0", "u"), ("v0", "u")])],
            repeat: None,
        })
        .unwrap();
        let g = b.underlying_graph();
        assert_eq!(g.vertex_count(), Some(2));
        assert_eq!(g.edge_name(Edge { source: VertexId(0), slot: 1 }), "e1_2");

        let g = order_two();
        let g = g.underlying_graph();
        assert!(isolated_point_witnesses(g).is_empty());
        assert_eq!(g.vertex_name(VertexId(3)), "u@2");
        assert_eq!(g.edge_name(Edge { source: VertexId(3), slot: 1 }), "e3_2");

        let chain = BratteliDiagram::new(DiagramSpec {
            levels: vec![names(&["v0"]), names(&["u"]), names(&["x"])],
            edges: vec![pairs(&[("v0", "u"), ("v0", "u")]), pairs(&[("u", "x")])],
            repeat: Some(RepeatRule { from: 1, period: 1 }),
        })
        .unwrap();
        assert!(!isolated_point_witnesses(chain.underlying_graph()).is_empty());
    }

    #[test]
    fn gamma_groups() {
        let b = order_two();
        let g1 = b.gamma_group(1).unwrap();
        assert_eq!(g1.order(), Some(2));
        assert_eq!(g1.elements().count(), 2);
        let g2 = b.gamma_group(2).unwrap();
        // paths to x: three, to x2: three
        assert_eq!(g2.order(), Some(36));
        assert_eq!(b.gamma_group(0).unwrap().order(), Some(1));
    }

    #[test]
    fn tables_from_elements() {
        let b = order_two();
        let g1 = b.gamma_group(1).unwrap();
        let swap = g1.transposition(0, 1).unwrap();
        assert!(g1.transposition(0, 2).is_err());
        let t = b.gamma_to_table(&swap).unwrap();
        let g = b.underlying_graph();
        let group = FullGroup::new(g);
        group.validate(&t).unwrap();
        assert_eq!(t.pieces.len(), 2);
        assert!(t.pieces.iter().all(|p| p.lag() == 0));
        assert!(group.compose(&t, &t).pieces.len() <= 2);
        assert!(group.is_identity(&group.compose(&t, &t)).unwrap());
        assert_eq!(b.gamma_to_table(&g1.identity()).unwrap(), Table::identity());

        let wider = g1.extend(&b, &swap).unwrap();
        let t2 = b.gamma_to_table(&wider).unwrap();
        assert!(group.germ_equal(&t, &t2).unwrap());

        let image = b.af_to_v(&swap, Labeling::declaration()).unwrap();
        let rose = Graph::rose(2);
        let v = FullGroup::new(&rose);
        assert!(!v.is_identity(&image).unwrap());
        assert!(v.is_identity(&v.compose(&image, &image)).unwrap());
    }
}
