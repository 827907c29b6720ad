//! Leveled-infinite graphs: levels `0, 1, 2, ...` where every edge stays in
//! its level or goes to the next one. A finite prefix of levels is followed
//! by a block of levels that repeats forever.
//!
//! Vertex and edge names are templates. `{i}` in a template is replaced by
//! the 1-based level number. A template without `{i}` keeps its bare name on
//! the first copy of the block and gets an `@level` suffix (0-based level)
//! on later copies.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{check_name, Edge, FinitePath, GraphError, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEdge {
    pub id: String,
    #[serde(rename = "src")]
    pub source: String,
    #[serde(rename = "rng")]
    pub range: String,
    /// The range lies on the next level rather than this one.
    #[serde(default)]
    pub next: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<LevelEdge>,
}

#[derive(Clone, Debug)]
struct Out {
    range: usize,
    next: bool,
}

#[derive(Clone, Debug)]
struct Level {
    names: Vec<String>,
    out: Vec<Vec<Out>>,
    /// Edge templates with their source position and slot.
    edges: Vec<(String, usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct LeveledGraph {
    specs: (Vec<LevelSpec>, Vec<LevelSpec>),
    prefix: Vec<Level>,
    block: Vec<Level>,
    prefix_offsets: Vec<usize>,
    prefix_total: usize,
    block_offsets: Vec<usize>,
    block_total: usize,
}

fn instantiate(template: &str, level: usize, first_copy: bool) -> String {
    if template.contains("{i}") {
        template.replace("{i}", &(level + 1).to_string())
    } else if first_copy {
        template.to_string()
    } else {
        format!("{template}@{level}")
    }
}

fn offsets(levels: &[Level]) -> (Vec<usize>, usize) {
    let mut acc = 0;
    let offs = levels
        .iter()
        .map(|l| {
            let o = acc;
            acc += l.names.len();
            o
        })
        .collect();
    (offs, acc)
}

impl LeveledGraph {
    pub fn new(prefix: Vec<LevelSpec>, block: Vec<LevelSpec>) -> Result<LeveledGraph, GraphError> {
        let bad = |m: String| GraphError::BadLevels(m);
        if block.is_empty() {
            return Err(bad("the repeating block has no levels".into()));
        }
        let all: Vec<&LevelSpec> = prefix.iter().chain(block.iter()).collect();
        let count = all.len();
        let next_of = |k: usize| if k + 1 < count { k + 1 } else { prefix.len() };
        let mut levels = Vec::with_capacity(count);
        for (k, spec) in all.iter().enumerate() {
            if spec.vertices.is_empty() {
                return Err(bad(format!("level {k} has no vertices")));
            }
            for name in spec.vertices.iter().chain(spec.edges.iter().map(|e| &e.id)) {
                check_name(&name.replace("{i}", "1"))?;
            }
            let pos = |names: &[String], v: &str, id: &str| {
                names.iter().position(|n| n == v).ok_or_else(|| GraphError::UnknownVertex {
                    edge: id.to_string(),
                    vertex: v.to_string(),
                })
            };
            let mut out = vec![Vec::new(); spec.vertices.len()];
            let mut edges = Vec::new();
            for e in &spec.edges {
                let s = pos(&spec.vertices, &e.source, &e.id)?;
                let target = if e.next { &all[next_of(k)].vertices } else { &spec.vertices };
                let r = pos(target, &e.range, &e.id)?;
                edges.push((e.id.clone(), s, out[s].len()));
                out[s].push(Out { range: r, next: e.next });
            }
            levels.push(Level { names: spec.vertices.clone(), out, edges });
        }
        let block_levels = levels.split_off(prefix.len());
        let (prefix_offsets, prefix_total) = offsets(&levels);
        let (block_offsets, block_total) = offsets(&block_levels);
        let g = LeveledGraph {
            specs: (prefix, block),
            prefix: levels,
            block: block_levels,
            prefix_offsets,
            prefix_total,
            block_offsets,
            block_total,
        };
        g.check_unique_names()?;
        Ok(g)
    }

    pub fn prefix_specs(&self) -> &[LevelSpec] {
        &self.specs.0
    }

    pub fn block_specs(&self) -> &[LevelSpec] {
        &self.specs.1
    }

    fn check_unique_names(&self) -> Result<(), GraphError> {
        let horizon = self.prefix.len() + 3 * self.block.len();
        let mut vs = HashSet::new();
        let mut es = HashSet::new();
        for l in 0..horizon {
            let first = self.is_first_copy(l);
            let level = self.level(l);
            for n in &level.names {
                let name = instantiate(n, l, first);
                if !vs.insert(name.clone()) {
                    return Err(GraphError::DuplicateVertex(name));
                }
            }
            for (id, _, _) in &level.edges {
                let name = instantiate(id, l, first);
                if !es.insert(name.clone()) {
                    return Err(GraphError::DuplicateEdge(name));
                }
            }
        }
        Ok(())
    }

    fn is_first_copy(&self, l: usize) -> bool {
        l < self.prefix.len() + self.block.len()
    }

    fn level(&self, l: usize) -> &Level {
        if l < self.prefix.len() {
            &self.prefix[l]
        } else {
            &self.block[(l - self.prefix.len()) % self.block.len()]
        }
    }

    pub fn vertex_at(&self, l: usize, pos: usize) -> VertexId {
        let p = self.prefix.len();
        if l < p {
            VertexId(self.prefix_offsets[l] + pos)
        } else {
            let (copy, j) = ((l - p) / self.block.len(), (l - p) % self.block.len());
            VertexId(self.prefix_total + copy * self.block_total + self.block_offsets[j] + pos)
        }
    }

    /// Level and position within the level.
    pub fn locate(&self, v: VertexId) -> (usize, usize) {
        let v = v.0;
        if v < self.prefix_total {
            let l = self.prefix_offsets.partition_point(|&o| o <= v) - 1;
            (l, v - self.prefix_offsets[l])
        } else {
            let r = v - self.prefix_total;
            let (copy, rem) = (r / self.block_total, r % self.block_total);
            let j = self.block_offsets.partition_point(|&o| o <= rem) - 1;
            (self.prefix.len() + copy * self.block.len() + j, rem - self.block_offsets[j])
        }
    }

    pub fn level_of(&self, v: VertexId) -> usize {
        self.locate(v).0
    }

    pub fn level_size(&self, l: usize) -> usize {
        self.level(l).names.len()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        let (l, p) = self.locate(v);
        self.level(l).out[p].len()
    }

    pub fn range(&self, e: Edge) -> VertexId {
        let (l, p) = self.locate(e.source);
        let o = &self.level(l).out[p][e.slot];
        self.vertex_at(if o.next { l + 1 } else { l }, o.range)
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        let (l, p) = self.locate(v);
        instantiate(&self.level(l).names[p], l, self.is_first_copy(l))
    }

    pub fn edge_name(&self, e: Edge) -> String {
        let (l, p) = self.locate(e.source);
        let level = self.level(l);
        let (id, _, _) = level
            .edges
            .iter()
            .find(|(_, s, slot)| *s == p && *slot == e.slot)
            .expect("edge slot out of range");
        instantiate(id, l, self.is_first_copy(l))
    }

    /// Levels at which the template at spec index `k` can occur.
    fn template_level(&self, k: usize, name: &str, template: &str) -> Option<usize> {
        let p = self.prefix.len();
        let b = self.block.len();
        let matches = |l: usize| {
            if k < p {
                l == k
            } else {
                l >= p && (l - p) % b == k - p
            }
        };
        if let Some((pre, post)) = template.split_once("{i}") {
            let mid = name.strip_prefix(pre)?.strip_suffix(post)?;
            let n: usize = mid.parse().ok()?;
            let l = n.checked_sub(1)?;
            return (matches(l) && instantiate(template, l, self.is_first_copy(l)) == name).then_some(l);
        }
        if name == template {
            return Some(k);
        }
        let (base, l) = name.rsplit_once('@')?;
        let l: usize = l.parse().ok()?;
        (base == template && matches(l) && !self.is_first_copy(l)).then_some(l)
    }

    fn all_levels(&self) -> impl Iterator<Item = (usize, &Level)> {
        self.prefix.iter().chain(self.block.iter()).enumerate()
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        for (k, level) in self.all_levels() {
            for (pos, t) in level.names.iter().enumerate() {
                if let Some(l) = self.template_level(k, name, t) {
                    return Some(self.vertex_at(l, pos));
                }
            }
        }
        None
    }

    pub fn edge_by_name(&self, name: &str) -> Option<Edge> {
        for (k, level) in self.all_levels() {
            for (t, src, slot) in &level.edges {
                if let Some(l) = self.template_level(k, name, t) {
                    return Some(Edge { source: self.vertex_at(l, *src), slot: *slot });
                }
            }
        }
        None
    }

    /// Vertices reachable from `v` without passing level `max_level`.
    pub fn reachable_within(&self, v: VertexId, max_level: usize) -> HashSet<VertexId> {
        let mut seen = HashSet::from([v]);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for slot in 0..self.out_degree(x) {
                let y = self.range(Edge { source: x, slot });
                if self.level_of(y) <= max_level && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// One representative sink per distinct level template.
    pub fn sinks(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (k, level) in self.all_levels() {
            for (pos, o) in level.out.iter().enumerate() {
                if o.is_empty() {
                    out.push(self.vertex_at(k, pos));
                }
            }
        }
        out
    }

    /// Cycles inside a single level whose vertices have out-degree one.
    pub fn exitless_cycles(&self) -> Vec<FinitePath> {
        let mut out = Vec::new();
        for (k, level) in self.all_levels() {
            let step = |p: usize| match level.out[p].as_slice() {
                [o] if !o.next => Some(o.range),
                _ => None,
            };
            for cycle in functional_cycles(level.names.len(), step) {
                let start = self.vertex_at(k, cycle[0]);
                let edges = cycle
                    .iter()
                    .map(|&p| Edge { source: self.vertex_at(k, p), slot: 0 })
                    .collect();
                out.push(FinitePath::from_edges(start, edges));
            }
        }
        out
    }

    /// Start vertices of semi-tails: wandering paths through vertices of
    /// out-degree one. Such a path ends up circling the repeating block.
    pub fn semi_tails(&self) -> Vec<VertexId> {
        let b = self.block.len();
        let index: Vec<(usize, usize)> = (0..b)
            .flat_map(|j| (0..self.block[j].names.len()).map(move |p| (j, p)))
            .collect();
        let node = |j: usize, p: usize| self.block_offsets[j] + p;
        let step = |n: usize| {
            let (j, p) = index[n];
            match self.block[j].out[p].as_slice() {
                [o] if o.next => Some(node((j + 1) % b, o.range)),
                [o] => Some(node(j, o.range)),
                _ => None,
            }
        };
        functional_cycles(index.len(), step)
            .into_iter()
            .filter(|c| crosses(c, &index, self))
            .map(|c| {
                let (j, p) = index[c[0]];
                self.vertex_at(self.prefix.len() + j, p)
            })
            .collect()
    }
}

/// Whether a quotient cycle steps to the next level somewhere. Cycles that
/// never do are exitless cycles inside one level.
fn crosses(cycle: &[usize], index: &[(usize, usize)], g: &LeveledGraph) -> bool {
    cycle.iter().any(|&n| {
        let (j, p) = index[n];
        g.block[j].out[p].first().is_some_and(|o| o.next)
    })
}

/// Cycles of the partial map `step` on `0..n`, each listed once.
pub(crate) fn functional_cycles(n: usize, step: impl Fn(usize) -> Option<usize>) -> Vec<Vec<usize>> {
    // 0 = unvisited, 1 = on the current walk, 2 = done
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        let mut walk = Vec::new();
        let mut x = s;
        loop {
            match state[x] {
                2 => break,
                1 => {
                    let at = walk.iter().position(|&y| y == x).unwrap();
                    cycles.push(walk[at..].to_vec());
                    break;
                }
                _ => {
                    state[x] = 1;
                    walk.push(x);
                    match step(x) {
                        Some(y) => x = y,
                        None => break,
                    }
                }
            }
        }
        for y in walk {
            state[y] = 2;
        }
    }
    cycles
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn edge(id: &str, s: &str, r: &str, next: bool) -> LevelEdge {
        LevelEdge { id: id.into(), source: s.into(), range: r.into(), next }
    }

    /// `w{i}` on every level, an edge to the next level everywhere and a
    /// loop on odd levels.
    pub(crate) fn ladder() -> LeveledGraph {
        let odd = LevelSpec {
            vertices: vec!["w{i}".into()],
            edges: vec![edge("e{i}", "w{i}", "w{i}", true), edge("f{i}", "w{i}", "w{i}", false)],
        };
        let even = LevelSpec {
            vertices: vec!["w{i}".into()],
            edges: vec![edge("e{i}", "w{i}", "w{i}", true)],
        };
        LeveledGraph::new(vec![], vec![odd, even]).unwrap()
    }

    #[test]
    fn names_round_trip() {
        let g = ladder();
        for i in 0..20 {
            let v = VertexId(i);
            assert_eq!(g.vertex_by_name(&g.vertex_name(v)), Some(v));
            let e = Edge { source: v, slot: 0 };
            assert_eq!(g.edge_by_name(&g.edge_name(e)), Some(e));
        }
        assert_eq!(g.vertex_name(VertexId(4)), "w5");
        assert_eq!(g.edge_name(Edge { source: VertexId(4), slot: 1 }), "f5");
        assert_eq!(g.edge_by_name("f4"), None);
    }

    #[test]
    fn suffix_names_on_later_copies() {
        let lvl = LevelSpec {
            vertices: vec!["u".into(), "x".into()],
            edges: vec![edge("a", "u", "u", true), edge("b", "u", "x", true), edge("c", "x", "u", true)],
        };
        let root = LevelSpec { vertices: vec!["r".into()], edges: vec![edge("s", "r", "x", true)] };
        let g = LeveledGraph::new(vec![root], vec![lvl]).unwrap();
        assert_eq!(g.vertex_name(VertexId(1)), "u");
        assert_eq!(g.vertex_name(VertexId(4)), "x@2");
        assert_eq!(g.vertex_by_name("x@2"), Some(VertexId(4)));
        assert_eq!(g.vertex_by_name("x@1"), None);
        assert_eq!(g.range(Edge { source: VertexId(0), slot: 0 }), VertexId(2));
        assert_eq!(g.locate(VertexId(5)), (3, 0));
        // x has out-degree one and feeds back into u, which branches
        assert!(g.semi_tails().is_empty());
    }

    #[test]
    fn detects_semi_tails_and_exitless_cycles() {
        let chain = LevelSpec { vertices: vec!["c".into()], edges: vec![edge("t", "c", "c", true)] };
        let g = LeveledGraph::new(vec![], vec![chain]).unwrap();
        assert_eq!(g.semi_tails(), vec![VertexId(0)]);
        let looped = LevelSpec { vertices: vec!["c".into()], edges: vec![edge("t", "c", "c", false)] };
        let g = LeveledGraph::new(vec![], vec![looped]).unwrap();
        assert_eq!(g.exitless_cycles().len(), 1);
        assert!(g.semi_tails().is_empty());
        assert!(ladder().semi_tails().is_empty());
        assert!(ladder().exitless_cycles().is_empty());
    }
}
