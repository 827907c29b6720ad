//! Structural conditions on graphs: reachability, path counts, conditions
//! (L), (K), (T), (W) and the omega-return condition, cofinality,
//! minimality, degenerate vertices and isolated boundary points.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{functional_cycles, Degree, Edge, FinitePath, Graph, GraphError, Multiplicity, VertexId};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PathCount {
    Exact(u64),
    /// At least the cap (possibly infinitely many).
    AtLeast(u64),
}

impl PathCount {
    pub fn at_least(self, n: u64) -> bool {
        match self {
            PathCount::Exact(k) => k >= n,
            PathCount::AtLeast(k) => k >= n,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    Cycle(FinitePath),
    Vertex(VertexId),
    Unreachable { from: VertexId, to: VertexId },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn yes() -> Verdict {
        Verdict { holds: true, witness: None }
    }

    fn no(w: Witness) -> Verdict {
        Verdict { holds: false, witness: Some(w) }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IsolatedPoint {
    Sink(VertexId),
    ExitlessCycle(FinitePath),
    SemiTail(VertexId),
}

/// Aggregated arcs between vertices; `None` multiplicity means infinitely
/// many parallel edges.
struct Arcs {
    succ: Vec<Vec<(usize, Option<u64>)>>,
    reach: Vec<Vec<bool>>,
}

impl Arcs {
    fn new(n: usize, list: impl IntoIterator<Item = (usize, usize, Multiplicity)>) -> Arcs {
        let mut agg: Vec<BTreeMap<usize, Option<u64>>> = vec![BTreeMap::new(); n];
        for (s, r, m) in list {
            let slot = agg[s].entry(r).or_insert(Some(0));
            *slot = match (m, *slot) {
                (Multiplicity::Single, Some(k)) => Some(k + 1),
                _ => None,
            };
        }
        let succ: Vec<Vec<_>> = agg.into_iter().map(|m| m.into_iter().collect()).collect();
        let reach = (0..n)
            .map(|v| {
                let mut seen = vec![false; n];
                seen[v] = true;
                let mut stack = vec![v];
                while let Some(x) = stack.pop() {
                    for &(y, _) in &succ[x] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                seen
            })
            .collect();
        Arcs { succ, reach }
    }

    fn of(g: &Graph) -> Arcs {
        let n = g.vertex_count().unwrap_or(0);
        Arcs::new(n, g.families().into_iter().map(|(s, r, m)| (s.0, r.0, m)))
    }

    fn on_cycle(&self, u: usize) -> bool {
        self.succ[u].iter().any(|&(x, _)| self.reach[x][u])
    }

    fn count(&self, v: usize, w: usize, cap: u64) -> PathCount {
        if !self.reach[v][w] {
            return PathCount::Exact(0);
        }
        let n = self.succ.len();
        let relevant: Vec<bool> = (0..n).map(|u| self.reach[v][u] && self.reach[u][w]).collect();
        for u in (0..n).filter(|&u| relevant[u]) {
            for &(x, m) in &self.succ[u] {
                if relevant[x] && (m.is_none() || self.reach[x][u]) {
                    return PathCount::AtLeast(cap);
                }
            }
        }
        let mut memo = vec![None; n];
        let total = self.count_from(v, w, &relevant, &mut memo, cap);
        if total >= cap {
            PathCount::AtLeast(cap)
        } else {
            PathCount::Exact(total)
        }
    }

    fn count_from(&self, u: usize, w: usize, rel: &[bool], memo: &mut [Option<u64>], cap: u64) -> u64 {
        if let Some(c) = memo[u] {
            return c;
        }
        let mut c = u64::from(u == w);
        for &(x, m) in &self.succ[u] {
            if rel[x] {
                let sub = self.count_from(x, w, rel, memo, cap);
                c = c.saturating_add(m.unwrap_or(u64::MAX).saturating_mul(sub)).min(cap);
            }
        }
        memo[u] = Some(c);
        c
    }
}

pub fn reaches(g: &Graph, v: VertexId, w: VertexId) -> bool {
    match g.as_leveled() {
        Some(l) => l.reachable_within(v, l.level_of(w)).contains(&w),
        None => Arcs::of(g).reach[v.0][w.0],
    }
}

/// Number of paths from `v` to `w` (the trivial path counts when `v == w`),
/// saturating at `cap`.
pub fn count_paths_capped(g: &Graph, v: VertexId, w: VertexId, cap: u64) -> Result<PathCount, GraphError> {
    g.require_finite("path counting")?;
    Ok(Arcs::of(g).count(v.0, w.0, cap))
}

fn exitless_cycles(g: &Graph) -> Vec<FinitePath> {
    if let Some(l) = g.as_leveled() {
        return l.exitless_cycles();
    }
    let n = g.vertex_count().unwrap_or(0);
    let step = |v: usize| match g.out_degree(VertexId(v)) {
        Degree::Finite(1) => Some(g.range(Edge { source: VertexId(v), slot: 0 }).0),
        _ => None,
    };
    functional_cycles(n, step)
        .into_iter()
        .map(|c| {
            let edges = c.iter().map(|&v| Edge { source: VertexId(v), slot: 0 }).collect();
            FinitePath::from_edges(VertexId(c[0]), edges)
        })
        .collect()
}

/// Every cycle has an exit.
pub fn check_condition_l(g: &Graph) -> Verdict {
    match exitless_cycles(g).into_iter().next() {
        Some(c) => Verdict::no(Witness::Cycle(c)),
        None => Verdict::yes(),
    }
}

/// Number of return paths at `v` (paths back to `v` not meeting it in
/// between), capped.
fn return_paths(g: &Graph, v: usize, cap: u64) -> PathCount {
    let n = g.vertex_count().unwrap_or(0);
    let fams = g.families();
    let cut = Arcs::new(
        n,
        fams.iter().filter(|(s, _, _)| s.0 != v).map(|&(s, r, m)| (s.0, r.0, m)),
    );
    let mut total: u64 = 0;
    for &(s, r, m) in &fams {
        if s.0 != v {
            continue;
        }
        let tail = if r.0 == v { PathCount::Exact(1) } else { cut.count(r.0, v, cap) };
        match (m, tail) {
            (_, PathCount::Exact(0)) => {}
            (Multiplicity::Omega, _) | (_, PathCount::AtLeast(_)) => return PathCount::AtLeast(cap),
            (Multiplicity::Single, PathCount::Exact(k)) => total = total.saturating_add(k),
        }
    }
    if total >= cap {
        PathCount::AtLeast(cap)
    } else {
        PathCount::Exact(total)
    }
}

/// No vertex has exactly one return path.
pub fn check_condition_k(g: &Graph) -> Result<Verdict, GraphError> {
    let n = g.require_finite("condition (K)")?;
    for v in 0..n {
        if return_paths(g, v, 2) == PathCount::Exact(1) {
            return Ok(Verdict::no(Witness::Vertex(VertexId(v))));
        }
    }
    Ok(Verdict::yes())
}

/// Every vertex reaches some vertex along at least two distinct paths.
pub fn check_condition_t(g: &Graph) -> Result<Verdict, GraphError> {
    let n = g.require_finite("condition (T)")?;
    let arcs = Arcs::of(g);
    for v in 0..n {
        if !(0..n).any(|w| arcs.count(v, w, 2).at_least(2)) {
            return Ok(Verdict::no(Witness::Vertex(VertexId(v))));
        }
    }
    Ok(Verdict::yes())
}

/// Holds vacuously when there are finitely many vertices: no path can
/// wander.
pub fn check_condition_w(g: &Graph) -> Result<Verdict, GraphError> {
    g.require_finite("condition (W)")?;
    Ok(Verdict::yes())
}

/// Every infinite emitter `v` has infinitely many out-edges whose range
/// reaches `v` again.
pub fn check_condition_infinity(g: &Graph) -> Result<Verdict, GraphError> {
    if g.as_leveled().is_some() {
        return Ok(Verdict::yes());
    }
    let arcs = Arcs::of(g);
    for (s, r, m) in g.families() {
        if m == Multiplicity::Omega && !arcs.reach[r.0][s.0] {
            return Ok(Verdict::no(Witness::Vertex(s)));
        }
    }
    Ok(Verdict::yes())
}

fn reach_all(arcs: &Arcs, targets: &[usize]) -> Verdict {
    for v in 0..arcs.succ.len() {
        for &u in targets {
            if !arcs.reach[v][u] {
                return Verdict::no(Witness::Unreachable { from: VertexId(v), to: VertexId(u) });
            }
        }
    }
    Verdict::yes()
}

/// Every vertex reaches every infinite path; with finitely many vertices
/// that means every vertex on a cycle.
pub fn check_cofinal(g: &Graph) -> Result<Verdict, GraphError> {
    let n = g.require_finite("cofinality")?;
    let arcs = Arcs::of(g);
    let cyclic: Vec<usize> = (0..n).filter(|&u| arcs.on_cycle(u)).collect();
    Ok(reach_all(&arcs, &cyclic))
}

pub fn check_strongly_connected(g: &Graph) -> Result<Verdict, GraphError> {
    let n = g.require_finite("strong connectivity")?;
    let all: Vec<usize> = (0..n).collect();
    Ok(reach_all(&Arcs::of(g), &all))
}

/// Cofinal, and every vertex reaches every singular vertex.
pub fn check_minimal(g: &Graph) -> Result<Verdict, GraphError> {
    let n = g.require_finite("minimality")?;
    let cofinal = check_cofinal(g)?;
    if !cofinal.holds {
        return Ok(cofinal);
    }
    let singular: Vec<usize> = (0..n).filter(|&v| g.is_singular(VertexId(v))).collect();
    Ok(reach_all(&Arcs::of(g), &singular))
}

pub fn has_sinks(g: &Graph) -> bool {
    match g.as_leveled() {
        Some(l) => !l.sinks().is_empty(),
        None => g.vertices().into_iter().any(|v| g.is_sink(v)),
    }
}

/// Vertex types that obstruct the dense embedding of the full group; see
/// [`DegenerateKind`] for the six shapes.
pub fn degenerate_vertices(g: &Graph) -> Result<Vec<(VertexId, DegenerateKind)>, GraphError> {
    let n = g.require_finite("degenerate vertex detection")?;
    let fams = g.families();
    // incoming single edges by source, and whether an omega family arrives
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut omega_in = vec![false; n];
    for &(s, r, m) in &fams {
        match m {
            Multiplicity::Single => incoming[r.0].push(s.0),
            Multiplicity::Omega => omega_in[r.0] = true,
        }
    }
    let in_empty = |v: usize| incoming[v].is_empty() && !omega_in[v];
    let only = |v: usize| (!omega_in[v] && incoming[v].len() == 1).then(|| incoming[v][0]);
    let mut out = Vec::new();
    for v in 0..n {
        let deg = g.out_degree(VertexId(v));
        let mut push = |k| out.push((VertexId(v), k));
        if let Some(s) = only(v) {
            if s == v {
                push(DegenerateKind::LonelyLoop);
            } else {
                if only(s) == Some(v) {
                    push(DegenerateKind::TwoCycle);
                }
                if deg.is_singular() && in_empty(s) {
                    push(DegenerateKind::SingularFedBySource);
                }
            }
        }
        if !omega_in[v] && incoming[v].len() == 2 {
            let (a, b) = (incoming[v][0], incoming[v][1]);
            let other = if a == v { Some(b) } else if b == v { Some(a) } else { None };
            if other.is_some_and(|o| o != v && in_empty(o)) {
                push(DegenerateKind::LoopFedBySource);
            }
        }
        if in_empty(v) {
            match deg {
                Degree::Infinite => push(DegenerateKind::SourceInfiniteEmitter),
                Degree::Finite(0) => push(DegenerateKind::IsolatedVertex),
                _ => {}
            }
        }
    }
    Ok(out)
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum DegenerateKind {
    /// The only edge into `v` is a loop at `v`.
    LonelyLoop,
    /// Exactly two edges enter `v`: a loop and an edge from a source.
    LoopFedBySource,
    /// `v` and some `w` each receive exactly one edge, from each other.
    TwoCycle,
    /// An infinite emitter receiving no edges.
    SourceInfiniteEmitter,
    /// A singular vertex whose only incoming edge leaves a source.
    SingularFedBySource,
    /// No edges in or out.
    IsolatedVertex,
}

impl DegenerateKind {
    /// The conventional type number, 1 to 6.
    pub fn number(self) -> u8 {
        match self {
            DegenerateKind::LonelyLoop => 1,
            DegenerateKind::LoopFedBySource => 2,
            DegenerateKind::TwoCycle => 3,
            DegenerateKind::SourceInfiniteEmitter => 4,
            DegenerateKind::SingularFedBySource => 5,
            DegenerateKind::IsolatedVertex => 6,
        }
    }
}

/// Sinks, exitless cycles and semi-tails: the sources of isolated points of
/// the boundary path space.
pub fn isolated_point_witnesses(g: &Graph) -> Vec<IsolatedPoint> {
    let mut out: Vec<IsolatedPoint> = match g.as_leveled() {
        Some(l) => l.sinks().into_iter().map(IsolatedPoint::Sink).collect(),
        None => g.vertices().into_iter().filter(|&v| g.is_sink(v)).map(IsolatedPoint::Sink).collect(),
    };
    out.extend(exitless_cycles(g).into_iter().map(IsolatedPoint::ExitlessCycle));
    if let Some(l) = g.as_leveled() {
        out.extend(l.semi_tails().into_iter().map(IsolatedPoint::SemiTail));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessReport {
    Cycle { cycle: String },
    Vertex { vertex: String },
    Unreachable { from: String, to: String },
}

impl WitnessReport {
    pub fn new(g: &Graph, w: &Witness) -> WitnessReport {
        match w {
            Witness::Cycle(c) => WitnessReport::Cycle { cycle: c.render(g) },
            Witness::Vertex(v) => WitnessReport::Vertex { vertex: g.vertex_name(*v) },
            Witness::Unreachable { from, to } => WitnessReport::Unreachable {
                from: g.vertex_name(*from),
                to: g.vertex_name(*to),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateReport {
    pub vertex: String,
    #[serde(rename = "type")]
    pub kind: u8,
}

/// Everything [`analyze`] decides about a graph. Conditions that are not
/// decided for leveled-infinite graphs are `null`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub finite: bool,
    #[serde(rename = "L")]
    pub l: bool,
    #[serde(rename = "K")]
    pub k: Option<bool>,
    #[serde(rename = "T")]
    pub t: Option<bool>,
    #[serde(rename = "W")]
    pub w: Option<bool>,
    pub infinity: Option<bool>,
    pub cofinal: Option<bool>,
    pub strongly_connected: Option<bool>,
    pub minimal: Option<bool>,
    pub has_sinks: bool,
    pub degenerate: Vec<DegenerateReport>,
    pub isolated_points: Vec<String>,
    pub witnesses: BTreeMap<String, WitnessReport>,
}

pub fn analyze(g: &Graph) -> ConditionReport {
    let mut witnesses = BTreeMap::new();
    let mut record = |key: &str, v: Result<Verdict, GraphError>| -> Option<bool> {
        let v = v.ok()?;
        if let Some(w) = &v.witness {
            witnesses.insert(key.to_string(), WitnessReport::new(g, w));
        }
        Some(v.holds)
    };
    let l = record("L", Ok(check_condition_l(g))).unwrap_or(false);
    let k = record("K", check_condition_k(g));
    let t = record("T", check_condition_t(g));
    let w = record("W", check_condition_w(g));
    let infinity = record("infinity", check_condition_infinity(g));
    let cofinal = record("cofinal", check_cofinal(g));
    let strongly_connected = record("strongly_connected", check_strongly_connected(g));
    let minimal = record("minimal", check_minimal(g));
    let degenerate = degenerate_vertices(g)
        .unwrap_or_default()
        .into_iter()
        .map(|(v, kind)| DegenerateReport { vertex: g.vertex_name(v), kind: kind.number() })
        .collect();
    let isolated_points = isolated_point_witnesses(g)
        .iter()
        .map(|p| match p {
            IsolatedPoint::Sink(v) => format!("sink {}", g.vertex_name(*v)),
            IsolatedPoint::ExitlessCycle(c) => format!("exitless cycle {}", c.render(g)),
            IsolatedPoint::SemiTail(v) => format!("semi-tail from {}", g.vertex_name(*v)),
        })
        .collect();
    ConditionReport {
        finite: g.is_finite(),
        l,
        k,
        t,
        w,
        infinity,
        cofinal,
        strongly_connected,
        minimal,
        has_sinks: has_sinks(g),
        degenerate,
        isolated_points,
        witnesses,
    }
}
