//! The boundary path space: representable points, cylinder atoms
//! `Z(mu \ F)` and exact set algebra on finite unions of atoms.

mod point;

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Degree, Edge, FinitePath, Graph, VertexId};

pub use point::BoundaryPoint;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("edges do not form a path in the graph")]
    InvalidPath,
    #[error("finite boundary path ends at `{0}`, which is neither a sink nor an infinite emitter")]
    NotSingular(String),
    #[error("empty cycle")]
    EmptyCycle,
    #[error("cycle does not close up at the end of the prefix")]
    NotACycle,
    #[error("excluded edge `{0}` does not leave the end of the stem")]
    ForeignExclusion(String),
    #[error("edge `{0}` is already excluded")]
    AlreadyExcluded(String),
    #[error("cannot shift past the end of a finite path")]
    ShiftTooFar,
}

impl PathError {
    pub fn code(&self) -> &'static str {
        match self {
            PathError::InvalidPath => "invalid_path",
            PathError::NotSingular(_) => "not_singular",
            PathError::EmptyCycle => "empty_cycle",
            PathError::NotACycle => "not_a_cycle",
            PathError::ForeignExclusion(_) => "foreign_exclusion",
            PathError::AlreadyExcluded(_) => "already_excluded",
            PathError::ShiftTooFar => "shift_too_far",
        }
    }
}

/// `Z(mu \ F)`: boundary paths extending `mu` whose next edge, if any, is
/// not in `F`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CylinderAtom {
    pub mu: FinitePath,
    pub excluded: BTreeSet<Edge>,
}

impl CylinderAtom {
    pub fn new(g: &Graph, mu: FinitePath, excluded: BTreeSet<Edge>) -> Result<CylinderAtom, PathError> {
        if !mu.is_valid(g) {
            return Err(PathError::InvalidPath);
        }
        let end = mu.end(g);
        if let Some(&e) = excluded.iter().find(|&&e| e.source != end || !g.has_edge(e)) {
            let name = if g.has_edge(e) { g.edge_name(e) } else { format!("slot {}", e.slot) };
            return Err(PathError::ForeignExclusion(name));
        }
        Ok(CylinderAtom { mu, excluded })
    }

    pub fn cylinder(mu: FinitePath) -> CylinderAtom {
        CylinderAtom { mu, excluded: BTreeSet::new() }
    }

    pub fn vertex(v: VertexId) -> CylinderAtom {
        Self::cylinder(FinitePath::trivial(v))
    }

    /// Empty exactly when the stem ends at a regular vertex and every
    /// out-edge is excluded.
    pub fn is_empty(&self, g: &Graph) -> bool {
        match g.out_degree(self.mu.end(g)) {
            Degree::Finite(k) => k > 0 && self.excluded.len() == k,
            Degree::Infinite => false,
        }
    }

    pub fn contains_point(&self, p: &BoundaryPoint) -> bool {
        p.has_prefix(&self.mu) && p.edge_at(self.mu.len()).is_none_or(|e| !self.excluded.contains(&e))
    }

    /// `Z(mu \ F) = Z(mu \ (F + e))` disjoint union `Z(mu e)`.
    pub fn split(&self, g: &Graph, e: Edge) -> Result<(CylinderAtom, CylinderAtom), PathError> {
        if e.source != self.mu.end(g) || !g.has_edge(e) {
            return Err(PathError::ForeignExclusion(format!("slot {}", e.slot)));
        }
        if self.excluded.contains(&e) {
            return Err(PathError::AlreadyExcluded(g.edge_name(e)));
        }
        let mut rest = self.clone();
        rest.excluded.insert(e);
        Ok((rest, CylinderAtom::cylinder(self.mu.pushed(e))))
    }

    pub fn intersect(&self, other: &CylinderAtom) -> Option<CylinderAtom> {
        let (a, b) = (self, other);
        if a.mu == b.mu {
            let excluded = a.excluded.union(&b.excluded).copied().collect();
            return Some(CylinderAtom { mu: a.mu.clone(), excluded });
        }
        let (short, long) = if a.mu.len() < b.mu.len() { (a, b) } else { (b, a) };
        if !short.mu.is_prefix_of(&long.mu) {
            return None;
        }
        let next = long.mu.edges[short.mu.len()];
        (!short.excluded.contains(&next)).then(|| long.clone())
    }

    /// Possibly empty result of the intersection.
    pub fn meets(&self, g: &Graph, other: &CylinderAtom) -> bool {
        self.intersect(other).is_some_and(|c| !c.is_empty(g))
    }

    /// `self \ other` as disjoint nonempty atoms, each below `self`.
    pub fn subtract(&self, g: &Graph, other: &CylinderAtom) -> Vec<CylinderAtom> {
        let (a, b) = (self, other);
        if a.mu == b.mu {
            return b
                .excluded
                .difference(&a.excluded)
                .map(|&e| CylinderAtom::cylinder(a.mu.pushed(e)))
                .collect();
        }
        if b.mu.is_prefix_of(&a.mu) {
            let next = a.mu.edges[b.mu.len()];
            return if b.excluded.contains(&next) { vec![a.clone()] } else { Vec::new() };
        }
        if !a.mu.is_prefix_of(&b.mu) {
            return vec![a.clone()];
        }
        let next = b.mu.edges[a.mu.len()];
        if a.excluded.contains(&next) {
            return vec![a.clone()];
        }
        let (rest, child) = a.split(g, next).expect("next edge leaves the stem");
        let mut out = Vec::new();
        if !rest.is_empty(g) {
            out.push(rest);
        }
        out.extend(child.subtract(g, b));
        out
    }

    pub fn is_subset(&self, g: &Graph, other: &CylinderAtom) -> bool {
        self.is_empty(g) || self.subtract(g, other).is_empty()
    }

    /// Some representable point in the atom: the stem itself when it ends
    /// at a singular vertex, otherwise a greedy extension until it hits a
    /// singular vertex or closes a cycle. `None` when the greedy walk
    /// wanders (leveled-infinite graphs) or the atom is empty.
    pub fn witness_point(&self, g: &Graph) -> Option<BoundaryPoint> {
        if self.is_empty(g) {
            return None;
        }
        let mut path = self.mu.clone();
        let mut at = path.end(g);
        if g.is_singular(at) {
            return BoundaryPoint::finite(g, path).ok();
        }
        let first = (0..).map(|slot| Edge { source: at, slot }).find(|e| !self.excluded.contains(e))?;
        let base = path.len();
        path.edges.push(first);
        at = g.range(first);
        let mut seen = vec![(self.mu.end(g), base)];
        let limit = base + 4 * g.vertex_count().unwrap_or(0) + 4;
        while path.len() <= limit {
            if let Some(&(_, k)) = seen.iter().find(|(v, k)| *v == at && *k > base) {
                let cycle = path.edges[k..].to_vec();
                return BoundaryPoint::periodic(g, path.prefix(k), cycle).ok();
            }
            if g.is_singular(at) {
                return BoundaryPoint::finite(g, path).ok();
            }
            seen.push((at, path.len()));
            let e = Edge { source: at, slot: 0 };
            path.edges.push(e);
            at = g.range(e);
        }
        None
    }

    /// `Z(mu \ {f1, f2})` style rendering.
    pub fn render(&self, g: &Graph) -> String {
        if self.excluded.is_empty() {
            format!("Z({})", self.mu.render(g))
        } else {
            let f: Vec<String> = self.excluded.iter().map(|&e| g.edge_name(e)).collect();
            format!("Z({} \\ {{{}}})", self.mu.render(g), f.join(","))
        }
    }
}

/// A finite union of cylinder atoms, not necessarily disjoint.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CompactOpen {
    pub atoms: Vec<CylinderAtom>,
}

impl CompactOpen {
    pub fn empty() -> CompactOpen {
        CompactOpen::default()
    }

    pub fn from_atoms(atoms: Vec<CylinderAtom>) -> CompactOpen {
        CompactOpen { atoms }
    }

    pub fn atom(a: CylinderAtom) -> CompactOpen {
        CompactOpen { atoms: vec![a] }
    }

    /// The whole boundary path space of a finite graph.
    pub fn full(g: &Graph) -> CompactOpen {
        CompactOpen { atoms: g.vertices().into_iter().map(CylinderAtom::vertex).collect() }
    }

    pub fn contains_point(&self, p: &BoundaryPoint) -> bool {
        self.atoms.iter().any(|a| a.contains_point(p))
    }

    /// Disjoint atoms covering the same set, empty atoms dropped.
    pub fn disjoint(&self, g: &Graph) -> CompactOpen {
        let mut out: Vec<CylinderAtom> = Vec::new();
        for a in &self.atoms {
            let mut pieces = if a.is_empty(g) { Vec::new() } else { vec![a.clone()] };
            for b in &out {
                pieces = pieces.iter().flat_map(|p| p.subtract(g, b)).collect();
            }
            out.extend(pieces);
        }
        CompactOpen { atoms: out }
    }

    /// Disjoint atoms with complete sibling families merged back into their
    /// parent, sorted.
    pub fn normalize(&self, g: &Graph) -> CompactOpen {
        let mut atoms = self.disjoint(g).atoms;
        while merge_once(g, &mut atoms) {}
        atoms.sort();
        CompactOpen { atoms }
    }

    pub fn union(&self, g: &Graph, other: &CompactOpen) -> CompactOpen {
        let mut atoms = self.disjoint(g).atoms;
        atoms.extend(other.subtract(g, self).atoms);
        CompactOpen { atoms }
    }

    pub fn intersect(&self, g: &Graph, other: &CompactOpen) -> CompactOpen {
        let (x, y) = (self.disjoint(g), other.disjoint(g));
        let atoms = x
            .atoms
            .iter()
            .flat_map(|a| y.atoms.iter().filter_map(move |b| a.intersect(b)))
            .filter(|c| !c.is_empty(g))
            .collect();
        CompactOpen { atoms }
    }

    pub fn subtract(&self, g: &Graph, other: &CompactOpen) -> CompactOpen {
        let mut atoms = self.disjoint(g).atoms;
        for b in &other.atoms {
            atoms = atoms.iter().flat_map(|a| a.subtract(g, b)).collect();
        }
        CompactOpen { atoms }
    }

    pub fn is_empty(&self, g: &Graph) -> bool {
        self.atoms.iter().all(|a| a.is_empty(g))
    }

    pub fn is_subset(&self, g: &Graph, other: &CompactOpen) -> bool {
        self.subtract(g, other).is_empty(g)
    }

    /// Set equality, by mutual subtraction.
    pub fn set_eq(&self, g: &Graph, other: &CompactOpen) -> bool {
        self.is_subset(g, other) && other.is_subset(g, self)
    }

    /// Largest stem length among the atoms.
    pub fn depth(&self) -> usize {
        self.atoms.iter().map(|a| a.mu.len()).max().unwrap_or(0)
    }
}

/// One merge step: `Z(nu \ F)` with `Z(nu e)` for `e` in `F`, or all
/// children `Z(nu e)` of a regular `nu`.
fn merge_once(g: &Graph, atoms: &mut Vec<CylinderAtom>) -> bool {
    let parent = |a: &CylinderAtom| -> Option<(FinitePath, Edge)> {
        let &e = a.mu.edges.last()?;
        a.excluded.is_empty().then(|| (a.mu.prefix(a.mu.len() - 1), e))
    };
    for j in 0..atoms.len() {
        let Some((nu, e)) = parent(&atoms[j]) else { continue };
        if let Some(i) = atoms.iter().position(|a| a.mu == nu && a.excluded.contains(&e)) {
            atoms[i].excluded.remove(&e);
            atoms.remove(j);
            return true;
        }
    }
    let mut families: BTreeMap<FinitePath, Vec<usize>> = BTreeMap::new();
    for (j, a) in atoms.iter().enumerate() {
        if let Some((nu, _)) = parent(a) {
            families.entry(nu).or_default().push(j);
        }
    }
    for (nu, members) in families {
        if g.out_degree(nu.end(g)) == Degree::Finite(members.len()) {
            let mut members = members;
            members.sort_unstable_by(|a, b| b.cmp(a));
            for j in members {
                atoms.remove(j);
            }
            atoms.push(CylinderAtom::cylinder(nu));
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> (Graph, Edge, Edge) {
        let v = VertexId(0);
        (Graph::rose(2), Edge { source: v, slot: 0 }, Edge { source: v, slot: 1 })
    }

    fn z(es: &[Edge], f: &[Edge]) -> CylinderAtom {
        CylinderAtom {
            mu: FinitePath::from_edges(VertexId(0), es.to_vec()),
            excluded: f.iter().copied().collect(),
        }
    }

    #[test]
    fn intersection_cases() {
        let (_, a, b) = e2();
        assert_eq!(z(&[a], &[]).intersect(&z(&[a, b], &[])), Some(z(&[a, b], &[])));
        assert_eq!(z(&[a], &[b]).intersect(&z(&[a, b], &[])), None);
        assert_eq!(z(&[], &[a]).intersect(&z(&[], &[b])), Some(z(&[], &[a, b])));
        assert_eq!(z(&[a], &[]).intersect(&z(&[b], &[])), None);
    }

    #[test]
    fn emptiness_and_split() {
        let (g, a, b) = e2();
        assert!(z(&[], &[a, b]).is_empty(&g));
        assert!(!z(&[], &[a]).is_empty(&g));
        let (rest, child) = z(&[], &[]).split(&g, a).unwrap();
        assert_eq!((rest, child), (z(&[], &[a]), z(&[a], &[])));
        assert_eq!(z(&[], &[a]).split(&g, a), Err(PathError::AlreadyExcluded("a".into())));
    }

    #[test]
    fn subtraction_walks_down() {
        let (g, a, b) = e2();
        let diff = z(&[], &[]).subtract(&g, &z(&[a, b], &[]));
        assert_eq!(diff, vec![z(&[], &[a]), z(&[a], &[b])]);
        assert_eq!(z(&[], &[]).subtract(&g, &z(&[], &[a])), vec![z(&[a], &[])]);
        assert!(z(&[a, b], &[]).subtract(&g, &z(&[a], &[])).is_empty());
    }

    #[test]
    fn normal_forms() {
        let (g, a, b) = e2();
        let x = CompactOpen::from_atoms(vec![z(&[a], &[]), z(&[b], &[])]);
        assert_eq!(x.normalize(&g).atoms, vec![z(&[], &[])]);
        let y = CompactOpen::from_atoms(vec![z(&[], &[a]), z(&[a, b], &[])]);
        assert_eq!(y.normalize(&g), y);
        let overlapping = CompactOpen::from_atoms(vec![z(&[], &[]), z(&[a], &[])]);
        assert_eq!(overlapping.normalize(&g).atoms, vec![z(&[], &[])]);
        assert!(CompactOpen::atom(z(&[], &[a])).set_eq(&g, &CompactOpen::atom(z(&[b], &[]))));
    }

    #[test]
    fn set_operations() {
        let (g, a, b) = e2();
        let left = CompactOpen::atom(z(&[a], &[]));
        let right = CompactOpen::atom(z(&[a, b], &[]));
        assert!(left.subtract(&g, &left).is_empty(&g));
        assert!(right.is_subset(&g, &left));
        assert!(left.intersect(&g, &right).set_eq(&g, &right));
        assert!(left.union(&g, &right).set_eq(&g, &left));
        let complement = CompactOpen::full(&g).subtract(&g, &left);
        assert!(complement.set_eq(&g, &CompactOpen::atom(z(&[b], &[]))));
    }

    #[test]
    fn witness_points() {
        let (g, a, b) = e2();
        let p = z(&[b], &[a]).witness_point(&g).unwrap();
        assert_eq!(p.render(&g), "v:b,b / (a)");
        assert!(z(&[b], &[a]).contains_point(&p));
        assert!(!z(&[b, a], &[]).contains_point(&p));
        assert_eq!(z(&[], &[a, b]).witness_point(&g), None);
    }
}
