//! Elements of the topological full group as finite tables of pieces
//! `(mu, F, lambda)`, each mapping `lambda z` to `mu z` on `Z(lambda \ F)`.
//! Points outside the union of the domains are fixed.

mod arrow;
mod canonical;

use std::collections::BTreeSet;

use crate::graph::{check_condition_l, Edge, FinitePath, Graph};
use crate::pathspace::{BoundaryPoint, CompactOpen, CylinderAtom, PathError};

pub use arrow::Arrow;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("piece {index}: {reason}")]
    InvalidPiece { index: usize, reason: String },
    #[error("domains of pieces {0} and {1} overlap")]
    OverlappingDomains(usize, usize),
    #[error("codomains of pieces {0} and {1} overlap")]
    OverlappingCodomains(usize, usize),
    #[error("union of domains differs from union of codomains")]
    UnbalancedSupport,
    #[error("domain of piece {0} meets the codomain of piece {1}")]
    DomainMeetsCodomain(usize, usize),
    #[error("the graph has a cycle without exit, so germs do not determine elements")]
    NotEffective,
    #[error("arrow is not in the groupoid: the points have no common tail at that lag")]
    InvalidArrow,
    #[error("arrow starts and ends at the same point")]
    IsotropyArrow,
    #[error("no separating cylinders within the depth budget")]
    NoSeparatingCylinders,
    #[error(transparent)]
    Path(#[from] PathError),
}

impl TableError {
    pub fn code(&self) -> &'static str {
        match self {
            TableError::InvalidPiece { .. } => "invalid_piece",
            TableError::OverlappingDomains(..) => "overlapping_domains",
            TableError::OverlappingCodomains(..) => "overlapping_codomains",
            TableError::UnbalancedSupport => "unbalanced_support",
            TableError::DomainMeetsCodomain(..) => "domain_meets_codomain",
            TableError::NotEffective => "not_effective",
            TableError::InvalidArrow => "invalid_arrow",
            TableError::IsotropyArrow => "isotropy_arrow",
            TableError::NoSeparatingCylinders => "no_separating_cylinders",
            TableError::Path(e) => e.code(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Piece {
    pub mu: FinitePath,
    pub excluded: BTreeSet<Edge>,
    pub lambda: FinitePath,
}

impl Piece {
    pub fn new(mu: FinitePath, excluded: BTreeSet<Edge>, lambda: FinitePath) -> Piece {
        Piece { mu, excluded, lambda }
    }

    pub fn plain(mu: FinitePath, lambda: FinitePath) -> Piece {
        Piece::new(mu, BTreeSet::new(), lambda)
    }

    pub fn domain(&self) -> CylinderAtom {
        CylinderAtom { mu: self.lambda.clone(), excluded: self.excluded.clone() }
    }

    pub fn codomain(&self) -> CylinderAtom {
        CylinderAtom { mu: self.mu.clone(), excluded: self.excluded.clone() }
    }

    /// `|mu| - |lambda|`.
    pub fn lag(&self) -> i64 {
        self.mu.len() as i64 - self.lambda.len() as i64
    }

    pub fn inverse(&self) -> Piece {
        Piece::new(self.lambda.clone(), self.excluded.clone(), self.mu.clone())
    }

    fn check(&self, g: &Graph) -> Result<(), String> {
        CylinderAtom::new(g, self.lambda.clone(), self.excluded.clone()).map_err(|e| e.to_string())?;
        CylinderAtom::new(g, self.mu.clone(), self.excluded.clone()).map_err(|e| e.to_string())?;
        if self.domain().is_empty(g) {
            return Err("the excluded edges cover every out-edge".into());
        }
        Ok(())
    }

    pub fn render(&self, g: &Graph) -> String {
        let f: Vec<String> = self.excluded.iter().map(|&e| g.edge_name(e)).collect();
        format!("({}, {{{}}}, {})", self.mu.render(g), f.join(","), self.lambda.render(g))
    }
}

/// A finite table of pieces. Whether it is a valid element is checked by
/// [`FullGroup::validate`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Table {
    pub pieces: Vec<Piece>,
}

impl Table {
    pub fn identity() -> Table {
        Table::default()
    }

    pub fn new(pieces: Vec<Piece>) -> Table {
        Table { pieces }
    }

    pub fn domain(&self) -> CompactOpen {
        CompactOpen::from_atoms(self.pieces.iter().map(Piece::domain).collect())
    }

    pub fn codomain(&self) -> CompactOpen {
        CompactOpen::from_atoms(self.pieces.iter().map(Piece::codomain).collect())
    }

    pub fn inverse(&self) -> Table {
        Table::new(self.pieces.iter().map(Piece::inverse).collect())
    }
}

/// Group operations over a fixed graph.
#[derive(Clone, Copy, Debug)]
pub struct FullGroup<'g> {
    g: &'g Graph,
    effective: bool,
}

impl<'g> FullGroup<'g> {
    pub fn new(g: &'g Graph) -> FullGroup<'g> {
        FullGroup { g, effective: check_condition_l(g).holds }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    /// Condition (L): elements are determined by their action on points.
    pub fn is_effective(&self) -> bool {
        self.effective
    }

    /// Pieces are well formed, domains are pairwise disjoint, codomains are
    /// pairwise disjoint and both cover the same set.
    pub fn validate(&self, t: &Table) -> Result<(), TableError> {
        let g = self.g;
        for (index, p) in t.pieces.iter().enumerate() {
            p.check(g).map_err(|reason| TableError::InvalidPiece { index, reason })?;
        }
        for (i, p) in t.pieces.iter().enumerate() {
            for (j, q) in t.pieces.iter().enumerate().skip(i + 1) {
                if p.domain().meets(g, &q.domain()) {
                    return Err(TableError::OverlappingDomains(i, j));
                }
                if p.codomain().meets(g, &q.codomain()) {
                    return Err(TableError::OverlappingCodomains(i, j));
                }
            }
        }
        if !t.domain().set_eq(g, &t.codomain()) {
            return Err(TableError::UnbalancedSupport);
        }
        Ok(())
    }

    /// Validates and wraps pieces as a table.
    pub fn table(&self, pieces: Vec<Piece>) -> Result<Table, TableError> {
        let t = Table::new(pieces);
        self.validate(&t)?;
        Ok(t)
    }

    pub fn identity(&self) -> Table {
        Table::identity()
    }

    fn piece_at<'t>(&self, t: &'t Table, p: &BoundaryPoint) -> Option<&'t Piece> {
        t.pieces.iter().find(|q| q.domain().contains_point(p))
    }

    pub fn apply(&self, t: &Table, p: &BoundaryPoint) -> BoundaryPoint {
        match self.piece_at(t, p) {
            Some(q) => {
                let tail = p.drop_edges(self.g, q.lambda.len()).expect("point extends the stem");
                tail.prepend(&q.mu)
            }
            None => p.clone(),
        }
    }

    /// Lag of `t` at `p`: `|mu| - |lambda|` of the piece moving `p`, or 0.
    pub fn lag_at(&self, t: &Table, p: &BoundaryPoint) -> i64 {
        self.piece_at(t, p).map_or(0, Piece::lag)
    }

    /// `s` after `t`.
    pub fn compose(&self, s: &Table, t: &Table) -> Table {
        let g = self.g;
        let mut out = Vec::new();
        // where t moves points: follow each t-piece into the pieces of s
        for p in &t.pieces {
            let mut rest = vec![p.codomain()];
            for q in &s.pieces {
                let dom = q.domain();
                for a in rest.iter().filter_map(|c| c.intersect(&dom)) {
                    if a.is_empty(g) {
                        continue;
                    }
                    let pre = p.lambda.concat(&a.mu.suffix(g, p.mu.len()));
                    let img = q.mu.concat(&a.mu.suffix(g, q.lambda.len()));
                    out.push(Piece::new(img, a.excluded.clone(), pre));
                }
                rest = rest.iter().flat_map(|c| c.subtract(g, &dom)).collect();
            }
            for a in rest {
                let pre = p.lambda.concat(&a.mu.suffix(g, p.mu.len()));
                out.push(Piece::new(a.mu, a.excluded, pre));
            }
        }
        // where t is the identity: s acts alone
        let moved = t.domain();
        for q in &s.pieces {
            for a in CompactOpen::atom(q.domain()).subtract(g, &moved).atoms {
                let img = q.mu.concat(&a.mu.suffix(g, q.lambda.len()));
                out.push(Piece::new(img, a.excluded, a.mu));
            }
        }
        let result = Table::new(out);
        debug_assert!(self.validate(&result).is_ok(), "composition produced an invalid table");
        result
    }

    pub fn inverse(&self, t: &Table) -> Table {
        t.inverse()
    }

    pub fn power(&self, t: &Table, k: usize) -> Table {
        let mut acc = Table::identity();
        for _ in 0..k {
            acc = self.compose(t, &acc);
            if self.effective {
                acc = canonical::canonicalize(self.g, &acc);
            }
        }
        acc
    }

    /// Smallest `k` in `1..=max` with `t^k` the identity.
    pub fn order(&self, t: &Table, max: usize) -> Result<Option<usize>, TableError> {
        let mut acc = Table::identity();
        for k in 1..=max {
            acc = self.canonicalize(&self.compose(t, &acc))?;
            if acc.pieces.is_empty() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// The unique coarsest table with the same action: identity pieces
    /// dropped and sibling pieces merged. Needs condition (L).
    pub fn canonicalize(&self, t: &Table) -> Result<Table, TableError> {
        if !self.effective {
            return Err(TableError::NotEffective);
        }
        Ok(canonical::canonicalize(self.g, t))
    }

    pub fn is_identity(&self, t: &Table) -> Result<bool, TableError> {
        Ok(self.canonicalize(t)?.pieces.is_empty())
    }

    pub fn germ_equal(&self, s: &Table, t: &Table) -> Result<bool, TableError> {
        self.is_identity(&self.compose(s, &t.inverse()))
    }

    /// Closure of the set of moved points, as the domains of the canonical
    /// table.
    pub fn support(&self, t: &Table) -> Result<CompactOpen, TableError> {
        Ok(self.canonicalize(t)?.domain().normalize(self.g))
    }

    /// `s t s^-1 t^-1`.
    pub fn commutator(&self, s: &Table, t: &Table) -> Table {
        self.compose(&self.compose(s, t), &self.compose(&s.inverse(), &t.inverse()))
    }

    /// A partial bisection whose domain and codomain are disjoint, completed
    /// by its inverse into an involution.
    pub fn involution_hat(&self, partial: &[Piece]) -> Result<Table, TableError> {
        let g = self.g;
        for (index, p) in partial.iter().enumerate() {
            p.check(g).map_err(|reason| TableError::InvalidPiece { index, reason })?;
        }
        for (i, p) in partial.iter().enumerate() {
            for (j, q) in partial.iter().enumerate() {
                if i < j && p.domain().meets(g, &q.domain()) {
                    return Err(TableError::OverlappingDomains(i, j));
                }
                if i < j && p.codomain().meets(g, &q.codomain()) {
                    return Err(TableError::OverlappingCodomains(i, j));
                }
                if p.domain().meets(g, &q.codomain()) {
                    return Err(TableError::DomainMeetsCodomain(i, j));
                }
            }
        }
        let mut pieces = partial.to_vec();
        pieces.extend(partial.iter().map(Piece::inverse));
        Ok(Table::new(pieces))
    }

    /// A partial bisection with equal domain and codomain unions, extended
    /// by the identity elsewhere.
    pub fn extend_by_identity(&self, partial: &[Piece]) -> Result<Table, TableError> {
        self.table(partial.to_vec())
    }

    pub fn contains_arrow(&self, t: &Table, ar: &Arrow) -> bool {
        self.apply(t, &ar.y) == ar.x && self.lag_at(t, &ar.y) == ar.lag
    }

    /// An involution swapping disjoint cylinders around the two ends of the
    /// arrow, inside `within`, trying stems up to `budget` edges deeper
    /// than the first common tail.
    pub fn transposition_for_arrow(&self, ar: &Arrow, within: &CompactOpen, budget: usize) -> Result<Table, TableError> {
        let g = self.g;
        if ar.x == ar.y {
            return Err(TableError::IsotropyArrow);
        }
        let (m, n) = ar.alignment(g).ok_or(TableError::InvalidArrow)?;
        for d in 0..=budget {
            let (Some(lambda), Some(mu)) = (ar.y.initial(n + d), ar.x.initial(m + d)) else { break };
            let mut choices = vec![BTreeSet::new()];
            if let Some(e) = separating_edge(&mu, &lambda) {
                choices.push(BTreeSet::from([e]));
            }
            for f in choices {
                let piece = Piece::new(mu.clone(), f, lambda.clone());
                let (dom, cod) = (piece.domain(), piece.codomain());
                let inside = |a: &CylinderAtom| CompactOpen::atom(a.clone()).is_subset(g, within);
                if piece.check(g).is_ok()
                    && !dom.meets(g, &cod)
                    && dom.contains_point(&ar.y)
                    && cod.contains_point(&ar.x)
                    && inside(&dom)
                    && inside(&cod)
                {
                    return self.involution_hat(&[piece]);
                }
            }
        }
        Err(TableError::NoSeparatingCylinders)
    }
}

/// When one stem extends the other, the first edge of the extension.
fn separating_edge(a: &FinitePath, b: &FinitePath) -> Option<Edge> {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    (short.is_prefix_of(long) && short.len() < long.len()).then(|| long.edges[short.len()])
}
