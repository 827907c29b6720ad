//! Images of the graph algebra generators under the embedding, and a
//! symbolic check of the Cuntz-Krieger relations on them.

use serde::Serialize;

use crate::graph::{Degree, Edge, FinitePath, Graph, VertexId};

use super::algebra::{FormalSum, Monomial};
use super::Embedding;

/// Images of `p_v` and `s_e`, in labeling order. Omega families and the
/// vertices of an infinite graph are cut off at a bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorImage {
    pub vertices: Vec<(VertexId, Monomial)>,
    pub edges: Vec<(Edge, Monomial)>,
}

impl GeneratorImage {
    pub fn vertex_image(&self, v: VertexId) -> Option<&Monomial> {
        self.vertices.iter().find(|(w, _)| *w == v).map(|(_, m)| m)
    }

    pub fn edge_image(&self, e: Edge) -> Option<&Monomial> {
        self.edges.iter().find(|(f, _)| *f == e).map(|(_, m)| m)
    }

    /// One line per generator: `p[w1] -> s(b) s(b)*`, `s[h] -> s(bb) s(a)*`.
    pub fn render(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (v, m) in &self.vertices {
            out.push_str(&format!("p[{}] -> {}\n", g.vertex_name(*v), m));
        }
        for (e, m) in &self.edges {
            out.push_str(&format!("s[{}] -> {}\n", g.edge_name(*e), m));
        }
        out
    }
}

impl Embedding<'_> {
    /// `p_w -> s_{phi*(w)} s_{phi*(w)}*` and `s_e -> s_{phi*(e)} s_{phi*(r(e))}*`.
    /// `bound` limits the members of each omega family and, for infinite
    /// graphs, the number of vertices.
    pub fn emit_generators(&self, bound: usize) -> GeneratorImage {
        let g = self.graph();
        let lab = self.labeling();
        let n = g.vertex_count().unwrap_or(bound);
        let vertices: Vec<VertexId> = (1..=n).map(|i| lab.vertex_with_label(i)).collect();
        let word = |v: VertexId| self.phi_star(&FinitePath::trivial(v));
        let mut image = GeneratorImage { vertices: Vec::new(), edges: Vec::new() };
        for &v in &vertices {
            image.vertices.push((v, Monomial::projection(word(v))));
        }
        for &v in &vertices {
            let k = match g.out_degree(v) {
                Degree::Finite(k) => k,
                Degree::Infinite => g.single_count(v) + bound,
            };
            for j in 1..=k {
                let e = lab.edge_with_label(v, j);
                let m = Monomial::term(self.phi_star(&FinitePath::from_edges(v, vec![e])), word(g.range(e)));
                image.edges.push((e, m));
            }
        }
        image
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CkVerdict {
    pub holds: bool,
    pub failures: Vec<String>,
}

/// Checks the graph algebra relations on the images:
/// vertex images are mutually orthogonal projections (summing to 1 when
/// there are finitely many vertices), `s_e* s_e = p_{r(e)}`,
/// `p_{s(e)} s_e = s_e`, `s_e* s_f = 0` for `e != f`, and
/// `sum_e s_e s_e* = p_v` at every vertex with finitely many out-edges.
///
/// Only the generators present in `img` take part; for omega families and
/// infinite graphs this is a sample.
pub fn ck_check(g: &Graph, img: &GeneratorImage) -> CkVerdict {
    type Sum = FormalSum<i64>;
    let sum = |m: &Monomial| Sum::from(m.clone());
    let vname = |v: VertexId| format!("p[{}]", g.vertex_name(v));
    let ename = |e: Edge| format!("s[{}]", g.edge_name(e));
    let mut failures = Vec::new();

    for (i, (v, p)) in img.vertices.iter().enumerate() {
        let p = sum(p);
        if p.adjoint() != p || !(&p * &p).equivalent(&p) {
            failures.push(format!("{} is not a projection", vname(*v)));
        }
        for (w, q) in &img.vertices[i + 1..] {
            if !(&p * &sum(q)).is_zero() {
                failures.push(format!("{} {} != 0", vname(*v), vname(*w)));
            }
        }
    }
    if g.vertex_count() == Some(img.vertices.len()) {
        let total = img.vertices.iter().fold(Sum::zero(), |acc, (_, p)| acc + sum(p));
        if !total.equivalent(&Sum::one()) {
            failures.push("vertex projections do not sum to 1".into());
        }
    }
    for (e, s) in &img.edges {
        let s = sum(s);
        let name = ename(*e);
        if let Some(p) = img.vertex_image(g.range(*e)) {
            if !(&s.adjoint() * &s).equivalent(&sum(p)) {
                failures.push(format!("{name}* {name} != {}", vname(g.range(*e))));
            }
        }
        if let Some(p) = img.vertex_image(e.source) {
            if !(&sum(p) * &s).equivalent(&s) {
                failures.push(format!("{} {name} != {name}", vname(e.source)));
            }
        }
    }
    for (i, (e, s)) in img.edges.iter().enumerate() {
        for (f, t) in &img.edges[i + 1..] {
            if !(&sum(s).adjoint() * &sum(t)).is_zero() {
                failures.push(format!("{}* {} != 0", ename(*e), ename(*f)));
            }
        }
    }
    for (v, p) in &img.vertices {
        let Degree::Finite(k) = g.out_degree(*v) else { continue };
        let out: Vec<&Monomial> = img.edges.iter().filter(|(e, _)| e.source == *v).map(|(_, m)| m).collect();
        if k == 0 || out.len() != k {
            continue;
        }
        let total = out.into_iter().fold(Sum::zero(), |acc, m| acc + &sum(m) * &sum(m).adjoint());
        if !total.equivalent(&sum(p)) {
            failures.push(format!("sum of s_e s_e* over edges out of {} != {}", g.vertex_name(*v), vname(*v)));
        }
    }
    CkVerdict { holds: failures.is_empty(), failures }
}
