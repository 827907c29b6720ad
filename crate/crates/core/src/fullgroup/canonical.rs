//! Canonical tables. A table is unfolded into a trie over source stems:
//! a leaf at stem `nu` holding `mu` means `nu z -> mu z` below `nu`. After
//! collapsing every node whose children are translates of one target, the
//! trie depends only on the action, and reading it back off gives the
//! coarsest table.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Degree, Edge, FinitePath, Graph, VertexId};

use super::{Piece, Table};

#[derive(Clone, PartialEq, Eq, Debug)]
enum Node {
    Leaf(FinitePath),
    /// At a regular vertex `children` lists every out-edge and `default` is
    /// unused. At an infinite emitter, `default` is the target of the stem
    /// itself and of every child not listed.
    Split { default: FinitePath, children: BTreeMap<usize, Node> },
}

fn expand(g: &Graph, node: &mut Node, at: VertexId) {
    if let Node::Leaf(kappa) = node {
        let children = match g.out_degree(at) {
            Degree::Finite(k) => (0..k)
                .map(|slot| (slot, Node::Leaf(kappa.pushed(Edge { source: at, slot }))))
                .collect(),
            Degree::Infinite => BTreeMap::new(),
        };
        *node = Node::Split { default: kappa.clone(), children };
    }
}

fn child(node: &mut Node, at: VertexId, slot: usize) -> &mut Node {
    match node {
        Node::Split { default, children } => children
            .entry(slot)
            .or_insert_with(|| Node::Leaf(default.pushed(Edge { source: at, slot }))),
        Node::Leaf(_) => unreachable!("node expanded before descent"),
    }
}

fn insert(g: &Graph, roots: &mut BTreeMap<VertexId, Node>, p: &Piece) {
    let start = p.lambda.start;
    let mut node = roots.entry(start).or_insert_with(|| Node::Leaf(FinitePath::trivial(start)));
    let mut at = start;
    for &e in &p.lambda.edges {
        expand(g, node, at);
        node = child(node, at, e.slot);
        at = g.range(e);
    }
    if p.excluded.is_empty() {
        *node = Node::Leaf(p.mu.clone());
        return;
    }
    expand(g, node, at);
    let excluded: BTreeSet<usize> = p.excluded.iter().map(|e| e.slot).collect();
    match g.out_degree(at) {
        Degree::Finite(k) => {
            if let Node::Split { children, .. } = node {
                for slot in (0..k).filter(|s| !excluded.contains(s)) {
                    children.insert(slot, Node::Leaf(p.mu.pushed(Edge { source: at, slot })));
                }
            }
        }
        Degree::Infinite => {
            for &slot in &excluded {
                child(node, at, slot);
            }
            if let Node::Split { default, children } = node {
                *default = p.mu.clone();
                children.retain(|s, _| excluded.contains(s));
            }
        }
    }
}

/// Drops the last edge of `kappa` when it is the edge `e`.
fn untranslate(kappa: &FinitePath, e: Edge) -> Option<FinitePath> {
    (kappa.edges.last() == Some(&e)).then(|| kappa.prefix(kappa.len() - 1))
}

fn collapse(g: &Graph, node: Node, at: VertexId) -> Node {
    let Node::Split { default, children } = node else { return node };
    let children: BTreeMap<usize, Node> = children
        .into_iter()
        .map(|(slot, c)| (slot, collapse(g, c, g.range(Edge { source: at, slot }))))
        .collect();
    match g.out_degree(at) {
        Degree::Finite(0) => Node::Leaf(default),
        Degree::Finite(_) => {
            let mut common: Option<FinitePath> = None;
            for (&slot, c) in &children {
                let parent = match c {
                    Node::Leaf(kappa) => untranslate(kappa, Edge { source: at, slot }),
                    Node::Split { .. } => None,
                };
                match (parent, &common) {
                    (Some(mu), None) => common = Some(mu),
                    (Some(mu), Some(c)) if &mu == c => {}
                    _ => return Node::Split { default, children },
                }
            }
            match common {
                Some(mu) => Node::Leaf(mu),
                None => Node::Split { default, children },
            }
        }
        Degree::Infinite => {
            let children: BTreeMap<usize, Node> = children
                .into_iter()
                .filter(|(slot, c)| *c != Node::Leaf(default.pushed(Edge { source: at, slot: *slot })))
                .collect();
            if children.is_empty() {
                Node::Leaf(default)
            } else {
                Node::Split { default, children }
            }
        }
    }
}

fn emit(g: &Graph, node: &Node, nu: &FinitePath, out: &mut Vec<Piece>) {
    let at = nu.end(g);
    match node {
        Node::Leaf(mu) => {
            if mu != nu {
                out.push(Piece::plain(mu.clone(), nu.clone()));
            }
        }
        Node::Split { default, children } => match g.out_degree(at) {
            Degree::Infinite => {
                if default != nu {
                    let excluded = children.keys().map(|&slot| Edge { source: at, slot }).collect();
                    out.push(Piece::new(default.clone(), excluded, nu.clone()));
                }
                for (&slot, c) in children {
                    emit(g, c, &nu.pushed(Edge { source: at, slot }), out);
                }
            }
            Degree::Finite(_) => {
                let mut groups: BTreeMap<FinitePath, Vec<usize>> = BTreeMap::new();
                for (&slot, c) in children {
                    let e = Edge { source: at, slot };
                    match c {
                        Node::Leaf(kappa) => match untranslate(kappa, e) {
                            Some(mu) => groups.entry(mu).or_default().push(slot),
                            None => emit(g, c, &nu.pushed(e), out),
                        },
                        Node::Split { .. } => emit(g, c, &nu.pushed(e), out),
                    }
                }
                for (mu, slots) in groups {
                    if &mu == nu {
                        continue;
                    }
                    if let [slot] = slots[..] {
                        let e = Edge { source: at, slot };
                        out.push(Piece::plain(mu.pushed(e), nu.pushed(e)));
                    } else {
                        let excluded = children
                            .keys()
                            .filter(|s| !slots.contains(s))
                            .map(|&slot| Edge { source: at, slot })
                            .collect();
                        out.push(Piece::new(mu, excluded, nu.clone()));
                    }
                }
            }
        },
    }
}

pub(super) fn canonicalize(g: &Graph, t: &Table) -> Table {
    let mut roots = BTreeMap::new();
    for p in &t.pieces {
        insert(g, &mut roots, p);
    }
    let mut pieces = Vec::new();
    for (v, node) in roots {
        let node = collapse(g, node, v);
        emit(g, &node, &FinitePath::trivial(v), &mut pieces);
    }
    pieces.sort_by(|a, b| a.lambda.cmp(&b.lambda).then_with(|| a.excluded.cmp(&b.excluded)));
    Table::new(pieces)
}
