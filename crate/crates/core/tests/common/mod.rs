//! Shared fixtures: the example graphs, a random table generator and a
//! sample of representable boundary points.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tfgkit::graph::{Degree, Edge, FinitePath, Graph, VertexId};
use tfgkit::pathspace::{BoundaryPoint, CylinderAtom};
use tfgkit::{io, FullGroup, Piece, Table};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn graph(name: &str) -> Graph {
    io::parse_graph(&read_data(&format!("{name}.json"))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Out-edges of `v` used when sampling: all of them, or the first few
/// members of an omega family.
pub fn sample_edges(g: &Graph, v: VertexId, omega: usize) -> Vec<Edge> {
    g.edges_from(v, omega)
}

/// Vertices that random tables and points start from.
pub fn roots(g: &Graph) -> Vec<VertexId> {
    g.vertices_up_to(3)
}

/// A random partition of the union of `Z(v)` over the roots into cylinder
/// atoms, obtained by repeatedly splitting an atom: at a regular vertex into
/// one cylinder per edge, at an infinite emitter by peeling off one edge.
pub fn random_partition(g: &Graph, rng: &mut ChaCha8Rng, splits: usize) -> Vec<CylinderAtom> {
    let mut atoms: Vec<CylinderAtom> = roots(g).into_iter().map(CylinderAtom::vertex).collect();
    for _ in 0..splits {
        let k = rng.random_range(0..atoms.len());
        let at = atoms[k].mu.end(g);
        match g.out_degree(at) {
            Degree::Finite(0) => {}
            Degree::Finite(_) => {
                let a = atoms.swap_remove(k);
                for e in g.edges_from(at, 0) {
                    atoms.push(CylinderAtom::cylinder(a.mu.pushed(e)));
                }
            }
            Degree::Infinite => {
                let free: Vec<Edge> =
                    sample_edges(g, at, 4).into_iter().filter(|e| !atoms[k].excluded.contains(e)).collect();
                let Some(&e) = free.choose(rng) else { continue };
                let a = atoms.swap_remove(k);
                atoms.push(CylinderAtom::cylinder(a.mu.pushed(e)));
                let mut rest = a.excluded.clone();
                rest.insert(e);
                atoms.push(CylinderAtom { mu: a.mu, excluded: rest });
            }
        }
    }
    atoms
}

/// Atoms that can be exchanged: same end vertex and same excluded edges.
pub fn exchange_classes(g: &Graph, atoms: &[CylinderAtom]) -> Vec<Vec<CylinderAtom>> {
    let mut classes: BTreeMap<(VertexId, BTreeSet<usize>), Vec<CylinderAtom>> = BTreeMap::new();
    for a in atoms {
        let key = (a.mu.end(g), a.excluded.iter().map(|e| e.slot).collect());
        classes.entry(key).or_default().push(a.clone());
    }
    classes.into_values().collect()
}

/// A random permutation of the atoms of a random partition within each
/// exchange class.
pub fn random_permutation_table(g: &Graph, rng: &mut ChaCha8Rng) -> Table {
    let splits = rng.random_range(1..8);
    let atoms = random_partition(g, rng, splits);
    let mut pieces = Vec::new();
    for class in exchange_classes(g, &atoms) {
        let mut images = class.clone();
        images.shuffle(rng);
        for (a, b) in class.iter().zip(&images) {
            if a.mu != b.mu {
                pieces.push(Piece::new(b.mu.clone(), a.excluded.clone(), a.mu.clone()));
            }
        }
    }
    let t = Table::new(pieces);
    FullGroup::new(g).validate(&t).expect("random permutation table is valid");
    t
}

/// A random element: a permutation table, or a product of two.
pub fn random_table(g: &Graph, rng: &mut ChaCha8Rng) -> Table {
    let group = FullGroup::new(g);
    let s = random_permutation_table(g, rng);
    if rng.random_bool(0.5) {
        let t = random_permutation_table(g, rng);
        let st = group.compose(&s, &t);
        group.validate(&st).expect("composite is valid");
        st
    } else {
        s
    }
}

/// A cyclic permutation of `k` atoms of one exchange class, when the
/// partition has a class that large.
pub fn cycle_table(g: &Graph, rng: &mut ChaCha8Rng, k: usize) -> Option<Table> {
    for _ in 0..200 {
        let splits = rng.random_range(k..3 * k + 3);
        let atoms = random_partition(g, rng, splits);
        let Some(class) = exchange_classes(g, &atoms).into_iter().find(|c| c.len() >= k) else { continue };
        let pieces = (0..k)
            .map(|i| {
                let (a, b) = (&class[i], &class[(i + 1) % k]);
                Piece::new(b.mu.clone(), a.excluded.clone(), a.mu.clone())
            })
            .collect();
        return Some(Table::new(pieces));
    }
    None
}

/// Representable points: eventually periodic ones with prefix length at
/// most `prefix` and primitive cycle length at most `cycle`, and finite
/// ones ending at infinite emitters. Omega families contribute `omega`
/// members.
pub fn sample_points(g: &Graph, prefix: usize, cycle: usize, omega: usize) -> Vec<BoundaryPoint> {
    let mut paths: Vec<FinitePath> = roots(g).into_iter().map(FinitePath::trivial).collect();
    let mut all = paths.clone();
    for _ in 0..prefix {
        paths = paths
            .iter()
            .flat_map(|p| sample_edges(g, p.end(g), omega).into_iter().map(move |e| p.pushed(e)))
            .collect();
        all.extend(paths.iter().cloned());
    }
    let mut out = BTreeSet::new();
    for p in &all {
        let at = p.end(g);
        if g.is_singular(at) {
            out.insert(BoundaryPoint::finite(g, p.clone()).unwrap());
        }
        let mut loops = vec![FinitePath::trivial(at)];
        for _ in 0..cycle {
            loops = loops
                .iter()
                .flat_map(|c| sample_edges(g, c.end(g), omega).into_iter().map(move |e| c.pushed(e)))
                .collect();
            for c in &loops {
                if c.end(g) == at {
                    out.insert(BoundaryPoint::periodic(g, p.clone(), c.edges.clone()).unwrap());
                }
            }
        }
    }
    out.into_iter().collect()
}
