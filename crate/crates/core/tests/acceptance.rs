//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.
//!
//! A criterion listed in `KNOWN_RED` is reported as FAIL without failing
//! the run; any other failure, or a known red that starts passing, exits
//! nonzero.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::IndexedRandom;
use rand::Rng;

use tfgkit::bratteli::{BratteliDiagram, DiagramSpec, GammaElement};
use tfgkit::embed::{ck_check, code_partition_check, Embedding, GeneratorImage, Labeling, Monomial};
use tfgkit::fullgroup::{Arrow, FullGroup, Table};
use tfgkit::graph::{analyze, check_condition_k, check_minimal, Degree, FinitePath, Graph};
use tfgkit::pathspace::{BoundaryPoint, CompactOpen, CylinderAtom};
use tfgkit::io;

use common::*;

/// The two-vertex display prints `s_{f_j} -> s_{b a^j b} s_a*`; the coding
/// gives `s_{a^j b} s_a*`, and the printed image would not even lie under
/// `p_{w_2} = s_a s_a*`.
const KNOWN_RED: &[usize] = &[2];

type Outcome = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    match (out, limit) {
        (Ok(detail), Some(l)) if took > l => Err(format!("{detail}; took {took:.2?}, limit {l:?}")),
        (Ok(detail), _) => Ok(format!("{detail}; {took:.2?}")),
        (Err(e), _) => Err(e),
    }
}

fn a(n: usize) -> String {
    "a".repeat(n)
}

fn emit(name: &str, bound: usize) -> (Graph, String) {
    let g = graph(name);
    let text = Embedding::new(&g, Labeling::declaration()).unwrap().emit_generators(bound).render(&g);
    (g, text)
}

fn compare_lines(expected: &[String], actual: &str) -> Outcome {
    let actual: Vec<&str> = actual.lines().collect();
    if actual.len() != expected.len() {
        return Err(format!("{} lines emitted, {} expected", actual.len(), expected.len()));
    }
    let diffs: Vec<String> = expected
        .iter()
        .zip(&actual)
        .filter(|(e, a)| e.as_str() != **a)
        .map(|(e, a)| format!("`{a}` vs `{e}`"))
        .collect();
    if diffs.is_empty() {
        Ok(format!("{} lines byte-exact", expected.len()))
    } else {
        Err(format!("{} of {} lines differ, first: {}", diffs.len(), expected.len(), diffs[0]))
    }
}

fn criterion_1() -> Outcome {
    let (_, text) = emit("e_infinity", 10);
    let mut expected = vec!["p[w] -> 1".to_string()];
    expected.extend((1..=10).map(|j| format!("s[e[{j}]] -> s({}b)", a(j - 1))));
    compare_lines(&expected, &text)
}

fn criterion_2() -> Outcome {
    let (_, text) = emit("two_vertex", 10);
    let mut expected = vec!["p[w1] -> s(b) s(b)*".to_string(), "p[w2] -> s(a) s(a)*".into(), "s[h] -> s(bb) s(a)*".into()];
    expected.extend((1..=10).map(|j| format!("s[e[{j}]] -> s(b{}b) s(b)*", a(j))));
    expected.extend((1..=10).map(|j| format!("s[f[{j}]] -> s(b{}b) s(a)*", a(j))));
    compare_lines(&expected, &text)
}

fn criterion_3() -> Outcome {
    let (_, text) = emit("ladder", 6);
    let mut expected: Vec<String> = (1..=6).map(|i| format!("p[w{i}] -> s({0}b) s({0}b)*", a(i - 1))).collect();
    for j in 1..=6 {
        if j % 2 == 0 {
            expected.push(format!("s[e{j}] -> s({}b) s({}b)*", a(j - 1), a(j)));
        } else {
            expected.push(format!("s[e{j}] -> s({}bb) s({}b)*", a(j - 1), a(j)));
            expected.push(format!("s[f{j}] -> s({0}ba) s({0}b)*", a(j - 1)));
        }
    }
    compare_lines(&expected, &text)
}

/// Every image of `img` whose generator is not beyond `bound` in an omega
/// family, with each letter flipped in turn.
fn mutants(g: &Graph, img: &GeneratorImage, bound: usize) -> Vec<(String, GeneratorImage)> {
    let flips = |m: &Monomial| -> Vec<Monomial> {
        let Monomial::Term { alpha, beta } = m else { return vec![] };
        let mut out: Vec<Monomial> = (0..alpha.len()).map(|k| Monomial::term(alpha.flip(k), beta.clone())).collect();
        out.extend((0..beta.len()).map(|k| Monomial::term(alpha.clone(), beta.flip(k))));
        out
    };
    let mut out = Vec::new();
    for (i, (v, m)) in img.vertices.iter().enumerate() {
        for f in flips(m) {
            let mut bad = img.clone();
            bad.vertices[i].1 = f;
            out.push((format!("p[{}]", g.vertex_name(*v)), bad));
        }
    }
    for (i, (e, m)) in img.edges.iter().enumerate() {
        if g.edge_ref(*e).index.is_some_and(|j| j > bound) {
            continue;
        }
        for f in flips(m) {
            let mut bad = img.clone();
            bad.edges[i].1 = f;
            out.push((format!("s[{}]", g.edge_name(*e)), bad));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for name in ["e2", "two_vertex", "e22", "e32"] {
        let g = graph(name);
        let emb = Embedding::new(&g, Labeling::declaration()).unwrap();
        // one extra omega member so that mutating member 10 can collide
        // with member 11
        let img = emb.emit_generators(11);
        let verdict = ck_check(&g, &img);
        if !verdict.holds {
            return Err(format!("{name}: {:?}", verdict.failures));
        }
        for (what, bad) in mutants(&g, &img, 10) {
            if ck_check(&g, &bad).holds {
                return Err(format!("{name}: a mutation of {what} passes"));
            }
            checked += 1;
        }
    }
    Ok(format!("relations hold on 4 graphs, {checked} single-letter mutations all detected"))
}

fn criterion_5(rng: &mut rand_chacha::ChaCha8Rng) -> Outcome {
    let g = graph("one_orbit");
    let report = analyze(&g);
    if !(report.l && report.cofinal == Some(false) && report.minimal == Some(false)) {
        return Err(format!("one-orbit graph: L {}, cofinal {:?}, minimal {:?}", report.l, report.cofinal, report.minimal));
    }
    let group = FullGroup::new(&g);
    let u = io::parse_table(&g, &read_data("one_orbit_u.table.json")).unwrap();
    group.validate(&u).map_err(|e| format!("U is not valid: {e}"))?;
    let arrow = io::parse_arrow(&g, "(v: / (e) | 1 | v: / (e))").unwrap();
    if !group.contains_arrow(&u, &arrow) {
        return Err("U does not contain (e^inf, 1, e^inf)".into());
    }

    let f = graph("no_cover");
    let group = FullGroup::new(&f);
    let arrow: Arrow = io::parse_arrow(&f, "(v: / (e) | 1 | v: / (e))").unwrap();
    let trials = 500;
    for n in 0..trials {
        let t = random_table(&f, rng);
        if group.contains_arrow(&t, &arrow) {
            return Err(format!("trial {n}: a valid table contains the arrow"));
        }
    }
    Ok(format!("one-orbit graph covered by U; no cover in {trials} random tables over the second graph"))
}

fn criterion_6(rng: &mut rand_chacha::ChaCha8Rng) -> Outcome {
    let mut evaluations = 0usize;
    for name in ["e2", "e22", "one_orbit"] {
        let g = graph(name);
        let group = FullGroup::new(&g);
        let points = sample_points(&g, 4, 3, 2);
        let id = Table::identity();
        for n in 0..200 {
            let (s, t, u) = (random_table(&g, rng), random_table(&g, rng), random_table(&g, rng));
            let fail = |law: &str| Err(format!("{name}, table {n}: {law} fails"));
            let eq = |x: &Table, y: &Table| group.germ_equal(x, y).unwrap();
            if !eq(&group.compose(&group.compose(&s, &t), &u), &group.compose(&s, &group.compose(&t, &u))) {
                return fail("associativity");
            }
            if !eq(&group.compose(&s, &id), &s) || !eq(&group.compose(&id, &s), &s) {
                return fail("identity");
            }
            if !group.is_identity(&group.compose(&s, &group.inverse(&s))).unwrap() {
                return fail("inverse");
            }
            let st = group.compose(&s, &t);
            for p in &points {
                if group.apply(&st, p) != group.apply(&s, &group.apply(&t, p)) {
                    return Err(format!("{name}, table {n}: apply(s t) differs at {}", p.render(&g)));
                }
                evaluations += 1;
            }
        }
    }
    Ok(format!("600 triples, {evaluations} point evaluations"))
}

fn criterion_7(rng: &mut rand_chacha::ChaCha8Rng) -> Outcome {
    let mut evaluations = 0usize;
    let graphs = ["e2", "two_vertex", "e_infinity", "e22", "e32", "one_orbit", "ladder"];
    for name in graphs {
        let g = graph(name);
        let group = FullGroup::new(&g);
        let emb = Embedding::new(&g, Labeling::declaration()).unwrap();
        let v = FullGroup::new(emb.target());
        let points = sample_points(&g, 4, 3, 2);
        for n in 0..200 {
            let (s, t) = (random_table(&g, rng), random_table(&g, rng));
            let (es, et) = (emb.embed_table(&s).unwrap(), emb.embed_table(&t).unwrap());
            let est = emb.embed_table(&group.compose(&s, &t)).unwrap();
            if !v.germ_equal(&est, &v.compose(&es, &et)).unwrap() {
                return Err(format!("{name}, pair {n}: embedding is not multiplicative"));
            }
            for p in &points {
                if emb.phi_point(&group.apply(&t, p)) != v.apply(&et, &emb.phi_point(p)) {
                    return Err(format!("{name}, pair {n}: conjugation fails at {}", p.render(&g)));
                }
                evaluations += 1;
            }
        }
    }
    Ok(format!("{} graphs x 200 pairs, {evaluations} point evaluations", graphs.len()))
}

fn criterion_8() -> Outcome {
    for i in 1..=12 {
        if !code_partition_check(Degree::Finite(i), 12) {
            return Err(format!("i = {i}"));
        }
    }
    if !code_partition_check(Degree::Infinite, 12) {
        return Err("i = omega".into());
    }
    Ok("i = 1..12 and omega at depth 12".into())
}

fn criterion_9(rng: &mut rand_chacha::ChaCha8Rng) -> Outcome {
    for (n, r) in [(2, 1), (3, 2)] {
        let g = Graph::higman_thompson(n, r);
        if !check_condition_k(&g).unwrap().holds || !check_minimal(&g).unwrap().holds {
            return Err(format!("E_{n},{r}: (K) or minimality fails"));
        }
        let group = FullGroup::new(&g);
        let emb = Embedding::new(&g, Labeling::declaration()).unwrap();
        let v = FullGroup::new(emb.target());
        for k in 1..=6 {
            let t = cycle_table(&g, rng, k).ok_or_else(|| format!("E_{n},{r}: no {k}-cycle found"))?;
            let here = group.order(&t, 12).unwrap();
            let there = v.order(&emb.embed_table(&t).unwrap(), 12).unwrap();
            if here != Some(k) || there != Some(k) {
                return Err(format!("E_{n},{r}, k = {k}: orders {here:?} and {there:?} in V"));
            }
        }
    }
    Ok("orders 1..6 preserved on E_2,1 and E_3,2; (K) and minimal".into())
}

fn random_diagram(rng: &mut rand_chacha::ChaCha8Rng) -> Option<BratteliDiagram> {
    let levels = rng.random_range(2..=3);
    let names: Vec<Vec<String>> = (0..levels)
        .map(|l| (0..rng.random_range(1..=2)).map(|k| format!("v{l}_{k}")).collect())
        .collect();
    let edges = (1..levels)
        .map(|l| {
            let mut es = Vec::new();
            for s in &names[l - 1] {
                for _ in 0..rng.random_range(1..=2) {
                    es.push((s.clone(), names[l].choose(rng).unwrap().clone()));
                }
            }
            es
        })
        .collect();
    let b = BratteliDiagram::new(DiagramSpec { levels: names, edges, repeat: None }).ok()?;
    let paths = b.paths(levels - 1).ok()?.len();
    let order = b.gamma_group(levels - 1).ok()?.order()?;
    (paths <= 7 && order <= 10_000).then_some(b)
}

fn brute_force_order(b: &BratteliDiagram, n: usize) -> usize {
    let g = b.underlying_graph();
    let paths = b.paths(n).unwrap();
    let ends: Vec<_> = paths.iter().map(|p| p.end(g)).collect();
    (0..paths.len()).permutations(paths.len()).filter(|perm| perm.iter().enumerate().all(|(k, &j)| ends[k] == ends[j])).count()
}

fn criterion_10(rng: &mut rand_chacha::ChaCha8Rng) -> Outcome {
    let mut diagrams = 0;
    while diagrams < 10 {
        let Some(b) = random_diagram(rng) else { continue };
        let n = b.last_level().unwrap();
        let group = b.gamma_group(n).unwrap();
        let expected = brute_force_order(&b, n);
        if group.order() != Some(expected as u128) || group.elements().count() != expected {
            return Err(format!("diagram {:?}: order {:?}, brute force {expected}", b.spec(), group.order()));
        }
        diagrams += 1;
    }
    let rose = Graph::rose(2);
    let v = FullGroup::new(&rose);
    let mut pairs = 0;
    for (file, level) in [("order_two.diagram.json", 1), ("order_24.diagram.json", 2)] {
        let b = io::parse_diagram(&read_data(file)).unwrap();
        let elements: Vec<GammaElement> = b.gamma_group(level).unwrap().elements().collect();
        let images: Vec<Table> = elements.iter().map(|el| b.af_to_v(el, Labeling::declaration()).unwrap()).collect();
        for (el, image) in elements.iter().zip(&images) {
            if v.order(image, 30).unwrap() != Some(el.order()) {
                return Err(format!("{file}: order {} not preserved", el.order()));
            }
        }
        for (i, j) in (0..elements.len()).cartesian_product(0..elements.len()) {
            let product = b.af_to_v(&elements[i].compose(&elements[j]), Labeling::declaration()).unwrap();
            if !v.germ_equal(&product, &v.compose(&images[i], &images[j])).unwrap() {
                return Err(format!("{file}: not a homomorphism on elements {i}, {j}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("10 random diagrams match brute force; {pairs} products and all orders preserved"))
}

enum Expr {
    Atom(CylinderAtom),
    Union(Box<Expr>, Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    Subtract(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, g: &Graph) -> CompactOpen {
        match self {
            Expr::Atom(a) => CompactOpen::atom(a.clone()),
            Expr::Union(x, y) => x.eval(g).union(g, &y.eval(g)),
            Expr::Intersect(x, y) => x.eval(g).intersect(g, &y.eval(g)),
            Expr::Subtract(x, y) => x.eval(g).subtract(g, &y.eval(g)),
        }
    }

    fn holds(&self, p: &BoundaryPoint) -> bool {
        match self {
            Expr::Atom(a) => a.contains_point(p),
            Expr::Union(x, y) => x.holds(p) || y.holds(p),
            Expr::Intersect(x, y) => x.holds(p) && y.holds(p),
            Expr::Subtract(x, y) => x.holds(p) && !y.holds(p),
        }
    }

    fn atoms<'a>(&'a self, out: &mut Vec<&'a CylinderAtom>) {
        match self {
            Expr::Atom(a) => out.push(a),
            Expr::Union(x, y) | Expr::Intersect(x, y) | Expr::Subtract(x, y) => {
                x.atoms(out);
                y.atoms(out);
            }
        }
    }
}

fn random_atom(g: &Graph, rng: &mut rand_chacha::ChaCha8Rng) -> CylinderAtom {
    let mut mu = FinitePath::trivial(*roots(g).choose(rng).unwrap());
    for _ in 0..rng.random_range(0..=3) {
        let Some(&e) = sample_edges(g, mu.end(g), 3).choose(rng) else { break };
        mu = mu.pushed(e);
    }
    let out = sample_edges(g, mu.end(g), 3);
    let mut excluded = BTreeSet::new();
    if rng.random_bool(0.4) {
        let keep = out.len().saturating_sub(match g.out_degree(mu.end(g)) {
            Degree::Infinite => 0,
            Degree::Finite(_) => 1,
        });
        for &e in out.iter().take(keep) {
            if rng.random_bool(0.5) {
                excluded.insert(e);
            }
        }
    }
    CylinderAtom::new(g, mu, excluded).unwrap()
}

fn random_expr(g: &Graph, rng: &mut rand_chacha::ChaCha8Rng, depth: usize) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return Expr::Atom(random_atom(g, rng));
    }
    let (x, y) = (Box::new(random_expr(g, rng, depth - 1)), Box::new(random_expr(g, rng, depth - 1)));
    match rng.random_range(0..3) {
        0 => Expr::Union(x, y),
        1 => Expr::Intersect(x, y),
        _ => Expr::Subtract(x, y),
    }
}

/// Witness points of every cylinder of depth at most `depth`.
fn depth_witnesses(g: &Graph, depth: usize) -> Vec<BoundaryPoint> {
    let mut level: Vec<FinitePath> = roots(g).into_iter().map(FinitePath::trivial).collect();
    let mut out = Vec::new();
    for d in 0..=depth {
        out.extend(level.iter().filter_map(|p| CylinderAtom::cylinder(p.clone()).witness_point(g)));
        if d < depth {
            level = level.iter().flat_map(|p| sample_edges(g, p.end(g), 3).into_iter().map(move |e| p.pushed(e))).collect();
        }
    }
    out
}

fn criterion_11(rng: &mut rand_chacha::ChaCha8Rng) -> Outcome {
    let mut evaluations = 0usize;
    // every graph here has representable points below each nonempty
    // cylinder; the acyclic ladder has none
    let graphs = ["e2", "two_vertex", "one_orbit", "e22", "e_infinity"];
    for name in graphs {
        let g = graph(name);
        let mut base = sample_points(&g, 3, 2, 2);
        base.extend(depth_witnesses(&g, 4));
        for n in 0..1000 {
            let expr = random_expr(&g, rng, 3);
            let set = expr.eval(&g);
            let mut points = base.clone();
            let mut leaves = Vec::new();
            expr.atoms(&mut leaves);
            points.extend(leaves.iter().filter_map(|a| a.witness_point(&g)));
            points.extend(set.atoms.iter().filter_map(|a| a.witness_point(&g)));
            for p in &points {
                if set.contains_point(p) != expr.holds(p) {
                    return Err(format!("{name}, expression {n}: membership of {} differs", p.render(&g)));
                }
                evaluations += 1;
            }
            if set.is_empty(&g) == points.iter().any(|p| expr.holds(p)) {
                return Err(format!("{name}, expression {n}: emptiness differs from the sample"));
            }
        }
    }
    Ok(format!("{} graphs x 1000 expressions, {evaluations} membership checks", graphs.len()))
}

fn main() {
    let mut rng = rng(0x5eed);
    let criteria: Vec<(usize, &str, Outcome)> = vec![
        (1, "golden generators, E_inf", timed(Some(Duration::from_secs(1)), criterion_1)),
        (2, "golden generators, two-vertex graph", timed(None, criterion_2)),
        (3, "golden generators, infinite-vertex graph", timed(None, criterion_3)),
        (4, "relations preserved, mutations detected", timed(Some(Duration::from_secs(5)), criterion_4)),
        (5, "condition goldens and covering", timed(None, || criterion_5(&mut rng))),
        (6, "group axioms", timed(Some(Duration::from_secs(60)), || criterion_6(&mut rng))),
        (7, "embedding homomorphism and conjugation", timed(Some(Duration::from_secs(120)), || criterion_7(&mut rng))),
        (8, "prefix codes", timed(None, criterion_8)),
        (9, "Higman-Thompson orders", timed(None, || criterion_9(&mut rng))),
        (10, "Bratteli groups", timed(Some(Duration::from_secs(60)), || criterion_10(&mut rng))),
        (11, "set algebra oracle", timed(Some(Duration::from_secs(30)), || criterion_11(&mut rng))),
    ];
    let mut unexpected = Vec::new();
    for (n, name, outcome) in &criteria {
        match outcome {
            Ok(detail) => {
                println!("PASS {n:>2} {name}: {detail}");
                if KNOWN_RED.contains(n) {
                    unexpected.push(format!("criterion {n} is listed as known red but passes"));
                }
            }
            Err(detail) => {
                println!("FAIL {n:>2} {name}: {detail}");
                if !KNOWN_RED.contains(n) {
                    unexpected.push(format!("criterion {n} fails"));
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
