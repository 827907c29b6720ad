//! Text literals and JSON file formats.
//!
//! Literals: paths `v:e,g[2]`, points `v:e,f !` (finite) and `v:e / (g,h)`
//! (eventually periodic), arrows `(x | k | y)`. Tables, compact opens,
//! labelings, graphs and diagrams are JSON.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bratteli::{BratteliDiagram, BratteliError, DiagramSpec};
use crate::embed::{EmbedError, Labeling, LabelingSpec};
use crate::fullgroup::{Arrow, Piece, Table, TableError};
use crate::graph::{Edge, EdgeRef, FinitePath, Graph, GraphError, GraphSpec, LevelSpec, LeveledGraph};
use crate::pathspace::{BoundaryPoint, CompactOpen, CylinderAtom, PathError};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Bratteli(#[from] BratteliError),
}

impl IoError {
    pub fn code(&self) -> &'static str {
        match self {
            IoError::Syntax(_) => "syntax",
            IoError::UnknownVertex(_) => "unknown_vertex",
            IoError::UnknownEdge(_) => "unknown_edge",
            IoError::Graph(e) => e.code(),
            IoError::Path(e) => e.code(),
            IoError::Table(e) => e.code(),
            IoError::Embed(e) => e.code(),
            IoError::Bratteli(e) => e.code(),
        }
    }

    /// Whether the input failed to parse, as opposed to parsing into
    /// something invalid.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, IoError::Syntax(_) | IoError::UnknownVertex(_) | IoError::UnknownEdge(_))
    }
}

fn json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphFile {
    Finite(GraphSpec),
    Leveled { prefix: Vec<LevelSpec>, block: Vec<LevelSpec> },
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    Ok(match json::<GraphFile>(text)? {
        GraphFile::Finite(spec) => Graph::from_spec(&spec)?,
        GraphFile::Leveled { prefix, block } => Graph::from_leveled(LeveledGraph::new(prefix, block)?),
    })
}

pub fn write_graph(g: &Graph) -> String {
    let file = match g.as_leveled() {
        Some(l) => GraphFile::Leveled { prefix: l.prefix_specs().to_vec(), block: l.block_specs().to_vec() },
        None => GraphFile::Finite(g.to_spec().expect("finite graph")),
    };
    to_json(&file)
}

pub fn parse_edge(g: &Graph, s: &str) -> Result<Edge, IoError> {
    let s = s.trim();
    let r: EdgeRef = s.parse().map_err(|_| IoError::Syntax(format!("bad edge reference `{s}`")))?;
    g.edge_by_ref(&r).ok_or_else(|| IoError::UnknownEdge(s.to_string()))
}

fn parse_edges(g: &Graph, s: &str) -> Result<Vec<Edge>, IoError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|e| parse_edge(g, e)).collect()
}

/// `v:e,g[2]`; the empty path at `v` is `v:`.
pub fn parse_path(g: &Graph, s: &str) -> Result<FinitePath, IoError> {
    let (v, edges) = s.trim().split_once(':').ok_or_else(|| IoError::Syntax(format!("path `{s}` lacks `:`")))?;
    let v = v.trim();
    let start = g.vertex_by_name(v).ok_or_else(|| IoError::UnknownVertex(v.to_string()))?;
    let path = FinitePath::from_edges(start, parse_edges(g, edges)?);
    if !path.is_valid(g) {
        return Err(PathError::InvalidPath.into());
    }
    Ok(path)
}

pub fn parse_point(g: &Graph, s: &str) -> Result<BoundaryPoint, IoError> {
    let s = s.trim();
    if let Some(path) = s.strip_suffix('!') {
        return Ok(BoundaryPoint::finite(g, parse_path(g, path)?)?);
    }
    let (prefix, cycle) = s.split_once('/').ok_or_else(|| IoError::Syntax(format!("point `{s}` needs `!` or `/ (...)`")))?;
    let cycle = cycle
        .trim()
        .strip_prefix('(')
        .and_then(|c| c.strip_suffix(')'))
        .ok_or_else(|| IoError::Syntax(format!("cycle in `{s}` must be parenthesized")))?;
    Ok(BoundaryPoint::periodic(g, parse_path(g, prefix)?, parse_edges(g, cycle)?)?)
}

/// `(x | k | y)`.
pub fn parse_arrow(g: &Graph, s: &str) -> Result<Arrow, IoError> {
    let bad = || IoError::Syntax(format!("arrow `{s}` is not of the form (x | k | y)"));
    let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let parts: Vec<&str> = inner.split('|').collect();
    let [x, k, y] = parts[..] else { return Err(bad()) };
    let lag: i64 = k.trim().parse().map_err(|_| bad())?;
    Ok(Arrow::new(g, parse_point(g, x)?, lag, parse_point(g, y)?)?)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AtomFile {
    pub mu: String,
    #[serde(default)]
    pub excluded: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PieceFile {
    pub mu: String,
    #[serde(default)]
    pub excluded: Vec<String>,
    pub lambda: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct TableFile {
    pub pieces: Vec<PieceFile>,
}

fn parse_excluded(g: &Graph, names: &[String]) -> Result<BTreeSet<Edge>, IoError> {
    names.iter().map(|n| parse_edge(g, n)).collect()
}

fn render_excluded(g: &Graph, f: &BTreeSet<Edge>) -> Vec<String> {
    f.iter().map(|&e| g.edge_name(e)).collect()
}

/// Reads a table; it is not validated.
pub fn parse_table(g: &Graph, text: &str) -> Result<Table, IoError> {
    let file: TableFile = json(text)?;
    let pieces = file
        .pieces
        .iter()
        .map(|p| Ok(Piece::new(parse_path(g, &p.mu)?, parse_excluded(g, &p.excluded)?, parse_path(g, &p.lambda)?)))
        .collect::<Result<_, IoError>>()?;
    Ok(Table::new(pieces))
}

pub fn table_file(g: &Graph, t: &Table) -> TableFile {
    TableFile {
        pieces: t
            .pieces
            .iter()
            .map(|p| PieceFile {
                mu: p.mu.render(g),
                excluded: render_excluded(g, &p.excluded),
                lambda: p.lambda.render(g),
            })
            .collect(),
    }
}

pub fn write_table(g: &Graph, t: &Table) -> String {
    to_json(&table_file(g, t))
}

/// A JSON array of atoms `{"mu": "v:a", "excluded": ["b"]}`.
pub fn parse_compact_open(g: &Graph, text: &str) -> Result<CompactOpen, IoError> {
    let atoms: Vec<AtomFile> = json(text)?;
    let atoms = atoms
        .iter()
        .map(|a| Ok(CylinderAtom::new(g, parse_path(g, &a.mu)?, parse_excluded(g, &a.excluded)?)?))
        .collect::<Result<_, IoError>>()?;
    Ok(CompactOpen::from_atoms(atoms))
}

pub fn write_compact_open(g: &Graph, u: &CompactOpen) -> String {
    let atoms: Vec<AtomFile> = u
        .atoms
        .iter()
        .map(|a| AtomFile { mu: a.mu.render(g), excluded: render_excluded(g, &a.excluded) })
        .collect();
    to_json(&atoms)
}

pub fn parse_labeling(g: &Graph, text: &str) -> Result<Labeling, IoError> {
    Ok(Labeling::from_spec(g, &json::<LabelingSpec>(text)?)?)
}

pub fn write_labeling(g: &Graph, lab: &Labeling) -> String {
    to_json(&lab.to_spec(g))
}

pub fn parse_diagram(text: &str) -> Result<BratteliDiagram, IoError> {
    Ok(BratteliDiagram::new(json::<DiagramSpec>(text)?)?)
}

pub fn write_diagram(b: &BratteliDiagram) -> String {
    to_json(b.spec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        let g = Graph::rose(2);
        for s in ["v:", "v:a,b"] {
            assert_eq!(parse_path(&g, s).unwrap().render(&g), s);
        }
        for s in ["v:a / (b)", "v: / (a,b)"] {
            assert_eq!(parse_point(&g, s).unwrap().render(&g), s);
        }
        let ar = parse_arrow(&g, "(v:b / (a) | 0 | v: / (a))").unwrap();
        assert_eq!(ar.render(&g), "(v:b / (a) | 0 | v: / (a))");
        assert!(matches!(parse_point(&g, "v:a"), Err(IoError::Syntax(_))));
        assert!(matches!(parse_path(&g, "w:a"), Err(IoError::UnknownVertex(_))));
        assert!(matches!(parse_path(&g, "v:c"), Err(IoError::UnknownEdge(_))));
        assert!(matches!(parse_point(&g, "v:a !"), Err(IoError::Path(PathError::NotSingular(_)))));
        assert!(matches!(parse_arrow(&g, "(v: / (b) | 0 | v: / (a))"), Err(IoError::Table(TableError::InvalidArrow))));
    }

    #[test]
    fn files_round_trip() {
        let text = r#"{"vertices":["w1","w2"],"edges":[
            {"id":"h","src":"w1","rng":"w2","mult":"1"},
            {"id":"e","src":"w1","rng":"w1","mult":"omega"},
            {"id":"f","src":"w2","rng":"w2","mult":"omega"}]}"#;
        let g = parse_graph(text).unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap().to_spec(), g.to_spec());

        let t = parse_table(&g, r#"{"pieces":[{"mu":"w1:e[1]","excluded":["f[2]"],"lambda":"w1:h"}]}"#).unwrap();
        assert_eq!(parse_table(&g, &write_table(&g, &t)).unwrap(), t);

        let u = parse_compact_open(&g, r#"[{"mu":"w1:","excluded":["h","e[4]"]},{"mu":"w2:f[1]"}]"#).unwrap();
        assert_eq!(parse_compact_open(&g, &write_compact_open(&g, &u)).unwrap(), u);
        assert!(parse_compact_open(&g, "[{").unwrap_err().is_parse_error());
    }
}
