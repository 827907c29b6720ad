use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tfgkit::bratteli::GammaElement;
use tfgkit::embed::{ck_check, Embedding, Labeling};
use tfgkit::fullgroup::{FullGroup, Table};
use tfgkit::graph::{analyze, Graph};
use tfgkit::io::{self, IoError};

#[derive(Parser)]
#[command(name = "tfg", version, about = "Topological full groups of graph groupoids")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file (JSON).
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct Labeled {
    /// Graph file; may also be given positionally.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(value_name = "GRAPH")]
    graph_file: Option<PathBuf>,
    /// Labeling file (JSON); defaults to declaration order.
    #[arg(long)]
    labeling: Option<PathBuf>,
    /// Members of each omega family (and vertices of an infinite graph) to emit.
    #[arg(long, default_value_t = 10)]
    bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Structural conditions of a graph.
    Analyze {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(value_name = "GRAPH")]
        graph_file: Option<PathBuf>,
    },
    /// Check that a table is a valid element.
    Validate {
        #[command(flatten)]
        g: GraphArg,
        table: PathBuf,
    },
    /// The table `s` after `t`.
    Compose {
        #[command(flatten)]
        g: GraphArg,
        s: PathBuf,
        t: PathBuf,
    },
    /// The inverse of a table.
    Invert {
        #[command(flatten)]
        g: GraphArg,
        table: PathBuf,
    },
    /// Apply a table to a point literal such as `v:a / (b)`.
    Apply {
        #[command(flatten)]
        g: GraphArg,
        table: PathBuf,
        point: String,
    },
    /// The set of points a table moves.
    Support {
        #[command(flatten)]
        g: GraphArg,
        table: PathBuf,
    },
    /// Whether two tables define the same element.
    GermEq {
        #[command(flatten)]
        g: GraphArg,
        s: PathBuf,
        t: PathBuf,
    },
    /// The image of a table in Thompson's group V.
    Embed {
        #[command(flatten)]
        lab: Labeled,
        #[arg(long)]
        table: PathBuf,
    },
    /// Images of the graph algebra generators.
    Emit {
        #[command(flatten)]
        lab: Labeled,
    },
    /// Check the graph algebra relations on the emitted images.
    CkCheck {
        #[command(flatten)]
        lab: Labeled,
    },
    /// Order of the group of range-preserving path permutations at a level.
    BratteliOrder {
        diagram: PathBuf,
        #[arg(long)]
        level: usize,
    },
    /// Image in V of a permutation of the paths to a level, given as the
    /// 0-based image of each path, e.g. `1,0,2`.
    BratteliEmbed {
        diagram: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, value_delimiter = ',')]
        perm: Vec<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String, String),
    Domain(String, String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        if e.is_parse_error() {
            Failure::Parse(e.code().into(), e.to_string())
        } else {
            Failure::Domain(e.code().into(), e.to_string())
        }
    }
}

macro_rules! domain {
    ($e:expr) => {
        $e.map_err(|e| Failure::Domain(e.code().into(), e.to_string()))
    };
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse("read".into(), format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(io::parse_graph(&read(path)?)?)
}

fn pick(flag: &Option<PathBuf>, positional: &Option<PathBuf>) -> Result<PathBuf, Failure> {
    flag.clone()
        .or_else(|| positional.clone())
        .ok_or_else(|| Failure::Parse("usage".into(), "a graph file is required".into()))
}

fn load_labeled(lab: &Labeled) -> Result<(Graph, Labeling), Failure> {
    let g = load_graph(&pick(&lab.graph, &lab.graph_file)?)?;
    let labeling = match &lab.labeling {
        Some(p) => io::parse_labeling(&g, &read(p)?)?,
        None => Labeling::declaration(),
    };
    Ok((g, labeling))
}

/// One `name: value` line per scalar condition; `-` marks an undecided one.
fn condition_lines(report: &serde_json::Value) -> String {
    let mut out = String::new();
    for (key, value) in report.as_object().expect("report is an object") {
        match value {
            serde_json::Value::Bool(b) => out += &format!("{key}: {b}\n"),
            serde_json::Value::Null => out += &format!("{key}: -\n"),
            _ => {}
        }
    }
    out
}

fn table_output(g: &Graph, t: &Table, format: Format) -> String {
    match format {
        Format::Json => io::write_table(g, t),
        Format::Text => t.pieces.iter().map(|p| p.render(g) + "\n").collect(),
    }
}

/// Composites are reported in canonical form when the graph allows it.
fn tidy(group: &FullGroup, t: Table) -> Table {
    group.canonicalize(&t).unwrap_or(t)
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let format = cli.format;
    let json_or = |f: Format| format.unwrap_or(f);
    match &cli.command {
        Command::Analyze { graph, graph_file } => {
            let g = load_graph(&pick(graph, graph_file)?)?;
            let report = serde_json::to_value(analyze(&g)).expect("json");
            Ok(match json_or(Format::Json) {
                Format::Json => pretty(report),
                Format::Text => condition_lines(&report),
            })
        }
        Command::Validate { g, table } => {
            let g = load_graph(&g.graph)?;
            let t = io::parse_table(&g, &read(table)?)?;
            domain!(FullGroup::new(&g).validate(&t))?;
            Ok("valid\n".into())
        }
        Command::Compose { g, s, t } => {
            let g = load_graph(&g.graph)?;
            let group = FullGroup::new(&g);
            let (s, t) = (io::parse_table(&g, &read(s)?)?, io::parse_table(&g, &read(t)?)?);
            domain!(group.validate(&s))?;
            domain!(group.validate(&t))?;
            Ok(table_output(&g, &tidy(&group, group.compose(&s, &t)), json_or(Format::Json)))
        }
        Command::Invert { g, table } => {
            let g = load_graph(&g.graph)?;
            let group = FullGroup::new(&g);
            let t = io::parse_table(&g, &read(table)?)?;
            domain!(group.validate(&t))?;
            Ok(table_output(&g, &group.inverse(&t), json_or(Format::Json)))
        }
        Command::Apply { g, table, point } => {
            let g = load_graph(&g.graph)?;
            let group = FullGroup::new(&g);
            let t = io::parse_table(&g, &read(table)?)?;
            domain!(group.validate(&t))?;
            let p = io::parse_point(&g, point)?;
            let image = group.apply(&t, &p).render(&g);
            Ok(match json_or(Format::Text) {
                Format::Text => image + "\n",
                Format::Json => pretty(json!({ "point": image, "lag": group.lag_at(&t, &p) })),
            })
        }
        Command::Support { g, table } => {
            let g = load_graph(&g.graph)?;
            let group = FullGroup::new(&g);
            let t = io::parse_table(&g, &read(table)?)?;
            domain!(group.validate(&t))?;
            let u = domain!(group.support(&t))?;
            Ok(match json_or(Format::Json) {
                Format::Json => io::write_compact_open(&g, &u),
                Format::Text => u.atoms.iter().map(|a| a.render(&g) + "\n").collect(),
            })
        }
        Command::GermEq { g, s, t } => {
            let g = load_graph(&g.graph)?;
            let group = FullGroup::new(&g);
            let (s, t) = (io::parse_table(&g, &read(s)?)?, io::parse_table(&g, &read(t)?)?);
            domain!(group.validate(&s))?;
            domain!(group.validate(&t))?;
            let eq = domain!(group.germ_equal(&s, &t))?;
            Ok(match json_or(Format::Text) {
                Format::Text => format!("{eq}\n"),
                Format::Json => pretty(json!({ "germ_equal": eq })),
            })
        }
        Command::Embed { lab, table } => {
            let (g, labeling) = load_labeled(lab)?;
            let t = io::parse_table(&g, &read(table)?)?;
            let emb = domain!(Embedding::new(&g, labeling))?;
            let image = domain!(emb.embed_table(&t))?;
            Ok(table_output(emb.target(), &image, json_or(Format::Json)))
        }
        Command::Emit { lab } => {
            let (g, labeling) = load_labeled(lab)?;
            let emb = domain!(Embedding::new(&g, labeling))?;
            let img = emb.emit_generators(lab.bound);
            Ok(match json_or(Format::Text) {
                Format::Text => img.render(&g),
                Format::Json => {
                    let lines: Vec<serde_json::Value> = img
                        .render(&g)
                        .lines()
                        .map(|l| {
                            let (k, v) = l.split_once(" -> ").expect("emission line");
                            json!({ "generator": k, "image": v })
                        })
                        .collect();
                    pretty(serde_json::Value::Array(lines))
                }
            })
        }
        Command::CkCheck { lab } => {
            let (g, labeling) = load_labeled(lab)?;
            let emb = domain!(Embedding::new(&g, labeling))?;
            let verdict = ck_check(&g, &emb.emit_generators(lab.bound));
            Ok(match json_or(Format::Json) {
                Format::Json => pretty(serde_json::to_value(&verdict).expect("json")),
                Format::Text if verdict.holds => "all relations hold\n".into(),
                Format::Text => verdict.failures.iter().map(|f| format!("FAILED {f}\n")).collect(),
            })
        }
        Command::BratteliOrder { diagram, level } => {
            let b = io::parse_diagram(&read(diagram)?)?;
            let group = domain!(b.gamma_group(*level))?;
            let order = group.order().map(|o| o.to_string()).unwrap_or_else(|| "overflow".into());
            Ok(match json_or(Format::Json) {
                Format::Json => pretty(json!({ "level": level, "paths": group.paths().len(), "order": order })),
                Format::Text => format!("{order}\n"),
            })
        }
        Command::BratteliEmbed { diagram, level, perm } => {
            let b = io::parse_diagram(&read(diagram)?)?;
            let el = GammaElement { level: *level, perm: perm.clone() };
            let image = domain!(b.af_to_v(&el, Labeling::declaration()))?;
            Ok(table_output(&Graph::rose(2), &image, json_or(Format::Json)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| match &cli.out {
        Some(path) => fs::write(path, out)
            .map(|_| String::new())
            .map_err(|e| Failure::Domain("write".into(), format!("{}: {e}", path.display()))),
        None => Ok(out),
    });
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(code, msg)) => {
            eprintln!("error[{code}]: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(code, msg)) => {
            eprintln!("error[{code}]: {msg}");
            ExitCode::from(2)
        }
    }
}
