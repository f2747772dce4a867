//! Instance file format and report schema for the `snzp` command-line
//! tool.
//!
//! Labeled instances are line-oriented with `#` comments:
//!
//! ```text
//! group z2 | zk <k> | z | free <g> | prod <spec>;<spec>...
//! vertices <name> <name> ...
//! edge <tail> <head> <length> <label>
//! query path <s> <t> [<forbidden-label>]   (optional)
//! query cycle                              (optional)
//! ```
//!
//! Rotation-system files start with `embed` instead of a group line,
//! their edge lines have no label, and each vertex gets a
//! `rot <v>: <edge ids in cyclic order>` line.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use snzp::graph::{GraphError, LabeledGraph, Length, VertexId};
use snzp::group::{GroupDescriptor, GroupElement};
use snzp::reductions::{EmbedError, RotationSystem};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown group `{token}`")]
    UnknownGroup { line: usize, token: String },
    #[error("line {line}: bad label: {source}")]
    BadLabel {
        line: usize,
        source: snzp::group::GroupError,
    },
    #[error("line {line}: edge endpoints coincide (loops are not allowed)")]
    LoopEdge { line: usize },
    #[error("line {line}: edge length must be a finite nonnegative number")]
    NegativeLength { line: usize },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("{source}")]
    Embed {
        #[from]
        source: EmbedError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Path {
        source: VertexId,
        target: VertexId,
        forbidden: Option<GroupElement>,
    },
    Cycle,
}

#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub graph: LabeledGraph,
    pub names: Vec<String>,
    pub query: Option<Query>,
}

#[derive(Debug, Clone)]
pub struct EmbeddedInstance {
    pub rotation: RotationSystem,
    pub names: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Instance {
    Labeled(LabeledInstance),
    Embedded(EmbeddedInstance),
}

impl LabeledInstance {
    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn parse_group_spec(text: &str) -> Option<GroupDescriptor> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    match tokens.as_slice() {
        ["z2"] => Some(GroupDescriptor::z2()),
        ["zk", k] => {
            let k: u64 = k.parse().ok()?;
            (k >= 2).then_some(GroupDescriptor::Cyclic(k))
        }
        ["z"] => Some(GroupDescriptor::Integers),
        ["free", g] => {
            let g: usize = g.parse().ok()?;
            (g >= 1).then_some(GroupDescriptor::Free(g))
        }
        ["prod"] => Some(GroupDescriptor::Product(Vec::new())),
        ["prod", ..] => {
            let body = text.trim_start().strip_prefix("prod")?.trim();
            let parts = body
                .split(';')
                .map(|p| parse_group_spec(p.trim()))
                .collect::<Option<Vec<_>>>()?;
            if parts.iter().any(|p| matches!(p, GroupDescriptor::Product(_))) {
                return None; // nested products are not expressible in files
            }
            Some(GroupDescriptor::Product(parts))
        }
        _ => None,
    }
}

pub fn render_group_spec(d: &GroupDescriptor) -> String {
    d.to_string()
}

struct Line<'a> {
    number: usize,
    content: &'a str,
}

fn significant_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim_end();
            if content.trim().is_empty() {
                None
            } else {
                Some(Line {
                    number: i + 1,
                    content,
                })
            }
        })
        .collect()
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let lines = significant_lines(text);
    let Some(first) = lines.first() else {
        return Err(syntax(1, 1, "empty instance: expected a `group` or `embed` line"));
    };
    if first.content.trim() == "embed" {
        parse_embedded(&lines).map(Instance::Embedded)
    } else {
        parse_labeled(&lines).map(Instance::Labeled)
    }
}

fn parse_vertices(line: &Line<'_>) -> Result<(Vec<String>, HashMap<String, VertexId>), ParseError> {
    let rest = line
        .content
        .trim()
        .strip_prefix("vertices")
        .ok_or_else(|| syntax(line.number, 1, "expected a `vertices` line"))?;
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(syntax(line.number, 1, "at least one vertex is required"));
    }
    let mut ids = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if ids.insert(name.clone(), i).is_some() {
            return Err(syntax(
                line.number,
                1,
                format!("duplicate vertex name `{name}`"),
            ));
        }
    }
    Ok((names, ids))
}

fn parse_length(token: &str, line: usize) -> Result<Length, ParseError> {
    let value: f64 = token
        .parse()
        .map_err(|_| syntax(line, 1, format!("bad length `{token}`")))?;
    Length::new(value).map_err(|_| ParseError::NegativeLength { line })
}

fn parse_labeled(lines: &[Line<'_>]) -> Result<LabeledInstance, ParseError> {
    let group_line = &lines[0];
    let spec = group_line
        .content
        .trim()
        .strip_prefix("group")
        .ok_or_else(|| syntax(group_line.number, 1, "expected a `group` line"))?
        .trim();
    let descriptor = parse_group_spec(spec).ok_or_else(|| ParseError::UnknownGroup {
        line: group_line.number,
        token: spec.to_string(),
    })?;

    let vertices_line = lines
        .get(1)
        .ok_or_else(|| syntax(group_line.number, 1, "missing `vertices` line"))?;
    let (names, ids) = parse_vertices(vertices_line)?;

    let mut specs = Vec::new();
    let mut edge_lines = Vec::new();
    let mut query = None;
    for line in &lines[2..] {
        let mut tokens = line.content.split_whitespace();
        match tokens.next() {
            Some("edge") => {
                let args: Vec<&str> = tokens.collect();
                if args.len() < 4 {
                    return Err(syntax(
                        line.number,
                        1,
                        "edge lines are `edge <tail> <head> <length> <label>`",
                    ));
                }
                let tail = resolve(&ids, args[0], line.number)?;
                let head = resolve(&ids, args[1], line.number)?;
                if tail == head {
                    return Err(ParseError::LoopEdge { line: line.number });
                }
                let length = parse_length(args[2], line.number)?;
                let label_text = args[3..].join(" ");
                let label = descriptor
                    .parse(&label_text)
                    .map_err(|source| ParseError::BadLabel {
                        line: line.number,
                        source,
                    })?;
                specs.push((tail, head, length, label));
                edge_lines.push(line.number);
            }
            Some("query") => {
                let args: Vec<&str> = tokens.collect();
                query = Some(match args.first() {
                    Some(&"cycle") => Query::Cycle,
                    Some(&"path") if args.len() >= 3 => {
                        let source = resolve(&ids, args[1], line.number)?;
                        let target = resolve(&ids, args[2], line.number)?;
                        let forbidden = if args.len() > 3 {
                            Some(descriptor.parse(&args[3..].join(" ")).map_err(|source| {
                                ParseError::BadLabel {
                                    line: line.number,
                                    source,
                                }
                            })?)
                        } else {
                            None
                        };
                        Query::Path {
                            source,
                            target,
                            forbidden,
                        }
                    }
                    _ => {
                        return Err(syntax(
                            line.number,
                            1,
                            "queries are `query path <s> <t> [<label>]` or `query cycle`",
                        ))
                    }
                });
            }
            Some(other) => {
                return Err(syntax(
                    line.number,
                    1,
                    format!("unexpected directive `{other}`"),
                ))
            }
            None => unreachable!("blank lines were filtered"),
        }
    }

    let graph = LabeledGraph::new(descriptor, names.len(), specs).map_err(|e| {
        let line = match &e {
            GraphError::LoopEdge { edge, .. }
            | GraphError::BadEndpoint { edge, .. }
            | GraphError::ForeignLabel { edge } => edge_lines.get(*edge).copied().unwrap_or(1),
            GraphError::InvalidLength { .. } => 1,
        };
        ParseError::Graph { line, source: e }
    })?;
    Ok(LabeledInstance {
        graph,
        names,
        query,
    })
}

fn parse_embedded(lines: &[Line<'_>]) -> Result<EmbeddedInstance, ParseError> {
    let vertices_line = lines
        .get(1)
        .ok_or_else(|| syntax(lines[0].number, 1, "missing `vertices` line"))?;
    let (names, ids) = parse_vertices(vertices_line)?;

    let mut edges = Vec::new();
    let mut rotations: Vec<Option<Vec<usize>>> = vec![None; names.len()];
    for line in &lines[2..] {
        let mut tokens = line.content.split_whitespace();
        match tokens.next() {
            Some("edge") => {
                let args: Vec<&str> = tokens.collect();
                if args.len() != 3 {
                    return Err(syntax(
                        line.number,
                        1,
                        "embedded edge lines are `edge <tail> <head> <length>`",
                    ));
                }
                let tail = resolve(&ids, args[0], line.number)?;
                let head = resolve(&ids, args[1], line.number)?;
                if tail == head {
                    return Err(ParseError::LoopEdge { line: line.number });
                }
                let length = parse_length(args[2], line.number)?;
                edges.push((tail, head, length));
            }
            Some("rot") => {
                let rest = line
                    .content
                    .trim()
                    .strip_prefix("rot")
                    .expect("token matched")
                    .trim();
                let (name, order) = rest.split_once(':').ok_or_else(|| {
                    syntax(line.number, 1, "rotations are `rot <v>: <edge ids>`")
                })?;
                let v = resolve(&ids, name.trim(), line.number)?;
                let order = order
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| syntax(line.number, 1, format!("bad edge id `{t}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                rotations[v] = Some(order);
            }
            Some(other) => {
                return Err(syntax(
                    line.number,
                    1,
                    format!("unexpected directive `{other}`"),
                ))
            }
            None => unreachable!("blank lines were filtered"),
        }
    }
    let rotations = rotations
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| {
                syntax(
                    lines[0].number,
                    1,
                    format!("missing rotation for vertex `{}`", names[v]),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rotation = RotationSystem::new(names.len(), edges, rotations)?;
    Ok(EmbeddedInstance { rotation, names })
}

fn resolve(
    ids: &HashMap<String, VertexId>,
    name: &str,
    line: usize,
) -> Result<VertexId, ParseError> {
    ids.get(name).copied().ok_or_else(|| ParseError::UnknownVertex {
        line,
        name: name.to_string(),
    })
}

/// Canonical text form: group line, one vertices line, edges in id order,
/// then the query if any. Parsing this output reproduces it byte for byte.
pub fn render_labeled(instance: &LabeledInstance) -> String {
    let g = &instance.graph;
    let d = g.descriptor();
    let mut out = String::new();
    writeln!(out, "group {}", render_group_spec(d)).unwrap();
    writeln!(out, "vertices {}", instance.names.join(" ")).unwrap();
    for e in g.edges() {
        writeln!(
            out,
            "edge {} {} {} {}",
            instance.names[e.tail],
            instance.names[e.head],
            e.length,
            d.render(&e.label)
        )
        .unwrap();
    }
    match &instance.query {
        Some(Query::Path {
            source,
            target,
            forbidden,
        }) => {
            let mut line = format!(
                "query path {} {}",
                instance.names[*source], instance.names[*target]
            );
            if let Some(f) = forbidden {
                line.push(' ');
                line.push_str(&d.render(f));
            }
            writeln!(out, "{line}").unwrap();
        }
        Some(Query::Cycle) => writeln!(out, "query cycle").unwrap(),
        None => {}
    }
    out
}

pub fn render_embedded(instance: &EmbeddedInstance) -> String {
    let rs = &instance.rotation;
    let mut out = String::new();
    writeln!(out, "embed").unwrap();
    writeln!(out, "vertices {}", instance.names.join(" ")).unwrap();
    for &(tail, head, length) in rs.edges() {
        writeln!(
            out,
            "edge {} {} {}",
            instance.names[tail], instance.names[head], length
        )
        .unwrap();
    }
    for (v, rot) in rs.rotations().iter().enumerate() {
        let order: Vec<String> = rot.iter().map(|e| e.to_string()).collect();
        writeln!(out, "rot {}: {}", instance.names[v], order.join(" ")).unwrap();
    }
    out
}

/// The JSON document every subcommand prints.
#[derive(Debug, Serialize)]
pub struct Report {
    pub status: String,
    pub query: String,
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<usize>>,
    /// Per-vertex dual values; `null` marks an infinite entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<BTreeMap<String, Option<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_feasible: Option<bool>,
}

impl Report {
    pub fn new(query: &str, algorithm: &str, feasible: bool) -> Report {
        Report {
            status: if feasible { "FOUND" } else { "INFEASIBLE" }.to_string(),
            query: query.to_string(),
            algorithm: algorithm.to_string(),
            value: None,
            label: None,
            vertices: None,
            edges: None,
            dual: None,
            dual_feasible: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAMOND: &str = "\
# four vertices, five edges
group z2
vertices s a b t
edge s a 1 0
edge s b 1 0
edge a b 1 1
edge a t 1 0
edge b t 1 0
query path s t
";

    #[test]
    fn parse_diamond() {
        let Instance::Labeled(inst) = parse_instance(DIAMOND).unwrap() else {
            panic!("labeled instance expected");
        };
        assert_eq!(inst.graph.vertex_count(), 4);
        assert_eq!(inst.graph.edge_count(), 5);
        assert_eq!(
            inst.query,
            Some(Query::Path {
                source: 0,
                target: 3,
                forbidden: None
            })
        );
    }

    #[test]
    fn canonical_round_trip() {
        let Instance::Labeled(inst) = parse_instance(DIAMOND).unwrap() else {
            panic!();
        };
        let rendered = render_labeled(&inst);
        let Instance::Labeled(again) = parse_instance(&rendered).unwrap() else {
            panic!();
        };
        assert_eq!(render_labeled(&again), rendered, "canonical files are fixed points");
    }

    #[test]
    fn loops_and_negative_lengths_fail_with_line_numbers() {
        let text = "group z2\nvertices a b\nedge a a 1 0\n";
        match parse_instance(text) {
            Err(ParseError::LoopEdge { line: 3 }) => {}
            other => panic!("expected a loop error, got {other:?}"),
        }
        let text = "group z2\nvertices a b\nedge a b -1 0\n";
        match parse_instance(text) {
            Err(ParseError::NegativeLength { line: 3 }) => {}
            other => panic!("expected a length error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_groups_and_labels_are_reported() {
        assert!(matches!(
            parse_instance("group z9q\nvertices a b\n"),
            Err(ParseError::UnknownGroup { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("group zk 5\nvertices a b\nedge a b 1 x\n"),
            Err(ParseError::BadLabel { line: 3, .. })
        ));
    }

    #[test]
    fn group_specs_round_trip() {
        for spec in ["z2", "zk 6", "z", "free 3", "prod z2;zk 3", "prod"] {
            let d = parse_group_spec(spec).unwrap();
            assert_eq!(render_group_spec(&d), spec);
            assert_eq!(parse_group_spec(&render_group_spec(&d)), Some(d));
        }
        assert!(parse_group_spec("zk 1").is_none());
        assert!(parse_group_spec("free 0").is_none());
        assert!(parse_group_spec("prod z2;prod z2;z2").is_none());
    }

    #[test]
    fn labels_with_spaces_parse() {
        let text = "group free 2\nvertices a b\nedge a b 2 1 -2 1\n";
        let Instance::Labeled(inst) = parse_instance(text).unwrap() else {
            panic!();
        };
        let d = inst.graph.descriptor();
        assert_eq!(d.render(&inst.graph.edge(0).label), "1 -2 1");
    }

    #[test]
    fn embedded_instances_parse() {
        let text = "\
embed
vertices a b c d
edge a b 1
edge b c 1
edge c d 1
edge d a 1
rot a: 0 3
rot b: 0 1
rot c: 1 2
rot d: 2 3
";
        let Instance::Embedded(inst) = parse_instance(text).unwrap() else {
            panic!("embedded instance expected");
        };
        assert_eq!(inst.rotation.genus(), 0);
        let rendered = render_embedded(&inst);
        let Instance::Embedded(again) = parse_instance(&rendered).unwrap() else {
            panic!();
        };
        assert_eq!(render_embedded(&again), rendered);
    }
}
