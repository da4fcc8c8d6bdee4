//! Graph file formats.
//!
//! Two readers: generic edge lists (one edge per line, delimited) and the
//! CAIDA as-rel relationship format. Both return the graph together with
//! the original node names so results can be reported in the caller's own
//! ids. Lines whose first non-blank character is `#` are comments, blank
//! lines are skipped, and repeated edges accumulate weight.

use std::collections::HashMap;
use std::io::BufRead;

use blockspectral::graph::DirectedGraph;

use crate::error::{CliError, CliResult};

/// How fields on an edge-list line are separated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFormat {
    Tab,
    Comma,
    Whitespace,
}

/// How node ids are read. Integer mode insists the ids are the numbers
/// 0..n-1 and falls back to an order-preserving remap (with a warning)
/// when they are not; string mode interns names in order of first
/// appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdMode {
    Integer,
    String,
}

#[derive(Debug, Clone)]
pub struct EdgeListOptions {
    pub format: EdgeFormat,
    pub weighted: bool,
    pub id_mode: IdMode,
}

/// Original node names in dense-index order, plus the reverse lookup.
#[derive(Debug, Clone)]
pub struct IdMap {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    pub fn from_names(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        IdMap { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// A graph plus the names its nodes had in the input file.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: DirectedGraph,
    pub ids: IdMap,
}

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('#')
}

/// Data lines of the input, each with its 1-based line number. Trailing
/// carriage returns are stripped so CRLF files parse.
fn data_lines(reader: impl BufRead) -> CliResult<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CliError::parse(format!("line {}: {e}", idx + 1)))?;
        let line = line.strip_suffix('\r').unwrap_or(&line).to_string();
        if line.trim().is_empty() || is_comment(&line) {
            continue;
        }
        out.push((idx + 1, line));
    }
    Ok(out)
}

fn split_fields(line: &str, format: EdgeFormat) -> Vec<&str> {
    match format {
        EdgeFormat::Tab => line.split('\t').map(str::trim).collect(),
        EdgeFormat::Comma => line.split(',').map(str::trim).collect(),
        EdgeFormat::Whitespace => line.split_whitespace().collect(),
    }
}

/// Reads `src dst [weight]` lines into a graph. With no weight column
/// every edge has weight 1. The id treatment follows
/// [`EdgeListOptions::id_mode`]; either way the returned map remembers
/// the original spelling of each node.
pub fn parse_edge_list(reader: impl BufRead, opts: &EdgeListOptions) -> CliResult<ParsedGraph> {
    let want = if opts.weighted { 3 } else { 2 };
    let mut raw: Vec<(String, String, f64)> = Vec::new();
    for (lineno, line) in data_lines(reader)? {
        let fields = split_fields(&line, opts.format);
        if fields.len() != want {
            return Err(CliError::parse(format!(
                "line {lineno}: expected {want} fields, found {}",
                fields.len()
            )));
        }
        let w = if opts.weighted {
            let w: f64 = fields[2].parse().map_err(|_| {
                CliError::parse(format!("line {lineno}: bad weight {:?}", fields[2]))
            })?;
            if !(w.is_finite() && w > 0.0) {
                return Err(CliError::parse(format!(
                    "line {lineno}: weight {w} is not positive"
                )));
            }
            w
        } else {
            1.0
        };
        raw.push((fields[0].to_string(), fields[1].to_string(), w));
    }
    if raw.is_empty() {
        return Err(CliError::parse("no edges: input is empty or all comments"));
    }

    let ids = match opts.id_mode {
        IdMode::String => {
            let mut names = Vec::new();
            let mut index: HashMap<&str, usize> = HashMap::new();
            for (src, dst, _) in &raw {
                for name in [src, dst] {
                    if !index.contains_key(name.as_str()) {
                        index.insert(name, names.len());
                        names.push(name.clone());
                    }
                }
            }
            IdMap::from_names(names)
        }
        IdMode::Integer => integer_ids(&raw)?,
    };

    let edges: Vec<(usize, usize, f64)> = raw
        .iter()
        .map(|(src, dst, w)| {
            (
                ids.index_of(src).expect("id collected above"),
                ids.index_of(dst).expect("id collected above"),
                *w,
            )
        })
        .collect();
    let graph = DirectedGraph::from_edges(ids.len(), &edges)?;
    Ok(ParsedGraph { graph, ids })
}

/// Integer ids: every endpoint must parse as an unsigned number. When the
/// set of ids is exactly 0..n-1 the numbers index directly; otherwise they
/// are remapped in ascending order and a warning says so.
fn integer_ids(raw: &[(String, String, f64)]) -> CliResult<IdMap> {
    let mut values: Vec<u64> = Vec::new();
    for (src, dst, _) in raw {
        for name in [src, dst] {
            let v: u64 = name.parse().map_err(|_| {
                CliError::parse(format!(
                    "node id {name:?} is not an unsigned integer; use --ids string for named nodes"
                ))
            })?;
            values.push(v);
        }
    }
    values.sort_unstable();
    values.dedup();
    let contiguous = values
        .iter()
        .enumerate()
        .all(|(i, &v)| v == i as u64);
    if !contiguous {
        eprintln!(
            "warning: node ids are not contiguous from 0; remapping {} ids in ascending order",
            values.len()
        );
    }
    Ok(IdMap::from_names(values.iter().map(u64::to_string).collect()))
}

/// Reads CAIDA `provider|customer|-1` and `peer|peer|0` lines. A `-1`
/// line becomes one edge from the customer to the provider, following the
/// money; a `0` line becomes an edge in both directions, which the
/// asymmetric part later cancels. AS numbers are remapped to dense
/// indices in ascending order.
pub fn parse_as_rel(reader: impl BufRead) -> CliResult<ParsedGraph> {
    let mut raw: Vec<(u64, u64, bool)> = Vec::new();
    for (lineno, line) in data_lines(reader)? {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(CliError::parse(format!(
                "line {lineno}: expected a|b|relationship, found {} fields",
                fields.len()
            )));
        }
        let a: u64 = fields[0]
            .parse()
            .map_err(|_| CliError::parse(format!("line {lineno}: bad AS number {:?}", fields[0])))?;
        let b: u64 = fields[1]
            .parse()
            .map_err(|_| CliError::parse(format!("line {lineno}: bad AS number {:?}", fields[1])))?;
        let peer = match fields[2] {
            "-1" => false,
            "0" => true,
            other => {
                return Err(CliError::parse(format!(
                    "line {lineno}: unknown relationship code {other:?}"
                )))
            }
        };
        raw.push((a, b, peer));
    }
    if raw.is_empty() {
        return Err(CliError::parse("no relationships: input is empty or all comments"));
    }

    let mut numbers: Vec<u64> = raw.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    numbers.sort_unstable();
    numbers.dedup();
    let index: HashMap<u64, usize> = numbers.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(a, b, peer) in &raw {
        let (ia, ib) = (index[&a], index[&b]);
        if peer {
            edges.push((ia, ib));
            edges.push((ib, ia));
        } else {
            edges.push((ib, ia));
        }
    }
    let graph = DirectedGraph::from_unit_edges(numbers.len(), &edges)?;
    Ok(ParsedGraph {
        graph,
        ids: IdMap::from_names(numbers.iter().map(u64::to_string).collect()),
    })
}

/// Renders a graph back to edge-list text in the graph's deterministic
/// edge order. Weights use the shortest exact decimal form.
pub fn edge_list_string(g: &DirectedGraph, ids: &IdMap, delimiter: char, weighted: bool) -> String {
    let mut out = String::new();
    for (u, v, w) in g.edges() {
        out.push_str(ids.name(u));
        out.push(delimiter);
        out.push_str(ids.name(v));
        if weighted {
            out.push(delimiter);
            out.push_str(&format!("{w}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(format: EdgeFormat, weighted: bool, id_mode: IdMode) -> EdgeListOptions {
        EdgeListOptions { format, weighted, id_mode }
    }

    #[test]
    fn plain_tab_list() {
        let g = parse_edge_list(
            "0\t1\n1\t2\n".as_bytes(),
            &opts(EdgeFormat::Tab, false, IdMode::Integer),
        )
        .unwrap();
        assert_eq!(g.graph.node_count(), 3);
        assert_eq!(g.graph.edge_count(), 2);
        assert_eq!(g.ids.name(0), "0");
    }

    #[test]
    fn weighted_string_ids_with_comment() {
        let g = parse_edge_list(
            "# c\na b 2.5\n".as_bytes(),
            &opts(EdgeFormat::Whitespace, true, IdMode::String),
        )
        .unwrap();
        assert_eq!(g.graph.weight(0, 1), 2.5);
        assert_eq!(g.ids.index_of("a"), Some(0));
        assert_eq!(g.ids.index_of("b"), Some(1));
    }

    #[test]
    fn empty_input_rejected() {
        let err = parse_edge_list(
            "# only a comment\n".as_bytes(),
            &opts(EdgeFormat::Tab, false, IdMode::Integer),
        )
        .unwrap_err();
        assert_eq!(err.category, crate::error::Category::Parse);
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = parse_edge_list(
            "0\t1\n0\t1\t9\n".as_bytes(),
            &opts(EdgeFormat::Tab, false, IdMode::Integer),
        )
        .unwrap_err();
        assert!(err.message.contains("line 2"), "{}", err.message);
    }

    #[test]
    fn nonpositive_weight_rejected() {
        let err = parse_edge_list(
            "0\t1\t-3\n".as_bytes(),
            &opts(EdgeFormat::Tab, true, IdMode::Integer),
        )
        .unwrap_err();
        assert!(err.message.contains("not positive"), "{}", err.message);
    }

    #[test]
    fn noncontiguous_integer_ids_remap_in_order() {
        let g = parse_edge_list(
            "5\t0\n10\t5\n".as_bytes(),
            &opts(EdgeFormat::Tab, false, IdMode::Integer),
        )
        .unwrap();
        assert_eq!(g.graph.node_count(), 3);
        assert_eq!(g.ids.name(0), "0");
        assert_eq!(g.ids.name(1), "5");
        assert_eq!(g.ids.name(2), "10");
        assert_eq!(g.graph.weight(1, 0), 1.0);
        assert_eq!(g.graph.weight(2, 1), 1.0);
    }

    #[test]
    fn csv_delimiter_and_blank_lines() {
        let g = parse_edge_list(
            "0, 1\n\n1, 0\n".as_bytes(),
            &opts(EdgeFormat::Comma, false, IdMode::Integer),
        )
        .unwrap();
        assert_eq!(g.graph.edge_count(), 2);
    }

    #[test]
    fn repeated_edges_accumulate() {
        let g = parse_edge_list(
            "0\t1\t2\n0\t1\t3\n".as_bytes(),
            &opts(EdgeFormat::Tab, true, IdMode::Integer),
        )
        .unwrap();
        assert_eq!(g.graph.weight(0, 1), 5.0);
    }

    #[test]
    fn as_rel_provider_line_points_customer_to_provider() {
        let g = parse_as_rel("1|2|-1\n".as_bytes()).unwrap();
        assert_eq!(g.graph.weight(1, 0), 1.0);
        assert_eq!(g.graph.weight(0, 1), 0.0);
        assert_eq!(g.ids.name(0), "1");
        assert_eq!(g.ids.name(1), "2");
    }

    #[test]
    fn as_rel_peer_line_cancels_under_asymmetric_part() {
        let g = parse_as_rel("1|2|0\n".as_bytes()).unwrap();
        assert_eq!(g.graph.weight(0, 1), 1.0);
        assert_eq!(g.graph.weight(1, 0), 1.0);
        assert_eq!(g.graph.asymmetric_part().edge_count(), 0);
    }

    #[test]
    fn as_rel_unknown_code_rejected() {
        let err = parse_as_rel("1|2|-1\n3|4|7\n".as_bytes()).unwrap_err();
        assert!(err.message.contains("line 2"), "{}", err.message);
        assert!(err.message.contains("unknown relationship"), "{}", err.message);
    }

    #[test]
    fn edge_list_round_trip() {
        let original = "0\t1\t1.5\n1\t2\t0.25\n";
        let o = opts(EdgeFormat::Tab, true, IdMode::Integer);
        let g = parse_edge_list(original.as_bytes(), &o).unwrap();
        let rendered = edge_list_string(&g.graph, &g.ids, '\t', true);
        assert_eq!(rendered, original);
        let again = parse_edge_list(rendered.as_bytes(), &o).unwrap();
        assert_eq!(
            g.graph.edges().collect::<Vec<_>>(),
            again.graph.edges().collect::<Vec<_>>()
        );
    }
}
