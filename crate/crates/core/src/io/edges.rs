//! Weighted edge lists: `source, target, weight[, timestamp]` per line.

use std::collections::HashMap;
use std::path::Path;

use super::{fmt_f64, parse_f64, read_text, write_text};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Skip edges with negative weight. Their endpoints still become nodes.
    pub drop_negative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    /// Original id of each node, in first-appearance order.
    pub ids: Vec<String>,
    /// Fourth column per kept edge, if present.
    pub timestamps: Vec<Option<f64>>,
}

#[derive(Clone, Copy, PartialEq)]
enum Separator {
    Comma,
    Whitespace,
}

fn split(line: &str, sep: Separator) -> Vec<&str> {
    match sep {
        Separator::Comma => line.split(',').map(str::trim).collect(),
        Separator::Whitespace => line.split_whitespace().collect(),
    }
}

/// Reads an edge list. Lines starting with `#` or `%` and blank lines are
/// skipped, as is a first data line whose weight column is not numeric
/// (a header). The separator (comma or whitespace) is fixed by the first
/// data line. A missing weight column means weight 1.
///
/// Node ids are arbitrary tokens remapped to `0..n` in order of first
/// appearance.
pub fn load_edge_list(path: impl AsRef<Path>, options: LoadOptions) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut sep = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ids: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut timestamps = Vec::new();
    let mut first_line: HashMap<(usize, usize), usize> = HashMap::new();
    let mut duplicates = Vec::new();
    let mut seen_data = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let sep = *sep.get_or_insert(if line.contains(',') {
            Separator::Comma
        } else {
            Separator::Whitespace
        });
        let fields = split(line, sep);
        if !(2..=4).contains(&fields.len()) {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 2 to 4 fields, found {}", fields.len()),
            ));
        }
        let is_header = !seen_data
            && fields.len() >= 3
            && fields[2].parse::<f64>().is_err();
        seen_data = true;
        if is_header {
            continue;
        }
        let w = match fields.get(2) {
            Some(f) => parse_f64(path, lineno, f)?,
            None => 1.0,
        };
        let ts = match fields.get(3) {
            Some(f) => Some(parse_f64(path, lineno, f)?),
            None => None,
        };
        if fields[0] == fields[1] {
            return Err(Error::parse(path, lineno, format!("self-loop at node {}", fields[0])));
        }
        if w == 0.0 || !w.is_finite() {
            return Err(Error::parse(path, lineno, format!("weight {w} must be finite and nonzero")));
        }
        let mut id = |name: &str| {
            *index.entry(name.to_string()).or_insert_with(|| {
                ids.push(name.to_string());
                ids.len() - 1
            })
        };
        let (u, v) = (id(fields[0]), id(fields[1]));
        if let Some(&prev) = first_line.get(&(u, v)) {
            duplicates.push(format!("{}->{} (lines {prev} and {lineno})", fields[0], fields[1]));
            continue;
        }
        first_line.insert((u, v), lineno);
        if options.drop_negative && w < 0.0 {
            continue;
        }
        edges.push(Edge::new(u, v, w));
        timestamps.push(ts);
    }
    if !duplicates.is_empty() {
        let line = first_line.values().copied().min().unwrap_or(0);
        return Err(Error::parse(
            path,
            line,
            format!("duplicate edges: {}", duplicates.join(", ")),
        ));
    }
    if ids.is_empty() {
        return Err(Error::parse(path, 0, "no edges found"));
    }
    Ok(LoadedGraph {
        graph: DirectedGraph::new(ids.len(), edges)?,
        ids,
        timestamps,
    })
}

/// `source,target,weight` with node indices as ids.
pub fn write_edge_list(path: impl AsRef<Path>, g: &DirectedGraph) -> Result<()> {
    let mut out = String::from("source,target,weight\n");
    for e in g.edges() {
        out.push_str(&format!("{},{},{}\n", e.u, e.v, fmt_f64(e.w)));
    }
    write_text(path.as_ref(), &out)
}

/// `node,x,y` per node.
pub fn write_coords(path: impl AsRef<Path>, coords: &[(f64, f64)]) -> Result<()> {
    let mut out = String::from("node,x,y\n");
    for (i, (x, y)) in coords.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", fmt_f64(*x), fmt_f64(*y)));
    }
    write_text(path.as_ref(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_line_example() {
        let f = file("0,1,5\n1,2,-3\n2,0,1\n");
        let g = load_edge_list(f.path(), LoadOptions::default()).unwrap();
        assert_eq!(g.graph.n(), 3);
        assert_eq!(g.graph.edge_count(), 3);
        let ws: Vec<f64> = g.graph.edges().iter().map(|e| e.w).collect();
        assert_eq!(ws, vec![5.0, -3.0, 1.0]);

        let g = load_edge_list(f.path(), LoadOptions { drop_negative: true }).unwrap();
        assert_eq!(g.graph.n(), 3);
        assert_eq!(g.graph.edge_count(), 2);
    }

    #[test]
    fn ids_remap_in_first_appearance_order() {
        let f = file("# comment\nsrc dst w t\n17 4 2 100\n4 99 1.5 101\n\n99 17 -1 102\n");
        let g = load_edge_list(f.path(), LoadOptions::default()).unwrap();
        assert_eq!(g.ids, vec!["17", "4", "99"]);
        assert_eq!(g.graph.edges()[1], Edge::new(1, 2, 1.5));
        assert_eq!(g.timestamps, vec![Some(100.0), Some(101.0), Some(102.0)]);
    }

    #[test]
    fn two_column_lines_default_to_unit_weight() {
        let f = file("a,b\nb,c\n");
        let g = load_edge_list(f.path(), LoadOptions::default()).unwrap();
        assert!(g.graph.edges().iter().all(|e| e.w == 1.0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("0,1,1\n1,1,2\n", 2),
            ("0,1,1\n1,2,x\n", 2),
            ("0,1,1\n1,2,3,4,5\n", 2),
            ("0,1,1\n1,2,0\n", 2),
        ];
        for (content, line) in cases {
            match load_edge_list(file(content).path(), LoadOptions::default()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{content}"),
                other => panic!("{content:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn duplicates_are_listed() {
        let f = file("0,1,1\n1,2,1\n0,1,3\n1,2,2\n");
        let err = load_edge_list(f.path(), LoadOptions::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0->1 (lines 1 and 3)") && msg.contains("1->2 (lines 2 and 4)"), "{msg}");
    }

    #[test]
    fn mixed_separators_fail() {
        let f = file("0,1,1\n1 2 1\n");
        assert!(load_edge_list(f.path(), LoadOptions::default()).is_err());
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_edge_list("/nonexistent/edges.csv", LoadOptions::default()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/edges.csv"));
    }

    #[test]
    fn write_then_load_roundtrips() {
        let g = DirectedGraph::from_triples(4, &[(0, 1, 0.1), (1, 2, -1.0 / 3.0), (3, 0, 7.25)])
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.csv");
        write_edge_list(&p, &g).unwrap();
        let back = load_edge_list(&p, LoadOptions::default()).unwrap();
        assert_eq!(back.graph.edges(), g.edges());
        assert_eq!(back.ids, vec!["0", "1", "2", "3"]);
    }
}
