//! Text formats: `.gr` graphs, `.td` decompositions and one-line-per-item
//! sidecar files. Files are 1-based; everything in memory is 0-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, Matching, VertexSet};

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| {
        Error::parse(
            line,
            format!("expected a non-negative integer, got {tok:?}"),
        )
    })
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v = number(line, tok)?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses `p <n> <m>` followed by exactly `m` lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match toks.as_slice() {
        ["p", n, m] => (number(hline, n)?, number(hline, m)?),
        _ => return Err(Error::parse(hline, "expected header `p <n> <m>`")),
    };
    let mut edges = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = toks.as_slice() else {
            return Err(Error::parse(line, "expected an edge `u v`"));
        };
        let (u, v) = (vertex(line, a, n)?, vertex(line, b, n)?);
        if u == v {
            return Err(Error::parse(line, format!("self-loop at vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(
                line,
                format!("repeated edge {} {}", u + 1, v + 1),
            ));
        }
        if edges.len() == m {
            return Err(Error::parse(
                line,
                format!("more than the declared {m} edges"),
            ));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, &edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses `s td <#bags> <max-bag> <n>`, bag lines `b <id> <v>...` and tree
/// edge lines `<id> <id>`. Lines starting with `c` and `value=` trailers are
/// skipped. The result is not validated against the host graph beyond vertex
/// ranges; tree edges may form anything.
pub fn parse_td(text: &str, host: &Graph) -> Result<TreeDecomposition> {
    let n = host.vertex_count();
    let mut lines = content_lines(text).filter(|(_, l)| !l.starts_with("value="));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (count, width, declared_n) = match toks.as_slice() {
        ["s", "td", b, w, n] => (number(hline, b)?, number(hline, w)?, number(hline, n)?),
        _ => {
            return Err(Error::parse(
                hline,
                "expected header `s td <bags> <max-bag> <n>`",
            ))
        }
    };
    if declared_n != n {
        return Err(Error::parse(
            hline,
            format!("decomposition is for {declared_n} vertices, graph has {n}"),
        ));
    }
    let mut bags: Vec<Option<VertexSet>> = vec![None; count];
    let mut edges = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["b", id, rest @ ..] => {
                let id = node(line, id, count)?;
                if bags[id].is_some() {
                    return Err(Error::parse(line, format!("bag {} given twice", id + 1)));
                }
                let mut bag = VertexSet::new();
                for tok in rest {
                    if !bag.insert(vertex(line, tok, n)?) {
                        return Err(Error::parse(line, format!("vertex {tok} repeated in bag")));
                    }
                }
                bags[id] = Some(bag);
            }
            [a, b] => edges.push((node(line, a, count)?, node(line, b, count)?)),
            _ => return Err(Error::parse(line, "expected a bag line or a tree edge")),
        }
    }
    let bags: Vec<VertexSet> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(hline, format!("bag {} is missing", i + 1))))
        .collect::<Result<_>>()?;
    let td = TreeDecomposition::new(bags, edges);
    if td.max_bag_size() != width {
        return Err(Error::parse(
            hline,
            format!(
                "header declares max bag size {width}, found {}",
                td.max_bag_size()
            ),
        ));
    }
    Ok(td)
}

fn node(line: usize, tok: &str, count: usize) -> Result<usize> {
    let id = number(line, tok)?;
    if id == 0 || id > count {
        return Err(Error::parse(line, format!("unknown bag id {id}")));
    }
    Ok(id - 1)
}

/// Canonical `.td` text: bags in id order with sorted vertices, then the tree
/// edges in stored order.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.node_count(), td.max_bag_size(), n);
    for (i, bag) in td.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// One vertex set per line.
pub fn parse_sets(text: &str, n: usize) -> Result<Vec<VertexSet>> {
    content_lines(text)
        .map(|(line, l)| {
            let mut set = VertexSet::new();
            for tok in l.split_whitespace() {
                if !set.insert(vertex(line, tok, n)?) {
                    return Err(Error::parse(line, format!("vertex {tok} repeated")));
                }
            }
            Ok(set)
        })
        .collect()
}

pub fn write_sets(sets: &[VertexSet]) -> String {
    let mut out = String::new();
    for s in sets {
        let line: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// One edge `u v` per line. The result is a set of pairs; whether it is a
/// matching of some graph is checked by the caller.
pub fn parse_matching(text: &str, n: usize) -> Result<Matching> {
    let mut edges = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = toks.as_slice() else {
            return Err(Error::parse(line, "expected an edge `u v`"));
        };
        edges.push((vertex(line, a, n)?, vertex(line, b, n)?));
    }
    Ok(Matching::new(edges))
}

pub fn write_matching(m: &Matching) -> String {
    let mut out = String::new();
    for &(u, v) in m.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn parse_graph_file(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&read(path.as_ref())?)
}

pub fn parse_td_file(path: impl AsRef<Path>, host: &Graph) -> Result<TreeDecomposition> {
    parse_td(&read(path.as_ref())?, host)
}

pub fn parse_sets_file(path: impl AsRef<Path>, n: usize) -> Result<Vec<VertexSet>> {
    parse_sets(&read(path.as_ref())?, n)
}

pub fn parse_matching_file(path: impl AsRef<Path>, n: usize) -> Result<Matching> {
    parse_matching(&read(path.as_ref())?, n)
}
