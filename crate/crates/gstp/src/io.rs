//! Text formats. Vertices are 0-based, tokens are separated by whitespace and
//! lines starting with `c` are comments.
//!
//! Instance:
//! ```text
//! p gstp <n> <m> <t>
//! e <u> <v>                 (m lines)
//! s <d> <k> <v1> .. <vk>    (t lines)
//! ```
//! Solution, one part per line (a trailing `FEASIBLE` line is accepted):
//! ```text
//! t <terminal index> <u1> <v1> <u2> <v2> ..
//! ```
//! Decomposition:
//! ```text
//! p td|tcd <nodes> <root>
//! b <node> <v..>            (at most one per node; missing means empty)
//! l <parent> <child>
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::instance::{GstpInstance, Part, Solution};
use crate::treecut::TreeCutDecomposition;
use crate::twdp::TreeDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected {what}, found '{tok}'")))
}

fn nums(line: usize, toks: &[&str], what: &str) -> Result<Vec<usize>, ParseError> {
    toks.iter().map(|t| num(line, t, what)).collect()
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<Vertex, ParseError> {
    let v = num(line, tok, "vertex")?;
    if v >= n {
        return err(line, format!("vertex {v} out of range (n = {n})"));
    }
    Ok(v)
}

type GraphAndSets = (Graph, Vec<Vec<Vertex>>, Vec<usize>);

/// A graph in instance form. Parallel edges are allowed here and the sets
/// are returned as parsed.
fn parse_graph_and_sets(text: &str) -> Result<GraphAndSets, ParseError> {
    let mut it = records(text);
    let Some((hl, h)) = it.next() else { return err(0, "missing header 'p gstp n m t'") };
    if h.len() != 5 || h[0] != "p" || h[1] != "gstp" {
        return err(hl, "expected header 'p gstp n m t'");
    }
    let n: usize = num(hl, h[2], "vertex count")?;
    let m: usize = num(hl, h[3], "edge count")?;
    let t: usize = num(hl, h[4], "terminal set count")?;
    let mut g = Graph::new_multi(n);
    let (mut sets, mut demands) = (Vec::new(), Vec::new());
    let mut edges = 0;
    let mut last = hl;
    for (ln, toks) in it {
        last = ln;
        match toks[0] {
            "e" => {
                if toks.len() != 3 {
                    return err(ln, "expected 'e u v'");
                }
                if !sets.is_empty() {
                    return err(ln, "edge after terminal sets");
                }
                let (u, v) = (vertex(ln, toks[1], n)?, vertex(ln, toks[2], n)?);
                if u == v {
                    return err(ln, format!("loop at {u}"));
                }
                g.add_edge(u, v).or_else(|e| err(ln, e.to_string()))?;
                edges += 1;
            }
            "s" => {
                if toks.len() < 3 {
                    return err(ln, "expected 's d k v1 .. vk'");
                }
                let d: usize = num(ln, toks[1], "demand")?;
                let k: usize = num(ln, toks[2], "set size")?;
                if d == 0 {
                    return err(ln, "demand must be at least 1");
                }
                if toks.len() != 3 + k {
                    return err(ln, format!("set size {k} but {} vertices", toks.len() - 3));
                }
                let set = toks[3..].iter().map(|tok| vertex(ln, tok, n)).collect::<Result<Vec<_>, _>>()?;
                sets.push(set);
                demands.push(d);
            }
            other => return err(ln, format!("unknown record '{other}'")),
        }
    }
    if edges != m {
        return err(last, format!("header says {m} edges, found {edges}"));
    }
    if sets.len() != t {
        return err(last, format!("header says {t} terminal sets, found {}", sets.len()));
    }
    Ok((g, sets, demands))
}

pub fn parse_instance(text: &str) -> Result<GstpInstance, ParseError> {
    let (g, sets, demands) = parse_graph_and_sets(text)?;
    if !g.is_simple() {
        let (u, v) = g.edges().find(|&(_, m)| m > 1).map(|(e, _)| e).unwrap_or_default();
        return err(0, format!("parallel edge {u} {v}; instance graphs must be simple"));
    }
    GstpInstance::new(g.simplify(), sets, demands).or_else(|e| err(0, e.to_string()))
}

/// Reads only the graph part of an instance file; parallel edges are kept.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    parse_graph_and_sets(text).map(|(g, _, _)| g)
}

fn write_edges(out: &mut String, g: &Graph) {
    for ((u, v), m) in g.edges() {
        for _ in 0..m {
            writeln!(out, "e {u} {v}").unwrap();
        }
    }
}

/// Canonical form: edges and terminal sets sorted.
pub fn write_instance(inst: &GstpInstance) -> String {
    let g = inst.graph();
    let mut out = format!("p gstp {} {} {}\n", g.n(), g.edge_count(), inst.terminal_count());
    write_edges(&mut out, g);
    for (t, d) in inst.sets() {
        write!(out, "s {d} {}", t.len()).unwrap();
        for v in t {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// A (multi)graph in instance form without terminal sets.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p gstp {} {} 0\n", g.n(), g.edge_count());
    write_edges(&mut out, g);
    out
}

pub fn parse_solution(text: &str) -> Result<Solution, ParseError> {
    let mut parts = Vec::new();
    for (ln, toks) in records(text) {
        match toks[0] {
            "t" => {
                if toks.len() < 2 || toks.len() % 2 != 0 {
                    return err(ln, "expected 't index u1 v1 ..'");
                }
                let terminal = num(ln, toks[1], "terminal index")?;
                let ends = nums(ln, &toks[2..], "vertex")?;
                let edges: Vec<Edge> = ends.chunks(2).map(|p| (p[0], p[1])).collect();
                parts.push((edges, terminal));
            }
            "FEASIBLE" if toks.len() == 1 => {}
            other => return err(ln, format!("unknown record '{other}'")),
        }
    }
    Ok(Solution::new(parts))
}

pub fn write_solution(sol: &Solution) -> String {
    let mut out = String::new();
    for Part { edges, terminal } in &sol.parts {
        write!(out, "t {terminal}").unwrap();
        for (u, v) in edges {
            write!(out, " {u} {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Tree(TreeDecomposition),
    TreeCut(TreeCutDecomposition),
}

/// Parses the file and checks the tree shape. Bag conditions are checked by
/// [`load_decomposition`].
pub fn parse_decomposition(text: &str) -> Result<Decomposition, ParseError> {
    let mut it = records(text);
    let Some((hl, h)) = it.next() else { return err(0, "missing header 'p td|tcd nodes root'") };
    if h.len() != 4 || h[0] != "p" || !matches!(h[1], "td" | "tcd") {
        return err(hl, "expected header 'p td|tcd nodes root'");
    }
    let nodes: usize = num(hl, h[2], "node count")?;
    let root: usize = num(hl, h[3], "root")?;
    if nodes == 0 || root >= nodes {
        return err(hl, format!("root {root} out of range ({nodes} nodes)"));
    }
    let mut bags: Vec<Option<Vec<Vertex>>> = vec![None; nodes];
    let mut parent: Vec<Option<usize>> = vec![None; nodes];
    let mut last = hl;
    for (ln, toks) in it {
        last = ln;
        let node = |tok: &str| -> Result<usize, ParseError> {
            let x: usize = num(ln, tok, "node")?;
            if x >= nodes {
                return err(ln, format!("node {x} out of range ({nodes} nodes)"));
            }
            Ok(x)
        };
        match toks[0] {
            "b" if toks.len() >= 2 => {
                let t = node(toks[1])?;
                if bags[t].is_some() {
                    return err(ln, format!("second bag for node {t}"));
                }
                bags[t] = Some(nums(ln, &toks[2..], "vertex")?);
            }
            "l" if toks.len() == 3 => {
                let (p, c) = (node(toks[1])?, node(toks[2])?);
                if c == root {
                    return err(ln, "the root cannot be a child");
                }
                if parent[c].is_some() {
                    return err(ln, format!("node {c} has two parents"));
                }
                parent[c] = Some(p);
            }
            "b" | "l" => return err(ln, format!("malformed '{}' record", toks[0])),
            other => return err(ln, format!("unknown record '{other}'")),
        }
    }
    for t in 0..nodes {
        if t != root && parent[t].is_none() {
            return err(last, format!("node {t} has no parent"));
        }
        let mut seen = vec![false; nodes];
        let mut x = t;
        while let Some(p) = parent[x] {
            if seen[x] {
                return err(last, format!("node {t} lies on a cycle"));
            }
            seen[x] = true;
            x = p;
        }
    }
    let bags: Vec<Vec<Vertex>> = bags.into_iter().map(Option::unwrap_or_default).collect();
    Ok(if h[1] == "td" {
        Decomposition::Tree(TreeDecomposition::new(bags, parent, root))
    } else {
        Decomposition::TreeCut(TreeCutDecomposition::new(bags, parent, root))
    })
}

/// Parses and validates against `g`.
pub fn load_decomposition(text: &str, g: &Graph) -> Result<Decomposition, ParseError> {
    let d = parse_decomposition(text)?;
    let check = match &d {
        Decomposition::Tree(td) => td.validate(g).map_err(|e| e.to_string()),
        Decomposition::TreeCut(tcd) => tcd.validate(g).map_err(|e| e.to_string()),
    };
    check.or_else(|m| err(0, format!("invalid decomposition: {m}")))?;
    Ok(d)
}

fn write_tree(kind: &str, bags: &[Vec<Vertex>], parent: &[Option<usize>], root: usize) -> String {
    let mut out = format!("p {kind} {} {root}\n", bags.len());
    for (t, bag) in bags.iter().enumerate() {
        write!(out, "b {t}").unwrap();
        for v in bag {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            writeln!(out, "l {p} {c}").unwrap();
        }
    }
    out
}

pub fn write_decomposition(d: &Decomposition) -> String {
    match d {
        Decomposition::Tree(td) => write_tree("td", &td.bags, &td.parent, td.root),
        Decomposition::TreeCut(tcd) => write_tree("tcd", &tcd.bags, &tcd.parent, tcd.root),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::instance::families::{complete, random_instance, windmill, RandomSpec};
    use crate::instance::{from_stp, verify};
    use crate::oracle::{solve_exact, OracleConfig, OracleResult};
    use crate::twdp::tree_decomposition;

    #[test]
    fn windmill_file() {
        let text = write_instance(&GstpInstance::bare(windmill(3)));
        assert!(text.starts_with("p gstp 7 9 0\n"));
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn instance_errors_name_the_line() {
        let cases = [
            ("", 0),
            ("p gstp 2 1\n", 1),
            ("c hi\np gstp 2 1 0\ne 0 2\n", 3),
            ("p gstp 3 1 1\ne 0 1\ns 1 3 0 1\n", 3),
            ("p gstp 3 1 1\ne 0 1\ns 0 2 0 1\n", 3),
            ("p gstp 3 2 0\ne 0 1\n", 2),
            ("p gstp 3 1 0\nx 0 1\n", 2),
            ("p gstp 3 1 0\ne 1 1\n", 2),
        ];
        for (text, line) in cases {
            assert_eq!(parse_instance(text).map_err(|e| e.line), Err(line), "{text:?}");
        }
        assert!(parse_instance("p gstp 2 2 0\ne 0 1\ne 1 0\n").is_err());
        assert_eq!(parse_graph("p gstp 2 2 0\ne 0 1\ne 1 0\n").unwrap().multiplicity(0, 1), 2);
    }

    #[test]
    fn parses_comments_and_sorts() {
        let text = "c k3\np gstp 3 3 2\ne 2 1\ne 0 1\nc mid\ne 0 2\ns 1 2 2 0\ns 2 2 1 0\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.terminals(), &[vec![0, 1], vec![0, 2]]);
        assert_eq!(write_instance(&inst), "p gstp 3 3 2\ne 0 1\ne 0 2\ne 1 2\ns 2 2 0 1\ns 1 2 0 2\n");
    }

    #[test]
    fn witness_round_trip_verifies() {
        let inst = from_stp(complete(4), vec![0, 1, 2, 3], 2).unwrap();
        let OracleResult::Feasible(sol) = solve_exact(&inst, &OracleConfig::default()) else { panic!() };
        let text = format!("{}FEASIBLE\n", write_solution(&sol));
        let back = parse_solution(&text).unwrap();
        assert_eq!(back, sol.clone().canonical());
        assert_eq!(verify(&inst, &back), Ok(()));
        assert_eq!(parse_solution("t 0 1\n").map_err(|e| e.line), Err(1));
    }

    #[test]
    fn decomposition_files() {
        let g = complete(3);
        let text = "p tcd 2 0\nb 0 0 1\nb 1 2\nl 0 1\n";
        let d = load_decomposition(text, &g).unwrap();
        assert_eq!(write_decomposition(&d), text);
        assert!(load_decomposition("p tcd 2 0\nb 0 0 1\nl 0 1\n", &g).is_err());
        assert!(matches!(load_decomposition("p td 2 0\nb 0 0 1 2\nb 1 1 2\nl 0 1\n", &g), Ok(Decomposition::Tree(_))));
        let bad = [
            ("p td 2 0\nb 0 0\n", 2),
            ("p td 2 0\nl 0 1\nl 0 1\n", 3),
            ("p td 3 0\nl 2 1\nl 1 2\n", 3),
            ("p td 2 0\nl 1 0\n", 2),
            ("p td 2 0\nb 5 0\n", 2),
            ("p td 2 2\n", 1),
        ];
        for (text, line) in bad {
            assert_eq!(parse_decomposition(text).map_err(|e| e.line), Err(line), "{text:?}");
        }
    }

    proptest! {
        #[test]
        fn instance_round_trip(seed in any::<u64>(), n in 1usize..9, m in 0usize..14, sets in 0usize..3) {
            let spec = RandomSpec { n, m, sets, max_total_demand: 4, max_set_size: 4 };
            let inst = random_instance(&spec, seed);
            let text = write_instance(&inst);
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(write_instance(&back), text);
        }

        #[test]
        fn decomposition_round_trip(seed in any::<u64>(), n in 1usize..9, m in 0usize..14) {
            let spec = RandomSpec { n, m, sets: 0, max_total_demand: 0, max_set_size: 2 };
            let g = random_instance(&spec, seed).graph().clone();
            let d = Decomposition::Tree(tree_decomposition(&g, 10));
            let text = write_decomposition(&d);
            prop_assert_eq!(&load_decomposition(&text, &g).unwrap(), &d);
            let (g2, tcd) = crate::treecut::tests::random_tcd(seed, n, m, 4);
            let d = Decomposition::TreeCut(tcd);
            let text = write_decomposition(&d);
            prop_assert_eq!(&load_decomposition(&text, &g2).unwrap(), &d);
        }
    }
}
