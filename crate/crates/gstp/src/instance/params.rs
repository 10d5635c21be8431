//! Exact structural parameters for small graphs.
//!
//! `vc`, `fvs` and `fen` are computed on the underlying simple graph
//! (loops and multiplicities ignored). `max_degree` counts multiplicity.

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Dsu, Graph, Vertex};

pub const DEFAULT_EXACT_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    VertexCover,
    FeedbackVertexSet,
    FeedbackEdgeNumber,
    MaxDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("graph has {0} vertices, exact cap is {1}")]
    TooLarge(usize, usize),
}

pub fn parameter(g: &Graph, which: Param) -> Result<usize, ParamError> {
    parameter_capped(g, which, DEFAULT_EXACT_CAP)
}

pub fn parameter_capped(g: &Graph, which: Param, cap: usize) -> Result<usize, ParamError> {
    match which {
        Param::FeedbackEdgeNumber => Ok(g.fen()),
        Param::MaxDegree => Ok(g.max_degree()),
        Param::VertexCover | Param::FeedbackVertexSet if g.n() > cap => Err(ParamError::TooLarge(g.n(), cap)),
        Param::VertexCover => Ok(vertex_cover(&g.simplify())),
        Param::FeedbackVertexSet => Ok(feedback_vertex_set(&g.simplify())),
    }
}

fn vertex_cover(g: &Graph) -> usize {
    fn go(edges: &[(Vertex, Vertex)], taken: &mut Vec<bool>, size: usize, best: &mut usize) {
        if size >= *best {
            return;
        }
        match edges.iter().find(|&&(u, v)| !taken[u] && !taken[v]) {
            None => *best = size,
            Some(&(u, v)) => {
                for x in [u, v] {
                    taken[x] = true;
                    go(edges, taken, size + 1, best);
                    taken[x] = false;
                }
            }
        }
    }
    let edges = g.edge_list();
    let mut best = g.n();
    go(&edges, &mut vec![false; g.n()], 0, &mut best);
    best
}

fn feedback_vertex_set(g: &Graph) -> usize {
    let edges = g.edge_list();
    let acyclic_without = |del: &[Vertex]| {
        let mut dsu = Dsu::new(g.n());
        edges.iter().filter(|(u, v)| !del.contains(u) && !del.contains(v)).all(|&(u, v)| dsu.union(u, v))
    };
    (0..=g.n()).find(|&k| (0..g.n()).combinations(k).any(|del| acyclic_without(&del))).unwrap_or(g.n())
}
