//! Hypergraph connectivity over small vertex sets encoded as bit masks.

use itertools::Itertools;

use crate::fnilp::FnError;
use crate::graph::{Dsu, Vertex};

pub const MAX_HYPERGRAPH_VERTICES: usize = 4;

/// Connectivity of `(vertices, edges)` via its incidence graph. Hyperedges are
/// intersected with `vertices`; the empty and the one-vertex hypergraph are connected.
pub fn connected(vertices: u32, edges: &[u32]) -> bool {
    if vertices.count_ones() <= 1 {
        return true;
    }
    let mut dsu = Dsu::new(32);
    for &e in edges {
        let e = e & vertices;
        if e == 0 {
            continue;
        }
        let first = e.trailing_zeros() as usize;
        for b in bits(e) {
            dsu.union(first, b);
        }
    }
    let root = vertices.trailing_zeros() as usize;
    bits(vertices).all(|b| dsu.find(b) == dsu.find(root))
}

/// Connected, and removing any single hyperedge disconnects it.
pub fn minimally_connected(vertices: u32, edges: &[u32]) -> bool {
    connected(vertices, edges)
        && (0..edges.len()).all(|i| {
            let rest: Vec<u32> = edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
            !connected(vertices, &rest)
        })
}

/// All minimally connected hypergraphs on the vertex set `u`, as sorted lists
/// of hyperedge masks. At most `|u| - 1` hyperedges are used.
pub fn minimal_hypergraph_masks(u: u32) -> Vec<Vec<u32>> {
    let k = u.count_ones() as usize;
    let candidates: Vec<u32> = submasks(u).filter(|&e| e != 0).collect();
    let mut out = Vec::new();
    for size in 0..k.max(1) {
        for combo in candidates.iter().copied().combinations(size) {
            let covered = combo.iter().fold(0, |a, &e| a | e);
            if (k >= 2 && covered != u) || !minimally_connected(u, &combo) {
                continue;
            }
            out.push(combo);
        }
    }
    out
}

/// Minimally connected hypergraphs on an explicit vertex set; hyperedges are
/// sorted vertex lists.
pub fn minimally_connected_hypergraphs(u: &[Vertex]) -> Result<Vec<Vec<Vec<Vertex>>>, FnError> {
    let mut u: Vec<Vertex> = u.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.len() > MAX_HYPERGRAPH_VERTICES {
        return Err(FnError::ScaleCap { what: "hypergraph vertices", value: u.len(), cap: MAX_HYPERGRAPH_VERTICES });
    }
    let full = (1u32 << u.len()) - 1;
    Ok(minimal_hypergraph_masks(full)
        .into_iter()
        .map(|h| h.into_iter().map(|e| bits(e).map(|b| u[b]).collect()).collect())
        .collect())
}

pub fn bits(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| m >> b & 1 == 1)
}

/// All submasks of `m` in increasing order, including 0 and `m`.
pub fn submasks(m: u32) -> impl Iterator<Item = u32> {
    (0..=m).filter(move |s| s & !m == 0)
}
