//! `(k, d)`-fracture deletion, minimum fracture modulators and nice modulators.
//!
//! A set `S` is a `k`-fracture deletion set if every component of `G - S`
//! has at most `k` vertices, and a fracture modulator if this holds for
//! `k = |S|`.
//!
//! Branching on a single vertex per oversized component is not enough: two
//! disjoint `P5`s need one vertex from each, and no single vertex of a `P5`
//! is a modulator on its own. The recursion below therefore searches for the
//! exact deletion budget of every oversized component.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexMap};
use crate::instance::{augment, AugmentMode, GstpInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FractureQuery {
    /// Component-size bound.
    pub k: usize,
    /// Exact size of the deletion set.
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractureResult {
    Feasible(Vec<Vertex>),
    Infeasible,
}

impl FractureResult {
    pub fn set(&self) -> Option<&[Vertex]> {
        match self {
            FractureResult::Feasible(s) => Some(s),
            FractureResult::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractureError {
    #[error("vertex {0} is outside the augmented graph")]
    VertexOutOfRange(Vertex),
    #[error("set of size {size} leaves a component of {largest} vertices")]
    NotAModulator { size: usize, largest: usize },
}

/// Decides whether a `k`-fracture deletion set of size exactly `d` exists.
/// The returned set is sorted.
pub fn fracture_deletion(g: &Graph, q: FractureQuery) -> FractureResult {
    let adj = g.adjacency();
    let all: Vec<Vertex> = (0..g.n()).collect();
    match solve(&adj, &all, q.k, q.d) {
        Some(mut s) => {
            s.sort_unstable();
            FractureResult::Feasible(s)
        }
        None => FractureResult::Infeasible,
    }
}

/// Minimum fracture modulator `S` with `k = |S|`. Tries `(k, k)` for `k = 1, 2, ...`.
pub fn fracture_modulator(g: &Graph) -> (Vec<Vertex>, usize) {
    fracture_modulator_capped(g, g.n().max(1)).unwrap_or((Vec::new(), 0))
}

/// Minimum fracture modulator of size at most `cap`, if one exists.
pub fn fracture_modulator_capped(g: &Graph, cap: usize) -> Option<(Vec<Vertex>, usize)> {
    (1..=cap).find_map(|k| fracture_deletion(g, FractureQuery { k, d: k }).set().map(|s| (s.to_vec(), k)))
}

/// Size of the largest component of `g - s`.
pub fn largest_component_without(g: &Graph, s: &[Vertex]) -> usize {
    let (h, _) = g.remove_vertices(s);
    h.components().iter().map(Vec::len).max().unwrap_or(0)
}

pub fn is_fracture_modulator(g: &Graph, s: &[Vertex]) -> bool {
    largest_component_without(g, s) <= s.len()
}

fn components_within(adj: &[Vec<Vertex>], active: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut inside = vec![false; adj.len()];
    for &v in active {
        inside[v] = true;
    }
    let mut seen = vec![false; adj.len()];
    let mut comps = Vec::new();
    for &s in active {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in &adj[v] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// First `size` vertices reached by BFS from the lowest active vertex.
fn connected_subset(adj: &[Vec<Vertex>], active: &[Vertex], size: usize) -> Vec<Vertex> {
    let mut inside = vec![false; adj.len()];
    for &v in active {
        inside[v] = true;
    }
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::with_capacity(size);
    let mut queue = VecDeque::from([active[0]]);
    seen[active[0]] = true;
    while let Some(v) = queue.pop_front() {
        out.push(v);
        if out.len() == size {
            break;
        }
        for &w in &adj[v] {
            if inside[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    out.sort_unstable();
    out
}

fn pad(mut s: Vec<Vertex>, active: &[Vertex], d: usize) -> Vec<Vertex> {
    for &v in active {
        if s.len() >= d {
            break;
        }
        if !s.contains(&v) {
            s.push(v);
        }
    }
    s
}

fn solve(adj: &[Vec<Vertex>], active: &[Vertex], k: usize, d: usize) -> Option<Vec<Vertex>> {
    if active.len() < d {
        return None;
    }
    let comps = components_within(adj, active);
    let oversized: Vec<&Vec<Vertex>> = comps.iter().filter(|c| c.len() > k).collect();
    if oversized.is_empty() {
        return Some(pad(Vec::new(), active, d));
    }
    if d == 0 {
        return None;
    }
    if comps.len() == 1 {
        for u in connected_subset(adj, active, k + 1) {
            let rest: Vec<Vertex> = active.iter().copied().filter(|&v| v != u).collect();
            if let Some(mut s) = solve(adj, &rest, k, d - 1) {
                s.push(u);
                return Some(s);
            }
        }
        return None;
    }
    if oversized.len() == 1 {
        let c = oversized[0];
        // Deletion is monotone in d, so a smaller set inside C can be padded outside it.
        let s = solve(adj, c, k, d.min(c.len()))?;
        return Some(pad(s, active, d));
    }
    if oversized.len() > d {
        return None;
    }
    let mut s = Vec::new();
    let mut used = 0;
    for (i, c) in oversized.iter().enumerate() {
        let others_min = oversized.len() - i - 1;
        let upper = (d - used - others_min).min(c.len());
        let found = (1..=upper).find_map(|dc| solve(adj, c, k, dc).map(|part| (dc, part)));
        let (dc, part) = found?;
        used += dc;
        s.extend(part);
    }
    Some(pad(s, active, d))
}

/// Result of [`make_nice_modulator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceModulatorResult {
    pub instance: GstpInstance,
    /// Sorted modulator in the vertex-augmented graph of `instance`.
    pub modulator: Vec<Vertex>,
    /// Old augmented-graph vertex to new augmented-graph vertex.
    pub vertex_map: VertexMap,
}

/// Turns a fracture modulator `x` of the vertex-augmented graph into a nice
/// one: edges inside `x ∩ V(G)` are subdivided, augmented vertices whose set
/// lies in a single `C⁺` are dropped, and isolated vertices are added to the
/// host graph and the modulator until it is a modulator again.
pub fn make_nice_modulator(inst: &GstpInstance, x: &[Vertex]) -> Result<NiceModulatorResult, FractureError> {
    let aug = augment(inst, AugmentMode::Vertex);
    let n = inst.graph().n();
    let mut x: Vec<Vertex> = x.to_vec();
    x.sort_unstable();
    x.dedup();
    if let Some(&v) = x.iter().find(|&&v| v >= aug.graph.n()) {
        return Err(FractureError::VertexOutOfRange(v));
    }
    let largest = largest_component_without(&aug.graph, &x);
    if largest > x.len() {
        return Err(FractureError::NotAModulator { size: x.len(), largest });
    }

    let host_x: Vec<Vertex> = x.iter().copied().filter(|&v| v < n).collect();
    let mut g = inst.graph().clone();
    for (i, &u) in host_x.iter().enumerate() {
        for &v in &host_x[i + 1..] {
            if g.has_edge(u, v) {
                g = g.subdivide(u, v).expect("edge present").0;
            }
        }
    }

    let (_, back) = components_of_complement(&aug.graph, &x);
    let in_x = |v: Vertex| x.binary_search(&v).is_ok();
    let violates = |t: &[Vertex]| {
        let outside: Vec<Vertex> = t.iter().copied().filter(|&v| !in_x(v)).collect();
        match outside.first() {
            None => true,
            Some(&v0) => outside.iter().all(|&v| back[v] == back[v0]),
        }
    };
    let mut z: Vec<Vertex> = Vec::new();
    for &v in &x {
        match aug.terminal_of(v) {
            Some(i) if violates(&inst.terminals()[i]) => {}
            _ => z.push(v),
        }
    }

    // Pad with isolated host vertices; augmented vertices shift with the host size.
    let mut instance = GstpInstance::new(g.clone(), inst.terminals().to_vec(), inst.demands().to_vec())
        .expect("subdivision keeps the instance valid");
    loop {
        let new_n = instance.graph().n();
        let shift = |v: Vertex| if v < n { v } else { v - n + new_n };
        let mut s: Vec<Vertex> = z.iter().map(|&v| shift(v)).chain(g.n()..new_n).collect();
        s.sort_unstable();
        let aug_new = augment(&instance, AugmentMode::Vertex);
        if !s.is_empty() && is_fracture_modulator(&aug_new.graph, &s) {
            let vertex_map = (0..aug.graph.n()).map(|v| Some(shift(v))).collect();
            return Ok(NiceModulatorResult { instance, modulator: s, vertex_map });
        }
        let mut h = instance.graph().clone();
        h.add_vertex();
        instance = instance.with_graph(h).expect("isolated vertex keeps the instance valid");
    }
}

/// Component id of every vertex outside `s`; `usize::MAX` for vertices of `s`.
fn components_of_complement(g: &Graph, s: &[Vertex]) -> (Vec<Vec<Vertex>>, Vec<usize>) {
    let (h, map) = g.remove_vertices(s);
    let comps = h.components();
    let mut inv = vec![usize::MAX; h.n()];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = new {
            inv[*new] = old;
        }
    }
    let mut back = vec![usize::MAX; g.n()];
    let comps: Vec<Vec<Vertex>> = comps
        .into_iter()
        .enumerate()
        .map(|(ci, c)| {
            c.into_iter()
                .map(|v| {
                    back[inv[v]] = ci;
                    inv[v]
                })
                .collect()
        })
        .collect();
    (comps, back)
}

/// Checks both niceness conditions for `s` in the vertex-augmented graph of `inst`.
pub fn is_nice_modulator(inst: &GstpInstance, s: &[Vertex]) -> bool {
    let aug = augment(inst, AugmentMode::Vertex);
    let n = inst.graph().n();
    if !is_fracture_modulator(&aug.graph, s) {
        return false;
    }
    let host: Vec<Vertex> = s.iter().copied().filter(|&v| v < n).collect();
    let edgeless = host.iter().enumerate().all(|(i, &u)| host[i + 1..].iter().all(|&v| !inst.graph().has_edge(u, v)));
    let (_, back) = components_of_complement(&aug.graph, s);
    let spans_two = s.iter().filter_map(|&v| aug.terminal_of(v)).all(|i| {
        let mut ids: Vec<usize> = inst.terminals()[i].iter().map(|&v| back[v]).filter(|&c| c != usize::MAX).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len() >= 2
    });
    edgeless && spans_two
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::families::{path, windmill};
    use crate::oracle::decide;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn exhaustive(g: &Graph, k: usize, d: usize) -> bool {
        d <= g.n() && (0..g.n()).combinations(d).any(|s| largest_component_without(g, &s) <= k)
    }

    #[test]
    fn p5_needs_two() {
        let p5 = path(5);
        assert_eq!(fracture_deletion(&p5, FractureQuery { k: 1, d: 1 }), FractureResult::Infeasible);
        let (s, k) = fracture_modulator(&p5);
        assert_eq!(k, 2);
        assert!(is_fracture_modulator(&p5, &s));
    }

    #[test]
    fn two_p5_take_both_centers() {
        let g = path(5).disjoint_union(&path(5));
        let r = fracture_deletion(&g, FractureQuery { k: 2, d: 2 });
        assert_eq!(r, FractureResult::Feasible(vec![2, 7]));
    }

    #[test]
    fn tiny_cases() {
        assert_eq!(fracture_deletion(&Graph::new(1), FractureQuery { k: 1, d: 0 }), FractureResult::Feasible(vec![]));
        assert_eq!(fracture_modulator(&Graph::new(1)), (vec![0], 1));
        // Removing the center leaves two pairs, which a 1-set cannot allow.
        assert_eq!(fracture_modulator(&windmill(2)).1, 2);
        assert!(exhaustive(&windmill(2), 2, 2) && !exhaustive(&windmill(2), 1, 1));
    }

    #[test]
    fn single_oversized_component_with_large_budget() {
        // P5 plus isolated vertices: the budget exceeds |V(P5)|.
        let g = path(5).disjoint_union(&Graph::new(3));
        let r = fracture_deletion(&g, FractureQuery { k: 2, d: 6 });
        let s = r.set().expect("feasible");
        assert_eq!(s.len(), 6);
        assert!(largest_component_without(&g, s) <= 2);
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..=8).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
                let es: Vec<_> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| *e).collect();
                Graph::from_edges(n, &es)
            })
        })
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive(g in small_graph()) {
            for k in 0..=g.n() {
                for d in 0..=g.n() + 1 {
                    let r = fracture_deletion(&g, FractureQuery { k, d });
                    prop_assert_eq!(r.set().is_some(), exhaustive(&g, k, d), "k={} d={}", k, d);
                    if let Some(s) = r.set() {
                        prop_assert_eq!(s.len(), d);
                        prop_assert!(largest_component_without(&g, s) <= k);
                    }
                }
            }
        }

        #[test]
        fn modulator_is_minimum(g in small_graph()) {
            let (s, k) = fracture_modulator(&g);
            prop_assert_eq!(s.len(), k);
            prop_assert!(is_fracture_modulator(&g, &s));
            prop_assert!(!(1..k).any(|j| exhaustive(&g, j, j)));
        }

        #[test]
        fn modulator_monotone_under_edge_addition(g in small_graph(), u in 0usize..8, v in 0usize..8) {
            let (u, v) = (u % g.n(), v % g.n());
            prop_assume!(u != v && !g.has_edge(u, v));
            let mut h = g.clone();
            h.add_edge(u, v).unwrap();
            prop_assert!(fracture_modulator(&g).1 <= fracture_modulator(&h).1);
        }
    }

    #[test]
    fn already_nice_is_unchanged() {
        // Path 0-1-2 with T = {0, 2}; augmented vertex is 3.
        let inst = GstpInstance::new(path(3), vec![vec![0, 2]], vec![1]).unwrap();
        let r = make_nice_modulator(&inst, &[1, 3]).unwrap();
        assert_eq!(r.instance, inst);
        assert_eq!(r.modulator, vec![1, 3]);
        assert!(is_nice_modulator(&r.instance, &r.modulator));
        assert_eq!(decide(&inst), decide(&r.instance));
    }

    #[test]
    fn modulator_edge_is_subdivided() {
        // Triangle 0,1,2 with X = {0, 1}.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let inst = GstpInstance::bare(g);
        let r = make_nice_modulator(&inst, &[0, 1]).unwrap();
        assert!(!r.instance.graph().has_edge(0, 1));
        assert_eq!(r.instance.graph().n(), 4);
        assert!(is_nice_modulator(&r.instance, &r.modulator));
    }

    #[test]
    fn rejects_non_modulator() {
        let inst = GstpInstance::bare(path(5));
        assert!(matches!(make_nice_modulator(&inst, &[0]), Err(FractureError::NotAModulator { .. })));
    }

    fn small_instance() -> impl Strategy<Value = GstpInstance> {
        (4usize..=6, 0u64..1000).prop_map(|(n, seed)| {
            let spec =
                crate::instance::families::RandomSpec { n, m: n + 1, sets: 2, max_total_demand: 3, max_set_size: 3 };
            crate::instance::families::random_instance(&spec, seed)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn nice_modulator_preserves_decision(inst in small_instance()) {
            let aug = augment(&inst, AugmentMode::Vertex);
            let (x, _) = fracture_modulator(&aug.graph);
            let r = make_nice_modulator(&inst, &x).unwrap();
            prop_assert!(is_nice_modulator(&r.instance, &r.modulator));
            prop_assert!(r.modulator.len() <= 2 * x.len());
            let k = x.len();
            prop_assert!(r.instance.graph().n() <= inst.graph().n() + k * (k.saturating_sub(1)) / 2 + 2 * k);
            prop_assert_eq!(decide(&inst), decide(&r.instance));
        }
    }
}
