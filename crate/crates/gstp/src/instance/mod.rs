//! Problem model: GSTP instances, solutions and their verification, the EDP
//! and STP views, augmentation, and the two instance-level reduction rules.

pub mod families;
pub mod params;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{norm, Dsu, Edge, Graph, Vertex, VertexMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("terminal vertex {0} out of range (n = {1})")]
    TerminalOutOfRange(Vertex, usize),
    #[error("demand must be positive (terminal set {0})")]
    ZeroDemand(usize),
    #[error("host graph must be simple")]
    NotSimple,
    #[error("{0} terminal sets but {1} demands")]
    LengthMismatch(usize, usize),
}

/// `(G, 𝒯, d)`. Terminal sets are sorted, deduplicated and listed in
/// lexicographic order; equal sets are merged by summing their demands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GstpInstance {
    graph: Graph,
    terminals: Vec<Vec<Vertex>>,
    demands: Vec<usize>,
}

impl GstpInstance {
    pub fn new(graph: Graph, terminals: Vec<Vec<Vertex>>, demands: Vec<usize>) -> Result<Self, InstanceError> {
        if terminals.len() != demands.len() {
            return Err(InstanceError::LengthMismatch(terminals.len(), demands.len()));
        }
        if !graph.is_simple() {
            return Err(InstanceError::NotSimple);
        }
        let graph = graph.simplify();
        let mut merged: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
        for (i, (mut t, d)) in terminals.into_iter().zip(demands).enumerate() {
            if d == 0 {
                return Err(InstanceError::ZeroDemand(i));
            }
            if let Some(&v) = t.iter().find(|&&v| v >= graph.n()) {
                return Err(InstanceError::TerminalOutOfRange(v, graph.n()));
            }
            t.sort_unstable();
            t.dedup();
            *merged.entry(t).or_insert(0) += d;
        }
        let (terminals, demands) = merged.into_iter().unzip();
        Ok(GstpInstance { graph, terminals, demands })
    }

    /// Instance without terminal sets.
    pub fn bare(graph: Graph) -> Self {
        GstpInstance::new(graph, vec![], vec![]).expect("bare instance")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn terminals(&self) -> &[Vec<Vertex>] {
        &self.terminals
    }

    pub fn demands(&self) -> &[usize] {
        &self.demands
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    /// ΣD.
    pub fn total_demand(&self) -> usize {
        self.demands.iter().sum()
    }

    /// `(T, d(T))` pairs.
    pub fn sets(&self) -> impl Iterator<Item = (&[Vertex], usize)> {
        self.terminals.iter().map(Vec::as_slice).zip(self.demands.iter().copied())
    }

    /// Index of terminal set `t` (given sorted), if present.
    pub fn index_of(&self, t: &[Vertex]) -> Option<usize> {
        self.terminals.binary_search_by(|x| x.as_slice().cmp(t)).ok()
    }

    /// Same terminals on a different host graph.
    pub fn with_graph(&self, graph: Graph) -> Result<Self, InstanceError> {
        GstpInstance::new(graph, self.terminals.clone(), self.demands.clone())
    }

    /// Remaps every terminal set through `map`; vertices mapped to `None` are dropped.
    pub fn remapped(&self, graph: Graph, map: &VertexMap) -> Result<Self, InstanceError> {
        let terminals = self.terminals.iter().map(|t| t.iter().filter_map(|&v| map[v]).collect()).collect();
        GstpInstance::new(graph, terminals, self.demands.clone())
    }

    /// Index sequence where terminal set `j` appears `d(T_j)` consecutive times.
    pub fn enumerate_terminals(&self) -> Vec<usize> {
        self.demands.iter().enumerate().flat_map(|(j, &d)| std::iter::repeat_n(j, d)).collect()
    }
}

/// STP view: one terminal set with demand `d`.
pub fn from_stp(g: Graph, t: Vec<Vertex>, d: usize) -> Result<GstpInstance, InstanceError> {
    GstpInstance::new(g, vec![t], vec![d])
}

/// EDP view: every pair with demand 1 (duplicate pairs merge).
pub fn from_edp(g: Graph, pairs: &[(Vertex, Vertex)]) -> Result<GstpInstance, InstanceError> {
    let terminals = pairs.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>();
    let demands = vec![1; terminals.len()];
    GstpInstance::new(g, terminals, demands)
}

/// One tree of a packing: its edges and the index of the terminal set it serves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Part {
    pub edges: Vec<Edge>,
    pub terminal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Solution {
    pub parts: Vec<Part>,
}

impl Solution {
    pub fn new(parts: Vec<(Vec<Edge>, usize)>) -> Self {
        let parts = parts
            .into_iter()
            .map(|(mut edges, terminal)| {
                for e in &mut edges {
                    *e = norm(e.0, e.1);
                }
                edges.sort_unstable();
                Part { edges, terminal }
            })
            .collect();
        Solution { parts }
    }

    /// Parts sorted by terminal index, then by edge list.
    pub fn canonical(mut self) -> Self {
        for p in &mut self.parts {
            for e in &mut p.edges {
                *e = norm(e.0, e.1);
            }
            p.edges.sort_unstable();
        }
        self.parts.sort_by(|a, b| (a.terminal, &a.edges).cmp(&(b.terminal, &b.edges)));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("part {0}: terminal index {1} out of range")]
    TerminalIndex(usize, usize),
    #[error("part {0}: edge {1:?} not in graph")]
    EdgeNotInGraph(usize, Edge),
    #[error("edge {0:?} used by parts {1} and {2}")]
    EdgeReused(Edge, usize, usize),
    #[error("part {0} is disconnected")]
    Disconnected(usize),
    #[error("part {0} misses terminal {1}")]
    MissingTerminal(usize, Vertex),
    #[error("terminal set {0} served {1} times, demand {2}")]
    WrongCount(usize, usize, usize),
}

/// Checks every solution invariant and reports the first violation.
pub fn verify(inst: &GstpInstance, sol: &Solution) -> Result<(), Violation> {
    let g = inst.graph();
    let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
    let mut served = vec![0usize; inst.terminal_count()];
    for (i, part) in sol.parts.iter().enumerate() {
        let t = inst.terminals().get(part.terminal).ok_or(Violation::TerminalIndex(i, part.terminal))?;
        served[part.terminal] += 1;
        for &(u, v) in &part.edges {
            let e = norm(u, v);
            if !g.has_edge(e.0, e.1) {
                return Err(Violation::EdgeNotInGraph(i, e));
            }
            if let Some(&j) = owner.get(&e) {
                return Err(Violation::EdgeReused(e, j, i));
            }
            owner.insert(e, i);
        }
        if part.edges.is_empty() {
            if t.len() > 1 {
                return Err(Violation::MissingTerminal(i, t[1]));
            }
            continue;
        }
        if !edges_connected(&part.edges) {
            return Err(Violation::Disconnected(i));
        }
        let vs: BTreeSet<Vertex> = part.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        if let Some(&v) = t.iter().find(|v| !vs.contains(v)) {
            return Err(Violation::MissingTerminal(i, v));
        }
    }
    for (j, (&got, &want)) in served.iter().zip(inst.demands()).enumerate() {
        if got != want {
            return Err(Violation::WrongCount(j, got, want));
        }
    }
    Ok(())
}

/// True if the edges form one connected subgraph (vacuously for no edges).
pub fn edges_connected(edges: &[Edge]) -> bool {
    let vs: BTreeMap<Vertex, usize> = edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut dsu = Dsu::new(vs.len());
    let mut parts = vs.len();
    for &(u, v) in edges {
        if dsu.union(vs[&u], vs[&v]) {
            parts -= 1;
        }
    }
    parts <= 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AugmentMode {
    Vertex,
    Clique,
}

/// Host graph plus a gadget per terminal set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGraph {
    pub graph: Graph,
    /// Vertex mode: `aug(T_i)` for each terminal index. Empty in clique mode.
    pub aug_vertex_of: Vec<Vertex>,
    pub mode: AugmentMode,
}

impl AugmentedGraph {
    pub fn is_aug(&self, v: Vertex) -> bool {
        self.mode == AugmentMode::Vertex && v >= self.graph.n() - self.aug_vertex_of.len()
    }

    /// Terminal index whose augmented vertex is `v`.
    pub fn terminal_of(&self, v: Vertex) -> Option<usize> {
        let base = self.graph.n() - self.aug_vertex_of.len();
        (self.mode == AugmentMode::Vertex && v >= base).then(|| v - base)
    }
}

/// Vertex mode adds `aug(T) = n + i` adjacent to `T_i` (simple result).
/// Clique mode turns each `T` into a clique, keeping parallel copies.
pub fn augment(inst: &GstpInstance, mode: AugmentMode) -> AugmentedGraph {
    let g = inst.graph();
    match mode {
        AugmentMode::Vertex => {
            let mut h = g.clone();
            let mut aug = Vec::new();
            for t in inst.terminals() {
                let a = h.add_vertex();
                for &v in t {
                    h.add_edge(v, a).expect("fresh vertex");
                }
                aug.push(a);
            }
            AugmentedGraph { graph: h, aug_vertex_of: aug, mode }
        }
        AugmentMode::Clique => {
            let mut h = g.to_multi();
            for t in inst.terminals() {
                for (i, &u) in t.iter().enumerate() {
                    for &v in &t[i + 1..] {
                        h.add_edge(u, v).expect("multigraph");
                    }
                }
            }
            AugmentedGraph { graph: h, aug_vertex_of: vec![], mode }
        }
    }
}

/// Outcome of a reduction that may reject outright.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduced<T> {
    Instance(T),
    TriviallyNegative,
}

impl<T> Reduced<T> {
    pub fn instance(self) -> Option<T> {
        match self {
            Reduced::Instance(t) => Some(t),
            Reduced::TriviallyNegative => None,
        }
    }
}

/// Drops terminal sets with fewer than two vertices.
pub fn rr_sensible_terminals(inst: &GstpInstance) -> GstpInstance {
    let (terminals, demands): (Vec<_>, Vec<_>) =
        inst.sets().filter(|(t, _)| t.len() >= 2).map(|(t, d)| (t.to_vec(), d)).unzip();
    GstpInstance::new(inst.graph().clone(), terminals, demands).expect("subset of a valid instance")
}

/// Rejects when some vertex carries more demand than its degree.
/// Only sets with at least two vertices count, so apply [`rr_sensible_terminals`] first.
pub fn rr_degree_negative(inst: &GstpInstance) -> Reduced<GstpInstance> {
    let g = inst.graph();
    let mut load = vec![0usize; g.n()];
    for (t, d) in inst.sets() {
        if t.len() >= 2 {
            for &v in t {
                load[v] += d;
            }
        }
    }
    if (0..g.n()).any(|v| load[v] > g.degree(v)) {
        Reduced::TriviallyNegative
    } else {
        Reduced::Instance(inst.clone())
    }
}

/// A trivially negative instance: one vertex pair with no edge.
pub fn trivial_negative() -> GstpInstance {
    GstpInstance::new(Graph::new(2), vec![vec![0, 1]], vec![1]).expect("static instance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::families;
    use crate::instance::params::{parameter, Param};

    fn k3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn verify_spanning_path_in_triangle() {
        let inst = from_stp(k3(), vec![0, 1, 2], 1).unwrap();
        assert_eq!(verify(&inst, &Solution::new(vec![(vec![(0, 1), (1, 2)], 0)])), Ok(()));
        assert_eq!(verify(&inst, &Solution::new(vec![(vec![(0, 1)], 0)])), Err(Violation::MissingTerminal(0, 2)));
    }

    #[test]
    fn verify_rejects_every_c4_pair_packing() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let inst = from_edp(c4.clone(), &[(0, 2), (1, 3)]).unwrap();
        let edges = c4.edge_list();
        let subsets: Vec<Vec<Edge>> = (1u32..16)
            .map(|m| edges.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, &e)| e).collect())
            .collect();
        for a in &subsets {
            for b in &subsets {
                let sol = Solution::new(vec![(a.clone(), 0), (b.clone(), 1)]);
                assert!(verify(&inst, &sol).is_err());
            }
        }
    }

    #[test]
    fn conversions() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let s = from_stp(p3.clone(), vec![2, 0], 2).unwrap();
        assert_eq!(s.terminals(), &[vec![0, 2]]);
        assert_eq!(s.demands(), &[2]);
        let e = from_edp(p3.clone(), &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(e.terminals(), &[vec![0, 1]]);
        assert_eq!(e.demands(), &[2]);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(from_edp(c4, &[(0, 2), (1, 3)]).unwrap().demands(), &[1, 1]);
    }

    #[test]
    fn vertex_augmented_star_is_windmill() {
        for i in 2..=6 {
            let inst = families::star_with_spoke_terminals(i);
            let aug = augment(&inst, AugmentMode::Vertex);
            assert!(aug.graph.is_simple());
            assert_eq!(aug.graph.n(), 2 * i + 1);
            assert_eq!(aug.graph.edge_count(), 3 * i);
            let mut degs = aug.graph.degrees();
            degs.sort_unstable();
            let mut wdegs = families::windmill(i).degrees();
            wdegs.sort_unstable();
            assert_eq!(degs, wdegs);
            assert_eq!(parameter(&aug.graph, Param::VertexCover).unwrap(), i + 1);
            let clique = augment(&inst, AugmentMode::Clique);
            assert!(clique.graph.edges().all(|(_, m)| m == 2));
            assert_eq!(parameter(&clique.graph, Param::VertexCover).unwrap(), 1);
        }
    }

    #[test]
    fn augment_without_terminals_is_identity() {
        let inst = GstpInstance::bare(k3());
        assert_eq!(augment(&inst, AugmentMode::Vertex).graph, k3());
        assert_eq!(augment(&inst, AugmentMode::Clique).graph.simplify(), k3());
    }

    #[test]
    fn reduction_rules() {
        let inst = GstpInstance::new(k3(), vec![vec![0], vec![0, 1]], vec![3, 1]).unwrap();
        assert_eq!(rr_sensible_terminals(&inst).terminals(), &[vec![0, 1]]);
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let neg = from_stp(p3, vec![0, 2], 2).unwrap();
        assert_eq!(rr_degree_negative(&neg), Reduced::TriviallyNegative);
    }
}
