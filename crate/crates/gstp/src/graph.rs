//! Vertex-indexed multigraph.
//!
//! Vertices are `0..n`. Edges are stored as normalized pairs `(u, v)` with
//! `u <= v` and a multiplicity. A graph is either *simple* (no loops, every
//! multiplicity 1) or a *multigraph*. Operations that delete vertices return a
//! [`VertexMap`] from old to new indices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

pub type Vertex = usize;

/// Normalized edge, smaller endpoint first.
pub type Edge = (Vertex, Vertex);

/// `map[old] = Some(new)` for surviving vertices.
pub type VertexMap = Vec<Option<Vertex>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(Vertex, usize),
    #[error("loop at {0} in a simple graph")]
    LoopInSimpleGraph(Vertex),
    #[error("parallel edge {0}-{1} in a simple graph")]
    ParallelInSimpleGraph(Vertex, Vertex),
    #[error("edge {0}-{1} not present")]
    MissingEdge(Vertex, Vertex),
    #[error("cannot suppress vertex {0} of degree {1}")]
    SuppressDegree(Vertex, usize),
    #[error("empty vertex set")]
    EmptySet,
}

pub fn norm(u: Vertex, v: Vertex) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    n: usize,
    edges: BTreeMap<Edge, usize>,
    multi: bool,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: BTreeMap::new(), multi: false }
    }

    pub fn new_multi(n: usize) -> Self {
        Graph { n, edges: BTreeMap::new(), multi: true }
    }

    /// Simple graph from an edge list. Panics on invalid input; use
    /// [`Graph::add_edge`] for fallible construction.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v).expect("invalid edge");
        }
        g
    }

    pub fn multi_from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new_multi(n);
        for &(u, v) in edges {
            g.add_edge(u, v).expect("invalid edge");
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_multigraph(&self) -> bool {
        self.multi
    }

    /// True if the graph has no loops and no parallel edges, whatever its mode.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|(&(u, v), &m)| u != v && m == 1)
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    /// Distinct edges with multiplicities, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, usize)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    /// Distinct edges, sorted.
    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.keys().copied().collect()
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.edges.get(&norm(u, v)).copied().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.multiplicity(u, v) > 0
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.n))
        }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.add_edge_mult(u, v, 1)
    }

    pub fn add_edge_mult(&mut self, u: Vertex, v: Vertex, m: usize) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        if m == 0 {
            return Ok(());
        }
        if !self.multi {
            if u == v {
                return Err(GraphError::LoopInSimpleGraph(u));
            }
            if m > 1 || self.has_edge(u, v) {
                return Err(GraphError::ParallelInSimpleGraph(u.min(v), u.max(v)));
            }
        }
        *self.edges.entry(norm(u, v)).or_insert(0) += m;
        Ok(())
    }

    /// Removes one copy of `uv`.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let e = norm(u, v);
        match self.edges.get_mut(&e) {
            Some(m) if *m > 1 => {
                *m -= 1;
                Ok(())
            }
            Some(_) => {
                self.edges.remove(&e);
                Ok(())
            }
            None => Err(GraphError::MissingEdge(e.0, e.1)),
        }
    }

    /// Same vertices and edges as a multigraph.
    pub fn to_multi(&self) -> Graph {
        Graph { n: self.n, edges: self.edges.clone(), multi: true }
    }

    /// Drops loops and collapses parallel edges.
    pub fn simplify(&self) -> Graph {
        let edges = self.edges.keys().filter(|(u, v)| u != v).map(|&e| (e, 1)).collect();
        Graph { n: self.n, edges, multi: false }
    }

    /// Distinct neighbours, sorted. A loop makes `v` its own neighbour.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Adjacency lists with multiplicity (a neighbour repeated per parallel edge).
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), &m) in &self.edges {
            for _ in 0..m {
                adj[u].push(v);
                if u != v {
                    adj[v].push(u);
                }
            }
        }
        adj
    }

    /// Degree with multiplicity; loops count 2.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .map(|(&(a, b), &m)| {
                if a == v && b == v {
                    2 * m
                } else if a == v || b == v {
                    m
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (&(u, v), &m) in &self.edges {
            deg[u] += m;
            deg[v] += m;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let adj = self.distinct_adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn distinct_adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in self.edges.keys() {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Edges with exactly one endpoint in `s`, with multiplicities.
    pub fn cut_edges(&self, s: &[Vertex]) -> Vec<(Edge, usize)> {
        let inside = self.mask(s);
        self.edges.iter().filter(|(&(u, v), _)| inside[u] != inside[v]).map(|(&e, &m)| (e, m)).collect()
    }

    /// `|cut_edges(s)|` counted with multiplicity.
    pub fn cut_size(&self, s: &[Vertex]) -> usize {
        self.cut_edges(s).iter().map(|&(_, m)| m).sum()
    }

    fn mask(&self, s: &[Vertex]) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        for &v in s {
            if v < self.n {
                inside[v] = true;
            }
        }
        inside
    }

    /// Deletes `s` and its incident edges; survivors keep their relative order.
    pub fn remove_vertices(&self, s: &[Vertex]) -> (Graph, VertexMap) {
        let gone = self.mask(s);
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !gone[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut edges = BTreeMap::new();
        for (&(u, v), &m) in &self.edges {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                edges.insert(norm(a, b), m);
            }
        }
        (Graph { n: next, edges, multi: self.multi }, map)
    }

    /// Subgraph induced by `s`, vertices renumbered by increasing old index.
    pub fn induced(&self, s: &[Vertex]) -> (Graph, VertexMap) {
        let keep = self.mask(s);
        let drop: Vec<Vertex> = (0..self.n).filter(|&v| !keep[v]).collect();
        self.remove_vertices(&drop)
    }

    /// Merges `s` into one vertex, the survivor being `min(s)`.
    ///
    /// With `keep_multiplicity` parallel edges survive and edges inside `s`
    /// vanish. Otherwise the result is simplified.
    pub fn contract(&self, s: &[Vertex], keep_multiplicity: bool) -> Result<Contraction, GraphError> {
        let &rep_old = s.iter().min().ok_or(GraphError::EmptySet)?;
        for &v in s {
            self.check(v)?;
        }
        let inside = self.mask(s);
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !inside[v] || v == rep_old {
                map[v] = Some(next);
                next += 1;
            }
        }
        for v in 0..self.n {
            if inside[v] {
                map[v] = map[rep_old];
            }
        }
        let rep = map[rep_old].unwrap();
        let mut g = Graph { n: next, edges: BTreeMap::new(), multi: keep_multiplicity };
        for (&(u, v), &m) in &self.edges {
            if inside[u] && inside[v] {
                continue;
            }
            let e = norm(map[u].unwrap(), map[v].unwrap());
            if keep_multiplicity {
                *g.edges.entry(e).or_insert(0) += m;
            } else if e.0 != e.1 {
                g.edges.insert(e, 1);
            }
        }
        Ok(Contraction { graph: g, map, rep })
    }

    /// Removes a vertex of degree at most 2; a degree-2 vertex is replaced by
    /// an edge between its two neighbours, dropped if it would be a loop.
    pub fn suppress(&self, v: Vertex) -> Result<(Graph, VertexMap), GraphError> {
        self.check(v)?;
        let deg = self.degree(v);
        if deg > 2 {
            return Err(GraphError::SuppressDegree(v, deg));
        }
        let mut ends = Vec::new();
        for (&(a, b), &m) in &self.edges {
            if a == v && b == v {
                ends.push(v);
                ends.push(v);
            } else if a == v || b == v {
                for _ in 0..m {
                    ends.push(if a == v { b } else { a });
                }
            }
        }
        let (mut g, map) = self.remove_vertices(&[v]);
        if ends.len() == 2 && ends[0] != v && ends[1] != v && ends[0] != ends[1] {
            let (a, b) = (map[ends[0]].unwrap(), map[ends[1]].unwrap());
            if g.multi || !g.has_edge(a, b) {
                g.add_edge(a, b)?;
            }
        }
        Ok((g, map))
    }

    /// Replaces one copy of `uv` by the path `u - w - v`; returns `w`.
    pub fn subdivide(&self, u: Vertex, v: Vertex) -> Result<(Graph, Vertex), GraphError> {
        if !self.has_edge(u, v) {
            let e = norm(u, v);
            return Err(GraphError::MissingEdge(e.0, e.1));
        }
        let mut g = self.clone();
        g.remove_edge(u, v)?;
        let w = g.add_vertex();
        g.add_edge(u, w)?;
        g.add_edge(w, v)?;
        Ok((g, w))
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph { n: self.n + other.n, edges: self.edges.clone(), multi: self.multi || other.multi };
        for (&(u, v), &m) in &other.edges {
            g.edges.insert((u + self.n, v + self.n), m);
        }
        g
    }

    /// Relabels vertices by the permutation `perm[old] = new`.
    pub fn permute(&self, perm: &[Vertex]) -> Graph {
        let edges = self.edges.iter().map(|(&(u, v), &m)| (norm(perm[u], perm[v]), m)).collect();
        Graph { n: self.n, edges, multi: self.multi }
    }

    /// Feedback edge number of the underlying simple graph: `|E| - |V| + |comp|`.
    pub fn fen(&self) -> usize {
        let s = self.simplify();
        s.edge_count() + s.components().len() - s.n
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        (0..self.n).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: Graph,
    /// Every old vertex maps somewhere; members of the contracted set map to `rep`.
    pub map: VertexMap,
    pub rep: Vertex,
}

/// Components of the multigraph formed by `edges` over the vertex set `vs`.
/// Used for hypergraph-style connectivity checks.
pub fn edge_set_components(vs: &[Vertex], edges: &[Edge]) -> Vec<Vec<Vertex>> {
    let mut index = BTreeMap::new();
    for &v in vs {
        let len = index.len();
        index.entry(v).or_insert(len);
    }
    for &(u, v) in edges {
        for x in [u, v] {
            let len = index.len();
            index.entry(x).or_insert(len);
        }
    }
    let verts: Vec<Vertex> = index.keys().copied().collect();
    let mut dsu = Dsu::new(verts.len());
    for &(u, v) in edges {
        dsu.union(index[&u], index[&v]);
    }
    let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for &v in &verts {
        groups.entry(dsu.find(index[&v])).or_default().push(v);
    }
    let mut out: Vec<Vec<Vertex>> = groups.into_values().collect();
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn components_of_two_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(Graph::new(0).components().is_empty());
    }

    #[test]
    fn cut_edges_of_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.cut_edges(&[1]), vec![((0, 1), 1), ((1, 2), 1)]);
        assert!(g.cut_edges(&[0, 1, 2]).is_empty());
    }

    #[test]
    fn contract_triangle_edge() {
        let c = triangle().contract(&[0, 1], true).unwrap();
        assert_eq!(c.graph.n(), 2);
        assert_eq!(c.graph.multiplicity(0, 1), 2);
        let s = triangle().contract(&[0, 1], false).unwrap();
        assert_eq!(s.graph.edge_count(), 1);
        assert!(s.graph.is_simple());
    }

    #[test]
    fn contract_star_leaves() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let c = g.contract(&[1, 2, 3, 4], true).unwrap();
        assert_eq!(c.graph.n(), 2);
        assert_eq!(c.graph.multiplicity(0, 1), 4);
        assert_eq!(c.rep, 1);
    }

    #[test]
    fn suppress_cases() {
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let (g, _) = p.suppress(1).unwrap();
        assert_eq!(g.edge_list(), vec![(0, 1)]);

        let mut m = Graph::new_multi(2);
        m.add_edge_mult(0, 1, 2).unwrap();
        let (g, _) = m.suppress(1).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);

        let (g, _) = p.suppress(0).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);

        let paw = Graph::multi_from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3)]);
        assert_eq!(paw.suppress(0), Err(GraphError::SuppressDegree(0, 3)));
    }

    #[test]
    fn subdivide_cases() {
        let (g, w) = Graph::from_edges(2, &[(0, 1)]).subdivide(0, 1).unwrap();
        assert_eq!(w, 2);
        assert_eq!(g.edge_list(), vec![(0, 2), (1, 2)]);

        let (c4, _) = triangle().subdivide(0, 2).unwrap();
        assert_eq!(c4.n(), 4);
        assert!(c4.degrees().iter().all(|&d| d == 2));

        let mut m = Graph::new_multi(2);
        m.add_edge_mult(0, 1, 2).unwrap();
        let (g, w) = m.subdivide(0, 1).unwrap();
        assert_eq!(g.multiplicity(0, 1), 1);
        assert_eq!(g.multiplicity(0, w), 1);
        assert_eq!(g.multiplicity(1, w), 1);
        assert!(Graph::new(2).subdivide(0, 1).is_err());
    }

    #[test]
    fn loops_count_twice() {
        let mut g = Graph::new_multi(1);
        g.add_edge(0, 0).unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degrees(), vec![2]);
        assert!(Graph::new(1).add_edge(0, 0).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..14).prop_map(move |es| {
                let mut g = Graph::new_multi(n);
                for (u, v) in es {
                    if u != v {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn components_partition(g in arb_graph()) {
            let comps = g.components();
            let mut all: Vec<_> = comps.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..g.n()).collect::<Vec<_>>());
            let firsts: Vec<_> = comps.iter().map(|c| c[0]).collect();
            let mut sorted = firsts.clone();
            sorted.sort_unstable();
            prop_assert_eq!(firsts, sorted);
        }

        #[test]
        fn cut_is_symmetric(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 9)) {
            let s: Vec<_> = (0..g.n()).filter(|&v| mask[v]).collect();
            let t: Vec<_> = (0..g.n()).filter(|&v| !mask[v]).collect();
            prop_assert_eq!(g.cut_size(&s), g.cut_size(&t));
        }

        #[test]
        fn contract_shrinks_by_set_size(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 9)) {
            let s: Vec<_> = (0..g.n()).filter(|&v| mask[v]).collect();
            prop_assume!(!s.is_empty());
            let c = g.contract(&s, true).unwrap();
            prop_assert_eq!(c.graph.n(), g.n() - s.len() + 1);
            prop_assert_eq!(c.graph.degree(c.rep), g.cut_size(&s));
        }

        #[test]
        fn suppress_keeps_other_degrees(g in arb_graph()) {
            for v in 0..g.n() {
                if g.degree(v) == 2 && g.neighbors(v).len() == 2 {
                    let (h, map) = g.suppress(v).unwrap();
                    for u in 0..g.n() {
                        if u != v {
                            prop_assert_eq!(h.degree(map[u].unwrap()), g.degree(u));
                        }
                    }
                }
            }
        }

        #[test]
        fn fen_matches_brute_force(g in arb_graph()) {
            let s = g.simplify();
            prop_assume!(s.edge_count() <= 8);
            let edges = s.edge_list();
            let mut best = usize::MAX;
            for mask in 0u32..(1 << edges.len()) {
                let mut dsu = Dsu::new(s.n());
                let mut acyclic = true;
                for (i, &(u, v)) in edges.iter().enumerate() {
                    if mask & (1 << i) == 0 && !dsu.union(u, v) {
                        acyclic = false;
                        break;
                    }
                }
                if acyclic {
                    best = best.min(mask.count_ones() as usize);
                }
            }
            prop_assert_eq!(g.fen(), best);
        }
    }
}
