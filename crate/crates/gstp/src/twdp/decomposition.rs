//! Rooted tree decompositions: construction, validation and nice form.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Default vertex count up to which [`tree_decomposition`] is exact.
pub const EXACT_CAP: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdError {
    #[error("decomposition has no nodes")]
    Empty,
    #[error("node {0} has an invalid parent link")]
    BadParent(usize),
    #[error("parent links do not form a tree rooted at {0}")]
    NotATree(usize),
    #[error("vertex {0} is in no bag")]
    VertexUncovered(Vertex),
    #[error("bag vertex {0} is not a graph vertex")]
    UnknownVertex(Vertex),
    #[error("edge {0}-{1} is in no bag")]
    EdgeUncovered(Vertex, Vertex),
    #[error("bags containing vertex {0} are not connected")]
    Disconnected(Vertex),
    #[error("node {0} breaks the nice form: {1}")]
    NotNice(usize, &'static str),
}

/// Bags on a rooted tree given by parent links. `kinds` is set for nice decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub parent: Vec<Option<usize>>,
    pub root: usize,
    pub kinds: Option<Vec<NodeKind>>,
}

impl TreeDecomposition {
    /// Builds from bags and parent links; bags are sorted and deduplicated.
    pub fn new(bags: Vec<Vec<Vertex>>, parent: Vec<Option<usize>>, root: usize) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, parent, root, kinds: None }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one (`-1` only for an empty decomposition of the empty graph).
    pub fn width(&self) -> isize {
        self.bags.iter().map(|b| b.len() as isize).max().unwrap_or(0) - 1
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(t);
            }
        }
        ch
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let ch = self.children();
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
            } else {
                stack.push((t, true));
                stack.extend(ch[t].iter().rev().map(|&c| (c, false)));
            }
        }
        out
    }

    pub fn validate(&self, g: &Graph) -> Result<(), TdError> {
        let k = self.len();
        if k == 0 {
            return if g.n() == 0 { Ok(()) } else { Err(TdError::Empty) };
        }
        if self.root >= k || self.parent.len() != k || self.parent[self.root].is_some() {
            return Err(TdError::NotATree(self.root));
        }
        for (t, p) in self.parent.iter().enumerate() {
            if t != self.root && !p.is_some_and(|p| p < k && p != t) {
                return Err(TdError::BadParent(t));
            }
        }
        if self.post_order().len() != k {
            return Err(TdError::NotATree(self.root));
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Err(TdError::UnknownVertex(v));
                }
                holders[v].push(t);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return Err(TdError::VertexUncovered(v));
            }
            // Connected iff exactly one holder has its parent outside the holders.
            let tops = hs.iter().filter(|&&t| !self.parent[t].is_some_and(|p| self.bags[p].binary_search(&v).is_ok()));
            if tops.count() != 1 {
                return Err(TdError::Disconnected(v));
            }
        }
        for (u, v) in g.edge_list() {
            if u != v && !holders[u].iter().any(|&t| self.bags[t].binary_search(&v).is_ok()) {
                return Err(TdError::EdgeUncovered(u, v));
            }
        }
        Ok(())
    }

    /// Validity plus the nice form: empty root and leaf bags, kinds that
    /// match the bag differences.
    pub fn validate_nice(&self, g: &Graph) -> Result<(), TdError> {
        self.validate(g)?;
        let Some(kinds) = &self.kinds else {
            return Err(TdError::NotNice(self.root, "no node kinds"));
        };
        if !self.bags[self.root].is_empty() {
            return Err(TdError::NotNice(self.root, "root bag not empty"));
        }
        let ch = self.children();
        for t in 0..self.len() {
            let bag = &self.bags[t];
            let ok = match (kinds[t], ch[t].as_slice()) {
                (NodeKind::Leaf, []) => bag.is_empty(),
                (NodeKind::Introduce(v), [c]) => {
                    let mut b = self.bags[*c].clone();
                    b.push(v);
                    b.sort_unstable();
                    self.bags[*c].binary_search(&v).is_err() && b == *bag
                }
                (NodeKind::Forget(v), [c]) => {
                    let mut b = bag.clone();
                    b.push(v);
                    b.sort_unstable();
                    bag.binary_search(&v).is_err() && b == self.bags[*c]
                }
                (NodeKind::Join, [a, b]) => self.bags[*a] == *bag && self.bags[*b] == *bag,
                _ => false,
            };
            if !ok {
                return Err(TdError::NotNice(t, "kind does not match bags"));
            }
        }
        Ok(())
    }
}

/// Decomposition of `g`: exact width for `|V| ≤ exact_cap` (subset dynamic
/// program over elimination orderings), min-fill elimination otherwise.
pub fn tree_decomposition(g: &Graph, exact_cap: usize) -> TreeDecomposition {
    let order = if g.n() <= exact_cap.min(20) { exact_order(g) } else { min_fill_order(g) };
    let td = from_elimination_order(g, &order);
    debug_assert_eq!(td.validate(g), Ok(()));
    td
}

/// Exact treewidth via [`tree_decomposition`].
pub fn treewidth(g: &Graph) -> isize {
    tree_decomposition(g, EXACT_CAP).width()
}

fn neighbour_masks(g: &Graph) -> Vec<u32> {
    let mut nb = vec![0u32; g.n()];
    for (u, v) in g.edge_list() {
        if u != v {
            nb[u] |= 1 << v;
            nb[v] |= 1 << u;
        }
    }
    nb
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_set(nb: &[u32], s: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut frontier = seen;
    let mut out = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = nb[x] & !seen;
        seen |= fresh;
        out |= fresh & !s;
        frontier |= fresh & s;
    }
    out
}

fn exact_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    if n == 0 {
        return vec![];
    }
    let nb = neighbour_masks(g);
    let full = (1usize << n) - 1;
    // best[s]: smallest max |Q| when eliminating `s` first, in some order.
    let mut best = vec![usize::MAX; 1 << n];
    let mut last = vec![0u8; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut m = s;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = s & !(1 << v);
            let cost = best[rest].max(q_set(&nb, rest as u32, v).count_ones() as usize);
            if cost < best[s] {
                best[s] = cost;
                last[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

fn min_fill_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
    for (u, v) in g.edge_list() {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut alive: BTreeSet<Vertex> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = alive.iter().min_by_key(|&&v| {
        let ns: Vec<Vertex> = adj[v].iter().copied().collect();
        let fill: usize =
            ns.iter().enumerate().map(|(i, a)| ns[i + 1..].iter().filter(|b| !adj[*a].contains(b)).count()).sum();
        (fill, ns.len(), v)
    }) {
        let ns: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Bag of `v` is `v` with its later neighbours in the filled graph; its
/// parent is the bag of the earliest of those. Separate trees hang off the last root.
pub fn from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![None], 0);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
    for (u, v) in g.edge_list() {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = adj[v].iter().copied().filter(|&x| pos[x] > i).collect();
        for (k, &a) in later.iter().enumerate() {
            for &b in &later[k + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[i] = later.iter().map(|&x| pos[x]).min();
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    let root = n - 1;
    for (i, p) in parent.iter_mut().enumerate() {
        if p.is_none() && i != root {
            *p = Some(root);
        }
    }
    TreeDecomposition::new(bags, parent, root)
}

/// Nice form of a valid decomposition: leaves and root have empty bags,
/// every other node introduces or forgets one vertex or joins two equal bags.
pub fn make_nice(td: &TreeDecomposition, g: &Graph) -> Result<TreeDecomposition, TdError> {
    td.validate(g)?;
    let ch = td.children();
    let mut b = NiceBuilder::default();
    let top = b.subtree(td, &ch, td.root);
    let root = b.chain(top, &td.bags[td.root], &[]);
    let mut parent = vec![None; b.bags.len()];
    for (t, cs) in b.children.iter().enumerate() {
        for &c in cs {
            parent[c] = Some(t);
        }
    }
    let out = TreeDecomposition { bags: b.bags, parent, root, kinds: Some(b.kinds) };
    debug_assert_eq!(out.validate_nice(g), Ok(()));
    Ok(out)
}

#[derive(Default)]
struct NiceBuilder {
    bags: Vec<Vec<Vertex>>,
    kinds: Vec<NodeKind>,
    children: Vec<Vec<usize>>,
}

impl NiceBuilder {
    fn node(&mut self, bag: Vec<Vertex>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.kinds.push(kind);
        self.children.push(children);
        self.bags.len() - 1
    }

    /// Forgets `from \ to`, then introduces `to \ from`, starting at node `t`.
    fn chain(&mut self, mut t: usize, from: &[Vertex], to: &[Vertex]) -> usize {
        let mut cur = from.to_vec();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            cur.retain(|&x| x != v);
            t = self.node(cur.clone(), NodeKind::Forget(v), vec![t]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            cur.push(v);
            cur.sort_unstable();
            t = self.node(cur.clone(), NodeKind::Introduce(v), vec![t]);
        }
        t
    }

    /// Nice subtree whose top node has the bag of `t`.
    fn subtree(&mut self, td: &TreeDecomposition, ch: &[Vec<usize>], t: usize) -> usize {
        let bag = &td.bags[t];
        let mut tops: Vec<usize> = ch[t]
            .iter()
            .map(|&c| {
                let sub = self.subtree(td, ch, c);
                self.chain(sub, &td.bags[c], bag)
            })
            .collect();
        if tops.is_empty() {
            let leaf = self.node(vec![], NodeKind::Leaf, vec![]);
            return self.chain(leaf, &[], bag);
        }
        while tops.len() > 1 {
            let b = tops.pop().unwrap();
            let a = tops.pop().unwrap();
            tops.push(self.node(bag.clone(), NodeKind::Join, vec![a, b]));
        }
        tops[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::families::{complete, cycle, path, wall};
    use proptest::prelude::*;

    /// Treewidth by trying every elimination ordering.
    fn brute_width(g: &Graph) -> isize {
        use itertools::Itertools;
        (0..g.n()).permutations(g.n()).map(|o| from_elimination_order(g, &o).width()).min().unwrap_or(-1)
    }

    #[test]
    fn small_widths() {
        assert_eq!(treewidth(&path(5)), 1);
        assert_eq!(treewidth(&complete(4)), 3);
        assert_eq!(treewidth(&cycle(5)), 2);
        assert_eq!(treewidth(&Graph::new(3)), 0);
        assert_eq!(treewidth(&wall(2)), 2);
    }

    #[test]
    fn single_bag_k3_becomes_chain() {
        let g = complete(3);
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![None], 0);
        let nice = make_nice(&td, &g).unwrap();
        assert_eq!(nice.validate_nice(&g), Ok(()));
        assert_eq!(nice.len(), 7);
        assert_eq!(nice.width(), 2);
        let kinds = nice.kinds.as_ref().unwrap();
        assert_eq!(kinds.iter().filter(|k| matches!(k, NodeKind::Introduce(_))).count(), 3);
        assert_eq!(kinds.iter().filter(|k| matches!(k, NodeKind::Forget(_))).count(), 3);
    }

    #[test]
    fn validator_catches_errors() {
        let g = path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![None, Some(0)], 0);
        assert_eq!(td.validate(&g), Err(TdError::EdgeUncovered(1, 2)));
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![0]], vec![None, Some(0), Some(1)], 0);
        assert_eq!(td.validate(&g), Err(TdError::Disconnected(0)));
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![None], 0);
        assert_eq!(td.validate(&g), Err(TdError::VertexUncovered(2)));
    }

    fn graph_strategy() -> impl Strategy<Value = Graph> {
        (1usize..8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..12).prop_map(move |es| {
                let es: Vec<_> = es.into_iter().filter(|(u, v)| u != v).collect();
                let mut g = Graph::new(n);
                for (u, v) in es {
                    if !g.has_edge(u, v) {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn exact_matches_all_orderings(g in graph_strategy()) {
            prop_assert_eq!(treewidth(&g), brute_width(&g));
        }

        #[test]
        fn nice_form_keeps_width(g in graph_strategy()) {
            let td = tree_decomposition(&g, EXACT_CAP);
            let greedy = tree_decomposition(&g, 0);
            prop_assert_eq!(greedy.validate(&g), Ok(()));
            prop_assert!(greedy.width() >= td.width());
            let nice = make_nice(&td, &g).unwrap();
            prop_assert_eq!(nice.validate_nice(&g), Ok(()));
            prop_assert_eq!(nice.width(), td.width());
            let w1 = td.width().max(0) as usize + 1;
            prop_assert!(nice.len() <= (3 * w1 + 2) * g.n().max(1) + w1);
        }
    }
}
