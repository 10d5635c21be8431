//! Tree-cut decompositions: a rooted tree whose bags near-partition `V(G)`.
//!
//! Adhesion, torsos, 3- and 2-centers, width and slim width live here, along
//! with the nice / friendly / simple checks. Transformations are in
//! [`friendly`] and [`rules`].

pub mod families;
pub mod friendly;
pub mod rules;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::instance::GstpInstance;

pub use friendly::{blow_up, expand, fake_nodes, make_friendly};
pub use rules::{
    apply_rr_adh1, apply_rr_components, apply_rr_crosslink, apply_thin_reduction, make_simple, reduce_thin_nodes,
    thin_subinstances, ThinNodeSubinstances, ThinReduction, ThinRule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TcdError {
    #[error("decomposition has no nodes")]
    Empty,
    #[error("node {0} has an invalid parent")]
    BadParent(usize),
    #[error("parent links do not form a tree rooted at {0}")]
    NotATree(usize),
    #[error("vertex {0} lies in more than one bag")]
    Overlap(Vertex),
    #[error("vertex {0} lies in no bag")]
    Uncovered(Vertex),
    #[error("bag vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("decomposition is not nice: {0}")]
    NotNice(Violation),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("sub-solver failed: {0}")]
    Subsolver(String),
}

/// One reason a decomposition fails a structural predicate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("thin node {node} has a neighbour in the subtree of its sibling {sibling}")]
    NotNice { node: usize, sibling: usize },
    #[error("node {node} has {bold} bold children and {bag} bag vertices, bound {bound}")]
    TooManyBold { node: usize, bold: usize, bag: usize, bound: usize },
    #[error("thin node {node} is not simple: {reason}")]
    NotSimple { node: usize, reason: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeCutDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub parent: Vec<Option<usize>>,
    pub root: usize,
}

/// A vertex of a torso that stands for a contracted part of the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Peripheral {
    /// Everything outside the subtree of the node.
    Parent,
    /// The subtree of this child.
    Child(usize),
}

/// Torso at a node: ids `0..core.len()` are the bag vertices, the rest follow
/// `peripheral` in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Torso {
    pub graph: Graph,
    pub core: Vec<Vertex>,
    pub peripheral: Vec<Peripheral>,
}

impl Torso {
    pub fn peripheral_id(&self, p: Peripheral) -> Option<usize> {
        self.peripheral.iter().position(|&q| q == p).map(|i| i + self.core.len())
    }
}

/// Outcome of exhaustive suppression on a torso.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Center {
    /// Surviving torso ids, sorted.
    pub kept: Vec<usize>,
    /// Edges between survivors with multiplicities.
    pub edges: BTreeMap<(usize, usize), usize>,
    /// Torso ids in the order they were suppressed.
    pub suppressed: Vec<usize>,
}

impl Center {
    pub fn size(&self) -> usize {
        self.kept.len()
    }
}

impl TreeCutDecomposition {
    pub fn new(bags: Vec<Vec<Vertex>>, parent: Vec<Option<usize>>, root: usize) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        TreeCutDecomposition { bags, parent, root }
    }

    /// Single node holding every vertex.
    pub fn trivial(g: &Graph) -> Self {
        TreeCutDecomposition { bags: vec![(0..g.n()).collect()], parent: vec![None], root: 0 }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
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

    pub fn depth(&self, mut t: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[t] {
            t = p;
            d += 1;
        }
        d
    }

    /// Nodes of the subtree at `t`, `t` first.
    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let ch = self.children();
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            out.extend(ch[out[i]].iter().copied());
            i += 1;
        }
        out
    }

    /// `Y_t`, sorted.
    pub fn y(&self, t: usize) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.subtree(t).into_iter().flat_map(|s| self.bags[s].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// `owner[v]` is the node whose bag holds `v`.
    pub fn owner(&self, n: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; n];
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v < n {
                    owner[v] = t;
                }
            }
        }
        owner
    }

    pub fn validate(&self, g: &Graph) -> Result<(), TcdError> {
        let k = self.len();
        if k == 0 {
            return Err(TcdError::Empty);
        }
        if self.parent.len() != k || self.root >= k || self.parent[self.root].is_some() {
            return Err(TcdError::BadParent(self.root.min(k - 1)));
        }
        for (t, p) in self.parent.iter().enumerate() {
            match p {
                Some(p) if *p >= k || *p == t => return Err(TcdError::BadParent(t)),
                None if t != self.root => return Err(TcdError::BadParent(t)),
                _ => {}
            }
        }
        if self.subtree(self.root).len() != k {
            return Err(TcdError::NotATree(self.root));
        }
        let mut seen = vec![false; g.n()];
        for bag in &self.bags {
            for &v in bag {
                if v >= g.n() {
                    return Err(TcdError::UnknownVertex(v));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(TcdError::Overlap(v));
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(TcdError::Uncovered(v)),
            None => Ok(()),
        }
    }

    /// Drops empty leaves until none is left; the root always stays.
    pub fn prune_empty_leaves(&self) -> Self {
        let mut alive = vec![true; self.len()];
        loop {
            let mut has_child = vec![false; self.len()];
            for (t, p) in self.parent.iter().enumerate() {
                if let (true, Some(p)) = (alive[t], p) {
                    has_child[*p] = true;
                }
            }
            let dead: Vec<usize> = (0..self.len())
                .filter(|&t| alive[t] && t != self.root && !has_child[t] && self.bags[t].is_empty())
                .collect();
            if dead.is_empty() {
                break;
            }
            for t in dead {
                alive[t] = false;
            }
        }
        self.keep_nodes(&alive)
    }

    /// Restricts to the nodes flagged in `alive`, which must be closed under parents.
    pub(crate) fn keep_nodes(&self, alive: &[bool]) -> Self {
        let mut index = vec![usize::MAX; self.len()];
        let mut next = 0;
        for t in 0..self.len() {
            if alive[t] {
                index[t] = next;
                next += 1;
            }
        }
        let bags = (0..self.len()).filter(|&t| alive[t]).map(|t| self.bags[t].clone()).collect();
        let parent = (0..self.len()).filter(|&t| alive[t]).map(|t| self.parent[t].map(|p| index[p])).collect();
        TreeCutDecomposition { bags, parent, root: index[self.root] }
    }

    /// Renames bag vertices through `map`; vertices mapped to `None` leave their bags.
    pub fn remap(&self, map: &[Option<Vertex>]) -> Self {
        let bags = self
            .bags
            .iter()
            .map(|b| {
                let mut nb: Vec<Vertex> = b.iter().filter_map(|&v| map[v]).collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect();
        TreeCutDecomposition { bags, parent: self.parent.clone(), root: self.root }
    }

    /// Same bags with `s` as the root.
    pub fn rerooted(&self, s: usize) -> Self {
        let mut parent = self.parent.clone();
        let mut prev = None;
        let mut cur = Some(s);
        while let Some(c) = cur {
            let next = self.parent[c];
            parent[c] = prev;
            prev = Some(c);
            cur = next;
        }
        TreeCutDecomposition { bags: self.bags.clone(), parent, root: s }
    }
}

pub fn adhesion(tcd: &TreeCutDecomposition, g: &Graph, t: usize) -> usize {
    g.cut_size(&tcd.y(t))
}

pub fn adhesions(tcd: &TreeCutDecomposition, g: &Graph) -> Vec<usize> {
    (0..tcd.len()).map(|t| adhesion(tcd, g, t)).collect()
}

pub fn is_thin(tcd: &TreeCutDecomposition, g: &Graph, t: usize) -> bool {
    adhesion(tcd, g, t) <= 2
}

/// Children of `s` with adhesion at least 3.
pub fn bold_children(tcd: &TreeCutDecomposition, g: &Graph, s: usize) -> Vec<usize> {
    tcd.children()[s].iter().copied().filter(|&c| !is_thin(tcd, g, c)).collect()
}

pub fn torso(tcd: &TreeCutDecomposition, g: &Graph, t: usize) -> Torso {
    let core = tcd.bags[t].clone();
    let mut peripheral = Vec::new();
    if t != tcd.root {
        peripheral.push(Peripheral::Parent);
    }
    let ch = tcd.children();
    peripheral.extend(ch[t].iter().map(|&c| Peripheral::Child(c)));
    // label[v] = torso id of the vertex v maps to.
    let k = core.len();
    let mut label = vec![if t != tcd.root { k } else { usize::MAX }; g.n()];
    for (i, &v) in core.iter().enumerate() {
        label[v] = i;
    }
    let first_child = k + usize::from(t != tcd.root);
    for (j, &c) in ch[t].iter().enumerate() {
        for s in tcd.subtree(c) {
            for &v in &tcd.bags[s] {
                label[v] = first_child + j;
            }
        }
    }
    let mut h = Graph::new_multi(k + peripheral.len());
    for ((u, v), m) in g.edges() {
        let (a, b) = (label[u], label[v]);
        if a != b {
            h.add_edge_mult(a, b, m).expect("labels in range");
        }
    }
    Torso { graph: h, core, peripheral }
}

/// Exhaustive suppression of vertices of degree at most `max_degree`, loops
/// removed. With `only_peripheral` core vertices are never touched. `pick`
/// chooses among the currently suppressible ids (given sorted).
pub fn center_with(
    torso: &Torso,
    max_degree: usize,
    only_peripheral: bool,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> Center {
    let n = torso.graph.n();
    let mut adj: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for ((u, v), m) in torso.graph.edges() {
        if u != v {
            *adj[u].entry(v).or_insert(0) += m;
            *adj[v].entry(u).or_insert(0) += m;
        }
    }
    let deg = |adj: &[BTreeMap<usize, usize>], v: usize| adj[v].values().sum::<usize>();
    let first = if only_peripheral { torso.core.len() } else { 0 };
    let mut alive = vec![true; n];
    let mut suppressed = Vec::new();
    loop {
        let cands: Vec<usize> = (first..n).filter(|&v| alive[v] && deg(&adj, v) <= max_degree).collect();
        if cands.is_empty() {
            break;
        }
        let v = cands[pick(&cands).min(cands.len() - 1)];
        let nbrs: Vec<(usize, usize)> = adj[v].iter().map(|(&w, &m)| (w, m)).collect();
        for &(w, _) in &nbrs {
            adj[w].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        suppressed.push(v);
        if let [(a, 1), (b, 1)] = nbrs[..] {
            *adj[a].entry(b).or_insert(0) += 1;
            *adj[b].entry(a).or_insert(0) += 1;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut edges = BTreeMap::new();
    for &u in &kept {
        for (&v, &m) in &adj[u] {
            if u < v {
                edges.insert((u, v), m);
            }
        }
    }
    Center { kept, edges, suppressed }
}

/// 3-center: peripheral vertices of degree at most 2 are suppressed.
pub fn three_center(torso: &Torso) -> Center {
    center_with(torso, 2, true, |_| 0)
}

/// 2-center: any vertex of degree at most 1 is suppressed.
pub fn two_center(torso: &Torso) -> Center {
    center_with(torso, 1, false, |_| 0)
}

pub fn width(tcd: &TreeCutDecomposition, g: &Graph) -> usize {
    (0..tcd.len()).map(|t| adhesion(tcd, g, t).max(three_center(&torso(tcd, g, t)).size())).max().unwrap_or(0)
}

pub fn slim_width(tcd: &TreeCutDecomposition, g: &Graph) -> usize {
    (0..tcd.len()).map(|t| adhesion(tcd, g, t).max(two_center(&torso(tcd, g, t)).size())).max().unwrap_or(0)
}

/// Violations of: every thin node has no neighbour in a sibling's subtree.
pub fn nice_violations(tcd: &TreeCutDecomposition, g: &Graph) -> Vec<Violation> {
    let owner = tcd.owner(g.n());
    let ch = tcd.children();
    let mut out = Vec::new();
    for t in 0..tcd.len() {
        let Some(p) = tcd.parent[t] else { continue };
        if !is_thin(tcd, g, t) {
            continue;
        }
        let yt = tcd.y(t);
        let mut in_sibling = BTreeMap::new();
        for &c in ch[p].iter().filter(|&&c| c != t) {
            for s in tcd.subtree(c) {
                in_sibling.insert(s, c);
            }
        }
        let mut bad = None;
        for &v in &yt {
            for w in g.neighbors(v) {
                if let Some(&c) = in_sibling.get(&owner[w]) {
                    bad = Some(bad.map_or(c, |b: usize| b.min(c)));
                }
            }
        }
        if let Some(sibling) = bad {
            out.push(Violation::NotNice { node: t, sibling });
        }
    }
    out
}

pub fn is_nice(tcd: &TreeCutDecomposition, g: &Graph) -> bool {
    nice_violations(tcd, g).is_empty()
}

/// Nice violations plus nodes with `|bold children| + |bag| > width + 2`.
pub fn friendly_violations(tcd: &TreeCutDecomposition, g: &Graph) -> Vec<Violation> {
    let mut out = nice_violations(tcd, g);
    let bound = width(tcd, g) + 2;
    for s in 0..tcd.len() {
        let bold = bold_children(tcd, g, s).len();
        let bag = tcd.bags[s].len();
        if bold + bag > bound {
            out.push(Violation::TooManyBold { node: s, bold, bag, bound });
        }
    }
    out
}

pub fn is_friendly(tcd: &TreeCutDecomposition, g: &Graph) -> bool {
    friendly_violations(tcd, g).is_empty()
}

/// Terminal sets with vertices both inside and outside `Y_s`.
pub fn cross_link(inst: &GstpInstance, tcd: &TreeCutDecomposition, s: usize) -> Vec<usize> {
    let mut inside = vec![false; inst.graph().n()];
    for v in tcd.y(s) {
        inside[v] = true;
    }
    inst.terminals()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().any(|&v| inside[v]) && t.iter().any(|&v| !inside[v]))
        .map(|(i, _)| i)
        .collect()
}

pub fn demand_cross_link(inst: &GstpInstance, tcd: &TreeCutDecomposition, s: usize) -> usize {
    cross_link(inst, tcd, s).iter().map(|&i| inst.demands()[i]).sum()
}

/// Why the non-root thin node `s` is not simple, if it is not.
pub fn simple_failure(inst: &GstpInstance, tcd: &TreeCutDecomposition, s: usize) -> Option<&'static str> {
    let g = inst.graph();
    let a = adhesion(tcd, g, s);
    if a != 2 {
        Some("adhesion is not 2")
    } else if tcd.y(s).len() != 1 {
        Some("subtree holds more than one vertex")
    } else if !cross_link(inst, tcd, s).is_empty() {
        Some("a terminal set crosses its link")
    } else {
        None
    }
}

/// Friendly violations plus every non-root thin node that is not simple.
pub fn simple_violations(inst: &GstpInstance, tcd: &TreeCutDecomposition) -> Vec<Violation> {
    let g = inst.graph();
    let mut out = friendly_violations(tcd, g);
    for s in (0..tcd.len()).filter(|&s| s != tcd.root && is_thin(tcd, g, s)) {
        if let Some(reason) = simple_failure(inst, tcd, s) {
            out.push(Violation::NotSimple { node: s, reason });
        }
    }
    out
}

pub fn is_simple(inst: &GstpInstance, tcd: &TreeCutDecomposition) -> bool {
    simple_violations(inst, tcd).is_empty()
}
