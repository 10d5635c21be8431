//! Exhaustive GSTP decision with witness.
//!
//! Requirements are the pairs `(T, i)` with `i < d(T)`. For each one in turn
//! the search picks a tree from the remaining edge pool that contains `T` and
//! whose leaves all lie in `T`. Copies of the same set are ordered by their
//! smallest edge. Edges are scanned in sorted order, so witnesses are
//! reproducible.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::graph::{Edge, Vertex};
use crate::instance::{GstpInstance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub edge_budget: usize,
    pub demand_budget: usize,
    pub time_budget: Option<Duration>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { edge_budget: 16, demand_budget: 4, time_budget: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Feasible(Solution),
    Infeasible,
    BudgetExceeded(String),
}

impl OracleResult {
    /// `Some(decision)` unless the budget was exceeded.
    pub fn decision(&self) -> Option<bool> {
        match self {
            OracleResult::Feasible(_) => Some(true),
            OracleResult::Infeasible => Some(false),
            OracleResult::BudgetExceeded(_) => None,
        }
    }
}

pub fn solve_exact(inst: &GstpInstance, cfg: &OracleConfig) -> OracleResult {
    let g = inst.graph();
    if g.edge_count() > cfg.edge_budget {
        return OracleResult::BudgetExceeded(format!("{} edges > edge budget {}", g.edge_count(), cfg.edge_budget));
    }
    if inst.total_demand() > cfg.demand_budget {
        return OracleResult::BudgetExceeded(format!(
            "total demand {} > demand budget {}",
            inst.total_demand(),
            cfg.demand_budget
        ));
    }
    let edges = g.edge_list();
    let packer = TreePacker::new(&edges);
    let mut reqs = Vec::new();
    let mut trivial = Vec::new();
    for (j, (t, d)) in inst.sets().enumerate() {
        if t.len() <= 1 {
            trivial.extend(std::iter::repeat_n(j, d));
            continue;
        }
        let Some(mask) = packer.vertex_mask(t) else {
            return OracleResult::Infeasible;
        };
        for i in 0..d {
            reqs.push(Requirement { terminals: mask, size: t.len(), index: j, same_as_prev: i > 0 });
        }
    }
    let deadline = cfg.time_budget.map(|b| Instant::now() + b);
    match packer.pack(&reqs, deadline, TreeKind::SteinerMinimal) {
        PackOutcome::Found(masks) => {
            let mut parts: Vec<(Vec<Edge>, usize)> =
                masks.iter().zip(&reqs).map(|(&m, r)| (packer.edges_of(m), r.index)).collect();
            parts.extend(trivial.into_iter().map(|j| (vec![], j)));
            OracleResult::Feasible(Solution::new(parts).canonical())
        }
        PackOutcome::None => OracleResult::Infeasible,
        PackOutcome::TimedOut => OracleResult::BudgetExceeded("time budget exhausted".into()),
    }
}

/// Convenience: decision only, panicking if the default budget is exceeded.
pub fn decide(inst: &GstpInstance) -> bool {
    solve_exact(inst, &OracleConfig::default()).decision().expect("instance exceeds oracle budget")
}

/// One tree to place: its terminal mask over the packer's local vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Requirement {
    pub terminals: u64,
    pub size: usize,
    /// Index carried through to the witness.
    pub index: usize,
    /// Same terminal set as the previous requirement; enables symmetry breaking.
    pub same_as_prev: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// Trees containing the terminals whose leaves are all terminals.
    SteinerMinimal,
    /// All subtrees containing the terminals.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackOutcome {
    Found(Vec<u32>),
    None,
    TimedOut,
}

/// Edge-disjoint tree packing over at most 32 edges and 64 touched vertices.
#[derive(Debug, Clone)]
pub struct TreePacker {
    /// Endpoints of each edge as local vertex ids.
    ends: Vec<(u8, u8)>,
    edges: Vec<Edge>,
    local: BTreeMap<Vertex, u8>,
    /// Edges incident to each local vertex.
    incident: Vec<u32>,
}

impl TreePacker {
    pub fn new(edges: &[Edge]) -> Self {
        assert!(edges.len() <= 32, "packer supports at most 32 edges");
        let mut local = BTreeMap::new();
        for &(u, v) in edges {
            for x in [u, v] {
                let len = local.len() as u8;
                local.entry(x).or_insert(len);
            }
        }
        assert!(local.len() <= 64, "packer supports at most 64 vertices");
        let ends: Vec<(u8, u8)> = edges.iter().map(|(u, v)| (local[u], local[v])).collect();
        let mut incident = vec![0u32; local.len()];
        for (i, &(a, b)) in ends.iter().enumerate() {
            incident[a as usize] |= 1 << i;
            incident[b as usize] |= 1 << i;
        }
        TreePacker { ends, edges: edges.to_vec(), local, incident }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn full_pool(&self) -> u32 {
        if self.edges.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.edges.len()) - 1
        }
    }

    /// Mask of the given vertices; `None` if one of them touches no edge.
    pub fn vertex_mask(&self, vs: &[Vertex]) -> Option<u64> {
        vs.iter().try_fold(0u64, |m, v| self.local.get(v).map(|&l| m | (1u64 << l)))
    }

    pub fn local_id(&self, v: Vertex) -> Option<u8> {
        self.local.get(&v).copied()
    }

    pub fn edges_of(&self, mask: u32) -> Vec<Edge> {
        (0..self.edges.len()).filter(|i| mask & (1 << i) != 0).map(|i| self.edges[i]).collect()
    }

    pub fn endpoints(&self, edge: usize) -> (u8, u8) {
        self.ends[edge]
    }

    /// Vertices touched by an edge mask.
    pub fn span(&self, mask: u32) -> u64 {
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let (a, b) = self.ends[i];
            out |= (1u64 << a) | (1u64 << b);
        }
        out
    }

    /// Degree of local vertex `v` within `mask`.
    pub fn degree_in(&self, mask: u32, v: u8) -> u32 {
        (self.incident[v as usize] & mask).count_ones()
    }

    /// All trees in `pool` containing `terminals` (at least two vertices).
    pub fn trees(&self, terminals: u64, pool: u32, kind: TreeKind) -> Vec<u32> {
        let mut out = Vec::new();
        if terminals.count_ones() < 2 {
            return out;
        }
        let root = terminals.trailing_zeros() as u8;
        self.grow(1u64 << root, 0, 0, pool, terminals, kind, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(&self, tv: u64, te: u32, banned: u32, pool: u32, terms: u64, kind: TreeKind, out: &mut Vec<u32>) {
        let covered = tv & terms == terms;
        if covered && kind == TreeKind::SteinerMinimal {
            if self.leaves_within(te, terms) {
                out.push(te);
            }
            return;
        }
        let avail = pool & !banned & !te;
        if !covered && !self.reaches(tv, avail, terms) {
            return;
        }
        let mut frontier = None;
        let mut m = avail;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let (a, b) = self.ends[i];
            let (ina, inb) = (tv >> a & 1 == 1, tv >> b & 1 == 1);
            if ina != inb {
                frontier = Some((i, if ina { b } else { a }));
                break;
            }
        }
        let Some((e, w)) = frontier else {
            // Each subtree is reached at exactly one leaf of the include/exclude recursion.
            if covered {
                out.push(te);
            }
            return;
        };
        self.grow(tv | (1u64 << w), te | (1 << e), banned, pool, terms, kind, out);
        self.grow(tv, te, banned | (1 << e), pool, terms, kind, out);
    }

    fn leaves_within(&self, te: u32, terms: u64) -> bool {
        let span = self.span(te);
        let mut m = span & !terms;
        while m != 0 {
            let v = m.trailing_zeros() as u8;
            m &= m - 1;
            if self.degree_in(te, v) <= 1 {
                return false;
            }
        }
        true
    }

    /// Whether every terminal is reachable from `from` through `avail`.
    pub fn reaches(&self, from: u64, avail: u32, terms: u64) -> bool {
        let mut seen = from;
        loop {
            let mut grown = seen;
            let mut m = avail;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let (a, b) = self.ends[i];
                if seen >> a & 1 == 1 || seen >> b & 1 == 1 {
                    grown |= (1u64 << a) | (1u64 << b);
                }
            }
            if grown & terms == terms {
                return true;
            }
            if grown == seen {
                return false;
            }
            seen = grown;
        }
    }

    /// Backtracking packing of all requirements into disjoint trees.
    pub fn pack(&self, reqs: &[Requirement], deadline: Option<Instant>, kind: TreeKind) -> PackOutcome {
        self.pack_filtered(reqs, deadline, kind, &mut |_, _| true, &mut |_| true)
    }

    /// Like [`TreePacker::pack`] with a per-tree filter `accept(req, mask)` and
    /// a final check on the complete choice.
    pub fn pack_filtered(
        &self,
        reqs: &[Requirement],
        deadline: Option<Instant>,
        kind: TreeKind,
        accept: &mut dyn FnMut(usize, u32) -> bool,
        finish: &mut dyn FnMut(&[u32]) -> bool,
    ) -> PackOutcome {
        let mut st = PackState { chosen: vec![0; reqs.len()], deadline, steps: 0, timed_out: false };
        let found = self.pack_rec(reqs, 0, self.full_pool(), kind, &mut st, accept, finish);
        if found {
            PackOutcome::Found(st.chosen)
        } else if st.timed_out {
            PackOutcome::TimedOut
        } else {
            PackOutcome::None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn pack_rec(
        &self,
        reqs: &[Requirement],
        r: usize,
        pool: u32,
        kind: TreeKind,
        st: &mut PackState,
        accept: &mut dyn FnMut(usize, u32) -> bool,
        finish: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if r == reqs.len() {
            return finish(&st.chosen);
        }
        st.steps += 1;
        if st.steps.is_multiple_of(1024) {
            if let Some(d) = st.deadline {
                if Instant::now() > d {
                    st.timed_out = true;
                }
            }
        }
        if st.timed_out {
            return false;
        }
        let need: usize = reqs[r..].iter().map(|q| q.size - 1).sum();
        if need > pool.count_ones() as usize {
            return false;
        }
        let req = reqs[r];
        let floor = if req.same_as_prev { Some(st.chosen[r - 1].trailing_zeros()) } else { None };
        for tree in self.trees(req.terminals, pool, kind) {
            if floor.is_some_and(|f| tree.trailing_zeros() <= f) {
                continue;
            }
            if !accept(r, tree) {
                continue;
            }
            st.chosen[r] = tree;
            if self.pack_rec(reqs, r + 1, pool & !tree, kind, st, accept, finish) {
                return true;
            }
            if st.timed_out {
                return false;
            }
        }
        false
    }
}

struct PackState {
    chosen: Vec<u32>,
    deadline: Option<Instant>,
    steps: u64,
    timed_out: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::families::{complete, cycle};
    use crate::instance::{from_edp, from_stp, verify};

    #[test]
    fn k4_spanning_trees() {
        let inst = from_stp(complete(4), vec![0, 1, 2, 3], 2).unwrap();
        match solve_exact(&inst, &OracleConfig::default()) {
            OracleResult::Feasible(sol) => assert_eq!(verify(&inst, &sol), Ok(())),
            other => panic!("expected feasible, got {other:?}"),
        }
        let three = from_stp(complete(4), vec![0, 1, 2, 3], 3).unwrap();
        assert_eq!(solve_exact(&three, &OracleConfig::default()), OracleResult::Infeasible);
    }

    #[test]
    fn c4_crossing_pairs() {
        let inst = from_edp(cycle(4), &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(solve_exact(&inst, &OracleConfig::default()), OracleResult::Infeasible);
    }

    #[test]
    fn budgets() {
        let inst = from_stp(complete(7), vec![0, 1], 1).unwrap();
        assert!(matches!(solve_exact(&inst, &OracleConfig::default()), OracleResult::BudgetExceeded(_)));
        let inst = from_stp(complete(4), vec![0, 1], 5).unwrap();
        assert!(matches!(solve_exact(&inst, &OracleConfig::default()), OracleResult::BudgetExceeded(_)));
    }

    #[test]
    fn singleton_sets_need_no_edges() {
        let inst = GstpInstance::new(Graph::new(2), vec![vec![1]], vec![2]).unwrap();
        assert!(decide(&inst));
    }

    #[test]
    fn tree_enumeration_counts() {
        // K4 has 16 spanning trees.
        let edges = complete(4).edge_list();
        let p = TreePacker::new(&edges);
        let all = p.vertex_mask(&[0, 1, 2, 3]).unwrap();
        assert_eq!(p.trees(all, p.full_pool(), TreeKind::SteinerMinimal).len(), 16);
        // Steiner-minimal trees joining two vertices of K4 are its 5 paths.
        let pair = p.vertex_mask(&[0, 1]).unwrap();
        assert_eq!(p.trees(pair, p.full_pool(), TreeKind::SteinerMinimal).len(), 5);
        // Subtrees of the path 0-1-2 containing {0, 1}: {01} and {01, 12}.
        let path = TreePacker::new(&[(0, 1), (1, 2)]);
        let t = path.vertex_mask(&[0, 1]).unwrap();
        assert_eq!(path.trees(t, path.full_pool(), TreeKind::Any), vec![0b11, 0b01]);
    }
}
