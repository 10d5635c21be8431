//! GSTP by treewidth plus total demand.
//!
//! Indices `0..ΣD` name the solution subgraphs (index `i` serves terminal
//! set `enumerate_terminals()[i]`). At a node a tuple records which indices
//! are finished below (`bottom`), which cross the bag together with how they
//! connect bag vertices using forgotten edges only (`crossing`), and which
//! have not started (`top`).

pub mod decomposition;
pub mod dispatch;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{norm, Dsu, Edge, Vertex};
use crate::instance::{rr_sensible_terminals, GstpInstance, Solution};
pub use decomposition::{make_nice, tree_decomposition, treewidth, NodeKind, TdError, TreeDecomposition, EXACT_CAP};
pub use dispatch::{dispatch, dispatch_with_td, stp_dispatch, Branch, DispatchConfig, DispatchError};

/// Blocks of one crossing index: disjoint nonempty sorted vertex sets, sorted.
pub type Blocks = Vec<Vec<Vertex>>;

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DpTuple {
    pub bottom: BTreeSet<usize>,
    pub crossing: BTreeMap<usize, Blocks>,
    pub top: BTreeSet<usize>,
}

impl DpTuple {
    /// The three index sets partition `0..sum_d`; blocks are nonempty,
    /// disjoint and inside `bag`.
    pub fn is_valid(&self, sum_d: usize, bag: &[Vertex]) -> bool {
        let mut seen = BTreeSet::new();
        let all = self.bottom.iter().chain(self.crossing.keys()).chain(&self.top);
        let partitioned = all.copied().all(|i| i < sum_d && seen.insert(i)) && seen.len() == sum_d;
        partitioned
            && self.crossing.values().all(|blocks| {
                let mut used = BTreeSet::new();
                blocks
                    .iter()
                    .all(|b| !b.is_empty() && b.iter().all(|v| bag.binary_search(v).is_ok() && used.insert(*v)))
            })
    }
}

fn sorted_blocks(mut blocks: Blocks) -> Blocks {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    blocks
}

/// Tuples of a leaf: every split of `0..sum_d` into crossing (no blocks) and top.
pub fn dp_leaf(sum_d: usize) -> BTreeSet<DpTuple> {
    (0u32..1 << sum_d)
        .map(|s| DpTuple {
            bottom: BTreeSet::new(),
            crossing: (0..sum_d).filter(|i| s >> i & 1 == 1).map(|i| (i, vec![])).collect(),
            top: (0..sum_d).filter(|i| s >> i & 1 == 0).collect(),
        })
        .collect()
}

/// Extensions of `tau` by `v`: every `S` with `L ⊆ S ⊆ I× ∪ I⊤` gets the block `{v}`,
/// where `L` are the indices whose terminal set contains `v`.
fn introduce_one(tau: &DpTuple, v: Vertex, terminals: &[Vec<Vertex>]) -> Vec<DpTuple> {
    let forced: Vec<usize> = (0..terminals.len()).filter(|&i| terminals[i].binary_search(&v).is_ok()).collect();
    if forced.iter().any(|i| tau.bottom.contains(i)) {
        return vec![];
    }
    let free: Vec<usize> = tau.crossing.keys().chain(&tau.top).copied().filter(|i| !forced.contains(i)).collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for pick in 0u32..1 << free.len() {
        let mut t = tau.clone();
        for i in forced.iter().copied().chain((0..free.len()).filter(|b| pick >> b & 1 == 1).map(|b| free[b])) {
            t.top.remove(&i);
            let blocks = t.crossing.entry(i).or_default();
            blocks.push(vec![v]);
            *blocks = sorted_blocks(std::mem::take(blocks));
        }
        out.push(t);
    }
    out
}

pub fn dp_introduce(table: &BTreeSet<DpTuple>, v: Vertex, terminals: &[Vec<Vertex>]) -> BTreeSet<DpTuple> {
    table.iter().flat_map(|t| introduce_one(t, v, terminals)).collect()
}

/// Union of two block families by hypergraph components.
fn merge_blocks(a: &[Vec<Vertex>], b: &[Vec<Vertex>]) -> Blocks {
    let verts: Vec<Vertex> = a.iter().chain(b).flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let idx = |v: Vertex| verts.binary_search(&v).unwrap();
    let mut dsu = Dsu::new(verts.len());
    for block in a.iter().chain(b) {
        for w in block.windows(2) {
            dsu.union(idx(w[0]), idx(w[1]));
        }
    }
    let mut comps: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for &v in &verts {
        comps.entry(dsu.find(idx(v))).or_default().push(v);
    }
    sorted_blocks(comps.into_values().collect())
}

fn join_one(a: &DpTuple, b: &DpTuple) -> Option<DpTuple> {
    if !a.crossing.keys().eq(b.crossing.keys()) {
        return None;
    }
    Some(DpTuple {
        bottom: a.bottom.union(&b.bottom).copied().collect(),
        crossing: a.crossing.iter().map(|(&i, pa)| (i, merge_blocks(pa, &b.crossing[&i]))).collect(),
        top: a.top.difference(&b.bottom).copied().collect(),
    })
}

pub fn dp_join(a: &BTreeSet<DpTuple>, b: &BTreeSet<DpTuple>) -> BTreeSet<DpTuple> {
    let mut by_cross: HashMap<Vec<usize>, Vec<&DpTuple>> = HashMap::new();
    for t in b {
        by_cross.entry(t.crossing.keys().copied().collect()).or_default().push(t);
    }
    let mut out = BTreeSet::new();
    for x in a {
        if let Some(ys) = by_cross.get(&x.crossing.keys().copied().collect::<Vec<_>>()) {
            out.extend(ys.iter().filter_map(|y| join_one(x, y)));
        }
    }
    out
}

/// Forgetting `v`: each edge `v x` (for `x` in `nbrs`) goes to a crossing
/// index or stays unused. Indices whose connections collapse onto `v` alone
/// finish, which requires their terminals to lie in `y_c`.
fn forget_one(
    gamma: &DpTuple,
    v: Vertex,
    nbrs: &[Vertex],
    y_c: &[Vertex],
    terminals: &[Vec<Vertex>],
) -> Vec<(DpTuple, Vec<Option<usize>>)> {
    let cross: Vec<usize> = gamma.crossing.keys().copied().collect();
    let choices = cross.len() + 1;
    let total = choices.pow(nbrs.len() as u32);
    let mut out = Vec::new();
    'lambda: for code in 0..total {
        let mut lambda = Vec::with_capacity(nbrs.len());
        let mut c = code;
        for _ in nbrs {
            lambda.push((c % choices).checked_sub(1).map(|k| cross[k]));
            c /= choices;
        }
        let mut t = DpTuple { bottom: gamma.bottom.clone(), crossing: BTreeMap::new(), top: gamma.top.clone() };
        for (&i, blocks) in &gamma.crossing {
            let mut family = blocks.clone();
            family.extend(
                nbrs.iter().zip(&lambda).filter(|(_, l)| **l == Some(i)).map(|(&x, _)| vec![v.min(x), v.max(x)]),
            );
            if !family.iter().flatten().any(|&u| u == v) {
                t.crossing.insert(i, blocks.clone());
                continue;
            }
            let comps = merge_blocks(&family, &[]);
            let rest: Blocks =
                comps.iter().map(|k| k.iter().copied().filter(|&u| u != v).collect::<Vec<_>>()).collect();
            if rest.iter().any(Vec::is_empty) {
                if rest.len() > 1 || !terminals[i].iter().all(|u| y_c.binary_search(u).is_ok()) {
                    continue 'lambda;
                }
                t.bottom.insert(i);
            } else {
                t.crossing.insert(i, sorted_blocks(rest));
            }
        }
        out.push((t, lambda));
    }
    out
}

/// `nbrs` are the neighbours of `v` that stay in the bag; `y_c` the sorted
/// vertices introduced at or below the child.
pub fn dp_forget(
    table: &BTreeSet<DpTuple>,
    v: Vertex,
    nbrs: &[Vertex],
    y_c: &[Vertex],
    terminals: &[Vec<Vertex>],
) -> BTreeSet<DpTuple> {
    table.iter().flat_map(|g| forget_one(g, v, nbrs, y_c, terminals)).map(|(t, _)| t).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwConfig {
    pub max_total_demand: usize,
    pub max_width: usize,
    pub exact_cap: usize,
    pub witness: bool,
}

impl Default for TwConfig {
    fn default() -> Self {
        TwConfig { max_total_demand: 4, max_width: 4, exact_cap: EXACT_CAP, witness: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwError {
    #[error("twdp cap exceeded: {what} is {value}, cap {cap}")]
    Cap { what: &'static str, value: usize, cap: usize },
    #[error("invalid tree decomposition: {0}")]
    Td(#[from] TdError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableStats {
    pub width: isize,
    pub nodes: usize,
    pub max_table: usize,
    pub total_tuples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwOutcome {
    pub feasible: bool,
    pub witness: Option<Solution>,
    pub stats: TableStats,
}

#[derive(Debug, Clone)]
enum Pred {
    Leaf,
    Introduce(usize),
    Join(usize, usize),
    /// Child tuple and the edges `v x` given to index `i`, as `(x, i)`.
    Forget(usize, Vec<(Vertex, usize)>),
}

#[derive(Default)]
struct Table {
    tuples: Vec<DpTuple>,
    index: HashMap<DpTuple, usize>,
    preds: Vec<Pred>,
}

impl Table {
    fn add(&mut self, t: DpTuple, pred: Pred, keep_pred: bool) {
        if self.index.contains_key(&t) {
            return;
        }
        self.index.insert(t.clone(), self.tuples.len());
        self.tuples.push(t);
        if keep_pred {
            self.preds.push(pred);
        }
    }
}

pub fn decide_tw(inst: &GstpInstance, td: Option<&TreeDecomposition>, cfg: &TwConfig) -> Result<TwOutcome, TwError> {
    decide_tw_permuted(inst, td, cfg, None)
}

/// [`decide_tw`] with index `i` serving the terminal set of default index
/// `perm[i]`. `perm` must be a permutation of `0..ΣD` after dropping sets
/// with fewer than two vertices.
pub fn decide_tw_permuted(
    inst: &GstpInstance,
    td: Option<&TreeDecomposition>,
    cfg: &TwConfig,
    perm: Option<&[usize]>,
) -> Result<TwOutcome, TwError> {
    let reduced = rr_sensible_terminals(inst);
    let g = reduced.graph();
    let sum_d = reduced.total_demand();
    if sum_d > cfg.max_total_demand {
        return Err(TwError::Cap { what: "total demand", value: sum_d, cap: cfg.max_total_demand });
    }
    let td = match td {
        Some(td) => {
            td.validate(g)?;
            td.clone()
        }
        None => tree_decomposition(g, cfg.exact_cap),
    };
    if td.width() > cfg.max_width as isize {
        return Err(TwError::Cap { what: "width", value: td.width() as usize, cap: cfg.max_width });
    }
    let nice = make_nice(&td, g)?;
    let kinds = nice.kinds.as_ref().expect("nice decomposition");
    let ch = nice.children();
    let mut enumerate = reduced.enumerate_terminals();
    if let Some(p) = perm {
        assert_eq!(p.len(), sum_d, "permutation length");
        enumerate = p.iter().map(|&i| enumerate[i]).collect();
    }
    let terminals: Vec<Vec<Vertex>> = enumerate.iter().map(|&j| reduced.terminals()[j].clone()).collect();
    let adj = g.adjacency();

    let mut y: Vec<Vec<Vertex>> = vec![Vec::new(); nice.len()];
    let mut tables: Vec<Option<Table>> = (0..nice.len()).map(|_| None).collect();
    let mut stats = TableStats { width: td.width(), nodes: nice.len(), ..TableStats::default() };
    for t in nice.post_order() {
        let mut table = Table::default();
        let keep = cfg.witness;
        match kinds[t] {
            NodeKind::Leaf => {
                for tau in dp_leaf(sum_d) {
                    table.add(tau, Pred::Leaf, keep);
                }
            }
            NodeKind::Introduce(v) => {
                let c = ch[t][0];
                y[t] = y[c].clone();
                y[t].push(v);
                y[t].sort_unstable();
                let child = tables[c].as_ref().expect("child done");
                for (k, tau) in child.tuples.iter().enumerate() {
                    for out in introduce_one(tau, v, &terminals) {
                        table.add(out, Pred::Introduce(k), keep);
                    }
                }
            }
            NodeKind::Forget(v) => {
                let c = ch[t][0];
                y[t] = y[c].clone();
                let bag = &nice.bags[t];
                let nbrs: Vec<Vertex> = adj[v].iter().copied().filter(|x| bag.binary_search(x).is_ok()).collect();
                let child = tables[c].as_ref().expect("child done");
                for (k, gamma) in child.tuples.iter().enumerate() {
                    for (out, lambda) in forget_one(gamma, v, &nbrs, &y[c], &terminals) {
                        let used = if keep {
                            nbrs.iter().zip(lambda).filter_map(|(&x, l)| l.map(|i| (x, i))).collect()
                        } else {
                            vec![]
                        };
                        table.add(out, Pred::Forget(k, used), keep);
                    }
                }
            }
            NodeKind::Join => {
                let (a, b) = (ch[t][0], ch[t][1]);
                let mut merged: Vec<Vertex> = y[a].iter().chain(&y[b]).copied().collect();
                merged.sort_unstable();
                merged.dedup();
                y[t] = merged;
                let (ta, tb) = (tables[a].as_ref().expect("child done"), tables[b].as_ref().expect("child done"));
                let mut by_cross: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                for (k, tau) in tb.tuples.iter().enumerate() {
                    by_cross.entry(tau.crossing.keys().copied().collect()).or_default().push(k);
                }
                for (ka, alpha) in ta.tuples.iter().enumerate() {
                    let key: Vec<usize> = alpha.crossing.keys().copied().collect();
                    for &kb in by_cross.get(&key).map_or(&[][..], Vec::as_slice) {
                        if let Some(out) = join_one(alpha, &tb.tuples[kb]) {
                            table.add(out, Pred::Join(ka, kb), keep);
                        }
                    }
                }
            }
        }
        stats.max_table = stats.max_table.max(table.tuples.len());
        stats.total_tuples += table.tuples.len();
        if !cfg.witness {
            for &c in &ch[t] {
                tables[c] = None;
            }
        }
        tables[t] = Some(table);
    }
    let goal = DpTuple { bottom: (0..sum_d).collect(), crossing: BTreeMap::new(), top: BTreeSet::new() };
    let root = tables[nice.root].as_ref().expect("root done");
    let found = root.index.get(&goal).copied();
    let witness = match found {
        Some(k) if cfg.witness => {
            let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); sum_d];
            collect_edges(&nice, &ch, &tables, nice.root, k, &(0..sum_d).collect(), &mut edges);
            let mut parts: Vec<(Vec<Edge>, usize)> = edges
                .into_iter()
                .zip(&enumerate)
                .map(|(es, &j)| (es, inst.index_of(&reduced.terminals()[j]).expect("reduced sets come from the input")))
                .collect();
            for (j, (t, d)) in inst.sets().enumerate() {
                if t.len() <= 1 {
                    parts.extend(std::iter::repeat_n((vec![], j), d));
                }
            }
            Some(Solution::new(parts).canonical())
        }
        _ => None,
    };
    Ok(TwOutcome { feasible: found.is_some(), witness, stats })
}

fn collect_edges(
    nice: &TreeDecomposition,
    ch: &[Vec<usize>],
    tables: &[Option<Table>],
    t: usize,
    k: usize,
    wanted: &BTreeSet<usize>,
    edges: &mut [Vec<Edge>],
) {
    let table = tables[t].as_ref().expect("tables kept for witness");
    match &table.preds[k] {
        Pred::Leaf => {}
        Pred::Introduce(c) => collect_edges(nice, ch, tables, ch[t][0], *c, wanted, edges),
        Pred::Forget(c, used) => {
            let NodeKind::Forget(v) = nice.kinds.as_ref().expect("nice")[t] else { unreachable!("forget pred") };
            for &(x, i) in used.iter().filter(|(_, i)| wanted.contains(i)) {
                edges[i].push(norm(v, x));
            }
            collect_edges(nice, ch, tables, ch[t][0], *c, wanted, edges);
        }
        Pred::Join(ka, kb) => {
            let (a, b) = (ch[t][0], ch[t][1]);
            let alpha = &tables[a].as_ref().expect("kept").tuples[*ka];
            let beta = &tables[b].as_ref().expect("kept").tuples[*kb];
            let wa: BTreeSet<usize> =
                wanted.iter().copied().filter(|i| alpha.crossing.contains_key(i) || alpha.bottom.contains(i)).collect();
            let wb: BTreeSet<usize> = wanted
                .iter()
                .copied()
                .filter(|i| beta.crossing.contains_key(i) || (beta.bottom.contains(i) && !alpha.bottom.contains(i)))
                .collect();
            collect_edges(nice, ch, tables, a, *ka, &wa, edges);
            collect_edges(nice, ch, tables, b, *kb, &wb, edges);
        }
    }
}
