//! Configurations of a component, the component instance they induce, the
//! admission check and the generation of signatures.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use itertools::Itertools;

use super::hyper::bits;
use super::{Component, FnContext, FnError};
use crate::graph::{Dsu, Edge, Graph, Vertex};
use crate::instance::GstpInstance;
use crate::oracle::{TreeKind, TreePacker};

/// Extended edges (host edges plus hyperedge types) a closure may have
/// before signature generation refuses.
pub const MAX_CLOSURE_EDGES: usize = 20;

/// `γ = (demand, supply, assign)`. Keys of `demand` and `supply` are sorted
/// subsets of `S ∩ V(G)`; zero entries are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub demand: BTreeMap<Vec<Vertex>, usize>,
    pub supply: BTreeMap<Vec<Vertex>, usize>,
    /// `(terminal index, tree index, slot) -> U`; absent entries mean `∅`.
    pub assign: BTreeMap<(usize, usize, usize), Vec<Vertex>>,
}

impl Configuration {
    pub fn assigned(&self, t: usize, i: usize, j: usize) -> &[Vertex] {
        self.assign.get(&(t, i, j)).map_or(&[], Vec::as_slice)
    }

    /// Value ranges: keys inside `S ∩ V(G)`, counts in `1..=u`, assign keys
    /// for `𝒯_S`, `i < d(T)` and `j < |S|`.
    pub fn is_viable(&self, ctx: &FnContext) -> bool {
        let u = ctx.u();
        let inside = |k: &Vec<Vertex>| !k.is_empty() && ctx.mask_of(k).is_some();
        let counts_ok = |m: &BTreeMap<Vec<Vertex>, usize>| m.iter().all(|(k, &c)| inside(k) && (1..=u).contains(&c));
        counts_ok(&self.demand)
            && counts_ok(&self.supply)
            && self.assign.iter().all(|(&(t, i, j), v)| {
                ctx.terminals_in_s.contains(&t) && i < ctx.instance.demands()[t] && j < ctx.modulator.len() && inside(v)
            })
    }
}

/// The instance a component has to solve under a configuration and a
/// surjection `σ`.
#[derive(Debug, Clone)]
pub struct ComponentInstance {
    pub instance: GstpInstance,
    /// Local vertex to augmented-graph vertex; fresh demand vertices map to `None`.
    pub origin: Vec<Option<Vertex>>,
    /// Terminal sets coming from supply, as sorted local vertex lists.
    pub supply_sets: Vec<Vec<Vertex>>,
}

impl ComponentInstance {
    pub fn is_fresh(&self, v: Vertex) -> bool {
        self.origin[v].is_none()
    }
}

/// Builds the host `C⁺` (host edges only), one fresh vertex per unit of
/// demand adjacent to its set, and the terminal family
/// `𝒬 ∪ 𝒮 ∪ 𝒜` with the summed demands.
pub fn component_instance(
    ctx: &FnContext,
    c: usize,
    gamma: &Configuration,
    sigma: &[Vertex],
) -> Result<ComponentInstance, FnError> {
    let comp = ctx.component(c)?;
    check_surjection(ctx, comp, sigma)?;
    let closure: Vec<Vertex> = comp.vertices.iter().chain(&ctx.modulator).copied().sorted().collect();
    let local = |v: Vertex| closure.binary_search(&v).expect("vertex of C+");
    let mut edges: Vec<Edge> = ctx.closure_edges(comp).into_iter().map(|(u, v)| (local(u), local(v))).collect();
    let mut next = closure.len();
    for (q, &count) in &gamma.demand {
        for _ in 0..count {
            edges.extend(q.iter().map(|&s| (local(s), next)));
            next += 1;
        }
    }
    let mut origin: Vec<Option<Vertex>> = closure.iter().copied().map(Some).collect();
    origin.resize(next, None);
    let to_local = |vs: &[Vertex]| -> Vec<Vertex> { vs.iter().map(|&v| local(v)).collect() };

    let mut sets: Vec<Vec<Vertex>> = Vec::new();
    let mut demands = Vec::new();
    for &t in &comp.terminal_sets {
        let tv = &ctx.instance.terminals()[t];
        if tv.iter().any(|v| comp.vertices.binary_search(v).is_ok()) {
            sets.push(to_local(tv));
            demands.push(ctx.instance.demands()[t]);
        }
    }
    let mut supply_sets = Vec::new();
    for (u, &count) in &gamma.supply {
        supply_sets.push(to_local(u));
        sets.push(to_local(u));
        demands.push(count);
    }
    for &t in &ctx.terminals_in_s {
        for i in 0..ctx.instance.demands()[t] {
            let mut by_u: BTreeMap<&[Vertex], Vec<Vertex>> = BTreeMap::new();
            for (j, &sj) in sigma.iter().enumerate() {
                let u = gamma.assigned(t, i, j);
                if !u.is_empty() {
                    by_u.entry(u).or_default().push(sj);
                }
            }
            for (u, a) in by_u {
                sets.push(to_local(&u.iter().chain(&a).copied().collect::<Vec<_>>()));
                demands.push(1);
            }
        }
    }
    let mut g = Graph::new(next);
    for (u, v) in edges {
        g.add_edge(u, v).expect("local ids in range");
    }
    let mut supply_sets: Vec<Vec<Vertex>> = supply_sets
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect();
    supply_sets.sort();
    let instance = GstpInstance::new(g, sets, demands).expect("component instance is simple");
    Ok(ComponentInstance { instance, origin, supply_sets })
}

fn check_surjection(ctx: &FnContext, comp: &Component, sigma: &[Vertex]) -> Result<(), FnError> {
    let image: BTreeSet<Vertex> = sigma.iter().copied().collect();
    if sigma.len() != ctx.modulator.len() || image.into_iter().collect::<Vec<_>>() != comp.vertices {
        return Err(FnError::InvalidSurjection(ctx.modulator.len()));
    }
    Ok(())
}

/// Whether `C` admits `γ`: some surjection `σ` satisfies the nonempty-assign
/// condition and the component instance has a solution where supply trees
/// avoid fresh vertices, every fresh vertex lies in exactly one tree with
/// degree at least two, and every tree uses an edge of `C⁺`.
pub fn admits(ctx: &FnContext, c: usize, gamma: &Configuration) -> Result<bool, FnError> {
    let comp = ctx.component(c)?;
    if !gamma.is_viable(ctx) {
        return Ok(false);
    }
    let k = ctx.modulator.len();
    for sigma in (0..k).map(|_| comp.vertices.iter().copied()).multi_cartesian_product() {
        if sigma.iter().collect::<BTreeSet<_>>().len() != comp.vertices.len() {
            continue;
        }
        let assign_ok = ctx.terminals_in_s.iter().all(|&t| {
            let tv = &ctx.instance.terminals()[t];
            (0..ctx.instance.demands()[t]).all(|i| {
                sigma
                    .iter()
                    .enumerate()
                    .all(|(j, s)| tv.binary_search(s).is_err() || !gamma.assigned(t, i, j).is_empty())
            })
        });
        if assign_ok && solves_with_rules(&component_instance(ctx, c, gamma, &sigma)?)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn solves_with_rules(ci: &ComponentInstance) -> Result<bool, FnError> {
    let inst = &ci.instance;
    let edges = inst.graph().edge_list();
    if edges.len() > 32 {
        return Err(FnError::ScaleCap { what: "component instance edges", value: edges.len(), cap: 32 });
    }
    let packer = TreePacker::new(&edges);
    let fresh_local: Vec<u8> =
        (0..inst.graph().n()).filter(|&v| ci.is_fresh(v)).filter_map(|v| packer.local_id(v)).collect();
    if fresh_local.len() < (0..inst.graph().n()).filter(|&v| ci.is_fresh(v)).count() {
        return Ok(false);
    }
    let fresh_edges: u32 =
        (0..edges.len()).filter(|&i| ci.is_fresh(edges[i].0) || ci.is_fresh(edges[i].1)).fold(0, |m, i| m | 1 << i);

    let mut reqs: Vec<(Vec<u32>, bool)> = Vec::new();
    for (t, d) in inst.sets() {
        let Some(tm) = packer.vertex_mask(t) else {
            return Ok(false);
        };
        let mut cands = if tm.count_ones() >= 2 {
            packer.trees(tm, packer.full_pool(), TreeKind::Any)
        } else {
            let x = tm.trailing_zeros() as u8;
            let mut all: BTreeSet<u32> = BTreeSet::new();
            for e in 0..edges.len() {
                let (a, b) = packer.endpoints(e);
                if a == x || b == x {
                    let y = if a == x { b } else { a };
                    all.extend(packer.trees(tm | 1u64 << y, packer.full_pool(), TreeKind::Any));
                }
            }
            all.into_iter().collect()
        };
        let is_supply = ci.supply_sets.iter().any(|s| s.as_slice() == t);
        cands.retain(|&tree| {
            tree & !fresh_edges != 0
                && !(is_supply && tree & fresh_edges != 0)
                && fresh_local.iter().all(|&f| {
                    let deg = packer.degree_in(tree, f);
                    deg == 0 || deg >= 2
                })
        });
        cands.sort_unstable();
        for copy in 0..d {
            reqs.push((cands.clone(), copy > 0));
        }
    }
    let mut chosen = vec![0u32; reqs.len()];
    let covered_all = |chosen: &[u32]| {
        let used = chosen.iter().fold(0u32, |m, &t| m | t);
        fresh_local.iter().all(|&f| packer.degree_in(used, f) > 0)
    };
    Ok(pack(&reqs, 0, u32::MAX, usize::MAX, &mut chosen, &covered_all))
}

fn pack(
    reqs: &[(Vec<u32>, bool)],
    r: usize,
    pool: u32,
    prev: usize,
    chosen: &mut Vec<u32>,
    finish: &dyn Fn(&[u32]) -> bool,
) -> bool {
    if r == reqs.len() {
        return finish(chosen);
    }
    let (cands, same) = &reqs[r];
    let start = if *same { prev + 1 } else { 0 };
    for (idx, &tree) in cands.iter().enumerate().skip(start) {
        if tree & !pool != 0 {
            continue;
        }
        chosen[r] = tree;
        if pack(reqs, r + 1, pool & !tree, idx, chosen, finish) {
            return true;
        }
    }
    false
}

/// Local view of `C⁺` used by signature generation. Local ids: host vertices
/// of `C` first, then `S ∩ V(G)`. Extended edges are the host edges followed
/// by one hyperedge per subset of `S ∩ V(G)` with at least two vertices.
struct Closure {
    h: usize,
    s: usize,
    /// Vertex mask per extended edge.
    ext: Vec<u64>,
    /// Number of host edges at the front of `ext`.
    m: usize,
    /// Subset mask of each hyperedge.
    hyper_q: Vec<u32>,
}

/// A cycle-free connected selection of extended edges.
#[derive(Clone, Copy)]
struct Tree {
    sel: u32,
    vertices: u64,
    leaves: u64,
}

impl Closure {
    fn new(ctx: &FnContext, comp: &Component) -> Result<Self, FnError> {
        let h = comp.host.len();
        let s = ctx.host_modulator.len();
        let local = |v: Vertex| match comp.host.binary_search(&v) {
            Ok(i) => i,
            Err(_) => h + ctx.host_modulator.binary_search(&v).expect("closure vertex"),
        };
        let mut ext: Vec<u64> =
            ctx.closure_edges(comp).into_iter().map(|(u, v)| (1u64 << local(u)) | (1u64 << local(v))).collect();
        let m = ext.len();
        let hyper_q: Vec<u32> = (1u32..1 << s).filter(|q| q.count_ones() >= 2).collect();
        ext.extend(hyper_q.iter().map(|&q| (q as u64) << h));
        if ext.len() > MAX_CLOSURE_EDGES {
            return Err(FnError::ScaleCap { what: "closure edges", value: ext.len(), cap: MAX_CLOSURE_EDGES });
        }
        Ok(Closure { h, s, ext, m, hyper_q })
    }

    fn host_edges(&self) -> u32 {
        (1u32 << self.m) - 1
    }

    fn s_mask(&self) -> u64 {
        ((1u64 << self.s) - 1) << self.h
    }

    fn c_mask(&self) -> u64 {
        (1u64 << self.h) - 1
    }

    fn vertices(&self, sel: u32) -> u64 {
        bits(sel).fold(0, |a, e| a | self.ext[e])
    }

    /// Components of the selection as vertex masks; `None` on a cycle.
    fn forest(&self, sel: u32) -> Option<Vec<u64>> {
        let mut dsu = Dsu::new(64);
        for e in bits(sel) {
            let vs = self.ext[e];
            let first = vs.trailing_zeros() as usize;
            let mut m = vs & (vs - 1);
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                if !dsu.union(first, b) {
                    return None;
                }
            }
        }
        let vs = self.vertices(sel);
        let mut comps: BTreeMap<usize, u64> = BTreeMap::new();
        let mut m = vs;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            *comps.entry(dsu.find(b)).or_default() |= 1 << b;
        }
        Some(comps.into_values().collect())
    }

    fn leaves(&self, sel: u32) -> u64 {
        let mut once = 0u64;
        let mut more = 0u64;
        for e in bits(sel) {
            let vs = self.ext[e];
            more |= once & vs;
            once |= vs;
        }
        once & !more
    }

    fn tree(&self, sel: u32) -> Option<Tree> {
        let comps = self.forest(sel)?;
        (comps.len() == 1).then(|| Tree { sel, vertices: comps[0], leaves: self.leaves(sel) })
    }

    fn all_trees(&self, pool: u32) -> Vec<Tree> {
        (1..=pool).filter(|s| s & !pool == 0).filter_map(|s| self.tree(s)).collect()
    }
}

type Vector = Vec<usize>;

/// `(demand, supply, assign rows)` in mask form: vectors are indexed by
/// subset mask of `S ∩ V(G)`, rows give the subset for each host vertex of `C`.
type Form = (Vector, Vector, Vec<Vec<u32>>);

struct Generator<'a> {
    cl: &'a Closure,
    /// Candidate trees per required tree of the component's own terminal sets.
    q_reqs: Vec<(Vec<Tree>, bool)>,
    /// Candidate pieces per tree of the terminal set in `S`, with their rows.
    forests: Vec<(u32, Vec<u32>)>,
    a_trees: usize,
    supply_trees: Vec<(u32, u32)>,
    supply_memo: HashMap<u32, Vec<Vector>>,
    out: HashSet<Form>,
}

impl Generator<'_> {
    fn run_q(&mut self, r: usize, pool: u32, prev: usize, demand: &mut Vector) {
        if r == self.q_reqs.len() {
            self.run_a(0, pool, demand, &mut Vec::new());
            return;
        }
        let hosts = self.cl.host_edges();
        let start = if self.q_reqs[r].1 { prev + 1 } else { 0 };
        for idx in start..self.q_reqs[r].0.len() {
            let tree = self.q_reqs[r].0[idx];
            let g = tree.sel & hosts;
            if g & !pool != 0 {
                continue;
            }
            let hyper: Vec<u32> = bits(tree.sel >> self.cl.m).map(|i| self.cl.hyper_q[i]).collect();
            for &q in &hyper {
                demand[q as usize] += 1;
            }
            self.run_q(r + 1, pool & !g, idx, demand);
            for &q in &hyper {
                demand[q as usize] -= 1;
            }
        }
    }

    fn run_a(&mut self, i: usize, pool: u32, demand: &Vector, rows: &mut Vec<Vec<u32>>) {
        if i == self.a_trees {
            let supplies = self.supplies(pool);
            for supply in supplies {
                self.out.insert((demand.clone(), supply, rows.clone()));
            }
            return;
        }
        for f in 0..self.forests.len() {
            let (sel, ref row) = self.forests[f];
            if sel & !pool != 0 {
                continue;
            }
            rows.push(row.clone());
            self.run_a(i + 1, pool & !sel, demand, rows);
            rows.pop();
        }
    }

    /// Pareto-maximal supply vectors of packings inside `pool`.
    fn supplies(&mut self, pool: u32) -> Vec<Vector> {
        if let Some(v) = self.supply_memo.get(&pool) {
            return v.clone();
        }
        let mut all = HashSet::new();
        let mut cur = vec![0; 1 << self.cl.s];
        self.supply_rec(0, pool, &mut cur, &mut all);
        let all: Vec<Vector> = all.into_iter().collect();
        let mut max: Vec<Vector> =
            all.iter().filter(|v| !all.iter().any(|w| w != *v && dominates(w, v))).cloned().collect();
        max.sort();
        self.supply_memo.insert(pool, max.clone());
        max
    }

    fn supply_rec(&self, start: usize, pool: u32, cur: &mut Vector, all: &mut HashSet<Vector>) {
        all.insert(cur.clone());
        for idx in start..self.supply_trees.len() {
            let (sel, u) = self.supply_trees[idx];
            if sel & !pool == 0 {
                cur[u as usize] += 1;
                self.supply_rec(idx + 1, pool & !sel, cur, all);
                cur[u as usize] -= 1;
            }
        }
    }
}

fn dominates(w: &[usize], v: &[usize]) -> bool {
    w.iter().zip(v).all(|(a, b)| a >= b)
}

/// The signature of component `c`: admitted configurations generated in
/// canonical form, with dominated `(demand, supply)` pairs dropped per assign.
///
/// Canonical form: `σ(j)` is the `min(j, |C|-1)`-th vertex of `C`; trees of
/// the component's terminal sets are Steiner-minimal in `C⁺` extended by one
/// hyperedge per demanded set; pieces of a tree of the terminal set in `S`
/// touch both `C` and `S` and end in terminals inside `C`; supply trees are
/// host-edge trees whose leaves are exactly their vertices in `S`.
pub fn signature(ctx: &FnContext, c: usize) -> Result<Vec<Configuration>, FnError> {
    let comp = ctx.component(c)?;
    if comp.vertices.len() > ctx.modulator.len() {
        return Err(FnError::InvalidSurjection(ctx.modulator.len()));
    }
    let cl = Closure::new(ctx, comp)?;
    let all_ext = if cl.ext.len() == 32 { u32::MAX } else { (1u32 << cl.ext.len()) - 1 };
    let trees = cl.all_trees(all_ext);
    let local_mask = |vs: &[Vertex]| -> u64 {
        vs.iter()
            .map(|v| match comp.host.binary_search(v) {
                Ok(i) => 1u64 << i,
                Err(_) => ctx.host_modulator.binary_search(v).map_or(0, |b| 1u64 << (cl.h + b)),
            })
            .fold(0, |a, b| a | b)
    };

    let mut q_reqs = Vec::new();
    for &t in &comp.terminal_sets {
        let tv = &ctx.instance.terminals()[t];
        if !tv.iter().any(|v| comp.host.binary_search(v).is_ok()) {
            continue;
        }
        let w = local_mask(tv);
        let cands: Vec<Tree> = trees
            .iter()
            .filter(|tr| tr.sel & cl.host_edges() != 0 && tr.vertices & w == w && tr.leaves & !w == 0)
            .copied()
            .collect();
        for copy in 0..ctx.instance.demands()[t] {
            q_reqs.push((cands.clone(), copy > 0));
        }
    }

    let (a_trees, forests) = match ctx.terminals_in_s.first() {
        Some(&t) => {
            let w = local_mask(&ctx.instance.terminals()[t]) & cl.c_mask();
            (ctx.instance.demands()[t], pieces(&cl, w))
        }
        None => (0, vec![]),
    };

    let supply_trees: Vec<(u32, u32)> = (1..=cl.host_edges())
        .filter_map(|sel| cl.tree(sel))
        .filter_map(|tr| {
            let on_s = tr.vertices & cl.s_mask();
            (on_s.count_ones() >= 2 && tr.leaves == on_s).then_some((tr.sel, (on_s >> cl.h) as u32))
        })
        .collect();

    let mut gen =
        Generator { cl: &cl, q_reqs, forests, a_trees, supply_trees, supply_memo: HashMap::new(), out: HashSet::new() };
    let mut demand = vec![0; 1 << cl.s];
    gen.run_q(0, cl.host_edges(), 0, &mut demand);

    let mut by_rows: BTreeMap<Vec<Vec<u32>>, Vec<(Vector, Vector)>> = BTreeMap::new();
    for (d, s, rows) in gen.out {
        by_rows.entry(rows).or_default().push((d, s));
    }
    let mut out = Vec::new();
    for (rows, pairs) in by_rows {
        let keep = pairs
            .iter()
            .filter(|(d, s)| !pairs.iter().any(|(d2, s2)| (d2, s2) != (d, s) && dominates(d, d2) && dominates(s2, s)));
        for (d, s) in keep {
            out.push(to_configuration(ctx, comp, &cl, d, s, &rows));
        }
    }
    out.sort();
    Ok(out)
}

/// Forests of host edges touching both `C` and `S` in every component, with
/// leaves in `C` inside `w` and covering `w`. Returns each with the subset of
/// `S` reached from every host vertex of `C`.
fn pieces(cl: &Closure, w: u64) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    if w == 0 {
        out.push((0, vec![0; cl.h]));
    }
    for sel in 1..=cl.host_edges() {
        let Some(comps) = cl.forest(sel) else { continue };
        let vs = cl.vertices(sel);
        if vs & w != w || cl.leaves(sel) & cl.c_mask() & !w != 0 {
            continue;
        }
        if !comps.iter().all(|k| k & cl.c_mask() != 0 && k & cl.s_mask() != 0) {
            continue;
        }
        let row = (0..cl.h)
            .map(|v| comps.iter().find(|k| *k >> v & 1 == 1).map_or(0, |k| ((k & cl.s_mask()) >> cl.h) as u32))
            .collect();
        out.push((sel, row));
    }
    out
}

fn to_configuration(
    ctx: &FnContext,
    comp: &Component,
    cl: &Closure,
    demand: &[usize],
    supply: &[usize],
    rows: &[Vec<u32>],
) -> Configuration {
    let as_map = |v: &[usize]| -> BTreeMap<Vec<Vertex>, usize> {
        v.iter().enumerate().filter(|&(_, &c)| c > 0).map(|(q, &c)| (ctx.set_of(q as u32), c)).collect()
    };
    let mut assign = BTreeMap::new();
    if let Some(&t) = ctx.terminals_in_s.first() {
        let last = comp.vertices.len() - 1;
        for (i, row) in rows.iter().enumerate() {
            for j in 0..ctx.modulator.len() {
                let v = comp.vertices[j.min(last)];
                if let Ok(li) = comp.host.binary_search(&v) {
                    if row[li] != 0 {
                        assign.insert((t, i, j), ctx.set_of(row[li]));
                    }
                }
            }
        }
    }
    debug_assert_eq!(cl.h, comp.host.len());
    Configuration { demand: as_map(demand), supply: as_map(supply), assign }
}

/// Canonical surjection used by [`signature`].
pub fn canonical_sigma(ctx: &FnContext, c: usize) -> Result<Vec<Vertex>, FnError> {
    let comp = ctx.component(c)?;
    let last = comp.vertices.len() - 1;
    Ok((0..ctx.modulator.len()).map(|j| comp.vertices[j.min(last)]).collect())
}
