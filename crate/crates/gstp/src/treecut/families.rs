//! Decompositions for named families and a generator of thin-node instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TreeCutDecomposition;
use crate::graph::{Graph, Vertex};
use crate::instance::families::three_paths;
use crate::instance::{augment, AugmentMode, AugmentedGraph, GstpInstance};

/// A nice decomposition of width 5 whose node `hub` has an empty bag and
/// `ℓ + 2` bold children, `ℓ` of them fake.
#[derive(Debug, Clone)]
pub struct UnlimitedBold {
    pub graph: Graph,
    pub tcd: TreeCutDecomposition,
    pub hub: usize,
    /// The fake children in suppression order.
    pub path: Vec<usize>,
    /// The two children that survive in the 3-center at `hub`.
    pub ends: [usize; 2],
}

/// Vertex 0 sits in the root bag. Each fake child `p_i` holds an edge
/// `a_i b_i`; consecutive rungs are joined `a_i a_{i+1}` and `b_i b_{i+1}`,
/// and 0 is joined to `a_1, b_1`. The two end children hold paths
/// `u_0..u_3` and `w_0..w_3` with rungs `u_j w_j`, hung from `a_ℓ u_0` and
/// `b_ℓ w_0`.
pub fn unlimited_bold(l: usize) -> UnlimitedBold {
    assert!(l >= 1, "at least one fake child");
    let n = 1 + 2 * l + 8;
    let mut g = Graph::new(n);
    let a = |i: usize| 1 + 2 * i;
    let b = |i: usize| 2 + 2 * i;
    let u = |j: usize| 1 + 2 * l + j;
    let w = |j: usize| 5 + 2 * l + j;
    let mut add = |x: Vertex, y: Vertex| g.add_edge(x, y).expect("fresh edge");
    add(0, a(0));
    add(0, b(0));
    for i in 0..l {
        add(a(i), b(i));
        if i + 1 < l {
            add(a(i), a(i + 1));
            add(b(i), b(i + 1));
        }
    }
    add(a(l - 1), u(0));
    add(b(l - 1), w(0));
    for j in 0..4 {
        add(u(j), w(j));
        if j + 1 < 4 {
            add(u(j), u(j + 1));
            add(w(j), w(j + 1));
        }
    }
    // Nodes: 0 root, 1 hub, 2..2+l fakes, then the two ends.
    let mut bags = vec![vec![0], vec![]];
    let mut parent = vec![None, Some(0)];
    for i in 0..l {
        bags.push(vec![a(i), b(i)]);
        parent.push(Some(1));
    }
    bags.push((0..4).map(u).collect());
    parent.push(Some(1));
    bags.push((0..4).map(w).collect());
    parent.push(Some(1));
    let tcd = TreeCutDecomposition::new(bags, parent, 0);
    UnlimitedBold { graph: g, tcd, hub: 1, path: (2..2 + l).collect(), ends: [2 + l, 3 + l] }
}

/// The 3-path family with `m` paths, its vertex-augmented graph and the
/// decomposition with root bag `{0}` and one child `{aug(T_j)} ∪ V(P_j)` per path.
pub fn three_paths_decomposition(m: usize) -> (GstpInstance, AugmentedGraph, TreeCutDecomposition) {
    let inst = three_paths(m);
    let aug = augment(&inst, AugmentMode::Vertex);
    let mut bags = vec![vec![0]];
    let mut parent = vec![None];
    for (j, t) in inst.terminals().iter().enumerate() {
        let mut bag: Vec<Vertex> = t.iter().copied().filter(|&v| v != 0).collect();
        bag.push(aug.aug_vertex_of[j]);
        bags.push(bag);
        parent.push(Some(0));
    }
    let tcd = TreeCutDecomposition::new(bags, parent, 0);
    (inst, aug, tcd)
}

/// Random instance with two sides joined by exactly two edges and no
/// terminal set crossing them. Returns the instance, a decomposition with
/// the outside at the root and the inside below node `s`, and `s`.
pub fn thin_node_instance(seed: u64) -> (GstpInstance, TreeCutDecomposition, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let na = rng.gen_range(2..=4);
    let nb = rng.gen_range(2..=4);
    let n = na + nb;
    let mut g = Graph::new(n);
    for (lo, len) in [(0, na), (na, nb)] {
        for v in lo + 1..lo + len {
            let p = rng.gen_range(lo..v);
            g.add_edge(p, v).expect("tree edge");
        }
        for _ in 0..rng.gen_range(0..=len) {
            let (x, y) = (rng.gen_range(lo..lo + len), rng.gen_range(lo..lo + len));
            if x != y && !g.has_edge(x, y) {
                g.add_edge(x, y).expect("fresh edge");
            }
        }
    }
    loop {
        let (u, x) = (rng.gen_range(0..na), rng.gen_range(0..na));
        let (v, y) = (rng.gen_range(na..n), rng.gen_range(na..n));
        if u != x || v != y {
            g.add_edge(u, v).expect("cut edge");
            g.add_edge(x, y).expect("cut edge");
            break;
        }
    }
    let mut terminals = Vec::new();
    let mut demands = Vec::new();
    let mut budget = 3;
    for _ in 0..rng.gen_range(1..=2) {
        let (lo, len) = if rng.gen_bool(0.6) { (0, na) } else { (na, nb) };
        let mut side: Vec<Vertex> = (lo..lo + len).collect();
        side.shuffle(&mut rng);
        side.truncate(rng.gen_range(2..=len.min(3)));
        let d = rng.gen_range(1..=budget.min(2));
        budget -= d;
        terminals.push(side);
        demands.push(d);
        if budget == 0 {
            break;
        }
    }
    let inst = GstpInstance::new(g, terminals, demands).expect("valid sides");
    // The inside is split between s and a child of s when it has room.
    let split = rng.gen_range(1..=na);
    let bags = vec![(na..n).collect(), (0..split).collect(), (split..na).collect()];
    let tcd = TreeCutDecomposition::new(bags, vec![None, Some(0), Some(1)], 0).prune_empty_leaves();
    (inst, tcd, 1)
}
