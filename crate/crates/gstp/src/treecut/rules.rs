//! Reduction rules that read a tree-cut decomposition of the host graph.

use std::fmt;

use super::{
    adhesion, bold_children, cross_link, demand_cross_link, is_thin, nice_violations, simple_failure, three_center,
    torso, width, TcdError, TreeCutDecomposition,
};
use crate::graph::{Graph, Vertex, VertexMap};
use crate::instance::{GstpInstance, Reduced};

/// Connected components: rejects a terminal set spread over several
/// components, otherwise returns one instance per component.
pub fn apply_rr_components(inst: &GstpInstance) -> Reduced<Vec<GstpInstance>> {
    let g = inst.graph();
    let comps = g.components();
    let mut comp_of = vec![0; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    if inst.terminals().iter().any(|t| t.iter().any(|&v| comp_of[v] != comp_of[t[0]])) {
        return Reduced::TriviallyNegative;
    }
    let parts = comps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (h, map) = g.induced(c);
            let (terminals, demands) = inst
                .sets()
                .filter(|(t, _)| t.first().is_some_and(|&v| comp_of[v] == i))
                .map(|(t, d)| (t.iter().map(|&v| map[v].expect("same component")).collect(), d))
                .unzip();
            GstpInstance::new(h, terminals, demands).expect("restriction of a valid instance")
        })
        .collect();
    Reduced::Instance(parts)
}

/// Rejects when some node carries more crossing demand than its adhesion.
pub fn apply_rr_crosslink(inst: &GstpInstance, tcd: &TreeCutDecomposition) -> Reduced<GstpInstance> {
    let g = inst.graph();
    if (0..tcd.len()).any(|s| demand_cross_link(inst, tcd, s) > adhesion(tcd, g, s)) {
        Reduced::TriviallyNegative
    } else {
        Reduced::Instance(inst.clone())
    }
}

/// Removes the only edge leaving `Y_s`, splitting a crossing terminal set in two.
pub fn apply_rr_adh1(
    inst: &GstpInstance,
    tcd: &TreeCutDecomposition,
    s: usize,
) -> Result<(GstpInstance, TreeCutDecomposition), TcdError> {
    let g = inst.graph();
    let y = tcd.y(s);
    let cut = g.cut_edges(&y);
    let [((a, b), 1)] = cut[..] else {
        return Err(TcdError::Precondition(format!("node {s} has adhesion {}, not 1", g.cut_size(&y))));
    };
    let crossing = cross_link(inst, tcd, s);
    if crossing.iter().map(|&i| inst.demands()[i]).sum::<usize>() > 1 {
        return Err(TcdError::Precondition(format!("node {s} carries crossing demand above its adhesion")));
    }
    let (u, v) = if y.binary_search(&a).is_ok() { (a, b) } else { (b, a) };
    let mut h = g.clone();
    h.remove_edge(u, v).expect("cut edge");
    let mut terminals = Vec::new();
    let mut demands = Vec::new();
    for (i, (t, d)) in inst.sets().enumerate() {
        if crossing.contains(&i) {
            let (mut inside, mut outside): (Vec<Vertex>, Vec<Vertex>) =
                t.iter().partition(|&&w| y.binary_search(&w).is_ok());
            inside.push(u);
            outside.push(v);
            terminals.extend([inside, outside]);
            demands.extend([d, d]);
        } else {
            terminals.push(t.to_vec());
            demands.push(d);
        }
    }
    let out = GstpInstance::new(h, terminals, demands).expect("same vertex set");
    Ok((out, tcd.clone()))
}

/// Adds two fresh vertices to every bag and joins them to those of each thin
/// non-simple child, then pads the root with isolated vertices up to
/// `w + 4 + max(0, max Δ_s)`. Returns the new instance, the decomposition
/// and that target width.
pub fn make_simple(
    inst: &GstpInstance,
    tcd: &TreeCutDecomposition,
) -> Result<(GstpInstance, TreeCutDecomposition, usize), TcdError> {
    let g = inst.graph();
    if let Some(v) = nice_violations(tcd, g).into_iter().next() {
        return Err(TcdError::NotNice(v));
    }
    let w = width(tcd, g);
    let ch = tcd.children();
    let non_simple: Vec<Vec<usize>> = (0..tcd.len())
        .map(|s| {
            ch[s].iter().copied().filter(|&r| is_thin(tcd, g, r) && simple_failure(inst, tcd, r).is_some()).collect()
        })
        .collect();
    let delta = (0..tcd.len())
        .map(|s| (non_simple[s].len() + bold_children(tcd, g, s).len() + tcd.bags[s].len()) as isize - w as isize - 1)
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let target = w + 4 + delta;

    let n = g.n();
    let pair = |s: usize| [n + 2 * s, n + 2 * s + 1];
    let mut h = Graph::new(n + 2 * tcd.len());
    for (e, _) in g.edges() {
        h.add_edge(e.0, e.1).expect("copy");
    }
    let mut out = tcd.clone();
    for (s, rs) in non_simple.iter().enumerate() {
        out.bags[s].extend(pair(s));
        for &r in rs {
            for a in pair(s) {
                for b in pair(r) {
                    h.add_edge(a, b).expect("fresh vertices");
                }
            }
        }
    }
    let root_center = three_center(&torso(&out, &h, out.root)).size();
    for _ in root_center..target {
        let v = h.add_vertex();
        out.bags[out.root].push(v);
    }
    let out = out.prune_empty_leaves();
    let inst = inst.with_graph(h).expect("terminals unchanged");
    Ok((inst, out, target))
}

/// The three sub-instances around an eligible thin node `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinNodeSubinstances {
    pub node: usize,
    /// `Y_s`, sorted; sub-instance vertex `i` is `inside[i]`.
    pub inside: Vec<Vertex>,
    /// The two cut edges `(u, v)` and `(x, y)`, first endpoint inside.
    pub boundary: [(Vertex, Vertex); 2],
    /// Indices of the terminal sets inside `Y_s`.
    pub contained: Vec<usize>,
    /// `G[Y_s]` with the contained sets plus one extra demand on `{u, x}`.
    pub supply: GstpInstance,
    /// `G[Y_s]` with the contained sets.
    pub independent: GstpInstance,
    /// `G` with the outside contracted, with the contained sets.
    pub demand: GstpInstance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThinRule {
    Supply,
    Independent,
    Demand,
}

impl fmt::Display for ThinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThinRule::Supply => "supply",
            ThinRule::Independent => "independent",
            ThinRule::Demand => "demand",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinReduction {
    pub rule: ThinRule,
    pub instance: GstpInstance,
    pub tcd: TreeCutDecomposition,
}

pub type Subsolver<'a> = dyn FnMut(&GstpInstance) -> Result<bool, String> + 'a;

/// Non-root node with adhesion 2, no crossing terminal set and `|Y_s| >= 2`.
pub fn is_thin_eligible(inst: &GstpInstance, tcd: &TreeCutDecomposition, s: usize) -> bool {
    s != tcd.root && adhesion(tcd, inst.graph(), s) == 2 && tcd.y(s).len() >= 2 && cross_link(inst, tcd, s).is_empty()
}

/// Merges `set` into one vertex. A merged vertex whose two edges both go to
/// one neighbour serves no tree and is dropped.
fn contract_side(g: &Graph, set: &[Vertex]) -> (Graph, VertexMap) {
    let c = g.contract(set, true).expect("nonempty side");
    let nbrs = c.graph.neighbors(c.rep);
    if nbrs.len() == 1 && c.graph.multiplicity(c.rep, nbrs[0]) == 2 {
        let (h, drop) = c.graph.remove_vertices(&[c.rep]);
        let map = c.map.iter().map(|m| m.and_then(|x| drop[x])).collect();
        (h.simplify(), map)
    } else {
        (c.graph.simplify(), c.map)
    }
}

fn restricted(
    inst: &GstpInstance,
    h: Graph,
    map: &VertexMap,
    keep: &[usize],
    extra: &[(Vec<Vertex>, usize)],
) -> GstpInstance {
    let mut terminals: Vec<Vec<Vertex>> = Vec::new();
    let mut demands = Vec::new();
    for &i in keep {
        terminals.push(inst.terminals()[i].iter().filter_map(|&v| map[v]).collect());
        demands.push(inst.demands()[i]);
    }
    for (t, d) in extra {
        terminals.push(t.iter().filter_map(|&v| map[v]).collect());
        demands.push(*d);
    }
    GstpInstance::new(h, terminals, demands).expect("sets mapped into the new graph")
}

pub fn thin_subinstances(
    inst: &GstpInstance,
    tcd: &TreeCutDecomposition,
    s: usize,
) -> Result<ThinNodeSubinstances, TcdError> {
    if !is_thin_eligible(inst, tcd, s) {
        return Err(TcdError::Precondition(format!(
            "node {s} needs adhesion 2, no crossing terminal set and at least two vertices below it"
        )));
    }
    let g = inst.graph();
    let inside = tcd.y(s);
    let is_in = |v: Vertex| inside.binary_search(&v).is_ok();
    let cut: Vec<(Vertex, Vertex)> =
        g.cut_edges(&inside).into_iter().map(|((a, b), _)| if is_in(a) { (a, b) } else { (b, a) }).collect();
    let boundary = [cut[0], cut[1]];
    let contained: Vec<usize> =
        (0..inst.terminal_count()).filter(|&i| inst.terminals()[i].iter().all(|&v| is_in(v))).collect();

    let (gy, ymap) = g.induced(&inside);
    let ux = vec![boundary[0].0, boundary[1].0];
    let supply = restricted(inst, gy.clone(), &ymap, &contained, &[(ux, 1)]);
    let independent = restricted(inst, gy, &ymap, &contained, &[]);
    let outside: Vec<Vertex> = (0..g.n()).filter(|&v| !is_in(v)).collect();
    let (gz, zmap) = contract_side(g, &outside);
    let demand = restricted(inst, gz, &zmap, &contained, &[]);
    Ok(ThinNodeSubinstances { node: s, inside, boundary, contained, supply, independent, demand })
}

/// Applies the first applicable thin-node rule, deciding the sub-instances with `subsolver`.
pub fn apply_thin_reduction(
    inst: &GstpInstance,
    tcd: &TreeCutDecomposition,
    s: usize,
    subsolver: &mut Subsolver<'_>,
) -> Result<Reduced<ThinReduction>, TcdError> {
    let sub = thin_subinstances(inst, tcd, s)?;
    let g = inst.graph();
    let others: Vec<usize> = (0..inst.terminal_count()).filter(|i| !sub.contained.contains(i)).collect();
    let below = tcd.subtree(s);
    let mut decide = |x: &GstpInstance| subsolver(x).map_err(TcdError::Subsolver);

    if decide(&sub.supply)? {
        let (h, map) = contract_side(g, &sub.inside);
        let mut alive = vec![true; tcd.len()];
        for &t in &below[1..] {
            alive[t] = false;
        }
        let mut shrunk = tcd.clone();
        shrunk.bags[s] = sub.inside.clone();
        let out = shrunk.keep_nodes(&alive).remap(&map).prune_empty_leaves();
        let instance = restricted(inst, h, &map, &others, &[]);
        return Ok(Reduced::Instance(ThinReduction { rule: ThinRule::Supply, instance, tcd: out }));
    }
    let (rule, extra) = if decide(&sub.independent)? {
        (ThinRule::Independent, vec![])
    } else if decide(&sub.demand)? {
        let [(_, v), (_, y)] = sub.boundary;
        (ThinRule::Demand, if v != y { vec![(vec![v, y], 1)] } else { vec![] })
    } else {
        return Ok(Reduced::TriviallyNegative);
    };
    let (h, map) = g.remove_vertices(&sub.inside);
    let mut alive = vec![true; tcd.len()];
    for &t in &below {
        alive[t] = false;
    }
    let out = tcd.keep_nodes(&alive).remap(&map).prune_empty_leaves();
    let instance = restricted(inst, h, &map, &others, &extra);
    Ok(Reduced::Instance(ThinReduction { rule, instance, tcd: out }))
}

/// Applies thin-node rules until no node is eligible. Picks the deepest
/// eligible node and re-roots at it when its subtree holds at least half of
/// the vertices, so the rule runs on the smaller side.
pub fn reduce_thin_nodes(
    inst: &GstpInstance,
    tcd: &TreeCutDecomposition,
    subsolver: &mut Subsolver<'_>,
) -> Result<Reduced<(GstpInstance, TreeCutDecomposition, Vec<ThinRule>)>, TcdError> {
    let mut inst = inst.clone();
    let mut tcd = tcd.clone();
    let mut applied = Vec::new();
    loop {
        let Some(s) = (0..tcd.len())
            .filter(|&s| is_thin_eligible(&inst, &tcd, s))
            .max_by_key(|&s| (tcd.depth(s), std::cmp::Reverse(s)))
        else {
            return Ok(Reduced::Instance((inst, tcd, applied)));
        };
        let n = inst.graph().n();
        let ys = tcd.y(s).len();
        let (node, view) = match tcd.parent[s] {
            Some(p) if 2 * ys >= n && n - ys >= 2 => (p, tcd.rerooted(s)),
            _ => (s, tcd.clone()),
        };
        match apply_thin_reduction(&inst, &view, node, subsolver)? {
            Reduced::Instance(r) => {
                applied.push(r.rule);
                inst = r.instance;
                tcd = r.tcd;
            }
            Reduced::TriviallyNegative => return Ok(Reduced::TriviallyNegative),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::families::{cycle, path};
    use crate::instance::{rr_degree_negative, rr_sensible_terminals};
    use crate::oracle::{decide, solve_exact, OracleConfig};
    use crate::treecut::families::thin_node_instance;
    use crate::treecut::tests::random_tcd;
    use crate::treecut::{is_simple, simple_violations};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn oracle(x: &GstpInstance) -> Result<bool, String> {
        solve_exact(x, &OracleConfig::default()).decision().ok_or_else(|| "oracle budget".to_string())
    }

    fn verdict(r: &Reduced<GstpInstance>) -> bool {
        match r {
            Reduced::Instance(i) => decide(i),
            Reduced::TriviallyNegative => false,
        }
    }

    #[test]
    fn bridge_with_crossing_set_splits_it() {
        // 0 - 1 - 2 - 3 with {2, 3} below the bridge 1-2.
        let inst = GstpInstance::new(path(4), vec![vec![0, 3]], vec![1]).unwrap();
        let tcd = TreeCutDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![None, Some(0)], 0);
        let (out, _) = apply_rr_adh1(&inst, &tcd, 1).unwrap();
        assert!(!out.graph().has_edge(1, 2));
        assert_eq!(out.terminals(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(out.demands(), &[1, 1]);
        assert!(decide(&out));
    }

    #[test]
    fn bridge_without_crossing_set_only_loses_the_edge() {
        let inst = GstpInstance::new(path(4), vec![vec![0, 1]], vec![1]).unwrap();
        let tcd = TreeCutDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![None, Some(0)], 0);
        let (out, _) = apply_rr_adh1(&inst, &tcd, 1).unwrap();
        assert_eq!(out.graph().edge_count(), 2);
        assert_eq!(out.terminals(), inst.terminals());
        assert!(apply_rr_adh1(&inst, &tcd, 0).is_err());
    }

    #[test]
    fn crossing_demand_over_adhesion_rejects() {
        // Cycle 0..4, {2, 3} below: adhesion 2, crossing demand 3.
        let inst = GstpInstance::new(cycle(4), vec![vec![0, 2]], vec![3]).unwrap();
        let tcd = TreeCutDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![None, Some(0)], 0);
        assert_eq!(apply_rr_crosslink(&inst, &tcd), Reduced::TriviallyNegative);
        let two = GstpInstance::new(cycle(4), vec![vec![0, 2]], vec![2]).unwrap();
        assert_eq!(apply_rr_crosslink(&two, &tcd), Reduced::Instance(two.clone()));
    }

    #[test]
    fn components_split_and_reject() {
        let mut g = path(2).disjoint_union(&path(3));
        g.add_vertex();
        let inst = GstpInstance::new(g.clone(), vec![vec![2, 4], vec![0, 1]], vec![1, 1]).unwrap();
        let Reduced::Instance(parts) = apply_rr_components(&inst) else { panic!() };
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[1].terminals(), &[vec![0, 2]]);
        let bad = GstpInstance::new(g, vec![vec![0, 2]], vec![1]).unwrap();
        assert_eq!(apply_rr_components(&bad), Reduced::TriviallyNegative);
    }

    #[test]
    fn simple_without_thin_nodes_adds_scaffolding() {
        let inst = GstpInstance::new(cycle(5), vec![vec![0, 2]], vec![1]).unwrap();
        let tcd = TreeCutDecomposition::trivial(inst.graph());
        let (out, c, target) = make_simple(&inst, &tcd).unwrap();
        assert_eq!(c.validate(out.graph()), Ok(()));
        assert!(is_simple(&out, &c));
        assert_eq!(width(&c, out.graph()), target);
        assert_eq!(decide(&out), decide(&inst));
    }

    #[test]
    fn non_simple_thin_child_turns_bold() {
        // Cycle 0..5 with {3, 4} in a thin child holding two vertices.
        let inst = GstpInstance::new(cycle(6), vec![vec![0, 1]], vec![1]).unwrap();
        let tcd = TreeCutDecomposition::new(vec![vec![0, 1, 2, 5], vec![3, 4]], vec![None, Some(0)], 0);
        assert!(!simple_violations(&inst, &tcd).is_empty());
        let (out, c, target) = make_simple(&inst, &tcd).unwrap();
        assert_eq!(adhesion(&c, out.graph(), 1), 6);
        assert!(is_simple(&out, &c), "{:?}", simple_violations(&out, &c));
        assert_eq!(width(&c, out.graph()), target);
        assert_eq!(decide(&out), decide(&inst));
    }

    #[test]
    fn thin_rules_on_a_ladder() {
        // Square 0-1-3-2 joined by 1-4 and 3-5 to square 4-5-7-6.
        let mut g = Graph::new(8);
        for (u, v) in [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (3, 5), (4, 5), (4, 6), (5, 7), (6, 7)] {
            g.add_edge(u, v).unwrap();
        }
        let tcd = TreeCutDecomposition::new(vec![vec![4, 5, 6, 7], vec![0, 1, 2, 3]], vec![None, Some(0)], 0);
        let cfg = OracleConfig { demand_budget: 6, ..OracleConfig::default() };
        let mut solve = |x: &GstpInstance| solve_exact(x, &cfg).decision().ok_or_else(|| "oracle budget".to_string());
        // {1, 3} with demand 1 leaves room for supply.
        let inst = GstpInstance::new(g.clone(), vec![vec![1, 3], vec![6, 7]], vec![1, 2]).unwrap();
        let Reduced::Instance(r) = apply_thin_reduction(&inst, &tcd, 1, &mut solve).unwrap() else { panic!() };
        assert_eq!(r.rule, ThinRule::Supply);
        assert_eq!(r.instance.graph().n(), 5);
        assert_eq!(decide(&r.instance), decide(&inst));
        // Demand 2 fits inside but leaves no supply.
        let inst = GstpInstance::new(g.clone(), vec![vec![1, 3]], vec![2]).unwrap();
        let Reduced::Instance(r) = apply_thin_reduction(&inst, &tcd, 1, &mut solve).unwrap() else { panic!() };
        assert_eq!(r.rule, ThinRule::Independent);
        assert_eq!(r.instance.graph().n(), 4);
        // Demand 3 needs a detour through the outside.
        let inst = GstpInstance::new(g.clone(), vec![vec![1, 3]], vec![3]).unwrap();
        let Reduced::Instance(r) = apply_thin_reduction(&inst, &tcd, 1, &mut solve).unwrap() else { panic!() };
        assert_eq!(r.rule, ThinRule::Demand);
        assert_eq!(r.instance.terminals(), &[vec![0, 1]]);
        assert!(decide(&r.instance));
        // Demand 4 cannot be met at all.
        let inst = GstpInstance::new(g, vec![vec![1, 3]], vec![4]).unwrap();
        assert!(matches!(apply_thin_reduction(&inst, &tcd, 1, &mut solve), Ok(Reduced::TriviallyNegative)));
    }

    #[test]
    fn thin_preconditions() {
        let inst = GstpInstance::new(cycle(4), vec![vec![0, 2]], vec![1]).unwrap();
        let tcd = TreeCutDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![None, Some(0)], 0);
        assert!(thin_subinstances(&inst, &tcd, 1).is_err());
        assert!(thin_subinstances(&inst, &tcd, 0).is_err());
    }

    #[test]
    fn thin_reduction_preserves_decisions() {
        let mut rules = [0usize; 3];
        for seed in 0..150 {
            let (inst, tcd, s) = thin_node_instance(seed);
            let expected = decide(&inst);
            let one = apply_thin_reduction(&inst, &tcd, s, &mut oracle).unwrap();
            let got = match &one {
                Reduced::Instance(r) => {
                    assert_eq!(r.tcd.validate(r.instance.graph()), Ok(()), "seed {seed}");
                    rules[r.rule as usize] += 1;
                    decide(&r.instance)
                }
                Reduced::TriviallyNegative => false,
            };
            assert_eq!(got, expected, "seed {seed}: {inst:?}");
            let all = reduce_thin_nodes(&inst, &tcd, &mut oracle).unwrap();
            let got = match all {
                Reduced::Instance((i, t, _)) => {
                    assert_eq!(t.validate(i.graph()), Ok(()));
                    decide(&i)
                }
                Reduced::TriviallyNegative => false,
            };
            assert_eq!(got, expected, "seed {seed}: {inst:?}");
        }
        assert!(rules.iter().all(|&r| r > 0), "{rules:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn crosslink_and_adh1_preserve_decisions(seed in any::<u64>()) {
            let (g, tcd) = random_tcd(seed, 7, 9, 4);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let sets = (0..rng.gen_range(1..=2))
                .map(|_| (0..rng.gen_range(2..=3)).map(|_| rng.gen_range(0..7)).collect::<Vec<_>>())
                .collect::<Vec<_>>();
            let demands = sets.iter().map(|_| rng.gen_range(1..=2)).collect();
            let inst = rr_sensible_terminals(&GstpInstance::new(g, sets, demands).unwrap());
            let expected = decide(&inst);
            let r = apply_rr_crosslink(&inst, &tcd);
            prop_assert_eq!(verdict(&r), expected);
            if let Reduced::Instance(inst) = r {
                for s in 0..tcd.len() {
                    if let Ok((out, _)) = apply_rr_adh1(&inst, &tcd, s) {
                        prop_assert_eq!(decide(&out), expected);
                    }
                }
            }
            let deg = rr_degree_negative(&inst);
            prop_assert_eq!(verdict(&deg), expected);
        }
    }
}
