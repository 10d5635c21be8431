//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if a criterion fails other than the known-false windmill
//! vertex-cover expectation.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gstp::bench::{bench_instance, fit_scaling, scaling_report, scaling_sweep};
use gstp::fnilp::{choose_nice_modulator, decide_by_fracture, FnConfig};
use gstp::fracture::{fracture_deletion, FractureQuery};
use gstp::graph::Vertex;
use gstp::instance::families::{
    hub_instance, path, random_instance, star_with_spoke_terminals, triangles, triples, windmill, RandomSpec,
};
use gstp::instance::params::{parameter, Param};
use gstp::instance::{augment, rr_degree_negative, rr_sensible_terminals, AugmentMode, Reduced};
use gstp::oracle::{solve_exact, OracleConfig};
use gstp::treecut::families::{thin_node_instance, three_paths_decomposition, unlimited_bold};
use gstp::treecut::{
    apply_rr_adh1, apply_rr_components, apply_rr_crosslink, apply_thin_reduction, bold_children, demand_cross_link,
    friendly_violations, make_friendly, slim_width, width, TreeCutDecomposition,
};
use gstp::twdp::{decide_tw, TwConfig};
use gstp::{Graph, GstpInstance};

struct Outcome {
    id: &'static str,
    pass: bool,
    known_false: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, known_false: false, detail }
}

fn oracle(inst: &GstpInstance) -> bool {
    let cfg = OracleConfig { demand_budget: 8, ..OracleConfig::default() };
    solve_exact(inst, &cfg).decision().expect("instance within oracle budget")
}

fn verdict(r: &Reduced<GstpInstance>) -> bool {
    match r {
        Reduced::Instance(i) => oracle(i),
        Reduced::TriviallyNegative => false,
    }
}

fn twdp_vs_oracle() -> Outcome {
    let start = Instant::now();
    let total = 500;
    let agree = (0..total)
        .filter(|&i| {
            let inst = bench_instance(2024, i);
            decide_tw(&inst, None, &TwConfig::default()).expect("within caps").feasible == oracle(&inst)
        })
        .count();
    let secs = start.elapsed().as_secs_f64();
    outcome("1", agree == total && secs < 60.0, format!("twdp vs oracle {agree}/{total} agree in {secs:.1}s"))
}

fn fracture_vs_oracle() -> Outcome {
    let start = Instant::now();
    let cfg = FnConfig { max_modulator: 2, max_terminals_in_s: 1 };
    let (mut total, mut agree, mut via_ilp, mut seed) = (0, 0, 0, 0u64);
    while total < 200 && seed < 5000 {
        let inst = hub_instance(1 + seed as usize % 2, 2 + seed as usize % 3, seed);
        seed += 1;
        let Some(reduced) = rr_degree_negative(&rr_sensible_terminals(&inst)).instance() else { continue };
        if reduced.terminal_count() == 0 || choose_nice_modulator(&reduced, &cfg).is_err() {
            continue;
        }
        total += 1;
        let r = decide_by_fracture(&inst);
        via_ilp += usize::from(r.as_ref().is_ok_and(|r| r.variables > 0));
        if r.map(|r| r.feasible) == Ok(oracle(&inst)) {
            agree += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "2",
        total >= 200 && agree == total && secs < 600.0,
        format!("fnilp vs oracle {agree}/{total} agree ({via_ilp} via the ILP) in {secs:.1}s"),
    )
}

/// Largest component of `g - del` by bitmask flood fill.
fn largest_without(adj: &[u32], n: usize, del: u32) -> u32 {
    let mut seen = del;
    let mut best = 0;
    for s in 0..n {
        if seen >> s & 1 == 1 {
            continue;
        }
        let mut comp = 1u32 << s;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = adj[v] & !comp & !del;
            comp |= next;
            frontier |= next;
        }
        seen |= comp;
        best = best.max(comp.count_ones());
    }
    best
}

fn exhaustive_deletion(g: &Graph, k: usize, d: usize) -> bool {
    let n = g.n();
    let mut adj = vec![0u32; n];
    for (u, v) in g.edge_list() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    (0u32..1 << n).any(|s| s.count_ones() as usize == d && largest_without(&adj, n, s) as usize <= k)
}

fn fracture_fixtures() -> Outcome {
    let p5 = path(5);
    let single = fracture_deletion(&p5, FractureQuery { k: 1, d: 1 }).set().is_none();
    let two = p5.disjoint_union(&p5);
    let centers = fracture_deletion(&two, FractureQuery { k: 2, d: 2 }).set().map(<[Vertex]>::to_vec);
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            graphs.push(Graph::from_edges(n, &edges));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..600 {
        let n = rng.gen_range(6..=8);
        let m = rng.gen_range(0..=n * (n - 1) / 2);
        let spec = RandomSpec { n, m, sets: 0, max_total_demand: 0, max_set_size: 2 };
        graphs.push(random_instance(&spec, rng.gen()).graph().clone());
    }
    let mut queries = 0;
    let mut wrong = 0;
    for g in &graphs {
        for k in 0..=g.n() {
            for d in 0..=g.n() {
                queries += 1;
                let got = fracture_deletion(g, FractureQuery { k, d }).set().is_some();
                wrong += usize::from(got != exhaustive_deletion(g, k, d));
            }
        }
    }
    let pass = single && centers == Some(vec![2, 7]) && wrong == 0;
    outcome(
        "3",
        pass,
        format!(
            "P5 (1,1) none: {single}; 2xP5 (2,2) set {centers:?}; {} graphs, {queries} queries, {wrong} mismatches",
            graphs.len()
        ),
    )
}

/// Minimum vertex cover by subset enumeration.
fn exhaustive_vc(g: &Graph) -> usize {
    let edges = g.edge_list();
    (0u32..1 << g.n())
        .filter(|s| edges.iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
        .map(u32::count_ones)
        .min()
        .unwrap_or(0) as usize
}

fn family_fixtures() -> Vec<Outcome> {
    let range = 2..=6usize;
    let vc: Vec<usize> = range.clone().map(|i| parameter(&windmill(i), Param::VertexCover).unwrap()).collect();
    let exact: Vec<usize> = range.clone().map(|i| exhaustive_vc(&windmill(i))).collect();
    let expected: Vec<usize> = range.clone().collect();
    let mut windmill_line = outcome(
        "4a",
        vc == expected,
        format!("vc(windmill W_i) for i=2..6: expected {expected:?}, computed {vc:?}, subset enumeration {exact:?}"),
    );
    windmill_line.known_false = vc == exact && exact.iter().zip(&expected).all(|(a, b)| *a == b + 1);

    let star: Vec<usize> = range
        .clone()
        .map(|i| {
            parameter(&augment(&star_with_spoke_terminals(i), AugmentMode::Clique).graph, Param::VertexCover).unwrap()
        })
        .collect();
    let fen: Vec<usize> = range.clone().map(|i| parameter(&triangles(i), Param::FeedbackEdgeNumber).unwrap()).collect();
    let aug: Vec<usize> = range
        .clone()
        .map(|i| parameter(&augment(&triples(i), AugmentMode::Vertex).graph, Param::FeedbackEdgeNumber).unwrap())
        .collect();
    vec![
        windmill_line,
        outcome("4b", star.iter().all(|&x| x == 1), format!("vc(clique-augmented star) for i=2..6: {star:?}")),
        outcome("4c", fen == expected, format!("fen(i disjoint triangles) for i=2..6: {fen:?}")),
        outcome("4d", aug.iter().all(|&x| x == 0), format!("fen(vertex-augmented triples) for i=2..6: {aug:?}")),
    ]
}

fn unlimited_bold_fixture() -> Outcome {
    let mut bad = Vec::new();
    for l in 3..=20 {
        let f = unlimited_bold(l);
        let before = width(&f.tcd, &f.graph) == 5 && bold_children(&f.tcd, &f.graph, f.hub).len() == l + 2;
        let out = make_friendly(&f.tcd, &f.graph).expect("nice input");
        let bounded = (0..out.len()).all(|s| bold_children(&out, &f.graph, s).len() + out.bags[s].len() <= 7);
        let after = bounded && friendly_violations(&out, &f.graph).is_empty() && width(&out, &f.graph) <= 5;
        if !(before && after) {
            bad.push(l);
        }
    }
    outcome("5", bad.is_empty(), format!("unlimited bold children, l=3..20, failing l: {bad:?}"))
}

fn three_paths_fixture() -> Outcome {
    let widths: Vec<(usize, usize)> = (1..=3usize)
        .map(|i| {
            let (_, aug, tcd) = three_paths_decomposition(4 * i.pow(4));
            tcd.validate(&aug.graph).expect("valid decomposition");
            (width(&tcd, &aug.graph), slim_width(&tcd, &aug.graph))
        })
        .collect();
    let pass = widths.iter().all(|&(w, s)| w <= 4 && s <= 4);
    outcome("6", pass, format!("augmented 3-path family (width, slim width) for i=1..3: {widths:?}"))
}

fn thin_rules() -> Outcome {
    let mut solve =
        |x: &GstpInstance| solve_exact(x, &OracleConfig::default()).decision().ok_or_else(|| "budget".to_string());
    let (mut total, mut agree) = (0, 0);
    let mut rules = std::collections::BTreeMap::new();
    for seed in 0..150 {
        let (inst, tcd, s) = thin_node_instance(seed);
        let r = apply_thin_reduction(&inst, &tcd, s, &mut solve).expect("eligible thin node");
        let got = match &r {
            Reduced::Instance(red) => {
                *rules.entry(red.rule.to_string()).or_insert(0) += 1;
                oracle(&red.instance)
            }
            Reduced::TriviallyNegative => {
                *rules.entry("negative".to_string()).or_insert(0) += 1;
                false
            }
        };
        total += 1;
        agree += usize::from(got == oracle(&inst));
    }
    outcome("7", total >= 100 && agree == total, format!("thin-node rules {agree}/{total} agree, outcomes {rules:?}"))
}

fn dp_scaling() -> Outcome {
    let points = scaling_sweep(&[1, 2, 3], &[1, 2, 3], 8, 2);
    let fit = fit_scaling(&points);
    for line in scaling_report(&points, &fit).lines() {
        println!("    {line}");
    }
    outcome("8", fit.holds(), format!("DP table sizes within 2^(c*sumD*w*log2(w+2)), c = {:.3}", fit.c))
}

fn random_small(seed: u64, rng: &mut ChaCha8Rng) -> GstpInstance {
    let n = rng.gen_range(4..=7);
    let m = rng.gen_range(n - 1..=10.min(n * (n - 1) / 2));
    let spec = RandomSpec { n, m, sets: 2, max_total_demand: 3, max_set_size: 3 };
    random_instance(&spec, seed)
}

/// Random connected graph on `lo..lo+len` added to `g`.
fn connected_side(g: &mut Graph, lo: usize, len: usize, rng: &mut ChaCha8Rng) {
    for v in lo + 1..lo + len {
        g.add_edge(rng.gen_range(lo..v), v).unwrap();
    }
    for _ in 0..len {
        let (a, b) = (rng.gen_range(lo..lo + len), rng.gen_range(lo..lo + len));
        if a != b && !g.has_edge(a, b) {
            g.add_edge(a, b).unwrap();
        }
    }
}

fn reduction_rules() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let per_rule = 100;

    let mut rr1 = 0;
    for seed in 0..per_rule {
        let base = random_small(seed, &mut rng);
        let mut sets = base.terminals().to_vec();
        let mut demands = base.demands().to_vec();
        sets.push(vec![rng.gen_range(0..base.graph().n())]);
        demands.push(rng.gen_range(1..=3));
        let inst = GstpInstance::new(base.graph().clone(), sets, demands).unwrap();
        rr1 += usize::from(oracle(&rr_sensible_terminals(&inst)) == oracle(&inst));
    }

    let (mut rr2, mut rr2_fired) = (0, 0);
    for _ in 0..per_rule {
        let n = rng.gen_range(4..=7);
        let mut g = Graph::new(n);
        connected_side(&mut g, 0, n, &mut rng);
        let low = (0..n).min_by_key(|&v| g.degree(v)).unwrap();
        let other = (low + 1) % n;
        let d = g.degree(low) + rng.gen_range(0..=1);
        let inst = GstpInstance::new(g, vec![vec![low, other]], vec![d.clamp(1, 3)]).unwrap();
        let r = rr_degree_negative(&inst);
        rr2_fired += usize::from(matches!(r, Reduced::TriviallyNegative));
        rr2 += usize::from(verdict(&r) == oracle(&inst));
    }

    let (mut rr3, mut rr3_count) = (0, 0);
    while rr3_count < per_rule {
        let (na, nb) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let mut g = Graph::new(na + nb);
        connected_side(&mut g, 0, na, &mut rng);
        connected_side(&mut g, na, nb, &mut rng);
        let pick =
            |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { rng.gen_range(0..na) } else { rng.gen_range(na..na + nb) };
        let sets: Vec<Vec<usize>> = (0..2).map(|_| vec![pick(&mut rng), pick(&mut rng)]).collect();
        let Ok(inst) = GstpInstance::new(g, sets, vec![1, rng.gen_range(1..=2)]) else { continue };
        rr3_count += 1;
        let got = match apply_rr_components(&inst) {
            Reduced::Instance(parts) => parts.iter().all(oracle),
            Reduced::TriviallyNegative => false,
        };
        rr3 += usize::from(got == oracle(&inst));
    }

    let mut rr4 = 0;
    let mut rr4_count = 0;
    while rr4_count < per_rule {
        let seed = rng.gen();
        let inst = random_small(seed, &mut rng);
        let n = inst.graph().n();
        let cut = rng.gen_range(1..n);
        let tcd = TreeCutDecomposition::new(vec![(cut..n).collect(), (0..cut).collect()], vec![None, Some(0)], 0);
        if demand_cross_link(&inst, &tcd, 1) == 0 {
            continue;
        }
        rr4_count += 1;
        rr4 += usize::from(verdict(&apply_rr_crosslink(&inst, &tcd)) == oracle(&inst));
    }

    let mut rr5 = 0;
    for _ in 0..per_rule {
        let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let mut g = Graph::new(na + nb);
        connected_side(&mut g, 0, na, &mut rng);
        connected_side(&mut g, na, nb, &mut rng);
        g.add_edge(rng.gen_range(0..na), rng.gen_range(na..na + nb)).unwrap();
        let n = na + nb;
        let sets: Vec<Vec<usize>> =
            (0..2).map(|_| vec![rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)]).collect();
        let inst = GstpInstance::new(g, sets, vec![1, 1]).unwrap();
        let tcd = TreeCutDecomposition::new(vec![(na..n).collect(), (0..na).collect()], vec![None, Some(0)], 0);
        let got = match apply_rr_crosslink(&inst, &tcd) {
            Reduced::TriviallyNegative => false,
            Reduced::Instance(i) => oracle(&apply_rr_adh1(&i, &tcd, 1).expect("adhesion one").0),
        };
        rr5 += usize::from(got == oracle(&inst));
    }

    let line = |id, name: &str, ok: usize| {
        outcome(id, ok == per_rule as usize, format!("{name}: {ok}/{per_rule} preserve the decision"))
    };
    vec![
        line("9.1", "sensible terminal sets", rr1),
        outcome(
            "9.2",
            rr2 == per_rule as usize,
            format!("degree-negative: {rr2}/{per_rule} preserve the decision ({rr2_fired} rejected)"),
        ),
        line("9.3", "connected components", rr3),
        line("9.4", "cross-link demand", rr4),
        line("9.5", "adhesion one", rr5),
    ]
}

fn main() {
    let mut results = vec![twdp_vs_oracle(), fracture_vs_oracle(), fracture_fixtures()];
    results.extend(family_fixtures());
    results.extend([unlimited_bold_fixture(), three_paths_fixture(), thin_rules(), dp_scaling()]);
    results.extend(reduction_rules());
    let mut unexpected = 0;
    for r in &results {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        let note = if !r.pass && r.known_false { " [known-false expectation: exact value is i+1]" } else { "" };
        println!("{tag} {} {}{note}", r.id, r.detail);
        unexpected += usize::from(!r.pass && !r.known_false);
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("acceptance: {} pass, {failed} fail, {unexpected} unexpected", results.len() - failed);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
