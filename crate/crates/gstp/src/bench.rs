//! Seeded cross-validation of the solvers and the DP table-size sweep.
//!
//! Output is a pure function of the configuration: instances are derived
//! from `(seed, index)` and results are aggregated in index order.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::fnilp::decide_by_fracture;
use crate::graph::{Graph, Vertex};
use crate::instance::families::{random_instance, RandomSpec};
use crate::instance::GstpInstance;
use crate::oracle::{solve_exact, OracleConfig};
use crate::twdp::{decide_tw, Branch, TwConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub count: usize,
    pub seed: u64,
    pub algos: Vec<Branch>,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { count: 100, seed: 0, algos: vec![Branch::Oracle, Branch::TwDp, Branch::FnIlp], jobs: 1 }
    }
}

/// Instance `index` of a bench run: at most 8 vertices, 12 edges, two
/// terminal sets and total demand 3.
pub fn bench_instance(seed: u64, index: usize) -> GstpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let n = rng.gen_range(3..=8);
    let m = rng.gen_range(n - 1..=12.min(n * (n - 1) / 2));
    let spec = RandomSpec { n, m, sets: rng.gen_range(1..=2), max_total_demand: 3, max_set_size: 3 };
    random_instance(&spec, rng.gen())
}

/// Decision of one solver at default caps, `None` when it declines.
pub fn run_algo(algo: Branch, inst: &GstpInstance) -> Option<bool> {
    match algo {
        Branch::Oracle => solve_exact(inst, &OracleConfig::default()).decision(),
        Branch::TwDp => decide_tw(inst, None, &TwConfig::default()).ok().map(|o| o.feasible),
        Branch::FnIlp => decide_by_fracture(inst).ok().map(|r| r.feasible),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRow {
    pub a: Branch,
    pub b: Branch,
    /// Instances both solvers decided.
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub count: usize,
    pub seed: u64,
    pub rows: Vec<PairRow>,
    /// Instances each solver declined.
    pub declined: BTreeMap<String, usize>,
    /// `(index, a, b)` for every disagreement.
    pub conflicts: Vec<(usize, Branch, Branch)>,
}

impl BenchReport {
    pub fn disagreements(&self) -> usize {
        self.rows.iter().map(|r| r.disagreements).sum()
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, rayon::ThreadPoolBuildError> {
    let algos: Vec<Branch> = cfg.algos.iter().copied().unique().collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let results: Vec<Vec<Option<bool>>> = pool.install(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let inst = bench_instance(cfg.seed, i);
                algos.iter().map(|&a| run_algo(a, &inst)).collect()
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut conflicts = Vec::new();
    for (x, y) in (0..algos.len()).tuple_combinations() {
        let mut row = PairRow { a: algos[x], b: algos[y], instances: 0, agreements: 0, disagreements: 0 };
        for (i, r) in results.iter().enumerate() {
            if let (Some(p), Some(q)) = (r[x], r[y]) {
                row.instances += 1;
                if p == q {
                    row.agreements += 1;
                } else {
                    row.disagreements += 1;
                    conflicts.push((i, algos[x], algos[y]));
                }
            }
        }
        rows.push(row);
    }
    let declined = algos
        .iter()
        .enumerate()
        .map(|(k, a)| (a.to_string(), results.iter().filter(|r| r[k].is_none()).count()))
        .collect();
    Ok(BenchReport { count: cfg.count, seed: cfg.seed, rows, declined, conflicts })
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instances {} seed {}", self.count, self.seed)?;
        writeln!(f, "{:<16} {:>9} {:>10} {:>13}", "pair", "instances", "agreements", "disagreements")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<16} {:>9} {:>10} {:>13}",
                format!("{}-{}", r.a, r.b),
                r.instances,
                r.agreements,
                r.disagreements
            )?;
        }
        for (a, k) in &self.declined {
            writeln!(f, "declined {a} {k}")?;
        }
        for (i, a, b) in &self.conflicts {
            writeln!(f, "conflict instance {i} {a} {b}")?;
        }
        Ok(())
    }
}

/// Random `k`-tree on `n > k` vertices: a `(k+1)`-clique, then each new
/// vertex joins a random `k`-clique of the graph built so far.
pub fn k_tree(n: usize, k: usize, seed: u64) -> Graph {
    assert!(n > k, "a k-tree needs more than k vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    let mut cliques: Vec<Vec<Vertex>> = (0..=k).combinations(k).collect();
    for (u, v) in (0..=k).tuple_combinations() {
        g.add_edge(u, v).expect("fresh edge");
    }
    for v in k + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &base {
            g.add_edge(u, v).expect("fresh edge");
        }
        for drop in 0..k {
            let mut c: Vec<Vertex> = base.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &u)| u).collect();
            c.push(v);
            cliques.push(c);
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingPoint {
    pub width: usize,
    pub total_demand: usize,
    /// Largest table over the seeds.
    pub max_table: usize,
    /// Sum of all table sizes, largest over the seeds.
    pub total_tuples: usize,
}

impl ScalingPoint {
    /// `ΣD · w · log2(w + 2)`.
    pub fn exponent(&self) -> f64 {
        let w = self.width as f64;
        self.total_demand as f64 * w * (w + 2.0).log2()
    }

    pub fn ratio(&self) -> f64 {
        (self.max_table as f64).log2() / self.exponent()
    }
}

/// `decide_tw` table sizes on `k`-trees with `n` vertices and one terminal
/// set of three vertices whose demand is the total demand.
pub fn scaling_sweep(widths: &[usize], demands: &[usize], n: usize, seeds: u64) -> Vec<ScalingPoint> {
    let mut out = Vec::new();
    for &w in widths {
        for &d in demands {
            let mut p = ScalingPoint { width: w, total_demand: d, max_table: 0, total_tuples: 0 };
            for s in 0..seeds {
                let g = k_tree(n, w, s);
                let inst = GstpInstance::new(g, vec![vec![0, n / 2, n - 1]], vec![d]).expect("valid set");
                let cfg = TwConfig { max_total_demand: d, max_width: w, ..TwConfig::default() };
                let o = decide_tw(&inst, None, &cfg).expect("within caps");
                p.max_table = p.max_table.max(o.stats.max_table);
                p.total_tuples = p.total_tuples.max(o.stats.total_tuples);
            }
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Smallest `c` with `log2(max_table) <= c · exponent` on the fitting points.
    pub c: f64,
    /// Points with exponent at most the median, used for the fit.
    pub fitted: usize,
    /// Held-out points exceeding `2^(c · exponent)`.
    pub exceeding: Vec<(usize, usize)>,
}

impl ScalingFit {
    pub fn holds(&self) -> bool {
        self.exceeding.is_empty()
    }
}

/// Fits `c` on the smaller half of the sweep and checks the larger half
/// stays below the fitted curve.
pub fn fit_scaling(points: &[ScalingPoint]) -> ScalingFit {
    let mut xs: Vec<f64> = points.iter().map(ScalingPoint::exponent).collect();
    xs.sort_by(f64::total_cmp);
    let median = xs[(xs.len() - 1) / 2];
    let (small, large): (Vec<_>, Vec<_>) = points.iter().partition(|p| p.exponent() <= median);
    let c = small.iter().map(|p| p.ratio()).fold(0.0, f64::max);
    let exceeding = large.iter().filter(|p| p.ratio() > c * (1.0 + 1e-9)).map(|p| (p.width, p.total_demand)).collect();
    ScalingFit { c, fitted: small.len(), exceeding }
}

/// The scaling section printed by `bench`.
pub fn scaling_report(points: &[ScalingPoint], fit: &ScalingFit) -> String {
    let mut out = String::from("scaling w sumd max_table total_tuples log2/exponent\n");
    for p in points {
        out += &format!("scaling {} {} {} {} {:.4}\n", p.width, p.total_demand, p.max_table, p.total_tuples, p.ratio());
    }
    out += &format!(
        "scaling fit c {:.4} on {} points, {} above the curve: {}\n",
        fit.c,
        fit.fitted,
        fit.exceeding.len(),
        if fit.holds() { "ok" } else { "grows faster" }
    );
    out
}
