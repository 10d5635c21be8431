//! Named graph families and a seeded random instance generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::instance::{from_stp, GstpInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    Unknown(String),
    #[error("family `{0}` expects {1} parameter(s)")]
    Arity(String, usize),
    #[error("invalid parameters for `{0}`: {1}")]
    Invalid(String, String),
}

/// Either a plain graph or a full instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyOutput {
    Graph(Graph),
    Instance(GstpInstance),
}

pub const FAMILY_NAMES: &[&str] = &[
    "path",
    "cycle",
    "complete",
    "star",
    "star-terminals",
    "windmill",
    "star-spokes",
    "wall",
    "three-paths",
    "triangles",
    "triples",
    "path-leaves",
    "random",
];

/// Builds a family by name. `random` takes `n m sets max_demand` and uses `seed`.
pub fn family(name: &str, params: &[usize], seed: u64) -> Result<FamilyOutput, FamilyError> {
    let arity = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(FamilyError::Arity(name.to_string(), k))
        }
    };
    let positive = |x: usize| {
        if x == 0 {
            Err(FamilyError::Invalid(name.to_string(), "size must be positive".into()))
        } else {
            Ok(x)
        }
    };
    use FamilyOutput::*;
    Ok(match name {
        "path" => {
            arity(1)?;
            Graph(path(positive(params[0])?))
        }
        "cycle" => {
            arity(1)?;
            if params[0] < 3 {
                return Err(FamilyError::Invalid(name.into(), "cycle needs 3 vertices".into()));
            }
            Graph(cycle(params[0]))
        }
        "complete" => {
            arity(1)?;
            Graph(complete(params[0]))
        }
        "star" => {
            arity(1)?;
            Graph(star(params[0]))
        }
        "star-terminals" => {
            arity(1)?;
            Instance(star_with_spoke_terminals(params[0]))
        }
        "windmill" => {
            arity(1)?;
            Graph(windmill(params[0]))
        }
        "star-spokes" => {
            arity(2)?;
            Graph(star_spokes(params[0], positive(params[1])?))
        }
        "wall" => {
            arity(1)?;
            Graph(wall(positive(params[0])?))
        }
        "three-paths" => {
            arity(1)?;
            Instance(three_paths(params[0]))
        }
        "triangles" => {
            arity(1)?;
            Graph(triangles(params[0]))
        }
        "triples" => {
            arity(1)?;
            Instance(triples(params[0]))
        }
        "path-leaves" => {
            arity(1)?;
            Instance(path_with_leaves(positive(params[0])?))
        }
        "random" => {
            arity(4)?;
            let spec = RandomSpec {
                n: params[0],
                m: params[1],
                sets: params[2],
                max_total_demand: params[3],
                max_set_size: 3,
            };
            Instance(random_instance(&spec, seed))
        }
        _ => return Err(FamilyError::Unknown(name.to_string())),
    })
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n - 1));
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Star with center 0 and leaves `1..=i`.
pub fn star(i: usize) -> Graph {
    let edges: Vec<_> = (1..=i).map(|l| (0, l)).collect();
    Graph::from_edges(i + 1, &edges)
}

/// Star with one terminal set `{center, leaf}` per leaf.
pub fn star_with_spoke_terminals(i: usize) -> GstpInstance {
    let terminals = (1..=i).map(|l| vec![0, l]).collect();
    GstpInstance::new(star(i), terminals, vec![1; i]).unwrap()
}

/// `n` triangles sharing the center 0; triangle `j` uses `2j+1, 2j+2`.
pub fn windmill(n: usize) -> Graph {
    let mut g = Graph::new(2 * n + 1);
    for j in 0..n {
        let (a, b) = (2 * j + 1, 2 * j + 2);
        g.add_edge(0, a).unwrap();
        g.add_edge(0, b).unwrap();
        g.add_edge(a, b).unwrap();
    }
    g
}

/// Center 0 with `n` outer vertices, each joined by `k` parallel edges.
pub fn star_spokes(n: usize, k: usize) -> Graph {
    let mut g = Graph::new_multi(n + 1);
    for l in 1..=n {
        g.add_edge_mult(0, l, k).unwrap();
    }
    g
}

/// Wall with `n` rows of `2n` vertices: rows are paths, and between rows `r`
/// and `r + 1` the vertical edge at column `c` is kept iff `c + r` is even.
pub fn wall(n: usize) -> Graph {
    let cols = 2 * n;
    let id = |r: usize, c: usize| r * cols + c;
    let mut g = Graph::new(n * cols);
    for r in 0..n {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1)).unwrap();
            }
            if r + 1 < n && (c + r) % 2 == 0 {
                g.add_edge(id(r, c), id(r + 1, c)).unwrap();
            }
        }
    }
    g
}

/// Vertex 0 plus `m` isolated 3-vertex paths; path `j` is `3j+1 - 3j+2 - 3j+3`
/// and contributes the terminal set `{0} ∪ V(P_j)` with demand 1.
pub fn three_paths(m: usize) -> GstpInstance {
    let mut g = Graph::new(3 * m + 1);
    let mut terminals = Vec::new();
    for j in 0..m {
        let b = 3 * j + 1;
        g.add_edge(b, b + 1).unwrap();
        g.add_edge(b + 1, b + 2).unwrap();
        terminals.push(vec![0, b, b + 1, b + 2]);
    }
    GstpInstance::new(g, terminals, vec![1; m]).unwrap()
}

/// `i` vertex-disjoint triangles.
pub fn triangles(i: usize) -> Graph {
    let mut g = Graph::new(3 * i);
    for j in 0..i {
        let b = 3 * j;
        g.add_edge(b, b + 1).unwrap();
        g.add_edge(b + 1, b + 2).unwrap();
        g.add_edge(b, b + 2).unwrap();
    }
    g
}

/// `3i` isolated vertices partitioned into consecutive triples as terminal sets.
pub fn triples(i: usize) -> GstpInstance {
    let terminals = (0..i).map(|j| vec![3 * j, 3 * j + 1, 3 * j + 2]).collect();
    GstpInstance::new(Graph::new(3 * i), terminals, vec![1; i]).unwrap()
}

/// Path on `n` vertices with three leaves hung on every path vertex; STP with
/// all leaves as terminals and demand 1. Leaves of path vertex `p` are
/// `n + 3p .. n + 3p + 3`.
pub fn path_with_leaves(n: usize) -> GstpInstance {
    let mut g = path(n);
    let mut leaves = Vec::new();
    for p in 0..n {
        for _ in 0..3 {
            let l = g.add_vertex();
            g.add_edge(p, l).unwrap();
            leaves.push(l);
        }
    }
    from_stp(g, leaves, 1).unwrap()
}

/// Parameters of [`random_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    /// Edge count, capped at `C(n, 2)`.
    pub m: usize,
    /// Number of terminal sets drawn (equal draws merge).
    pub sets: usize,
    /// Upper bound on ΣD; each set gets demand ≥ 1 while budget remains.
    pub max_total_demand: usize,
    pub max_set_size: usize,
}

/// Uniform `m`-edge graph on `n` vertices with random terminal sets of size
/// `2..=max_set_size`. A pure function of `(spec, seed)`.
pub fn random_instance(spec: &RandomSpec, seed: u64) -> GstpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n;
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    pairs.truncate(spec.m);
    let g = Graph::from_edges(n, &pairs);
    let mut terminals = Vec::new();
    let mut demands = Vec::new();
    let mut budget = spec.max_total_demand;
    if n >= 2 {
        for _ in 0..spec.sets {
            if budget == 0 {
                break;
            }
            let size = rng.gen_range(2..=spec.max_set_size.clamp(2, n));
            let mut vs: Vec<Vertex> = (0..n).collect();
            vs.shuffle(&mut rng);
            vs.truncate(size);
            let d = rng.gen_range(1..=budget.min(2));
            budget -= d;
            terminals.push(vs);
            demands.push(d);
        }
    }
    GstpInstance::new(g, terminals, demands).unwrap()
}

/// Hub graph with small pieces: `hubs` hub vertices, then `pieces` pieces of
/// one or two vertices each attached to a random nonempty subset of hubs. One
/// or two terminal sets with ΣD ≤ 3. A pure function of its arguments.
pub fn hub_instance(hubs: usize, pieces: usize, seed: u64) -> GstpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut n = hubs;
    for _ in 0..pieces {
        let size = rng.gen_range(1..=2);
        for k in 0..size {
            let v = n + k;
            if k == 1 {
                edges.push((v - 1, v));
            }
            let mask = rng.gen_range(1..1usize << hubs);
            edges.extend((0..hubs).filter(|h| mask >> h & 1 == 1).map(|h| (h, v)));
        }
        n += size;
    }
    let g = Graph::from_edges(n, &edges);
    let mut terminals = Vec::new();
    let mut demands = Vec::new();
    let mut budget = 3;
    for _ in 0..rng.gen_range(1..=2) {
        let size = rng.gen_range(2..=3.min(n));
        let mut vs: Vec<Vertex> = (0..n).collect();
        vs.shuffle(&mut rng);
        vs.truncate(size);
        let d = rng.gen_range(1..=budget.min(2));
        budget -= d;
        terminals.push(vs);
        demands.push(d);
    }
    GstpInstance::new(g, terminals, demands).unwrap()
}
