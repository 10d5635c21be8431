//! The integer program choosing how many components of each class take each
//! configuration, together with the linear forms of the hypergraph choices.

use std::collections::{BTreeMap, BTreeSet};

use super::hyper::{minimal_hypergraph_masks, submasks};
use super::{ComponentClass, Configuration, FnContext, FnError};
use crate::fnilp::ilp::{IlpModel, Relation};

/// Configuration projected onto what the program sees: demand and supply
/// vectors plus, per tree of the terminal set in `S`, the nonempty assigned subsets.
type Projection = (Vec<usize>, Vec<usize>, Vec<BTreeSet<u32>>);

fn project(ctx: &FnContext, g: &Configuration, trees: &[(usize, usize)]) -> Projection {
    let width = 1 << ctx.host_modulator.len();
    let vector = |m: &BTreeMap<Vec<usize>, usize>| {
        let mut v = vec![0; width];
        for (k, &c) in m {
            v[ctx.mask_of(k).expect("key inside S") as usize] += c;
        }
        v
    };
    let sets = trees
        .iter()
        .map(|&(t, i)| {
            (0..ctx.modulator.len())
                .map(|j| g.assigned(t, i, j))
                .filter(|u| !u.is_empty())
                .map(|u| ctx.mask_of(u).expect("assign inside S"))
                .collect()
        })
        .collect();
    (vector(&g.demand), vector(&g.supply), sets)
}

/// Builds the selector program for classes with their signatures. The
/// variables are `d_{X,γ}` per class and projected configuration,
/// `s_R` per subset of `S ∩ V(G)` with at least two vertices, `p`/`q` for the
/// hypergraphs of terminal sets inside `S` and `a`/`b` for the terminal set
/// whose augmented vertex is in `S`.
pub fn build_selector_ilp(
    ctx: &FnContext,
    classes: &[(ComponentClass, Vec<Configuration>)],
) -> Result<IlpModel, FnError> {
    let s = ctx.host_modulator.len();
    let full = (1u32 << s) - 1;
    let width = 1usize << s;
    let n_comp = ctx.components.len() as i64;
    let u = ctx.u() as i64;
    let demands = ctx.instance.demands();
    let trees: Vec<(usize, usize)> =
        ctx.terminals_in_s.iter().flat_map(|&t| (0..demands[t]).map(move |i| (t, i))).collect();
    let mut m = IlpModel::new();

    // Class selection.
    let mut chosen: Vec<(usize, Projection)> = Vec::new();
    for (x, (class, sig)) in classes.iter().enumerate() {
        let projections: BTreeSet<Projection> = sig.iter().map(|g| project(ctx, g, &trees)).collect();
        let size = class.members.len() as i64;
        let mut row = Vec::new();
        for (k, p) in projections.into_iter().enumerate() {
            let v = m.add_var(format!("d_{x}_{k}"), 0, size);
            row.push((v, 1));
            chosen.push((v, p));
        }
        m.add_constraint(row, Relation::Eq, size);
    }

    // Supply balance, with s_R the load of trees of sets inside S.
    let star_total: i64 = ctx.terminals_star.iter().map(|&t| demands[t] as i64).sum();
    let s_cap = (n_comp * u).min(star_total);
    let mut s_var = vec![None; width];
    for r in (1..=full).filter(|r| r.count_ones() >= 2) {
        let sv = m.add_var(format!("s_{r}"), 0, s_cap);
        s_var[r as usize] = Some(sv);
        let mut row = vec![(sv, 1)];
        for (v, (dem, sup, _)) in &chosen {
            row.push((*v, dem[r as usize] as i64 - sup[r as usize] as i64));
        }
        m.add_constraint(row, Relation::Le, 0);
    }
    for (v, (dem, _, _)) in &chosen {
        // Demand on a set of fewer than two vertices can never be met.
        if (0..width).any(|r| (r as u32).count_ones() < 2 && dem[r] > 0) {
            m.add_constraint(vec![(*v, 1)], Relation::Eq, 0);
        }
    }

    // Hypergraphs for terminal sets inside S.
    let mut load: Vec<Vec<(usize, i64)>> = vec![Vec::new(); width];
    for &t in &ctx.terminals_star {
        let d = demands[t] as i64;
        let tm = ctx.mask_of(&ctx.instance.terminals()[t]).expect("set inside S");
        let mut row = Vec::new();
        for um in submasks(full).filter(|um| um & tm == tm) {
            for (h, edges) in minimal_hypergraph_masks(um).into_iter().enumerate() {
                let p = m.add_var(format!("p_{t}_{um}_{h}"), 0, d);
                row.push((p, 1));
                for r in edges {
                    let q = m.add_var(format!("q_{t}_{um}_{h}_{r}"), 0, d);
                    m.add_constraint(vec![(q, 1), (p, -1)], Relation::Ge, 0);
                    load[r as usize].push((q, 1));
                }
            }
        }
        m.add_constraint(row, Relation::Eq, d);
    }
    for (r, terms) in load.into_iter().enumerate() {
        if terms.is_empty() {
            continue;
        }
        let mut row = terms;
        if let Some(sv) = s_var[r] {
            row.push((sv, -1));
        }
        m.add_constraint(row, Relation::Le, 0);
    }

    // Assign hypergraphs for the terminal set in S.
    for (ti, &(t, i)) in trees.iter().enumerate() {
        let ts = ctx
            .mask_of(
                &ctx.instance.terminals()[t]
                    .iter()
                    .copied()
                    .filter(|v| ctx.host_modulator.contains(v))
                    .collect::<Vec<_>>(),
            )
            .expect("filtered to S");
        let mut a = vec![None; width];
        for y in 1..=full {
            let av = m.add_var(format!("a_{t}_{i}_{y}"), 0, 1);
            a[y as usize] = Some(av);
            let users: Vec<usize> = chosen.iter().filter(|(_, p)| p.2[ti].contains(&y)).map(|(v, _)| *v).collect();
            let mut lb: Vec<(usize, i64)> = users.iter().map(|&v| (v, 1)).collect();
            lb.push((av, -1));
            m.add_constraint(lb, Relation::Ge, 0);
            let mut ub: Vec<(usize, i64)> = users.iter().map(|&v| (v, 1)).collect();
            ub.push((av, -n_comp));
            m.add_constraint(ub, Relation::Le, 0);
        }
        let mut b = vec![None; width];
        let mut pick = Vec::new();
        for um in submasks(full).filter(|um| um & ts == ts) {
            let bv = m.add_var(format!("b_{t}_{i}_{um}"), 0, 1);
            b[um as usize] = Some(bv);
            pick.push((bv, 1));
            let mut some_edge: Vec<(usize, i64)> =
                submasks(um).filter(|&y| y != 0).map(|y| (a[y as usize].unwrap(), 1)).collect();
            some_edge.push((bv, -1));
            m.add_constraint(some_edge, Relation::Ge, 0);
            for x in submasks(um).filter(|&x| x != 0 && x != um) {
                let mut cut: Vec<(usize, i64)> =
                    submasks(um).filter(|&y| y & x != 0 && y & !x != 0).map(|y| (a[y as usize].unwrap(), 1)).collect();
                cut.push((bv, -1));
                m.add_constraint(cut, Relation::Ge, 0);
            }
        }
        m.add_constraint(pick, Relation::Eq, 1);
        for y in 1..=full {
            let mut wf: Vec<(usize, i64)> =
                (y..=full).filter(|&um| um & y == y).filter_map(|um| b[um as usize]).map(|bv| (bv, 1)).collect();
            wf.push((a[y as usize].unwrap(), -1));
            m.add_constraint(wf, Relation::Ge, 0);
        }
    }
    Ok(m)
}
