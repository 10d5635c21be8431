//! Fake bold children, expanding and blowing up nodes.

use itertools::Itertools;

use super::{
    adhesion, bold_children, nice_violations, three_center, torso, width, Peripheral, TcdError, TreeCutDecomposition,
};
use crate::graph::Graph;

/// Bold children of `s` whose torso vertex is suppressed on the way to the
/// 3-center, in suppression order.
pub fn fake_nodes(tcd: &TreeCutDecomposition, g: &Graph, s: usize) -> Vec<usize> {
    let h = torso(tcd, g, s);
    let bold = bold_children(tcd, g, s);
    three_center(&h)
        .suppressed
        .into_iter()
        .filter_map(|id| match h.peripheral[id - h.core.len()] {
            Peripheral::Child(c) if bold.contains(&c) => Some(c),
            _ => None,
        })
        .collect()
}

/// Number of edges between `Y_a` and `Y_b`.
fn edges_between(tcd: &TreeCutDecomposition, g: &Graph, a: usize, b: usize) -> usize {
    let ya = tcd.y(a);
    let yb = tcd.y(b);
    g.edges()
        .filter(|&((u, v), _)| {
            (ya.binary_search(&u).is_ok() && yb.binary_search(&v).is_ok())
                || (yb.binary_search(&u).is_ok() && ya.binary_search(&v).is_ok())
        })
        .map(|(_, m)| m)
        .sum()
}

/// Whether `s` may be expanded with respect to the fake children `a` and `b`.
fn expandable(tcd: &TreeCutDecomposition, g: &Graph, a: usize, b: usize) -> bool {
    let m = edges_between(tcd, g, a, b);
    m >= 1 && adhesion(tcd, g, a) + adhesion(tcd, g, b) >= 3 + 2 * m
}

/// Inserts an empty child of `s` adopting the fake children `a` and `b`.
pub fn expand(
    tcd: &TreeCutDecomposition,
    g: &Graph,
    s: usize,
    a: usize,
    b: usize,
) -> Result<TreeCutDecomposition, TcdError> {
    let fake = fake_nodes(tcd, g, s);
    if a == b || !fake.contains(&a) || !fake.contains(&b) {
        return Err(TcdError::Precondition(format!("nodes {a} and {b} must be distinct fake children of {s}")));
    }
    if !expandable(tcd, g, a, b) {
        return Err(TcdError::Precondition(format!(
            "nodes {a} and {b} need a common edge and adh(a) + adh(b) - 2m >= 3"
        )));
    }
    let mut out = tcd.clone();
    let c = out.len();
    out.bags.push(Vec::new());
    out.parent.push(Some(s));
    out.parent[a] = Some(c);
    out.parent[b] = Some(c);
    Ok(out)
}

/// Expands `s` until `|bold children| + |X_s| <= w + 2`, where `w` is the
/// width of `tcd`, or no fake pair is expandable.
pub fn blow_up(tcd: &TreeCutDecomposition, g: &Graph, s: usize) -> TreeCutDecomposition {
    let bound = width(tcd, g) + 2;
    let mut cur = tcd.clone();
    while bold_children(&cur, g, s).len() + cur.bags[s].len() > bound {
        let fake = fake_nodes(&cur, g, s);
        let consecutive = fake.iter().tuple_windows().map(|(&a, &b)| (a, b));
        let any = fake.iter().tuple_combinations().map(|(&a, &b)| (a, b));
        let Some((a, b)) = consecutive.chain(any).find(|&(a, b)| expandable(&cur, g, a, b)) else {
            break;
        };
        cur = expand(&cur, g, s, a, b).expect("pair checked");
    }
    cur
}

/// Blows up every node of a nice decomposition.
pub fn make_friendly(tcd: &TreeCutDecomposition, g: &Graph) -> Result<TreeCutDecomposition, TcdError> {
    if let Some(v) = nice_violations(tcd, g).into_iter().next() {
        return Err(TcdError::NotNice(v));
    }
    let mut cur = tcd.clone();
    for s in 0..tcd.len() {
        cur = blow_up(&cur, g, s);
    }
    Ok(cur)
}
