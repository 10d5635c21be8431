//! Indistinguishability of components.

use itertools::Itertools;

use super::FnContext;
use crate::graph::Vertex;

/// Components that are pairwise indistinguishable; `representative` is the first member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

/// Whether some bijection between the two components, extended by the
/// identity on `S`, preserves adjacency in the augmented graph, the
/// augmented-vertex flag and the demand behind augmented vertices.
pub fn indistinguishable(ctx: &FnContext, a: usize, b: usize) -> bool {
    let (ca, cb) = (&ctx.components[a], &ctx.components[b]);
    if ca.vertices.len() != cb.vertices.len() || ca.host.len() != cb.host.len() {
        return false;
    }
    let g = &ctx.aug.graph;
    let label = |v: Vertex| ctx.aug.terminal_of(v).map(|t| ctx.instance.demands()[t]);
    cb.vertices.iter().copied().permutations(cb.vertices.len()).any(|image| {
        let phi = |v: Vertex| match ca.vertices.binary_search(&v) {
            Ok(i) => image[i],
            Err(_) => v,
        };
        ca.vertices.iter().zip(&image).all(|(&x, &y)| label(x) == label(y))
            && ca.vertices.iter().enumerate().all(|(i, &x)| {
                ctx.modulator.iter().all(|&s| g.has_edge(x, s) == g.has_edge(phi(x), s))
                    && ca.vertices[i + 1..].iter().all(|&y| g.has_edge(x, y) == g.has_edge(phi(x), phi(y)))
            })
    })
}

/// Greedy grouping against each class representative; classes are listed by
/// their first member.
pub fn equivalence_classes(ctx: &FnContext) -> Vec<ComponentClass> {
    let mut classes: Vec<ComponentClass> = Vec::new();
    for c in 0..ctx.components.len() {
        match classes.iter_mut().find(|k| indistinguishable(ctx, k.representative, c)) {
            Some(k) => k.members.push(c),
            None => classes.push(ComponentClass { representative: c, members: vec![c] }),
        }
    }
    classes
}
