//! Decision by the fracture number of the vertex-augmented graph.
//!
//! Pipeline: sensible-terminal and degree reductions, a fracture modulator of
//! the augmented graph, a nice version of it, per-component signatures,
//! indistinguishability classes and one integer program over configuration
//! counts. Only tiny modulators are supported (see [`FnConfig`]).

pub mod classes;
pub mod config;
pub mod hyper;
pub mod ilp;
pub mod selector;

use itertools::Itertools;
use thiserror::Error;

use crate::fracture::{
    fracture_modulator_capped, is_fracture_modulator, is_nice_modulator, make_nice_modulator, FractureError,
    NiceModulatorResult,
};
use crate::graph::{Edge, Vertex};
use crate::instance::{augment, rr_degree_negative, rr_sensible_terminals, AugmentMode, AugmentedGraph, GstpInstance};

pub use classes::{equivalence_classes, indistinguishable, ComponentClass};
pub use config::{admits, component_instance, signature, ComponentInstance, Configuration};
pub use hyper::minimally_connected_hypergraphs;
pub use ilp::{ilp_feasible, IlpModel, IlpResult, Relation};
pub use selector::build_selector_ilp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FnError {
    #[error("fnilp cap exceeded: {what} is {value}, cap {cap}")]
    ScaleCap { what: &'static str, value: usize, cap: usize },
    #[error("modulator is not nice for this instance")]
    NotNice,
    #[error("sigma must map {0} slots onto the component")]
    InvalidSurjection(usize),
    #[error("component index {0} out of range")]
    NoSuchComponent(usize),
    #[error(transparent)]
    Fracture(#[from] FractureError),
}

/// Hard limits of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FnConfig {
    /// Largest nice modulator `|S|`.
    pub max_modulator: usize,
    /// Largest `|𝒯_S|`, the terminal sets whose augmented vertex lies in `S`.
    pub max_terminals_in_s: usize,
}

impl Default for FnConfig {
    fn default() -> Self {
        FnConfig { max_modulator: 3, max_terminals_in_s: 1 }
    }
}

/// A component of the augmented graph minus `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertices of the augmented graph.
    pub vertices: Vec<Vertex>,
    /// The host-graph vertices among them.
    pub host: Vec<Vertex>,
    /// Terminal sets whose augmented vertex lies in the component.
    pub terminal_sets: Vec<usize>,
}

/// Instance, nice modulator and the derived component structure.
#[derive(Debug, Clone)]
pub struct FnContext {
    pub instance: GstpInstance,
    pub aug: AugmentedGraph,
    /// Sorted `S` in the augmented graph.
    pub modulator: Vec<Vertex>,
    /// Sorted `S ∩ V(G)`; bit `b` of a subset mask stands for `host_modulator[b]`.
    pub host_modulator: Vec<Vertex>,
    pub components: Vec<Component>,
    /// `𝒯_S`.
    pub terminals_in_s: Vec<usize>,
    /// `𝒯*`: terminal sets contained in `S`.
    pub terminals_star: Vec<usize>,
}

impl FnContext {
    pub fn new(instance: GstpInstance, modulator: &[Vertex], cfg: &FnConfig) -> Result<Self, FnError> {
        let mut s = modulator.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() > cfg.max_modulator {
            return Err(FnError::ScaleCap { what: "modulator size", value: s.len(), cap: cfg.max_modulator });
        }
        if !is_nice_modulator(&instance, &s) {
            return Err(FnError::NotNice);
        }
        let aug = augment(&instance, AugmentMode::Vertex);
        let n = instance.graph().n();
        let host_modulator: Vec<Vertex> = s.iter().copied().filter(|&v| v < n).collect();
        let terminals_in_s: Vec<usize> = s.iter().filter_map(|&v| aug.terminal_of(v)).collect();
        if terminals_in_s.len() > cfg.max_terminals_in_s {
            return Err(FnError::ScaleCap {
                what: "terminal sets in the modulator",
                value: terminals_in_s.len(),
                cap: cfg.max_terminals_in_s,
            });
        }
        let terminals_star = (0..instance.terminal_count())
            .filter(|&i| instance.terminals()[i].iter().all(|v| host_modulator.binary_search(v).is_ok()))
            .collect();
        let (rest, map) = aug.graph.remove_vertices(&s);
        let mut back = vec![0; rest.n()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                back[*new] = old;
            }
        }
        let components = rest
            .components()
            .into_iter()
            .map(|c| {
                let vertices: Vec<Vertex> = c.into_iter().map(|v| back[v]).sorted().collect();
                let host = vertices.iter().copied().filter(|&v| v < n).collect();
                let terminal_sets = vertices.iter().filter_map(|&v| aug.terminal_of(v)).collect();
                Component { vertices, host, terminal_sets }
            })
            .collect();
        Ok(FnContext { instance, aug, modulator: s, host_modulator, components, terminals_in_s, terminals_star })
    }

    /// Largest number of host edges in any `C⁺`: `C(2|S|, 2)`.
    pub fn u(&self) -> usize {
        let k = 2 * self.modulator.len();
        k * k.saturating_sub(1) / 2
    }

    pub fn component(&self, c: usize) -> Result<&Component, FnError> {
        self.components.get(c).ok_or(FnError::NoSuchComponent(c))
    }

    /// Host-graph edges of `C⁺`.
    pub fn closure_edges(&self, c: &Component) -> Vec<Edge> {
        let inside = |v: Vertex| c.host.binary_search(&v).is_ok() || self.host_modulator.binary_search(&v).is_ok();
        self.instance.graph().edge_list().into_iter().filter(|&(u, v)| inside(u) && inside(v)).collect()
    }

    /// Subset mask of `S ∩ V(G)`; `None` if a vertex is outside it.
    pub fn mask_of(&self, vs: &[Vertex]) -> Option<u32> {
        vs.iter().try_fold(0u32, |m, v| self.host_modulator.binary_search(v).ok().map(|b| m | 1 << b))
    }

    pub fn set_of(&self, mask: u32) -> Vec<Vertex> {
        hyper::bits(mask).map(|b| self.host_modulator[b]).collect()
    }
}

/// Outcome of [`decide_by_fracture`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnReport {
    pub feasible: bool,
    /// Nice modulator used, empty when a reduction decided the instance.
    pub modulator: Vec<Vertex>,
    pub classes: usize,
    pub variables: usize,
    pub constraints: usize,
}

impl FnReport {
    fn early(feasible: bool) -> Self {
        FnReport { feasible, modulator: vec![], classes: 0, variables: 0, constraints: 0 }
    }
}

pub fn decide_by_fracture(inst: &GstpInstance) -> Result<FnReport, FnError> {
    decide_by_fracture_with(inst, &FnConfig::default())
}

pub fn decide_by_fracture_with(inst: &GstpInstance, cfg: &FnConfig) -> Result<FnReport, FnError> {
    let inst = rr_sensible_terminals(inst);
    let Some(inst) = rr_degree_negative(&inst).instance() else {
        return Ok(FnReport::early(false));
    };
    if inst.terminal_count() == 0 {
        return Ok(FnReport::early(true));
    }
    let nice = choose_nice_modulator(&inst, cfg)?;
    let Some(reduced) = rr_degree_negative(&nice.instance).instance() else {
        return Ok(FnReport::early(false));
    };
    let ctx = FnContext::new(reduced, &nice.modulator, cfg)?;
    let classes = equivalence_classes(&ctx);
    let mut with_sigs = Vec::with_capacity(classes.len());
    for class in classes {
        let sig = signature(&ctx, class.representative)?;
        with_sigs.push((class, sig));
    }
    let model = build_selector_ilp(&ctx, &with_sigs)?;
    Ok(FnReport {
        feasible: ilp_feasible(&model).is_sat(),
        modulator: ctx.modulator.clone(),
        classes: with_sigs.len(),
        variables: model.vars().len(),
        constraints: model.constraints().len(),
    })
}

/// Nicifies a minimum modulator of the augmented graph; if that exceeds the
/// caps, tries every modulator of size up to the cap in lexicographic order.
pub fn choose_nice_modulator(inst: &GstpInstance, cfg: &FnConfig) -> Result<NiceModulatorResult, FnError> {
    let aug = augment(inst, AugmentMode::Vertex);
    let fits = |r: &NiceModulatorResult| {
        let aug2 = augment(&r.instance, AugmentMode::Vertex);
        r.modulator.len() <= cfg.max_modulator
            && r.modulator.iter().filter(|&&v| aug2.is_aug(v)).count() <= cfg.max_terminals_in_s
    };
    let Some((x, k)) = fracture_modulator_capped(&aug.graph, cfg.max_modulator) else {
        return Err(FnError::ScaleCap {
            what: "fracture number of the augmented graph",
            value: cfg.max_modulator + 1,
            cap: cfg.max_modulator,
        });
    };
    let first = make_nice_modulator(inst, &x)?;
    if fits(&first) {
        return Ok(first);
    }
    for size in k..=cfg.max_modulator {
        for cand in (0..aug.graph.n()).combinations(size) {
            if cand == x || !is_fracture_modulator(&aug.graph, &cand) {
                continue;
            }
            let r = make_nice_modulator(inst, &cand)?;
            if fits(&r) {
                return Ok(r);
            }
        }
    }
    Err(FnError::ScaleCap { what: "nice modulator size", value: first.modulator.len(), cap: cfg.max_modulator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::families::{hub_instance, random_instance, RandomSpec};
    use crate::oracle::decide;

    #[test]
    fn agrees_with_oracle_on_hub_instances() {
        let (mut checked, mut via_ilp, mut yes) = (0, 0, 0);
        for seed in 0..300 {
            let inst = hub_instance(1 + seed as usize % 2, 2 + seed as usize % 3, seed);
            match decide_by_fracture(&inst) {
                Ok(r) => {
                    checked += 1;
                    via_ilp += usize::from(r.variables > 0);
                    yes += usize::from(r.feasible);
                    assert_eq!(r.feasible, decide(&inst), "seed {seed}: {inst:?}");
                }
                Err(FnError::ScaleCap { .. }) => {}
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
        eprintln!("checked {checked}, ilp {via_ilp}, feasible {yes}");
        assert!(checked >= 50);
    }

    #[test]
    fn agrees_with_oracle_on_random_instances() {
        let spec = RandomSpec { n: 6, m: 6, sets: 2, max_total_demand: 3, max_set_size: 3 };
        for seed in 0..200 {
            let inst = random_instance(&spec, seed);
            if let Ok(r) = decide_by_fracture(&inst) {
                assert_eq!(r.feasible, decide(&inst), "seed {seed}: {inst:?}");
            }
        }
    }

    #[test]
    fn generated_configurations_are_admitted() {
        let mut seen = 0;
        for seed in 0..60 {
            let inst = hub_instance(2, 3, seed);
            let inst = rr_sensible_terminals(&inst);
            let Ok(nice) = choose_nice_modulator(&inst, &FnConfig::default()) else { continue };
            let Ok(ctx) = FnContext::new(nice.instance, &nice.modulator, &FnConfig::default()) else { continue };
            for c in 0..ctx.components.len() {
                for g in signature(&ctx, c).unwrap() {
                    assert!(g.is_viable(&ctx), "seed {seed} component {c}: {g:?}");
                    assert!(admits(&ctx, c, &g).unwrap(), "seed {seed} component {c}: {g:?}");
                    seen += 1;
                }
            }
        }
        assert!(seen > 100, "{seen}");
    }
}
