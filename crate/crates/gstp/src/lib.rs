//! Exact solvers for Generalized Steiner Tree Packing (GSTP) and its special
//! cases Edge-Disjoint Paths (EDP) and Steiner Tree Packing (STP).
//!
//! An instance is a simple graph, a family of terminal sets and a positive
//! demand per set. It is positive if there are pairwise edge-disjoint
//! connected subgraphs such that each terminal set `T` is contained in `d(T)`
//! of them.
//!
//! - [`graph`]: multigraph with contraction, suppression and subdivision.
//! - [`instance`]: instances, solutions, augmentation, named families, small exact parameters.
//! - [`oracle`]: exhaustive search, the ground truth for the other solvers.
//! - [`fracture`]: `(k, d)`-fracture deletion and nice fracture modulators.
//! - [`fnilp`]: decision by the fracture number of the vertex-augmented graph.
//! - [`twdp`]: dynamic program over a nice tree decomposition.
//! - [`treecut`]: tree-cut decompositions, friendly transformation, reduction rules.
//! - [`io`]: text formats for instances, solutions and decompositions.
//! - [`bench`]: seeded cross-validation of the solvers.

pub mod bench;
pub mod fnilp;
pub mod fracture;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod treecut;
pub mod twdp;

pub use graph::{Edge, Graph, Vertex};
pub use instance::{GstpInstance, Solution};
