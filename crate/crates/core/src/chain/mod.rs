//! Metric operators, the adjoint maps they induce and the tree of isospectral
//! Hamiltonians obtained by iterating them.

pub mod adjoint;
pub mod metric;
pub mod tree;

pub use adjoint::{flat, intertwine_residual, lemma1_check, relative_dist, sharp, Lemma1Report};
pub use metric::{build_metrics, build_metrics_labeled, mapping_residual, promote_vectors, weighted_inner, MetricPair};
pub use tree::{
    expected_node_count, grow_chain, grow_chain_from, grow_chain_partial, power_identity_residuals,
    spectrum_distance, ChainNode, ChainTree, NodeResiduals, SpectrumHalf, MAX_DEPTH,
};
