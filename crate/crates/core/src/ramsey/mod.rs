//! Colorings of finite sets, homogeneity, Erdős–Rado trees with their
//! γ-descent certificates, and brute-force Ramsey searches.

mod coloring;
mod gamma;
mod homogeneous;
mod search;
mod tree;

pub use coloring::{for_each_subset, Coloring};
pub use gamma::{
    gamma_sequence_general, gamma_sequence_pairs, CertificateStep, DescentCertificate, GammaStep,
    GammaTrace, GammaVariant, NodeStat,
};
pub use homogeneous::{is_homogeneous, is_min_homogeneous};
pub use search::{
    bad_coloring_exists, bad_coloring_exists_with, find_homogeneous_exhaustive, ks_pipeline,
    ph_threshold, ph_threshold_with, php_homogeneous,
    PipelineReport, SearchStats,
};
pub use tree::{build_er_tree, ErNode, ErTree};
