//! Random graph embeddings built from exact homomorphism counts of sampled
//! bounded-treewidth patterns.
//!
//! The pipeline: draw a treewidth bound from a Poisson law, grow a k-tree
//! with a width-certified tree decomposition, thin it into a random subgraph,
//! and use the surviving decomposition to count homomorphisms into every
//! dataset graph by dynamic programming. Stacking `ℓ` sampled patterns
//! column-wise yields an embedding whose expectation separates every pair of
//! non-isomorphic graphs up to the configured size bound; Hoeffding
//! calculators bound how large `ℓ` must be for the induced kernel to
//! approximate its expectation uniformly over a dataset.
//!
//! Modules:
//! - [`graph`], [`graph6`], [`iso`]: graph type, interchange format,
//!   generators, and small-instance isomorphism oracles.
//! - [`decomposition`]: k-tree sampling, validation, nice normal form.
//! - [`hom`]: brute-force and treewidth-DP homomorphism counting.
//! - [`sampler`]: the pattern distribution and reproducible pattern banks.
//! - [`embedding`]: embedding matrices, kernels, sample-size calculators,
//!   distinguishability reports.
//! - [`wl`]: 1-WL color refinement baseline.

pub mod decomposition;
pub mod embedding;
pub mod graph;
pub mod graph6;
pub mod hom;
pub mod iso;
pub mod sampler;
pub mod wl;

pub use graph::{disjoint_union, generate, generate_csl, Family, Graph, GraphError};
pub use hom::{hom_bruteforce, hom_density, hom_dp, hom_truncated, HomCount};
pub use sampler::{LambdaMode, PatternBank, PatternSample, SamplerConfig};
