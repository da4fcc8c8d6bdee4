//! Detection of block-cyclic and block-acyclic node groups in directed graphs.
//!
//! Many directed networks move something around: money between economic
//! sectors, biomass up a food web, packets through a customer-provider
//! hierarchy. When the node set splits into groups and edges mostly hop from
//! one group to the "next" one, the spectrum of the random-walk transition
//! matrix carries that structure as a set of large-modulus complex
//! eigenvalues. This crate recovers the groups by clustering rows of the
//! eigenvector matrix for those eigenvalues, covering both the cyclic case
//! (groups arranged in a ring) and the acyclic case (groups arranged in an
//! upstream-downstream hierarchy).
//!
//! The pieces compose as a pipeline:
//!
//! * [`graph`]: sparse directed graphs and their transition operators;
//! * [`spectral`]: a matrix-free Arnoldi eigensolver for the few
//!   largest-modulus eigenpairs, plus a dense LAPACK-backed reference path and
//!   perturbation diagnostics;
//! * [`embedding`] and [`kmeans`]: turn eigenvectors into points and cluster
//!   them;
//! * [`algo`]: the end-to-end detectors ([`algo::bcs`], [`algo::bas`]),
//!   block ranking, assignment refinement, and trophic levels;
//! * [`synth`]: stochastic block model generators for benchmarks;
//! * [`metrics`]: permutation-invariant error rates between labelings;
//! * [`baselines`]: bibliographic-coupling and SVD clustering for comparison.

pub mod algo;
pub mod baselines;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod kmeans;
pub mod metrics;
pub mod spectral;
pub mod synth;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
