//! Desk-scale toolkit for r-uniform hypergraphs: constructions, p-spectral
//! radius with certified stationarity residuals, forbidden expanded patterns,
//! and partition stability diagnostics.
//!
//! Everything here is exact or certified at small scale. Searches are
//! exhaustive with explicit caps, the spectral solver reports the residual of
//! the stationarity equations alongside its value, and every randomized path
//! is seeded.

#![forbid(unsafe_code)]

pub mod combin;
pub mod hypergraph;
pub mod lab;
pub mod patterns;
pub mod report;
pub mod spectral;
pub mod stability;

pub use hypergraph::{Hypergraph, HypergraphError, PartSizes, SimpleGraph};
pub use lab::{
    CompositionSweep, LabError, Objective, ProbeReport, SearchResult, SweepRow,
};
pub use patterns::{Embedding, EdgeAssignment, PatternError, PatternSpec};
pub use report::Report;
pub use spectral::{
    EdgeCountLimit, SolverConfig, SpectralEstimate, SpectralError, WeightVector,
};
pub use stability::{
    AnalysisConfig, Closeness, PairClassification, Partition, StabilityError,
};
