//! Exact lattice computations for half-fiber sequences on Enriques surfaces.
//!
//! Classes live in the E10 lattice. Starting from a finite set of smooth
//! rational curves, the crate enumerates elliptic configurations, collects
//! the resulting half-fiber classes and searches for the longest sequence
//! with pairwise product one. Certificates for such sequences can be
//! verified independently.

// Matrix code reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod action;
pub mod bundled;
pub mod certificates;
pub mod configs;
pub mod curves;
pub mod data_io;
pub mod dynkin;
pub mod exact;
pub mod half_fibers;
pub mod lattice;
pub mod notation;
pub mod proof;
pub mod quasi;
pub mod solver;

pub use action::{apply_word, expand_orbit, GeneratorSet, OrbitWord};
pub use configs::{enumerate_configurations, EllipticConfiguration, EnumerateOptions};
pub use curves::CurveSystem;
pub use lattice::{dot, LatticeVector, RationalClass};
