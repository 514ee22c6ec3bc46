//! Exact solvers for the colored path problem: find an s-t path whose
//! vertices together carry at most `k` colors, on graphs where every color
//! class is connected.
//!
//! The main solver runs a representative-set dynamic program over a nice
//! tree decomposition ([`repset`]); [`bounded`] adds a path-length budget.
//! [`oracles`] holds brute-force ground truth, [`generators`] builds
//! reduction gadgets and random instances, and [`geometry`] turns obstacle
//! scenes into grid instances.

pub mod bounded;
pub mod color;
pub mod contraction;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod repset;
pub mod td;

pub use color::{ColorId, ColorSet};
pub use contraction::{
    color_contract, lift_path, normalize_st, reduce_to_irreducible, ContractionTrace, Normalized,
};
pub use error::{Error, Result};
pub use graph::{
    chi_of_path, first_disconnected_color, intersection_number, is_color_connected,
    validate_instance, validate_path, ColoredGraph, Path, ValidationReport, Vertex,
};
pub use td::{decompose, make_nice, validate_decomposition, NiceDecomposition, Strategy, TreeDecomposition};
