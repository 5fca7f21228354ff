//! Invariants of Schottky groups acting on trees and of square-complex
//! buildings: Cuntz–Krieger K-theory of dual graphs, finite truncations of
//! the associated spectral triples, summability schedules, and polygonal
//! presentations.

pub mod buildings;
pub mod cli;
pub mod error;
pub mod graphs;
pub mod ktheory;
pub mod linalg;
pub mod matrix;
pub mod shift;
pub mod triples;

pub use error::{Error, Result};
