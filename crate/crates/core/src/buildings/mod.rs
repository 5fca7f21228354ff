//! Polygonal presentations and the square complexes they encode: validation,
//! assembly and vertex links, four-fold covers with the stable pairs
//! property, BM group data, dimension counts for products of trees, and the
//! exponent equation of right-angled hyperbolic polygons.

mod bipartite;
mod bm;
mod polyhedron;
mod presentation;
mod product;
mod tau;

pub use bipartite::{BipartiteGraph, LinkGraph};
pub use bm::{
    bm_group_data, p1_fixture, p2_fixture, square_invariants, stable_pairs_check, BMGroupData,
    GroupPresentation, SquareInvariants, StablePairsReport,
};
pub use polyhedron::{polyhedron_from_presentation, vertex_links, Polyhedron, PolyhedronCounts};
pub use presentation::{
    cover_graphs, family_graphs, family_presentation, four_fold_cover, validate_presentation,
    ConditionCheck, PolygonalPresentation, ValidationReport, MAX_WITNESSES,
};
pub use product::{
    inclusion_exclusion, inclusion_exclusion_check, product_grading_dims, product_grading_oracle,
    product_table, ProductGradingDims,
};
pub use tau::{solve_tau, symmetric_tau, tau_lhs, TauRoot, BRACKET};
