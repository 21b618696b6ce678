//! Exact combinatorics of convex lattice polygons for planar toric degenerations.

pub mod error;
mod geom;
pub mod io;
pub mod lattice;
pub mod regularity;
pub mod secant;
mod simplex;
pub mod subdivision;
pub mod triangulation;

pub use error::{Error, Result};
pub use lattice::{
    apply, are_equivalent, canonical_form, ehrhart_count, enumerate_polygons, invariants, lattice_points, pt,
    Equiaffinity, LatticePoint, LatticePolygon, PolygonInvariants,
};
pub use regularity::{check_witness, flatten_lifting, fold_constraints, is_regular, LiftingFunction};
pub use secant::{
    catalog_lookup, classify_singularities, count_skew_k_sets, find_delightful, is_k_delightful, lower_bound_nu_k,
    nu2_toric_smooth, CatalogEntry, LowerBound, SingularityKind, SingularityRecord,
};
pub use subdivision::{intermediate_subdivision, refine, Cell, Subdivision};
pub use triangulation::{enumerate_triangulations, star, validate, Star, Tri, Triangulation};
