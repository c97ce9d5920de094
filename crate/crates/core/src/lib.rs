//! Klyachko diagrams of monomial ideals in Cox rings of smooth complete toric
//! varieties.
//!
//! The pipeline runs from a [`Fan`] and a [`MonomialIdeal`] to the per-cone
//! regions of a [`KlyachkoDiagram`], and back from a diagram to the minimal
//! generators of the saturated ideal. Hilbert functions and the first local
//! cohomology with support in the irrelevant ideal are read off the diagram.
//! Every pipeline has a diagram-free oracle in [`monomial`] to check against.

pub mod check;
pub mod diagram;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod monomial;
pub mod polytope;
pub mod reconstruction;
pub mod region;
pub mod render;
pub mod toric;

pub use diagram::{
    compute_diagram, compute_diagram_with, filtration_member, shift_diagram, sum_diagram,
    validate_diagram, KlyachkoDiagram, TieOrder,
};
pub use error::{Error, Result};
pub use hilbert::{constant_hilbert_poly, hilbert_value, hilbert_value_general, HilbertReport};
pub use monomial::{
    hilbert_oracle, ideal_intersect, minimalize, monomials_of_degree, saturate_oracle, Monomial,
    MonomialIdeal,
};
pub use reconstruction::{
    graded_basis, local_cohomology_h1, reconstruct_generators, span_set, GradedPiece, SearchBox,
};
pub use region::{Cell, Interval, LatticeRegion};
pub use toric::{validate_fan, Character, CoxGrading, Fan, FanData, MultiDegree};
