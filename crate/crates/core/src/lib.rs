//! Combinatorics of four-dimensional cubulations and the cusped hyperbolic
//! four-manifolds they describe.
//!
//! A cubulation is a set of hypercubes `[-1,1]^4` whose facets are matched
//! in pairs by cube isometries. Everything computed here is exact and purely
//! combinatorial: cycles of square 2-faces (one per cusp), their monodromies,
//! Euler characteristic and volume, canonical forms up to relabeling, the
//! flower, splitter and cyclic-cover surgeries, small censuses, and
//! Dehn-filling slope arithmetic.

pub mod canon;
pub mod census;
pub mod cubulation;
pub mod cycles;
pub mod dehn;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod hypercube;
pub mod lattice;
pub mod surgery;
pub mod tables;

pub use canon::{are_equivalent, canonical_form, CanonicalForm};
pub use cubulation::{Cubulation, Diagnostic, IncidenceGraph, Pairing, ParseOptions, Relabeling};
pub use cycles::{
    invariant_report, trace_cycles, CuspReport, CuspShape, FaceCycle, InvariantReport, Monodromy,
    MonodromyClass,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use hypercube::{Axis, Facet, SignedPerm2, SignedPerm3, SignedPerm4, SquareFace, SquareFrame};
