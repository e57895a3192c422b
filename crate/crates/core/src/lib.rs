//! Exact homological algebra over the integers.

pub mod bifunctor;
pub mod cochain;
pub mod complexes;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod grading;
pub mod holim;
pub mod io;
pub mod group;
pub mod integer;
pub mod lattice;
pub mod matrix;
pub mod poset;
pub mod pro;
pub mod snf;
pub mod specseq;
pub mod sparse;
pub mod subquotient;
pub mod tower;
pub mod witness;

pub use complexes::{ChainComplex, ChainMap};
pub use error::{Error, Result};
pub use group::{AbMap, Canonical, FgAbGroup};
pub use integer::Integer;
pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub use sparse::SparseVec;
pub use subquotient::Subquotient;
