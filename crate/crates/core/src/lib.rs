//! Exact combinatorial engine for Khovanov-style link homology.
//!
//! The pipeline: parse a planar diagram ([`diagram`]), resolve every
//! crossing into the hypercube of smoothings ([`resolution`]), apply one of
//! three Frobenius-type systems along the saddles ([`frobenius`]), assemble a
//! signed integer chain complex ([`complex`]), and compute bigraded homology
//! by exact integer linear algebra ([`homology`]).  The [`equivalence`]
//! module certifies, by explicit chain isomorphisms, that the nested theory
//! and every admissible sign variant of it agree with ordinary Khovanov
//! homology.
//!
//! Everything is deterministic: identical inputs produce identical tables,
//! byte for byte.  All arithmetic is exact (machine integers where growth is
//! bounded, big integers inside Smith normal form).
//!
//! The crate is `no_std` + `alloc`; all IO lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod complex;
pub mod corpus;
pub mod diagram;
pub mod equivalence;
pub mod frobenius;
pub mod homology;
pub mod matrix;
pub mod resolution;
pub mod rng;

pub use diagram::{parse_pd, parse_pd_oriented, LinkDiagram};
pub use resolution::{resolve, ResolvedState};
