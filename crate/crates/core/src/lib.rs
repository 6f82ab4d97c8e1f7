//! Exact arithmetic for R. Thompson's group F and the classification of its
//! finite-index subgroups.
//!
//! Elements of F are piecewise-linear homeomorphisms of [0,1] with dyadic
//! rational breakpoints and power-of-two slopes, represented exactly by their
//! breakpoint lists ([`plmap::PLMap`]). The slope homomorphism
//! ([`thompson::phi`]) sends an element to the pair of log2-slopes at the two
//! endpoints; finite-index subgroups correspond to finite-index sublattices
//! of Z^2 ([`lattice::LatticeSubgroup`]), and the isomorphism problem for
//! them is decided by lattice invariants ([`classify`]).

pub mod classify;
pub mod dyadic;
pub mod lattice;
pub mod plmap;
pub mod thompson;

pub use classify::{ExtensionSummary, FIFSubgroup, IsoVerdict, IsoWitness};
pub use dyadic::{Dyadic, Rational};
pub use lattice::{LatticeSubgroup, RectPair};
pub use plmap::{Orbital, PLMap};
pub use thompson::PhiImage;
