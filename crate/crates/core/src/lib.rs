//! Exact and numeric exterior calculus on low-dimensional Lie algebras.
//!
//! The crate covers SU(2)-structures on 5-dimensional Lie algebras and their
//! lifts to SU(3)- and G2-structures on cylinders, together with the curvature
//! machinery used to certify holonomy by the rank of the curvature span.
//!
//! Layers, bottom-up: [`scalars`] (coefficient rings), [`exterior`] (forms),
//! [`liealg`] (Chevalley–Eilenberg differentials), [`catalog`] (named algebras
//! and structures), [`structures`] (condition checkers), [`curvature`]
//! (left-invariant Riemannian geometry), [`flow`] (evolution ODEs) and
//! [`holonomy`] (time-dependent frames and rank certification). [`verify`]
//! bundles the reference checks behind the `verify-paper` command.

pub mod catalog;
pub mod curvature;
pub mod exterior;
pub mod flow;
pub mod holonomy;
pub mod liealg;
pub mod linalg;
pub mod scalars;
pub mod structfile;
pub mod structures;
pub mod verify;

pub use exterior::{Form, Vector};
pub use liealg::{BasisChange, LieAlgebra};
pub use scalars::{Coeff, Jet2, Poly, Rational};
