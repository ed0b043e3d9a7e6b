//! Fibrations of finite monoids, lax actions and their Grothendieck
//! constructions, cleavages, automorphisms of Schreier extensions and the
//! second cohomology of monoids with coefficients in abelian groups.
//!
//! Every monoid is an explicit Cayley table; every structural claim is a scan.

pub mod automorphism;
pub mod catalog;
pub mod cleavage;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod fibration;
pub mod generators;
pub mod groth;
pub mod hom;
pub mod iso;
pub mod lax;
pub mod monoid;
pub mod report;
pub mod suite;
pub mod util;
pub mod verdict;

pub use error::{Error, Result};
pub use hom::MonoidHom;
pub use monoid::{Elem, FiniteMonoid, Submonoid};
pub use verdict::Verdict;
