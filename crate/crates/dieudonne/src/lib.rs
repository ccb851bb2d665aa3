//! Dieudonne modules of p-torsion group schemes with an action of a cyclic
//! p-group, computed exactly from the cohomology of unramified
//! Artin-Schreier covers of hyperelliptic curves.

// matrix code indexes several arrays with the same loop variable
#![allow(clippy::needless_range_loop)]

pub mod admissible;
pub mod curve;
pub mod dmodule;
pub mod error;
pub mod field;
pub mod gring;
pub mod harness;
pub mod linalg;
pub mod poly;
pub mod semilinear;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldRef, FieldSpec};
pub use linalg::{Matrix, Subspace};
pub use semilinear::SemilinearMap;
