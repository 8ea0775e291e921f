//! Knot Floer invariants of simple knots `K(p,q,k)` in lens spaces, the
//! Berge and Tange families of knots with homology-sphere surgeries, and an
//! exhaustive check that the two descriptions agree.

pub mod arith;
pub mod cli;
pub mod cone;
pub mod error;
pub mod families;
pub mod floer;
pub mod knot;
pub mod poly;
pub mod sweep;

pub use error::{Error, Result};
pub use floer::{GradingProfile, Word};
pub use knot::{SimpleKnot, SurgeryDescriptor};
pub use poly::LaurentPolynomial;
