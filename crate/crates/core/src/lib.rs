//! Tamagawa numbers of CM tori and norm-type tori `T^{K/E,k}` computed from
//! finite group data.
//!
//! The fast path ([`torus`]) evaluates transfer-map formulas over finite
//! abelian groups. [`cohomology`] recomputes the same invariants by
//! brute-force bar-resolution linear algebra and serves as an independent
//! oracle.

pub mod abelian;
pub mod cohomology;
pub mod datum;
pub mod error;
pub mod fields;
pub mod group;
pub mod io;
pub mod landau;
pub mod torus;
pub mod transfer;

pub use abelian::{AbHom, FinAb};
pub use datum::{NormTorusDatum, SubgroupPair};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup};
pub use num_rational::BigRational;
pub use torus::{tamagawa, TamagawaReport};
