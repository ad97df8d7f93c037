//! Named families of CM fields and structural classifiers.

pub mod arith;
pub mod classify;
pub mod families;

pub use arith::{factorize, legendre};
pub use classify::{abelian_classifier, dihedral_degree, split_classifier, Prediction, SplitVerdict};
pub use families::{cyclotomic, dihedral_cm, q8_landau, Constructed, DihedralReport, Q8Construction};
