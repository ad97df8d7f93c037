//! Explicit group cohomology of `G`-lattices.
//!
//! Independent of the transfer formulas in [`crate::torus`]: lattices are
//! built as matrices and `H^q` is read off normalized cochains.

pub mod bar;
pub mod lattice;
pub mod oracle;

pub use bar::{cohomology, Budget, Cohomology};
pub use lattice::{build_character_lattices, CharacterLattices, GLattice};
pub use oracle::{
    ono_tamagawa_oracle, oracle, sha, verify_structure, xi_test, Check, CheckStatus, OracleReport, StructureReport, XiOutcome,
};
