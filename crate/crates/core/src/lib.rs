//! Finite universal algebras: congruences, subdirect products, term-condition
//! commutators, generator synthesis and a few free structures.

pub mod algebra;
pub mod closure;
pub mod commutator;
pub mod config;
pub mod congruence;
pub mod error;
pub mod free;
pub mod io;
pub mod partition;
pub mod reduct;
pub mod sample;
pub mod subdirect;
pub mod subpower;
pub mod synthesis;
pub mod term;
pub mod zoo;

pub use algebra::{FiniteAlgebra, MixedRadix, Signature, Symbol};
pub use config::Caps;
pub use congruence::{cg, con_lattice, Congruence, CongruenceLattice};
pub use error::{Error, Result};
pub use partition::Partition;
pub use term::Term;
