pub mod error;
pub mod factors;
pub mod formats;
pub mod fins;
pub mod group;
pub mod labelled;
pub mod obstruction;
pub mod lattices;
pub mod perm;
pub mod universal;

pub use error::{Error, Result};
pub use factors::{factor_multisets_equal, FactorMultiset, SimpleFactorId, TieBreak};
pub use group::PermGroup;
pub use perm::{Label, Permutation};
