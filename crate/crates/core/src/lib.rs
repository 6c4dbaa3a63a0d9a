//! Equational reasoning about varieties of aperiodic monoids with commuting
//! idempotents: word combinatorics, finite monoids, Rees quotients, bounded
//! derivations, congruence oracles and a catalog of named varieties.

pub mod catalog;
pub mod derive;
pub mod error;
pub mod monoid;
pub mod normal;
pub mod oracle;
pub mod rees;
pub mod replay;
pub mod system;
pub mod word;

pub use error::{Error, Result};
pub use monoid::{Assignment, FiniteMonoid, SatOutcome};
pub use word::{ident, letter, parse_identity, parse_word, w, Decomposition, Identity, Letter, Word};
