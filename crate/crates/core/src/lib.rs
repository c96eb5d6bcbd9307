pub mod canon;
pub mod catalog;
pub mod embed;
pub mod error;
pub mod exact;
pub mod filter;
pub mod gen;
pub mod graph;
pub mod io;
pub mod n11;
pub mod numeric;
pub mod propagate;
pub mod repr;
pub mod scenario;
pub mod search;
pub mod span;

pub use canon::{canonical_form, CanonicalForm};
pub use embed::{find_induced_embedding, Embedding, Matcher};
pub use error::{Error, Result};
pub use graph::Graph;
