//! Truncated q-expansions and eigenform coefficient data.

mod eigenform;
mod expansion;

pub use eigenform::{stabilised_expansion, Eigenform, RootChoice};
pub use expansion::{Coefficient, QExpansion};

