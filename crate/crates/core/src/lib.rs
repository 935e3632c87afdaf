//! Exact q-expansions, Dirichlet characters, Eisenstein series, Rankin–Selberg
//! coefficient tables and interpolation factors over cyclotomic fields.

pub mod arith;
pub mod characters;
pub mod cyclo;
pub mod eisenstein;
pub mod error;
pub mod forms;
pub mod interp;
pub mod lfunc;
pub mod qseries;

pub use characters::{gauss_sum, DirichletCharacter, Flavor, LocAlgChar};
pub use cyclo::{ComplexAP, CycloNumber, QuadNumber};
pub use eisenstein::{EisensteinSpec, IdentityCheck};
pub use error::{Error, Result};
pub use interp::{InterpInput, Prediction};
pub use lfunc::{LValue, RankinSeries};
pub use qseries::{Eigenform, QExpansion, RootChoice};
