//! Dirichlet characters, Gauss sums, locally algebraic characters of `Z_p^x`
//! and the slice geometry of weight points.

mod dirichlet;
mod gauss;
mod localg;
mod registry;
mod slice;

pub use dirichlet::{all_characters, generators, primitive_characters, DirichletCharacter, Generator};
pub use gauss::gauss_sum;
pub use localg::{char_eval, LocAlgChar};
pub use registry::{character_from_json, character_from_label};
pub use slice::{slice_intersection, slice_membership, Flavor, SlicePoint};
