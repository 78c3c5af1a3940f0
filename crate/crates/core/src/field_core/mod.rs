//! Finite fields of odd characteristic, their characters, and exact cyclotomic values.

mod characters;
mod cycint;
mod cycnum;
mod field;
mod space;

pub use characters::{add_char, char_orthogonality_sum, gauss_sum, quad_char};
pub use cycint::CycInt;
pub use cycnum::{CycAccumulator, CycNum};
pub use field::{is_prime, make_field, Field, DEFAULT_FIELD_CAP};
pub use space::{CharTable, Space, DEFAULT_GRID_CAP};
