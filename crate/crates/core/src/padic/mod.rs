//! Arithmetic in `F = Q_p` and its unramified quadratic extension `E`.

mod field;
mod literal;
mod norm;
mod quad;
mod scalar;
mod traits;

pub use field::{is_prime, smallest_nonresidue, Field, FieldConfig, DEFAULT_PRECISION};
pub use literal::{parse_padic, parse_quad};
pub use norm::solve_norm_equation;
pub use quad::Quad;
pub use scalar::PAdic;
pub use traits::{LocalScalar, ScalarKey};
