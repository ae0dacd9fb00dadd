pub mod error;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod orbital;
pub mod padic;
pub mod weil;

pub use error::{LabError, Result};
