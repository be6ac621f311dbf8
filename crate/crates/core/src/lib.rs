pub mod error;
pub mod format;
pub mod bibundle;
pub mod circlegeom;
pub mod convalg;
pub mod groupoid;
pub mod linalg;
pub mod nctorus;
pub mod scalars;
pub mod symprel;
mod util;

pub use error::{Error, Result};
