pub mod bessel;
pub mod bosonic;
pub mod cat_frame;
pub mod error;
pub mod linalg;
pub mod model;
pub mod propagator;
pub mod rwa;
pub mod spin;

pub use error::{Error, Result};
