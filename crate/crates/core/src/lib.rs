//! Scale profiles of the sizes of finite metric spaces: the spread and its
//! order-`q` generalizations, Leinster–Cobbold diversity, magnitude and
//! maximum diversity, plus the spread dimension and closed forms for the
//! interval and spheres.
//!
//! ```
//! use metric_spread::generators::k32;
//! use metric_spread::spread::spread0;
//!
//! let e = spread0(&k32(), 1.0).unwrap();
//! assert!(e > 1.0 && e < 5.0);
//! ```

pub mod cli;
pub mod continuum;
pub mod descriptor;
pub mod dimension;
pub mod diversity;
pub mod error;
pub mod generators;
pub mod io;
pub mod magnitude;
pub mod metric;
pub mod spread;

pub use error::{Error, Result};
