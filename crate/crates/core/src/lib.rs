pub mod admissible;
pub mod error;
pub mod gen;
pub mod orlicz;
pub mod ordinal;
pub mod scalars;
pub mod stepfn;
pub mod suites;
pub mod talagrand;
pub mod topology;

pub use error::{Error, Result};
pub use ordinal::Ordinal;
