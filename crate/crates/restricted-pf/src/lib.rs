pub mod error;
pub mod numkit;
pub mod specfun;
pub mod rademacher;
pub mod sineprod;
pub mod saddle;
pub mod expansions;
pub mod cli;

pub use error::{Error, Result};
pub use numkit::{APComplex, APRat, TruncSeries, DEFAULT_PREC};
