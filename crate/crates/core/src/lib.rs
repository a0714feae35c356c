pub mod ar_tubes;
pub mod census;
pub mod cm;
pub mod diagram;
pub mod dvr;
pub mod error;
pub mod homological;
pub mod rims;
pub mod roots;

pub use error::{Error, Result};
