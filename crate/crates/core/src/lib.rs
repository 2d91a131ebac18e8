pub mod aeqs;
pub mod error;
pub mod gates;
pub mod learner;
pub mod qcore;
pub mod qqaf;
pub mod qsub;

pub use error::{Error, Result};
