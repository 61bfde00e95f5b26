//! IO and orchestration on top of `parpart-core`: canonical JSON formats,
//! a parallel verification runner, and the helpers behind the `parpart`
//! binary.

pub mod error;
pub mod formats;
pub mod pipeline;
pub mod verification;

pub use error::{Error, Result};
