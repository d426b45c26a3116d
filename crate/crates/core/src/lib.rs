pub mod cli;
pub mod cutting_plane;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod lifting;
pub mod oracle;
pub mod proposal;
pub mod rgo;
pub mod sampler;

pub use error::{Error, Result};
