pub mod cli;
pub mod costlaws;
pub mod diagram;
pub mod error;
pub mod fpgroup;
pub mod joins;
pub mod mesrel;
pub mod perm;
pub mod rational;

pub use error::{Error, Result};
