//! File formats, bundled fixtures, command line and HTTP session service
//! for `kanbench-core`.

pub mod cli;
pub mod doc;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod load;
pub mod report;
pub mod service;
pub mod session;

pub use doc::{Document, Kind};
pub use error::{ParseError, WorkbenchError};
pub use load::Loader;
