//! Exact-arithmetic laboratory for sequence entropy pairs, mean-sensitive
//! pairs and independence pairs on subshifts of finite type carrying Markov
//! measures.

pub mod entropy;
pub mod error;
pub mod folner;
pub mod independence;
pub mod measure;
pub mod oracle;
pub mod panel;
pub mod rational;
pub mod sensitivity;
pub mod symbolic;
pub mod verdict;

pub use error::{Error, Result};
