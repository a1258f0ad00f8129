#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biortho;
pub mod chain;
pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod models;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
