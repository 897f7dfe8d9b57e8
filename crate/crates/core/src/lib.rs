#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod generators;
pub mod io;
pub mod lqss;
pub mod network;
pub mod numerics;
pub mod reduction;
pub mod symplectic;

pub use error::{Error, Result};
