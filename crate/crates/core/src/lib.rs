//! Meshless derivative operators on scattered 2-D nodes, tuned for resolving
//! power by blending the weights of two kernels per node.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod harness;
pub mod kernels;
pub mod nodeset;
pub mod respower;
pub mod solver;
pub mod weights;

pub use error::{Error, Result};
