// `!(x > 0.0)` is used on purpose so that NaN parameters fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod classical;
pub mod dnc;
pub mod ep;
pub mod inference;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod solvers;
