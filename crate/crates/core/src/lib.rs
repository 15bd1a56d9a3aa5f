// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected too; index loops
// mirror the stencil and band formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod acceptance;
pub mod diffpoly;
pub mod gfun;
pub mod kdvlab;
pub mod painleve;
