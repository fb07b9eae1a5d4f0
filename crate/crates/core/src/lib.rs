// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod grid;
pub mod limits;
pub mod nu_engine;
pub mod oracle;
pub mod roots;
pub mod special_fn;
