//! Gauss hypergeometric evaluation in the unit disk, exact checks of the
//! parameter conditions for exponential and Janowski starlikeness/convexity,
//! and grid-based numerical audits of the corresponding subordinations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod crosscheck;
pub mod domains;
pub mod error;
pub mod exec;
pub mod foxwright;
pub mod hypergeom;
pub mod report;
pub mod scan;
pub mod specfun;
pub mod verify;
