//! Hyperfocal reduction, Gabriel quivers and zigzag certificates for the
//! principal block of `k[P ⋊ H]`, with `P` an abelian p-group and `H` an
//! abelian p'-group.

pub mod abgroup;
pub mod action;
pub mod charfield;
pub mod decide;
pub mod error;
pub mod field;
pub mod format;
pub mod quiverbuild;
pub mod repcheck;
pub mod zigzag;

pub use error::{Error, Result};
