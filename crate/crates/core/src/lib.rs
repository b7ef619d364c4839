//! Partial-transpose (PPT/NPT) classification of multipartite quantum states
//! and constructive NPT certificates for mixtures of an entangled pure state
//! with pure product states.
//!
//! Basis kets `|i_1 ... i_m>` map to flat indices in mixed radix with the
//! leftmost subsystem most significant. Labels are 0-based: the ket written
//! `|11>` in 1-based notation is index 0 here.

// `!(x < bound)` is deliberate: NaN must fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod par;
pub mod ppt;
pub mod qstate;
pub mod witness;

pub use error::{Error, Result};
