//! Exact algebra for checking, at concrete parameters `(s, n)`, that the
//! extensions of `C_2` by `C_{2^{n+1}} x C_{2^{n+1}}` are good in 2-primary
//! Morava K-theory `K(s)`.
//!
//! The model of `K(s)^*(BH)` for `H = C_{2^{n+1}}^2` is the truncated ring
//! `F2[u,v]/(u^M, v^M)`, `M = 2^{(n+1)s}`, with `v_s = 1`. Everything is
//! computed exactly; there is no floating point anywhere.

mod bits;
pub mod error;
pub mod fgl;
pub mod group;
pub mod involution;
pub mod linalg;
pub mod ring;
pub mod series;
pub mod verifier;

pub use error::{Error, Result};
pub use fgl::{honda_fgl, honda_log, FormalGroup};
pub use ring::{make_ring, substitute, RingElement, RingParams};
pub use series::{BiSeries, RatSeries, UniPoly};
