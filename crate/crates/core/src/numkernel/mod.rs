//! Branch-disciplined elementary functions, the dilogarithm, closed forms of
//! the L_k integrals and log-domain complex arithmetic.

mod elem;
mod li2;
mod lk;
mod logcomplex;

pub use elem::{cln, csqrt, expm1, normalize_phase, one_minus_exp};
pub use li2::li2;
pub use lk::{l0_closed, l1_closed, l2_closed, lk_closed};
pub use logcomplex::{lc_sum, LogComplex};
