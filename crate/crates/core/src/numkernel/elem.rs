//! Elementary complex functions with the branch conventions used throughout:
//! principal log with imaginary part in (-pi, pi], principal square root.

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Reduces an angle into (-pi, pi].
pub fn normalize_phase<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(wrap_phase(x))
}

#[inline]
pub(crate) fn wrap_phase<T: Real>(x: T) -> T {
    let pi = T::PI();
    if x > -pi && x <= pi {
        return x;
    }
    let tau = T::TAU();
    let mut r = x - tau * (x / tau).round();
    if r <= -pi {
        r = r + tau;
    } else if r > pi {
        r = r - tau;
    }
    r
}

/// Principal logarithm. `atan2` returns -pi for a negative real with a
/// negative zero imaginary part, which the (-pi, pi] convention folds to pi.
pub fn cln<T: Real>(z: Cx<T>) -> Cx<T> {
    let mut arg = z.im.atan2(z.re);
    if arg == -T::PI() {
        arg = T::PI();
    }
    cx(z.norm().ln(), arg)
}

pub fn csqrt<T: Real>(z: Cx<T>) -> Cx<T> {
    let l = cln(z);
    let r = z.norm().sqrt();
    let h = l.im / T::lit(2.0);
    cx(r * h.cos(), r * h.sin())
}

/// e^z - 1 without cancellation for small z.
pub fn expm1<T: Real>(z: Cx<T>) -> Cx<T> {
    let (a, b) = (z.re, z.im);
    let half = (b / T::lit(2.0)).sin();
    let re = a.exp_m1() * b.cos() - T::lit(2.0) * half * half;
    cx(re, a.exp() * b.sin())
}

/// 1 - e^z.
#[inline]
pub fn one_minus_exp<T: Real>(z: Cx<T>) -> Cx<T> {
    -expm1(z)
}
