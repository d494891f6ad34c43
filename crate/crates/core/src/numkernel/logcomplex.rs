use std::ops::{Div, DivAssign, Mul, MulAssign, Neg};

use super::elem::{expm1, wrap_phase};
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// A complex number stored as (ln|z|, arg z) so that products of thousands of
/// factors and sums of terms like e^{1000} stay representable.
///
/// Zero is `logmag = -inf, phase = 0` and absorbs under multiplication.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex<T> {
    pub logmag: T,
    pub phase: T,
}

impl<T: Real> LogComplex<T> {
    pub fn new(logmag: T, phase: T) -> Self {
        if logmag == T::neg_infinity() {
            return Self::zero();
        }
        LogComplex {
            logmag,
            phase: wrap_phase(phase),
        }
    }

    pub fn zero() -> Self {
        LogComplex {
            logmag: T::neg_infinity(),
            phase: T::zero(),
        }
    }

    pub fn one() -> Self {
        LogComplex {
            logmag: T::zero(),
            phase: T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.logmag == T::neg_infinity()
    }

    pub fn from_complex(z: Cx<T>) -> Self {
        if z.re == T::zero() && z.im == T::zero() {
            return Self::zero();
        }
        // atan2 already lands in [-pi, pi]; new() folds -pi to pi
        Self::new(z.norm().ln(), z.im.atan2(z.re))
    }

    pub fn from_real(x: T) -> Self {
        Self::from_complex(cx(x, T::zero()))
    }

    /// e^w.
    pub fn exp(w: Cx<T>) -> Self {
        Self::new(w.re, w.im)
    }

    /// 1 - e^w, accurate for small w and safe for huge Re w.
    pub fn one_minus_exp(w: Cx<T>) -> Self {
        if w.re <= T::zero() {
            Self::from_complex(-expm1(w))
        } else {
            // 1 - e^w = -e^w (1 - e^{-w})
            let inner = Self::from_complex(-expm1(-w));
            if inner.is_zero() {
                return inner;
            }
            Self::new(w.re + inner.logmag, w.im + T::PI() + inner.phase)
        }
    }

    /// The logarithm logmag + i*phase (principal branch).
    pub fn ln(&self) -> Cx<T> {
        cx(self.logmag, self.phase)
    }

    pub fn to_complex(&self) -> Cx<T> {
        if self.is_zero() {
            return Cx::new(T::zero(), T::zero());
        }
        let r = self.logmag.exp();
        let ph = self.phase;
        // exact angles must give exact axes, otherwise 1 + (-1) leaves a residue
        if ph == T::zero() {
            cx(r, T::zero())
        } else if ph == T::PI() {
            cx(-r, T::zero())
        } else if ph == T::FRAC_PI_2() {
            cx(T::zero(), r)
        } else if ph == -T::FRAC_PI_2() {
            cx(T::zero(), -r)
        } else {
            cx(r * ph.cos(), r * ph.sin())
        }
    }

    pub fn recip(&self) -> Self {
        if self.is_zero() {
            return LogComplex {
                logmag: T::infinity(),
                phase: T::zero(),
            };
        }
        Self::new(-self.logmag, -self.phase)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.logmag, -self.phase)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let two = T::lit(2.0);
        Self::new(self.logmag / two, self.phase / two)
    }

    pub fn abs(&self) -> T {
        self.logmag.exp()
    }
}

impl<T: Real> Mul for LogComplex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::new(self.logmag + rhs.logmag, self.phase + rhs.phase)
    }
}

impl<T: Real> MulAssign for LogComplex<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Real> Div for LogComplex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<T: Real> DivAssign for LogComplex<T> {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl<T: Real> Neg for LogComplex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.logmag, self.phase + T::PI())
    }
}

/// Sum of log-domain terms. The largest magnitude is factored out first so the
/// scaled terms are at most 1; compensated summation keeps the result
/// independent of term order to within a few ulps.
pub fn lc_sum<T: Real>(terms: &[LogComplex<T>]) -> Result<LogComplex<T>> {
    if terms.is_empty() {
        return Err(Error::Empty);
    }
    let top = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.logmag)
        .fold(T::neg_infinity(), T::max);
    if top == T::neg_infinity() {
        return Ok(LogComplex::zero());
    }
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let z = LogComplex::new(t.logmag - top, t.phase).to_complex();
        re.add(z.re);
        im.add(z.im);
    }
    let s = cx(re.total(), im.total());
    let mut out = LogComplex::from_complex(s);
    if !out.is_zero() {
        out.logmag = out.logmag + top;
    }
    Ok(out)
}

struct Neumaier<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Default for Neumaier<T> {
    fn default() -> Self {
        Neumaier {
            sum: T::zero(),
            comp: T::zero(),
        }
    }
}

impl<T: Real> Neumaier<T> {
    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    fn total(&self) -> T {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type L = LogComplex<f64>;

    fn rel(a: Cx<f64>, b: Cx<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn sum_of_ones() {
        let s = lc_sum(&[L::one(), L::one()]).unwrap();
        assert!((s.logmag - 2f64.ln()).abs() < 1e-15);
        assert_eq!(s.phase, 0.0);
    }

    #[test]
    fn sum_factors_out_the_max() {
        let big = L::new(1000.0, 0.0);
        let s = lc_sum(&[big, big]).unwrap();
        assert!((s.logmag - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(s.phase, 0.0);
    }

    #[test]
    fn exact_cancellation_is_zero() {
        let s = lc_sum(&[L::one(), L::from_real(-1.0)]).unwrap();
        assert!(s.is_zero());
        let s = lc_sum(&[L::new(0.0, PI / 2.0), L::new(0.0, -PI / 2.0)]).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn empty_sum_is_an_error() {
        assert_eq!(lc_sum::<f64>(&[]), Err(Error::Empty));
    }

    #[test]
    fn zero_absorbs() {
        let z = L::zero() * L::new(500.0, 1.0);
        assert!(z.is_zero());
        assert!(lc_sum(&[L::zero(), L::zero()]).unwrap().is_zero());
        assert_eq!(lc_sum(&[L::zero(), L::one()]).unwrap(), L::one());
    }

    #[test]
    fn one_minus_exp_both_sides() {
        for w in [
            Cx::new(1e-9, 2e-9),
            Cx::new(-3.0, 0.7),
            Cx::new(4.0, -2.5),
            Cx::new(0.0, 1.0),
        ] {
            let a = L::one_minus_exp(w).to_complex();
            // the naive form cancels for tiny w; use the Taylor series there
            let b = if w.norm() < 1e-6 {
                -(w + w * w / 2.0 + w * w * w / 6.0)
            } else {
                Cx::new(1.0, 0.0) - w.exp()
            };
            assert!(rel(a, b) < 1e-14, "{w}: {a} vs {b}");
        }
        // far beyond f64 range
        let w = Cx::new(2000.0, 0.3);
        let l = L::one_minus_exp(w);
        assert!((l.logmag - 2000.0).abs() < 1e-12);
        assert!((l.phase - (0.3 - PI)).abs() < 1e-12);
        assert!(L::one_minus_exp(Cx::new(0.0, 0.0)).is_zero());
    }

    proptest! {
        #[test]
        fn roundtrip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            prop_assume!(re != 0.0 || im != 0.0);
            let z = Cx::new(re, im);
            let back = L::from_complex(z).to_complex();
            prop_assert!(rel(back, z) < 1e-14);
        }

        #[test]
        fn phase_stays_normalized(a in -50f64..50.0, b in -50f64..50.0, la in -5f64..5.0, lb in -5f64..5.0) {
            let p = L::new(la, a) * L::new(lb, b);
            prop_assert!(p.phase > -PI && p.phase <= PI);
            prop_assert_eq!(p.logmag, la + lb);
            let q = L::new(la, a) / L::new(lb, b);
            prop_assert!(q.phase > -PI && q.phase <= PI);
        }

        #[test]
        fn sum_is_permutation_invariant(
            terms in prop::collection::vec((-30f64..30.0, -4f64..4.0), 2..40),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let ts: Vec<L> = terms.iter().map(|&(m, p)| L::new(m, p)).collect();
            let mut shuffled = ts.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = lc_sum(&ts).unwrap();
            let b = lc_sum(&shuffled).unwrap();
            // compare relative to the scale of the terms, since sums can cancel
            let scale = ts.iter().map(|t| t.logmag).fold(f64::NEG_INFINITY, f64::max);
            let d = (a / L::new(scale, 0.0)).to_complex() - (b / L::new(scale, 0.0)).to_complex();
            prop_assert!(d.norm() <= 1e-12 * ts.len() as f64);
        }

        #[test]
        fn sum_matches_plain_addition(terms in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..30)) {
            let zs: Vec<Cx<f64>> = terms.iter().map(|&(a, b)| Cx::new(a, b)).collect();
            let plain: Cx<f64> = zs.iter().sum();
            let ls: Vec<L> = zs.iter().map(|&z| L::from_complex(z)).collect();
            let s = lc_sum(&ls).unwrap().to_complex();
            let scale: f64 = zs.iter().map(|z| z.norm()).sum();
            prop_assert!((s - plain).norm() <= 1e-13 * scale.max(1e-300));
        }
    }
}
