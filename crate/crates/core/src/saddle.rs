//! Saddle-point data of the phase function
//!   F(z) = Li2(e^{xi(1-z)})/xi - Li2(e^{xi(1+z)})/xi - u z + 4p pi^2/xi
//! and the asymptotic formula for J_N(E; e^{xi/N}) built from it.

use crate::error::{domain, Error, Result};
use crate::jones::{band_coordinate, jones_at_cusp, jones_dual};
use crate::numkernel::{cln, csqrt, li2, LogComplex};
use crate::qdilog::EvalContext;
use crate::scalar::{cx, Cx, Real};

/// arccosh(3/2), the end of the u-range covered by the theorem.
pub fn kappa<T: Real>() -> T {
    T::lit(1.5).acosh()
}

fn check_u<T: Real>(u: T) -> Result<()> {
    if u > T::zero() && u < kappa::<T>() {
        Ok(())
    } else {
        domain(format!("u = {u} outside (0, arccosh(3/2))"))
    }
}

/// r(u) = sqrt((2cosh u + 1)(3 - 2cosh u)), so that
/// sqrt((2cosh u + 1)(2cosh u - 3)) is i r. Clamped at 0 so u = kappa works.
pub fn root_r<T: Real>(u: T) -> T {
    let c = u.cosh();
    let two = T::lit(2.0);
    ((two * c + T::one()) * (T::lit(3.0) - two * c)).max(T::zero()).sqrt()
}

/// phi(u) with u allowed up to and including kappa.
pub(crate) fn varphi_closed<T: Real>(u: T) -> Cx<T> {
    let half = T::lit(0.5);
    cln(cx(u.cosh() - half, -half * root_r(u)))
}

/// phi(u) = log(cosh u - 1/2 - (1/2) sqrt((2cosh u+1)(2cosh u-3))), purely imaginary.
pub fn varphi<T: Real>(u: T) -> Result<Cx<T>> {
    check_u(u)?;
    let v = varphi_closed(u);
    // |e^phi| = 1 exactly in exact arithmetic
    Ok(cx(T::zero(), v.im))
}

fn xi_of<T: Real>(u: T, p: u32) -> Cx<T> {
    cx(u, T::TAU() * T::from_u32(p).unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleData<T> {
    pub u: T,
    pub p: u32,
    pub xi: Cx<T>,
    pub theta: T,
    pub varphi: Cx<T>,
    pub sigma0: Cx<T>,
    pub a2: Cx<T>,
    pub f_sigma0: Cx<T>,
    pub s_e: Cx<T>,
    pub t_e: Cx<T>,
}

impl<T: Real> SaddleData<T> {
    /// sigma_m = sigma_0 + 2m pi i/xi.
    pub fn sigma(&self, m: u32) -> Cx<T> {
        self.sigma0 + shift(m, self.xi)
    }
}

/// 2m pi i / xi.
pub fn shift<T: Real>(m: u32, xi: Cx<T>) -> Cx<T> {
    cx(T::zero(), T::TAU() * T::from_u32(m).unwrap()) / xi
}

pub fn saddle_data<T: Real>(u: T, p: u32) -> Result<SaddleData<T>> {
    check_u(u)?;
    if p == 0 {
        return domain("p must be positive");
    }
    let xi = xi_of(u, p);
    let vphi = varphi(u)?;
    let theta = vphi.im;
    let r = root_r(u);
    let i = cx(T::zero(), T::one());
    let sigma0 = cx(T::zero(), theta + T::TAU()) / xi;
    let s_e = s_e_closed(u, vphi)?;
    Ok(SaddleData {
        u,
        p,
        xi,
        theta,
        varphi: vphi,
        sigma0,
        a2: xi * i * r / T::lit(2.0),
        f_sigma0: f_eval(sigma0, u, p)?,
        s_e,
        t_e: t_e(u)?,
    })
}

/// S_E(u) = Li2(e^{-u-phi}) - Li2(e^{-u+phi}) + u(phi + 2 pi i).
fn s_e_closed<T: Real>(u: T, vphi: Cx<T>) -> Result<Cx<T>> {
    let a = li2((-vphi - u).exp())?;
    let b = li2((vphi - u).exp())?;
    Ok(a - b + (vphi + cx(T::zero(), T::TAU())) * u)
}

pub fn s_e<T: Real>(u: T) -> Result<Cx<T>> {
    s_e_closed(u, varphi(u)?)
}

/// T_E(u) = 2 / sqrt((2cosh u+1)(2cosh u-3)) = -2i / r(u).
pub fn t_e<T: Real>(u: T) -> Result<Cx<T>> {
    check_u(u)?;
    Ok(cx(T::zero(), -T::lit(2.0) / root_r(u)))
}

fn in_u0<T: Real>(z: Cx<T>, u: T, p: u32) -> bool {
    let s = band_coordinate(z, u, p);
    s > T::zero() && s < T::one() / T::from_u32(p).unwrap()
}

fn f_at_zero<T: Real>(xi: Cx<T>, p: u32) -> Cx<T> {
    let pi = T::PI();
    cx(T::lit(4.0) * T::from_u32(p).unwrap() * pi * pi, T::zero()) / xi
}

/// F(z) on U_0 in the form
///   Li2(e^{-xi(1+z)})/xi - Li2(e^{-xi(1-z)})/xi + u z - 2 pi i,
/// whose Li2 arguments stay inside the unit disk. F(0) = 4p pi^2/xi is
/// returned at the corner z = 0.
pub fn f_eval<T: Real>(z: Cx<T>, u: T, p: u32) -> Result<Cx<T>> {
    let xi = xi_of(u, p);
    if z.re == T::zero() && z.im == T::zero() {
        return Ok(f_at_zero(xi, p));
    }
    if !in_u0(z, u, p) {
        return domain(format!("z = {z} outside U_0"));
    }
    let one = cx(T::one(), T::zero());
    let a = li2((-xi * (one + z)).exp())?;
    let b = li2((-xi * (one - z)).exp())?;
    Ok((a - b) / xi + z * u - cx(T::zero(), T::TAU()))
}

/// The defining form of F, kept for cross-checking.
pub fn f_eval_original<T: Real>(z: Cx<T>, u: T, p: u32) -> Result<Cx<T>> {
    let xi = xi_of(u, p);
    let one = cx(T::one(), T::zero());
    let a = li2((xi * (one - z)).exp())?;
    let b = li2((xi * (one + z)).exp())?;
    Ok((a - b) / xi - z * u + f_at_zero(xi, p))
}

/// F'(z) = log(1 - e^{-xi(1+z)}) + log(1 - e^{-xi(1-z)}) + u, the branch that
/// is the actual derivative of [`f_eval`] on U_0.
pub fn f_prime<T: Real>(z: Cx<T>, u: T, p: u32) -> Result<Cx<T>> {
    if !in_u0(z, u, p) {
        return domain(format!("z = {z} outside U_0"));
    }
    let xi = xi_of(u, p);
    let one = cx(T::one(), T::zero());
    let a = cln(one - (-xi * (one + z)).exp());
    let b = cln(one - (-xi * (one - z)).exp());
    Ok(a + b + u)
}

/// log(e^u + e^{-u} - e^{xi z} - e^{-xi z}) with the principal log. Agrees
/// with [`f_prime`] modulo 2 pi i.
pub fn f_prime_single_log<T: Real>(z: Cx<T>, u: T, p: u32) -> Cx<T> {
    let xi = xi_of(u, p);
    let e = (xi * z).exp();
    cln(cx(T::lit(2.0) * u.cosh(), T::zero()) - e - e.inv())
}

/// F''(z) = xi (e^{-xi z} - e^{xi z}) / (e^u + e^{-u} - e^{xi z} - e^{-xi z}).
pub fn f_second<T: Real>(z: Cx<T>, u: T, p: u32) -> Cx<T> {
    let xi = xi_of(u, p);
    let e = (xi * z).exp();
    let ei = e.inv();
    xi * (ei - e) / (cx(T::lit(2.0) * u.cosh(), T::zero()) - e - ei)
}

/// U_m = {m/p < Re z + (u/2p pi) Im z < (m+1)/p}.
pub fn in_u<T: Real>(z: Cx<T>, m: u32, u: T, p: u32) -> bool {
    let s = band_coordinate(z, u, p);
    let pf = T::from_u32(p).unwrap();
    s > T::from_u32(m).unwrap() / pf && s < T::from_u32(m + 1).unwrap() / pf
}

/// Phi_m(z) = F(z - 2m pi i/xi) on U_m; at the corner P_W = 2m pi i/xi it is F(0).
pub fn phi_m<T: Real>(z: Cx<T>, m: u32, u: T, p: u32) -> Result<Cx<T>> {
    let w = z - shift(m, xi_of(u, p));
    if w.re == T::zero() && w.im == T::zero() {
        return f_eval(w, u, p);
    }
    if !in_u(z, m, u, p) {
        return domain(format!("z = {z} outside U_{m}"));
    }
    // the shifted point may round to just outside U_0; F is analytic across
    // that edge so evaluate it directly
    let xi = xi_of(u, p);
    let one = cx(T::one(), T::zero());
    let a = li2((-xi * (one + w)).exp())?;
    let b = li2((-xi * (one - w)).exp())?;
    Ok((a - b) / xi + w * u - cx(T::zero(), T::TAU()))
}

/// sqrt(-pi) T_E^{1/2} / (2 sinh(u/2)), with the principal root of T_E.
pub fn saddle_prefactor<T: Real>(u: T) -> Result<Cx<T>> {
    let sq_minus_pi = cx(T::zero(), T::PI().sqrt());
    Ok(sq_minus_pi * csqrt(t_e(u)?) / (T::lit(2.0) * (u / T::lit(2.0)).sinh()))
}

/// sqrt(2 pi) e^{pi i/4} / ((1 + 2cosh u)(3 - 2cosh u))^{1/4}, the same constant
/// written without nested roots.
pub fn saddle_constant_direct<T: Real>(u: T) -> Cx<T> {
    let c = u.cosh();
    let two = T::lit(2.0);
    let m = (T::TAU()).sqrt() / ((T::one() + two * c) * (T::lit(3.0) - two * c)).powf(T::lit(0.25));
    cx(T::zero(), T::FRAC_PI_4()).exp() * m
}

/// The right-hand side of the asymptotic formula:
///   sqrt(-pi)/(2 sinh(u/2)) T_E^{1/2} J_p(E; e^{4N pi^2/xi}) (N/xi)^{1/2} e^{(N/xi) S_E}.
pub fn theorem_rhs<T: Real>(ctx: &EvalContext<T>) -> Result<LogComplex<T>> {
    let pre = LogComplex::from_complex(saddle_prefactor(ctx.u)?);
    let n_over_xi = cx(ctx.nf(), T::zero()) / ctx.xi;
    let root = LogComplex::from_complex(n_over_xi).sqrt();
    Ok(pre * jones_dual(ctx) * root * LogComplex::exp(n_over_xi * s_e(ctx.u)?))
}

/// J_N(E; e^{xi/N}) divided by [`theorem_rhs`]; tends to 1 like 1 + O(1/N).
pub fn theorem_ratio<T: Real>(ctx: &EvalContext<T>, allow_noncoprime: bool) -> Result<Cx<T>> {
    if !allow_noncoprime && !ctx.coprime() {
        return Err(Error::NotCoprime { p: ctx.p, n: ctx.n });
    }
    Ok((jones_at_cusp(ctx) / theorem_rhs(ctx)?).to_complex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Cx<f64>;

    #[test]
    fn kappa_value() {
        let k: f64 = kappa();
        assert!((k - 0.962424).abs() < 1e-6);
        assert!((k.cosh() - 1.5).abs() < 1e-15);
        assert!((2.0 * k.cosh() - 2.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn varphi_limits() {
        let small = varphi(1e-8).unwrap();
        assert!((small.im + PI / 3.0).abs() < 1e-7);
        let near_kappa = varphi(kappa::<f64>() - 1e-12).unwrap();
        assert!(near_kappa.norm() < 1e-5);
        assert_eq!(varphi_closed(kappa::<f64>()).im, 0.0);
        let v = varphi(0.5).unwrap();
        assert_eq!(v.re, 0.0);
        assert!(varphi_closed(0.5f64).re.abs() < 1e-12);
        assert!(varphi(1.0).is_err());
    }

    #[test]
    fn saddle_invariants() {
        for u in [0.05f64, 0.2, 0.5, 0.9] {
            for p in 1..=3 {
                let s = saddle_data(u, p).unwrap();
                let e = s.varphi.exp();
                assert!((e.norm() - 1.0).abs() < 1e-12);
                assert!(s.theta > -PI / 3.0 && s.theta < 0.0);
                let one = C::new(u.exp() + (-u).exp(), 0.0) - e - e.inv();
                assert!((one - 1.0).norm() < 1e-12);
                assert!(s.a2.re < 0.0);
                assert!(f_prime(s.sigma0, u, p).unwrap().norm() < 1e-10);
                let se = s.xi * (s.f_sigma0 + C::new(0.0, 2.0 * PI));
                assert!((se - s.s_e).norm() < 1e-10);
                // sigma_0 lies on the line s = (theta + 2pi)/(2p pi)
                let band = band_coordinate(s.sigma0, u, p);
                assert!((band - (s.theta + 2.0 * PI) / (2.0 * p as f64 * PI)).abs() < 1e-14);
                assert!(s.t_e.re == 0.0 && s.t_e.im < 0.0);
            }
        }
    }

    #[test]
    fn s_e_at_small_u_is_the_volume() {
        let v = s_e(1e-9f64).unwrap();
        assert!(v.re.abs() < 1e-7);
        assert!((v.im - 2.0298832128).abs() < 1e-7);
    }

    #[test]
    fn second_derivative_at_saddle() {
        for u in [0.2, 0.5, 0.9] {
            let s = saddle_data(u, 2).unwrap();
            let want = s.xi * C::new(0.0, root_r(u));
            assert!((f_second(s.sigma0, u, 2) - want).norm() < 1e-10);
        }
    }

    #[test]
    fn f_at_zero_and_sigma() {
        for p in 1..=3 {
            let s = saddle_data(0.5, p).unwrap();
            let f0 = f_eval(C::new(0.0, 0.0), 0.5, p).unwrap();
            assert!(f0.re > 0.0 && f0.re < s.f_sigma0.re);
            let d = s.xi * (s.f_sigma0 - f0);
            assert!(d.re.abs() < 1e-10 && d.im > 0.0);
        }
    }

    #[test]
    fn phi_m_special_points() {
        let (u, p) = (0.5, 3);
        let s = saddle_data(u, p).unwrap();
        for m in 0..p {
            let v = phi_m(s.sigma(m), m, u, p).unwrap();
            assert!((v - s.f_sigma0).norm() < 1e-12);
            let pw = shift(m, s.xi);
            assert_eq!(phi_m(pw, m, u, p).unwrap(), f_eval(C::new(0.0, 0.0), u, p).unwrap());
        }
        assert!(phi_m(C::new(0.9, 0.0), 0, u, p).is_err());
    }

    #[test]
    fn taylor_remainder_is_cubic() {
        let (u, p) = (0.5, 2);
        let s = saddle_data(u, p).unwrap();
        let rem = |h: f64| {
            let hh = C::new(h, 0.0);
            (f_eval(s.sigma0 + hh, u, p).unwrap() - s.f_sigma0 - s.a2 * hh * hh).norm()
        };
        let hs = [1e-2, 5e-3, 2.5e-3];
        let r: Vec<f64> = hs.iter().map(|&h| rem(h)).collect();
        for j in 0..2 {
            let e = (r[j] / r[j + 1]).ln() / 2f64.ln();
            assert!((2.8..=3.2).contains(&e), "exponent {e}");
        }
    }

    #[test]
    fn prefactor_routes_agree() {
        for u in [0.2f64, 0.5, 0.9] {
            let a = saddle_prefactor(u).unwrap() * (2.0 * (u / 2.0).sinh());
            let b = saddle_constant_direct(u);
            assert!((a - b).norm() < 1e-12);
            assert!(b.re > 0.0);
        }
    }

    #[test]
    fn ratio_near_one() {
        let ctx = EvalContext::new(0.5, 2, 101).unwrap();
        let r = theorem_ratio(&ctx, false).unwrap();
        assert!((r - 1.0).norm() < 0.1);
        let ctx = EvalContext::new(0.5, 1, 101).unwrap();
        assert!((theorem_ratio(&ctx, false).unwrap() - 1.0).norm() < 0.1);
        let ctx = EvalContext::new(0.5, 2, 100).unwrap();
        assert!(theorem_ratio(&ctx, false).is_err());
        assert!(theorem_ratio(&ctx, true).is_ok());
    }

    #[test]
    fn growth_rate_of_rhs() {
        // for p > 1 the dual Jones factor grows too, like e^{p(p-1) Re A},
        // A = 4N pi^2/xi, on top of e^{(N/xi) S_E}
        for p in [1u32, 2] {
            let lm = |n| theorem_rhs(&EvalContext::new(0.5, p, n).unwrap()).unwrap().logmag;
            let rate = (lm(800) - lm(400)) / 400.0;
            let xi = C::new(0.5, 2.0 * PI * p as f64);
            let dual = (p * (p - 1)) as f64 * (C::new(4.0 * PI * PI, 0.0) / xi).re;
            let want = (s_e(0.5).unwrap() / xi).re + dual;
            assert!((rate / want - 1.0).abs() < 0.01, "p = {p}: {rate} vs {want}");
        }
    }

    fn u_p() -> impl Strategy<Value = (f64, u32)> {
        (prop::sample::select(vec![0.2, 0.5, 0.9]), 1u32..=3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn forms_of_f_agree((u, p) in u_p(), s in 0.02f64..0.98, y in -0.3f64..0.3) {
            let pf = p as f64;
            let z = C::new(s / pf - u / (2.0 * pf * PI) * y, y);
            let a = f_eval(z, u, p).unwrap();
            let b = f_eval_original(z, u, p).unwrap();
            prop_assert!((a - b).norm() < 1e-10, "{} {}", a, b);
        }

        #[test]
        fn derivative_matches_differences((u, p) in u_p(), s in 0.02f64..0.98, y in -0.3f64..0.3) {
            let pf = p as f64;
            let z = C::new(s / pf - u / (2.0 * pf * PI) * y, y);
            let h = 1e-6;
            let fd = (f_eval(z + h, u, p).unwrap() - f_eval(z - h, u, p).unwrap()) / (2.0 * h);
            let d = f_prime(z, u, p).unwrap();
            prop_assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0));
            // the single-log form differs by a multiple of 2 pi i
            let k = (f_prime_single_log(z, u, p) - d).im / (2.0 * PI);
            prop_assert!((k - k.round()).abs() < 1e-9);
        }
    }
}
