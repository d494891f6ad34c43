//! The quantum dilogarithm
//!   T_N(z) = 1/4 int e^{(2z-1)x} / (x sinh x sinh(gamma x)) dx,  E_N = e^{T_N},
//! by contour quadrature, and checks of its functional equations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::numkernel::{expm1, lk_closed, one_minus_exp, LogComplex};
use crate::quadrature::{tail_reach, Kernelized, Piece, QuadratureConfig, EVALUATOR_REACH, MAX_REFINE, TAIL_SHARE};
use crate::saddle::kappa;
use crate::scalar::{cx, Cx, Real};

/// The triple (u, p, N) with xi = u + 2 p pi i and gamma = xi / (2 N pi i).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalContext<T> {
    pub u: T,
    pub p: u32,
    pub n: u32,
    pub xi: Cx<T>,
    pub gamma: Cx<T>,
}

impl<T: Real> EvalContext<T> {
    pub fn new(u: T, p: u32, n: u32) -> Result<Self> {
        if !(u > T::zero() && u < kappa::<T>()) {
            return domain(format!("u = {u} outside (0, arccosh(3/2))"));
        }
        if p == 0 || n == 0 {
            return domain("p and N must be positive");
        }
        let pf = T::from_u32(p).unwrap();
        let nf = T::from_u32(n).unwrap();
        Ok(EvalContext {
            u,
            p,
            n,
            xi: cx(u, T::TAU() * pf),
            // written out so that Re gamma is exactly p/N
            gamma: cx(pf / nf, -u / (T::TAU() * nf)),
        })
    }

    pub fn pf(&self) -> T {
        T::from_u32(self.p).unwrap()
    }

    pub fn nf(&self) -> T {
        T::from_u32(self.n).unwrap()
    }

    pub fn coprime(&self) -> bool {
        gcd(self.p, self.n) == 1
    }

    /// Convergence strip of T_N: -p/(2N) < Re z < 1 + p/(2N).
    pub fn in_strip(&self, z: Cx<T>) -> bool {
        let half = self.gamma.re / T::lit(2.0);
        z.re > -half && z.re < T::one() + half
    }
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn tn_kernel<T: Real>(gamma: Cx<T>) -> impl Fn(Piece, Cx<T>) -> Cx<T> {
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    move |piece, x| match piece {
        // 4 e^{-gamma x} / (x (1 - e^{-2x}) (1 - e^{-2 gamma x})), times e^{(2z-2)x}
        Piece::Right => {
            (-gamma * x).exp() * four
                / (x * one_minus_exp(x * -two) * one_minus_exp(gamma * x * -two))
        }
        // 4 e^{gamma x} / (x (1 - e^{2x}) (1 - e^{2 gamma x})), times e^{2zx}
        Piece::Left => {
            (gamma * x).exp() * four / (x * one_minus_exp(x * two) * one_minus_exp(gamma * x * two))
        }
        Piece::Arc => (x * x.sinh() * (gamma * x).sinh()).inv(),
    }
}

/// Truncation points (left, right) meeting the tail budget for T_N(z).
fn tn_reach<T: Real>(ctx: &EvalContext<T>, z: Cx<T>, cfg: &QuadratureConfig<T>) -> Result<(T, T)> {
    if !ctx.in_strip(z) {
        return domain(format!(
            "Re z = {} outside the strip (-{p}/(2N), 1 + {p}/(2N)) for N = {n}",
            z.re,
            p = ctx.p,
            n = ctx.n
        ));
    }
    let two = T::lit(2.0);
    let rg = ctx.gamma.re;
    let bound = |a: T| {
        move |l: T| {
            (-a * l).exp() / (a * l * (-(-two * l).exp_m1()) * (-(-two * rg * l).exp_m1()))
        }
    };
    let a_right = two + rg - two * z.re;
    let a_left = two * z.re + rg;
    let target = cfg.tol * T::lit(TAIL_SHARE);
    // reported against the tail budget, not the full tolerance
    let fail = |a: T| Error::Quadrature {
        tol: target.to_f64().unwrap(),
        estimate: bound(a)(cfg.tail_cutoff).to_f64().unwrap_or(f64::INFINITY),
    };
    let l = tail_reach(bound(a_left), target, cfg.tail_cutoff).ok_or_else(|| fail(a_left))?;
    let r = tail_reach(bound(a_right), target, cfg.tail_cutoff).ok_or_else(|| fail(a_right))?;
    Ok((l, r))
}

fn accept<T: Real>(v: Cx<T>, est: T, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
    if est <= cfg.tol * v.norm().max(T::one()) {
        Ok(v)
    } else {
        Err(Error::Quadrature {
            tol: cfg.tol.to_f64().unwrap(),
            estimate: est.to_f64().unwrap_or(f64::INFINITY),
        })
    }
}

/// Precomputed T_N quadrature for a fixed context; cheap per z.
pub struct TnEvaluator<T> {
    ctx: EvalContext<T>,
    cfg: QuadratureConfig<T>,
    kern: Kernelized<T>,
}

impl<T: Real> TnEvaluator<T> {
    pub fn new(ctx: &EvalContext<T>, cfg: &QuadratureConfig<T>) -> Self {
        Self::with_reach(ctx, cfg, T::lit(EVALUATOR_REACH))
    }

    /// Precomputes the rays only up to `reach`; points needing more fall back
    /// to a one-off evaluation.
    pub fn with_reach(ctx: &EvalContext<T>, cfg: &QuadratureConfig<T>, reach: T) -> Self {
        let reach = reach.min(cfg.tail_cutoff);
        TnEvaluator {
            ctx: *ctx,
            cfg: *cfg,
            kern: Kernelized::build(cfg, reach, reach, tn_kernel(ctx.gamma)),
        }
    }

    pub fn ctx(&self) -> &EvalContext<T> {
        &self.ctx
    }

    /// Value and error estimate (panel estimate plus tail bound) at the base
    /// panel density, without refinement.
    pub fn eval_with_error(&self, z: Cx<T>) -> Result<(Cx<T>, T)> {
        let (l, r) = tn_reach(&self.ctx, z, &self.cfg)?;
        let (nl, nr) = (self.kern.panels_for(l), self.kern.panels_for(r));
        let (have_l, have_r) = self.kern.ray_panels();
        if nl > have_l || nr > have_r {
            let v = t_n(z, &self.ctx, &self.cfg)?;
            return Ok((v, T::zero()));
        }
        let (s, err) = self.kern.sum(z, nl, nr);
        let quarter = T::lit(0.25);
        let tails = T::lit(2.0 * TAIL_SHARE) * self.cfg.tol;
        Ok((s * quarter, err * quarter + tails))
    }

    pub fn eval(&self, z: Cx<T>) -> Result<Cx<T>> {
        let (v, est) = self.eval_with_error(z)?;
        match accept(v, est, &self.cfg) {
            Ok(v) => Ok(v),
            Err(_) => refine(z, &self.ctx, &self.cfg, 1),
        }
    }

    /// Parallel evaluation; each point is computed independently so the
    /// result does not depend on scheduling.
    pub fn eval_many(&self, zs: &[Cx<T>]) -> Vec<Result<Cx<T>>> {
        zs.par_iter().map(|&z| self.eval(z)).collect()
    }

    pub fn e_n(&self, z: Cx<T>) -> Result<LogComplex<T>> {
        Ok(LogComplex::exp(self.eval(z)?))
    }
}

fn refine<T: Real>(
    z: Cx<T>,
    ctx: &EvalContext<T>,
    cfg: &QuadratureConfig<T>,
    start: u32,
) -> Result<Cx<T>> {
    let mut last = Error::Quadrature {
        tol: cfg.tol.to_f64().unwrap(),
        estimate: f64::INFINITY,
    };
    for level in start..=MAX_REFINE {
        let c = cfg.refined(level);
        let (l, r) = tn_reach(ctx, z, &c)?;
        let kern = Kernelized::build(&c, l, r, tn_kernel(ctx.gamma));
        let (s, err) = kern.sum(z, usize::MAX, usize::MAX);
        let quarter = T::lit(0.25);
        let est = err * quarter + T::lit(2.0 * TAIL_SHARE) * c.tol;
        match accept(s * quarter, est, &c) {
            Ok(v) => return Ok(v),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// T_N(z) by quadrature, refining the panels up to [`MAX_REFINE`] times.
pub fn t_n<T: Real>(z: Cx<T>, ctx: &EvalContext<T>, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
    refine(z, ctx, cfg, 0)
}

pub fn e_n<T: Real>(
    z: Cx<T>,
    ctx: &EvalContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<LogComplex<T>> {
    Ok(LogComplex::exp(t_n(z, ctx, cfg)?))
}

/// L_k(z) from its defining contour integral, 0 < Re z < 1.
pub fn l_k_quad<T: Real>(k: u8, z: Cx<T>, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
    if k > 2 {
        return domain(format!("no L_{k}"));
    }
    if !(z.re > T::zero() && z.re < T::one()) {
        return domain(format!("Re z = {} outside (0, 1)", z.re));
    }
    let two = T::lit(2.0);
    let pref = match k {
        0 => cx(T::one(), T::zero()),
        1 => cx(-T::lit(0.5), T::zero()),
        _ => cx(T::zero(), T::PI() / two),
    };
    let kk = k as i32;
    let target = cfg.tol * T::lit(TAIL_SHARE);
    let coef = pref.norm() * two;
    let bound = |a: T| {
        move |l: T| coef * (-a * l).exp() / (a * l.powi(kk) * (-(-two * l).exp_m1()))
    };
    let a_right = two - two * z.re;
    let a_left = two * z.re;
    let mut last = Error::Quadrature {
        tol: cfg.tol.to_f64().unwrap(),
        estimate: f64::INFINITY,
    };
    for level in 0..=MAX_REFINE {
        let c = cfg.refined(level);
        let reach = |a: T| {
            tail_reach(bound(a), target, c.tail_cutoff).ok_or(Error::Quadrature {
                tol: c.tol.to_f64().unwrap(),
                estimate: bound(a)(c.tail_cutoff).to_f64().unwrap_or(f64::INFINITY),
            })
        };
        let (l, r) = (reach(a_left)?, reach(a_right)?);
        let kern = Kernelized::build(&c, l, r, |piece, x| {
            let base = match piece {
                Piece::Right => one_minus_exp(x * -two).inv() * two,
                Piece::Left => -one_minus_exp(x * two).inv() * two,
                Piece::Arc => x.sinh().inv(),
            };
            base / x.powi(kk) * pref
        });
        let (s, err) = kern.sum(z, usize::MAX, usize::MAX);
        match accept(s, err + T::lit(2.0 * TAIL_SHARE) * c.tol, &c) {
            Ok(v) => return Ok(v),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// |a/b - 1| given log-domain a/b; scale free and overflow proof.
fn log_ratio_residual<T: Real>(log_ratio: Cx<T>) -> T {
    expm1(log_ratio).norm()
}

fn two_pi_i<T: Real>() -> Cx<T> {
    cx(T::zero(), T::TAU())
}

/// Relative residual of E_N(z - gamma/2) / E_N(z + gamma/2) = 1 - e^{2 pi i z}.
pub fn check_shift_identity<T: Real>(
    z: Cx<T>,
    ctx: &EvalContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    if !(z.re > T::zero() && z.re < T::one()) {
        return domain(format!("Re z = {} outside (0, 1)", z.re));
    }
    let rhs = LogComplex::one_minus_exp(two_pi_i::<T>() * z);
    if rhs.logmag < T::lit(-18.0) {
        return domain("z too close to an integer: 1 - e^{2 pi i z} vanishes");
    }
    let half = ctx.gamma / T::lit(2.0);
    let a = t_n(z - half, ctx, cfg)?;
    let b = t_n(z + half, ctx, cfg)?;
    Ok(log_ratio_residual(a - b - rhs.ln()))
}

/// Relative residual of
/// E_N(w + gamma/2) / E_N(w - gamma/2 + 1) = (1 - e^{2 pi i w/gamma}) / (1 - e^{2 pi i w}).
pub fn check_gamma_half<T: Real>(
    w: Cx<T>,
    ctx: &EvalContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    if !(w.re.abs() < ctx.gamma.re) {
        return domain(format!("|Re w| = {} not below Re gamma", w.re.abs()));
    }
    let num = LogComplex::one_minus_exp(two_pi_i::<T>() * w / ctx.gamma);
    let den = LogComplex::one_minus_exp(two_pi_i::<T>() * w);
    if den.logmag < T::lit(-18.0) || num.logmag < T::lit(-18.0) {
        return domain("right-hand side degenerates (w too close to 0)");
    }
    let half = ctx.gamma / T::lit(2.0);
    let a = t_n(w + half, ctx, cfg)?;
    let b = t_n(w - half + T::one(), ctx, cfg)?;
    Ok(log_ratio_residual(a - b - (num / den).ln()))
}

/// Relative residual of E_N(z) / E_N(z + 1) = 1 + e^{2 pi i z/gamma}.
pub fn check_unit_shift<T: Real>(
    z: Cx<T>,
    ctx: &EvalContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    if !(z.re.abs() < ctx.gamma.re / T::lit(2.0)) {
        return domain(format!("|Re z| = {} not below Re gamma / 2", z.re.abs()));
    }
    // 1 + e^a = 1 - e^{a + pi i}
    let rhs = LogComplex::one_minus_exp(two_pi_i::<T>() * z / ctx.gamma + cx(T::zero(), T::PI()));
    if rhs.logmag < T::lit(-18.0) {
        return domain("right-hand side vanishes");
    }
    let a = t_n(z, ctx, cfg)?;
    let b = t_n(z + T::one(), ctx, cfg)?;
    Ok(log_ratio_residual(a - b - rhs.ln()))
}

/// |L_k quadrature - closed form|.
pub fn l_k_error<T: Real>(k: u8, z: Cx<T>, cfg: &QuadratureConfig<T>) -> Result<T> {
    Ok((l_k_quad(k, z, cfg)? - lk_closed(k, z)?).norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteWorst<T> {
    pub z: Cx<T>,
    pub u: T,
    pub p: u32,
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteStats<T> {
    pub samples: usize,
    /// Draws rejected because the right-hand side degenerates.
    pub skipped: usize,
    pub max_residual: T,
    pub worst: Option<SuiteWorst<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentitySuite<T> {
    pub shift: SuiteStats<T>,
    pub gamma_half: SuiteStats<T>,
    pub unit_shift: SuiteStats<T>,
}

pub const SUITE_U: [f64; 3] = [0.2, 0.5, 0.9];
pub const SUITE_P: [u32; 3] = [1, 2, 3];
pub const SUITE_N: [u32; 3] = [31, 40, 97];

fn run_suite<T: Real>(
    samples: usize,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng, &EvalContext<T>) -> Cx<T>,
    check: impl Fn(Cx<T>, &EvalContext<T>) -> Result<T>,
) -> Result<SuiteStats<T>> {
    let mut stats = SuiteStats {
        samples: 0,
        skipped: 0,
        max_residual: T::zero(),
        worst: None,
    };
    while stats.samples < samples {
        let u = T::lit(SUITE_U[rng.gen_range(0..3)]);
        let p = SUITE_P[rng.gen_range(0..3)];
        let n = SUITE_N[rng.gen_range(0..3)];
        let ctx = EvalContext::new(u, p, n)?;
        let z = draw(rng, &ctx);
        match check(z, &ctx) {
            Ok(r) => {
                stats.samples += 1;
                if stats.worst.is_none() || r > stats.max_residual {
                    stats.max_residual = r;
                    stats.worst = Some(SuiteWorst { z, u, p, n });
                }
            }
            Err(Error::Domain(_)) if stats.skipped < 10 * samples => stats.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(stats)
}

/// Runs each of the three functional equations on `samples` seeded random
/// admissible inputs with (u, p, N) drawn from [`SUITE_U`] x [`SUITE_P`] x
/// [`SUITE_N`], Im z in (-0.4, 0.4).
pub fn identity_suite<T: Real>(seed: u64, samples: usize, cfg: &QuadratureConfig<T>) -> Result<IdentitySuite<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let im = |rng: &mut ChaCha8Rng| T::lit(rng.gen_range(-0.4..0.4));
    let shift = run_suite(
        samples,
        &mut rng,
        |rng, _| {
            let x = T::lit(rng.gen_range(0.02..0.98));
            cx(x, im(rng))
        },
        |z, ctx| check_shift_identity(z, ctx, cfg),
    )?;
    let gamma_half = run_suite(
        samples,
        &mut rng,
        |rng, ctx| {
            let x = ctx.gamma.re * T::lit(rng.gen_range(-0.95..0.95));
            cx(x, im(rng))
        },
        |z, ctx| check_gamma_half(z, ctx, cfg),
    )?;
    let unit_shift = run_suite(
        samples,
        &mut rng,
        |rng, ctx| {
            let x = ctx.gamma.re * T::lit(rng.gen_range(-0.45..0.45));
            cx(x, im(rng))
        },
        |z, ctx| check_unit_shift(z, ctx, cfg),
    )?;
    Ok(IdentitySuite {
        shift,
        gamma_half,
        unit_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::li2;
    use proptest::prelude::*;

    type C = Cx<f64>;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn context_invariants() {
        let c = EvalContext::new(0.5, 2, 40).unwrap();
        assert_eq!(c.gamma.re, 2.0 / 40.0);
        let g = c.xi / C::new(0.0, 2.0 * 40.0 * std::f64::consts::PI);
        assert!((g - c.gamma).norm() < 1e-16);
        assert!(EvalContext::new(1.0, 1, 10).is_err());
        assert!(EvalContext::new(0.0, 1, 10).is_err());
        assert!(EvalContext::new(0.5, 0, 10).is_err());
        assert_eq!(gcd(12, 18), 6);
    }

    #[test]
    fn l_k_at_known_points() {
        let h = C::new(0.5, 0.0);
        assert!((l_k_quad(1, h, &cfg()).unwrap() - C::new(2f64.ln(), 0.0)).norm() < 1e-8);
        assert!((l_k_quad(0, h, &cfg()).unwrap() - C::new(0.0, -std::f64::consts::PI)).norm() < 1e-8);
        let z = C::new(0.3, 0.4);
        assert!(l_k_error(2, z, &cfg()).unwrap() < 1e-8);
        assert!(l_k_quad(0, C::new(1.2, 0.0), &cfg()).is_err());
    }

    #[test]
    fn t_n_near_leading_term() {
        let ctx = EvalContext::new(0.5, 1, 50).unwrap();
        let h = C::new(0.5, 0.0);
        let lead = |c: &EvalContext<f64>| li2(C::new(-1.0, 0.0)).unwrap() * c.nf() / c.xi;
        let e1 = (t_n(h, &ctx, &cfg()).unwrap() - lead(&ctx)).norm();
        assert!(e1 < 1.0 / 50.0 * 5.0, "error {e1}");
        let ctx2 = EvalContext::new(0.5, 1, 100).unwrap();
        let e2 = (t_n(h, &ctx2, &cfg()).unwrap() - lead(&ctx2)).norm();
        let ratio = e1 / e2;
        assert!((1.5..=2.5).contains(&ratio), "ratio {ratio}");
    }

    // values from an arbitrary-precision integration over a contour of radius
    // 1/2 instead of 1 (same integral, no poles in between)
    #[test]
    fn matches_reference_integrals() {
        let cases = [
            ((0.4, 0.1), 0.5, 2, 32, (0.62038377580491671, 1.0668706266770337)),
            ((0.5, 0.0), 0.5, 1, 50, (-0.51734753914993453, 6.506416901140752)),
            ((0.05, -0.3), 0.9, 3, 31, (8.8647144869574238, -0.24867403619852191)),
        ];
        for ((x, y), u, p, n, (a, b)) in cases {
            let ctx = EvalContext::new(u, p, n).unwrap();
            let v = t_n(C::new(x, y), &ctx, &cfg()).unwrap();
            let want = C::new(a, b);
            assert!((v - want).norm() < 1e-9 * want.norm().max(1.0), "{v} vs {want}");
        }
    }

    #[test]
    fn first_order_convergence() {
        let z = C::new(0.4, 0.1);
        let lead = li2(C::new(0.0, std::f64::consts::TAU * z.re).exp() * (-std::f64::consts::TAU * z.im).exp()).unwrap();
        let err = |n: u32| {
            let ctx = EvalContext::new(0.5, 2, n).unwrap();
            (t_n(z, &ctx, &cfg()).unwrap() - lead * ctx.nf() / ctx.xi).norm()
        };
        let e: Vec<f64> = [32, 64, 128, 256].iter().map(|&n| err(n)).collect();
        for w in e.windows(2) {
            let r = w[0] / w[1];
            assert!((1.6..=2.4).contains(&r), "{e:?}");
        }
    }

    #[test]
    fn strip_is_enforced() {
        let ctx = EvalContext::new(0.5, 1, 50).unwrap();
        let z = C::new(-1.0 / 100.0 - 0.01, 0.0);
        assert!(matches!(t_n(z, &ctx, &cfg()), Err(Error::Domain(_))));
        assert!(t_n(C::new(1.0 + 0.011, 0.0), &ctx, &cfg()).is_err());
    }

    #[test]
    fn e_n_is_exp_of_t_n() {
        let ctx = EvalContext::new(0.5, 1, 50).unwrap();
        let z = C::new(0.5, 0.0);
        let t = t_n(z, &ctx, &cfg()).unwrap();
        let e = e_n(z, &ctx, &cfg()).unwrap();
        assert_eq!(e.logmag, t.re);
    }

    #[test]
    fn evaluator_agrees_with_one_off() {
        let ctx = EvalContext::new(0.3, 3, 31).unwrap();
        let ev = TnEvaluator::new(&ctx, &cfg());
        let zs: Vec<C> = (1..8).map(|j| C::new(j as f64 / 8.0, 0.05 * j as f64 - 0.2)).collect();
        let many = ev.eval_many(&zs);
        for (z, v) in zs.iter().zip(many) {
            let a = v.unwrap();
            let b = t_n(*z, &ctx, &cfg()).unwrap();
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
            // bitwise reproducible
            assert_eq!(ev.eval(*z).unwrap(), a);
        }
    }

    #[test]
    fn doubling_panels_and_cutoff_is_stable() {
        let ctx = EvalContext::new(0.5, 2, 64).unwrap();
        let z = C::new(0.4, 0.1);
        let base = cfg();
        let mut fine = base.refined(1);
        fine.tail_cutoff = base.tail_cutoff * 2.0;
        let a = t_n(z, &ctx, &base).unwrap();
        let b = t_n(z, &ctx, &fine).unwrap();
        assert!((a - b).norm() < base.tol * a.norm().max(1.0));
    }

    #[test]
    fn identity_examples() {
        let c = cfg();
        let ctx = EvalContext::new(0.5, 2, 40).unwrap();
        assert!(check_shift_identity(C::new(0.5, 0.0), &ctx, &c).unwrap() <= 1e-7);
        let ctx = EvalContext::new(0.3, 1, 60).unwrap();
        assert!(check_shift_identity(C::new(0.3, 0.2), &ctx, &c).unwrap() <= 1e-7);

        // corollary: z = j gamma - n with nN/p < j < (n+1)N/p
        let ctx = EvalContext::new(0.5, 2, 41).unwrap();
        let j = 30.0;
        let z = ctx.gamma * j - 1.0;
        let res = check_shift_identity(z, &ctx, &c).unwrap();
        assert!(res <= 1e-7);

        // gamma/2 lemma at w = N gamma - p and w = gamma/4
        let w = ctx.gamma * ctx.nf() - ctx.pf();
        assert!(w.re.abs() < 1e-15);
        assert!(check_gamma_half(w, &ctx, &c).unwrap() <= 1e-7);
        assert!(check_gamma_half(ctx.gamma / 4.0, &ctx, &c).unwrap() <= 1e-7);
        let edge = C::new(ctx.gamma.re, 0.1);
        assert!(check_gamma_half(edge, &ctx, &c).is_err());

        // unit shift at 0 and at the point used in the summation formula
        assert!(check_unit_shift(C::new(0.0, 0.0), &ctx, &c).unwrap() <= 1e-7);
        let k = (41 / 2) as f64;
        let z = ctx.gamma * (41.0 - k - 0.5) - 2.0 + 1.0;
        assert!(check_unit_shift(z, &ctx, &c).unwrap() <= 1e-7);
        assert!(check_unit_shift(ctx.gamma / 2.0, &ctx, &c).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn l_k_matches_closed_forms(x in 0.05f64..0.95, y in -1.0f64..1.0, k in 0u8..3) {
            let z = C::new(x, y);
            prop_assert!(l_k_error(k, z, &cfg()).unwrap() <= 1e-8);
        }

        #[test]
        fn shift_identity_random(x in 0.05f64..0.95, y in -0.4f64..0.4, n in 20u32..60) {
            let ctx = EvalContext::new(0.4, 1, n).unwrap();
            let r = check_shift_identity(C::new(x, y), &ctx, &cfg()).unwrap();
            prop_assert!(r <= 1e-7, "residual {}", r);
        }
    }
}
