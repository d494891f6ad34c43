//! The colored Jones polynomial of the figure-eight knot
//!   J_N(E; q) = sum_{k=0}^{N-1} q^{-kN} prod_{l=1}^k (1 - q^{N+l})(1 - q^{N-l}),
//! always with q = e^w passed as the exponent, and its rewriting through the
//! quantum dilogarithm.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::numkernel::{expm1, lc_sum, LogComplex};
use crate::qdilog::{gcd, t_n, EvalContext, TnEvaluator};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{cx, Cx, Real};

fn omexp<T: Real>(w: Cx<T>) -> LogComplex<T> {
    LogComplex::one_minus_exp(w)
}

/// One summand of J_N: h_N(k) = prod_{l<=k} (1 - q^{N+l})(1 - q^{N-l}) and
/// the full term q^{-kN} h_N(k).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesTermTrace<T> {
    pub k: u32,
    pub partial_product: LogComplex<T>,
    pub term: LogComplex<T>,
}

pub fn jones_trace<T: Real>(n: u32, w: Cx<T>) -> Vec<JonesTermTrace<T>> {
    let nf = T::from_u32(n).unwrap();
    let mut h = LogComplex::one();
    let mut out = Vec::with_capacity(n as usize);
    for k in 0..n {
        if k > 0 {
            let l = T::from_u32(k).unwrap();
            h *= omexp(w * (nf + l)) * omexp(w * (nf - l));
        }
        let kf = T::from_u32(k).unwrap();
        out.push(JonesTermTrace {
            k,
            partial_product: h,
            term: LogComplex::exp(-w * (kf * nf)) * h,
        });
    }
    out
}

/// J_N(E; e^w).
pub fn jones_exp<T: Real>(n: u32, w: Cx<T>) -> LogComplex<T> {
    if n == 0 {
        return LogComplex::zero();
    }
    let terms: Vec<_> = jones_trace(n, w).into_iter().map(|t| t.term).collect();
    lc_sum(&terms).expect("nonempty")
}

/// J_N(E; e^{xi/N}).
pub fn jones_at_cusp<T: Real>(ctx: &EvalContext<T>) -> LogComplex<T> {
    jones_exp(ctx.n, ctx.xi / ctx.nf())
}

/// 4 N pi^2 / xi, the exponent of the dual evaluation point.
pub fn dual_exponent<T: Real>(ctx: &EvalContext<T>) -> Cx<T> {
    let pi = T::PI();
    cx(T::lit(4.0) * ctx.nf() * pi * pi, T::zero()) / ctx.xi
}

/// J_p(E; e^{4 N pi^2 / xi}).
pub fn jones_dual<T: Real>(ctx: &EvalContext<T>) -> LogComplex<T> {
    jones_exp(ctx.p, dual_exponent(ctx))
}

/// beta_{p,m} = e^{-mpA} prod_{j=1}^m (1 - e^{(p-j)A})(1 - e^{(p+j)A}), A = 4N pi^2/xi.
pub fn beta<T: Real>(ctx: &EvalContext<T>, m: u32) -> Result<LogComplex<T>> {
    if m >= ctx.p {
        return domain(format!("m = {m} not in [0, p-1] for p = {}", ctx.p));
    }
    let a = dual_exponent(ctx);
    let pf = ctx.pf();
    let mf = T::from_u32(m).unwrap();
    let mut b = LogComplex::exp(-a * (mf * pf));
    for j in 1..=m {
        let jf = T::from_u32(j).unwrap();
        b *= omexp(a * (pf - jf)) * omexp(a * (pf + jf));
    }
    Ok(b)
}

/// g(x) = 4 sinh(xi (1+x)/2) sinh(xi (1-x)/2).
pub fn g_eval<T: Real>(x: T, ctx: &EvalContext<T>) -> Cx<T> {
    let two = T::lit(2.0);
    (ctx.xi * (T::one() + x) / two).sinh() * (ctx.xi * (T::one() - x) / two).sinh() * T::lit(4.0)
}

/// s = Re z + (u / 2p pi) Im z, the coordinate in which U_m and the f_N strip are bands.
pub fn band_coordinate<T: Real>(z: Cx<T>, u: T, p: u32) -> T {
    z.re + u / (T::TAU() * T::from_u32(p).unwrap()) * z.im
}

/// The two T_N arguments of f_N(z).
fn f_n_args<T: Real>(z: Cx<T>, ctx: &EvalContext<T>) -> (Cx<T>, Cx<T>) {
    let tpi = cx(T::zero(), T::TAU());
    let one = cx(T::one(), T::zero());
    let a = ctx.xi * (one - z) / tpi - ctx.pf() + T::one();
    let b = ctx.xi * (one + z) / tpi - ctx.pf();
    (a, b)
}

fn f_n_strip<T: Real>(z: Cx<T>, ctx: &EvalContext<T>) -> Result<()> {
    let s = band_coordinate(z, ctx.u, ctx.p);
    let h = T::one() / (T::lit(2.0) * ctx.nf());
    if s > -h && s < T::one() / ctx.pf() + h {
        Ok(())
    } else {
        domain(format!("z = {z} outside the strip where f_N is defined"))
    }
}

fn f_n_tail<T: Real>(z: Cx<T>, ctx: &EvalContext<T>) -> Cx<T> {
    let pi = T::PI();
    -z * ctx.u + cx(T::lit(4.0) * ctx.pf() * pi * pi, T::zero()) / ctx.xi
}

/// f_N(z) = (T_N(xi(1-z)/2pi i - p + 1) - T_N(xi(1+z)/2pi i - p)) / N - u z + 4p pi^2/xi.
pub fn f_n_eval<T: Real>(z: Cx<T>, ctx: &EvalContext<T>, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
    f_n_strip(z, ctx)?;
    let (a, b) = f_n_args(z, ctx);
    Ok((t_n(a, ctx, cfg)? - t_n(b, ctx, cfg)?) / ctx.nf() + f_n_tail(z, ctx))
}

/// Same as [`f_n_eval`] with a shared evaluator, for sweeps.
pub fn f_n_with<T: Real>(ev: &TnEvaluator<T>, z: Cx<T>) -> Result<Cx<T>> {
    let ctx = ev.ctx();
    f_n_strip(z, ctx)?;
    let (a, b) = f_n_args(z, ctx);
    Ok((ev.eval(a)? - ev.eval(b)?) / ctx.nf() + f_n_tail(z, ctx))
}

/// The lattice point (2k+1)/(2N) - 2m pi i/xi where f_N is sampled.
pub fn lattice_point<T: Real>(k: u32, m: u32, ctx: &EvalContext<T>) -> Cx<T> {
    let x = T::from_u32(2 * k + 1).unwrap() / (T::lit(2.0) * ctx.nf());
    cx(x, T::zero()) - cx(T::zero(), T::TAU() * T::from_u32(m).unwrap()) / ctx.xi
}

/// The k belonging to block m: mN/p < k < (m+1)N/p, with k = 0 added to m = 0.
pub fn block_range(m: u32, p: u32, n: u32) -> std::ops::Range<u32> {
    let lo = if m == 0 { 0 } else { m * n / p + 1 };
    let hi = ((m + 1) * n).div_ceil(p);
    lo..hi.min(n)
}

/// log(|e^a / e^b - 1|) guard: relative distance of two log-domain values.
fn log_residual<T: Real>(a: Cx<T>, b: Cx<T>) -> T {
    expm1(a - b).norm()
}

/// Relative difference between J_N(E; e^{xi/N}) and its expression as a
/// double sum of beta_{p,m} e^{N f_N} over the lattice points.
pub fn decomposition_check<T: Real>(ctx: &EvalContext<T>, cfg: &QuadratureConfig<T>) -> Result<T> {
    if !ctx.coprime() {
        return Err(Error::NotCoprime { p: ctx.p, n: ctx.n });
    }
    let ev = TnEvaluator::new(ctx, cfg);
    let mut points = Vec::new();
    for m in 0..ctx.p {
        for k in block_range(m, ctx.p, ctx.n) {
            points.push((m, lattice_point(k, m, ctx)));
        }
    }
    let nf = ctx.nf();
    let logs: Vec<Result<Cx<T>>> = points
        .par_iter()
        .map(|&(m, z)| {
            let (a, b) = f_n_args(z, ctx);
            let nfn = ev.eval(a)? - ev.eval(b)? + f_n_tail(z, ctx) * nf;
            Ok(beta(ctx, m)?.ln() + nfn)
        })
        .collect();
    let terms = logs
        .into_iter()
        .map(|r| r.map(LogComplex::exp))
        .collect::<Result<Vec<_>>>()?;
    let sum = lc_sum(&terms)?;
    let a = dual_exponent(ctx);
    let two_sinh = LogComplex::from_real(T::lit(2.0) * (ctx.u / T::lit(2.0)).sinh());
    let rhs = omexp(-a * ctx.pf()) / two_sinh * sum;
    let lhs = jones_at_cusp(ctx);
    Ok(log_residual(lhs.ln(), rhs.ln()))
}

/// prod_{l=1}^k (1 - e^{(N-l) xi/N})(1 - e^{(N+l) xi/N}) directly, as a logarithm.
fn direct_product_log<T: Real>(k: u32, ctx: &EvalContext<T>) -> Cx<T> {
    let w = ctx.xi / ctx.nf();
    let nf = ctx.nf();
    let mut acc = cx(T::zero(), T::zero());
    for l in 1..=k {
        let lf = T::from_u32(l).unwrap();
        acc = acc + omexp(w * (nf - lf)).ln() + omexp(w * (nf + lf)).ln();
    }
    acc
}

/// Relative difference between the q-factorial product and its expression
/// through E_N. For gcd(p, N) = c > 1 the index is split as k = nN' + r with
/// N' = N/c, and the corresponding formulas for that case are used.
pub fn product_identity_check<T: Real>(
    k: u32,
    ctx: &EvalContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let formula = product_via_e_n(k, ctx, cfg)?;
    Ok(log_residual(direct_product_log(k, ctx), formula))
}

/// Logarithm of the E_N expression for the q-factorial product.
pub fn product_via_e_n<T: Real>(k: u32, ctx: &EvalContext<T>, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
    let (n_, p) = (ctx.n, ctx.p);
    if k == 0 || k >= n_ {
        return domain(format!("k = {k} not in [1, N-1]"));
    }
    let c = gcd(p, n_);
    let np = n_ / c;
    let pp = p / c;
    let (n, r) = (k / np, k % np);

    let g = ctx.gamma;
    let nf = ctx.nf();
    let pf = ctx.pf();
    let a = dual_exponent(ctx);
    let t = |re_gamma: T, shift: i64| -> Result<Cx<T>> {
        t_n(g * re_gamma + T::from_int(shift), ctx, cfg)
    };
    let f = |x: u32| T::from_u32(x).unwrap();
    let half = T::lit(0.5);
    let lead = omexp(a * pf).ln() - omexp(ctx.xi).ln();
    let dual_pair = |j: T| omexp(a * (pf - j)).ln() + omexp(a * (pf + j)).ln();
    let xi_pair = |j: u32| {
        let cf = f(c);
        omexp(ctx.xi * (cf - f(j)) / cf).ln() + omexp(ctx.xi * (cf + f(j)) / cf).ln()
    };
    let p_i = p as i64;

    if n == 0 {
        let m = k * p / n_;
        let mut s = lead;
        for j in 1..=m {
            s = s + dual_pair(f(j));
        }
        let mi = m as i64;
        s = s + t(nf - f(k) - half, -p_i + mi + 1)? - t(nf + f(k) + half, -p_i - mi)?;
        return Ok(s);
    }
    if r == 0 && n > 1 {
        return Err(Error::ExcludedIndex(k));
    }

    // the product up to l = nN'
    let mut s = xi_pair(n) + lead;
    let npp = (n * pp) as i64;
    for l in 1..(n * pp) {
        s = s + dual_pair(f(l));
    }
    let nnp = f(n) * f(np);
    s = s + t(nf - nnp + half, -p_i + npp)? - t(nf + nnp - half, -p_i - npp + 1)?;
    if r == 0 {
        return Ok(s);
    }

    // from l = nN' + 1 to k
    let h = r * pp / np;
    for i in 1..=h {
        let fi = f(n * pp + i);
        s = s + omexp(a * (pf - fi)).ln() + omexp(a * (pf + fi)).ln();
    }
    let hi = h as i64;
    s = s + t(nf + nnp + half, -p_i - npp)? - t(nf - nnp - half, -p_i + npp + 1)?;
    s = s + t(nf - f(k) - half, -p_i + npp + hi + 1)? - t(nf + f(k) + half, -p_i - npp - hi)?;
    Ok(s)
}

/// J_N(E; e^{2 pi i num/den}) with exact detection of vanishing factors.
pub fn jones_at_rational<T: Real>(n: u32, num: i64, den: u64) -> Result<LogComplex<T>> {
    if den == 0 {
        return domain("zero denominator");
    }
    if n == 0 {
        return Ok(LogComplex::zero());
    }
    let d = den as i64;
    let phase = |e: i64| -> T {
        let r = (e as i128 * num as i128).rem_euclid(d as i128) as i64;
        T::TAU() * T::from_int(r) / T::from_int(d)
    };
    let factor = |e: i64| -> LogComplex<T> {
        if (e as i128 * num as i128).rem_euclid(d as i128) == 0 {
            LogComplex::zero()
        } else {
            omexp(cx(T::zero(), phase(e)))
        }
    };
    let ni = n as i64;
    let mut h = LogComplex::one();
    let mut terms = Vec::with_capacity(n as usize);
    for k in 0..ni {
        if k > 0 {
            h *= factor(ni + k) * factor(ni - k);
            if h.is_zero() {
                break;
            }
        }
        terms.push(LogComplex::new(T::zero(), phase(-k * ni)) * h);
    }
    lc_sum(&terms)
}
