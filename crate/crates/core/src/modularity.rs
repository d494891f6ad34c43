//! SL(2, Z) acting on the evaluation point X = 2N pi i/xi, and the ratio
//! experiments behind the quantum modularity statements for E.

use std::ops::Mul;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::jones::jones_at_rational;
use crate::numkernel::{li2, lc_sum, LogComplex};
use crate::qdilog::{gcd, EvalContext};
use crate::saddle::{s_e, saddle_prefactor};
use crate::scalar::{cx, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return domain(format!("({a},{b};{c},{d}) has determinant {} != 1", a * d - b * c));
        }
        Ok(ModularMatrix { a, b, c, d })
    }

    /// S = (0, -1; 1, 0).
    pub const S: ModularMatrix = ModularMatrix { a: 0, b: -1, c: 1, d: 0 };

    pub fn inverse(&self) -> Self {
        ModularMatrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The level cN + dp of the numerator polynomial.
    pub fn level(&self, n: u32, p: u32) -> i64 {
        self.c * n as i64 + self.d * p as i64
    }
}

impl Mul for ModularMatrix {
    type Output = ModularMatrix;

    fn mul(self, o: ModularMatrix) -> ModularMatrix {
        ModularMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

fn int<T: Real>(n: i64) -> T {
    T::from_i64(n).unwrap()
}

fn denominator<T: Real>(eta: &ModularMatrix, x: Cx<T>) -> Result<Cx<T>> {
    let den = x * int::<T>(eta.c) + int::<T>(eta.d);
    if den.re == T::zero() && den.im == T::zero() {
        return domain("cX + d = 0: pole of the transformation");
    }
    Ok(den)
}

/// (aX + b)/(cX + d).
pub fn mobius<T: Real>(eta: &ModularMatrix, x: Cx<T>) -> Result<Cx<T>> {
    let den = denominator(eta, x)?;
    Ok((x * int::<T>(eta.a) + int::<T>(eta.b)) / den)
}

/// 2c pi i/(cX + d).
pub fn hbar<T: Real>(eta: &ModularMatrix, x: Cx<T>) -> Result<Cx<T>> {
    let den = denominator(eta, x)?;
    Ok(cx(T::zero(), T::TAU() * int::<T>(eta.c)) / den)
}

/// X = 2N pi i/xi.
pub fn build_x<T: Real>(ctx: &EvalContext<T>) -> Cx<T> {
    cx(T::zero(), T::TAU() * ctx.nf()) / ctx.xi
}

/// X_0 = N/p, the value of X at u = 0.
pub fn build_x0<T: Real>(p: u32, n: u32) -> T {
    T::from_u32(n).unwrap() / T::from_u32(p).unwrap()
}

/// J_N(E; q) at q = e^{2 pi i num/den + delta}. Powers of the root of unity
/// are reduced exactly, so a factor 1 - q^j with den | j num costs no
/// precision however small delta is.
pub fn jones_near_rational<T: Real>(n: u32, num: i64, den: i64, delta: Cx<T>) -> Result<LogComplex<T>> {
    if den <= 0 {
        return domain("denominator must be positive");
    }
    if n == 0 {
        return Ok(LogComplex::zero());
    }
    // exponent of q^j
    let w = |j: i64| -> Cx<T> {
        let r = (j as i128 * num as i128).rem_euclid(den as i128) as i64;
        let r = if 2 * r > den { r - den } else { r };
        cx(T::zero(), T::TAU() * int::<T>(r) / int::<T>(den)) + delta * int::<T>(j)
    };
    let ni = n as i64;
    let mut h = LogComplex::one();
    let mut terms = Vec::with_capacity(n as usize);
    for k in 0..ni {
        if k > 0 {
            h *= LogComplex::one_minus_exp(w(ni + k)) * LogComplex::one_minus_exp(w(ni - k));
            if h.is_zero() {
                break;
            }
        }
        terms.push(LogComplex::exp(w(-k * ni)) * h);
    }
    lc_sum(&terms)
}

fn check_eta(eta: &ModularMatrix) -> Result<()> {
    if eta.a * eta.d - eta.b * eta.c != 1 {
        return domain("matrix is not in SL(2, Z)");
    }
    if eta.c <= 0 {
        return domain("ratio experiments need c > 0");
    }
    Ok(())
}

/// J_{cN+dp}(E; e^{2 pi i eta(X)}) / J_p(E; e^{2 pi i X}).
pub fn modularity_ratio<T: Real>(eta: &ModularMatrix, ctx: &EvalContext<T>) -> Result<LogComplex<T>> {
    check_eta(eta)?;
    let level = eta.level(ctx.n, ctx.p);
    if level < 1 || level > u32::MAX as i64 {
        return domain(format!("cN + dp = {level} is not a valid level"));
    }
    let x = build_x(ctx);
    // 2 pi i eta(X) = 2 pi i a/c - hbar/c^2
    let h = hbar(eta, x)?;
    let c2 = int::<T>(eta.c * eta.c);
    let num = jones_near_rational(level as u32, eta.a, eta.c, -h / c2)?;
    let den = jones_near_rational(ctx.p, 0, 1, x * cx(T::zero(), T::TAU()))?;
    if den.is_zero() {
        return Err(Error::Domain("J_p vanishes at e^{2 pi i X}".into()));
    }
    Ok(num / den)
}

/// C sqrt(-pi)/(2 sinh(u/2)) (T_E/hbar)^{1/2} exp(S_E/hbar), with the same
/// root branches as the main asymptotic formula: sqrt(T_E) sqrt(1/hbar).
pub fn qmccj_rhs<T: Real>(eta: &ModularMatrix, ctx: &EvalContext<T>, c_const: Cx<T>) -> Result<LogComplex<T>> {
    check_eta(eta)?;
    let h = hbar(eta, build_x(ctx))?;
    let pre = LogComplex::from_complex(saddle_prefactor(ctx.u)? * c_const);
    let root = LogComplex::from_complex(h).recip().sqrt();
    Ok(pre * root * LogComplex::exp(s_e(ctx.u)? / h))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PEstimate<T> {
    pub p: u32,
    /// (N, ratio / rhs) for each N.
    pub samples: Vec<(u32, Cx<T>)>,
    pub estimate: Cx<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CEstimate<T> {
    pub per_p: Vec<PEstimate<T>>,
    /// Largest pairwise relative difference of the estimates.
    pub spread: T,
}

/// Two-point Richardson extrapolation assuming r(N) = C (1 + a/N + ...).
pub fn richardson<T: Real>(n1: u32, r1: Cx<T>, n2: u32, r2: Cx<T>) -> Cx<T> {
    let (a, b) = (T::from_u32(n1).unwrap(), T::from_u32(n2).unwrap());
    (r2 * b - r1 * a) / (b - a)
}

pub fn relative_spread<T: Real>(values: &[Cx<T>]) -> T {
    let mut s = T::zero();
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            let scale = x.norm().max(y.norm());
            if scale > T::zero() {
                s = s.max((x - y).norm() / scale);
            }
        }
    }
    s
}

/// For each p, modularity_ratio / qmccj_rhs(C = 1) along `n_list`,
/// extrapolated to N = infinity from the last two points.
pub fn estimate_c<T: Real>(eta: &ModularMatrix, u: T, p_list: &[u32], n_list: &[u32]) -> Result<CEstimate<T>> {
    if n_list.len() < 2 {
        return domain("estimate_c needs at least two N values");
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return domain("N values must be increasing");
    }
    if p_list.is_empty() {
        return Err(Error::Empty);
    }
    check_eta(eta)?;
    let jobs: Vec<(u32, u32)> = p_list.iter().flat_map(|&p| n_list.iter().map(move |&n| (p, n))).collect();
    let values = jobs
        .par_iter()
        .map(|&(p, n)| {
            if gcd(p, n) != 1 {
                return Err(Error::NotCoprime { p, n });
            }
            let ctx = EvalContext::new(u, p, n)?;
            let r = modularity_ratio(eta, &ctx)? / qmccj_rhs(eta, &ctx, cx(T::one(), T::zero()))?;
            Ok(r.to_complex())
        })
        .collect::<Result<Vec<_>>>()?;
    let per_p: Vec<PEstimate<T>> = p_list
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let samples: Vec<(u32, Cx<T>)> = n_list
                .iter()
                .zip(&values[i * n_list.len()..(i + 1) * n_list.len()])
                .map(|(&n, &r)| (n, r))
                .collect();
            let [.., (n1, r1), (n2, r2)] = samples[..] else { unreachable!() };
            PEstimate {
                p,
                estimate: richardson(n1, r1, n2, r2),
                samples,
            }
        })
        .collect();
    let est: Vec<Cx<T>> = per_p.iter().map(|e| e.estimate).collect();
    Ok(CEstimate {
        spread: relative_spread(&est),
        per_p,
    })
}

/// Vol(S^3 \ E) = Im(Li2(e^{pi i/3}) - Li2(e^{-pi i/3})); the Chern-Simons
/// part of CV(E) vanishes.
pub fn cv_e<T: Real>() -> T {
    let t = T::PI() / T::lit(3.0);
    let a = li2(cx(t.cos(), t.sin())).expect("on the unit circle");
    let b = li2(cx(t.cos(), -t.sin())).expect("on the unit circle");
    (a - b).im
}

/// The constant of the modularity law at X_0 = N/p for E:
///   c e^{3 pi i/4} 3^{-1/4} prod_g |w_g|^{2g/c} sum_r prod_{g<=r} |w_g|^2
/// with w_g = 1 - exp(2 pi i (a g/c - 5/(6c))).
pub fn bettin_drappeau_c<T: Real>(eta: &ModularMatrix) -> Result<Cx<T>> {
    check_eta(eta)?;
    let c = eta.c;
    let cf = int::<T>(c);
    let omega2 = |g: i64| -> T {
        // |1 - e^{i t}|^2 = 4 sin^2(t/2)
        let frac = int::<T>((eta.a * g).rem_euclid(c)) / cf - T::lit(5.0) / (T::lit(6.0) * cf);
        let s = (T::PI() * frac).sin();
        T::lit(4.0) * s * s
    };
    let mut log_prod = T::zero();
    let mut partial = T::one();
    let mut sum = T::zero();
    for g in 1..=c {
        let w2 = omega2(g);
        log_prod = log_prod + int::<T>(g) / cf * w2.ln();
        partial = partial * w2;
        sum = sum + partial;
    }
    let mag = cf * T::lit(3.0).powf(T::lit(-0.25)) * log_prod.exp() * sum;
    Ok(cx(T::zero(), T::lit(0.75) * T::PI()).exp() * mag)
}

/// C (2 pi/hbar)^{3/2} exp(i CV(E)/hbar) at X_0 = N/p, principal power.
pub fn zagier_rhs<T: Real>(eta: &ModularMatrix, p: u32, n: u32) -> Result<LogComplex<T>> {
    let x0 = cx(build_x0::<T>(p, n), T::zero());
    let h = hbar(eta, x0)?;
    let c = LogComplex::from_complex(bettin_drappeau_c(eta)?);
    let base = LogComplex::from_complex(cx(T::TAU(), T::zero()) / h);
    let pow = LogComplex::exp(base.ln() * T::lit(1.5));
    Ok(c * pow * LogComplex::exp(cx(T::zero(), cv_e::<T>()) / h))
}

/// J_{cN+dp}(E; e^{2 pi i eta(N/p)}) / J_p(E; e^{2 pi i N/p}), both at roots
/// of unity.
pub fn zagier_ratio<T: Real>(eta: &ModularMatrix, p: u32, n: u32) -> Result<LogComplex<T>> {
    check_eta(eta)?;
    let level = eta.level(n, p);
    if level < 1 || level > u32::MAX as i64 {
        return domain(format!("cN + dp = {level} is not a valid level"));
    }
    // eta(N/p) = (aN + bp)/(cN + dp)
    let num_top = eta.a * n as i64 + eta.b * p as i64;
    let top = jones_at_rational::<T>(level as u32, num_top, level as u64)?;
    let bottom = jones_at_rational::<T>(p, n as i64, p as u64)?;
    if bottom.is_zero() {
        return domain("J_p vanishes at e^{2 pi i N/p}");
    }
    Ok(top / bottom)
}
