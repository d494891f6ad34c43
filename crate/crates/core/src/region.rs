//! The regions around the saddle sigma_m where Re Phi_m is compared with its
//! saddle value, sampled on a grid, plus the inequalities they rest on.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::jones::{block_range, f_n_with, lattice_point};
use crate::numkernel::li2;
use crate::qdilog::{EvalContext, TnEvaluator};
use crate::quadrature::QuadratureConfig;
use crate::saddle::{f_eval, f_prime, kappa, phi_m, saddle_data, shift, varphi_closed, SaddleData};
use crate::scalar::{cx, Cx, Real};

/// The line a Re z + b Im z = c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> Line<T> {
    pub fn eval(&self, z: Cx<T>) -> T {
        self.a * z.re + self.b * z.im - self.c
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolygonData<T> {
    pub p0: Cx<T>,
    pub p1: Cx<T>,
    pub p2: Cx<T>,
    pub p3: Cx<T>,
    pub p4: Cx<T>,
    pub p5: Cx<T>,
    pub p12: Cx<T>,
    pub p34: Cx<T>,
    pub p45: Cx<T>,
    /// L_W meets L_sigma at 2m pi i/xi.
    pub p50: Cx<T>,
    pub l_sigma: Line<T>,
    pub l_e: Line<T>,
    pub l_m: Line<T>,
    pub l_w: Line<T>,
    pub h_top: Line<T>,
    pub h_bottom: Line<T>,
    pub v_e: Line<T>,
    pub v_w: Line<T>,
}

fn ratio<T: Real>(a: u32, b: u32) -> T {
    T::from_u32(a).unwrap() / T::from_u32(b).unwrap()
}

/// Vertices and edges of the hexagon bounding E_m and the auxiliary lines
/// through the saddle.
pub fn polygon<T: Real>(m: u32, u: T, p: u32) -> Result<PolygonData<T>> {
    if m >= p {
        return domain(format!("m = {m} not in [0, p-1]"));
    }
    let sd = saddle_data(u, p)?;
    let pf = T::from_u32(p).unwrap();
    let two_p_pi = T::TAU() * pf;
    let s = sd.sigma(m).im;
    let xib = sd.xi.conj();
    let two = T::lit(2.0);
    let re = |x: T| cx(x, T::zero());
    let w = ratio::<T>(m, p);
    let e = ratio::<T>(m + 1, p);
    let mid = ratio::<T>(2 * m + 1, 2 * p);
    let band = |c: T| Line { a: T::one(), b: u / two_p_pi, c };
    let d = xib * (s / (pf * T::PI()));
    Ok(PolygonData {
        p0: re(w),
        p1: re(w) + d,
        p2: cx(e, -two * s),
        p3: re(e),
        p4: re(e) - d,
        p5: cx(w, two * s),
        p12: re(mid) + d,
        p34: shift(m + 1, sd.xi),
        p45: re(mid) - d,
        p50: shift(m, sd.xi),
        l_sigma: Line { a: T::one(), b: -two_p_pi / u, c: T::zero() },
        l_e: band(e),
        l_m: band(mid),
        l_w: band(w),
        h_top: Line { a: T::zero(), b: T::one(), c: two * s },
        h_bottom: Line { a: T::zero(), b: T::one(), c: -two * s },
        v_e: Line { a: T::one(), b: T::zero(), c: e },
        v_w: Line { a: T::one(), b: T::zero(), c: w },
    })
}

/// The value m xi-bar i/(2p^2 pi) printed for P_50 in the vertex list. It is
/// on L_sigma but not on L_W; [`PolygonData::p50`] uses the actual intersection.
pub fn p50_as_printed<T: Real>(m: u32, u: T, p: u32) -> Cx<T> {
    let pf = T::from_u32(p).unwrap();
    let xib = cx(u, -T::TAU() * pf);
    xib * cx(T::zero(), T::from_u32(m).unwrap()) / (T::lit(2.0) * pf * pf * T::PI())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell<T> {
    /// Re Phi_m, NaN outside U_m.
    pub re_phi: T,
    pub in_u: bool,
    pub in_e: bool,
    pub in_d: bool,
    pub in_rbar: bool,
    pub in_runder: bool,
}

#[derive(Clone, Debug)]
pub struct RegionGrid<T> {
    pub m: u32,
    pub u: T,
    pub p: u32,
    pub nu: T,
    pub xs: Vec<T>,
    pub ys: Vec<T>,
    /// Row-major, `cells[j * xs.len() + i]` sits at (xs[i], ys[j]).
    pub cells: Vec<Cell<T>>,
    pub sigma: Cx<T>,
    /// Re Phi_m(sigma_m).
    pub threshold: T,
    pub saddle_col: usize,
    pub saddle_row: usize,
    pub zero_row: usize,
}

impl<T: Real> RegionGrid<T> {
    pub fn cols(&self) -> usize {
        self.xs.len()
    }

    pub fn rows(&self) -> usize {
        self.ys.len()
    }

    pub fn cell(&self, col: usize, row: usize) -> &Cell<T> {
        &self.cells[row * self.cols() + col]
    }

    pub fn point(&self, col: usize, row: usize) -> Cx<T> {
        cx(self.xs[col], self.ys[row])
    }

    pub fn b_minus(&self) -> T {
        self.xs[0]
    }

    pub fn b_plus(&self) -> T {
        self.xs[self.cols() - 1]
    }
}

/// Rows are rounded up to 4k + 1 so that y = 0 and y = Im sigma_m are nodes.
pub fn aligned_rows(rows: usize) -> usize {
    4 * (rows.saturating_sub(1)).div_ceil(4).max(1) + 1
}

/// Samples Re Phi_m over the box [b-, b+] x [-2 Im sigma_m, 2 Im sigma_m]
/// with b- = (m + nu)/p and b+ = (m + 1 - nu)/p. Re sigma_m, b- and b+ are
/// always grid columns.
pub fn grid_scan<T: Real>(m: u32, u: T, p: u32, resolution: (usize, usize), nu: T) -> Result<RegionGrid<T>> {
    let (cols, rows) = resolution;
    if cols < 50 || rows < 50 {
        return domain("resolution must be at least 50 x 50");
    }
    if m >= p {
        return domain(format!("m = {m} not in [0, p-1]"));
    }
    if !(nu > T::zero() && nu < T::lit(0.5)) {
        return domain("nu must lie in (0, 1/2)");
    }
    let sd = saddle_data(u, p)?;
    let sigma = sd.sigma(m);
    let pf = T::from_u32(p).unwrap();
    let bm = (T::from_u32(m).unwrap() + nu) / pf;
    let bp = (T::from_u32(m + 1).unwrap() - nu) / pf;
    if !(sigma.re > bm && sigma.re < bp) {
        return domain("nu too large: Re sigma_m is outside [b-, b+]");
    }

    let span = cols - 1;
    let frac = ((sigma.re - bm) / (bp - bm) * T::from_usize(span).unwrap()).round();
    let n1 = frac.to_usize().unwrap().clamp(1, span - 1);
    let n2 = span - n1;
    let mut xs = Vec::with_capacity(cols);
    for i in 0..n1 {
        xs.push(bm + (sigma.re - bm) * ratio(i as u32, n1 as u32));
    }
    xs.push(sigma.re);
    for j in 1..n2 {
        xs.push(sigma.re + (bp - sigma.re) * ratio(j as u32, n2 as u32));
    }
    xs.push(bp);

    let rows = aligned_rows(rows);
    let q = (rows - 1) as i64;
    let ys: Vec<T> = (0..rows as i64)
        .map(|j| sigma.im * T::from_int(4 * j - 2 * q) / T::from_int(q))
        .collect();

    let threshold = phi_m(sigma, m, u, p)?.re;
    let cut = threshold - T::lit(1e-12) * threshold.abs().max(T::one());
    let two_pi = T::TAU();
    let cells: Vec<Cell<T>> = ys
        .par_iter()
        .flat_map_iter(|&y| {
            let xs = &xs;
            xs.iter().map(move |&x| {
                let z = cx(x, y);
                match phi_m(z, m, u, p) {
                    Ok(v) => {
                        let r = v.re;
                        let lift = threshold + two_pi * y.abs();
                        Cell {
                            re_phi: r,
                            in_u: true,
                            in_e: true,
                            in_d: r < cut,
                            in_rbar: y >= T::zero() && r < lift,
                            in_runder: y <= T::zero() && r < lift,
                        }
                    }
                    Err(_) => Cell {
                        re_phi: T::nan(),
                        in_u: false,
                        in_e: false,
                        in_d: false,
                        in_rbar: false,
                        in_runder: false,
                    },
                }
            })
        })
        .collect();

    Ok(RegionGrid {
        m,
        u,
        p,
        nu,
        xs,
        ys,
        cells,
        sigma,
        threshold,
        saddle_col: n1,
        saddle_row: (3 * q / 4) as usize,
        zero_row: (q / 2) as usize,
    })
}

/// 4-connected component labels of `mask`; `None` marks cells outside it.
pub fn label_components(mask: &[bool], cols: usize, rows: usize) -> (Vec<Option<usize>>, usize) {
    let mut labels = vec![None; mask.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if !mask[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(count);
        queue.push_back(start);
        while let Some(at) = queue.pop_front() {
            let (c, r) = (at % cols, at / cols);
            let mut visit = |n: usize| {
                if mask[n] && labels[n].is_none() {
                    labels[n] = Some(count);
                    queue.push_back(n);
                }
            };
            if c > 0 {
                visit(at - 1);
            }
            if c + 1 < cols {
                visit(at + 1);
            }
            if r > 0 {
                visit(at - cols);
            }
            if r + 1 < rows {
                visit(at + cols);
            }
        }
        count += 1;
    }
    (labels, count)
}

fn mask_of<T: Real>(grid: &RegionGrid<T>, f: impl Fn(&Cell<T>) -> bool) -> Vec<bool> {
    grid.cells.iter().map(f).collect()
}

/// Number of connected components of D_m intersected with E_m.
pub fn components_d_cap_e<T: Real>(grid: &RegionGrid<T>) -> Result<usize> {
    let mask = mask_of(grid, |c| c.in_d && c.in_e);
    if !mask.iter().any(|&b| b) {
        return Err(Error::Empty);
    }
    Ok(label_components(&mask, grid.cols(), grid.rows()).1)
}

/// Whether b- and b+ (on the real axis) lie in one component of the mask.
fn endpoints_joined<T: Real>(grid: &RegionGrid<T>, f: impl Fn(&Cell<T>) -> bool) -> bool {
    let mask = mask_of(grid, f);
    let (labels, _) = label_components(&mask, grid.cols(), grid.rows());
    let row = grid.zero_row * grid.cols();
    match (labels[row], labels[row + grid.cols() - 1]) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// b- and b+ in different components of D_m and E_m.
pub fn endpoints_separated_in_d<T: Real>(grid: &RegionGrid<T>) -> bool {
    let mask = mask_of(grid, |c| c.in_d && c.in_e);
    let (labels, _) = label_components(&mask, grid.cols(), grid.rows());
    let row = grid.zero_row * grid.cols();
    match (labels[row], labels[row + grid.cols() - 1]) {
        (Some(a), Some(b)) => a != b,
        _ => false,
    }
}

pub fn rbar_connects<T: Real>(grid: &RegionGrid<T>) -> bool {
    endpoints_joined(grid, |c| c.in_rbar)
}

pub fn runder_connects<T: Real>(grid: &RegionGrid<T>) -> bool {
    endpoints_joined(grid, |c| c.in_runder)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FSigmaCheck<T> {
    pub re_f0: T,
    pub re_f_sigma: T,
    /// Re F(0) > 0.
    pub positive: bool,
    /// Re F(0) < Re F(sigma_0).
    pub below_saddle: bool,
}

pub fn check_f_sigma<T: Real>(u: T, p: u32) -> Result<FSigmaCheck<T>> {
    let sd = saddle_data(u, p)?;
    let f0 = f_eval(cx(T::zero(), T::zero()), u, p)?.re;
    Ok(FSigmaCheck {
        re_f0: f0,
        re_f_sigma: sd.f_sigma0.re,
        positive: f0 > T::zero(),
        below_saddle: f0 < sd.f_sigma0.re,
    })
}

/// c_{p,m}(u) = Li2(-e^{-u-q}) - Li2(-e^{-u+q}) + u q - 2p pi^2 with
/// q = u((6m+5) pi + 2 theta)/(2p pi), an upper bound for
/// (|xi|^2/u) Re(Phi_m(P_12) - Phi_m(sigma_m)). Defined for 0 < u <= kappa.
pub fn c_pm<T: Real>(u: T, p: u32, m: u32) -> Result<T> {
    if !(u > T::zero() && u <= kappa::<T>()) || p == 0 {
        return domain(format!("c_pm needs 0 < u <= kappa and p >= 1, got u = {u}, p = {p}"));
    }
    let pf = T::from_u32(p).unwrap();
    c_pm_real_p(u, pf, m)
}

// same with real p, so that the p-derivative can be checked
fn c_pm_real_p<T: Real>(u: T, pf: T, m: u32) -> Result<T> {
    let pi = T::PI();
    let theta = varphi_closed(u).im;
    let q = u * (T::from_u32(6 * m + 5).unwrap() * pi + T::lit(2.0) * theta) / (T::TAU() * pf);
    let a = li2(cx(-(-u - q).exp(), T::zero()))?;
    let b = li2(cx(-(-u + q).exp(), T::zero()))?;
    Ok((a - b).re + u * q - T::lit(2.0) * pf * pi * pi)
}

/// d/dp c_{p,p-1}(kappa) = (kappa/2p^2) log(3 + 2cosh(kappa(3 - 1/2p))) - 2 pi^2.
pub fn c_pm_slope<T: Real>(p: T) -> T {
    let k = kappa::<T>();
    let two = T::lit(2.0);
    let q = k * (T::lit(3.0) - T::one() / (two * p));
    k / (two * p * p) * (T::lit(3.0) + two * q.cosh()).ln() - two * T::PI() * T::PI()
}

/// Upper bound of [`c_pm_slope`] over p >= 1: -2 pi^2 + (kappa/2) log(3 + 2cosh 3 kappa).
pub fn c_pm_slope_bound<T: Real>() -> T {
    let k = kappa::<T>();
    let two = T::lit(2.0);
    -two * T::PI() * T::PI() + k / two * (T::lit(3.0) + two * (T::lit(3.0) * k).cosh()).ln()
}

/// Re Phi_m(sigma_m) - Re Phi_m(P_12), evaluated directly.
pub fn f_p12_margin<T: Real>(u: T, p: u32, m: u32) -> Result<T> {
    let poly = polygon(m, u, p)?;
    let sd = saddle_data(u, p)?;
    let a = phi_m(poly.p12, m, u, p)?.re;
    let b = phi_m(sd.sigma(m), m, u, p)?.re;
    Ok(b - a)
}

/// Re Phi_m(P_12) < Re Phi_m(sigma_m).
pub fn check_f_p12<T: Real>(u: T, p: u32, m: u32) -> Result<bool> {
    Ok(f_p12_margin(u, p, m)? > T::zero())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndpointSample<T> {
    pub k: u32,
    pub re_f: T,
    /// Re F(sigma_0) - Re f_N.
    pub margin: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndpointReport<T> {
    pub samples: Vec<EndpointSample<T>>,
    pub all_positive: bool,
}

/// Re f_N at the lattice points of block m whose k/N is within `delta` of
/// m/p or (m+1)/p, against Re F(sigma_0).
pub fn endpoint_decay_check<T: Real>(
    ctx: &EvalContext<T>,
    m: u32,
    delta: T,
    cfg: &QuadratureConfig<T>,
) -> Result<EndpointReport<T>> {
    if !ctx.coprime() {
        return Err(Error::NotCoprime { p: ctx.p, n: ctx.n });
    }
    if m >= ctx.p {
        return domain(format!("m = {m} not in [0, p-1]"));
    }
    let sd = saddle_data(ctx.u, ctx.p)?;
    let lo = ratio::<T>(m, ctx.p);
    let hi = ratio::<T>(m + 1, ctx.p);
    let ks: Vec<u32> = block_range(m, ctx.p, ctx.n)
        .filter(|&k| {
            let x = ratio::<T>(k, ctx.n);
            (x - lo).abs() <= delta || (hi - x).abs() <= delta
        })
        .collect();
    if ks.is_empty() {
        return domain("no lattice point within delta of the block ends");
    }
    let ev = TnEvaluator::new(ctx, cfg);
    let samples = ks
        .par_iter()
        .map(|&k| {
            let re_f = f_n_with(&ev, lattice_point(k, m, ctx))?.re;
            Ok(EndpointSample {
                k,
                re_f,
                margin: sd.f_sigma0.re - re_f,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_positive = samples.iter().all(|s| s.margin > T::zero());
    Ok(EndpointReport { samples, all_positive })
}

/// The sign of d/dy Re Phi_m(x + iy) predicted from which side of L_sigma
/// and of L_M the point lies: +1, -1, or 0 on a boundary.
pub fn predicted_y_slope_sign<T: Real>(z: Cx<T>, m: u32, u: T, p: u32) -> i8 {
    let pf = T::from_u32(p).unwrap();
    let pi = T::PI();
    let a = u * z.re - T::TAU() * pf * z.im;
    let b = u * z.im + T::TAU() * pf * z.re;
    let mf = T::from_u32(m).unwrap();
    let lower = b > T::lit(2.0) * mf * pi && b < (T::lit(2.0) * mf + T::one()) * pi;
    let upper = b > (T::lit(2.0) * mf + T::one()) * pi && b < T::lit(2.0) * (mf + T::one()) * pi;
    if (a > T::zero() && lower) || (a < T::zero() && upper) {
        1
    } else if (a < T::zero() && lower) || (a > T::zero() && upper) {
        -1
    } else {
        0
    }
}

/// d/dy Re Phi_m(x + iy) = -Im Phi_m'(z).
pub fn y_slope<T: Real>(z: Cx<T>, m: u32, u: T, p: u32) -> Result<T> {
    let sd_xi = cx(u, T::TAU() * T::from_u32(p).unwrap());
    Ok(-f_prime(z - shift(m, sd_xi), u, p)?.im)
}

/// l_E(t) = (m+1)/p - eps - xi-bar t/(2p pi): the edge P_3 P_4 pushed inside
/// U_m by eps.
pub fn ell_e<T: Real>(t: T, m: u32, sd: &SaddleData<T>, eps: T) -> Cx<T> {
    let pf = T::from_u32(sd.p).unwrap();
    cx(ratio::<T>(m + 1, sd.p) - eps, T::zero()) - sd.xi.conj() * t / (T::TAU() * pf)
}

/// l_M(t) = (2m+1)/(2p) - xi-bar t/(2p pi).
pub fn ell_m<T: Real>(t: T, m: u32, sd: &SaddleData<T>) -> Cx<T> {
    let pf = T::from_u32(sd.p).unwrap();
    cx(ratio::<T>(2 * m + 1, 2 * sd.p), T::zero()) - sd.xi.conj() * t / (T::TAU() * pf)
}

/// d/dt Re Phi_m(l(t)) for a line with direction -xi-bar/(2p pi).
pub fn slope_along<T: Real>(z: Cx<T>, m: u32, sd: &SaddleData<T>) -> Result<T> {
    let pf = T::from_u32(sd.p).unwrap();
    let dir = -sd.xi.conj() / (T::TAU() * pf);
    Ok((f_prime(z - shift(m, sd.xi), sd.u, sd.p)? * dir).re)
}
