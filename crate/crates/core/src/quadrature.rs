//! Panel quadrature along the contour (-inf, -1] + upper unit semicircle +
//! [1, inf), oriented left to right.
//!
//! Every integrand handled here has the form K(x) e^{(2z+s)x} where the
//! kernel K does not depend on z and s is 0, -1, -2 on the left ray, the
//! arc and the right ray. Kernels are written so that nothing overflows on
//! the rays. Weights times kernels are precomputed once, after which each z
//! costs one complex exponential per node.

use crate::scalar::{cx, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig<T> {
    /// Largest abscissa the rays may be truncated at. The actual truncation
    /// is chosen per z from the tail bound and never exceeds this.
    pub tail_cutoff: T,
    pub panels_per_unit: usize,
    pub semicircle_panels: usize,
    pub tol: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        QuadratureConfig {
            tail_cutoff: T::lit(1e5),
            panels_per_unit: 2,
            semicircle_panels: 24,
            tol: T::lit(1e-10),
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    /// Panel counts multiplied by 2^level.
    pub fn refined(&self, level: u32) -> Self {
        let f = 1usize << level;
        QuadratureConfig {
            panels_per_unit: self.panels_per_unit * f,
            semicircle_panels: self.semicircle_panels * f,
            ..*self
        }
    }
}

/// Ray length precomputed by an evaluator that is reused across many z.
/// Points near the strip edges need longer rays and are evaluated one-off.
pub const EVALUATOR_REACH: f64 = 5000.0;

/// How many times a failed evaluation doubles the panel density.
pub const MAX_REFINE: u32 = 2;

/// Fraction of the tolerance budget given to the truncated tails.
pub(crate) const TAIL_SHARE: f64 = 1e-2;

// Gauss-Kronrod 7/15 on [-1, 1]; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Abscissae and (Kronrod, Gauss) weights of the 15-point rule on [-1, 1].
fn gk15<T: Real>() -> [(T, T, T); 15] {
    let mut out = [(T::zero(), T::zero(), T::zero()); 15];
    for j in 0..8 {
        let g = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[j] = (T::lit(-XGK[j]), T::lit(WGK[j]), T::lit(g));
        out[14 - j] = (T::lit(XGK[j]), T::lit(WGK[j]), T::lit(g));
    }
    out
}

pub const NODES_PER_PANEL: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Left,
    Arc,
    Right,
}

impl Piece {
    pub(crate) fn shift<T: Real>(self) -> T {
        match self {
            Piece::Left => T::zero(),
            Piece::Arc => -T::one(),
            Piece::Right => -T::lit(2.0),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct PNode<T> {
    x: Cx<T>,
    ck: Cx<T>,
    cg: Cx<T>,
}

/// A kernel sampled on the contour with quadrature weights folded in.
#[derive(Clone, Debug)]
pub(crate) struct Kernelized<T> {
    left: Vec<PNode<T>>,
    arc: Vec<PNode<T>>,
    right: Vec<PNode<T>>,
    width: T,
}

impl<T: Real> Kernelized<T> {
    pub fn build(
        cfg: &QuadratureConfig<T>,
        reach_left: T,
        reach_right: T,
        kernel: impl Fn(Piece, Cx<T>) -> Cx<T>,
    ) -> Self {
        let rule = gk15::<T>();
        let two = T::lit(2.0);
        let width = T::one() / T::from_usize(cfg.panels_per_unit).unwrap();
        let ray_panels = |reach: T| -> usize {
            let n = ((reach - T::one()) / width).ceil();
            n.max(T::zero()).to_usize().unwrap_or(0)
        };

        let mut right = Vec::new();
        for j in 0..ray_panels(reach_right) {
            let a = T::one() + width * T::from_usize(j).unwrap();
            let mid = a + width / two;
            for &(x, wk, wg) in rule.iter() {
                let xx = cx(mid + width / two * x, T::zero());
                let k = kernel(Piece::Right, xx);
                let h = width / two;
                right.push(PNode {
                    x: xx,
                    ck: k * (wk * h),
                    cg: k * (wg * h),
                });
            }
        }

        let mut left = Vec::new();
        for j in 0..ray_panels(reach_left) {
            let a = -T::one() - width * T::from_usize(j).unwrap();
            let mid = a - width / two;
            for &(x, wk, wg) in rule.iter() {
                let xx = cx(mid + width / two * x, T::zero());
                let k = kernel(Piece::Left, xx);
                let h = width / two;
                left.push(PNode {
                    x: xx,
                    ck: k * (wk * h),
                    cg: k * (wg * h),
                });
            }
        }

        // x = e^{it}, t from pi down to 0: dx = i e^{it} dt and the reversed
        // direction contributes a minus sign
        let mut arc = Vec::new();
        let m = cfg.semicircle_panels.max(1);
        let dt = T::PI() / T::from_usize(m).unwrap();
        for j in 0..m {
            let mid = dt * (T::from_usize(j).unwrap() + T::lit(0.5));
            for &(x, wk, wg) in rule.iter() {
                let t = mid + dt / two * x;
                let xx = cx(t.cos(), t.sin());
                let jac = -(cx(T::zero(), T::one()) * xx) * (dt / two);
                let k = kernel(Piece::Arc, xx) * jac;
                arc.push(PNode {
                    x: xx,
                    ck: k * wk,
                    cg: k * wg,
                });
            }
        }

        Kernelized {
            left,
            arc,
            right,
            width,
        }
    }

    /// Panels needed to cover [1, reach] on a ray.
    pub fn panels_for(&self, reach: T) -> usize {
        let n = ((reach - T::one()) / self.width).ceil();
        n.max(T::zero()).to_usize().unwrap_or(usize::MAX)
    }

    pub fn ray_panels(&self) -> (usize, usize) {
        (
            self.left.len() / NODES_PER_PANEL,
            self.right.len() / NODES_PER_PANEL,
        )
    }

    /// Kronrod sum of K(x) e^{(2z+s)x} and the summed |Kronrod - Gauss|
    /// panel differences, using the first `n_left`/`n_right` ray panels.
    pub fn sum(&self, z: Cx<T>, n_left: usize, n_right: usize) -> (Cx<T>, T) {
        let mut total = cx(T::zero(), T::zero());
        let mut err = T::zero();
        let two_z = z * T::lit(2.0);
        let mut run = |nodes: &[PNode<T>], s: T| {
            let e = two_z + s;
            for panel in nodes.chunks(NODES_PER_PANEL) {
                let mut k = cx(T::zero(), T::zero());
                let mut g = cx(T::zero(), T::zero());
                for n in panel {
                    let f = (e * n.x).exp();
                    k = k + n.ck * f;
                    g = g + n.cg * f;
                }
                total = total + k;
                err = err + (k - g).norm();
            }
        };
        run(&self.arc, Piece::Arc.shift());
        let nl = n_left.min(self.left.len() / NODES_PER_PANEL);
        let nr = n_right.min(self.right.len() / NODES_PER_PANEL);
        run(&self.left[..nl * NODES_PER_PANEL], Piece::Left.shift());
        run(&self.right[..nr * NODES_PER_PANEL], Piece::Right.shift());
        (total, err)
    }
}

/// Smallest truncation point L >= 1 with bound(L) <= target, where bound is
/// decreasing; `None` when even `cap` is not enough.
pub(crate) fn tail_reach<T: Real>(bound: impl Fn(T) -> T, target: T, cap: T) -> Option<T> {
    let one = T::one();
    if bound(one) <= target {
        return Some(one);
    }
    if !(bound(cap) <= target) {
        return None;
    }
    let (mut lo, mut hi) = (one, cap);
    for _ in 0..60 {
        let mid = (lo + hi) / T::lit(2.0);
        if bound(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < T::lit(0.25) {
            break;
        }
    }
    Some(hi)
}
