use super::elem::cln;
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

// B_{2k} / (2k+1)!, k = 1.. ; the series in u = -log(1-w) converges for |u| < 2pi
const BERNOULLI: [f64; 22] = [
    2.7777777777777777778e-2,
    -2.7777777777777777778e-4,
    4.7241118669690098262e-6,
    -9.1857730746619635509e-8,
    1.8978869988970999072e-9,
    -4.0647616451442255268e-11,
    8.9216910204564525552e-13,
    -1.9939295860721075687e-14,
    4.5189800296199181917e-16,
    -1.0356517612181247014e-17,
    2.3952186210261867457e-19,
    -5.5817858743250093363e-21,
    1.3091507554183212858e-22,
    -3.0874198024267402932e-24,
    7.3159756527022034204e-26,
    -1.740845657234000741e-27,
    4.1576356446138997196e-29,
    -9.9621484882846221032e-31,
    2.3940344248961653005e-32,
    -5.7683473553673900843e-34,
    1.3931794796470079778e-35,
    -3.3721219654850894705e-37,
];

/// Principal branch of the dilogarithm, cut along (1, inf).
///
/// Evaluation exactly on the cut is rejected rather than silently picking a side.
pub fn li2<T: Real>(w: Cx<T>) -> Result<Cx<T>> {
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::NonFinite);
    }
    if w.im == T::zero() && w.re > T::one() {
        return Err(Error::OnCut(format!("{w}")));
    }
    Ok(li2_unchecked(w))
}

/// Same as [`li2`] without the cut check; points on the cut get whatever side
/// the sign of the imaginary zero selects.
pub(crate) fn li2_unchecked<T: Real>(w: Cx<T>) -> Cx<T> {
    let zero = T::zero();
    if w.re == zero && w.im == zero {
        return cx(zero, zero);
    }
    if w.re == T::one() && w.im == zero {
        return cx(zeta2(), zero);
    }
    if w.norm() > T::one() {
        // Li2(w) = -Li2(1/w) - pi^2/6 - log^2(-w)/2
        let l = cln(-w);
        -li2_disk(w.inv()) - cx(zeta2(), zero) - l * l / T::lit(2.0)
    } else {
        li2_disk(w)
    }
}

fn zeta2<T: Real>() -> T {
    T::PI() * T::PI() / T::lit(6.0)
}

fn li2_disk<T: Real>(w: Cx<T>) -> Cx<T> {
    let half = T::lit(0.5);
    if w.norm() <= half {
        return power_series(w);
    }
    if w.re > half {
        // reflection; 1 - w then has real part below 1/2 and modulus below 1
        let lw = cln(w);
        let one_minus = cx(T::one() - w.re, -w.im);
        cx(zeta2(), T::zero()) - lw * cln(one_minus) - bernoulli_series(-lw)
    } else {
        let u = -cln(cx(T::one() - w.re, -w.im));
        bernoulli_series(u)
    }
}

fn power_series<T: Real>(w: Cx<T>) -> Cx<T> {
    let mut sum = cx(T::zero(), T::zero());
    let mut pow = w;
    for k in 1..200 {
        let kk = T::from_int(k);
        let term = pow / (kk * kk);
        sum = sum + term;
        if term.norm() <= T::epsilon() * sum.norm() {
            break;
        }
        pow = pow * w;
    }
    sum
}

// Li2(z) = u - u^2/4 + sum_k B_{2k} u^{2k+1}/(2k+1)!,  u = -log(1 - z)
fn bernoulli_series<T: Real>(u: Cx<T>) -> Cx<T> {
    let u2 = u * u;
    let mut sum = u - u2 / T::lit(4.0);
    let mut pow = u * u2;
    for &c in BERNOULLI.iter() {
        let term = pow * T::lit(c);
        sum = sum + term;
        if term.norm() <= T::epsilon() * sum.norm() {
            break;
        }
        pow = pow * u2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Cx<f64>;

    // -int_0^w log(1-t)/t dt along the straight segment, composite 5-point
    // Gauss-Legendre. Independent of the series/transformations above.
    fn li2_by_integration(w: C) -> C {
        const X: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.236_926_885_056_189_1,
            0.478_628_670_499_366_5,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
        ];
        let panels = 4000;
        let h = 1.0 / panels as f64;
        let mut acc = C::new(0.0, 0.0);
        for j in 0..panels {
            let mid = (j as f64 + 0.5) * h;
            for (x, wt) in X.iter().zip(W.iter()) {
                let s = mid + 0.5 * h * x;
                let t = w * s;
                // log(1-t)/t * dt with dt = w ds
                acc += (C::new(1.0, 0.0) - t).ln() / s * (0.5 * h * wt);
            }
        }
        -acc
    }

    fn dist_to_segment(w: C) -> f64 {
        // distance from 1 to the segment [0, w]
        let s = (w.re / w.norm_sqr()).clamp(0.0, 1.0);
        (w * s - C::new(1.0, 0.0)).norm()
    }

    #[test]
    fn special_values() {
        assert_eq!(li2(C::new(0.0, 0.0)).unwrap(), C::new(0.0, 0.0));
        // partial sums of 1/n^2 plus the Euler-Maclaurin tail
        let n = 1_000_000u64;
        let partial: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
        let nf = n as f64;
        let zeta2 = partial + 1.0 / nf - 0.5 / (nf * nf) + 1.0 / (6.0 * nf * nf * nf);
        let v = li2(C::new(1.0, 0.0)).unwrap();
        assert!((v.re - zeta2).abs() < 1e-13 && v.im == 0.0);
        assert!((v.re - 1.6449340668).abs() < 1e-10);

        // alternating series for Li2(-1)
        let alt: f64 = (1..=2_000_000u64)
            .rev()
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 * k as f64))
            .sum();
        let v = li2(C::new(-1.0, 0.0)).unwrap();
        assert!((v.re - alt).abs() < 1e-12);
        assert!((v.re + PI * PI / 12.0).abs() < 1e-14);
    }

    #[test]
    fn clausen_value() {
        let a = li2(C::from_polar(1.0, PI / 3.0)).unwrap();
        let b = li2(C::from_polar(1.0, -PI / 3.0)).unwrap();
        let d = a - b;
        // 2i sum sin(n pi/3)/n^2, summed in whole periods of six
        let mut s = 0.0;
        for n in (1..=600_000u64).rev() {
            s += (n as f64 * PI / 3.0).sin() / (n as f64 * n as f64);
        }
        assert!(d.re.abs() < 1e-14);
        assert!((d.im - 2.0 * s).abs() < 1e-10);
        assert!((d.im - 2.0298832128).abs() < 1e-10);
    }

    #[test]
    fn cut_is_rejected() {
        assert!(matches!(li2(C::new(1.5, 0.0)), Err(Error::OnCut(_))));
        assert!(matches!(li2(C::new(f64::NAN, 0.0)), Err(Error::NonFinite)));
        // just off the cut is fine, and the two sides differ by 2 pi i log w
        let w = 3.0;
        let above = li2(C::new(w, 1e-14)).unwrap();
        let below = li2(C::new(w, -1e-14)).unwrap();
        assert!(((above - below).im - 2.0 * PI * w.ln()).abs() < 1e-9);
    }

    #[test]
    fn inversion_residual_on_sample() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut n = 0;
        while n < 100 {
            let r = 10f64.powf(rng.gen_range(-1.0..1.0));
            let t = rng.gen_range(-PI..PI);
            let w = C::from_polar(r, t);
            if t.abs() < 1e-3 {
                continue;
            }
            let lhs = li2(w.inv()).unwrap();
            let l = (-w).ln();
            let rhs = -li2(w).unwrap() - PI * PI / 6.0 - l * l / 2.0;
            assert!((lhs - rhs).norm() < 1e-12, "{w}");
            n += 1;
        }
    }

    #[test]
    fn single_precision_is_close() {
        let w32 = Cx::<f32>::new(0.3, 0.4);
        let a = li2(w32).unwrap();
        let b = li2(C::new(0.3, 0.4)).unwrap();
        assert!((a.re as f64 - b.re).abs() < 1e-5 && (a.im as f64 - b.im).abs() < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_integral(r in 0.05f64..6.0, t in -3.1f64..3.1) {
            let w = C::from_polar(r, t);
            prop_assume!(dist_to_segment(w) > 0.2);
            let a = li2(w).unwrap();
            let b = li2_by_integration(w);
            prop_assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{} {} {}", w, a, b);
        }

        #[test]
        fn conjugate_symmetry(r in 0.01f64..20.0, t in 0.01f64..PI - 1e-3) {
            let w = C::from_polar(r, t);
            let a = li2(w).unwrap();
            let b = li2(w.conj()).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-13 * (1.0 + a.norm()));
        }

        #[test]
        fn reflection_identity(re in -0.9f64..1.9, im in -1.5f64..1.5) {
            let w = C::new(re, im);
            prop_assume!(im.abs() > 1e-3);
            let one = C::new(1.0, 0.0);
            let lhs = li2(w).unwrap() + li2(one - w).unwrap();
            let rhs = PI * PI / 6.0 - w.ln() * (one - w).ln();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
