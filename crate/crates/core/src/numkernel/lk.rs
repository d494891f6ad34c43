//! Closed forms of the three integrals
//!   L0(z) = int e^{(2z-1)x} / sinh x dx,
//!   L1(z) = -1/2 int e^{(2z-1)x} / (x sinh x) dx,
//!   L2(z) = (pi i / 2) int e^{(2z-1)x} / (x^2 sinh x) dx
//! over the contour, valid for 0 < Re z < 1.

use super::elem::{cln, one_minus_exp};
use super::li2::li2;
use crate::error::{domain, Result};
use crate::scalar::{cx, Cx, Real};

fn check_strip<T: Real>(z: Cx<T>) -> Result<()> {
    if z.re > T::zero() && z.re < T::one() {
        Ok(())
    } else {
        domain(format!("Re z = {} outside (0, 1)", z.re))
    }
}

fn two_pi_i_z<T: Real>(z: Cx<T>) -> Cx<T> {
    cx(-T::TAU() * z.im, T::TAU() * z.re)
}

/// -2 pi i / (1 - e^{-2 pi i z})
pub fn l0_closed<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    check_strip(z)?;
    Ok(cx(T::zero(), -T::TAU()) / one_minus_exp(-two_pi_i_z(z)))
}

/// log(1 - e^{2 pi i z}), principal branch
pub fn l1_closed<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    check_strip(z)?;
    Ok(cln(one_minus_exp(two_pi_i_z(z))))
}

/// Li2(e^{2 pi i z})
pub fn l2_closed<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    check_strip(z)?;
    li2(two_pi_i_z(z).exp())
}

pub fn lk_closed<T: Real>(k: u8, z: Cx<T>) -> Result<Cx<T>> {
    match k {
        0 => l0_closed(z),
        1 => l1_closed(z),
        2 => l2_closed(z),
        _ => domain(format!("no L_{k}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Cx<f64>;

    #[test]
    fn values_at_one_half() {
        let h = C::new(0.5, 0.0);
        assert!((l1_closed(h).unwrap() - C::new(2f64.ln(), 0.0)).norm() < 1e-15);
        assert!((l0_closed(h).unwrap() - C::new(0.0, -PI)).norm() < 1e-14);
        assert!((l2_closed(h).unwrap() - C::new(-PI * PI / 12.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn strip_enforced() {
        for z in [C::new(0.0, 0.3), C::new(1.0, 0.0), C::new(-0.2, 1.0)] {
            assert!(l0_closed(z).is_err());
            assert!(l1_closed(z).is_err());
            assert!(l2_closed(z).is_err());
        }
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        // dL2/dz = -2 pi i L1 and dL1/dz = -L0
        #[test]
        fn derivative_relations(x in 0.05f64..0.95, y in -2.0f64..2.0) {
            let z = C::new(x, y);
            let h = 1e-5;
            let d2 = (l2_closed(z + h).unwrap() - l2_closed(z - h).unwrap()) / (2.0 * h);
            let d1 = (l1_closed(z + h).unwrap() - l1_closed(z - h).unwrap()) / (2.0 * h);
            let two_pi_i = C::new(0.0, 2.0 * PI);
            prop_assert!(rel(d2, -two_pi_i * l1_closed(z).unwrap()) <= 1e-6);
            prop_assert!(rel(d1, -l0_closed(z).unwrap()) <= 1e-6);
        }
    }
}
