//! Small exact/float bridging helpers shared by the engines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Correctly rounded `num / den` as `f64`, without reducing the fraction.
/// `None` when `den` is zero.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> Option<f64> {
    if den.is_zero() {
        return None;
    }
    BigRational::new_raw(num.clone(), den.clone()).to_f64()
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Non-negative gcd of all values; zero for an all-zero (or empty) input.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        if g == BigInt::from(1) {
            break;
        }
        g = g.gcd(v);
    }
    g
}

/// Largest bit length among the values.
pub fn max_bits<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> u64 {
    values.into_iter().map(|v| v.bits()).max().unwrap_or(0)
}

/// Best rational approximation of a non-negative `x` with denominator at most
/// `max_den`, from the continued-fraction convergents.
pub fn approximate_rational(x: f64, max_den: u64) -> (u64, u64) {
    assert!(x >= 0.0 && x.is_finite());
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    loop {
        let a = rest.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        (x.round() as u64, 1)
    } else {
        (p1, q1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_handles_huge_operands() {
        let num = BigInt::from(3) << 5000u32;
        let den = BigInt::from(-2) << 5000u32;
        assert_eq!(ratio_to_f64(&num, &den), Some(-1.5));
        assert_eq!(ratio_to_f64(&num, &BigInt::zero()), None);
    }

    #[test]
    fn gcd_of_mixed_signs() {
        let v: Vec<BigInt> = [-4, 6, 0, 10].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(gcd_all(&v), BigInt::from(2));
        assert_eq!(gcd_all(&[BigInt::zero()]), BigInt::zero());
    }

    #[test]
    fn convergents() {
        assert_eq!(approximate_rational(0.5, 100), (1, 2));
        assert_eq!(approximate_rational(std::f64::consts::PI, 1000), (355, 113));
        assert_eq!(approximate_rational(2.0, 10), (2, 1));
    }
}
