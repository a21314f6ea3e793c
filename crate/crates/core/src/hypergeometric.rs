//! Terminating Gauss hypergeometric series with integer parameters.
//!
//! Every Gamma value needed here has an integer argument, so `Gamma(n)` is
//! `(n-1)!` and a non-positive argument is a pole. A pole in a denominator
//! makes the whole ratio vanish; that case is reported through
//! [`GammaRatioValue::is_zero_by_pole`] instead of a bare zero.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::exact_kernel::factorial;
use crate::rational::ExactRational;

/// Rising factorial `x (x+1) ... (x+n-1)`; the empty product is 1.
pub fn pochhammer(x: i64, n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, i| acc * (BigInt::from(x) + i))
}

/// `Gamma(n)` for a positive integer `n`.
pub fn gamma_int(n: i64) -> Option<BigInt> {
    (n >= 1).then(|| factorial(n as u64 - 1))
}

/// Result of a Gamma-function ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaRatioValue {
    pub value: ExactRational,
    /// A denominator Gamma sat on a pole, forcing `value == 0`.
    pub is_zero_by_pole: bool,
}

impl GammaRatioValue {
    fn finite(value: ExactRational) -> Self {
        Self {
            value,
            is_zero_by_pole: false,
        }
    }

    fn pole_zero() -> Self {
        Self {
            value: ExactRational::zero(),
            is_zero_by_pole: true,
        }
    }
}

/// `2F1(-m, b; c; z)` summed exactly over `n = 0..=m`.
pub fn terminating_2f1(neg_m: i64, b: i64, c: i64, z: &ExactRational) -> Result<ExactRational> {
    if neg_m > 0 {
        return Err(invalid(format!(
            "series does not terminate: first parameter {neg_m} > 0"
        )));
    }
    if c <= 0 {
        return Err(invalid(format!("lower parameter c = {c} must be >= 1")));
    }
    let m = neg_m.unsigned_abs();
    let mut sum = ExactRational::zero();
    let mut z_pow = ExactRational::one();
    for n in 0..=m {
        let num = pochhammer(neg_m, n) * pochhammer(b, n);
        let den = pochhammer(c, n) * factorial(n);
        sum += ExactRational::new(num, den).expect("(c)_n n! > 0 for c >= 1") * &z_pow;
        z_pow *= z;
    }
    Ok(sum)
}

/// Gauss's closed form `2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b))`
/// with `G` the Gamma function at integer arguments.
///
/// Numerator poles (`c <= 0` or `c - a - b <= 0`) are rejected; denominator
/// poles yield a zero flagged as such.
pub fn gauss_value_at_1(a: i64, b: i64, c: i64) -> Result<GammaRatioValue> {
    let num_args = [c, c - a - b];
    if let Some(&bad) = num_args.iter().find(|&&x| x <= 0) {
        return Err(Error::NumeratorPole(bad));
    }
    let den_args = [c - a, c - b];
    if den_args.iter().any(|&x| x <= 0) {
        return Ok(GammaRatioValue::pole_zero());
    }
    let num = gamma_int(c).unwrap() * gamma_int(c - a - b).unwrap();
    let den = gamma_int(c - a).unwrap() * gamma_int(c - b).unwrap();
    Ok(GammaRatioValue::finite(
        ExactRational::new(num, den).expect("Gamma of a positive integer is positive"),
    ))
}

/// The identity sum through its hypergeometric form,
/// `S_m = G(m) 2F1(-m, m; 2; 1) / (G(2) G(1+m))`, with the `2F1` value taken
/// from Gauss's closed form. Equals `G(m) / (G(1+m) G(2+m) G(2-m))`, which is
/// zero for `m >= 2` through the pole of `G(2-m)`.
pub fn s_m_hyper(m: u64) -> Result<ExactRational> {
    if m < 1 {
        return Err(invalid(format!("s_m_hyper requires m >= 1, got {m}")));
    }
    let mi = m as i64;
    let gauss = gauss_value_at_1(-mi, mi, 2)?;
    if gauss.is_zero_by_pole {
        return Ok(ExactRational::zero());
    }
    let prefactor = ExactRational::new(
        gamma_int(mi).unwrap(),
        gamma_int(2).unwrap() * gamma_int(1 + mi).unwrap(),
    )
    .expect("positive");
    Ok(prefactor * gauss.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3, 2), BigInt::from(12));
        assert_eq!(pochhammer(-2, 3), BigInt::from(0));
        assert_eq!(pochhammer(-2, 2), BigInt::from(2));
        assert_eq!(pochhammer(17, 0), BigInt::from(1));
    }

    #[test]
    fn pochhammer_is_gamma_ratio() {
        for x in 1..15i64 {
            for n in 0..15u64 {
                let ratio = gamma_int(x + n as i64).unwrap() / gamma_int(x).unwrap();
                assert_eq!(pochhammer(x, n), ratio);
            }
        }
    }

    #[test]
    fn series_examples() {
        let one = ExactRational::one();
        assert_eq!(terminating_2f1(-1, 1, 2, &one).unwrap(), q(1, 2));
        assert_eq!(terminating_2f1(0, 5, 3, &q(7, 3)).unwrap(), one);
        // 1 - 2 + 1 from the three terms written out by hand
        assert_eq!(terminating_2f1(-2, 2, 2, &one).unwrap(), q(0, 1));
        assert!(terminating_2f1(1, 1, 1, &one).is_err());
        assert!(terminating_2f1(-1, 1, 0, &one).is_err());
    }

    #[test]
    fn series_at_other_z() {
        // 2F1(-2, 3; 4; 1/2) = 1 - 2*3/4*(1/2) + (2*12/(20*2))(1/4)
        let expected = q(1, 1) - q(3, 4) + q(3, 20);
        assert_eq!(terminating_2f1(-2, 3, 4, &q(1, 2)).unwrap(), expected);
    }

    #[test]
    fn gauss_examples() {
        let v = gauss_value_at_1(-1, 1, 2).unwrap();
        assert_eq!(v.value, q(1, 2));
        assert!(!v.is_zero_by_pole);

        let v = gauss_value_at_1(-2, 2, 2).unwrap();
        assert!(v.is_zero_by_pole);
        assert!(v.value.is_zero());

        let v = gauss_value_at_1(0, 0, 1).unwrap();
        assert_eq!(v.value, ExactRational::one());

        assert!(matches!(gauss_value_at_1(3, 3, 2), Err(Error::NumeratorPole(-4))));
        assert!(matches!(gauss_value_at_1(0, 0, 0), Err(Error::NumeratorPole(0))));
    }

    #[test]
    fn s_m_hyper_examples() {
        assert_eq!(s_m_hyper(1).unwrap(), q(1, 2));
        assert!(s_m_hyper(2).unwrap().is_zero());
        assert!(s_m_hyper(25).unwrap().is_zero());
        assert!(s_m_hyper(0).is_err());
    }

    #[test]
    fn s_m_hyper_matches_series_form() {
        // S_m = (1/m) 2F1(-m, m; 2; 1) with the series summed directly.
        for m in 1..=40u64 {
            let series = terminating_2f1(-(m as i64), m as i64, 2, &ExactRational::one()).unwrap();
            let via_series = series * q(1, m as i64);
            assert_eq!(s_m_hyper(m).unwrap(), via_series);
        }
    }

    proptest! {
        #[test]
        fn series_matches_gauss(m in 0i64..=12, b in -6i64..=6, c in 1i64..=8) {
            prop_assume!(c + m - b >= 1);
            let series = terminating_2f1(-m, b, c, &ExactRational::one()).unwrap();
            let closed = gauss_value_at_1(-m, b, c).unwrap();
            prop_assert_eq!(&series, &closed.value);
            if closed.is_zero_by_pole {
                prop_assert!(series.is_zero());
            }
        }
    }
}
