//! Exact finite-sum identities over the generalized binomial coefficient.
//!
//! For a rational `top` and integer `bottom` the binomial coefficient is the
//! falling factorial `top (top-1) ... (top-bottom+1) / bottom!` when
//! `bottom >= 1`, one when `bottom == 0` and zero when `bottom < 0`. Every
//! convolution sum below is finite because terms with a negative bottom
//! vanish; the summation ranges are derived from that support, never capped.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::rational::ExactRational;

/// A binomial coefficient with rational top and integer bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralBinomial {
    pub top: ExactRational,
    pub bottom: i64,
}

impl GeneralBinomial {
    pub fn new(top: impl Into<ExactRational>, bottom: i64) -> Self {
        Self {
            top: top.into(),
            bottom,
        }
    }

    pub fn value(&self) -> ExactRational {
        binomial_general(&self.top, self.bottom)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Falling-factorial binomial coefficient with the zero/one conventions for
/// non-positive `bottom`.
pub fn binomial_general(top: &ExactRational, bottom: i64) -> ExactRational {
    if bottom < 0 {
        return ExactRational::zero();
    }
    if bottom == 0 {
        return ExactRational::one();
    }
    let k = bottom as u64;
    if let Some(n) = top.to_integer() {
        return ExactRational::from(binomial_integer(&n, k));
    }
    let mut acc = ExactRational::one();
    let mut factor = top.clone();
    let one = ExactRational::one();
    for _ in 0..k {
        acc *= &factor;
        factor -= &one;
    }
    acc * ExactRational::new(1, factorial(k)).expect("k! > 0")
}

/// Integer-top binomial via the falling factorial; valid for negative `n`.
pub fn binomial_integer(n: &BigInt, k: u64) -> BigInt {
    if !n.is_negative() && *n < BigInt::from(k) {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    // acc stays C(n, i) after step i, so each division is exact.
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binom_i(top: i64, bottom: i64) -> ExactRational {
    if bottom < 0 {
        return ExactRational::zero();
    }
    ExactRational::from(binomial_integer(&BigInt::from(top), bottom as u64))
}

/// The alternating sum
/// `sum_{r=0}^{m} (-1)^r C(m,r) C(m+r,r) / ((r+1)(m+r))`, evaluated term by term.
///
/// Exactly 1/2 for `m = 1` and 0 for every `m >= 2`.
pub fn s_m_direct(m: u64) -> Result<ExactRational> {
    if m < 1 {
        return Err(invalid(format!("s_m_direct requires m >= 1, got {m}")));
    }
    // Accumulate over the common denominator lcm_r((r+1)(m+r)) to avoid a
    // gcd reduction per term.
    let mut c_m_r = BigInt::one(); // C(m, r)
    let mut c_mr_r = BigInt::one(); // C(m+r, r)
    let mut terms = Vec::with_capacity(m as usize + 1);
    let mut lcm = BigInt::one();
    for r in 0..=m {
        if r > 0 {
            c_m_r = c_m_r * (m - r + 1) / r;
            c_mr_r = c_mr_r * (m + r) / r;
        }
        let den = BigInt::from((r + 1) * (m + r));
        let num = if r % 2 == 0 {
            &c_m_r * &c_mr_r
        } else {
            -(&c_m_r * &c_mr_r)
        };
        lcm = num_integer::lcm(lcm, den.clone());
        terms.push((num, den));
    }
    let total: BigInt = terms.iter().map(|(num, den)| num * (&lcm / den)).sum();
    Ok(ExactRational::new(total, lcm).expect("lcm > 0"))
}

/// `sum_k C(r, m+k) C(s, n-k) - C(r+s, m+n)`; zero by Vandermonde's convolution.
///
/// With `j = m + k` the sum runs over `0 <= j <= m + n`, further narrowed to
/// `j <= r` and `m + n - j <= s` when the respective top is a non-negative
/// integer.
pub fn vandermonde_residual(
    r: &ExactRational,
    s: &ExactRational,
    m: i64,
    n: i64,
) -> ExactRational {
    let total = m + n;
    let mut lo = 0i64;
    let mut hi = total;
    if let Some(ri) = nonneg_integer(r) {
        hi = hi.min(ri);
    }
    if let Some(si) = nonneg_integer(s) {
        lo = lo.max(total - si);
    }
    let lhs: ExactRational = (lo..=hi)
        .map(|j| binomial_general(r, j) * binomial_general(s, total - j))
        .sum();
    lhs - binomial_general(&(r + s), total)
}

fn nonneg_integer(x: &ExactRational) -> Option<i64> {
    let n = x.to_integer()?;
    if n.is_negative() {
        return None;
    }
    i64::try_from(n).ok()
}

/// `sum_k (-1)^k C(ell, m+k) C(s+k, n) - (-1)^(ell+m) C(s-m, n-ell)`, which
/// vanishes for non-negative integers `ell, m, s` and any integer `n`.
/// The sum runs over `0 <= m + k <= ell`.
pub fn alternating_lemma_residual(ell: i64, m: i64, s: i64, n: i64) -> Result<ExactRational> {
    if ell < 0 || m < 0 || s < 0 {
        return Err(invalid(format!(
            "alternating lemma requires ell, m, s >= 0, got ({ell}, {m}, {s})"
        )));
    }
    let mut lhs = ExactRational::zero();
    for k in -m..=(ell - m) {
        let term = binom_i(ell, m + k) * binom_i(s + k, n);
        if k.rem_euclid(2) == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = binom_i(s - m, n - ell);
    let rhs = if (ell + m) % 2 == 0 { rhs } else { -rhs };
    Ok(lhs - rhs)
}

/// The `r`-th Catalan number `C(2r, r) / (r + 1)`.
pub fn catalan(r: u64) -> BigInt {
    binomial_integer(&BigInt::from(2 * r), r) / (r + 1)
}

/// Coefficients `[c_{2m,0}, c_{2m,2}, ..., c_{2m,2m}]` with
/// `2 cos(2m t) = sum_r c_{2m,2r} (2 cos t)^{2r}`.
///
/// `c_{2m,0} = 2 (-1)^m` and, for `1 <= r <= m`,
/// `c_{2m,2r} = (-1)^{r+m} * 2/(2r)! * prod_{j<r} (m^2 - j^2)`.
pub fn chebyshev_coeffs(m: u64) -> Result<Vec<ExactRational>> {
    // m = 0 would need c_{0,0} = 2; the expansion is only used for m >= 1.
    if m < 1 {
        return Err(invalid(format!("chebyshev_coeffs requires m >= 1, got {m}")));
    }
    let m2 = BigInt::from(m) * m;
    let mut out = Vec::with_capacity(m as usize + 1);
    out.push(ExactRational::from_integer(if m % 2 == 0 { 2 } else { -2 }));
    let mut product = BigInt::one();
    let mut fact = BigInt::one(); // (2r)!
    for r in 1..=m {
        let j = r - 1;
        product *= &m2 - j * j;
        fact *= (2 * r - 1) * (2 * r);
        let value = ExactRational::new(&product * 2, fact.clone()).expect("(2r)! > 0");
        out.push(if (r + m) % 2 == 0 { value } else { -value });
    }
    Ok(out)
}

/// `2 cos(2m t)` written as a polynomial in `y = 2 cos t`.
#[derive(Clone, Debug)]
pub struct ChebyshevExpansion {
    m: u64,
    coeffs: Vec<ExactRational>,
    float_coeffs: Vec<f64>,
}

impl ChebyshevExpansion {
    pub fn new(m: u64) -> Result<Self> {
        let coeffs = chebyshev_coeffs(m)?;
        let float_coeffs = coeffs.iter().map(ExactRational::to_f64).collect();
        Ok(Self {
            m,
            coeffs,
            float_coeffs,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Horner evaluation in `y^2`.
    pub fn eval(&self, y: f64) -> f64 {
        let y2 = y * y;
        self.float_coeffs.iter().rev().fold(0.0, |acc, c| acc * y2 + c)
    }

    /// `sum_r |c_{2m,2r}| 4^r`, the natural scale of rounding error on `|y| <= 2`.
    pub fn coefficient_mass(&self) -> f64 {
        self.float_coeffs
            .iter()
            .enumerate()
            .map(|(r, c)| c.abs() * 4f64.powi(r as i32))
            .sum()
    }
}

pub fn chebyshev_eval(m: u64, y: f64) -> Result<f64> {
    Ok(ChebyshevExpansion::new(m)?.eval(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    fn int(n: i64) -> ExactRational {
        ExactRational::from_integer(n)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_general(&int(5), 2), int(10));
        assert_eq!(binomial_general(&int(3), 5), int(0));
        assert_eq!(binomial_general(&int(-1), 3), int(-1));
        assert_eq!(binomial_general(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial_general(&int(7), -2), int(0));
        assert_eq!(binomial_general(&q(-3, 7), 0), int(1));
        assert_eq!(GeneralBinomial::new(q(1, 2), 3).value(), q(1, 16));
    }

    #[test]
    fn s_m_examples() {
        assert_eq!(s_m_direct(1).unwrap(), q(1, 2));
        assert_eq!(s_m_direct(2).unwrap(), int(0));
        assert_eq!(s_m_direct(7).unwrap(), int(0));
        assert!(s_m_direct(0).is_err());
    }

    #[test]
    fn vandermonde_examples() {
        // 6 + 12 + 3 = 21 = C(7, 2)
        assert!(vandermonde_residual(&int(3), &int(4), 0, 2).is_zero());
        assert!(vandermonde_residual(&q(2, 3), &q(-5, 7), 0, 0).is_zero());
        assert!(vandermonde_residual(&q(1, 2), &q(1, 3), 2, 3).is_zero());
        assert!(vandermonde_residual(&int(-4), &q(5, 2), -3, 6).is_zero());
    }

    #[test]
    fn alternating_examples() {
        assert!(alternating_lemma_residual(2, 0, 1, 1).unwrap().is_zero());
        assert!(alternating_lemma_residual(1, 0, 2, 2).unwrap().is_zero());
        assert!(alternating_lemma_residual(0, 0, 0, 0).unwrap().is_zero());
        assert!(alternating_lemma_residual(-1, 0, 0, 0).is_err());
        assert!(alternating_lemma_residual(0, -1, 0, 0).is_err());
        assert!(alternating_lemma_residual(0, 0, -1, 0).is_err());
    }

    #[test]
    fn alternating_lemma_left_side_by_hand() {
        // (2, 0, 1, 1): k = 0, 1, 2 gives 1 - 4 + 3.
        let terms: Vec<i64> = (0..=2)
            .map(|k: i64| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let c1 = [1, 2, 1][k as usize];
                let c2 = 1 + k; // C(1 + k, 1)
                sign * c1 * c2
            })
            .collect();
        assert_eq!(terms, vec![1, -4, 3]);
    }

    fn catalan_by_recurrence(n: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::one()];
        for k in 0..n {
            let next: BigInt = (0..=k).map(|i| &c[i] * &c[k - i]).sum();
            c.push(next);
        }
        c
    }

    #[test]
    fn catalan_matches_recurrence() {
        let oracle = catalan_by_recurrence(30);
        assert_eq!(catalan(0), BigInt::from(1));
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(oracle[10], BigInt::from(16796));
        for (r, expected) in oracle.iter().enumerate() {
            assert_eq!(&catalan(r as u64), expected);
        }
    }

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(chebyshev_coeffs(1).unwrap(), vec![int(-2), int(1)]);
        assert_eq!(chebyshev_coeffs(2).unwrap(), vec![int(2), int(-4), int(1)]);
        assert!(chebyshev_coeffs(0).is_err());
        // 2cos(4t) in powers of 2cos t, checked numerically
        for i in 0..50 {
            let t = i as f64 * 0.0637;
            let y = 2.0 * t.cos();
            let lhs = 2.0 * (4.0 * t).cos();
            assert!((lhs - (2.0 - 4.0 * y * y + y.powi(4))).abs() < 1e-12);
        }
    }

    #[test]
    fn chebyshev_leading_coefficient_is_one() {
        for m in 1..=40u64 {
            // prod_{j<m}(m^2 - j^2) = prod (m-j)(m+j) = m! * (2m-1)!/(m-1)!
            let m2 = BigInt::from(m * m);
            let prod: BigInt = (0..m).map(|j| &m2 - BigInt::from(j * j)).product();
            assert_eq!(prod, factorial(2 * m) / 2);
            assert_eq!(chebyshev_coeffs(m).unwrap().last().unwrap(), &int(1));
        }
    }

    #[test]
    fn chebyshev_coefficients_are_integers() {
        for m in 1..=64 {
            assert!(chebyshev_coeffs(m).unwrap().iter().all(ExactRational::is_integer));
        }
    }

    #[test]
    fn chebyshev_eval_examples() {
        assert_eq!(chebyshev_eval(1, 2.0).unwrap(), 2.0);
        assert!((chebyshev_eval(3, 0.0).unwrap() + 2.0).abs() < 1e-15);
        let expected = 2.0 * (8.0 * std::f64::consts::PI / 3.0).cos();
        assert!((expected + 1.0).abs() < 1e-12);
        assert!((chebyshev_eval(4, 1.0).unwrap() - expected).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pascal_recurrence(n in -200i64..200, d in 1i64..12, k in 1i64..15) {
            let top = q(n, d);
            let lhs = binomial_general(&top, k);
            let prev = &top - &int(1);
            let rhs = binomial_general(&prev, k - 1) + binomial_general(&prev, k);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn symmetry_on_integer_tops(n in 0i64..60, k in 0i64..60) {
            prop_assume!(k <= n);
            prop_assert_eq!(binomial_general(&int(n), k), binomial_general(&int(n), n - k));
        }

        #[test]
        fn vandermonde_on_rationals(rn in -20i64..20, rd in 1i64..6, sn in -20i64..20, sd in 1i64..6,
                                    m in -5i64..10, n in -5i64..10) {
            let r = vandermonde_residual(&q(rn, rd), &q(sn, sd), m, n);
            prop_assert!(r.is_zero());
            prop_assert!(r.is_canonical());
        }

        #[test]
        fn alternating_lemma(ell in 0i64..=15, m in 0i64..=15, s in 0i64..=15, n in -5i64..35) {
            prop_assert!(alternating_lemma_residual(ell, m, s, n).unwrap().is_zero());
        }
    }
}
