//! The family of all elliptic curves `y^2 = x^3 + a x + b` over `F_p`.
//!
//! Each nonsingular pair `(a, b)` contributes its trace of Frobenius
//! `t = -sum_x chi(x^3 + a x + b)` to a [`TraceHistogram`]. There are exactly
//! `p` singular pairs, so the family has `V_p = p (p - 1)` members.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime `p >= 5` together with the family size `V_p = p (p - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyParams {
    p: u64,
    v_p: u64,
}

impl FamilyParams {
    pub fn new(p: u64) -> Result<Self> {
        // p(p-1) must fit comfortably; the O(p^3) scan is the real limit anyway.
        if p < 5 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotAdmissiblePrime(p));
        }
        Ok(Self { p, v_p: p * (p - 1) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn v_p(&self) -> u64 {
        self.v_p
    }

    /// Largest `t` with `t^2 <= 4p`.
    pub fn hasse_radius(&self) -> i64 {
        let mut r = (2.0 * (self.p as f64).sqrt()) as i64;
        while (r + 1) * (r + 1) <= 4 * self.p as i64 {
            r += 1;
        }
        while r * r > 4 * self.p as i64 {
            r -= 1;
        }
        r
    }
}

/// Quadratic character `chi(x)` for every residue `x mod p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreTable {
    p: u64,
    chi: Vec<i8>,
}

impl LegendreTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, x: u64) -> i8 {
        self.chi[(x % self.p) as usize]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.chi
    }
}

/// Marks `y^2` for `y = 1..=(p-1)/2` as residues; everything else nonzero is a
/// non-residue.
pub fn legendre_table(p: u64) -> Result<LegendreTable> {
    FamilyParams::new(p)?;
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for y in 1..=(p - 1) / 2 {
        chi[(y * y % p) as usize] = 1;
    }
    Ok(LegendreTable { p, chi })
}

pub fn is_singular(a: u64, b: u64, p: u64) -> bool {
    let (a, b) = (a % p, b % p);
    (4 * (a * a % p) % p * a + 27 * (b * b % p)) % p == 0
}

/// Trace of Frobenius of `y^2 = x^3 + a x + b` over `F_p`.
pub fn curve_trace(a: u64, b: u64, p: u64, table: &LegendreTable) -> Result<i64> {
    if table.p != p {
        return Err(crate::error::invalid(format!(
            "Legendre table is for p = {}, not {p}",
            table.p
        )));
    }
    if is_singular(a, b, p) {
        return Err(Error::SingularCurve {
            a: a % p,
            b: b % p,
            p,
        });
    }
    Ok(trace_unchecked(a % p, b % p, p, &table.chi))
}

#[inline]
fn trace_unchecked(a: u64, b: u64, p: u64, chi: &[i8]) -> i64 {
    // f(x) = x^3 + a x + b, advanced by finite differences modulo p:
    // f(x+1) - f(x) = 3x^2 + 3x + 1 + a.
    let mut f = b;
    let mut diff = (1 + a) % p; // f(1) - f(0)
    let mut second = 6 % p; // diff(x+1) - diff(x) = 6x + 6
    let mut sum = 0i64;
    for _ in 0..p {
        sum += chi[f as usize] as i64;
        f += diff;
        if f >= p {
            f -= p;
        }
        diff += second;
        if diff >= p {
            diff -= p;
        }
        second += 6;
        if second >= p {
            second -= p;
        }
        if second >= p {
            second -= p;
        }
    }
    -sum
}

/// Multiplicity of each trace value over the whole family for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceHistogram {
    params: FamilyParams,
    counts: BTreeMap<i64, u64>,
}

impl TraceHistogram {
    /// Builds and validates a histogram; zero buckets are dropped.
    pub fn from_counts(params: FamilyParams, counts: BTreeMap<i64, u64>) -> Result<Self> {
        let counts = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let hist = Self { params, counts };
        hist.validate()?;
        Ok(hist)
    }

    /// Checks the total, the Hasse bound and `counts[t] == counts[-t]`.
    pub fn validate(&self) -> Result<()> {
        let p = self.params.p;
        let fail = |reason: String| Err(Error::InvalidHistogram { p, reason });
        let total = self.total();
        if total != self.params.v_p {
            return fail(format!("total {total} != V_p = {}", self.params.v_p));
        }
        for (&t, &c) in &self.counts {
            if (t as i128) * (t as i128) > 4 * p as i128 {
                return fail(format!("trace {t} violates t^2 <= 4p"));
            }
            if self.count(-t) != c {
                return fail(format!(
                    "asymmetric: count[{t}] = {c}, count[{}] = {}",
                    -t,
                    self.count(-t)
                ));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn v_p(&self) -> u64 {
        self.params.v_p
    }

    pub fn count(&self, t: i64) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<i64, u64> {
        &self.counts
    }

    /// `(t, count)` pairs in ascending `t`.
    pub fn buckets(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts.iter().map(|(&t, &c)| (t, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `sum_t t^k count[t]` as an exact integer.
    pub fn power_sum(&self, k: u32) -> BigInt {
        self.buckets()
            .fold(BigInt::zero(), |acc, (t, c)| acc + BigInt::from(t).pow(k) * c)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanStrategy {
    /// One Legendre sum per curve, `O(p^3)`, parallel over `a`.
    #[default]
    Direct,
    /// One Legendre sum per twist orbit `{(a c^2, b c^3)}`, `O(p^2)`.
    TwistOrbits,
}

/// Scans the whole family with the default strategy on the current rayon pool.
pub fn family_histogram(p: u64) -> Result<TraceHistogram> {
    family_histogram_with(p, ScanStrategy::Direct)
}

pub fn family_histogram_with(p: u64, strategy: ScanStrategy) -> Result<TraceHistogram> {
    let params = FamilyParams::new(p)?;
    let table = legendre_table(p)?;
    let radius = params.hasse_radius();
    let width = (2 * radius + 1) as usize;

    let (bins, singular) = match strategy {
        ScanStrategy::Direct => scan_direct(p, &table.chi, radius, width),
        ScanStrategy::TwistOrbits => scan_orbits(p, &table.chi, radius, width),
    };
    if singular != p {
        return Err(Error::InvalidHistogram {
            p,
            reason: format!("found {singular} singular pairs, expected {p}"),
        });
    }
    let counts = bins
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (i as i64 - radius, c))
        .collect();
    TraceHistogram::from_counts(params, counts)
}

fn scan_direct(p: u64, chi: &[i8], radius: i64, width: usize) -> (Vec<u64>, u64) {
    (0..p)
        .into_par_iter()
        .map(|a| {
            let mut bins = vec![0u64; width];
            let mut singular = 0u64;
            for b in 0..p {
                if is_singular(a, b, p) {
                    singular += 1;
                    continue;
                }
                let t = trace_unchecked(a, b, p, chi);
                bins[(t + radius) as usize] += 1;
            }
            (bins, singular)
        })
        .reduce(
            || (vec![0u64; width], 0),
            |(mut acc, s1), (bins, s2)| {
                acc.iter_mut().zip(&bins).for_each(|(x, y)| *x += y);
                (acc, s1 + s2)
            },
        )
}

fn scan_orbits(p: u64, chi: &[i8], radius: i64, width: usize) -> (Vec<u64>, u64) {
    let n = (p * p) as usize;
    let mut seen = vec![false; n];
    let mut bins = vec![0u64; width];
    let mut singular = 0u64;
    for a in 0..p {
        for b in 0..p {
            if seen[(a * p + b) as usize] {
                continue;
            }
            if is_singular(a, b, p) {
                // Singular pairs form orbits of their own; count each once.
                seen[(a * p + b) as usize] = true;
                singular += 1;
                continue;
            }
            let t = trace_unchecked(a, b, p, chi);
            for c in 1..p {
                let c2 = c * c % p;
                let c3 = c2 * c % p;
                let idx = ((a * c2 % p) * p + b * c3 % p) as usize;
                if seen[idx] {
                    continue;
                }
                seen[idx] = true;
                // trace(a c^2, b c^3) = chi(c) trace(a, b)
                let tc = if chi[c as usize] > 0 { t } else { -t };
                bins[(tc + radius) as usize] += 1;
            }
        }
    }
    (bins, singular)
}

/// One distinct trace value viewed as a normalized angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnglePoint {
    pub trace: i64,
    /// `arccos(t / (2 sqrt p)) / pi`, in `[0, 1]`.
    pub x: f64,
    pub count: u64,
}

/// The normalized angles `x_n = theta_n / pi` of a histogram, with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSample {
    params: FamilyParams,
    points: Vec<AnglePoint>,
}

impl AngleSample {
    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn points(&self) -> &[AnglePoint] {
        &self.points
    }

    /// Number of angles counted with multiplicity, i.e. `V_p`.
    pub fn cardinality(&self) -> u64 {
        self.points.iter().map(|pt| pt.count).sum()
    }
}

pub fn normalized_angle(t: i64, p: u64) -> f64 {
    let y = (t as f64 / (2.0 * (p as f64).sqrt())).clamp(-1.0, 1.0);
    y.acos() / PI
}

pub fn angles(hist: &TraceHistogram) -> AngleSample {
    let p = hist.p();
    let points = hist
        .buckets()
        .map(|(t, count)| AnglePoint {
            trace: t,
            x: normalized_angle(t, p),
            count,
        })
        .collect();
    AngleSample {
        params: hist.params(),
        points,
    }
}
