//! Sato-Tate measure, Birch-style moments, exponential sums, discrepancy
//! and the Erdős–Turán bound for a trace histogram.
//!
//! Writing `2 cos(theta_n) = t_n / sqrt(p)`, every even power of it is
//! rational, so moments and `sum_n cos(2 m theta_n)` are computed exactly from
//! integer power sums of the traces. The `f64` route through the angles is
//! kept only as a cross-check.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::curve_family::{AngleSample, TraceHistogram};
use crate::error::{invalid, Error, Result};
use crate::exact_kernel::{catalan, chebyshev_coeffs};
use crate::rational::ExactRational;

/// Half-open interval `[lo, hi)` inside `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(invalid(format!(
                "interval [{lo}, {hi}) must satisfy 0 <= lo <= hi <= 1"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// `[0, 0.25)`, `[0, 0.5)` and `[0.25, 0.75)`.
    pub fn defaults() -> Vec<Interval> {
        vec![
            Interval { lo: 0.0, hi: 0.25 },
            Interval { lo: 0.0, hi: 0.5 },
            Interval { lo: 0.25, hi: 0.75 },
        ]
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// `lo:hi`
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| invalid(format!("interval {s:?} is not lo:hi")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| invalid(format!("interval endpoint {v:?}: {e}")))
        };
        Interval::new(parse(lo)?, parse(hi)?)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// A probability measure on `[0, 1]` described by its density, interval
/// masses and Fourier coefficients.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    pub name: &'static str,
    density: fn(f64) -> f64,
    mass: fn(Interval) -> f64,
    /// Nonzero Fourier coefficients; absent frequencies are zero.
    fourier: BTreeMap<i64, ExactRational>,
    /// `sup |F|` over `[0, 1]`.
    pub sup_norm: f64,
}

impl MeasureSpec {
    /// Density `2 sin^2(pi x) = 1 - (e(x) + e(-x)) / 2`.
    pub fn sato_tate() -> Self {
        let half = ExactRational::new(-1, 2).unwrap();
        Self {
            name: "sato-tate",
            density: |x| 2.0 * (PI * x).sin().powi(2),
            mass: st_interval_mass,
            fourier: BTreeMap::from([
                (0, ExactRational::one()),
                (1, half.clone()),
                (-1, half),
            ]),
            sup_norm: 2.0,
        }
    }

    /// Lebesgue measure on `[0, 1]`.
    pub fn uniform() -> Self {
        Self {
            name: "uniform",
            density: |_| 1.0,
            mass: |i| i.length(),
            fourier: BTreeMap::from([(0, ExactRational::one())]),
            sup_norm: 1.0,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        (self.density)(x)
    }

    pub fn mass(&self, i: Interval) -> f64 {
        (self.mass)(i)
    }

    pub fn fourier(&self, m: i64) -> ExactRational {
        self.fourier.get(&m).cloned().unwrap_or_default()
    }
}

/// Sato-Tate mass of `[lo, hi)`: `(hi - lo) - (sin 2 pi hi - sin 2 pi lo) / (2 pi)`.
pub fn st_interval_mass(i: Interval) -> f64 {
    i.length() - ((2.0 * PI * i.hi).sin() - (2.0 * PI * i.lo).sin()) / (2.0 * PI)
}

/// `(1/V_p) sum_n (2 cos theta_n)^{2R} = sum_t t^{2R} count[t] / (p^R V_p)`.
pub fn empirical_moment(hist: &TraceHistogram, r: u32) -> ExactRational {
    let den = BigInt::from(hist.p()).pow(r) * hist.v_p();
    ExactRational::new(hist.power_sum(2 * r), den).expect("V_p > 0")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub p: u64,
    pub r: u32,
    #[serde(serialize_with = "ser_rational")]
    pub empirical: ExactRational,
    #[serde(serialize_with = "ser_display")]
    pub catalan_target: BigInt,
    /// `|empirical - catalan_target|`
    pub deviation: f64,
}

pub fn moment_report(hist: &TraceHistogram, r: u32) -> MomentReport {
    let empirical = empirical_moment(hist, r);
    let target = catalan(r as u64);
    let deviation = (&empirical - &ExactRational::from(target.clone())).abs().to_f64();
    MomentReport {
        p: hist.p(),
        r,
        empirical,
        catalan_target: target,
        deviation,
    }
}

/// `sum_n cos(2 m theta_n)`, exactly.
///
/// Uses `2 cos(2m theta) = sum_r c_{2m,2r} (2 cos theta)^{2r}` per bucket with
/// `(2 cos theta)^2 = t^2 / p`.
pub fn expsum_exact(hist: &TraceHistogram, m: u64) -> Result<ExactRational> {
    let coeffs = chebyshev_coeffs(m)?;
    let p = ExactRational::from_integer(hist.p());
    let mut total = ExactRational::zero();
    for (t, count) in hist.buckets() {
        let u = ExactRational::from_integer(t * t) / p.clone();
        let value = coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * &u + c);
        total += value * ExactRational::from_integer(count);
    }
    Ok(total * ExactRational::new(1, 2).unwrap())
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(sum_n cos(2 pi m x_n), sum_n sin(2 pi m x_n))` in floating point.
pub fn expsum_float(sample: &AngleSample, m: i64) -> (f64, f64) {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for pt in sample.points() {
        let phase = 2.0 * PI * m as f64 * pt.x;
        re.add(pt.count as f64 * phase.cos());
        im.add(pt.count as f64 * phase.sin());
    }
    (re.value(), im.value())
}

/// `#{n : x_n in [lo, hi)}`.
///
/// `x in [lo, hi)` iff `2 sqrt(p) cos(pi hi) < t <= 2 sqrt(p) cos(pi lo)`; the
/// comparison is done in `f64` with no tolerance band. Traces exactly on a
/// threshold can only arise for measure-zero endpoint choices.
pub fn interval_count(hist: &TraceHistogram, i: Interval) -> u64 {
    let scale = 2.0 * (hist.p() as f64).sqrt();
    let upper = scale * (PI * i.lo).cos();
    let lower = scale * (PI * i.hi).cos();
    hist.buckets()
        .filter(|&(t, _)| {
            let t = t as f64;
            lower < t && t <= upper
        })
        .map(|(_, c)| c)
        .sum()
}

/// `|N_I - V_p mu(I)|`.
pub fn discrepancy(hist: &TraceHistogram, i: Interval, mu: &MeasureSpec) -> f64 {
    let n = interval_count(hist, i) as f64;
    (n - hist.v_p() as f64 * mu.mass(i)).abs()
}

/// `|sum_n e(m x_n) - V_p c_m|`, with the imaginary part zero by the
/// `x -> 1 - x` symmetry of the family.
pub fn expsum_deviation(hist: &TraceHistogram, m: u64, mu: &MeasureSpec) -> Result<ExactRational> {
    let sum = expsum_exact(hist, m)?;
    let target = mu.fourier(m as i64) * ExactRational::from_integer(hist.v_p());
    Ok((sum - target).abs())
}

/// Erdős–Turán bound with cutoff `M`:
/// `V ||mu|| / (M+1) + sum_{m=1}^{M} (1/(M+1) + min(|I|, 1/(pi m))) |sum_n e(m x_n) - V c_m|`.
pub fn et_bound(hist: &TraceHistogram, i: Interval, mu: &MeasureSpec, cutoff: u64) -> Result<f64> {
    if cutoff < 1 {
        return Err(invalid("Erdős–Turán cutoff M must be >= 1"));
    }
    let deviations = (1..=cutoff)
        .map(|m| expsum_deviation(hist, m, mu).map(|d| d.to_f64()))
        .collect::<Result<Vec<_>>>()?;
    Ok(et_bound_from_deviations(hist.v_p(), mu.sup_norm, i, &deviations))
}

/// The bound assembled from precomputed `|sum_n e(m x_n) - V c_m|` for
/// `m = 1..=deviations.len()`.
pub fn et_bound_from_deviations(v_p: u64, sup_norm: f64, i: Interval, deviations: &[f64]) -> f64 {
    let inv = 1.0 / (deviations.len() as f64 + 1.0);
    let mut bound = v_p as f64 * sup_norm * inv;
    for (k, dev) in deviations.iter().enumerate() {
        let m = (k + 1) as f64;
        bound += (inv + i.length().min(1.0 / (PI * m))) * dev;
    }
    bound
}

/// Cutoff balancing `V/M` against `M 2^{3M} V^{-(1-c-eps)/2}`:
/// `max(1, floor((3 - c - eps)/6 * ln V))`.
pub fn optimal_m(v_p: u64, c: f64, epsilon: f64) -> Result<u64> {
    if v_p < 2 {
        return Err(invalid(format!("V_p = {v_p} must be >= 2")));
    }
    if !(0.0..1.0).contains(&c) {
        return Err(invalid(format!("exponent c = {c} must lie in [0, 1)")));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(invalid(format!("epsilon = {epsilon} must be > 0")));
    }
    let m = ((3.0 - c - epsilon) / 6.0 * (v_p as f64).ln()).floor();
    Ok(if m < 1.0 { 1 } else { m as u64 })
}

/// `(2/V) sum_n cos(2 m theta_n) - sum_r c_{2m,2r} M_p(2r)`, which must be zero.
///
/// The left term goes through per-bucket evaluation, the right through the
/// aggregated moments.
pub fn moment_identity_residual(hist: &TraceHistogram, m: u64) -> Result<ExactRational> {
    let lhs = expsum_exact(hist, m)?
        * ExactRational::new(2, hist.v_p()).expect("V_p > 0");
    let coeffs = chebyshev_coeffs(m)?;
    let rhs: ExactRational = coeffs
        .iter()
        .enumerate()
        .map(|(r, c)| c * &empirical_moment(hist, r as u32))
        .sum();
    Ok(lhs - rhs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub p: u64,
    pub v_p: u64,
    pub interval: Interval,
    pub cutoff: u64,
    pub n_i: u64,
    pub measured: f64,
    pub et_bound: f64,
    pub c_exponent: f64,
    pub epsilon: f64,
}

impl DiscrepancyReport {
    /// `measured / et_bound`.
    pub fn ratio(&self) -> f64 {
        self.measured / self.et_bound
    }

    /// `D log V / V`, the constant in a `V / log V` discrepancy bound.
    pub fn log_savings_constant(&self) -> f64 {
        self.measured * (self.v_p as f64).ln() / self.v_p as f64
    }
}

/// Discrepancy against Sato-Tate with `M = optimal_m(V_p, c, epsilon)`.
pub fn discrepancy_report(
    hist: &TraceHistogram,
    i: Interval,
    c: f64,
    epsilon: f64,
) -> Result<DiscrepancyReport> {
    let mu = MeasureSpec::sato_tate();
    let cutoff = optimal_m(hist.v_p(), c, epsilon)?;
    Ok(DiscrepancyReport {
        p: hist.p(),
        v_p: hist.v_p(),
        interval: i,
        cutoff,
        n_i: interval_count(hist, i),
        measured: discrepancy(hist, i, &mu),
        et_bound: et_bound(hist, i, &mu, cutoff)?,
        c_exponent: c,
        epsilon,
    })
}

fn ser_rational<S: serde::Serializer>(x: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
