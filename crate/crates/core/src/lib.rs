//! Exact verification of the alternating binomial identity
//! `sum_{r=0}^{m} (-1)^r C(m,r) C(m+r,r) / ((r+1)(m+r)) = [m = 1] / 2`
//! and a desk-scale Sato-Tate equidistribution pipeline for the family of all
//! elliptic curves `y^2 = x^3 + a x + b` over `F_p`.
//!
//! * [`exact_kernel`]: generalized binomials, the identity by direct
//!   summation, Vandermonde and alternating convolution residuals, Catalan
//!   numbers, and the expansion of `2 cos(2m t)` in powers of `2 cos t`.
//! * [`hypergeometric`]: terminating `2F1` series and Gauss's closed form,
//!   giving an independent route to the same identity.
//! * [`curve_family`] and [`cache`]: trace-of-Frobenius histograms and their
//!   on-disk format.
//! * [`equidistribution`]: moments, exponential sums, discrepancy and the
//!   Erdős–Turán bound.
//! * [`report`] and [`cli`]: the `sato-tate` command line and its outputs.

pub mod cache;
pub mod cli;
pub mod curve_family;
pub mod equidistribution;
pub mod error;
pub mod exact_kernel;
pub mod hypergeometric;
pub mod rational;
pub mod report;

pub use curve_family::{
    angles, curve_trace, family_histogram, family_histogram_with, legendre_table, AngleSample,
    FamilyParams, LegendreTable, ScanStrategy, TraceHistogram,
};
pub use equidistribution::{
    discrepancy, empirical_moment, et_bound, expsum_exact, expsum_float, moment_identity_residual,
    optimal_m, st_interval_mass, DiscrepancyReport, Interval, MeasureSpec, MomentReport,
};
pub use error::{Error, Result};
pub use exact_kernel::{
    alternating_lemma_residual, binomial_general, catalan, chebyshev_coeffs, chebyshev_eval,
    s_m_direct, vandermonde_residual, ChebyshevExpansion, GeneralBinomial,
};
pub use hypergeometric::{gauss_value_at_1, pochhammer, s_m_hyper, terminating_2f1, GammaRatioValue};
pub use rational::ExactRational;
