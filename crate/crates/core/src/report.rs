//! Report rows and their CSV / JSON renderings.
//!
//! Exact rationals are written as correctly rounded decimals with 15
//! significant digits; the `exact` column carries `num/den` alongside.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use crate::curve_family::{angles, TraceHistogram};
use crate::equidistribution::{
    discrepancy_report, et_bound, expsum_exact, expsum_float, interval_count,
    moment_identity_residual, moment_report, DiscrepancyReport, Interval, MeasureSpec,
};
use crate::error::Result;
use crate::rational::ExactRational;

pub const SIG_DIGITS: usize = 15;
pub const TREND_DIGITS: usize = 6;

/// Slack for the Erdős–Turán domination check, relative to `V_p`.
pub const ET_SLACK: f64 = 1e-6;
/// Exact vs float exponential-sum agreement, relative to `V_p`.
pub const ROUTE_TOLERANCE: f64 = 1e-6;
/// Imaginary part of the float exponential sum, relative to `V_p`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

pub const REPORT_COLUMNS: [&str; 11] = [
    "p", "V_p", "kind", "m_or_R", "interval_lo", "interval_hi", "M", "value", "bound", "ratio",
    "exact",
];

pub fn fmt_f64(x: f64) -> String {
    fmt_f64_digits(x, SIG_DIGITS)
}

pub fn fmt_f64_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        // Avoid "-0" and keep the same shape as nonzero values.
        return ExactRational::zero().to_sci(digits);
    }
    format!("{:.*e}", digits - 1, x)
}

pub fn fmt_exact(x: &ExactRational) -> String {
    x.to_sci(SIG_DIGITS)
}

/// A rectangular table of preformatted cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        debug_assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    fn records(&self) -> Vec<BTreeMap<&str, &str>> {
        self.rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .map(String::as_str)
                    .zip(row.iter().map(String::as_str))
                    .collect()
            })
            .collect()
    }
}

/// A check that did not hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub detail: String,
}

impl Failure {
    pub fn new(check: &str, p: Option<u64>, detail: impl Into<String>) -> Self {
        Self {
            check: check.to_string(),
            p,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything a command emits.
#[derive(Clone, Debug)]
pub struct Output {
    /// Run description; the first line of CSV output, `meta` in JSON.
    pub meta: BTreeMap<String, String>,
    pub table: Table,
    pub failures: Vec<Failure>,
}

impl Output {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let meta: Vec<String> = self.meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "# {}", meta.join(" "))?;
                writeln!(out, "{}", self.table.columns.join(","))?;
                for row in &self.table.rows {
                    writeln!(out, "{}", row.join(","))?;
                }
                Ok(())
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Doc<'a> {
                    meta: &'a BTreeMap<String, String>,
                    rows: Vec<BTreeMap<&'a str, &'a str>>,
                    failures: &'a [Failure],
                }
                let doc = Doc {
                    meta: &self.meta,
                    rows: self.table.records(),
                    failures: &self.failures,
                };
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
        }
    }
}

#[derive(Default)]
struct Row {
    p: Option<u64>,
    v_p: Option<u64>,
    kind: &'static str,
    m_or_r: Option<u64>,
    interval: Option<Interval>,
    cutoff: Option<u64>,
    value: String,
    bound: String,
    ratio: String,
    exact: String,
}

impl Row {
    fn for_hist(hist: &TraceHistogram, kind: &'static str) -> Self {
        Self {
            p: Some(hist.p()),
            v_p: Some(hist.v_p()),
            kind,
            ..Self::default()
        }
    }

    fn cells(self) -> Vec<String> {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let (lo, hi) = match self.interval {
            Some(i) => (i.lo().to_string(), i.hi().to_string()),
            None => (String::new(), String::new()),
        };
        vec![
            opt(self.p),
            opt(self.v_p),
            self.kind.to_string(),
            opt(self.m_or_r),
            lo,
            hi,
            opt(self.cutoff),
            self.value,
            self.bound,
            self.ratio,
            self.exact,
        ]
    }
}

pub fn report_table() -> Table {
    Table::new(&REPORT_COLUMNS)
}

/// `moment` rows: value `M_p(2R)`, bound the Catalan number, ratio the gap.
pub fn moment_rows(hist: &TraceHistogram, max_r: u32) -> Table {
    let mut table = report_table();
    for r in 0..=max_r {
        let rep = moment_report(hist, r);
        table.push(
            Row {
                m_or_r: Some(r as u64),
                value: fmt_exact(&rep.empirical),
                bound: rep.catalan_target.to_string(),
                ratio: fmt_f64(rep.deviation),
                exact: rep.empirical.to_string(),
                ..Row::for_hist(hist, "moment")
            }
            .cells(),
        );
    }
    table
}

/// `expsum_exact`, `expsum_float` and `moment_identity` rows for `1 <= m <= max_m`,
/// plus failures for route disagreement, asymmetry or a nonzero identity residual.
pub fn expsum_rows(hist: &TraceHistogram, max_m: u64) -> Result<(Table, Vec<Failure>)> {
    let mut table = report_table();
    let mut failures = Vec::new();
    let mu = MeasureSpec::sato_tate();
    let v = hist.v_p() as f64;
    let sample = angles(hist);
    for m in 1..=max_m {
        let exact = expsum_exact(hist, m)?;
        let target = mu.fourier(m as i64) * ExactRational::from_integer(hist.v_p());
        let exact_f = exact.to_f64();
        let gap = (&exact - &target).abs().to_f64() / v;
        table.push(
            Row {
                m_or_r: Some(m),
                value: fmt_exact(&exact),
                bound: fmt_exact(&target),
                ratio: fmt_f64(gap),
                exact: exact.to_string(),
                ..Row::for_hist(hist, "expsum_exact")
            }
            .cells(),
        );

        let (re, im) = expsum_float(&sample, m as i64);
        let route_gap = (re - exact_f).abs() / v;
        table.push(
            Row {
                m_or_r: Some(m),
                value: fmt_f64(re),
                bound: fmt_f64(im),
                ratio: fmt_f64(route_gap),
                ..Row::for_hist(hist, "expsum_float")
            }
            .cells(),
        );
        if route_gap > ROUTE_TOLERANCE {
            failures.push(Failure::new(
                "expsum_route_agreement",
                Some(hist.p()),
                format!("m={m}: float {re} vs exact {exact_f}"),
            ));
        }
        if im.abs() > SYMMETRY_TOLERANCE * v {
            failures.push(Failure::new(
                "expsum_symmetry",
                Some(hist.p()),
                format!("m={m}: imaginary part {im}"),
            ));
        }

        let residual = moment_identity_residual(hist, m)?;
        table.push(
            Row {
                m_or_r: Some(m),
                value: fmt_exact(&residual),
                bound: fmt_exact(&ExactRational::zero()),
                exact: residual.to_string(),
                ..Row::for_hist(hist, "moment_identity")
            }
            .cells(),
        );
        if !residual.is_zero() {
            failures.push(Failure::new(
                "moment_identity",
                Some(hist.p()),
                format!("m={m}: residual {residual}"),
            ));
        }
    }
    Ok((table, failures))
}

/// `discrepancy` rows: value `D`, bound the Erdős–Turán bound, ratio `D / bound`.
///
/// `cutoff` overrides the optimal `M` when given.
pub fn discrepancy_rows(
    hist: &TraceHistogram,
    intervals: &[Interval],
    c: f64,
    epsilon: f64,
    cutoff: Option<u64>,
) -> Result<(Table, Vec<DiscrepancyReport>, Vec<Failure>)> {
    let mut table = report_table();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mu = MeasureSpec::sato_tate();
    for &i in intervals {
        let mut rep = discrepancy_report(hist, i, c, epsilon)?;
        if let Some(m) = cutoff {
            rep.cutoff = m;
            rep.et_bound = et_bound(hist, i, &mu, m)?;
        }
        debug_assert_eq!(rep.n_i, interval_count(hist, i));
        table.push(
            Row {
                interval: Some(i),
                cutoff: Some(rep.cutoff),
                value: fmt_f64(rep.measured),
                bound: fmt_f64(rep.et_bound),
                ratio: fmt_f64(rep.ratio()),
                ..Row::for_hist(hist, "discrepancy")
            }
            .cells(),
        );
        if rep.measured > rep.et_bound + ET_SLACK * hist.v_p() as f64 {
            failures.push(Failure::new(
                "erdos_turan_domination",
                Some(hist.p()),
                format!("{i}: D = {} > bound {}", rep.measured, rep.et_bound),
            ));
        }
        reports.push(rep);
    }
    Ok((table, reports, failures))
}

/// One `trend` row per interval: `sup_p D log V_p / V_p`, attributed to the
/// maximizing prime.
pub fn trend_rows(reports: &[DiscrepancyReport], intervals: &[Interval]) -> Table {
    let mut table = report_table();
    for &i in intervals {
        let best = reports
            .iter()
            .filter(|r| r.interval == i)
            .map(|r| (r.log_savings_constant(), r))
            .fold(None::<(f64, &DiscrepancyReport)>, |acc, (k, r)| match acc {
                Some((best, _)) if best >= k => acc,
                _ => Some((k, r)),
            });
        if let Some((constant, rep)) = best {
            table.push(
                Row {
                    p: Some(rep.p),
                    v_p: Some(rep.v_p),
                    kind: "trend",
                    interval: Some(i),
                    cutoff: Some(rep.cutoff),
                    value: fmt_f64_digits(constant, TREND_DIGITS),
                    ..Row::default()
                }
                .cells(),
            );
        }
    }
    table
}
