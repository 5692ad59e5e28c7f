//! Summary table of SI and CDI values, one row per variable subset.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze, AnalysisOptions, Statistics};
use crate::class_distance::{false_alarm_bound, CdiResult};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// SI values below this print as "-".
pub const SI_ZERO_CUTOFF: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum SiCell {
    Value(f64),
    /// Effectively zero.
    Zero,
    /// Not defined for three or more variables, or not computable.
    Na,
}

impl SiCell {
    fn from_option(v: Option<f64>) -> Self {
        match v {
            Some(v) if v < SI_ZERO_CUTOFF => SiCell::Zero,
            Some(v) => SiCell::Value(v),
            None => SiCell::Na,
        }
    }

    fn render(&self) -> String {
        match self {
            SiCell::Value(v) => format!("{v:.2}"),
            SiCell::Zero => "-".into(),
            SiCell::Na => "NA".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub variables: Vec<String>,
    pub si: SiCell,
    pub cdi_12: f64,
    pub cdi_21: f64,
    pub cdr: f64,
    /// `2^-CDR`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub class_labels: [String; 2],
    pub n_rows: usize,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub analysis: AnalysisOptions,
    /// Subsets of two or more variables shown per size.
    pub top_per_size: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            analysis: AnalysisOptions::default(),
            top_per_size: 4,
        }
    }
}

fn report_row(stats: &Statistics, e: &CdiResult) -> Result<ReportRow> {
    let class_name = stats
        .si
        .names
        .last()
        .map(String::as_str)
        .unwrap_or_default();
    let si = match e.subset.as_slice() {
        [v] => SiCell::from_option(stats.si.get(v, class_name)),
        [a, b] => SiCell::from_option(stats.si.get(a, b)),
        _ => SiCell::Na,
    };
    Ok(ReportRow {
        variables: e.subset.clone(),
        si,
        cdi_12: e.cdi_12,
        cdi_21: e.cdi_21,
        cdr: e.cdr,
        bound: false_alarm_bound(e.cdr)?,
    })
}

pub fn generate_report(d: &Dataset, options: &ReportOptions) -> Result<Report> {
    if d.class_meta().is_none() {
        return Err(Error::NoClassColumn);
    }
    let stats = analyze(d, &options.analysis)?;
    Report::from_statistics(&stats, options.top_per_size)
}

impl Report {
    /// Every singleton, then the best `top_per_size` subsets of each larger size.
    pub fn from_statistics(stats: &Statistics, top_per_size: usize) -> Result<Self> {
        let ranking = stats.ranking.as_ref().ok_or(Error::NoClassColumn)?;
        let mut rows = ranking
            .singletons()
            .map(|e| report_row(stats, e))
            .collect::<Result<Vec<_>>>()?;
        for size in 2..=ranking.max_size {
            for e in ranking.of_size(size).take(top_per_size) {
                rows.push(report_row(stats, e)?);
            }
        }
        Ok(Self {
            class_labels: ranking.class_labels.clone(),
            n_rows: stats.n_rows,
            rows,
        })
    }

    /// Rows in overall ranking order (descending CDR), optionally truncated.
    pub fn ranked(stats: &Statistics, top: Option<usize>) -> Result<Self> {
        let ranking = stats.ranking.as_ref().ok_or(Error::NoClassColumn)?;
        let rows = ranking
            .entries
            .iter()
            .take(top.unwrap_or(usize::MAX))
            .map(|e| report_row(stats, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            class_labels: ranking.class_labels.clone(),
            n_rows: stats.n_rows,
            rows,
        })
    }

    fn headers(&self) -> [String; 7] {
        let [c1, c2] = &self.class_labels;
        [
            "Variables".into(),
            "#".into(),
            "SI".into(),
            format!("CDI({c1},{c2})"),
            format!("CDI({c2},{c1})"),
            "CDR".into(),
            "Bound".into(),
        ]
    }

    fn cells(&self) -> Vec<[String; 7]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.variables.join("/"),
                    r.variables.len().to_string(),
                    r.si.render(),
                    format!("{:.2}", r.cdi_12),
                    format!("{:.2}", r.cdi_21),
                    format!("{:.2}", r.cdr),
                    format!("{:.3}", r.bound),
                ]
            })
            .collect()
    }

    /// Aligned plain-text table.
    pub fn render_text(&self) -> String {
        let headers = self.headers();
        let cells = self.cells();
        let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[String; 7]| {
            let mut s = format!("{:<w$}", row[0], w = widths[0]);
            for (c, w) in row.iter().zip(&widths).skip(1) {
                let _ = write!(s, "  {c:>w$}");
            }
            let _ = writeln!(out, "{}", s.trim_end());
        };
        line(&mut out, &headers);
        let _ = writeln!(
            out,
            "{}",
            "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1))
        );
        for row in &cells {
            line(&mut out, row);
        }
        let _ = writeln!(
            out,
            "\nN = {}. SI: variable vs class for single variables, between the pair for two; \"-\" is zero, NA undefined. Bound = 2^-CDR.",
            self.n_rows
        );
        out
    }

    /// One header line and one line per row, separated by `delimiter`.
    pub fn render_delimited(&self, delimiter: char) -> String {
        let mut out = String::new();
        let sep = delimiter.to_string();
        let _ = writeln!(out, "{}", self.headers().join(&sep));
        for row in self.cells() {
            let _ = writeln!(out, "{}", row.join(&sep));
        }
        out
    }
}
