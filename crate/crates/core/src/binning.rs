//! Entropy-calibrated histograms.
//!
//! The bin width is chosen so that the discrete entropy of the histogram is
//! `(1/M) log2 N` bits. Combining that target with `H = h - log2(width)` and a
//! nearest-neighbour estimate of the differential entropy `h` gives
//! `width = 2^h / N^(1/M)`. No assumption about the underlying density is made.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::discrete_entropy;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Smallest sample for which a calibrated histogram is built.
pub const MIN_BINNING_SAMPLES: usize = 36;

pub const DEFAULT_M: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub h_bits: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram1D {
    /// Left edge of bin 0.
    pub origin: f64,
    pub width: f64,
    pub counts: Vec<u64>,
    pub n: usize,
    pub m_parameter: f64,
    /// Differential entropy estimate the width was derived from.
    pub h_bits: f64,
}

impl Histogram1D {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Bin index of `x`; values past either edge are clamped into range.
    pub fn bin_of(&self, x: f64) -> usize {
        bin_index(x, self.origin, self.width, self.counts.len())
    }

    /// Discrete (Shannon) entropy of the bin occupancies, in bits.
    pub fn discrete_entropy(&self) -> f64 {
        discrete_entropy(&self.counts).unwrap_or(0.0)
    }
}

fn bin_count(min: f64, max: f64, width: f64) -> usize {
    let bins = ((max - min) / width).ceil();
    if bins.is_finite() && bins >= 1.0 {
        bins as usize
    } else {
        1
    }
}

fn bin_index(x: f64, origin: f64, width: f64, bins: usize) -> usize {
    let raw = ((x - origin) / width).floor();
    if raw <= 0.0 {
        0
    } else {
        (raw as usize).min(bins - 1)
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Distance from each point to its nearest neighbour at a strictly positive
/// distance. Duplicate values are skipped rather than yielding zero.
pub fn nn_spacings(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: values.len(),
        });
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    // Collapse equal values into groups of (value, first, end) over `order`.
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    for (pos, &idx) in order.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if g.0 == values[idx] => g.2 = pos + 1,
            _ => groups.push((values[idx], pos, pos + 1)),
        }
    }
    if groups.len() < 2 {
        return Err(Error::NoPositiveSpacing);
    }

    let mut out = vec![0.0; values.len()];
    for (g, &(value, start, end)) in groups.iter().enumerate() {
        let below = g.checked_sub(1).map(|p| value - groups[p].0);
        let above = groups.get(g + 1).map(|next| next.0 - value);
        let spacing = match (below, above) {
            (Some(b), Some(a)) => b.min(a),
            (Some(b), None) => b,
            (None, Some(a)) => a,
            (None, None) => unreachable!("at least two groups"),
        };
        for &idx in &order[start..end] {
            out[idx] = spacing;
        }
    }
    Ok(out)
}

/// Nearest-neighbour (Kozachenko–Leonenko) estimate of the differential
/// entropy of a one-dimensional sample, in bits.
pub fn differential_entropy(values: &[f64]) -> Result<EntropyEstimate> {
    let spacings = nn_spacings(values)?;
    let n = values.len();
    let mean_log = spacings.iter().map(|s| s.log2()).sum::<f64>() / n as f64;
    let h_bits = mean_log + (2.0 * (n as f64 - 1.0)).log2() + EULER_GAMMA / std::f64::consts::LN_2;
    Ok(EntropyEstimate { h_bits, n })
}

fn width_from_entropy(h_bits: f64, n: usize, m: f64) -> f64 {
    h_bits.exp2() / (n as f64).powf(1.0 / m)
}

fn check_m(m: f64) -> Result<()> {
    if m.is_finite() && m > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("M must exceed 1, got {m}")))
    }
}

/// Bin width giving a histogram with `(1/m) log2 n` bits of information.
pub fn bin_width(values: &[f64], m: f64) -> Result<f64> {
    check_m(m)?;
    let est = differential_entropy(values)?;
    Ok(width_from_entropy(est.h_bits, est.n, m))
}

/// Builds the calibrated histogram, anchored at the sample minimum.
pub fn build_histogram(values: &[f64], m: f64) -> Result<Histogram1D> {
    check_m(m)?;
    if values.len() < MIN_BINNING_SAMPLES {
        return Err(Error::TooFewRows {
            needed: MIN_BINNING_SAMPLES,
            found: values.len(),
        });
    }
    let est = differential_entropy(values)?;
    let width = width_from_entropy(est.h_bits, est.n, m);
    let (min, max) = min_max(values);
    let mut counts = vec![0u64; bin_count(min, max, width)];
    let bins = counts.len();
    for &x in values {
        counts[bin_index(x, min, width, bins)] += 1;
    }
    Ok(Histogram1D {
        origin: min,
        width,
        counts,
        n: values.len(),
        m_parameter: m,
        h_bits: est.h_bits,
    })
}

/// Shimazaki–Shinomoto cost `(2 mean - var) / width^2` of the per-bin counts.
///
/// Bins span `[min, max]`; empty bins are included and the variance uses the
/// population (N) denominator.
pub fn shimazaki_cost(values: &[f64], width: f64) -> Result<f64> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {width}"
        )));
    }
    if values.is_empty() {
        return Err(Error::TooFewRows {
            needed: 1,
            found: 0,
        });
    }
    let (min, max) = min_max(values);
    let bins = bin_count(min, max, width);
    let mut counts = vec![0u64; bins];
    for &x in values {
        counts[bin_index(x, min, width, bins)] += 1;
    }
    let k = bins as f64;
    let mean = values.len() as f64 / k;
    let var = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / k;
    Ok((2.0 * mean - var) / (width * width))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostPoint {
    pub m: f64,
    pub width: f64,
    pub raw: f64,
    /// Cost shifted to 0 at M = 2 and scaled so the M = 1 value is 1.
    pub scaled: f64,
}

/// The grid M = 1.0, 1.25, ..., 6.0.
pub fn default_m_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.0 + 0.25 * i as f64).collect()
}

/// Evaluates the cost function across a grid of M values. The grid must
/// contain M = 1 and M = 2, which anchor the normalization.
pub fn cost_scan(values: &[f64], m_grid: &[f64]) -> Result<Vec<CostPoint>> {
    let anchor = |target: f64| {
        m_grid
            .iter()
            .position(|&m| m == target)
            .ok_or_else(|| Error::InvalidParameter(format!("M grid lacks the M = {target} anchor")))
    };
    let one = anchor(1.0)?;
    let two = anchor(2.0)?;
    if let Some(bad) = m_grid.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(Error::InvalidParameter(format!("invalid M value {bad}")));
    }
    let est = differential_entropy(values)?;
    let mut points = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let width = width_from_entropy(est.h_bits, est.n, m);
        let raw = shimazaki_cost(values, width)?;
        points.push(CostPoint {
            m,
            width,
            raw,
            scaled: 0.0,
        });
    }
    let base = points[two].raw;
    let span = points[one].raw - base;
    if span == 0.0 || !span.is_finite() {
        return Err(Error::InvalidParameter(
            "cost is identical at M = 1 and M = 2; cannot normalize".into(),
        ));
    }
    for p in &mut points {
        p.scaled = (p.raw - base) / span;
    }
    Ok(points)
}
