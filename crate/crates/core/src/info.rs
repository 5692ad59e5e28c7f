//! Discrete entropies, mutual information, the Similarity Index and three-way
//! interaction information over binned or categorical variables.
//!
//! Entropies are computed from cell counts sorted ascending before summation,
//! so every statistic here is exactly invariant under relabeling of bin codes
//! and under reordering of its arguments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binning::{build_histogram, Histogram1D};
use crate::error::{Error, Result};

/// Per-row discrete codes for one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedVariable {
    pub name: String,
    pub codes: Vec<u32>,
    pub alphabet_size: u32,
}

impl BinnedVariable {
    /// Wraps category codes. The alphabet is `0..=max(code)`.
    pub fn from_codes(name: impl Into<String>, codes: Vec<u32>) -> Self {
        let alphabet_size = codes.iter().max().map_or(0, |m| m + 1);
        Self {
            name: name.into(),
            codes,
            alphabet_size,
        }
    }

    /// Assigns each value to its bin in `hist`.
    pub fn from_histogram(name: impl Into<String>, hist: &Histogram1D, values: &[f64]) -> Self {
        Self {
            name: name.into(),
            codes: values.iter().map(|&x| hist.bin_of(x) as u32).collect(),
            alphabet_size: hist.n_bins() as u32,
        }
    }

    /// Builds the calibrated histogram for `values` and bins them.
    pub fn from_continuous(
        name: impl Into<String>,
        values: &[f64],
        m: f64,
    ) -> Result<(Self, Histogram1D)> {
        let name = name.into();
        let hist = build_histogram(values, m).map_err(|e| e.in_variable(&name))?;
        Ok((Self::from_histogram(name, &hist, values), hist))
    }

    pub fn n(&self) -> usize {
        self.codes.len()
    }

    pub fn entropy(&self) -> f64 {
        joint_entropy(&[self]).expect("single variable is always aligned")
    }
}

/// Sparse joint histogram over one to three variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub dims: Vec<u32>,
    /// `(flat cell index, count)` for occupied cells, ascending by index.
    /// The flat index is row-major over `dims`.
    pub cells: Vec<(u64, u64)>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn build(vars: &[&BinnedVariable]) -> Result<Self> {
        if vars.is_empty() || vars.len() > 3 {
            return Err(Error::InvalidParameter(format!(
                "contingency tables take 1 to 3 variables, got {}",
                vars.len()
            )));
        }
        let n = vars[0].n();
        if let Some(v) = vars.iter().find(|v| v.n() != n) {
            return Err(Error::LengthMismatch(n, v.n()));
        }
        let dims: Vec<u32> = vars.iter().map(|v| v.alphabet_size.max(1)).collect();
        let mut flat: Vec<u64> = (0..n)
            .map(|row| {
                vars.iter().zip(&dims).fold(0u64, |acc, (v, &d)| {
                    acc * u64::from(d) + u64::from(v.codes[row])
                })
            })
            .collect();
        flat.sort_unstable();
        let mut cells: Vec<(u64, u64)> = Vec::new();
        for idx in flat {
            match cells.last_mut() {
                Some((last, count)) if *last == idx => *count += 1,
                _ => cells.push((idx, 1)),
            }
        }
        Ok(Self {
            dims,
            cells,
            total: n as u64,
        })
    }

    pub fn entropy(&self) -> f64 {
        let counts: Vec<u64> = self.cells.iter().map(|c| c.1).collect();
        discrete_entropy(&counts).unwrap_or(0.0)
    }
}

/// Shannon entropy in bits of a vector of counts. Empty cells contribute 0.
pub fn discrete_entropy(counts: &[u64]) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidParameter("entropy of all-zero counts".into()));
    }
    let mut occupied: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
    occupied.sort_unstable();
    let total = total as f64;
    let h = occupied
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    // A single occupied cell gives -0.0; normalize the sign.
    Ok(h + 0.0)
}

pub fn joint_entropy(vars: &[&BinnedVariable]) -> Result<f64> {
    Ok(ContingencyTable::build(vars)?.entropy())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutualInformation {
    /// Clamped at zero.
    pub bits: f64,
    /// `H(x) + H(y) - H(x, y)` before clamping.
    pub raw: f64,
}

pub fn mutual_information(x: &BinnedVariable, y: &BinnedVariable) -> Result<MutualInformation> {
    let hxy = joint_entropy(&[x, y])?;
    let raw = x.entropy() + y.entropy() - hxy;
    Ok(MutualInformation {
        bits: raw.max(0.0),
        raw,
    })
}

/// Mutual information normalized by the smaller marginal entropy.
pub fn similarity_index(x: &BinnedVariable, y: &BinnedVariable) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::LengthMismatch(x.n(), y.n()));
    }
    let hx = x.entropy();
    let hy = y.entropy();
    if hx <= 0.0 {
        return Err(Error::ZeroEntropy(x.name.clone()));
    }
    if hy <= 0.0 {
        return Err(Error::ZeroEntropy(y.name.clone()));
    }
    let mi = mutual_information(x, y)?;
    Ok((mi.bits / hx.min(hy)).clamp(0.0, 1.0))
}

/// Three-way co-information
/// `H(a)+H(b)+H(c) - H(a,b) - H(a,c) - H(b,c) + H(a,b,c)`.
///
/// Redundant triples come out positive, synergistic ones (XOR) negative.
pub fn interaction_information(
    a: &BinnedVariable,
    b: &BinnedVariable,
    c: &BinnedVariable,
) -> Result<f64> {
    let mut singles = [a.entropy(), b.entropy(), c.entropy()];
    let mut pairs = [
        joint_entropy(&[a, b])?,
        joint_entropy(&[a, c])?,
        joint_entropy(&[b, c])?,
    ];
    let triple = joint_entropy(&[a, b, c])?;
    singles.sort_by(f64::total_cmp);
    pairs.sort_by(f64::total_cmp);
    let s = singles[0] + singles[1] + singles[2];
    let p = pairs[0] + pairs[1] + pairs[2];
    Ok(s - p + triple)
}

/// Similarity Index for every unordered pair, as a symmetric matrix with a
/// unit diagonal. Entries are `None` where a variable has zero entropy.
pub fn similarity_matrix(vars: &[BinnedVariable]) -> Vec<Vec<Option<f64>>> {
    let p = vars.len();
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
        .collect();
    let values: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| similarity_index(&vars[i], &vars[j]).ok())
        .collect();
    let mut m = vec![vec![None; p]; p];
    for (i, v) in vars.iter().enumerate() {
        m[i][i] = (v.entropy() > 0.0).then_some(1.0);
    }
    for (&(i, j), v) in pairs.iter().zip(values) {
        m[i][j] = v;
        m[j][i] = v;
    }
    m
}
