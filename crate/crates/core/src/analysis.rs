//! One-shot analysis of a dataset and the bundle document that carries the
//! rows together with every statistic computed from them.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binning::DEFAULT_M;
use crate::class_distance::{rank_subsets, RankOptions, SubsetRanking};
use crate::dataset::{Dataset, VariableKind, VariableMeta};
use crate::diagram::{build_vid, SiPair, VidGraph, VidThresholds};
use crate::error::{Error, Result};
use crate::info::{similarity_matrix, BinnedVariable};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub m: f64,
    pub rank: RankOptions,
    pub thresholds: VidThresholds,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            m: DEFAULT_M,
            rank: RankOptions::default(),
            thresholds: VidThresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub name: String,
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    /// Every column in source order, class included.
    pub columns: Vec<VariableMeta>,
    pub class: Option<ClassSummary>,
    pub n_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableBinning {
    pub variable: String,
    pub kind: VariableKind,
    /// Histogram parameters; absent for categorical variables.
    pub origin: Option<f64>,
    pub width: Option<f64>,
    pub bins: Option<usize>,
    pub h_bits: Option<f64>,
    /// Discrete entropy of the binned (or categorical) variable.
    pub discrete_h_bits: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiMatrix {
    /// Variables in dataset order, then the class column if any.
    pub names: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl SiMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        self.values[i][j]
    }
}

/// Everything recomputed when the row set changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    pub n_rows: usize,
    pub m: f64,
    pub binning: Vec<VariableBinning>,
    pub si: SiMatrix,
    /// Absent when some Similarity Index could not be computed.
    pub vid: Option<VidGraph>,
    /// Absent when the dataset has no class column.
    pub ranking: Option<SubsetRanking>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowRecord {
    pub index: usize,
    /// One value per analysis variable (class excluded); categorical values
    /// are codes.
    pub values: Vec<f64>,
    pub class: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBundle {
    pub toolkit_version: String,
    pub options: AnalysisOptions,
    pub dataset: DatasetSummary,
    pub statistics: Statistics,
    pub rows: Vec<RowRecord>,
}

fn bin_variable(
    d: &Dataset,
    meta: &VariableMeta,
    m: f64,
) -> (Option<BinnedVariable>, VariableBinning) {
    let values = d.column(&meta.name).expect("meta from this dataset");
    let mut summary = VariableBinning {
        variable: meta.name.clone(),
        kind: meta.kind,
        origin: None,
        width: None,
        bins: None,
        h_bits: None,
        discrete_h_bits: None,
        error: None,
    };
    let binned = match meta.kind {
        VariableKind::Categorical => Some(BinnedVariable::from_codes(
            meta.name.clone(),
            values.iter().map(|&v| v as u32).collect(),
        )),
        VariableKind::Continuous => {
            match BinnedVariable::from_continuous(meta.name.clone(), values, m) {
                Ok((binned, hist)) => {
                    summary.origin = Some(hist.origin);
                    summary.width = Some(hist.width);
                    summary.bins = Some(hist.n_bins());
                    summary.h_bits = Some(hist.h_bits);
                    Some(binned)
                }
                Err(e) => {
                    summary.error = Some(e.to_string());
                    None
                }
            }
        }
    };
    summary.discrete_h_bits = binned.as_ref().map(BinnedVariable::entropy);
    (binned, summary)
}

/// Bins every variable, computes the Similarity Index matrix, the diagram and
/// (with a class column) the CDI ranking.
///
/// Variables that cannot be binned are reported in `binning[..].error` and
/// leave `None` in the SI matrix. Class problems and CDI failures are errors.
pub fn analyze(d: &Dataset, options: &AnalysisOptions) -> Result<Statistics> {
    if d.class_meta().is_some() {
        d.partition_by_class()?;
    }
    let mut metas: Vec<&VariableMeta> = d.variables().collect();
    metas.extend(d.class_meta());
    let binned: Vec<(Option<BinnedVariable>, VariableBinning)> = metas
        .par_iter()
        .map(|meta| bin_variable(d, meta, options.m))
        .collect();
    let names: Vec<String> = metas.iter().map(|m| m.name.clone()).collect();

    // Placeholders for unbinnable variables keep the matrix aligned; their
    // entries are masked to None below.
    let vars: Vec<BinnedVariable> = binned
        .iter()
        .zip(&names)
        .map(|((b, _), name)| {
            b.clone()
                .unwrap_or_else(|| BinnedVariable::from_codes(name.clone(), vec![0; d.n_rows()]))
        })
        .collect();
    let mut values = similarity_matrix(&vars);
    for (i, (b, _)) in binned.iter().enumerate() {
        if b.is_none() {
            values[i].fill(None);
            for row in values.iter_mut() {
                row[i] = None;
            }
        }
    }
    let si = SiMatrix { names, values };

    let variable_names = d.variable_names();
    let class_name = d.class_meta().map(|m| m.name.as_str());
    let mut pairs = Vec::new();
    let mut complete = true;
    let mut wanted: Vec<(&str, &str)> = Vec::new();
    for i in 0..variable_names.len() {
        for j in i + 1..variable_names.len() {
            wanted.push((&variable_names[i], &variable_names[j]));
        }
        if let Some(c) = class_name {
            wanted.push((&variable_names[i], c));
        }
    }
    for (a, b) in wanted {
        match si.get(a, b) {
            Some(v) => pairs.push(SiPair::new(a, b, v)),
            None => complete = false,
        }
    }
    let vid = if complete {
        Some(build_vid(
            &variable_names,
            class_name,
            &pairs,
            &options.thresholds,
        )?)
    } else {
        None
    };

    let ranking = match class_name {
        Some(_) => {
            let mut rank = options.rank;
            rank.max_size = rank.max_size.min(variable_names.len());
            Some(rank_subsets(d, &rank)?)
        }
        None => None,
    };

    Ok(Statistics {
        n_rows: d.n_rows(),
        m: options.m,
        binning: binned.into_iter().map(|(_, s)| s).collect(),
        si,
        vid,
        ranking,
    })
}

pub fn summarize(d: &Dataset) -> Result<DatasetSummary> {
    let class = match d.class_meta() {
        Some(meta) => {
            let p = d.partition_by_class()?;
            Some(ClassSummary {
                name: meta.name.clone(),
                labels: p.labels,
                counts: p.counts,
            })
        }
        None => None,
    };
    Ok(DatasetSummary {
        columns: d.metas().to_vec(),
        class,
        n_rows: d.n_rows(),
    })
}

pub fn build_bundle(d: &Dataset, options: &AnalysisOptions) -> Result<AnalysisBundle> {
    let statistics = analyze(d, options)?;
    let names = d.variable_names();
    let columns: Vec<&[f64]> = names
        .iter()
        .map(|n| d.column(n).expect("own variable"))
        .collect();
    let class = d.class_codes().ok();
    let rows = (0..d.n_rows())
        .map(|r| RowRecord {
            index: r,
            values: columns.iter().map(|c| c[r]).collect(),
            class: class.as_ref().map(|c| c[r]),
        })
        .collect();
    Ok(AnalysisBundle {
        toolkit_version: TOOLKIT_VERSION.to_string(),
        options: *options,
        dataset: summarize(d)?,
        statistics,
        rows,
    })
}

impl AnalysisBundle {
    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&bytes)
    }

    /// Rebuilds the dataset from the row payload.
    pub fn to_dataset(&self) -> Result<Dataset> {
        let metas = self.dataset.columns.clone();
        let class_index = self
            .dataset
            .class
            .as_ref()
            .map(|c| {
                metas
                    .iter()
                    .position(|m| m.name == c.name)
                    .ok_or_else(|| Error::MissingClassColumn(c.name.clone()))
            })
            .transpose()?;
        let mut columns = vec![Vec::with_capacity(self.rows.len()); metas.len()];
        for row in &self.rows {
            let mut values = row.values.iter();
            for (j, col) in columns.iter_mut().enumerate() {
                let v = if Some(j) == class_index {
                    row.class.map(f64::from)
                } else {
                    values.next().copied()
                };
                col.push(v.ok_or_else(|| {
                    Error::Parse(format!("bundle row {} is incomplete", row.index))
                })?);
            }
        }
        Dataset::new(metas, columns, class_index)
    }
}
