//! Tabular data: loading, validation, column access and class partitioning.
//!
//! A [`Dataset`] is an immutable N x P table of numbers plus an optional class
//! column. Categorical columns hold dense integer codes assigned in order of
//! first appearance; the original tokens are kept as `levels`.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableKind {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableMeta {
    pub name: String,
    pub kind: VariableKind,
    /// Column ordinal in the source table.
    pub index: usize,
    /// Category tokens indexed by code. Empty for continuous variables.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<String>,
}

impl VariableMeta {
    pub fn continuous(name: impl Into<String>, index: usize) -> Self {
        Self {
            name: name.into(),
            kind: VariableKind::Continuous,
            index,
            levels: Vec::new(),
        }
    }

    pub fn categorical(name: impl Into<String>, index: usize, levels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            kind: VariableKind::Categorical,
            index,
            levels,
        }
    }

    /// Token for a categorical code, or the formatted number for continuous data.
    pub fn label(&self, value: f64) -> String {
        match self.kind {
            VariableKind::Categorical => self
                .levels
                .get(value as usize)
                .cloned()
                .unwrap_or_else(|| value.to_string()),
            VariableKind::Continuous => value.to_string(),
        }
    }
}

/// Immutable table of `n_rows` complete observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    metas: Vec<VariableMeta>,
    columns: Vec<Vec<f64>>,
    class_index: Option<usize>,
    n_rows: usize,
}

/// Result of [`load_table`]: the dataset and the number of rows discarded
/// because they held empty or unparseable cells.
#[derive(Debug, Clone)]
pub struct LoadedTable {
    pub dataset: Dataset,
    pub dropped_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPartition {
    /// Distinct class codes present, ascending.
    pub class_codes: Vec<u32>,
    pub labels: Vec<String>,
    pub per_class_rows: Vec<Vec<usize>>,
    pub counts: Vec<usize>,
}

impl ClassPartition {
    pub fn rows_for(&self, code: u32) -> Option<&[usize]> {
        self.class_codes
            .iter()
            .position(|&c| c == code)
            .map(|i| self.per_class_rows[i].as_slice())
    }
}

impl Dataset {
    /// Builds a dataset from column-major data, validating every invariant.
    pub fn new(
        metas: Vec<VariableMeta>,
        columns: Vec<Vec<f64>>,
        class_index: Option<usize>,
    ) -> Result<Self> {
        if metas.len() != columns.len() {
            return Err(Error::LengthMismatch(metas.len(), columns.len()));
        }
        let mut seen = HashSet::new();
        for meta in &metas {
            if !seen.insert(meta.name.as_str()) {
                return Err(Error::DuplicateColumn(meta.name.clone()));
            }
        }
        let n_rows = columns.first().map_or(0, Vec::len);
        for col in &columns {
            if col.len() != n_rows {
                return Err(Error::LengthMismatch(n_rows, col.len()));
            }
        }
        if n_rows < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: n_rows,
            });
        }
        for (meta, col) in metas.iter().zip(&columns) {
            if let Some(bad) = col.iter().find(|v| !v.is_finite()) {
                return Err(Error::Parse(format!(
                    "column `{}` holds non-finite value {bad}",
                    meta.name
                )));
            }
            if meta.kind == VariableKind::Categorical {
                let levels = meta.levels.len().max(1);
                if col
                    .iter()
                    .any(|&v| v < 0.0 || v.fract() != 0.0 || v as usize >= levels)
                {
                    return Err(Error::Parse(format!(
                        "categorical column `{}` holds a value outside its code range",
                        meta.name
                    )));
                }
            }
        }
        if let Some(ci) = class_index {
            let meta = metas
                .get(ci)
                .ok_or_else(|| Error::MissingClassColumn(format!("#{ci}")))?;
            if meta.kind != VariableKind::Categorical {
                return Err(Error::InvalidParameter(format!(
                    "class column `{}` must be categorical",
                    meta.name
                )));
            }
            let distinct: HashSet<u64> = columns[ci].iter().map(|v| v.to_bits()).collect();
            if distinct.len() < 2 {
                return Err(Error::SingleClass {
                    column: meta.name.clone(),
                    found: distinct.len(),
                });
            }
        }
        Ok(Self {
            metas,
            columns,
            class_index,
            n_rows,
        })
    }

    /// Parses comma-separated text with a header row.
    ///
    /// `class_column` is always treated as categorical, as is any name in
    /// `categorical` and any column in which no cell parses as a number.
    pub fn from_csv_reader<R: Read>(
        reader: R,
        class_column: Option<&str>,
        categorical: &[&str],
    ) -> Result<LoadedTable> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::Parse("missing header row".into()));
        }
        let mut seen = HashSet::new();
        for name in &header {
            if name.is_empty() {
                return Err(Error::Parse("empty column name in header".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let class_index = match class_column {
            Some(name) => Some(
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::MissingClassColumn(name.to_string()))?,
            ),
            None => None,
        };
        for name in categorical {
            if !header.iter().any(|h| h == name) {
                return Err(Error::UnknownVariable(name.to_string()));
            }
        }

        let width = header.len();
        let mut raw: Vec<Vec<String>> = Vec::new();
        let mut dropped = 0usize;
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.len() == 1 && record.get(0) == Some("") {
                continue;
            }
            if record.len() != width || record.iter().any(str::is_empty) {
                dropped += 1;
                continue;
            }
            raw.push(record.iter().map(str::to_string).collect());
        }

        let parse = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
        let kinds: Vec<VariableKind> = (0..width)
            .map(|j| {
                let declared = Some(j) == class_index || categorical.contains(&header[j].as_str());
                if declared || raw.iter().all(|row| parse(&row[j]).is_none()) {
                    VariableKind::Categorical
                } else {
                    VariableKind::Continuous
                }
            })
            .collect();

        // Numeric columns drop rows with unparseable cells.
        let kept: Vec<&Vec<String>> = raw
            .iter()
            .filter(|row| {
                (0..width)
                    .all(|j| kinds[j] == VariableKind::Categorical || parse(&row[j]).is_some())
            })
            .collect();
        dropped += raw.len() - kept.len();

        let mut metas = Vec::with_capacity(width);
        let mut columns = Vec::with_capacity(width);
        for j in 0..width {
            match kinds[j] {
                VariableKind::Continuous => {
                    columns.push(kept.iter().map(|row| parse(&row[j]).unwrap()).collect());
                    metas.push(VariableMeta::continuous(header[j].clone(), j));
                }
                VariableKind::Categorical => {
                    let mut levels: Vec<String> = Vec::new();
                    let mut lookup: HashMap<&str, usize> = HashMap::new();
                    let codes = kept
                        .iter()
                        .map(|row| {
                            let token = row[j].as_str();
                            let next = lookup.len();
                            let code = *lookup.entry(token).or_insert_with(|| {
                                levels.push(token.to_string());
                                next
                            });
                            code as f64
                        })
                        .collect();
                    columns.push(codes);
                    metas.push(VariableMeta::categorical(header[j].clone(), j, levels));
                }
            }
        }
        let dataset = Dataset::new(metas, columns, class_index)?;
        Ok(LoadedTable {
            dataset,
            dropped_rows: dropped,
        })
    }

    /// Writes the table back out as comma-separated text. Categorical cells
    /// are written as their original tokens; numbers use the shortest
    /// representation that round-trips exactly.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let names: Vec<&str> = self.metas.iter().map(|m| m.name.as_str()).collect();
        writeln!(out, "{}", names.join(","))?;
        for row in 0..self.n_rows {
            let cells: Vec<String> = self
                .metas
                .iter()
                .zip(&self.columns)
                .map(|(meta, col)| meta.label(col[row]))
                .collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// All columns, class included, in source order.
    pub fn metas(&self) -> &[VariableMeta] {
        &self.metas
    }

    /// Analysis variables: every column except the class column.
    pub fn variables(&self) -> impl Iterator<Item = &VariableMeta> + '_ {
        self.metas
            .iter()
            .enumerate()
            .filter(move |(i, _)| Some(*i) != self.class_index)
            .map(|(_, m)| m)
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.variables().map(|m| m.name.clone()).collect()
    }

    pub fn n_variables(&self) -> usize {
        self.metas.len() - usize::from(self.class_index.is_some())
    }

    pub fn class_meta(&self) -> Option<&VariableMeta> {
        self.class_index.map(|i| &self.metas[i])
    }

    pub fn meta(&self, name: &str) -> Result<&VariableMeta> {
        self.metas
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// The N values of a column, row order preserved. Works for the class
    /// column too, returning its codes.
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        let idx = self
            .metas
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(&self.columns[idx])
    }

    pub fn class_codes(&self) -> Result<Vec<u32>> {
        let ci = self.class_index.ok_or(Error::NoClassColumn)?;
        Ok(self.columns[ci].iter().map(|&v| v as u32).collect())
    }

    pub fn partition_by_class(&self) -> Result<ClassPartition> {
        let meta = self.class_meta().ok_or(Error::NoClassColumn)?;
        let codes = self.class_codes()?;
        let mut present: Vec<u32> = codes.clone();
        present.sort_unstable();
        present.dedup();
        if present.len() < 2 {
            return Err(Error::SingleClass {
                column: meta.name.clone(),
                found: present.len(),
            });
        }
        let mut per_class_rows = vec![Vec::new(); present.len()];
        for (row, code) in codes.iter().enumerate() {
            let slot = present.binary_search(code).expect("code collected above");
            per_class_rows[slot].push(row);
        }
        let labels: Vec<String> = present.iter().map(|&c| meta.label(f64::from(c))).collect();
        for (label, rows) in labels.iter().zip(&per_class_rows) {
            if rows.len() < 2 {
                return Err(Error::SmallClass {
                    column: meta.name.clone(),
                    class: label.clone(),
                    count: rows.len(),
                });
            }
        }
        let counts = per_class_rows.iter().map(Vec::len).collect();
        Ok(ClassPartition {
            class_codes: present,
            labels,
            per_class_rows,
            counts,
        })
    }

    /// Materializes the given rows (in the given order) as a new dataset.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.n_rows) {
            return Err(Error::InvalidParameter(format!(
                "row index {bad} out of range for {} rows",
                self.n_rows
            )));
        }
        let columns = self
            .columns
            .iter()
            .map(|col| rows.iter().map(|&r| col[r]).collect())
            .collect();
        Dataset::new(self.metas.clone(), columns, self.class_index)
    }

    /// Keeps only rows whose class label is one of `labels`.
    pub fn restrict_to_classes(&self, labels: &[&str]) -> Result<Dataset> {
        let meta = self.class_meta().ok_or(Error::NoClassColumn)?;
        let mut wanted = Vec::new();
        for label in labels {
            let code = meta
                .levels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::UnknownClass(label.to_string()))?;
            wanted.push(code as u32);
        }
        let rows: Vec<usize> = self
            .class_codes()?
            .iter()
            .enumerate()
            .filter(|(_, c)| wanted.contains(c))
            .map(|(r, _)| r)
            .collect();
        self.subset_rows(&rows)
    }
}

pub fn load_table(
    path: impl AsRef<Path>,
    class_column: Option<&str>,
    categorical: &[&str],
) -> Result<LoadedTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Dataset::from_csv_reader(std::io::BufReader::new(file), class_column, categorical)
}

/// Per-column affine map `z = (x - shift) / scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardization {
    pub fn invert(&self, standardized: &[Vec<f64>]) -> Vec<Vec<f64>> {
        standardized
            .iter()
            .zip(self.shift.iter().zip(&self.scale))
            .map(|(col, (&shift, &scale))| col.iter().map(|z| z * scale + shift).collect())
            .collect()
    }
}

/// Z-scores each column using the sample (N - 1) standard deviation.
///
/// Columns are given column-major. A column with zero spread is an error.
pub fn standardize(columns: &[&[f64]]) -> Result<(Vec<Vec<f64>>, Standardization)> {
    if columns.is_empty() {
        return Err(Error::InvalidParameter(
            "standardize needs at least one column".into(),
        ));
    }
    let mut out = Vec::with_capacity(columns.len());
    let mut shift = Vec::with_capacity(columns.len());
    let mut scale = Vec::with_capacity(columns.len());
    for (j, col) in columns.iter().enumerate() {
        if col.len() < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: col.len(),
            });
        }
        let (mean, sd) = mean_sd(col);
        if sd.is_nan() || sd <= 0.0 {
            return Err(Error::ConstantColumn(format!("column {j}")));
        }
        out.push(col.iter().map(|x| (x - mean) / sd).collect());
        shift.push(mean);
        scale.push(sd);
    }
    Ok((out, Standardization { shift, scale }))
}

/// Mean and sample standard deviation.
pub(crate) fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}
