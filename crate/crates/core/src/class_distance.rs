//! Class Distance Indicator: a nearest-neighbour estimate of the
//! Kullback–Leibler divergence between two classes over any subset of
//! variables, plus the CDR combination, the false-alarm bound and subset
//! ranking.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{standardize, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::KdTree;

/// Exhaustive ranking refuses datasets with more variables than this.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Points of one class in a shared (standardized) coordinate frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<f64>,
    dim: usize,
    pub subset: Vec<String>,
    pub class_code: u32,
}

impl PointCloud {
    /// `points` is row-major with `subset.len()` coordinates per point.
    pub fn new(points: Vec<f64>, subset: Vec<String>, class_code: u32) -> Result<Self> {
        let dim = subset.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("empty variable subset".into()));
        }
        if !points.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(points.len(), dim));
        }
        if points.len() / dim < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: points.len() / dim,
            });
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        Ok(Self {
            points,
            dim,
            subset,
            class_code,
        })
    }

    /// Gathers `rows` from column-major `columns`.
    pub fn from_columns(
        columns: &[&[f64]],
        rows: &[usize],
        subset: Vec<String>,
        class_code: u32,
    ) -> Result<Self> {
        let mut points = Vec::with_capacity(rows.len() * columns.len());
        for &r in rows {
            points.extend(columns.iter().map(|c| c[r]));
        }
        Self::new(points, subset, class_code)
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    fn label(&self) -> String {
        format!("{}[class {}]", self.subset.join("/"), self.class_code)
    }
}

/// `CDI(1,2) = (k/n1) sum log2(cross_i / within_i) + log2(n2 / (n1 - 1))`,
/// where `within_i` is the distance from point i of `c1` to its nearest
/// other point in `c1` and `cross_i` its distance to the nearest point of
/// `c2`. Only strictly positive distances count.
pub fn cdi(c1: &PointCloud, c2: &PointCloud) -> Result<f64> {
    if c1.dim != c2.dim {
        return Err(Error::DimensionMismatch(c1.dim, c2.dim));
    }
    if c1.subset != c2.subset {
        return Err(Error::InvalidParameter(format!(
            "clouds cover different subsets: {} vs {}",
            c1.subset.join("/"),
            c2.subset.join("/")
        )));
    }
    let within = KdTree::new(&c1.points, c1.dim);
    let cross = KdTree::new(&c2.points, c2.dim);
    let n1 = c1.len();
    let mut terms = (0..n1)
        .into_par_iter()
        .map(|i| {
            let p = c1.point(i);
            let duplicate = |cloud: &PointCloud| Error::DuplicatePoint {
                cloud: cloud.label(),
                index: i,
            };
            let (_, w2) = within.nearest_positive(p).ok_or_else(|| duplicate(c1))?;
            let (_, x2) = cross.nearest_positive(p).ok_or_else(|| duplicate(c1))?;
            Ok(0.5 * (x2 / w2).log2())
        })
        .collect::<Result<Vec<f64>>>()?;
    // Fixed summation order makes the result independent of point order.
    terms.sort_unstable_by(f64::total_cmp);
    let sum: f64 = terms.iter().sum();
    let n2 = c2.len() as f64;
    Ok(c1.dim as f64 / n1 as f64 * sum + (n2 / (n1 as f64 - 1.0)).log2())
}

/// Parallel combination `1/CDR = 1/d12 + 1/d21`; zero when either input is
/// not positive.
pub fn cdr(d12: f64, d21: f64) -> f64 {
    if !(d12 > 0.0 && d21 > 0.0) {
        return 0.0;
    }
    let (lo, hi) = if d12 <= d21 { (d12, d21) } else { (d21, d12) };
    lo / (1.0 + lo / hi)
}

/// Stein-lemma floor on the false-alarm probability, `2^-cdi`.
pub fn false_alarm_bound(cdi: f64) -> Result<f64> {
    if cdi.is_nan() || cdi < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "false-alarm bound needs a non-negative distance, got {cdi}"
        )));
    }
    Ok((-cdi).exp2())
}

/// Information ceiling `p * log2(n) / m` of `p` variates calibrated at `m`.
pub fn max_information(n: usize, m: f64, p: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: n,
        });
    }
    if !(m.is_finite() && m > 1.0) {
        return Err(Error::InvalidParameter(format!("M must exceed 1, got {m}")));
    }
    if p == 0 {
        return Err(Error::InvalidParameter("need at least one variate".into()));
    }
    Ok(p as f64 * (n as f64).log2() / m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdiResult {
    pub subset: Vec<String>,
    pub cdi_12: f64,
    pub cdi_21: f64,
    pub cdr: f64,
    pub n1: usize,
    pub n2: usize,
}

impl CdiResult {
    pub fn name(&self) -> String {
        self.subset.join("/")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Greedy,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "greedy" => Ok(Self::Greedy),
            other => Err(Error::InvalidParameter(format!(
                "unknown strategy `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetRanking {
    /// Descending CDR; ties by subset names.
    pub entries: Vec<CdiResult>,
    pub strategy: Strategy,
    pub max_size: usize,
    /// Labels of class 1 and class 2 in `cdi_12`.
    pub class_labels: [String; 2],
}

impl SubsetRanking {
    pub fn singletons(&self) -> impl Iterator<Item = &CdiResult> {
        self.entries.iter().filter(|e| e.subset.len() == 1)
    }

    pub fn of_size(&self, size: usize) -> impl Iterator<Item = &CdiResult> {
        self.entries.iter().filter(move |e| e.subset.len() == size)
    }
}

fn ranking_order(a: &CdiResult, b: &CdiResult) -> Ordering {
    b.cdr
        .total_cmp(&a.cdr)
        .then_with(|| a.subset.cmp(&b.subset))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOptions {
    pub max_size: usize,
    pub strategy: Strategy,
    pub enumeration_cap: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            max_size: 3,
            strategy: Strategy::Exhaustive,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn label_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

/// Two-class view of a dataset with every variable z-scored over the pooled
/// rows of both classes.
#[derive(Debug, Clone)]
pub struct ClassPair {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    codes: [u32; 2],
    labels: [String; 2],
    rows: [Vec<usize>; 2],
}

impl ClassPair {
    /// Class 1 is the class whose label sorts first (numerically when both
    /// labels are numbers).
    pub fn new(d: &Dataset) -> Result<Self> {
        let partition = d.partition_by_class()?;
        let class_name = d.class_meta().map(|m| m.name.clone()).unwrap_or_default();
        if partition.class_codes.len() != 2 {
            return Err(Error::TooManyClasses {
                column: class_name,
                found: partition.class_codes.len(),
            });
        }
        let (first, second) = if label_order(&partition.labels[0], &partition.labels[1]).is_le() {
            (0, 1)
        } else {
            (1, 0)
        };
        let names = d.variable_names();
        let mut columns = Vec::with_capacity(names.len());
        for name in &names {
            let (z, _) =
                standardize(&[d.column(name)?]).map_err(|_| Error::ConstantColumn(name.clone()))?;
            columns.push(z.into_iter().next().expect("one column in, one out"));
        }
        Ok(Self {
            names,
            columns,
            codes: [partition.class_codes[first], partition.class_codes[second]],
            labels: [
                partition.labels[first].clone(),
                partition.labels[second].clone(),
            ],
            rows: [
                partition.per_class_rows[first].clone(),
                partition.per_class_rows[second].clone(),
            ],
        })
    }

    pub fn labels(&self) -> &[String; 2] {
        &self.labels
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    pub fn counts(&self) -> [usize; 2] {
        [self.rows[0].len(), self.rows[1].len()]
    }

    /// Both point clouds for the variables at `indices`.
    pub fn clouds(&self, indices: &[usize]) -> Result<(PointCloud, PointCloud)> {
        let subset: Vec<String> = indices.iter().map(|&i| self.names[i].clone()).collect();
        let cols: Vec<&[f64]> = indices
            .iter()
            .map(|&i| self.columns[i].as_slice())
            .collect();
        let c1 = PointCloud::from_columns(&cols, &self.rows[0], subset.clone(), self.codes[0])?;
        let c2 = PointCloud::from_columns(&cols, &self.rows[1], subset, self.codes[1])?;
        Ok((c1, c2))
    }

    /// Both CDI directions and their CDR for the variables at `indices`.
    pub fn evaluate(&self, indices: &[usize]) -> Result<CdiResult> {
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        indices.dedup();
        let subset: Vec<String> = indices.iter().map(|&i| self.names[i].clone()).collect();
        let run = || -> Result<CdiResult> {
            let (c1, c2) = self.clouds(&indices)?;
            let d12 = cdi(&c1, &c2)?;
            let d21 = cdi(&c2, &c1)?;
            Ok(CdiResult {
                subset: subset.clone(),
                cdi_12: d12,
                cdi_21: d21,
                cdr: cdr(d12, d21),
                n1: c1.len(),
                n2: c2.len(),
            })
        };
        run().map_err(|e| e.in_subset(&subset))
    }

    pub fn evaluate_names(&self, names: &[&str]) -> Result<CdiResult> {
        let indices = names
            .iter()
            .map(|n| {
                self.names
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| Error::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.evaluate(&indices)
    }
}

fn combinations(p: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, p: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..p {
            if p - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, p, size, cur, out);
            cur.pop();
        }
    }
    rec(0, p, size, &mut current, &mut out);
    out
}

/// Ranks variable subsets by CDR.
pub fn rank_subsets(d: &Dataset, options: &RankOptions) -> Result<SubsetRanking> {
    let pair = ClassPair::new(d)?;
    rank_pair(&pair, options)
}

pub fn rank_pair(pair: &ClassPair, options: &RankOptions) -> Result<SubsetRanking> {
    let p = pair.names.len();
    if p == 0 {
        return Err(Error::InvalidParameter("dataset has no variables".into()));
    }
    if options.max_size == 0 || options.max_size > p {
        return Err(Error::InvalidParameter(format!(
            "max size must be within 1..={p}, got {}",
            options.max_size
        )));
    }
    let evaluate_all = |subsets: Vec<Vec<usize>>| -> Result<Vec<CdiResult>> {
        subsets.par_iter().map(|s| pair.evaluate(s)).collect()
    };
    let mut entries = match options.strategy {
        Strategy::Exhaustive => {
            if p > options.enumeration_cap {
                return Err(Error::EnumerationCap {
                    found: p,
                    cap: options.enumeration_cap,
                });
            }
            let subsets = (1..=options.max_size)
                .flat_map(|size| combinations(p, size))
                .collect();
            evaluate_all(subsets)?
        }
        Strategy::Greedy => {
            let mut all = evaluate_all((0..p).map(|i| vec![i]).collect())?;
            let mut current = best_indices(pair, &all);
            for _ in 1..options.max_size {
                let candidates: Vec<Vec<usize>> = (0..p)
                    .filter(|i| !current.contains(i))
                    .map(|i| {
                        let mut s = current.clone();
                        s.push(i);
                        s.sort_unstable();
                        s
                    })
                    .collect();
                if candidates.is_empty() {
                    break;
                }
                let step = evaluate_all(candidates)?;
                current = best_indices(pair, &step);
                all.extend(step);
            }
            all
        }
    };
    entries.sort_by(ranking_order);
    Ok(SubsetRanking {
        entries,
        strategy: options.strategy,
        max_size: options.max_size,
        class_labels: pair.labels.clone(),
    })
}

fn best_indices(pair: &ClassPair, results: &[CdiResult]) -> Vec<usize> {
    let best = results
        .iter()
        .min_by(|a, b| ranking_order(a, b))
        .expect("non-empty candidate list");
    best.subset
        .iter()
        .map(|n| pair.names.iter().position(|v| v == n).expect("known name"))
        .collect()
}
