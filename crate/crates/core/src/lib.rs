//! Information-theoretic exploratory analysis of tabular data.
//!
//! Continuous variables are histogrammed with a bin width calibrated to a
//! fixed information content, after which the toolkit computes
//!
//! * the Similarity Index (mutual information over the smaller marginal
//!   entropy) between variables and against the class,
//! * three-way interaction information,
//! * the Class Distance Indicator, a nearest-neighbour estimate of the
//!   Kullback–Leibler divergence between two classes over any variable subset,
//!   and the false-alarm floor it implies,
//! * a Variable Interaction Diagram and a ranked table of subsets.

pub mod analysis;
pub mod binning;
pub mod class_distance;
pub mod dataset;
pub mod diagram;
mod error;
pub mod info;
pub mod neighbors;
pub mod report;
pub mod synthetic;

pub use analysis::{analyze, build_bundle, AnalysisBundle, AnalysisOptions, Statistics};
pub use binning::{
    bin_width, build_histogram, cost_scan, differential_entropy, nn_spacings, shimazaki_cost,
    EntropyEstimate, Histogram1D,
};
pub use class_distance::{
    cdi, cdr, false_alarm_bound, max_information, rank_subsets, CdiResult, ClassPair, PointCloud,
    RankOptions, Strategy, SubsetRanking,
};
pub use dataset::{
    load_table, standardize, ClassPartition, Dataset, LoadedTable, VariableKind, VariableMeta,
};
pub use diagram::{build_vid, export_vid, Band, SiPair, VidFormat, VidGraph, VidThresholds};
pub use error::{Error, Result};
pub use info::{
    discrete_entropy, interaction_information, joint_entropy, mutual_information, similarity_index,
    BinnedVariable, ContingencyTable, MutualInformation,
};
pub use report::{generate_report, Report, ReportOptions};
