use std::path::PathBuf;

/// Errors raised by every module of the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed table: {0}")]
    Parse(String),
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("class column `{0}` not found in header")]
    MissingClassColumn(String),
    #[error("dataset has no class column")]
    NoClassColumn,
    #[error("need at least {needed} rows, have {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("class column `{column}` has {found} distinct value(s), need at least 2")]
    SingleClass { column: String, found: usize },
    #[error("class `{class}` of column `{column}` has {count} row(s), need at least 2")]
    SmallClass {
        column: String,
        class: String,
        count: usize,
    },
    #[error("class column `{column}` has {found} classes; nominate a pair of classes")]
    TooManyClasses { column: String, found: usize },
    #[error("unknown class label `{0}`")]
    UnknownClass(String),
    #[error("column `{0}` has zero spread")]
    ConstantColumn(String),
    #[error("all values are identical, no positive nearest-neighbour distance exists")]
    NoPositiveSpacing,
    #[error("point {index} of `{cloud}` has no strictly positive neighbour distance")]
    DuplicatePoint { cloud: String, index: usize },
    #[error("variable `{0}` has zero entropy")]
    ZeroEntropy(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("subset `{subset}`: {source}")]
    Subset {
        subset: String,
        #[source]
        source: Box<Error>,
    },
    #[error("variable `{variable}`: {source}")]
    Variable {
        variable: String,
        #[source]
        source: Box<Error>,
    },
    #[error("exhaustive enumeration of {found} variables exceeds the cap of {cap}; use the greedy strategy")]
    EnumerationCap { found: usize, cap: usize },
    #[error("serialization failed: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_variable(self, name: &str) -> Self {
        Error::Variable {
            variable: name.to_string(),
            source: Box::new(self),
        }
    }

    pub(crate) fn in_subset(self, subset: &[String]) -> Self {
        Error::Subset {
            subset: subset.join("/"),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
