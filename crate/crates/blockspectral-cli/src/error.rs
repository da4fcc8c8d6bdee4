//! Exit discipline for the binary.
//!
//! Every failure carries one category, printed in brackets on the last
//! stderr line and mirrored in the exit code, so scripts can branch
//! without parsing prose.

use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Flags that contradict each other or ask for something undefined.
    Usage,
    /// An input file that does not match its declared format.
    Parse,
    /// Well-formed input the requested operation cannot accept.
    Data,
    /// Numerical work that gave up: eigensolver, generator, backend.
    Compute,
    /// The filesystem said no.
    Io,
}

impl Category {
    pub fn token(self) -> &'static str {
        match self {
            Category::Usage => "usage",
            Category::Parse => "parse",
            Category::Data => "data",
            Category::Compute => "compute",
            Category::Io => "io",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Category::Usage => 2,
            Category::Parse => 3,
            Category::Data => 4,
            Category::Compute => 5,
            Category::Io => 6,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { category: Category::Usage, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError { category: Category::Parse, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError { category: Category::Data, message: message.into() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError { category: Category::Io, message: format!("{}: {err}", path.display()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.category.token(), self.message)
    }
}

impl std::error::Error for CliError {}

/// Which category a library failure belongs to. Parameter problems come
/// from flags, so they read as usage; shape problems in an input graph
/// are data; anything numerical is compute.
pub fn categorize(err: &blockspectral::Error) -> Category {
    use blockspectral::Error::*;
    match err {
        InvalidParameter { .. } | KOutOfRange { .. } => Category::Usage,
        NodeOutOfRange { .. }
        | NonPositiveWeight { .. }
        | EmptyGraph
        | ZeroOutDegree { .. }
        | NotStronglyConnected { .. }
        | DenseCapExceeded { .. }
        | LabelLengthMismatch { .. }
        | LabelOutOfRange { .. }
        | NotASuperset { .. } => Category::Data,
        EigenvalueNotSimple { .. }
        | NoConvergence { .. }
        | PerronNoConvergence { .. }
        | SpectrumTooSmall { .. }
        | GeneratorExhausted { .. }
        | Backend(_) => Category::Compute,
    }
}

impl From<blockspectral::Error> for CliError {
    fn from(err: blockspectral::Error) -> Self {
        CliError { category: categorize(&err), message: err.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
