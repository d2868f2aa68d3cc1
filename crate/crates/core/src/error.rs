use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the pipeline can report. Each variant maps to a stable
/// machine-readable code (see [`Error::code`]) that the CLI and the HTTP
/// service surface verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("E_BAD_JSON: {0}")]
    BadJson(String),
    #[error("E_GEOM_TYPE: feature {index} has unsupported geometry type {kind}")]
    GeomType { index: usize, kind: String },
    #[error("E_MISSING_PROP: feature {index} is missing property \"{prop}\"")]
    MissingProp { index: usize, prop: String },
    #[error("E_BAD_HEADER: expected header `{expected}`, found `{found}`")]
    BadHeader { expected: String, found: String },
    #[error("E_BAD_ROW: line {line}: {message}")]
    BadRow { line: u64, message: String },
    #[error("E_DUP_KEY: line {line}: duplicate key {key}")]
    DupKey { line: u64, key: String },
    #[error("E_DUP_KEY: fips {fips} appears in features {first} and {second}")]
    DupFeature { fips: String, first: usize, second: usize },
    #[error("E_UNKNOWN_FIPS: {0} has no geometry")]
    UnknownFips(String),
    #[error("E_UNKNOWN_REGION: {code} ({kind}) is not in the region catalog")]
    UnknownRegion { code: String, kind: String },
    #[error("E_SELF_SECONDARY: county {fips} lists its primary RIGO {code} as secondary")]
    SelfSecondary { fips: String, code: String },
    #[error("E_NO_PRIMARY: county {0} has a secondary RIGO but no primary RIGO")]
    NoPrimary(String),
    #[error("E_EMPTY_REGION: region {code} ({kind}) has no member counties")]
    EmptyRegion { code: String, kind: String },
    #[error("E_POLE: latitude {0} is at or beyond a pole")]
    Pole(f64),
    #[error("E_EMPTY: county {0} has no rings left after quantization")]
    Empty(String),
    #[error("E_NONPLANAR: edge {a:?}-{b:?} is incident to {count} faces")]
    NonPlanar { a: [i64; 2], b: [i64; 2], count: usize },
    #[error("E_OPEN_RING: boundary stitching stalled at {0:?}")]
    OpenRing([i64; 2]),
    #[error("E_UNKNOWN_STATE: {0}")]
    UnknownState(String),
    #[error("E_EMPTY_VIEW: state {0} has no counties")]
    EmptyView(String),
    #[error("E_BAD_ATLAS: {0}")]
    BadAtlas(String),
    #[error("E_BAD_STYLE: {0}")]
    BadStyle(String),
    #[error("{}", ErrorList(.0))]
    Multiple(Vec<Error>),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::BadJson(_) => "E_BAD_JSON",
            Error::GeomType { .. } => "E_GEOM_TYPE",
            Error::MissingProp { .. } => "E_MISSING_PROP",
            Error::BadHeader { .. } => "E_BAD_HEADER",
            Error::BadRow { .. } => "E_BAD_ROW",
            Error::DupKey { .. } => "E_DUP_KEY",
            Error::DupFeature { .. } => "E_DUP_KEY",
            Error::UnknownFips(_) => "E_UNKNOWN_FIPS",
            Error::UnknownRegion { .. } => "E_UNKNOWN_REGION",
            Error::SelfSecondary { .. } => "E_SELF_SECONDARY",
            Error::NoPrimary(_) => "E_NO_PRIMARY",
            Error::EmptyRegion { .. } => "E_EMPTY_REGION",
            Error::Pole(_) => "E_POLE",
            Error::Empty(_) => "E_EMPTY",
            Error::NonPlanar { .. } => "E_NONPLANAR",
            Error::OpenRing(_) => "E_OPEN_RING",
            Error::UnknownState(_) => "E_UNKNOWN_STATE",
            Error::EmptyView(_) => "E_EMPTY_VIEW",
            Error::BadAtlas(_) => "E_BAD_ATLAS",
            Error::BadStyle(_) => "E_BAD_STYLE",
            Error::Multiple(_) => "E_MULTIPLE",
        }
    }

    /// Flattens `Multiple` into its leaves; any other error yields itself.
    pub fn leaves(&self) -> Vec<&Error> {
        match self {
            Error::Multiple(all) => all.iter().flat_map(Error::leaves).collect(),
            other => vec![other],
        }
    }

    pub(crate) fn collect(mut errors: Vec<Error>) -> Option<Error> {
        match errors.len() {
            0 => None,
            1 => errors.pop(),
            _ => Some(Error::Multiple(errors)),
        }
    }
}

struct ErrorList<'a>(&'a [Error]);

impl fmt::Display for ErrorList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}
