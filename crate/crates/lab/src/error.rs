use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    /// Malformed JSON or TOML, with the field path and position of the fault.
    #[error("{}: {message}{}", file.display(), position(path, *line, *column))]
    Parse {
        file: PathBuf,
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    /// A well-formed body description that does not describe a valid body.
    #[error("{file}: invalid body at `{path}`: {source}")]
    Body {
        file: PathBuf,
        path: String,
        #[source]
        source: entropy_core::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] entropy_core::Error),
}

fn position(path: &str, line: usize, column: usize) -> String {
    match (path, line) {
        (".", 0) => String::new(),
        (_, 0) => format!(" (at `{path}`)"),
        _ => format!(" (at `{path}`, line {line}, column {column})"),
    }
}

impl LabError {
    /// `2` for failed certifications, `1` for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Core(entropy_core::Error::CertificationFailure(_)) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let cert = LabError::from(entropy_core::Error::CertificationFailure(
            "pair 3, 7".into(),
        ));
        assert_eq!(cert.exit_code(), 2);
        assert_eq!(
            LabError::from(entropy_core::Error::EmptyInput("grid")).exit_code(),
            1
        );
        assert_eq!(LabError::Input("x".into()).exit_code(), 1);
    }
}
