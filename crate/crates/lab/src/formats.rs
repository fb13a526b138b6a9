//! Parsing with error positions, shared by body, config and combiner files.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{LabError, Result};

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))
}

pub fn parse_json<T: DeserializeOwned>(file: &Path, text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        LabError::Parse {
            file: file.into(),
            path,
            line: inner.line(),
            column: inner.column(),
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| LabError::Parse {
        file: file.into(),
        path: ".".into(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    Ok(value)
}

pub fn parse_toml<T: DeserializeOwned>(file: &Path, text: &str) -> Result<T> {
    let at = |err: &toml::de::Error, path: String| {
        let (line, column) = err.span().map_or((0, 0), |s| line_column(text, s.start));
        LabError::Parse {
            file: file.into(),
            path,
            line,
            column,
            message: err.message().to_string(),
        }
    };
    let de = toml::de::Deserializer::parse(text).map_err(|e| at(&e, ".".into()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        at(e.inner(), path)
    })
}

/// JSON or TOML by extension; anything other than `.toml` is read as JSON.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("toml"))
    {
        parse_toml(path, &text)
    } else {
        parse_json(path, &text)
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, serde::Deserialize)]
    struct Pair {
        #[allow(dead_code)]
        a: u32,
        #[allow(dead_code)]
        b: Vec<f64>,
    }

    #[test]
    fn json_error_has_path_and_position() {
        let err =
            parse_json::<Pair>(Path::new("p.json"), "{\"a\": 1,\n \"b\": [1, \"x\"]}").unwrap_err();
        match err {
            LabError::Parse { path, line, .. } => {
                assert_eq!(path, "b[1]");
                assert_eq!(line, 2);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn toml_error_has_path_and_position() {
        let err = parse_toml::<Pair>(Path::new("p.toml"), "a = 1\nb = [1.0, \"x\"]\n").unwrap_err();
        match err {
            LabError::Parse { path, line, .. } => {
                assert_eq!(path, "b[1]");
                assert_eq!(line, 2);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(parse_json::<Pair>(Path::new("p.json"), "{\"a\": 1, \"b\": []} x").is_err());
    }
}
