//! JSON descriptions of bodies.
//!
//! ```json
//! {"type": "polar", "of": {"type": "vpolytope", "vertices": [[1, 1], [1, -1]]}}
//! ```
//!
//! Variants: `ball {radius, dim?}`, `ellipsoid {semiaxes}`,
//! `vpolytope {vertices}` (symmetrized on load), `polar {of}`,
//! `intersect {parts}`, `scale {factor, of}`, `minkowski {parts}`.

use std::path::Path;

use entropy_core::{Body, BodyKind, Vector};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::formats;

/// Dimension of a ball when nothing in the description fixes one.
pub const DEFAULT_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", try_from = "RawSpec")]
pub enum BodySpec {
    Ball {
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Ellipsoid {
        semiaxes: Vec<f64>,
    },
    Vpolytope {
        vertices: Vec<Vec<f64>>,
    },
    Polar {
        of: Box<BodySpec>,
    },
    Intersect {
        parts: Vec<BodySpec>,
    },
    Scale {
        factor: f64,
        of: Box<BodySpec>,
    },
    Minkowski {
        parts: Vec<BodySpec>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Ball,
    Ellipsoid,
    Vpolytope,
    Polar,
    Intersect,
    Scale,
    Minkowski,
}

/// Every field of every variant. Internally tagged enums buffer their input
/// and lose error positions, so the tag is read as an ordinary field.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "type")]
    kind: Kind,
    radius: Option<f64>,
    dim: Option<usize>,
    semiaxes: Option<Vec<f64>>,
    vertices: Option<Vec<Vec<f64>>>,
    factor: Option<f64>,
    of: Option<Box<BodySpec>>,
    parts: Option<Vec<BodySpec>>,
}

impl TryFrom<RawSpec> for BodySpec {
    type Error = String;

    fn try_from(r: RawSpec) -> Result<Self, String> {
        let name = format!("{:?}", r.kind).to_lowercase();
        let allowed: &[&str] = match r.kind {
            Kind::Ball => &["radius", "dim"],
            Kind::Ellipsoid => &["semiaxes"],
            Kind::Vpolytope => &["vertices"],
            Kind::Polar => &["of"],
            Kind::Scale => &["factor", "of"],
            Kind::Intersect | Kind::Minkowski => &["parts"],
        };
        let present = [
            ("radius", r.radius.is_some()),
            ("dim", r.dim.is_some()),
            ("semiaxes", r.semiaxes.is_some()),
            ("vertices", r.vertices.is_some()),
            ("factor", r.factor.is_some()),
            ("of", r.of.is_some()),
            ("parts", r.parts.is_some()),
        ];
        if let Some((f, _)) = present
            .iter()
            .find(|(f, here)| *here && !allowed.contains(f))
        {
            return Err(format!("field `{f}` does not apply to type `{name}`"));
        }
        let need = |f: &str| format!("type `{name}` needs field `{f}`");
        Ok(match r.kind {
            Kind::Ball => BodySpec::Ball {
                radius: r.radius.ok_or_else(|| need("radius"))?,
                dim: r.dim,
            },
            Kind::Ellipsoid => BodySpec::Ellipsoid {
                semiaxes: r.semiaxes.ok_or_else(|| need("semiaxes"))?,
            },
            Kind::Vpolytope => BodySpec::Vpolytope {
                vertices: r.vertices.ok_or_else(|| need("vertices"))?,
            },
            Kind::Polar => BodySpec::Polar {
                of: r.of.ok_or_else(|| need("of"))?,
            },
            Kind::Scale => BodySpec::Scale {
                factor: r.factor.ok_or_else(|| need("factor"))?,
                of: r.of.ok_or_else(|| need("of"))?,
            },
            Kind::Intersect => BodySpec::Intersect {
                parts: r.parts.ok_or_else(|| need("parts"))?,
            },
            Kind::Minkowski => BodySpec::Minkowski {
                parts: r.parts.ok_or_else(|| need("parts"))?,
            },
        })
    }
}

impl BodySpec {
    /// Builds the body; errors name the offending node, e.g. `of.parts[1]`.
    pub fn build(&self) -> Result<Body, (String, entropy_core::Error)> {
        self.build_at(String::new(), self.dim().unwrap_or(DEFAULT_DIM))
    }

    /// The dimension fixed by some node of the tree, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            BodySpec::Ball { dim, .. } => *dim,
            BodySpec::Ellipsoid { semiaxes } => Some(semiaxes.len()),
            BodySpec::Vpolytope { vertices } => vertices.first().map(Vec::len),
            BodySpec::Polar { of } | BodySpec::Scale { of, .. } => of.dim(),
            BodySpec::Intersect { parts } | BodySpec::Minkowski { parts } => {
                parts.iter().find_map(Self::dim)
            }
        }
    }

    fn build_at(&self, path: String, dim: usize) -> Result<Body, (String, entropy_core::Error)> {
        let here = |e| {
            (
                if path.is_empty() {
                    ".".to_string()
                } else {
                    path.clone()
                },
                e,
            )
        };
        let child = |suffix: &str| {
            if path.is_empty() {
                suffix.to_string()
            } else {
                format!("{path}.{suffix}")
            }
        };
        match self {
            BodySpec::Ball { dim: d, radius } => {
                Body::ball(d.unwrap_or(dim), *radius).map_err(here)
            }
            BodySpec::Ellipsoid { semiaxes } => Body::ellipsoid(semiaxes).map_err(here),
            BodySpec::Vpolytope { vertices } => {
                let vs = vertices
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        Vector::new(v.clone())
                            .map_err(|e| (format!("{}[{i}]", child("vertices")), e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Body::vpolytope(&vs).map_err(here)
            }
            BodySpec::Polar { of } => Ok(Body::polar(of.build_at(child("of"), dim)?)),
            BodySpec::Scale { factor, of } => {
                Body::scale(*factor, of.build_at(child("of"), dim)?).map_err(here)
            }
            BodySpec::Intersect { parts } => {
                Body::intersect(build_parts(parts, &child("parts"), dim)?).map_err(here)
            }
            BodySpec::Minkowski { parts } => {
                Body::minkowski(build_parts(parts, &child("parts"), dim)?).map_err(here)
            }
        }
    }

    pub fn from_body(body: &Body) -> Self {
        match body.kind() {
            BodyKind::Ball { radius } => BodySpec::Ball {
                radius: *radius,
                dim: Some(body.dim()),
            },
            BodyKind::Ellipsoid { semiaxes } => BodySpec::Ellipsoid {
                semiaxes: semiaxes.to_vec(),
            },
            BodyKind::VPolytope { .. } => BodySpec::Vpolytope {
                vertices: body
                    .vertices()
                    .unwrap_or_default()
                    .into_iter()
                    .map(Vec::from)
                    .collect(),
            },
            BodyKind::Polar(of) => BodySpec::Polar {
                of: Box::new(Self::from_body(of)),
            },
            BodyKind::Intersect(parts) => BodySpec::Intersect {
                parts: parts.iter().map(|p| Self::from_body(p)).collect(),
            },
            BodyKind::Scale { factor, of } => BodySpec::Scale {
                factor: *factor,
                of: Box::new(Self::from_body(of)),
            },
            BodyKind::Minkowski(parts) => BodySpec::Minkowski {
                parts: parts.iter().map(|p| Self::from_body(p)).collect(),
            },
        }
    }
}

fn build_parts(
    parts: &[BodySpec],
    path: &str,
    dim: usize,
) -> Result<Vec<Body>, (String, entropy_core::Error)> {
    parts
        .iter()
        .enumerate()
        .map(|(i, p)| p.build_at(format!("{path}[{i}]"), dim))
        .collect()
}

pub fn parse_body(file: &Path, text: &str) -> Result<(BodySpec, Body)> {
    let spec: BodySpec = formats::parse_json(file, text)?;
    let body = spec.build().map_err(|(path, source)| LabError::Body {
        file: file.into(),
        path,
        source,
    })?;
    Ok((spec, body))
}

pub fn load_body(path: &Path) -> Result<(BodySpec, Body)> {
    parse_body(path, &formats::read(path)?)
}

pub fn to_json(body: &Body) -> String {
    serde_json::to_string_pretty(&BodySpec::from_body(body)).expect("body specs always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_error_path() {
        let text = r#"{"type": "minkowski", "parts": [{"type": "ball", "dim": 2, "radius": 1},
            {"type": "scale", "factor": 2, "of": {"type": "ball", "dim": 2, "radius": -1}}]}"#;
        match parse_body(Path::new("b.json"), text).unwrap_err() {
            LabError::Body { path, .. } => assert_eq!(path, "parts[1].of"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn ball_dimension_is_inferred() {
        let text = r#"{"type": "intersect", "parts": [{"type": "ball", "radius": 1}, {"type": "ellipsoid", "semiaxes": [2, 1, 1]}]}"#;
        assert_eq!(parse_body(Path::new("b.json"), text).unwrap().1.dim(), 3);
        let (_, ball) =
            parse_body(Path::new("b.json"), r#"{"type": "ball", "radius": 1}"#).unwrap();
        assert_eq!(ball.dim(), DEFAULT_DIM);
    }

    #[test]
    fn misplaced_fields_are_rejected() {
        for text in [
            r#"{"type": "ball", "semiaxes": [1]}"#,
            r#"{"type": "scale", "of": {"type": "ball", "radius": 1}}"#,
        ] {
            assert!(
                matches!(
                    parse_body(Path::new("b.json"), text),
                    Err(LabError::Parse { .. })
                ),
                "{text}"
            );
        }
    }

    #[test]
    fn nested_type_error_keeps_position() {
        let text =
            "{\"type\": \"polar\",\n \"of\": {\"type\": \"ellipsoid\", \"semiaxes\": [1, true]}}";
        match parse_body(Path::new("b.json"), text).unwrap_err() {
            LabError::Parse { path, line, .. } => {
                assert_eq!(path, "of.semiaxes[1]");
                assert_eq!(line, 2);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_variant_is_a_parse_error() {
        let err = parse_body(Path::new("b.json"), r#"{"type": "cube", "side": 1}"#).unwrap_err();
        assert!(matches!(err, LabError::Parse { line: 1, .. }), "{err}");
    }
}
