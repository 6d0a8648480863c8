//! Geometry description files.
//!
//! JSON or TOML with these fields:
//!
//! ```toml
//! # a named surface ...
//! surface = "hirzebruch"   # "p2", "p1xp1", "hirzebruch", "total_space"
//! a = 2                    # hirzebruch parameter, or the degree of O(a) for total_space
//! degree = 1               # total_space only: degree of the pulled-back bundle
//! # ... or an explicit complete fan
//! rays = [[1, 0], [0, 1], [-1, -1]]
//! bundle = [1, 0, 0]       # one coefficient per ray; defaults to the trivial bundle
//! relative = 1             # optional ray index of the relative divisor
//! lift = [0, 1]            # optional character twisting the linearization
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toric::{line_bundle_total_space, EqLineBundle, ToricSurface, TOTAL_SPACE_ZERO_SECTION};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<[i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    pub surface: ToricSurface,
    pub bundle: EqLineBundle,
    pub relative: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Toml,
}

impl GeometrySpec {
    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Json => serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string())),
            Format::Toml => toml::from_str(text).map_err(|e| Error::Parse(e.to_string())),
        }
    }

    /// Named surface with a bundle given by ray coefficients.
    pub fn named(surface: &str) -> Self {
        GeometrySpec {
            surface: Some(surface.to_string()),
            ..Default::default()
        }
    }

    pub fn resolve(&self) -> Result<Geometry> {
        let (surface, default_bundle, default_rel) = match (&self.surface, &self.rays) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either `surface` or `rays`, not both".into())),
            (None, None) => return Err(Error::Parse("missing `surface` or `rays`".into())),
            (None, Some(rays)) => {
                self.reject_parameters(&["a", "degree"])?;
                (ToricSurface::complete(rays.clone())?, None, None)
            }
            (Some(name), None) => match name.to_ascii_lowercase().as_str() {
                "p2" | "projective_plane" => {
                    self.reject_parameters(&["a", "degree"])?;
                    (ToricSurface::projective_plane(), None, None)
                }
                "p1xp1" | "p1_x_p1" => {
                    self.reject_parameters(&["a", "degree"])?;
                    (ToricSurface::p1_x_p1(), None, None)
                }
                "hirzebruch" => {
                    self.reject_parameters(&["degree"])?;
                    let a = self.a.ok_or_else(|| Error::Parse("hirzebruch needs `a`".into()))?;
                    if a < 0 {
                        return Err(Error::Parse(format!("hirzebruch parameter {a} < 0")));
                    }
                    (ToricSurface::hirzebruch(a), None, None)
                }
                "total_space" => {
                    let a = self.a.ok_or_else(|| Error::Parse("total_space needs `a`".into()))?;
                    let (s, m) = line_bundle_total_space(a, self.degree.unwrap_or(0));
                    if self.bundle.is_some() {
                        return Err(Error::Parse("total_space takes `degree`, not `bundle`".into()));
                    }
                    (s, Some(m), Some(TOTAL_SPACE_ZERO_SECTION))
                }
                other => return Err(Error::Parse(format!("unknown surface {other:?}"))),
            },
        };
        let nrays = surface.rays().len();
        let mut bundle = match (&self.bundle, default_bundle) {
            (Some(c), _) => EqLineBundle::new(c.clone()),
            (None, Some(m)) => m,
            (None, None) => EqLineBundle::trivial(nrays),
        };
        if bundle.ray_coeffs.len() != nrays {
            return Err(Error::Parse(format!(
                "bundle has {} coefficients for {nrays} rays",
                bundle.ray_coeffs.len()
            )));
        }
        if let Some(l) = self.lift {
            bundle = bundle.with_lift(l);
        }
        let relative = self.relative.or(default_rel);
        if let Some(r) = relative {
            surface.self_intersection(r)?;
        }
        Ok(Geometry {
            surface,
            bundle,
            relative,
        })
    }

    fn reject_parameters(&self, names: &[&str]) -> Result<()> {
        for &n in names {
            let present = match n {
                "a" => self.a.is_some(),
                "degree" => self.degree.is_some(),
                _ => false,
            };
            if present {
                return Err(Error::Parse(format!("`{n}` does not apply to this surface")));
            }
        }
        Ok(())
    }
}

/// Reads a geometry file; `.toml` files are TOML, everything else JSON.
pub fn load(path: &Path) -> Result<Geometry> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => Format::Toml,
        _ => Format::Json,
    };
    GeometrySpec::parse(&text, format)?.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_fan_json() {
        let g = GeometrySpec::parse(r#"{"rays": [[1,0],[0,1],[-1,-1]], "bundle": [1,0,0], "relative": 1}"#, Format::Json)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(g.surface, ToricSurface::projective_plane());
        assert_eq!(g.bundle, EqLineBundle::new(vec![1, 0, 0]));
        assert_eq!(g.relative, Some(1));
    }

    #[test]
    fn named_toml() {
        let g = GeometrySpec::parse("surface = \"hirzebruch\"\na = 2\nbundle = [0, 0, 0, 1]\n", Format::Toml)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(g.surface, ToricSurface::hirzebruch(2));
        let g = GeometrySpec::parse("surface = \"total_space\"\na = -1\ndegree = 2\nlift = [0, 1]\n", Format::Toml)
            .unwrap()
            .resolve()
            .unwrap();
        let (s, m) = line_bundle_total_space(-1, 2);
        assert_eq!(g.surface, s);
        assert_eq!(g.bundle, m.with_lift([0, 1]));
        assert_eq!(g.relative, Some(TOTAL_SPACE_ZERO_SECTION));
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"surface": "p2", "rays": [[1,0],[0,1],[-1,-1]]}"#,
            r#"{}"#,
            r#"{"surface": "hirzebruch"}"#,
            r#"{"surface": "p2", "bundle": [1]}"#,
            r#"{"surface": "p2", "a": 1}"#,
            r#"{"surface": "cubic"}"#,
            r#"{"surface": "p2", "colour": 1}"#,
            r#"{"rays": [[1,0],[1,1],[0,1]]}"#,
        ];
        for text in bad {
            let r = GeometrySpec::parse(text, Format::Json).and_then(|s| s.resolve());
            assert!(r.is_err(), "{text}");
        }
    }

    #[test]
    fn round_trip() {
        let spec = GeometrySpec {
            surface: Some("total_space".into()),
            a: Some(2),
            degree: Some(1),
            ..Default::default()
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(GeometrySpec::parse(&json, Format::Json).unwrap(), spec);
        let text = toml::to_string(&spec).unwrap();
        assert_eq!(GeometrySpec::parse(&text, Format::Toml).unwrap(), spec);
    }
}
