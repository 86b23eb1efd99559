//! Constellation files: a JSON document holding one or more lists of complex
//! vectors. Numbers are printed with 17 significant digits so that every
//! double survives a write/read cycle unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{MufError, Result};
use crate::linalg::{check_dim, ComplexVector, Tolerance, C64};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Frame,
    MufSystem,
    Fiducial,
    MubSet,
    Sic,
    /// A single unit vector with no claimed structure.
    State,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Frame => "frame",
            Kind::MufSystem => "muf_system",
            Kind::Fiducial => "fiducial",
            Kind::MubSet => "mub_set",
            Kind::Sic => "sic",
            Kind::State => "state",
        }
    }
}

impl FromStr for Kind {
    type Err = MufError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "frame" => Kind::Frame,
            "muf_system" => Kind::MufSystem,
            "fiducial" => Kind::Fiducial,
            "mub_set" => Kind::MubSet,
            "sic" => Kind::Sic,
            "state" => Kind::State,
            other => return Err(MufError::Parse(format!("unknown kind '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationFile {
    pub kind: Kind,
    pub dim: usize,
    pub tolerance: f64,
    pub frames: Vec<Vec<ComplexVector>>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: String,
    kind: String,
    dim: usize,
    #[serde(default)]
    tolerance: Option<f64>,
    frames: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl ConstellationFile {
    pub fn new(kind: Kind, dim: usize, tol: Tolerance, frames: Vec<Vec<ComplexVector>>) -> Self {
        Self {
            kind,
            dim,
            tolerance: tol.eps,
            frames,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.tolerance).unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"version\": \"{FORMAT_VERSION}\",");
        let _ = writeln!(s, "  \"kind\": \"{}\",", self.kind.as_str());
        let _ = writeln!(s, "  \"dim\": {},", self.dim);
        let _ = writeln!(s, "  \"tolerance\": {},", num(self.tolerance));
        s.push_str("  \"frames\": [");
        for (fi, frame) in self.frames.iter().enumerate() {
            s.push_str(if fi == 0 { "\n    [" } else { ",\n    [" });
            for (vi, v) in frame.iter().enumerate() {
                s.push_str(if vi == 0 { "\n      [" } else { ",\n      [" });
                let entries: Vec<String> = v
                    .entries()
                    .iter()
                    .map(|z| format!("[{}, {}]", num(z.re), num(z.im)))
                    .collect();
                s.push_str(&entries.join(", "));
                s.push(']');
            }
            s.push_str("\n    ]");
        }
        s.push_str(if self.frames.is_empty() { "],\n" } else { "\n  ],\n" });
        s.push_str("  \"metadata\": {");
        for (i, (k, v)) in self.metadata.iter().enumerate() {
            s.push_str(if i == 0 { "\n    " } else { ",\n    " });
            let key = serde_json::to_string(k).expect("string serializes");
            let value = serde_json::to_string(v).expect("string serializes");
            let _ = write!(s, "{key}: {value}");
        }
        s.push_str(if self.metadata.is_empty() { "}\n" } else { "\n  }\n" });
        s.push_str("}\n");
        s
    }

    /// Parses and checks the schema: version, kind, vector lengths. Unit
    /// norms are left to verification.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text)?;
        if raw.version != FORMAT_VERSION {
            return Err(MufError::Parse(format!("unsupported version '{}'", raw.version)));
        }
        let kind: Kind = raw.kind.parse()?;
        check_dim(raw.dim).map_err(|e| MufError::Parse(e.to_string()))?;
        let tolerance = raw.tolerance.unwrap_or(Tolerance::default().eps);
        Tolerance::new(tolerance).map_err(|e| MufError::Parse(e.to_string()))?;
        if raw.frames.is_empty() {
            return Err(MufError::Parse("no frames".into()));
        }
        let mut frames = Vec::with_capacity(raw.frames.len());
        for (fi, frame) in raw.frames.into_iter().enumerate() {
            if frame.is_empty() {
                return Err(MufError::Parse(format!("frame {fi} is empty")));
            }
            let mut vs = Vec::with_capacity(frame.len());
            for (vi, v) in frame.into_iter().enumerate() {
                if v.len() != raw.dim {
                    return Err(MufError::Parse(format!(
                        "frame {fi} vector {vi} has length {}, expected {}",
                        v.len(),
                        raw.dim
                    )));
                }
                if v.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(MufError::Parse(format!("frame {fi} vector {vi} has a non-finite entry")));
                }
                vs.push(ComplexVector::new(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())?);
            }
            frames.push(vs);
        }
        Ok(Self {
            kind,
            dim: raw.dim,
            tolerance,
            frames,
            metadata: raw.metadata,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| MufError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| MufError::Io(format!("{}: {e}", path.display())))
    }

    /// The single vector of a `fiducial` or `state` file.
    pub fn single_vector(&self) -> Result<&ComplexVector> {
        match self.frames.as_slice() {
            [f] if f.len() == 1 => Ok(&f[0]),
            _ => Err(MufError::Parse(format!(
                "a {} file must hold exactly one vector",
                self.kind.as_str()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ConstellationFile {
        let v = ComplexVector::new(vec![C64::new(0.1, -1.0 / 3.0), C64::new(std::f64::consts::PI, 1e-300)]).unwrap();
        ConstellationFile::new(Kind::Frame, 2, Tolerance::default(), vec![vec![v.clone(), v]])
            .with_meta("note", "quote \" and newline\n")
    }

    #[test]
    fn round_trip_is_exact() {
        let f = sample();
        let back = ConstellationFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        for (a, b) in back.frames[0][0].entries().iter().zip(f.frames[0][0].entries()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn schema_errors() {
        let good = sample().to_json();
        assert!(ConstellationFile::from_json(&good.replace("\"version\": \"1\"", "\"version\": \"2\"")).is_err());
        assert!(ConstellationFile::from_json(&good.replace("\"frame\"", "\"blob\"")).is_err());
        assert!(ConstellationFile::from_json(&good.replace("\"dim\": 2", "\"dim\": 3")).is_err());
        assert!(ConstellationFile::from_json("{").is_err());
    }

    #[test]
    fn empty_metadata_is_valid_json() {
        let mut f = sample();
        f.metadata.clear();
        let text = f.to_json();
        assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok());
        assert_eq!(ConstellationFile::from_json(&text).unwrap(), f);
    }
}
