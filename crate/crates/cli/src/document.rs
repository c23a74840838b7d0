//! The `.json` space document: `{name, labels, dist, mass}` with a full matrix.

use std::fs;
use std::path::{Path, PathBuf};

use mmdist::{MMSpace, MetricSpace};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub name: String,
    #[serde(default)]
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    pub mass: Vec<f64>,
}

impl Document {
    pub fn from_space(name: impl Into<String>, x: &MMSpace) -> Self {
        let labels = match x.space().labels() {
            Some(l) => l.to_vec(),
            None => (0..x.len()).map(|i| i.to_string()).collect(),
        };
        Document { name: name.into(), labels, dist: x.space().rows(), mass: x.mass().to_vec() }
    }

    /// Validates the document into a space; all core invariants are enforced.
    pub fn to_space(&self) -> mmdist::Result<MMSpace> {
        let mut space = MetricSpace::new(self.dist.clone())?;
        if !self.labels.is_empty() {
            space = space.with_labels(self.labels.clone())?;
        }
        MMSpace::new(space, self.mass.clone())
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Canonical text: pretty-printed with shortest round-trip decimals and a final newline.
    pub fn print(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

/// Reads and validates a document file.
pub fn load(path: &Path) -> Result<(Document, MMSpace), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let doc = Document::parse(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })?;
    let space = doc.to_space().map_err(|source| CliError::Invalid { path: path.to_path_buf(), source })?;
    Ok((doc, space))
}

/// All `.json` documents of a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<(PathBuf, Document, MMSpace)>, CliError> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let mut paths = Vec::new();
    for e in entries {
        let p = e.map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?.path();
        if p.extension().is_some_and(|x| x == "json") {
            paths.push(p);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let (d, s) = load(&p)?;
            Ok((p, d, s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mmdist::generate::{random_space, rng};

    #[test]
    fn round_trip_is_bit_exact() {
        for seed in 0..20 {
            let x = random_space(5, &mut rng(seed)).unwrap();
            let doc = Document::from_space("r", &x);
            let text = doc.print();
            let back = Document::parse(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.print(), text);
            let y = back.to_space().unwrap();
            assert!(y.mass().iter().zip(x.mass()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let doc = Document::parse(r#"{"name": "bad", "dist": [[0, 1], [2, 0]], "mass": [0.5, 0.5]}"#).unwrap();
        let msg = doc.to_space().unwrap_err().to_string();
        assert!(msg.contains("d[0][1]"), "{msg}");
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Document::parse(r#"{"name": "x", "dist": [[0]], "mass": [1], "extra": 1}"#).is_err());
    }
}
