use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Failure;
use fanotope::fixtures;

/// Where an input document comes from.
#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Fixture(&'static str),
}

/// Provenance of one input, as recorded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub role: String,
    pub source: String,
    pub sha256: String,
}

/// Resolves a fixture name. `alias` is the bundled file that the short name
/// "paper" stands for in the calling command.
pub fn fixture(name: &str, alias: &'static str) -> Result<Source, Failure> {
    if name == "paper" {
        return Ok(Source::Fixture(alias));
    }
    fixtures::NAMES
        .iter()
        .find(|n| **n == name)
        .map(|n| Source::Fixture(n))
        .ok_or_else(|| {
            Failure::invalid(anyhow!(
                "unknown fixture {name:?}; known: paper, {}",
                fixtures::NAMES.join(", ")
            ))
        })
}

pub fn pick(
    file: Option<PathBuf>,
    fixture_name: Option<&str>,
    alias: &'static str,
    what: &str,
) -> Result<Source, Failure> {
    match (file, fixture_name) {
        (Some(p), _) => Ok(Source::File(p)),
        (None, Some(n)) => fixture(n, alias),
        (None, None) => Err(Failure::invalid(anyhow!("no {what} given; use --in FILE or --fixture NAME"))),
    }
}

/// Reads and parses a JSON document, recording its hash.
pub fn load<T: DeserializeOwned>(source: &Source, role: &str) -> Result<(T, InputRecord), Failure> {
    let (text, label) = match source {
        Source::File(p) => (
            fs::read_to_string(p)
                .with_context(|| format!("cannot read {}", p.display()))
                .map_err(Failure::invalid)?,
            p.display().to_string(),
        ),
        Source::Fixture(n) => (
            fixtures::raw(n).expect("fixture names are checked").to_string(),
            format!("fixture:{n}"),
        ),
    };
    let value = serde_json::from_str(&text)
        .with_context(|| format!("invalid {role} JSON in {label}"))
        .map_err(Failure::invalid)?;
    let record = InputRecord {
        role: role.to_string(),
        source: label,
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
    };
    Ok((value, record))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_names() {
        assert!(matches!(fixture("paper", "paper-f").unwrap(), Source::Fixture("paper-f")));
        assert!(matches!(fixture("paper-P", "paper-f").unwrap(), Source::Fixture("paper-P")));
        assert_eq!(fixture("P", "paper-f").unwrap_err().code, crate::EXIT_INVALID);
    }

    #[test]
    fn fixture_hash_is_sha256_of_bytes() {
        let (_, rec): (serde_json::Value, _) = load(&Source::Fixture("paper-P"), "polygon").unwrap();
        assert_eq!(rec.sha256, hex::encode(Sha256::digest(fixtures::HEXAGON_P.as_bytes())));
        assert_eq!(rec.sha256.len(), 64);
    }

    #[test]
    fn file_beats_fixture() {
        let s = pick(Some("a.json".into()), Some("paper"), "paper-P", "polygon").unwrap();
        assert!(matches!(s, Source::File(_)));
        assert_eq!(pick(None, None, "paper-P", "polygon").unwrap_err().code, crate::EXIT_INVALID);
    }
}
