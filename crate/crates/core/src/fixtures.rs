//! Bundled example data: the hexagon, its scaffolding and mirror Laurent
//! polynomial, and reference values.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::lattice::{parse_rat, Rat};
use crate::param::ParamError;
use crate::periods::LaurentPolynomial;
use crate::polygon::PolygonJson;
use crate::scaffold::ScaffoldInput;

pub const HEXAGON_P: &str = include_str!("../fixtures/paper-P.json");
pub const HEXAGON_SCAFFOLDING: &str = include_str!("../fixtures/paper-scaffolding.json");
pub const HEXAGON_F: &str = include_str!("../fixtures/paper-f.json");
pub const HEXAGON_EXPECTED: &str = include_str!("../fixtures/paper-expected.json");

/// Fixture names accepted by [`raw`].
pub const NAMES: [&str; 4] = ["paper-P", "paper-scaffolding", "paper-f", "paper-expected"];

pub fn raw(name: &str) -> Option<&'static str> {
    match name {
        "paper-P" => Some(HEXAGON_P),
        "paper-scaffolding" => Some(HEXAGON_SCAFFOLDING),
        "paper-f" => Some(HEXAGON_F),
        "paper-expected" => Some(HEXAGON_EXPECTED),
        _ => None,
    }
}

pub fn hexagon_polygon() -> PolygonJson {
    serde_json::from_str(HEXAGON_P).expect("bundled polygon parses")
}

pub fn hexagon_scaffolding() -> ScaffoldInput {
    serde_json::from_str(HEXAGON_SCAFFOLDING).expect("bundled scaffolding parses")
}

/// A Laurent polynomial file with an optional parameter specialization.
#[derive(Debug, Clone, Deserialize)]
pub struct LaurentInput {
    #[serde(flatten)]
    pub f: LaurentPolynomial,
    /// Parameter values as rational strings.
    #[serde(default)]
    pub specialization: BTreeMap<String, String>,
}

impl LaurentInput {
    pub fn assignments(&self) -> Result<BTreeMap<String, Rat>, ParamError> {
        self.specialization
            .iter()
            .map(|(k, v)| {
                parse_rat(v)
                    .map(|r| (k.clone(), r))
                    .ok_or_else(|| ParamError::Parse {
                        pos: 0,
                        msg: format!("bad value {v:?} for {k}"),
                    })
            })
            .collect()
    }
}

pub fn hexagon_f() -> LaurentInput {
    serde_json::from_str(HEXAGON_F).expect("bundled Laurent polynomial parses")
}

pub fn hexagon_expected() -> serde_json::Value {
    serde_json::from_str(HEXAGON_EXPECTED).expect("bundled reference values parse")
}
