//! JSON model files.
//!
//! ```json
//! {"type": "shift_bihaar"}
//! {"type": "matrix_state", "X": [["1","0"],["0","0"]], "Y": [["0","0"],["1","0"]]}
//! {"type": "table", "degree_bound": 4, "default_zero": true, "entries": {"X X*": "1"}}
//! ```
//!
//! Table keys use the tokens `X, X*, Y, Y*` separated by spaces; every token
//! is read as a letter of the pair being loaded.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use super::{Letter, Matrix, MatrixState, Model, ShiftBiHaar, TableModel, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum ModelSpec {
    ShiftBihaar {
        degree_bound: Option<usize>,
    },
    MatrixState {
        #[serde(rename = "X")]
        x: Vec<Vec<Scalar>>,
        #[serde(rename = "Y")]
        y: Vec<Vec<Scalar>>,
        degree_bound: Option<usize>,
    },
    Table {
        degree_bound: usize,
        #[serde(default)]
        default_zero: bool,
        entries: BTreeMap<String, Scalar>,
    },
}

/// Parses a model file's text, placing its letters in `pair`.
pub fn model_from_json(text: &str, pair: u32) -> Result<Model> {
    let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
    Ok(match spec {
        ModelSpec::ShiftBihaar { degree_bound } => {
            Arc::new(ShiftBiHaar::with_bound(pair, degree_bound.unwrap_or(ShiftBiHaar::DEFAULT_BOUND)))
        }
        ModelSpec::MatrixState { x, y, degree_bound } => {
            let m = MatrixState::new(pair, Matrix::from_rows(x)?, Matrix::from_rows(y)?)?;
            Arc::new(m.with_bound(degree_bound.unwrap_or(MatrixState::DEFAULT_BOUND)))
        }
        ModelSpec::Table { degree_bound, default_zero, entries } => {
            let mut table = HashMap::new();
            for (key, value) in entries {
                let word: Word = key.parse()?;
                let relabelled =
                    word.letters().iter().map(|l| Letter::new(pair, l.base, l.starred)).collect::<Vec<_>>();
                table.insert(Word::new(relabelled), value);
            }
            Arc::new(TableModel::new(pair, table, degree_bound, default_zero)?)
        }
    })
}

pub fn load_model(path: &Path, pair: u32) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    model_from_json(&text, pair)
}
