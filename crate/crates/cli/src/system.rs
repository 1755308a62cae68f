//! System files: a transition matrix with optional fiber weights and named
//! cylinder functions, in JSON.
//!
//! ```json
//! {
//!   "symbols": ["a", "b"],
//!   "matrix": [[1, 1], [1, 0]],
//!   "weights": {"00": "1/2", "10": "1/2", "01": "1"},
//!   "functions": {"f": {"depth": 1, "values": {"0": "1", "1": "sqrt(2)"}}}
//! }
//! ```
//!
//! Weight keys are edges `bc` (`b.c` with more than ten symbols). Function
//! tables must list every admissible word of their depth; the empty word is
//! written `""`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crossed_shift::cylfun::CylFun;
use crossed_shift::measure::{InvariantMeasure, TransferWeights};
use crossed_shift::scalar::{parse_rational, RadScalar};
use crossed_shift::sft::{admissible_words, TransitionMatrix, Word};

use crate::expr::RESERVED;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix: {0}")]
    Matrix(String),
    #[error("symbols: expected {expected} names, got {got}")]
    SymbolCount { expected: usize, got: usize },
    #[error("weights[{key}]: {msg}")]
    WeightEntry { key: String, msg: String },
    #[error("weights: {0}")]
    Weights(String),
    #[error("functions.{name}: {msg}")]
    Function { name: String, msg: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    #[serde(default)]
    symbols: Option<Vec<String>>,
    matrix: Vec<Vec<u8>>,
    #[serde(default)]
    weights: Option<BTreeMap<String, String>>,
    #[serde(default)]
    functions: BTreeMap<String, RawFunction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    depth: usize,
    values: BTreeMap<String, String>,
}

pub struct SystemFile {
    pub symbols: Vec<String>,
    pub matrix: Arc<TransitionMatrix>,
    pub weights: TransferWeights,
    pub measure: InvariantMeasure,
    pub functions: BTreeMap<String, CylFun>,
}

fn parse_word(text: &str) -> Option<Word> {
    if text.is_empty() {
        Some(Word::empty())
    } else {
        Word::parse_digits(text)
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, SystemError> {
        let raw: RawSystem = serde_json::from_str(text)?;
        let matrix = Arc::new(TransitionMatrix::new(&raw.matrix).map_err(|e| SystemError::Matrix(e.to_string()))?);
        let n = matrix.n_symbols();
        let symbols = match raw.symbols {
            Some(s) if s.len() != n => return Err(SystemError::SymbolCount { expected: n, got: s.len() }),
            Some(s) => s,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let weights = match raw.weights {
            None => TransferWeights::uniform(&matrix),
            Some(map) => {
                let mut w = BTreeMap::new();
                for (key, val) in map {
                    let edge = parse_word(&key).filter(|e| e.len() == 2).ok_or_else(|| SystemError::WeightEntry {
                        key: key.clone(),
                        msg: "expected an edge word of two symbols".into(),
                    })?;
                    let q = parse_rational(&val)
                        .map_err(|e| SystemError::WeightEntry { key: key.clone(), msg: e.to_string() })?;
                    let s = edge.symbols();
                    if (s[0] as usize) >= n || (s[1] as usize) >= n {
                        return Err(SystemError::WeightEntry { key, msg: "symbol out of range".into() });
                    }
                    w.insert((s[0], s[1]), q);
                }
                TransferWeights::new(&matrix, w).map_err(|e| SystemError::Weights(e.to_string()))?
            }
        };
        let measure = InvariantMeasure::solve(&weights);
        let mut functions = BTreeMap::new();
        for (name, f) in raw.functions {
            let ferr = |msg: String| SystemError::Function { name: name.clone(), msg };
            if !is_identifier(&name) || RESERVED.contains(&name.as_str()) || is_basis_name(&name) {
                return Err(ferr("name must be an identifier and not a reserved word".into()));
            }
            let mut table = BTreeMap::new();
            for (key, val) in f.values {
                let w = parse_word(&key).ok_or_else(|| ferr(format!("bad word `{key}`")))?;
                let v: RadScalar = val.parse().map_err(|e| ferr(format!("value at `{key}`: {e}")))?;
                table.insert(w, v);
            }
            let expected = admissible_words(&matrix, f.depth).len();
            if table.len() != expected {
                return Err(ferr(format!(
                    "table has {} entries but there are {expected} admissible words of length {}",
                    table.len(),
                    f.depth
                )));
            }
            let fun = CylFun::from_table(&matrix, f.depth, table).map_err(|e| ferr(e.to_string()))?;
            functions.insert(name, fun);
        }
        Ok(SystemFile { symbols, matrix, weights, measure, functions })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_basis_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('u') && s[1..].chars().all(|c| c.is_ascii_digit())
}
