//! Interchangeable equality deciders for crossed-product elements.

use std::sync::Arc;

use thiserror::Error;

use crate::crossed::{try_equals, CrossedElement};
use crate::gns::Gns;
use crate::groupoid::{normalize_equals, PhiIso};
use crate::measure::{InvariantMeasure, TransferWeights};
use crate::sft::TransitionMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle `{name}` unavailable: {reason}")]
    Unavailable { name: &'static str, reason: String },
    #[error("{0}")]
    Failed(String),
}

pub trait EqualityOracle: Send + Sync {
    fn name(&self) -> &'static str;
    fn equal(&self, x: &CrossedElement, y: &CrossedElement) -> Result<bool, OracleError>;
}

/// Canonical normal form.
pub struct NormalFormOracle;

impl EqualityOracle for NormalFormOracle {
    fn name(&self) -> &'static str {
        "normal-form"
    }

    fn equal(&self, x: &CrossedElement, y: &CrossedElement) -> Result<bool, OracleError> {
        try_equals(x, y).map_err(|e| OracleError::Failed(e.to_string()))
    }
}

/// Matrix elements of the faithful twisted GNS representation.
pub struct GnsOracle {
    inner: Result<Gns, String>,
}

impl GnsOracle {
    pub fn new(mu: &InvariantMeasure) -> Self {
        let inner = if !mu.weights().is_uniform() {
            Err("the measure's fiber weights are not uniform".to_string())
        } else {
            Gns::new(mu).map_err(|e| e.to_string())
        };
        GnsOracle { inner }
    }
}

impl EqualityOracle for GnsOracle {
    fn name(&self) -> &'static str {
        "gns"
    }

    fn equal(&self, x: &CrossedElement, y: &CrossedElement) -> Result<bool, OracleError> {
        let gns = self.inner.as_ref().map_err(|r| OracleError::Unavailable { name: "gns", reason: r.clone() })?;
        gns.equality_oracle(x, y).map_err(|e| OracleError::Failed(e.to_string()))
    }
}

/// Image in the groupoid model, constant column sums only.
pub struct GroupoidOracle {
    iso: Result<PhiIso, String>,
}

impl GroupoidOracle {
    pub fn new(a: &Arc<TransitionMatrix>) -> Self {
        GroupoidOracle { iso: PhiIso::new(a).map_err(|e| e.to_string()) }
    }
}

impl EqualityOracle for GroupoidOracle {
    fn name(&self) -> &'static str {
        "groupoid"
    }

    fn equal(&self, x: &CrossedElement, y: &CrossedElement) -> Result<bool, OracleError> {
        let iso = self.iso.as_ref().map_err(|r| OracleError::Unavailable { name: "groupoid", reason: r.clone() })?;
        let px = iso.apply(x).map_err(|e| OracleError::Failed(e.to_string()))?;
        let py = iso.apply(y).map_err(|e| OracleError::Failed(e.to_string()))?;
        Ok(normalize_equals(&px, &py))
    }
}

pub struct OracleRegistry {
    oracles: Vec<Box<dyn EqualityOracle>>,
}

impl OracleRegistry {
    pub fn empty() -> Self {
        OracleRegistry { oracles: Vec::new() }
    }

    /// All three oracles for the system; inapplicable ones report why when
    /// queried.
    pub fn standard(a: &Arc<TransitionMatrix>, mu: Option<&InvariantMeasure>) -> Self {
        let uniform;
        let mu = match mu {
            Some(m) => m,
            None => {
                uniform = InvariantMeasure::solve(&TransferWeights::uniform(a));
                &uniform
            }
        };
        let mut r = Self::empty();
        r.register(Box::new(NormalFormOracle));
        r.register(Box::new(GnsOracle::new(mu)));
        r.register(Box::new(GroupoidOracle::new(a)));
        r
    }

    pub fn register(&mut self, oracle: Box<dyn EqualityOracle>) {
        assert!(self.get(oracle.name()).is_none(), "oracle {} registered twice", oracle.name());
        self.oracles.push(oracle);
    }

    pub fn get(&self, name: &str) -> Option<&dyn EqualityOracle> {
        self.oracles.iter().find(|o| o.name() == name).map(|o| o.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.oracles.iter().map(|o| o.name()).collect()
    }
}
