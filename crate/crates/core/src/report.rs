//! Verification reports with counterexample witnesses.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::exact::Valuation;

/// Witnesses kept per report; the `failures` field always counts all of them.
pub const WITNESS_CAP: usize = 64;

/// A rational serialized as two decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatValue {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RatValue {
    fn from(q: &BigRational) -> Self {
        RatValue {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl RatValue {
    pub fn to_rational(&self) -> Option<BigRational> {
        let num = self.num.parse().ok()?;
        let den: num_bigint::BigInt = self.den.parse().ok()?;
        if num_traits::Zero::is_zero(&den) {
            return None;
        }
        Some(BigRational::new(num, den))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub params: Map<String, Value>,
    pub value: RatValue,
    pub required_valuation: Valuation,
    pub actual_valuation: Valuation,
    /// Canonical sort key (the integer parameters in a fixed order).
    #[serde(skip)]
    pub key: Vec<i64>,
}

impl Witness {
    pub fn new(
        params: Map<String, Value>,
        value: &BigRational,
        required: Valuation,
        actual: Valuation,
        key: Vec<i64>,
    ) -> Self {
        Witness {
            params,
            value: value.into(),
            required_valuation: required,
            actual_valuation: actual,
            key,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub cases: u64,
    pub pass: bool,
    pub failures: u64,
    pub witnesses: Vec<Witness>,
}

impl CongruenceReport {
    /// Builds a report from every failing case found; witnesses are sorted
    /// by their key so the output does not depend on evaluation order.
    pub fn from_failures(
        check: impl Into<String>,
        params: Map<String, Value>,
        cases: u64,
        mut failures: Vec<Witness>,
    ) -> Self {
        failures.sort_by(|a, b| a.key.cmp(&b.key));
        let count = failures.len() as u64;
        failures.truncate(WITNESS_CAP);
        CongruenceReport {
            check: check.into(),
            params,
            cases,
            pass: count == 0,
            failures: count,
            witnesses: failures,
        }
    }

    /// Concatenates sub-reports under one name. Witnesses get a `stage`
    /// parameter naming the sub-check they came from.
    pub fn merge(
        check: impl Into<String>,
        params: Map<String, Value>,
        parts: Vec<CongruenceReport>,
    ) -> Self {
        let mut cases = 0;
        let mut failures = 0;
        let mut witnesses = Vec::new();
        for (idx, part) in parts.into_iter().enumerate() {
            cases += part.cases;
            failures += part.failures;
            for mut w in part.witnesses {
                w.params
                    .insert("stage".into(), Value::String(part.check.clone()));
                w.key.insert(0, idx as i64);
                witnesses.push(w);
            }
        }
        witnesses.sort_by(|a, b| a.key.cmp(&b.key));
        witnesses.truncate(WITNESS_CAP);
        CongruenceReport {
            check: check.into(),
            params,
            cases,
            pass: failures == 0,
            failures,
            witnesses,
        }
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

/// `json!`-style helper for building parameter maps.
#[macro_export]
macro_rules! params {
    ($($key:expr => $value:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut map = ::serde_json::Map::new();
        $( map.insert($key.to_string(), ::serde_json::json!($value)); )*
        map
    }};
}
