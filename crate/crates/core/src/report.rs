//! Machine-readable check reports.
//!
//! Each check serializes as
//! `{"check": ..., "status": "pass"|"fail"|"finding", "mandatory": bool,
//!   "offending_cells": [{"c":..,"d":..,"value":"..."}], "details": {...}}`.
//! A `finding` is a nonzero residual or disagreement that is reported rather
//! than treated as a failure.

use serde::{Deserialize, Serialize};

use crate::series::{BiSeries, Count};
use crate::table::count_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffendingCell {
    pub c: usize,
    pub d: usize,
    #[serde(with = "count_string")]
    pub value: Count,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub mandatory: bool,
    pub offending_cells: Vec<OffendingCell>,
    pub details: serde_json::Value,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, mandatory: bool) -> Self {
        CheckReport {
            check: check.into(),
            status: Status::Pass,
            mandatory,
            offending_cells: Vec::new(),
            details: serde_json::Value::Object(Default::default()),
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        if let serde_json::Value::Object(map) = &mut self.details {
            map.insert(
                key.to_string(),
                serde_json::to_value(value).expect("detail serializes"),
            );
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Nonzero coefficients of a residual series, lowest degree first.
pub fn offending_cells(residual: &BiSeries) -> Vec<OffendingCell> {
    residual
        .nonzero_terms()
        .map(|(c, d, v)| OffendingCell {
            c,
            d,
            value: v.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_fields() {
        let mut r = CheckReport::new("demo", true).detail("n", 3);
        r.offending_cells.push(OffendingCell {
            c: 1,
            d: 2,
            value: Count::from(-7),
        });
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["check"], "demo");
        assert_eq!(v["status"], "pass");
        assert_eq!(v["offending_cells"][0]["value"], "-7");
        assert_eq!(v["details"]["n"], 3);
        let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn findings_do_not_fail() {
        assert!(CheckReport::new("x", true)
            .with_status(Status::Finding)
            .passed());
        assert!(!CheckReport::new("x", true)
            .with_status(Status::Fail)
            .passed());
    }
}
