//! Rectangular count tables with provenance, plus their CSV and JSON encodings.
//!
//! JSON layout:
//!
//! ```json
//! {"family":"n1","convention":"thm19","route":"solver","cmax":1,"dmax":3,
//!  "values":[["1","1","4","22"],["0","0","4","48"]]}
//! ```
//!
//! `values[c][d]` is a decimal string so that arbitrarily large counts survive
//! any JSON parser. CSV has a header `c\d,0,1,...,dmax` followed by one row per
//! codimension, the first field being `c`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::series::{BiSeries, Count};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// configurations
    N1,
    /// partial configurations
    N2,
    /// widespread partial configurations
    N3,
    /// simple configurations
    N4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Solver,
    Algorithm1,
    ClosedForm,
    Oracle,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Solver => "solver",
            Route::Algorithm1 => "algorithm1",
            Route::ClosedForm => "closed-form",
            Route::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub family: Family,
    pub convention: Option<String>,
    pub route: Route,
    pub cmax: usize,
    pub dmax: usize,
    #[serde(serialize_with = "ser_grid", deserialize_with = "de_grid")]
    pub values: Vec<Vec<Count>>,
}

impl CountTable {
    pub fn from_series(
        series: &BiSeries,
        family: Family,
        convention: Option<String>,
        route: Route,
        cmax: usize,
        dmax: usize,
    ) -> Self {
        let values = (0..=cmax)
            .map(|c| (0..=dmax).map(|d| series.get(c, d)).collect())
            .collect();
        CountTable {
            family,
            convention,
            route,
            cmax,
            dmax,
            values,
        }
    }

    pub fn from_fn(
        family: Family,
        convention: Option<String>,
        route: Route,
        cmax: usize,
        dmax: usize,
        mut f: impl FnMut(usize, usize) -> Count,
    ) -> Self {
        let values = (0..=cmax)
            .map(|c| (0..=dmax).map(|d| f(c, d)).collect())
            .collect();
        CountTable {
            family,
            convention,
            route,
            cmax,
            dmax,
            values,
        }
    }

    pub fn get(&self, c: usize, d: usize) -> &Count {
        &self.values[c][d]
    }

    /// Cells where the two tables disagree on their common sub-box.
    pub fn disagreements(&self, other: &CountTable) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in 0..=self.cmax.min(other.cmax) {
            for d in 0..=self.dmax.min(other.dmax) {
                if self.values[c][d] != other.values[c][d] {
                    out.push((c, d));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("c\\d");
        for d in 0..=self.dmax {
            s.push_str(&format!(",{d}"));
        }
        s.push('\n');
        for (c, row) in self.values.iter().enumerate() {
            s.push_str(&c.to_string());
            for v in row {
                s.push(',');
                s.push_str(&v.to_string());
            }
            s.push('\n');
        }
        s
    }

    /// Parses the value grid of a CSV table; provenance must be supplied by the caller.
    pub fn from_csv(
        text: &str,
        family: Family,
        convention: Option<String>,
        route: Route,
    ) -> Result<Self, TableError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| TableError::Csv("empty input".into()))?;
        let mut cols = header.split(',');
        if cols.next() != Some("c\\d") {
            return Err(TableError::Csv("header must start with `c\\d`".into()));
        }
        let dcount = cols.count();
        if dcount == 0 {
            return Err(TableError::Csv("no degree columns".into()));
        }
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut fields = line.split(',');
            let c: usize = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| TableError::Csv(format!("bad row label on line {}", i + 2)))?;
            if c != i {
                return Err(TableError::Csv(format!("expected row {i}, found {c}")));
            }
            let row = fields
                .map(|f| BigInt::from_str(f.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| TableError::Csv(e.to_string()))?;
            if row.len() != dcount {
                return Err(TableError::Csv(format!("row {c} has {} cells", row.len())));
            }
            values.push(row);
        }
        if values.is_empty() {
            return Err(TableError::Csv("no rows".into()));
        }
        Ok(CountTable {
            family,
            convention,
            route,
            cmax: values.len() - 1,
            dmax: dcount - 1,
            values,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn ser_grid<S: Serializer>(grid: &[Vec<Count>], s: S) -> Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = grid
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect();
    strings.serialize(s)
}

fn de_grid<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Count>>, D::Error> {
    let strings: Vec<Vec<String>> = Vec::deserialize(d)?;
    strings
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| BigInt::from_str(&v).map_err(serde::de::Error::custom))
                .collect()
        })
        .collect()
}

/// Serde helper writing a single count as a decimal string.
pub mod count_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Count, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Count, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CountTable {
        CountTable::from_fn(
            Family::N1,
            Some("thm19".into()),
            Route::Solver,
            1,
            3,
            |c, d| [[1, 1, 4, 22], [0, 0, 4, 48]][c][d].into(),
        )
    }

    #[test]
    fn csv_layout() {
        assert_eq!(sample().to_csv(), "c\\d,0,1,2,3\n0,1,1,4,22\n1,0,0,4,48\n");
    }

    #[test]
    fn csv_and_json_round_trip() {
        let t = sample();
        let back =
            CountTable::from_csv(&t.to_csv(), t.family, t.convention.clone(), t.route).unwrap();
        assert_eq!(back, t);
        assert_eq!(CountTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn json_values_are_strings() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["values"][1][3], "48");
        assert_eq!(v["route"], "solver");
        assert_eq!(v["family"], "n1");
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        let bad = "c\\d,0,1\n0,1\n";
        assert!(CountTable::from_csv(bad, Family::N1, None, Route::Solver).is_err());
    }
}
