//! Local codimension conventions for a meeting point on the base line.
//!
//! A convention maps `k >= 1`, the number of even lines touching the base line
//! at its first meeting point, to the exponent of `x` carried by that point.
//! Every convention is stored as an explicit prefix followed by an affine tail,
//! which lets the solver sum the whole `k`-series in closed form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("unknown convention `{0}` (expected `thm19` or `remark`)")]
    Unknown(String),
    #[error("weights must be >= 1")]
    NonPositive,
    #[error("weights must be nondecreasing in k")]
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodimWeight {
    name: String,
    prefix: Vec<u32>,
    tail_first: u32,
    tail_slope: u32,
}

impl CodimWeight {
    /// `weight(k) = 2k - 1`.
    pub fn thm19() -> Self {
        CodimWeight {
            name: "thm19".into(),
            prefix: Vec::new(),
            tail_first: 1,
            tail_slope: 2,
        }
    }

    /// `weight(k) = c(k + 1)` with `c(j) = j - [j = 2]`, i.e. 1, 3, 4, 5, ...
    pub fn remark() -> Self {
        CodimWeight {
            name: "remark".into(),
            prefix: vec![1],
            tail_first: 3,
            tail_slope: 1,
        }
    }

    pub fn builtins() -> Vec<CodimWeight> {
        vec![Self::thm19(), Self::remark()]
    }

    /// A user-supplied convention: explicit weights for `k = 1..=prefix.len()`,
    /// then `tail_first + tail_slope * (k - prefix.len() - 1)`.
    pub fn custom(
        name: impl Into<String>,
        prefix: Vec<u32>,
        tail_first: u32,
        tail_slope: u32,
    ) -> Result<Self, WeightError> {
        if prefix.contains(&0) || tail_first == 0 {
            return Err(WeightError::NonPositive);
        }
        let mut seq = prefix.clone();
        seq.push(tail_first);
        if seq.windows(2).any(|w| w[1] < w[0]) {
            return Err(WeightError::Decreasing);
        }
        Ok(CodimWeight {
            name: name.into(),
            prefix,
            tail_first,
            tail_slope,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Local codimension for a `k`-fold meeting point, `k >= 1`.
    pub fn weight(&self, k: usize) -> usize {
        assert!(k >= 1, "meeting points involve at least one even line");
        if k <= self.prefix.len() {
            self.prefix[k - 1] as usize
        } else {
            self.tail_first as usize + self.tail_slope as usize * (k - self.prefix.len() - 1)
        }
    }

    pub(crate) fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub(crate) fn tail_slope(&self) -> usize {
        self.tail_slope as usize
    }
}

impl fmt::Display for CodimWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for CodimWeight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thm19" => Ok(Self::thm19()),
            "remark" => Ok(Self::remark()),
            other => Err(WeightError::Unknown(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sequences() {
        let t: Vec<_> = (1..=5).map(|k| CodimWeight::thm19().weight(k)).collect();
        assert_eq!(t, [1, 3, 5, 7, 9]);
        let r: Vec<_> = (1..=5).map(|k| CodimWeight::remark().weight(k)).collect();
        assert_eq!(r, [1, 3, 4, 5, 6]);
    }

    #[test]
    fn remark_matches_shifted_c() {
        // c(j) = j - [j == 2]
        let c = |j: usize| j - usize::from(j == 2);
        let w = CodimWeight::remark();
        for k in 1..20 {
            assert_eq!(w.weight(k), c(k + 1));
        }
    }

    #[test]
    fn custom_validation() {
        assert_eq!(
            CodimWeight::custom("bad", vec![0], 1, 1),
            Err(WeightError::NonPositive)
        );
        assert_eq!(
            CodimWeight::custom("bad", vec![3], 2, 1),
            Err(WeightError::Decreasing)
        );
        let w = CodimWeight::custom("flat-tail", vec![1, 2], 2, 0).unwrap();
        assert_eq!(w.weight(10), 2);
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "thm19".parse::<CodimWeight>().unwrap(),
            CodimWeight::thm19()
        );
        assert!("def2".parse::<CodimWeight>().is_err());
    }
}
