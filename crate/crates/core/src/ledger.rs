//! Which convention and which single-equation form each computed series obeys.
//!
//! The two codimension conventions give different series from `c = 4` on, and
//! the explicit polynomials circulate in more than one variant. The ledger
//! records, from fresh computation, which pairings actually hold.

use serde::{Deserialize, Serialize};

use crate::algorithm::{cross_validate, CrossValidationError};
use crate::closed_form::{
    estimate_ratio, ln_asymptotic_estimate, ln_asymptotic_estimate_4e_over_3, simple_count,
};
use crate::series::BiSeries;
use crate::solver::{solve_system, SolverError};
use crate::verify::{
    builtin_p, odd_weight_equation, residual_bivariate, tail_equation, ZPolynomial,
};
use crate::weight::CodimWeight;

pub const LEDGER_CROSS_VALIDATION_BOX: (usize, usize) = (10, 20);
pub const LEDGER_RESIDUAL_BOX: (usize, usize) = (12, 12);
pub const LEDGER_ASYMPTOTIC_DEGREE: u64 = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub equation: String,
    pub series: String,
    pub convention: String,
    pub vanishes: bool,
    pub nonzero_cells: usize,
    /// Lowest-order nonzero coefficient as `(c, d, value)`.
    pub first_offending: Option<(usize, usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisagreementEntry {
    pub convention: String,
    pub disagreeing_cells: usize,
    pub first_disagreement: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEntry {
    pub c: u64,
    pub d: u64,
    /// exact / estimate with codimension base `4/3`
    pub ratio_base_4_over_3: f64,
    /// exact / estimate with codimension base `4e/3`
    pub ratio_base_4e_over_3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteLedger {
    pub cross_validation_box: (usize, usize),
    pub algorithm1_realizes: Vec<String>,
    pub algorithm1_disagreements: Vec<DisagreementEntry>,
    pub residual_box: (usize, usize),
    pub residuals: Vec<ResidualEntry>,
    /// Conventions whose `N1` is annihilated by the 60-term polynomial `P`.
    pub min_poly_annihilates: Vec<String>,
    /// Tails `t` for which the `x^3 y^2 z^t` equation annihilates the remark-convention `N2`.
    pub remark_series_tail: Vec<u32>,
    pub asymptotics: Vec<AsymptoticEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum LedgerError {
    #[error(transparent)]
    CrossValidation(#[from] CrossValidationError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn entry(
    equation: &str,
    series_name: &str,
    conv: &CodimWeight,
    p: &ZPolynomial,
    z: &BiSeries,
) -> ResidualEntry {
    let res = residual_bivariate(p, z);
    let mut cells = res.nonzero_terms();
    let first_offending = cells.next().map(|(c, d, v)| (c, d, v.to_string()));
    ResidualEntry {
        equation: equation.to_string(),
        series: series_name.to_string(),
        convention: conv.name().to_string(),
        vanishes: first_offending.is_none(),
        nonzero_cells: usize::from(first_offending.is_some()) + cells.count(),
        first_offending,
    }
}

pub fn route_ledger() -> Result<RouteLedger, LedgerError> {
    let (cc, cd) = LEDGER_CROSS_VALIDATION_BOX;
    let cv = cross_validate(cc, cd)?;
    let algorithm1_disagreements = cv
        .conventions
        .iter()
        .map(|a| DisagreementEntry {
            convention: a.convention.clone(),
            disagreeing_cells: a.disagreeing_cells.len(),
            first_disagreement: a.disagreeing_cells.first().copied(),
        })
        .collect();

    let (rc, rd) = LEDGER_RESIDUAL_BOX;
    let mut residuals = Vec::new();
    for conv in CodimWeight::builtins() {
        let sol = solve_system(&conv, rc, rd)?;
        residuals.push(entry("P", "n1", &conv, &builtin_p(), &sol.n1));
        residuals.push(entry(
            "odd-weight",
            "n2",
            &conv,
            &odd_weight_equation(),
            &sol.n2,
        ));
        for tail in [9, 11] {
            let name = format!("tail-{tail}");
            residuals.push(entry(&name, "n2", &conv, &tail_equation(tail), &sol.n2));
        }
    }
    let min_poly_annihilates = residuals
        .iter()
        .filter(|r| r.equation == "P" && r.vanishes)
        .map(|r| r.convention.clone())
        .collect();
    let remark = CodimWeight::remark();
    let remark_series_tail = [9, 11]
        .into_iter()
        .filter(|t| {
            residuals.iter().any(|r| {
                r.convention == remark.name() && r.equation == format!("tail-{t}") && r.vanishes
            })
        })
        .collect();

    let d = LEDGER_ASYMPTOTIC_DEGREE;
    let asymptotics = (0..=2)
        .map(|c| {
            let exact = simple_count(c, d).expect("closed form is exact");
            AsymptoticEntry {
                c,
                d,
                ratio_base_4_over_3: estimate_ratio(&exact, ln_asymptotic_estimate(c, d)),
                ratio_base_4e_over_3: estimate_ratio(
                    &exact,
                    ln_asymptotic_estimate_4e_over_3(c, d),
                ),
            }
        })
        .collect();

    Ok(RouteLedger {
        cross_validation_box: LEDGER_CROSS_VALIDATION_BOX,
        algorithm1_realizes: cv.realized_by_algorithm1,
        algorithm1_disagreements,
        residual_box: LEDGER_RESIDUAL_BOX,
        residuals,
        min_poly_annihilates,
        remark_series_tail,
        asymptotics,
    })
}

impl RouteLedger {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes") + "\n"
    }

    /// Equality with floats compared to a relative tolerance, so a committed
    /// artifact survives last-digit differences in `ln`/`exp`.
    pub fn matches(&self, other: &RouteLedger, rel_tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel_tol * a.abs().max(b.abs());
        self.cross_validation_box == other.cross_validation_box
            && self.algorithm1_realizes == other.algorithm1_realizes
            && self.algorithm1_disagreements == other.algorithm1_disagreements
            && self.residual_box == other.residual_box
            && self.residuals == other.residuals
            && self.min_poly_annihilates == other.min_poly_annihilates
            && self.remark_series_tail == other.remark_series_tail
            && self.asymptotics.len() == other.asymptotics.len()
            && self
                .asymptotics
                .iter()
                .zip(&other.asymptotics)
                .all(|(a, b)| {
                    a.c == b.c
                        && a.d == b.d
                        && close(a.ratio_base_4_over_3, b.ratio_base_4_over_3)
                        && close(a.ratio_base_4e_over_3, b.ratio_base_4e_over_3)
                })
    }
}
