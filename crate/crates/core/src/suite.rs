//! The verification suite: every cross-route check, each returning a [`CheckReport`].

use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::algorithm::algorithm1_table;
use crate::closed_form::{
    codim1_count, convolution_by_enumeration, estimate_ratio, flat_count, fuss_convolution,
    ln_asymptotic_estimate, ln_asymptotic_estimate_4e_over_3, simple_count,
};
use crate::ledger::{route_ledger, RouteLedger, LEDGER_CROSS_VALIDATION_BOX, LEDGER_RESIDUAL_BOX};
use crate::oracle::{enumerate_flat, validate_diagram};
use crate::report::{CheckReport, OffendingCell, Status};
use crate::series::Count;
use crate::solver::{configuration_table, solve_simple};
use crate::table::CountTable;
use crate::verify::{
    growth_constant_check, polynomial_consistency_check, row_sum_check, verify_min_poly,
};
use crate::weight::CodimWeight;

pub const ASYMPTOTIC_WINDOW: (f64, f64) = (0.8, 1.2);

/// Sizes of every check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Scale {
    pub row_dmax: usize,
    pub oracle_degree: usize,
    pub simple_box: (usize, usize),
    pub fuss: (u64, u64),
    pub support_box: (usize, usize),
    pub min_poly_box: (usize, usize),
    pub row_sum_dmax: usize,
    pub asymptotic_degree: u64,
}

impl Scale {
    pub fn full() -> Self {
        Scale {
            row_dmax: 30,
            oracle_degree: 3,
            simple_box: (10, 30),
            fuss: (5, 10),
            support_box: (40, 20),
            min_poly_box: (12, 12),
            row_sum_dmax: 60,
            asymptotic_degree: 200,
        }
    }

    pub fn quick() -> Self {
        Scale {
            row_dmax: 12,
            oracle_degree: 3,
            simple_box: (4, 12),
            fuss: (3, 6),
            support_box: (12, 6),
            min_poly_box: (6, 6),
            row_sum_dmax: 16,
            asymptotic_degree: 200,
        }
    }

    /// Series cells the named check solves on; zero for checks that solve nothing.
    pub fn cells_for(&self, check: &str) -> usize {
        let area = |(c, d): (usize, usize)| (c + 1) * (d + 1);
        match check {
            "flat-row" | "codim1-row" => area((1, self.row_dmax)),
            "simple" => area(self.simple_box),
            "support" => area(self.support_box),
            "min-poly" => area(self.min_poly_box),
            "row-sum" => area((2 * self.row_sum_dmax, self.row_sum_dmax)),
            "route-ledger" => area(LEDGER_CROSS_VALIDATION_BOX).max(area(LEDGER_RESIDUAL_BOX)),
            _ => 0,
        }
    }

    /// Largest [`Scale::cells_for`] over the whole suite.
    pub fn max_cells(&self) -> usize {
        CHECK_NAMES
            .iter()
            .map(|n| self.cells_for(n))
            .max()
            .unwrap_or(0)
    }
}

pub const CHECK_NAMES: [&str; 11] = [
    "flat-row",
    "codim1-row",
    "simple",
    "fuss-catalan",
    "support",
    "min-poly",
    "growth-constant",
    "row-sum",
    "asymptotics",
    "route-ledger",
    "oracle",
];

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn fail_with(check: &str, err: impl std::fmt::Display) -> CheckReport {
    CheckReport::new(check, true)
        .with_status(Status::Fail)
        .detail("error", err.to_string())
}

fn cells_of(table: &CountTable, cells: &[(usize, usize)]) -> Vec<OffendingCell> {
    cells
        .iter()
        .map(|&(c, d)| OffendingCell {
            c,
            d,
            value: table.get(c, d).clone(),
        })
        .collect()
}

/// Compares every route on one codimension row against a closed formula.
fn row_check(name: &str, c: usize, dmax: usize, formula: impl Fn(u64) -> Count) -> CheckReport {
    let expected = CountTable::from_fn(
        crate::table::Family::N1,
        None,
        crate::table::Route::ClosedForm,
        c,
        dmax,
        |cc, d| {
            if cc == c {
                formula(d as u64)
            } else {
                Count::zero()
            }
        },
    );
    let mut routes: Vec<(String, CountTable)> = Vec::new();
    for conv in CodimWeight::builtins() {
        match configuration_table(&conv, c, dmax) {
            Ok(t) => routes.push((format!("solver-{}", conv.name()), t)),
            Err(e) => return fail_with(name, e),
        }
    }
    match algorithm1_table(c, dmax) {
        Ok(t) => routes.push(("algorithm1".into(), t)),
        Err(e) => return fail_with(name, e),
    }
    let mut report = CheckReport::new(name, true).detail("dmax", dmax);
    let mut ok = true;
    for (route, t) in &routes {
        let bad: Vec<(usize, usize)> = (0..=dmax)
            .filter(|&d| t.get(c, d) != expected.get(c, d))
            .map(|d| (c, d))
            .collect();
        if !bad.is_empty() {
            ok = false;
            report.offending_cells.extend(cells_of(t, &bad));
        }
        report = report.detail(route, bad.is_empty());
    }
    let head: Vec<String> = (0..=dmax.min(5))
        .map(|d| expected.get(c, d).to_string())
        .collect();
    report.detail("first_values", head).with_status(status(ok))
}

pub fn flat_row_check(scale: &Scale) -> CheckReport {
    let report = row_check("flat-row", 0, scale.row_dmax, flat_count);
    let mut oracle_ok = true;
    let mut oracle_counts = Vec::new();
    for d in 0..=scale.oracle_degree.min(scale.row_dmax) {
        match enumerate_flat(d) {
            Ok(all) => {
                oracle_ok &= Count::from(all.len()) == flat_count(d as u64);
                oracle_counts.push(all.len());
            }
            Err(e) => return fail_with("flat-row", e),
        }
    }
    let ok = report.passed() && oracle_ok;
    report
        .detail("oracle_counts", oracle_counts)
        .with_status(status(ok))
}

pub fn codim1_row_check(scale: &Scale) -> CheckReport {
    row_check("codim1-row", 1, scale.row_dmax, codim1_count)
}

pub fn simple_check(scale: &Scale) -> CheckReport {
    let (cmax, dmax) = scale.simple_box;
    let series = match solve_simple(cmax, dmax) {
        Ok(s) => s,
        Err(e) => return fail_with("simple", e),
    };
    let mut bad = Vec::new();
    for c in 0..=cmax {
        for d in 0..=dmax {
            match simple_count(c as u64, d as u64) {
                Ok(v) if &v == series.coeff(c, d) => {}
                Ok(_) => bad.push(OffendingCell {
                    c,
                    d,
                    value: series.coeff(c, d).clone(),
                }),
                Err(e) => return fail_with("simple", e),
            }
        }
    }
    let mut r = CheckReport::new("simple", true)
        .detail("box", scale.simple_box)
        .with_status(status(bad.is_empty()));
    r.offending_cells = bad;
    r
}

pub fn fuss_check(scale: &Scale) -> CheckReport {
    let (amax, bmax) = scale.fuss;
    let mut bad = Vec::new();
    for a in 1..=amax {
        for b in 0..=bmax {
            match fuss_convolution(a, b) {
                Ok(v) if v == convolution_by_enumeration(a, b) => {}
                Ok(v) => bad.push(OffendingCell {
                    c: a as usize,
                    d: b as usize,
                    value: v,
                }),
                Err(e) => return fail_with("fuss-catalan", e),
            }
        }
    }
    let mut r = CheckReport::new("fuss-catalan", true)
        .detail("a_max", amax)
        .detail("b_max", bmax)
        .with_status(status(bad.is_empty()));
    r.offending_cells = bad;
    r
}

pub fn support_check(scale: &Scale) -> CheckReport {
    let (cmax, dmax) = scale.support_box;
    let mut tables = Vec::new();
    for conv in CodimWeight::builtins() {
        match configuration_table(&conv, cmax, dmax) {
            Ok(t) => tables.push(t),
            Err(e) => return fail_with("support", e),
        }
    }
    match algorithm1_table(cmax, dmax) {
        Ok(t) => tables.push(t),
        Err(e) => return fail_with("support", e),
    }
    let closed = CountTable::from_fn(
        crate::table::Family::N4,
        None,
        crate::table::Route::ClosedForm,
        cmax,
        dmax,
        |c, d| simple_count(c as u64, d as u64).expect("closed form is exact"),
    );
    tables.push(closed);
    let mut bad = Vec::new();
    for t in &tables {
        for c in 0..=cmax {
            for d in 0..=dmax {
                if c >= 2 * d && (c, d) != (0, 0) && !t.get(c, d).is_zero() {
                    bad.push(OffendingCell {
                        c,
                        d,
                        value: t.get(c, d).clone(),
                    });
                }
            }
        }
    }
    let mut r = CheckReport::new("support", true)
        .detail("box", scale.support_box)
        .detail("routes", tables.len())
        .with_status(status(bad.is_empty()));
    r.offending_cells = bad;
    r
}

/// `P(x, y, N1)` for the `2k-1` convention plus the factorization of `Q(0, z)`.
/// A nonzero residual is downgraded to a finding.
pub fn min_poly_check(scale: &Scale) -> CheckReport {
    let (cmax, dmax) = scale.min_poly_box;
    let poly = polynomial_consistency_check();
    let mut r = match verify_min_poly(&CodimWeight::thm19(), cmax, dmax) {
        Ok(r) => r,
        Err(e) => return fail_with("min-poly", e),
    };
    r.check = "min-poly".into();
    r.mandatory = true;
    let st = if !poly.passed() {
        Status::Fail
    } else if r.offending_cells.is_empty() {
        Status::Pass
    } else {
        Status::Finding
    };
    r.detail("polynomials", poly.details).with_status(st)
}

pub fn asymptotic_check(scale: &Scale) -> CheckReport {
    let d = scale.asymptotic_degree;
    let (lo, hi) = ASYMPTOTIC_WINDOW;
    let mut ok = true;
    let mut ratios = Vec::new();
    let mut alt_base = Vec::new();
    for c in 0..=2u64 {
        let exact = match simple_count(c, d) {
            Ok(v) => v,
            Err(e) => return fail_with("asymptotics", e),
        };
        let ratio = estimate_ratio(&exact, ln_asymptotic_estimate(c, d));
        ok &= (lo..=hi).contains(&ratio);
        ratios.push(ratio);
        alt_base.push(estimate_ratio(
            &exact,
            ln_asymptotic_estimate_4e_over_3(c, d),
        ));
    }
    CheckReport::new("asymptotics", true)
        .detail("degree", d)
        .detail("window", ASYMPTOTIC_WINDOW)
        .detail("ratios", ratios)
        .detail("ratios_with_base_4e_over_3", alt_base)
        .with_status(status(ok))
}

/// At least one convention is realized by the dynamic program on every cell.
pub fn route_ledger_check() -> (CheckReport, Option<RouteLedger>) {
    match route_ledger() {
        Ok(ledger) => {
            let ok = !ledger.algorithm1_realizes.is_empty();
            let r = CheckReport::new("route-ledger", true)
                .detail("ledger", &ledger)
                .with_status(status(ok));
            (r, Some(ledger))
        }
        Err(e) => (fail_with("route-ledger", e), None),
    }
}

pub fn oracle_check(degree: usize) -> CheckReport {
    let mut r = CheckReport::new("oracle", true).detail("degree", degree);
    let mut ok = true;
    let mut rows = Vec::new();
    for d in 0..=degree {
        let all = match enumerate_flat(d) {
            Ok(all) => all,
            Err(e) => return fail_with("oracle", e),
        };
        let invalid = all.iter().filter(|g| !validate_diagram(g).valid).count();
        let expected = flat_count(d as u64);
        let agree = Count::from(all.len()) == expected;
        ok &= agree && invalid == 0;
        if !agree {
            r.offending_cells.push(OffendingCell {
                c: 0,
                d,
                value: Count::from(all.len()),
            });
        }
        rows.push(serde_json::json!({
            "degree": d,
            "enumerated": all.len(),
            "formula": expected.to_string(),
            "invalid": invalid,
        }));
    }
    r.detail("rows", rows).with_status(status(ok))
}

fn timed(f: impl FnOnce() -> CheckReport) -> CheckReport {
    let t = Instant::now();
    let r = f();
    let ms = t.elapsed().as_secs_f64() * 1e3;
    r.detail("elapsed_ms", (ms * 10.0).round() / 10.0)
}

/// Runs one named check; `None` for an unknown name.
pub fn run_check(name: &str, scale: &Scale) -> Option<CheckReport> {
    let r = match name {
        "flat-row" => timed(|| flat_row_check(scale)),
        "codim1-row" => timed(|| codim1_row_check(scale)),
        "simple" => timed(|| simple_check(scale)),
        "fuss-catalan" => timed(|| fuss_check(scale)),
        "support" => timed(|| support_check(scale)),
        "min-poly" => timed(|| min_poly_check(scale)),
        "growth-constant" => timed(growth_constant_check),
        "row-sum" => {
            timed(|| row_sum_check(scale.row_sum_dmax).unwrap_or_else(|e| fail_with("row-sum", e)))
        }
        "asymptotics" => timed(|| asymptotic_check(scale)),
        "route-ledger" => timed(|| route_ledger_check().0),
        "oracle" => timed(|| oracle_check(scale.oracle_degree)),
        _ => return None,
    };
    Some(r)
}

pub fn run_suite(scale: &Scale) -> Vec<CheckReport> {
    CHECK_NAMES
        .iter()
        .map(|n| run_check(n, scale).expect("known check"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Scale {
        Scale {
            row_dmax: 5,
            oracle_degree: 2,
            simple_box: (2, 6),
            fuss: (2, 4),
            support_box: (6, 3),
            min_poly_box: (3, 3),
            row_sum_dmax: 12,
            asymptotic_degree: 200,
        }
    }

    #[test]
    fn tiny_suite_passes() {
        for r in run_suite(&tiny()) {
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn unknown_check() {
        assert!(run_check("nope", &tiny()).is_none());
    }

    #[test]
    fn scales_are_ordered() {
        assert!(Scale::quick().max_cells() < Scale::full().max_cells());
        assert_eq!(Scale::full().max_cells(), 121 * 61);
    }
}
