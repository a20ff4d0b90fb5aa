use std::fmt::Write as _;

use acampo_core::algorithm::{algorithm1_count, algorithm1_table};
use acampo_core::closed_form::{
    estimate_ratio, ln_asymptotic_estimate, ln_asymptotic_estimate_4e_over_3, ln_count,
    simple_count,
};
use acampo_core::oracle::{enumerate_flat, validate_diagram, MAX_ORACLE_DEGREE};
use acampo_core::report::CheckReport;
use acampo_core::suite::{self, Scale, CHECK_NAMES};
use acampo_core::table::{CountTable, Family, Route};
use acampo_core::{count_configurations, solve_simple, Count};
use serde_json::{json, Value};

use crate::args::{ConventionArg, Format, ScaleArg};

pub enum Failure {
    Usage(String),
    /// Resource ceiling exceeded.
    Guard(String),
    /// A computation reported an error; treated like a disagreement.
    Compute(String),
}

/// Rendered output plus whether every route / mandatory check agreed.
pub struct Output {
    pub body: String,
    pub agree: bool,
}

pub type CmdResult = Result<Output, Failure>;

fn compute<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Compute(e.to_string()))
}

fn guard(cells: usize, max_cells: usize, what: &str) -> Result<(), Failure> {
    if cells > max_cells {
        return Err(Failure::Guard(format!(
            "{what} needs {cells} series cells, above the ceiling of {max_cells} (ACAMPO_MAX_CELLS)"
        )));
    }
    Ok(())
}

fn cells(c: usize, d: usize) -> usize {
    (c + 1).saturating_mul(d + 1)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders") + "\n"
}

pub fn count(
    c: usize,
    d: usize,
    conv: ConventionArg,
    format: Format,
    max_cells: usize,
) -> CmdResult {
    guard(cells(c, d), max_cells, "count")?;
    let mut rows: Vec<(String, Option<String>, Count)> = Vec::new();
    for w in conv.weights() {
        let v = compute(count_configurations(c, d, &w))?;
        rows.push((Route::Solver.to_string(), Some(w.name().to_string()), v));
    }
    rows.push((
        Route::Algorithm1.to_string(),
        None,
        compute(algorithm1_count(c, d))?,
    ));
    let agree = rows.windows(2).all(|w| w[0].2 == w[1].2);

    let body = match format {
        Format::Json => pretty(&json!({
            "command": "count",
            "c": c,
            "d": d,
            "agree": agree,
            "values": rows.iter().map(|(r, cv, v)| json!({
                "route": r, "convention": cv, "value": v.to_string(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("route,convention,value\n");
            for (r, cv, v) in &rows {
                let _ = writeln!(s, "{r},{},{v}", cv.as_deref().unwrap_or(""));
            }
            s
        }
        Format::Text => {
            let mut s = format!("#N1({c},{d})\n");
            for (r, cv, v) in &rows {
                let _ = writeln!(s, "  {r:<11} {:<7} {v}", cv.as_deref().unwrap_or("-"));
            }
            s.push_str(if agree {
                "all routes agree\n"
            } else {
                "ROUTES DISAGREE\n"
            });
            s
        }
    };
    Ok(Output { body, agree })
}

fn table_text(t: &CountTable) -> String {
    let mut s = format!(
        "# family={} route={} convention={}\n",
        serde_json::to_value(t.family)
            .expect("family")
            .as_str()
            .unwrap_or("?"),
        t.route,
        t.convention.as_deref().unwrap_or("-"),
    );
    let width = (0..=t.cmax)
        .flat_map(|c| (0..=t.dmax).map(move |d| (c, d)))
        .map(|(c, d)| t.get(c, d).to_string().len())
        .max()
        .unwrap_or(1)
        .max(3);
    let _ = write!(s, "{:>4}", "c\\d");
    for d in 0..=t.dmax {
        let _ = write!(s, " {d:>width$}");
    }
    s.push('\n');
    for c in 0..=t.cmax {
        let _ = write!(s, "{c:>4}");
        for d in 0..=t.dmax {
            let _ = write!(s, " {:>width$}", t.get(c, d).to_string());
        }
        s.push('\n');
    }
    s
}

fn table_csv(t: &CountTable) -> String {
    format!(
        "# family={} route={} convention={}\n{}",
        serde_json::to_value(t.family)
            .expect("family")
            .as_str()
            .unwrap_or("?"),
        t.route,
        t.convention.as_deref().unwrap_or(""),
        t.to_csv()
    )
}

fn label(t: &CountTable) -> String {
    match &t.convention {
        Some(c) => format!("{}[{c}]", t.route),
        None => t.route.to_string(),
    }
}

/// Emits every table; disagreements are listed against the first one.
fn render_tables(command: &str, tables: &[CountTable], format: Format) -> Output {
    let reference = &tables[0];
    let disagreements: Vec<(String, Vec<(usize, usize)>)> = tables[1..]
        .iter()
        .map(|t| (label(t), reference.disagreements(t)))
        .filter(|(_, cells)| !cells.is_empty())
        .collect();
    let agree = disagreements.is_empty();
    let body = match format {
        Format::Json => pretty(&json!({
            "command": command,
            "agree": agree,
            "reference": label(reference),
            "tables": tables,
            "disagreements": disagreements.iter().map(|(l, cells)| json!({
                "route": l, "cells": cells,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => tables.iter().map(table_csv).collect::<Vec<_>>().join("\n"),
        Format::Text => {
            let mut s = tables.iter().map(table_text).collect::<Vec<_>>().join("\n");
            if agree {
                s.push_str("all routes agree\n");
            } else {
                for (l, cells) in &disagreements {
                    let _ = writeln!(
                        s,
                        "ROUTES DISAGREE: {l} differs from {} at {} cells, first {:?}",
                        label(reference),
                        cells.len(),
                        cells[0]
                    );
                }
            }
            s
        }
    };
    Output { body, agree }
}

pub fn table(
    cmax: usize,
    dmax: usize,
    conv: ConventionArg,
    format: Format,
    max_cells: usize,
) -> CmdResult {
    guard(cells(cmax, dmax), max_cells, "table")?;
    let mut tables = Vec::new();
    for w in conv.weights() {
        tables.push(compute(acampo_core::solver::configuration_table(
            &w, cmax, dmax,
        ))?);
    }
    tables.push(compute(algorithm1_table(cmax, dmax))?);
    Ok(render_tables("table", &tables, format))
}

pub fn simple(cmax: usize, dmax: usize, format: Format, max_cells: usize) -> CmdResult {
    guard(cells(cmax, dmax), max_cells, "simple")?;
    let series = compute(solve_simple(cmax, dmax))?;
    let solved = CountTable::from_series(&series, Family::N4, None, Route::Solver, cmax, dmax);
    let mut err = None;
    let closed = CountTable::from_fn(Family::N4, None, Route::ClosedForm, cmax, dmax, |c, d| {
        simple_count(c as u64, d as u64).unwrap_or_else(|e| {
            err = Some(e.to_string());
            Count::from(0)
        })
    });
    if let Some(e) = err {
        return Err(Failure::Compute(e));
    }
    Ok(render_tables("simple", &[solved, closed], format))
}

fn scale_of(s: ScaleArg) -> Scale {
    match s {
        ScaleArg::Quick => Scale::quick(),
        ScaleArg::Full => Scale::full(),
    }
}

pub fn verify(
    only: Option<&str>,
    degree: Option<usize>,
    scale: ScaleArg,
    format: Format,
    max_cells: usize,
) -> CmdResult {
    let mut scale = scale_of(scale);
    if let Some(d) = degree {
        if d > MAX_ORACLE_DEGREE {
            return Err(Failure::Guard(format!(
                "oracle degree {d} above the limit of {MAX_ORACLE_DEGREE}"
            )));
        }
        scale.oracle_degree = d;
    }
    let names: Vec<&str> = match only {
        Some(n) if CHECK_NAMES.contains(&n) => vec![n],
        Some(n) => {
            return Err(Failure::Usage(format!(
                "unknown check '{n}'; expected one of: {}",
                CHECK_NAMES.join(", ")
            )))
        }
        None => CHECK_NAMES.to_vec(),
    };
    let need = names.iter().map(|n| scale.cells_for(n)).max().unwrap_or(0);
    guard(need, max_cells, "verify")?;

    let reports: Vec<CheckReport> = names
        .iter()
        .map(|n| suite::run_check(n, &scale).expect("known check"))
        .collect();
    let agree = reports.iter().all(|r| !r.mandatory || r.passed());
    let body = match format {
        Format::Json => reports.iter().map(|r| r.to_json() + "\n").collect(),
        Format::Csv => {
            let mut s = String::from("check,status,mandatory,offending_cells\n");
            for r in &reports {
                let status = serde_json::to_value(r.status).expect("status");
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.check,
                    status.as_str().unwrap_or("?"),
                    r.mandatory,
                    r.offending_cells.len()
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let status = serde_json::to_value(r.status).expect("status");
                let _ = writeln!(
                    s,
                    "{:<8} {:<16} {}",
                    status.as_str().unwrap_or("?").to_uppercase(),
                    r.check,
                    r.details
                );
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let _ = writeln!(s, "{} checks, {failed} failed", reports.len());
            s
        }
    };
    Ok(Output { body, agree })
}

pub fn asymptotics(degree: u64, cmax: u64, format: Format) -> CmdResult {
    if degree == 0 {
        return Err(Failure::Usage("the estimate needs --degree >= 1".into()));
    }
    let mut rows = Vec::new();
    for c in 0..=cmax {
        let exact = compute(simple_count(c, degree))?;
        let ln_est = ln_asymptotic_estimate(c, degree);
        let (ln_exact, ratio, alt_base) = if exact == Count::from(0) {
            (None, None, None)
        } else {
            (
                Some(ln_count(&exact)),
                Some(estimate_ratio(&exact, ln_est)),
                Some(estimate_ratio(
                    &exact,
                    ln_asymptotic_estimate_4e_over_3(c, degree),
                )),
            )
        };
        rows.push(json!({
            "c": c,
            "d": degree,
            "exact": exact.to_string(),
            "ln_exact": ln_exact,
            "ln_estimate": ln_est,
            "ratio": ratio,
            "ratio_base_4e_over_3": alt_base,
        }));
    }
    let body = match format {
        Format::Json => pretty(&json!({ "command": "asymptotics", "rows": rows })),
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { "  " };
            let cols = [
                "c",
                "d",
                "ln_exact",
                "ln_estimate",
                "ratio",
                "ratio_base_4e_over_3",
            ];
            let mut s = cols.join(sep) + "\n";
            for r in &rows {
                let line: Vec<String> = cols
                    .iter()
                    .map(|k| match &r[*k] {
                        Value::Null => "-".to_string(),
                        v => v.to_string(),
                    })
                    .collect();
                s.push_str(&line.join(sep));
                s.push('\n');
            }
            s
        }
    };
    Ok(Output { body, agree: true })
}

pub fn oracle(degree: usize, dump: bool, format: Format) -> CmdResult {
    let all = enumerate_flat(degree).map_err(|e| Failure::Guard(e.to_string()))?;
    let invalid = all.iter().filter(|g| !validate_diagram(g).valid).count();
    let formula = acampo_core::closed_form::flat_count(degree as u64);
    let agree = Count::from(all.len()) == formula && invalid == 0;
    let body = match format {
        Format::Json => {
            let mut v = json!({
                "command": "oracle",
                "degree": degree,
                "enumerated": all.len(),
                "formula": formula.to_string(),
                "invalid": invalid,
                "agree": agree,
            });
            if dump {
                v["diagrams"] = json!(all);
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("diagram,chord,a,b,parity,crosses\n");
            for (i, g) in all.iter().enumerate() {
                for (j, ch) in g.chords.iter().enumerate() {
                    let partner = g
                        .crossings
                        .iter()
                        .find_map(|&(o, e)| (o == j).then_some(e).or((e == j).then_some(o)));
                    let parity = serde_json::to_value(ch.parity).expect("parity");
                    let _ = writeln!(
                        s,
                        "{i},{j},{},{},{},{}",
                        ch.a,
                        ch.b,
                        parity.as_str().unwrap_or("?"),
                        partner.map(|p| p.to_string()).unwrap_or_default()
                    );
                }
            }
            s
        }
        Format::Text => format!(
            "degree {degree}: {} diagrams enumerated, formula {formula}, {invalid} invalid{}\n",
            all.len(),
            if agree { "" } else { " -- MISMATCH" }
        ),
    };
    Ok(Output { body, agree })
}
