//! Dynamic program over powers of the partial-configuration series.
//!
//! Entry `(c1, d1, e)` of the array holds `[x^c1 y^d1] N2(x, y)^e` for
//! `e = 0..=9`. The `e = 1` layer follows the signed eight-term recurrence
//!
//! ```text
//! N(c1,d1,1) = N(c1,d1,0) + 2 N(c1,d1-1,4) - N(c1,d1-1,5) - N(c1-2,d1-1,5)
//!            + N(c1-1,d1-1,6) + N(c1-2,d1-1,6) + N(c1,d1-2,8) - N(c1-2,d1-2,9)
//! ```
//!
//! and higher layers are convolutions with the `e = 1` layer. The count of
//! configurations is read off as `N(c, d-1, 4)`. Loop order is `c1`, then
//! `d1`, then `e`; indices below zero read as zero.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::series::Count;
use crate::solver::{configuration_table, SolverError};
use crate::table::{CountTable, Family, Route};
use crate::weight::CodimWeight;

pub const LAYERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgorithmError {
    #[error("negative entry N({c},{d},{e}) = {value}")]
    Negative {
        c: usize,
        d: usize,
        e: usize,
        value: Count,
    },
}

/// The `(c+1) x d x 10` array of the dynamic program.
#[derive(Debug, Clone)]
pub struct DpArray {
    crows: usize,
    drows: usize,
    data: Vec<Count>,
}

impl DpArray {
    fn new(crows: usize, drows: usize) -> Self {
        DpArray {
            crows,
            drows,
            data: vec![Count::zero(); crows * drows * LAYERS],
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.crows, self.drows, LAYERS)
    }

    #[inline]
    fn idx(&self, c: usize, d: usize, e: usize) -> usize {
        (c * self.drows + d) * LAYERS + e
    }

    /// Entry lookup with out-of-range (including negative) indices reading as zero.
    pub fn get(&self, c: isize, d: isize, e: usize) -> &Count {
        static ZERO: std::sync::OnceLock<Count> = std::sync::OnceLock::new();
        if c < 0 || d < 0 || c as usize >= self.crows || d as usize >= self.drows || e >= LAYERS {
            return ZERO.get_or_init(Count::zero);
        }
        &self.data[self.idx(c as usize, d as usize, e)]
    }

    fn set(&mut self, c: usize, d: usize, e: usize, v: Count) {
        let i = self.idx(c, d, e);
        self.data[i] = v;
    }
}

/// Fills the array for codimensions `0..=c` and degrees `0..d`.
pub fn fill(c: usize, d: usize) -> DpArray {
    let mut n = DpArray::new(c + 1, d);
    for c1 in 0..=c {
        for d1 in 0..d {
            let (ci, di) = (c1 as isize, d1 as isize);
            let base = if c1 == 0 && d1 == 0 {
                Count::one()
            } else {
                Count::zero()
            };
            n.set(c1, d1, 0, base.clone());

            let mut v = base;
            v += n.get(ci, di - 1, 4) * 2u32;
            v -= n.get(ci, di - 1, 5);
            v -= n.get(ci - 2, di - 1, 5);
            v += n.get(ci - 1, di - 1, 6);
            v += n.get(ci - 2, di - 1, 6);
            v += n.get(ci, di - 2, 8);
            v -= n.get(ci - 2, di - 2, 9);
            n.set(c1, d1, 1, v);

            for e in 2..LAYERS {
                let mut acc = Count::zero();
                for c2 in 0..=c1 {
                    for d2 in 0..=d1 {
                        let a = &n.data[n.idx(c2, d2, 1)];
                        if a.is_zero() {
                            continue;
                        }
                        let b = &n.data[n.idx(c1 - c2, d1 - d2, e - 1)];
                        if !b.is_zero() {
                            acc += a * b;
                        }
                    }
                }
                n.set(c1, d1, e, acc);
            }
        }
    }
    n
}

fn checked(n: &DpArray, c: usize, d: usize, e: usize) -> Result<Count, AlgorithmError> {
    let v = n.get(c as isize, d as isize, e).clone();
    if v.is_negative() {
        return Err(AlgorithmError::Negative { c, d, e, value: v });
    }
    Ok(v)
}

/// `#N1(c, d)` by the dynamic program.
///
/// `(0, 0)` returns 1 (the empty configuration) before the `c >= 2d` guard,
/// which would otherwise report 0 for it.
pub fn algorithm1_count(c: usize, d: usize) -> Result<Count, AlgorithmError> {
    if c == 0 && d == 0 {
        return Ok(Count::one());
    }
    if c >= 2 * d {
        return Ok(Count::zero());
    }
    let n = fill(c, d);
    checked(&n, c, d - 1, 4)
}

/// All of `#N1(c, d)` for the box from a single fill; the array is prefix-closed,
/// so each cell equals what [`algorithm1_count`] would return for it.
pub fn algorithm1_table(cmax: usize, dmax: usize) -> Result<CountTable, AlgorithmError> {
    let n = fill(cmax, dmax.max(1));
    let mut values = vec![vec![Count::zero(); dmax + 1]; cmax + 1];
    for (c, row) in values.iter_mut().enumerate() {
        for (d, cell) in row.iter_mut().enumerate() {
            *cell = if c == 0 && d == 0 {
                Count::one()
            } else if c >= 2 * d {
                Count::zero()
            } else {
                checked(&n, c, d - 1, 4)?
            };
        }
    }
    // the e = 1 layer counts partial configurations
    for c in 0..=cmax {
        for d in 0..dmax.max(1) {
            checked(&n, c, d, 1)?;
        }
    }
    Ok(CountTable {
        family: Family::N1,
        convention: None,
        route: Route::Algorithm1,
        cmax,
        dmax,
        values,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConventionAgreement {
    pub convention: String,
    pub agrees_everywhere: bool,
    /// `matrix[c][d]` is true when the dynamic program and the solver agree.
    pub matrix: Vec<Vec<bool>>,
    pub disagreeing_cells: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidation {
    pub cmax: usize,
    pub dmax: usize,
    pub conventions: Vec<ConventionAgreement>,
    /// Conventions the dynamic program matches on every cell.
    pub realized_by_algorithm1: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CrossValidationError {
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Compares the dynamic program against the solver for each built-in convention.
pub fn cross_validate(cmax: usize, dmax: usize) -> Result<CrossValidation, CrossValidationError> {
    cross_validate_with(cmax, dmax, &CodimWeight::builtins())
}

pub fn cross_validate_with(
    cmax: usize,
    dmax: usize,
    conventions: &[CodimWeight],
) -> Result<CrossValidation, CrossValidationError> {
    let dp = algorithm1_table(cmax, dmax)?;
    let mut out = Vec::new();
    for conv in conventions {
        let solved = configuration_table(conv, cmax, dmax)?;
        let matrix: Vec<Vec<bool>> = (0..=cmax)
            .map(|c| {
                (0..=dmax)
                    .map(|d| dp.get(c, d) == solved.get(c, d))
                    .collect()
            })
            .collect();
        let disagreeing_cells = dp.disagreements(&solved);
        out.push(ConventionAgreement {
            convention: conv.name().to_string(),
            agrees_everywhere: disagreeing_cells.is_empty(),
            matrix,
            disagreeing_cells,
        });
    }
    let realized = out
        .iter()
        .filter(|a| a.agrees_everywhere)
        .map(|a| a.convention.clone())
        .collect();
    Ok(CrossValidation {
        cmax,
        dmax,
        conventions: out,
        realized_by_algorithm1: realized,
    })
}
