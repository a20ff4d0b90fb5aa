//! Truncated-series solution of the configuration equation system.
//!
//! The three unknowns are the generating functions of configurations (`n1`),
//! partial configurations (`n2`) and widespread partial configurations (`n3`):
//!
//! ```text
//! n1 = 1 + y n2^4
//! n2 = n1 n3
//! n2 = n1 + sum_{k>=1} x^{w(k)} y^k n2^{4k+1} n3^k
//! ```
//!
//! where `w` is a [`CodimWeight`]. Simple configurations (`n4`) satisfy the
//! single equation `n4 = 1 + y n4^4 + 4 x y^2 n4^8`.
//!
//! Both systems are solved by fixed-point sweeps. Every correction term carries
//! a factor `y`, so a sweep fixes at least one more degree; sweep `s` therefore
//! runs in the box `(cmax, min(s, dmax))` and only the final sweeps touch the
//! full box.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use thiserror::Error;

use crate::series::{BiSeries, Count, SeriesError};
use crate::table::{CountTable, Family, Route};
use crate::weight::CodimWeight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("fixed point not reached after {0} sweeps")]
    NoConvergence(usize),
    #[error("negative coefficient in {series} at (c={c}, d={d})")]
    Negative {
        series: &'static str,
        c: usize,
        d: usize,
    },
    #[error("equation `{equation}` fails at cells {cells:?}")]
    EquationViolated {
        equation: &'static str,
        cells: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone)]
pub struct SystemSolution {
    pub n1: BiSeries,
    pub n2: BiSeries,
    pub n3: BiSeries,
    pub convention: CodimWeight,
    pub sweeps: usize,
}

impl SystemSolution {
    pub fn cmax(&self) -> usize {
        self.n1.cmax()
    }

    pub fn dmax(&self) -> usize {
        self.n1.dmax()
    }

    pub fn series(&self, family: Family) -> Option<&BiSeries> {
        match family {
            Family::N1 => Some(&self.n1),
            Family::N2 => Some(&self.n2),
            Family::N3 => Some(&self.n3),
            Family::N4 => None,
        }
    }

    /// Table of one family restricted to `(cmax, dmax)`, which must fit in the solved box.
    pub fn table(&self, family: Family, cmax: usize, dmax: usize) -> CountTable {
        assert!(cmax <= self.cmax() && dmax <= self.dmax());
        let s = self.series(family).expect("n4 is not part of the system");
        CountTable::from_series(
            s,
            family,
            Some(self.convention.name().to_string()),
            Route::Solver,
            cmax,
            dmax,
        )
    }
}

/// `sum_{k>=1} x^{w(k)} t^k`, with the affine tail of `w` summed as a geometric series.
fn weighted_power_sum(conv: &CodimWeight, t: &BiSeries) -> Result<BiSeries, SeriesError> {
    let (cm, dm) = (t.cmax(), t.dmax());
    let p = conv.prefix_len();
    let mut sum = BiSeries::zero(cm, dm);
    let mut tk = BiSeries::one(cm, dm);
    for k in 1..=p {
        tk = tk.mul(t)?;
        sum.add_assign(&tk.shift(conv.weight(k), 0))?;
    }
    // x^{w(p+1)} t^{p+1} / (1 - x^slope t)
    let head = tk.mul(t)?.shift(conv.weight(p + 1), 0);
    if head.is_zero() {
        return Ok(sum);
    }
    let ratio = BiSeries::one(cm, dm).sub(&t.shift(conv.tail_slope(), 0))?;
    sum.add_assign(&head.mul(&ratio.invert()?)?)?;
    Ok(sum)
}

/// Same sum evaluated term by term up to `k = dmax`, stopping once the weight leaves the box.
fn truncated_power_sum(conv: &CodimWeight, t: &BiSeries) -> Result<BiSeries, SeriesError> {
    let (cm, dm) = (t.cmax(), t.dmax());
    let mut sum = BiSeries::zero(cm, dm);
    let mut tk = BiSeries::one(cm, dm);
    for k in 1..=dm {
        if conv.weight(k) > cm {
            break;
        }
        tk = tk.mul(t)?;
        if tk.is_zero() {
            break;
        }
        sum.add_assign(&tk.shift(conv.weight(k), 0))?;
    }
    Ok(sum)
}

struct Sweep {
    n1: BiSeries,
    n2: BiSeries,
    n3: BiSeries,
}

fn sweep(conv: &CodimWeight, n2: &BiSeries) -> Result<Sweep, SeriesError> {
    let (cm, dm) = (n2.cmax(), n2.dmax());
    let n2_4 = n2.pow(4);
    let n1 = BiSeries::one(cm, dm).add(&n2_4.shift(0, 1))?;
    let n3 = n2.mul(&n1.invert()?)?;
    let t = n2_4.mul(&n3)?.shift(0, 1);
    let next = n1.add(&n2.mul(&weighted_power_sum(conv, &t)?)?)?;
    Ok(Sweep { n1, n2: next, n3 })
}

fn check_nonnegative(name: &'static str, s: &BiSeries) -> Result<(), SolverError> {
    match s.first_negative() {
        Some((c, d)) => Err(SolverError::Negative { series: name, c, d }),
        None => Ok(()),
    }
}

fn expect_equal(equation: &'static str, lhs: &BiSeries, rhs: &BiSeries) -> Result<(), SolverError> {
    let cells = lhs.diff_cells(rhs);
    if cells.is_empty() {
        Ok(())
    } else {
        Err(SolverError::EquationViolated { equation, cells })
    }
}

/// Re-checks the three system equations on the box, using the term-by-term `k`-sum.
pub fn verify_system(sol: &SystemSolution) -> Result<(), SolverError> {
    let (cm, dm) = (sol.cmax(), sol.dmax());
    let one = BiSeries::one(cm, dm);
    let n2_4 = sol.n2.pow(4);
    expect_equal("n1 = 1 + y n2^4", &sol.n1, &one.add(&n2_4.shift(0, 1))?)?;
    expect_equal("n2 = n1 n3", &sol.n2, &sol.n1.mul(&sol.n3)?)?;
    let t = n2_4.mul(&sol.n3)?.shift(0, 1);
    let rhs = sol
        .n1
        .add(&sol.n2.mul(&truncated_power_sum(&sol.convention, &t)?)?)?;
    expect_equal("n2 = n1 + sum_k x^w(k) y^k n2^(4k+1) n3^k", &sol.n2, &rhs)?;
    Ok(())
}

pub fn solve_system(
    convention: &CodimWeight,
    cmax: usize,
    dmax: usize,
) -> Result<SystemSolution, SolverError> {
    let limit = dmax + 2;
    let mut n2 = BiSeries::one(cmax, 0);
    let mut sweeps = 0;
    loop {
        let dm = (sweeps + 1).min(dmax);
        let input = n2.resized(cmax, dm);
        let out = sweep(convention, &input)?;
        sweeps += 1;
        if dm == dmax && out.n2 == input {
            let sol = SystemSolution {
                n1: out.n1,
                n2: out.n2,
                n3: out.n3,
                convention: convention.clone(),
                sweeps,
            };
            check_nonnegative("n1", &sol.n1)?;
            check_nonnegative("n2", &sol.n2)?;
            check_nonnegative("n3", &sol.n3)?;
            verify_system(&sol)?;
            return Ok(sol);
        }
        if sweeps >= limit {
            return Err(SolverError::NoConvergence(sweeps));
        }
        n2 = out.n2;
    }
}

fn simple_rhs(n4: &BiSeries) -> Result<BiSeries, SeriesError> {
    let (cm, dm) = (n4.cmax(), n4.dmax());
    let p4 = n4.pow(4);
    let p8 = p4.mul(&p4)?;
    BiSeries::one(cm, dm)
        .add(&p4.shift(0, 1))?
        .add(&p8.shift(1, 2).scale(&Count::from(4)))
}

/// Simple-configuration series `n4` on the box `(cmax, dmax)`.
pub fn solve_simple(cmax: usize, dmax: usize) -> Result<BiSeries, SolverError> {
    let limit = dmax + 2;
    let mut n4 = BiSeries::one(cmax, 0);
    let mut sweeps = 0;
    loop {
        let dm = (sweeps + 1).min(dmax);
        let input = n4.resized(cmax, dm);
        let next = simple_rhs(&input)?;
        sweeps += 1;
        if dm == dmax && next == input {
            check_nonnegative("n4", &next)?;
            expect_equal("n4 = 1 + y n4^4 + 4 x y^2 n4^8", &next, &simple_rhs(&next)?)?;
            return Ok(next);
        }
        if sweeps >= limit {
            return Err(SolverError::NoConvergence(sweeps));
        }
        n4 = next;
    }
}

/// Solutions keyed by convention; each entry holds the largest box solved so far.
#[derive(Default)]
pub struct SolutionCache {
    inner: RwLock<HashMap<CodimWeight, Arc<SystemSolution>>>,
}

impl SolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_solve(
        &self,
        convention: &CodimWeight,
        cmax: usize,
        dmax: usize,
    ) -> Result<Arc<SystemSolution>, SolverError> {
        let existing = {
            let map = self.inner.read().expect("cache lock poisoned");
            map.get(convention).cloned()
        };
        let (c_req, d_req) = match &existing {
            Some(sol) if sol.cmax() >= cmax && sol.dmax() >= dmax => return Ok(Arc::clone(sol)),
            Some(sol) => (sol.cmax().max(cmax), sol.dmax().max(dmax)),
            None => (cmax, dmax),
        };
        let sol = Arc::new(solve_system(convention, c_req, d_req)?);
        let mut map = self.inner.write().expect("cache lock poisoned");
        let entry = map
            .entry(convention.clone())
            .or_insert_with(|| Arc::clone(&sol));
        if entry.cmax() < c_req || entry.dmax() < d_req {
            *entry = Arc::clone(&sol);
        }
        Ok(sol)
    }
}

fn global_cache() -> &'static SolutionCache {
    static CACHE: OnceLock<SolutionCache> = OnceLock::new();
    CACHE.get_or_init(SolutionCache::new)
}

/// `#N1(c, d)` under `convention`, served from a process-wide cache.
pub fn count_configurations(
    c: usize,
    d: usize,
    convention: &CodimWeight,
) -> Result<Count, SolverError> {
    let sol = global_cache().get_or_solve(convention, c, d)?;
    Ok(sol.n1.coeff(c, d).clone())
}

/// Table of `#N1(c, d)` over the box.
pub fn configuration_table(
    convention: &CodimWeight,
    cmax: usize,
    dmax: usize,
) -> Result<CountTable, SolverError> {
    let sol = global_cache().get_or_solve(convention, cmax, dmax)?;
    Ok(sol.table(Family::N1, cmax, dmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn n1_row(sol: &SystemSolution, c: usize) -> Vec<i64> {
        (0..=sol.dmax())
            .map(|d| i64::try_from(sol.n1.coeff(c, d).clone()).unwrap())
            .collect()
    }

    #[test]
    fn degree_one_has_single_cross() {
        for conv in CodimWeight::builtins() {
            let sol = solve_system(&conv, 0, 1).unwrap();
            assert_eq!(n1_row(&sol, 0), [1, 1]);
        }
    }

    #[test]
    fn flat_row_small() {
        for conv in CodimWeight::builtins() {
            let sol = solve_system(&conv, 0, 3).unwrap();
            assert_eq!(n1_row(&sol, 0), [1, 1, 4, 22]);
        }
    }

    #[test]
    fn codim_one_degree_two() {
        for conv in CodimWeight::builtins() {
            let sol = solve_system(&conv, 1, 2).unwrap();
            assert_eq!(*sol.n1.coeff(1, 2), Count::from(4));
        }
    }

    #[test]
    fn support_below_twice_degree() {
        for conv in CodimWeight::builtins() {
            let sol = solve_system(&conv, 12, 6).unwrap();
            for d in 0..=6 {
                for c in (2 * d).max(1)..=12 {
                    assert!(sol.n1.coeff(c, d).is_zero(), "{conv} ({c},{d})");
                }
            }
        }
    }

    #[test]
    fn box_zero_zero() {
        let sol = solve_system(&CodimWeight::thm19(), 0, 0).unwrap();
        assert_eq!(*sol.n1.coeff(0, 0), Count::from(1));
        assert_eq!(sol.sweeps, 1);
    }

    #[test]
    fn sweep_count_within_bound() {
        for d in [1, 4, 9] {
            let sol = solve_system(&CodimWeight::remark(), 6, d).unwrap();
            assert!(sol.sweeps <= d + 2, "{} sweeps for dmax {d}", sol.sweeps);
        }
    }

    #[test]
    fn closed_and_truncated_sums_agree() {
        let sol = solve_system(&CodimWeight::thm19(), 8, 6).unwrap();
        let t = sol.n2.pow(4).mul(&sol.n3).unwrap().shift(0, 1);
        for conv in CodimWeight::builtins() {
            assert_eq!(
                weighted_power_sum(&conv, &t).unwrap(),
                truncated_power_sum(&conv, &t).unwrap()
            );
        }
    }

    #[test]
    fn conventions_agree_below_codim_four() {
        let a = solve_system(&CodimWeight::thm19(), 6, 6).unwrap();
        let b = solve_system(&CodimWeight::remark(), 6, 6).unwrap();
        let diff = a.n1.diff_cells(&b.n1);
        assert!(diff.iter().all(|&(c, _)| c >= 4), "{diff:?}");
        assert!(!diff.is_empty());
    }

    #[test]
    fn simple_series() {
        let n4 = solve_simple(3, 4).unwrap();
        assert_eq!(*n4.coeff(1, 2), Count::from(4));
        assert!(n4.coeff(2, 3).is_zero());
        let sol = solve_system(&CodimWeight::thm19(), 3, 4).unwrap();
        for d in 0..=4 {
            assert_eq!(n4.coeff(0, d), sol.n1.coeff(0, d));
            for c in 0..=3 {
                assert!(sol.n1.coeff(c, d) >= n4.coeff(c, d));
            }
        }
    }

    #[test]
    fn cache_serves_smaller_boxes() {
        let cache = SolutionCache::new();
        let big = cache.get_or_solve(&CodimWeight::thm19(), 4, 5).unwrap();
        let small = cache.get_or_solve(&CodimWeight::thm19(), 2, 3).unwrap();
        assert!(Arc::ptr_eq(&big, &small));
        let grown = cache.get_or_solve(&CodimWeight::thm19(), 6, 3).unwrap();
        assert_eq!((grown.cmax(), grown.dmax()), (6, 5));
    }

    #[test]
    fn count_configurations_values() {
        let t = CodimWeight::thm19();
        assert_eq!(count_configurations(0, 0, &t).unwrap(), Count::from(1));
        assert_eq!(count_configurations(1, 1, &t).unwrap(), Count::from(0));
        assert_eq!(count_configurations(0, 3, &t).unwrap(), Count::from(22));
    }
}
