//! Exact enumeration of A'Campo forest configurations by codimension and degree.
//!
//! Four independent routes produce the counts `#N1(c, d)`:
//!
//! * [`solver`]: fixed-point solution of the generating-function system as
//!   truncated bivariate series ([`series`]), under a pluggable
//!   [`weight::CodimWeight`];
//! * [`algorithm`]: an eight-term dynamic program over powers of the
//!   partial-configuration series;
//! * [`closed_form`]: multinomial formulas for flat, codimension-one and simple
//!   configurations;
//! * [`oracle`]: brute-force enumeration of flat chord diagrams.
//!
//! [`verify`] checks the explicit minimal polynomial, the row-sum polynomial and
//! the growth constant against computed series.

pub mod algorithm;
pub mod closed_form;
pub mod ledger;
pub mod oracle;
pub mod report;
pub mod series;
pub mod solver;
pub mod suite;
pub mod table;
pub mod verify;
pub mod weight;

pub use series::{BiSeries, Count, SeriesError};
pub use solver::{count_configurations, solve_simple, solve_system, SolverError, SystemSolution};
pub use table::{CountTable, Family, Route};
pub use weight::CodimWeight;
