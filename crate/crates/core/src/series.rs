//! Dense truncated bivariate power series with exact integer coefficients.
//!
//! A [`BiSeries`] stores the coefficients of `x^c y^d` for every `(c, d)` in the
//! box `0..=cmax` x `0..=dmax`. Every series handled by this crate has
//! nonnegative exponents only, so truncating a sum or product to the box never
//! changes a retained coefficient.
//!
//! Binary operations require both operands to share the same box; a mismatch
//! is reported as [`SeriesError::BoxMismatch`] rather than silently truncated.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact counter / coefficient.
pub type Count = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation boxes differ: ({0}, {1}) vs ({2}, {3})")]
    BoxMismatch(usize, usize, usize, usize),
    #[error("constant term {0} is not a unit; inverse would not be integral")]
    NonUnitConstant(BigInt),
}

/// Truncated series in `x` (codimension marker) and `y` (degree marker).
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    cmax: usize,
    dmax: usize,
    // row-major by degree: index = d * (cmax + 1) + c
    coeffs: Vec<Count>,
}

impl BiSeries {
    pub fn zero(cmax: usize, dmax: usize) -> Self {
        BiSeries {
            cmax,
            dmax,
            coeffs: vec![Count::zero(); (cmax + 1) * (dmax + 1)],
        }
    }

    pub fn one(cmax: usize, dmax: usize) -> Self {
        let mut s = Self::zero(cmax, dmax);
        s.coeffs[0] = Count::one();
        s
    }

    /// The monomial `coeff * x^c y^d`, or zero if it falls outside the box.
    pub fn monomial(cmax: usize, dmax: usize, c: usize, d: usize, coeff: impl Into<Count>) -> Self {
        let mut s = Self::zero(cmax, dmax);
        if c <= cmax && d <= dmax {
            s.set(c, d, coeff.into());
        }
        s
    }

    /// Builds a series from `(c, d, coefficient)` triples; terms outside the box are dropped
    /// and repeated exponents accumulate.
    pub fn from_terms<I, T>(cmax: usize, dmax: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
        T: Into<Count>,
    {
        let mut s = Self::zero(cmax, dmax);
        for (c, d, v) in terms {
            if c <= cmax && d <= dmax {
                let i = s.index(c, d);
                s.coeffs[i] += v.into();
            }
        }
        s
    }

    #[inline]
    pub fn cmax(&self) -> usize {
        self.cmax
    }

    #[inline]
    pub fn dmax(&self) -> usize {
        self.dmax
    }

    #[inline]
    fn index(&self, c: usize, d: usize) -> usize {
        d * (self.cmax + 1) + c
    }

    /// Coefficient of `x^c y^d`. Panics outside the box.
    pub fn coeff(&self, c: usize, d: usize) -> &Count {
        assert!(
            c <= self.cmax && d <= self.dmax,
            "coefficient ({c}, {d}) outside box ({}, {})",
            self.cmax,
            self.dmax
        );
        &self.coeffs[self.index(c, d)]
    }

    /// Coefficient lookup that reads zero outside the box.
    pub fn get(&self, c: usize, d: usize) -> Count {
        if c <= self.cmax && d <= self.dmax {
            self.coeffs[self.index(c, d)].clone()
        } else {
            Count::zero()
        }
    }

    pub fn set(&mut self, c: usize, d: usize, value: Count) {
        let i = self.index(c, d);
        self.coeffs[i] = value;
    }

    /// Coefficients of `y^d` as a slice indexed by `c`.
    pub fn row(&self, d: usize) -> &[Count] {
        let w = self.cmax + 1;
        &self.coeffs[d * w..(d + 1) * w]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero coefficients in `(c, d)` order by degree then codimension.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, usize, &Count)> + '_ {
        let w = self.cmax + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (i % w, i / w, v))
    }

    /// First negative coefficient, if any.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        let w = self.cmax + 1;
        self.coeffs
            .iter()
            .position(Signed::is_negative)
            .map(|i| (i % w, i / w))
    }

    fn check_box(&self, other: &BiSeries) -> Result<(), SeriesError> {
        if self.cmax != other.cmax || self.dmax != other.dmax {
            return Err(SeriesError::BoxMismatch(
                self.cmax, self.dmax, other.cmax, other.dmax,
            ));
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &BiSeries) -> Result<BiSeries, SeriesError> {
        self.check_box(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(BiSeries {
            cmax: self.cmax,
            dmax: self.dmax,
            coeffs,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &BiSeries) -> Result<BiSeries, SeriesError> {
        self.check_box(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(BiSeries {
            cmax: self.cmax,
            dmax: self.dmax,
            coeffs,
        })
    }

    pub fn add_assign(&mut self, other: &BiSeries) -> Result<(), SeriesError> {
        self.check_box(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> BiSeries {
        BiSeries {
            cmax: self.cmax,
            dmax: self.dmax,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &Count) -> BiSeries {
        BiSeries {
            cmax: self.cmax,
            dmax: self.dmax,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// Largest `c` with a nonzero coefficient in each row, or `None` for zero rows.
    fn row_extents(&self) -> Vec<Option<usize>> {
        (0..=self.dmax)
            .map(|d| self.row(d).iter().rposition(|v| !v.is_zero()))
            .collect()
    }

    /// Truncated Cauchy product.
    #[allow(clippy::needless_range_loop)]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &BiSeries) -> Result<BiSeries, SeriesError> {
        self.check_box(other)?;
        let (cm, dm) = (self.cmax, self.dmax);
        let w = cm + 1;
        let mut out = BiSeries::zero(cm, dm);
        let ext_b = other.row_extents();
        for d1 in 0..=dm {
            let row_a = self.row(d1);
            for (c1, a) in row_a.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for d2 in 0..=(dm - d1) {
                    let Some(eb) = ext_b[d2] else { continue };
                    let top = eb.min(cm - c1);
                    let row_b = other.row(d2);
                    let base = (d1 + d2) * w + c1;
                    for (c2, b) in row_b[..=top].iter().enumerate() {
                        if !b.is_zero() {
                            out.coeffs[base + c2] += a * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplication by the monomial `x^dc y^dd`.
    pub fn shift(&self, dc: usize, dd: usize) -> BiSeries {
        let mut out = BiSeries::zero(self.cmax, self.dmax);
        if dc > self.cmax || dd > self.dmax {
            return out;
        }
        for d in 0..=(self.dmax - dd) {
            for c in 0..=(self.cmax - dc) {
                let v = &self.coeffs[self.index(c, d)];
                if !v.is_zero() {
                    let i = out.index(c + dc, d + dd);
                    out.coeffs[i] = v.clone();
                }
            }
        }
        out
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, mut e: u32) -> BiSeries {
        let mut acc = BiSeries::one(self.cmax, self.dmax);
        let mut base = self.clone();
        // boxes always match here
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same box");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same box");
            }
        }
        acc
    }

    /// Multiplicative inverse on the box. The constant term must be `+1` or `-1`.
    #[allow(clippy::needless_range_loop)]
    pub fn invert(&self) -> Result<BiSeries, SeriesError> {
        let u = &self.coeffs[0];
        if !(u.is_one() || (-u).is_one()) {
            return Err(SeriesError::NonUnitConstant(u.clone()));
        }
        let (cm, dm) = (self.cmax, self.dmax);
        let mut inv = BiSeries::zero(cm, dm);
        let ext = self.row_extents();
        for d in 0..=dm {
            for c in 0..=cm {
                let mut acc = if c == 0 && d == 0 {
                    Count::one()
                } else {
                    Count::zero()
                };
                for d1 in 0..=d {
                    let Some(e) = ext[d1] else { continue };
                    for c1 in 0..=e.min(c) {
                        if d1 == 0 && c1 == 0 {
                            continue;
                        }
                        let a = &self.coeffs[self.index(c1, d1)];
                        if a.is_zero() {
                            continue;
                        }
                        let b = &inv.coeffs[inv.index(c - c1, d - d1)];
                        if !b.is_zero() {
                            acc -= a * b;
                        }
                    }
                }
                // u = ±1 so u^{-1} = u
                let i = inv.index(c, d);
                inv.coeffs[i] = acc * u;
            }
        }
        Ok(inv)
    }

    /// Copy into a different box, dropping or zero-filling as needed.
    pub fn resized(&self, cmax: usize, dmax: usize) -> BiSeries {
        let mut out = BiSeries::zero(cmax, dmax);
        for d in 0..=self.dmax.min(dmax) {
            for c in 0..=self.cmax.min(cmax) {
                let i = out.index(c, d);
                out.coeffs[i] = self.coeffs[self.index(c, d)].clone();
            }
        }
        out
    }

    /// Substitutes `x = 1`: the univariate series of row sums, as a box `(0, dmax)`.
    pub fn row_sums(&self) -> BiSeries {
        let mut out = BiSeries::zero(0, self.dmax);
        for d in 0..=self.dmax {
            out.coeffs[d] = self.row(d).iter().sum();
        }
        out
    }

    /// Cells where `self` and `other` differ, compared on the common sub-box.
    pub fn diff_cells(&self, other: &BiSeries) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for d in 0..=self.dmax.min(other.dmax) {
            for c in 0..=self.cmax.min(other.cmax) {
                if self.coeff(c, d) != other.coeff(c, d) {
                    cells.push((c, d));
                }
            }
        }
        cells
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries[{}x{}](", self.cmax, self.dmax)?;
        let mut first = true;
        for (c, d, v) in self.nonzero_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{v}*x^{c}*y^{d}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}
