//! Closed formulas for flat, codimension-one and simple configurations, the
//! Fuss–Catalan convolution, and the large-degree estimate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::series::Count;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("multinomial parts sum to {sum}, expected {n}")]
    PartsMismatch { n: u64, sum: u64 },
    #[error("{what}: {numerator} is not divisible by {denominator}")]
    NotDivisible {
        what: &'static str,
        numerator: Count,
        denominator: Count,
    },
    #[error("fuss_convolution needs at least one part")]
    NoParts,
}

pub fn binomial(n: u64, k: u64) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `n! / (k_1! ... k_m!)`, requiring `sum k_i = n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<Count, ClosedFormError> {
    let sum: u64 = parts.iter().sum();
    if sum != n {
        return Err(ClosedFormError::PartsMismatch { n, sum });
    }
    let mut acc = Count::one();
    let mut remaining = n;
    for &k in parts {
        acc *= binomial(remaining, k);
        remaining -= k;
    }
    Ok(acc)
}

fn exact_div(what: &'static str, num: Count, den: Count) -> Result<Count, ClosedFormError> {
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(ClosedFormError::NotDivisible {
            what,
            numerator: num,
            denominator: den,
        });
    }
    Ok(q)
}

/// Simple configurations: `[d >= 2c] 4^c / (c + 3d + 1) * (4d)! / (c! (d-2c)! (c+3d)!)`.
pub fn simple_count(c: u64, d: u64) -> Result<Count, ClosedFormError> {
    if d < 2 * c {
        return Ok(Count::zero());
    }
    let m = multinomial(4 * d, &[c, d - 2 * c, c + 3 * d])?;
    let num = BigInt::from(4u32).pow(c as u32) * m;
    exact_div("simple_count", num, Count::from(c + 3 * d + 1))
}

/// Flat configurations: `C(4d+1, d) / (4d+1)`.
pub fn flat_count(d: u64) -> Count {
    exact_div("flat_count", binomial(4 * d + 1, d), Count::from(4 * d + 1))
        .expect("Fuss–Catalan numbers are integral")
}

/// Codimension-one configurations: `[d >= 2] 4 C(4d, d-2)`.
pub fn codim1_count(d: u64) -> Count {
    if d < 2 {
        return Count::zero();
    }
    binomial(4 * d, d - 2) * 4u32
}

/// `sum_{d_1+...+d_a = b} prod flat_count(d_i) = a/(4b+a) C(4b+a, b)`.
pub fn fuss_convolution(a: u64, b: u64) -> Result<Count, ClosedFormError> {
    if a == 0 {
        return Err(ClosedFormError::NoParts);
    }
    let num = binomial(4 * b + a, b) * a;
    exact_div("fuss_convolution", num, Count::from(4 * b + a))
}

/// The same sum evaluated by enumerating every composition of `b` into `a` parts.
pub fn convolution_by_enumeration(a: u64, b: u64) -> Count {
    fn go(parts: u64, rest: u64, flat: &[Count]) -> Count {
        if parts == 0 {
            return if rest == 0 {
                Count::one()
            } else {
                Count::zero()
            };
        }
        (0..=rest)
            .map(|d| &flat[d as usize] * go(parts - 1, rest - d, flat))
            .sum()
    }
    let flat: Vec<Count> = (0..=b).map(flat_count).collect();
    go(a, b, &flat)
}

/// Natural log of a positive count, valid far beyond the `f64` range.
pub fn ln_count(v: &Count) -> f64 {
    assert!(v > &Count::zero(), "logarithm of a nonpositive count");
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: Count = v >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln` of `sqrt(2/(27 pi)) * base^c * (256/27)^d * d^(c - 3/2) / c!`.
fn ln_estimate(c: u64, d: u64, ln_base: f64) -> f64 {
    assert!(d >= 1, "estimate defined for d >= 1");
    let (cf, df) = (c as f64, d as f64);
    0.5 * (2.0 / (27.0 * std::f64::consts::PI)).ln()
        + cf * ln_base
        + df * (256.0f64 / 27.0).ln()
        + (cf - 1.5) * df.ln()
        - ln_gamma(cf + 1.0)
}

/// Log of the large-degree estimate of `#N4(c, d)` (and of `#N1(c, d)`), with
/// codimension base `4/3`.
pub fn ln_asymptotic_estimate(c: u64, d: u64) -> f64 {
    ln_estimate(c, d, (4.0f64 / 3.0).ln())
}

pub fn asymptotic_estimate(c: u64, d: u64) -> f64 {
    ln_asymptotic_estimate(c, d).exp()
}

/// The estimate with codimension base `4e/3` instead of `4/3`.
/// It exceeds [`ln_asymptotic_estimate`] by exactly `c` in log space.
pub fn ln_asymptotic_estimate_4e_over_3(c: u64, d: u64) -> f64 {
    ln_estimate(c, d, (4.0 * std::f64::consts::E / 3.0).ln())
}

/// `exact / estimate`, computed in log space.
pub fn estimate_ratio(exact: &Count, ln_estimate: f64) -> f64 {
    (ln_count(exact) - ln_estimate).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(0, 0), Count::one());
        assert_eq!(binomial(5, 7), Count::zero());
        assert_eq!(binomial(9, 2), Count::from(36));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn multinomial_checks_parts() {
        assert_eq!(multinomial(8, &[1, 0, 7]).unwrap(), Count::from(8));
        assert_eq!(
            multinomial(8, &[1, 1, 1]),
            Err(ClosedFormError::PartsMismatch { n: 8, sum: 3 })
        );
    }

    #[test]
    fn flat_and_codim1_rows() {
        let flat: Vec<Count> = (0..=4).map(flat_count).collect();
        assert_eq!(flat, [1, 1, 4, 22, 140].map(Count::from));
        let c1: Vec<Count> = (0..=4).map(codim1_count).collect();
        assert_eq!(c1, [0, 0, 4, 48, 480].map(Count::from));
    }

    #[test]
    fn simple_count_values() {
        for d in 0..=6 {
            assert_eq!(simple_count(0, d).unwrap(), flat_count(d));
            assert_eq!(simple_count(1, d).unwrap(), codim1_count(d));
        }
        assert_eq!(simple_count(1, 2).unwrap(), Count::from(4));
        assert_eq!(simple_count(3, 5).unwrap(), Count::zero());
    }

    #[test]
    fn fuss_convolution_small() {
        assert_eq!(fuss_convolution(2, 2).unwrap(), Count::from(9));
        assert_eq!(convolution_by_enumeration(2, 2), Count::from(9));
        for b in 0..=6 {
            assert_eq!(fuss_convolution(1, b).unwrap(), flat_count(b));
        }
        for a in 1..=5 {
            assert_eq!(fuss_convolution(a, 0).unwrap(), Count::one());
        }
        assert_eq!(fuss_convolution(0, 3), Err(ClosedFormError::NoParts));
    }

    #[test]
    fn fuss_convolution_matches_brute_force() {
        for a in 1..=5 {
            for b in 0..=10 {
                assert_eq!(
                    fuss_convolution(a, b).unwrap(),
                    convolution_by_enumeration(a, b),
                    "({a},{b})"
                );
            }
        }
    }

    #[test]
    fn estimate_ratio_in_degree() {
        for d in [1u64, 5, 50] {
            let r = asymptotic_estimate(0, d + 1) / asymptotic_estimate(0, d);
            let expect = 256.0 / 27.0 * ((d + 1) as f64 / d as f64).powf(-1.5);
            assert!((r / expect - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn estimate_matches_exact_rows() {
        let r0 = estimate_ratio(&flat_count(200), ln_asymptotic_estimate(0, 200));
        let r1 = estimate_ratio(&codim1_count(200), ln_asymptotic_estimate(1, 200));
        assert!((0.9..=1.1).contains(&r0), "{r0}");
        assert!((0.9..=1.1).contains(&r1), "{r1}");
    }

    #[test]
    fn base_4e_over_3_differs_by_e_to_the_c() {
        for c in 0..4 {
            let gap = ln_asymptotic_estimate_4e_over_3(c, 100) - ln_asymptotic_estimate(c, 100);
            assert!((gap - c as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn ln_count_large() {
        let v = BigInt::from(3u32).pow(5000);
        assert!((ln_count(&v) - 5000.0 * 3f64.ln()).abs() < 1e-6);
    }
}
