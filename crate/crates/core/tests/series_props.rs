use acampo_core::{BiSeries, Count};
use proptest::prelude::*;

const C: usize = 3;
const D: usize = 4;

fn series() -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(-20i64..=20, (C + 1) * (D + 1)).prop_map(|v| {
        BiSeries::from_terms(
            C,
            D,
            v.into_iter()
                .enumerate()
                .map(|(i, x)| (i % (C + 1), i / (C + 1), x)),
        )
    })
}

fn unit_series() -> impl Strategy<Value = BiSeries> {
    (series(), prop::bool::ANY).prop_map(|(mut s, neg)| {
        s.set(0, 0, Count::from(if neg { -1 } else { 1 }));
        s
    })
}

/// Product computed naively on a box big enough to hold every term, then cut down.
fn untruncated_product(a: &BiSeries, b: &BiSeries) -> BiSeries {
    let mut out = BiSeries::zero(2 * C, 2 * D);
    for (c1, d1, x) in a.nonzero_terms() {
        for (c2, d2, y) in b.nonzero_terms() {
            let v = out.get(c1 + c2, d1 + d2) + x * y;
            out.set(c1 + c2, d1 + d2, v);
        }
    }
    out.resized(C, D)
}

proptest! {
    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&BiSeries::one(C, D)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.add(&a.neg()).unwrap(), BiSeries::zero(C, D));
    }

    #[test]
    fn truncation_is_exact(a in series(), b in series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), untruncated_product(&a, &b));
    }

    #[test]
    fn inverse_roundtrip(a in unit_series()) {
        let inv = a.invert().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), BiSeries::one(C, D));
        prop_assert_eq!(inv.invert().unwrap(), a);
    }

    #[test]
    fn pow_is_repeated_product(a in series(), e in 0u32..5) {
        let mut acc = BiSeries::one(C, D);
        for _ in 0..e {
            acc = acc.mul(&a).unwrap();
        }
        prop_assert_eq!(a.pow(e), acc);
    }

    #[test]
    fn shift_is_monomial_product(a in series(), dc in 0usize..5, dd in 0usize..6) {
        let m = BiSeries::monomial(C, D, dc, dd, 1);
        prop_assert_eq!(a.shift(dc, dd), a.mul(&m).unwrap());
    }
}
