use acampo_core::algorithm::{algorithm1_count, algorithm1_table, cross_validate};
use acampo_core::closed_form::{codim1_count, flat_count, simple_count};
use acampo_core::oracle::{enumerate_flat, validate_diagram};
use acampo_core::table::{CountTable, Family};
use acampo_core::{count_configurations, solve_simple, CodimWeight, Count};

/// `#N1(c, d)` for `c <= 4`, `d <= 6`; both conventions coincide here.
const REFERENCE: [[u64; 7]; 5] = [
    [1, 1, 4, 22, 140, 969, 7084],
    [0, 0, 4, 48, 480, 4560, 42504],
    [0, 0, 0, 30, 608, 8740, 109296],
    [0, 0, 0, 4, 344, 8760, 157504],
    [0, 0, 0, 0, 80, 4845, 138792],
];

#[test]
fn reference_table_all_routes() {
    let dp = algorithm1_table(4, 6).unwrap();
    for (c, row) in REFERENCE.iter().enumerate() {
        for (d, &v) in row.iter().enumerate() {
            let v = Count::from(v);
            assert_eq!(dp.get(c, d), &v, "algorithm1 ({c},{d})");
            if c < 4 {
                for conv in CodimWeight::builtins() {
                    assert_eq!(
                        count_configurations(c, d, &conv).unwrap(),
                        v,
                        "{conv} ({c},{d})"
                    );
                }
            }
        }
    }
    assert_eq!(
        count_configurations(4, 4, &CodimWeight::thm19()).unwrap(),
        Count::from(REFERENCE[4][4])
    );
}

#[test]
fn conventions_split_at_codimension_four() {
    let a = count_configurations(4, 4, &CodimWeight::thm19()).unwrap();
    let b = count_configurations(4, 4, &CodimWeight::remark()).unwrap();
    assert_ne!(a, b);
}

#[test]
fn algorithm1_realizes_thm19_convention() {
    let cv = cross_validate(6, 10).unwrap();
    assert_eq!(cv.realized_by_algorithm1, vec!["thm19".to_string()]);
    let remark = cv
        .conventions
        .iter()
        .find(|c| c.convention == "remark")
        .unwrap();
    assert!(remark.disagreeing_cells.iter().all(|&(c, _)| c >= 4));
}

#[test]
fn closed_forms_agree_with_solver_rows() {
    let conv = CodimWeight::thm19();
    for d in 0..=15 {
        assert_eq!(
            count_configurations(0, d, &conv).unwrap(),
            flat_count(d as u64)
        );
        assert_eq!(
            count_configurations(1, d, &conv).unwrap(),
            codim1_count(d as u64)
        );
    }
}

#[test]
fn simple_series_matches_formula() {
    let s = solve_simple(5, 14).unwrap();
    for c in 0..=5 {
        for d in 0..=14 {
            assert_eq!(
                s.coeff(c, d),
                &simple_count(c as u64, d as u64).unwrap(),
                "({c},{d})"
            );
        }
    }
}

#[test]
fn simple_configurations_are_bounded_by_all() {
    // every simple configuration is a configuration
    let s = solve_simple(4, 8).unwrap();
    let all = algorithm1_table(4, 8).unwrap();
    for c in 0..=4 {
        for d in 0..=8 {
            assert!(s.coeff(c, d) <= all.get(c, d), "({c},{d})");
        }
    }
}

#[test]
fn algorithm1_guard_boundary() {
    for d in 1..=6usize {
        assert_eq!(algorithm1_count(2 * d, d).unwrap(), Count::from(0));
    }
}

#[test]
fn oracle_matches_formula() {
    for d in 0..=3 {
        let all = enumerate_flat(d).unwrap();
        assert_eq!(Count::from(all.len()), flat_count(d as u64));
        assert!(all.iter().all(|g| validate_diagram(g).valid));
    }
}

#[test]
fn oracle_degree_four() {
    let all = enumerate_flat(4).unwrap();
    assert_eq!(all.len(), 140);
    assert_eq!(Count::from(all.len()), flat_count(4));
}

#[test]
fn table_encodings_roundtrip() {
    let t = algorithm1_table(3, 9).unwrap();
    let back = CountTable::from_json(&t.to_json()).unwrap();
    assert_eq!(back, t);
    let csv = t.to_csv();
    assert!(csv.starts_with("c\\d,0,1,2"));
    let from_csv = CountTable::from_csv(&csv, Family::N1, None, t.route).unwrap();
    assert_eq!(from_csv.values, t.values);
}
