use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(acampo::acampo)(py);
        let globals = PyDict::new(py);
        globals.set_item("acampo", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn counts_are_python_ints() {
    run(c"
assert acampo.count(0, 3) == 22
assert acampo.count(4, 4, 'thm19') == 80
assert acampo.count(4, 4, acampo.Weight.remark()) == 84
assert acampo.algorithm1_count(1, 3) == 48
assert acampo.flat_count(30) == acampo.count(0, 30)
big = acampo.count(0, 60)
assert isinstance(big, int) and big > 2**64
");
}

#[test]
fn series_arithmetic() {
    run(c"
S = acampo.Series
a = S(2, 2, [(0, 0, 1), (1, 1, 1)])
sq = a * a
assert sq.coeff(2, 2) == 1 and sq.coeff(1, 1) == 2
assert (a - a).is_zero()
assert (a * a.invert()) == S.one(2, 2)
assert (a ** 0) == S.one(2, 2)
assert a.shift(3, 0).is_zero()
try:
    a + S(1, 2)
    raise AssertionError('box mismatch accepted')
except ValueError:
    pass
");
}

#[test]
fn tables_and_weights() {
    run(c"
t = acampo.table(1, 3)
assert t.values == [[1, 1, 4, 22], [0, 0, 4, 48]]
assert t.route == 'solver' and t.convention == 'thm19'
assert acampo.Table.from_json(t.to_json()).values == t.values
assert t.disagreements(acampo.algorithm1_table(1, 3)) == []
w = acampo.Weight.thm19()
assert [w.weight(k) for k in (1, 2, 3)] == [1, 3, 5]
assert [acampo.Weight.remark().weight(k) for k in (1, 2, 3)] == [1, 3, 4]
assert acampo.Weight.named('remark') == acampo.Weight.remark()
try:
    acampo.Weight.named('other')
    raise AssertionError
except ValueError:
    pass
");
}

#[test]
fn oracle_and_checks() {
    run(c"
ds = acampo.enumerate_flat(2)
assert len(ds) == 4
ok, violations = acampo.validate_diagram(ds[0])
assert ok and violations == []
bad = dict(ds[0], crossings=[])
ok, violations = acampo.validate_diagram(bad)
assert not ok and violations
[r] = acampo.verify('growth-constant')
assert r['status'] == 'pass'
assert abs(acampo.growth_constant() - 25.327) <= 0.001
cv = acampo.cross_validate(6, 8)
assert cv['realized_by_algorithm1'] == ['thm19']
assert 0.8 <= acampo.estimate_ratio(1, 200) <= 1.2
assert 'route-ledger' in acampo.CHECKS
");
}
