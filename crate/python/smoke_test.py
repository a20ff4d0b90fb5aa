"""Build the `acampo` extension module and exercise it from Python.

    python3 python/smoke_test.py            # cargo build, then test
    python3 python/smoke_test.py --lib PATH  # test an already-built library
"""

import argparse
import importlib.util
import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build() -> pathlib.Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "acampo-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    suffix = {"darwin": "dylib", "win32": "dll"}.get(sys.platform, "so")
    prefix = "" if sys.platform == "win32" else "lib"
    return ROOT / "target" / "release" / f"{prefix}acampo.{suffix}"


def load(lib: pathlib.Path, workdir: pathlib.Path):
    target = workdir / ("acampo" + sysconfig.get_config_var("EXT_SUFFIX"))
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("acampo", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def check(acampo) -> None:
    assert [acampo.count(0, d) for d in range(5)] == [1, 1, 4, 22, 140]
    assert acampo.count(1, 2) == 4
    assert acampo.count(4, 2) == 0
    assert acampo.count(4, 4, "thm19") != acampo.count(4, 4, "remark")
    assert acampo.algorithm1_count(4, 4) == acampo.count(4, 4, "thm19")
    assert acampo.simple_count(1, 30) == acampo.codim1_count(30)

    n1, n2, n3 = acampo.solve(3, 4)
    assert (n1 * n3 - n2).is_zero()

    t = acampo.table(1, 3)
    assert t.to_csv().splitlines() == ["c\\d,0,1,2,3", "0,1,1,4,22", "1,0,0,4,48"]

    assert len(acampo.enumerate_flat(3)) == 22
    assert abs(acampo.growth_constant() - 25.327) <= 0.001

    ledger = acampo.route_ledger()
    assert ledger["algorithm1_realizes"] == ["thm19"]
    assert ledger["remark_series_tail"] == [11]

    reports = acampo.verify(scale="quick")
    failed = [r["check"] for r in reports if r["mandatory"] and r["status"] == "fail"]
    assert not failed, failed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lib", type=pathlib.Path, help="prebuilt extension library")
    args = parser.parse_args()
    lib = args.lib or build()
    with tempfile.TemporaryDirectory() as tmp:
        acampo = load(lib, pathlib.Path(tmp))
        check(acampo)
    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
