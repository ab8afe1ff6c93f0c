"""Smoke test for the pygenosc extension module.

Builds the extension with cargo if needed, imports it from a scratch
directory and exercises the main entry points.

    python3 python/smoke_test.py
"""

import json
import math
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    lib = os.environ.get("PYGENOSC_LIB")
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "genosc-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
        lib = ROOT / "target" / "release" / "libpygenosc.so"
    scratch = tempfile.mkdtemp(prefix="pygenosc-")
    shutil.copy(lib, Path(scratch) / "pygenosc.so")
    sys.path.insert(0, scratch)
    import pygenosc

    return pygenosc


def main():
    g = load()

    p = g.SystemParams(1.0, [0.5, 0.5], ["+", "+"])
    assert p.dim == 2 and p.signs == ["+", "+"]
    assert [p.energy(n) for n in range(3)] == [3.0, 5.0, 7.0]
    assert [p.degeneracy(n) for n in range(3)] == [1, 2, 3]

    try:
        g.SystemParams(1.0, [0.7], ["-"])
    except ValueError as e:
        assert "branch rule" in str(e)
    else:
        raise AssertionError("k > 1/2 on the minus branch must be rejected")

    q = g.SystemParams(1.3, [0.3, 0.7])
    w = g.w_matrix(q, 4)
    for i in range(5):
        for j in range(5):
            dot = sum(w[r][i] * w[r][j] for r in range(5))
            assert abs(dot - (i == j)) < 1e-10
    assert w == g.w_matrix(q, 4, "cgc")
    hyp = g.w_matrix(q, 4, "hypergeometric")
    assert max(abs(a - b) for ra, rb in zip(w, hyp) for a, b in zip(ra, rb)) < 1e-10

    pts = [[0.4, 0.9], [1.2, 0.3]]
    direct = g.psi(q, "cartesian", [1, 3], pts)
    summed = g.expand(q, "cartesian", [1, 3], "polar", pts)
    assert all(abs(a - b) < 1e-8 for a, b in zip(direct, summed))

    one_d = g.SystemParams(1.0, [0.5])
    assert math.isclose(g.psi(one_d, "cartesian", [0], [[1.0]])[0], 0.6442883651134751, rel_tol=1e-13)

    s = g.SystemParams(1.0, [0.3, 0.7, 0.2], ["+", "+", "-"])
    table = g.c_table(s, 2)
    assert all(len(row) == 6 for row in table)
    v = g.v_matrix(s, 2, 1)
    assert len(v) == 3

    for name, r in g.quadratic_algebra(q, 6):
        assert r < 1e-9, (name, r)

    report = json.loads(g.run_suite("routes", seed=42, draws=3))
    assert report["pass"] and report["suite"] == "routes"

    print("pygenosc smoke test passed")


if __name__ == "__main__":
    main()
