"""Smoke test for the gl3sub extension.

Uses an installed `gl3sub` if there is one, otherwise the newest library built by
`cargo build -p gl3-subconvex-py --features extension-module`.
"""

import importlib.util
import math
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import gl3sub

        return gl3sub
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    libs = [root / "target" / p / "libgl3sub.so" for p in ("release", "debug")]
    libs = sorted((l for l in libs if l.exists()), key=lambda l: l.stat().st_mtime, reverse=True)
    if libs:
        tmp = pathlib.Path(tempfile.mkdtemp()) / "gl3sub.so"
        shutil.copy(libs[0], tmp)
        spec = importlib.util.spec_from_file_location("gl3sub", tmp)
        mod = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(mod)
        return mod
    sys.exit("gl3sub not found: build it with cargo or maturin first")


def main():
    g = load()

    for n in range(-5, 6):
        assert abs(g.delta_eval(n, 3.0) - (n == 0)) < 1e-12

    assert g.kloosterman(1, 1, 7) <= g.weil_bound(1, 1, 7)
    c, bound = g.char_sum(1, 1, 5, 7, 0)
    assert abs(c) < 1e-9 and bound == 35.0

    f = g.GL3Form()
    assert f.coeff(1, 12) == g.divisor_d3(12)
    h = g.GL3Form((0.2, -0.05, -0.15))
    p = 7
    assert abs(h.coeff(1, p) ** 2 - h.coeff(1, p * p) - h.coeff(p, 1)) < 1e-12

    lhs, rhs = g.voronoi_check(4, 1)
    assert abs(lhs - rhs) < 1e-5 * abs(lhs), (lhs, rhs)

    lhs, rhs = g.poisson_m_check(3, 4, 0.3, 30.0, 2.0, 100.0)
    assert abs(lhs - rhs) < 1e-6 * abs(lhs)

    assert abs(g.conductor_lowering_kernel(100000, 1000, 20.0)) < 1e-6

    e = g.exponent_summary()
    assert (e["K_opt"], e["bound"], e["theorem"]) == ("3/8", "11/32", "23/32"), e

    z = g.zeta_cubed(2.0)
    assert math.isfinite(abs(z))

    code, csv, summary = g.run("delta", {"n-range": "-3..3", "Q": 2})
    assert code == 0 and csv.startswith("n,value,abs_err\n") and summary.startswith("PASS")

    try:
        g.run("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown command accepted")

    print("gl3sub smoke test: ok")


if __name__ == "__main__":
    main()
