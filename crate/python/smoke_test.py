"""Smoke test for the pyorliczlab extension.

Build first:
    cargo build -p orliczlab-py --features extension-module
then run from the repository root:
    python3 python/smoke_test.py
"""

import json
import math
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    for profile in ("release", "debug"):
        lib = os.path.join(ROOT, "target", profile, "libpyorliczlab.so")
        if os.path.exists(lib):
            tmp = tempfile.mkdtemp()
            shutil.copy(lib, os.path.join(tmp, "pyorliczlab.so"))
            sys.path.insert(0, tmp)
            import pyorliczlab

            return pyorliczlab
    sys.exit("build the extension first: cargo build -p orliczlab-py --features extension-module")


def close(a, b, tol=1e-10):
    assert abs(a - b) <= tol * max(1.0, abs(b)), (a, b)


def main():
    ol = load()

    t2 = ol.PhiFunction.power(2.0)
    close(t2(3.0), 9.0)
    assert t2.inverse().inverse() == t2
    assert t2.tilde().tilde() == t2
    close(t2.compose(ol.PhiFunction.power(1.5))(2.0), 8.0)
    assert t2.mo_indices() == (2.0, 2.0)
    assert ol.PhiFunction.from_json(t2.to_json()) == t2

    f = ol.StepFunction.from_intervals([(0.0, 4.0, 3.0)])
    lo, value, hi = ol.luxemburg_norm(t2, f)
    assert lo <= value <= hi
    close(value, 6.0)

    g = ol.StepFunction([(1.0, 1.0), (2.0, 5.0)])
    assert g.rearrange().cells() == [(2.0, 5.0), (1.0, 1.0)]
    assert g.dilate(2.0).cells() == [(0.5, 1.0), (1.0, 5.0)]
    close(g.distribution(2.0), 2.0)

    t1 = ol.PhiFunction.power(1.0)
    close(ol.orlicz_lorentz_norm(t1, t1, ol.StepFunction.indicator(5.0))[1], 5.0)
    close(ol.hardy_norm(t2, t2, ol.StepFunction.indicator(1.0), tol=1e-13)[1], math.sqrt(2.0))
    try:
        ol.hardy_norm(t1, t2, ol.StepFunction.indicator(1.0))
        raise AssertionError("expected divergence")
    except ArithmeticError:
        pass

    close(ol.solve_block_scale(1.0, 1.0, 2), (1.0 + math.sqrt(5.0)) / 2.0, 1e-12)
    assert ol.zippin_indices(t2, ol.PhiFunction.power(3.0)) == ((2.0, 2.0), (2.0, 2.0))

    G, report = ol.counterexample(1.0, 2.0, 3)
    assert json.loads(report)["all_ok"]
    assert G.mo_indices()[0] <= 1.0 + 1e-9

    try:
        ol.PhiFunction.from_json('{"kind":"cube"}')
        raise AssertionError("expected ValueError")
    except ValueError:
        pass

    print("pyorliczlab smoke test passed")


if __name__ == "__main__":
    main()
