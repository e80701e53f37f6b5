#!/usr/bin/env python3
"""Smoke test for the `biquad` Python extension.

Builds nothing itself: run `cargo build -p biquad-py` (or `--release`)
first. The script locates the compiled cdylib under target/, stages it as
an importable module, and exercises the main surface end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libbiquad.so", "biquad.so", "libbiquad.dylib")
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit("no compiled extension found; run `cargo build -p biquad-py` first")
    newest = max(built, key=lambda p: p.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="biquad-smoke-"))
    shutil.copy2(newest, stage / "biquad.so")
    return stage


CHECKS = []


def check(name):
    def wrap(fn):
        CHECKS.append((name, fn))
        return fn

    return wrap


def reference_tensor(biquad):
    a = biquad.BiquadraticTensor(2, 2)
    a.set(0, 0, 0, 0, 1.0)
    a.set(1, 1, 1, 1, 2.0)
    a.set(0, 1, 0, 1, 3.0)
    for idx in [(0, 0, 1, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 1, 0, 0)]:
        a.set(*idx, 1.0)
    return a


LAMBDA_MAX = (3.0 + math.sqrt(10.0)) / 2.0


@check("form evaluation and contractions")
def _(biquad):
    a = reference_tensor(biquad)
    assert a.eval([1, 0], [0, 1]) == 3.0
    assert a.contract_g([1, 0], [0, 1]) == [3.0, 0.0]
    assert a.contract_h([1, 0], [0, 1]) == [0.0, 3.0]
    assert a.is_weakly_symmetric()
    assert a.is_nonnegative()


@check("eigenpair verification and classification")
def _(biquad):
    a = reference_tensor(biquad)
    ok, residual = biquad.check_m_eigenpair(a, 3.0, [1, 0], [0, 1], tol=1e-10)
    assert ok and residual < 1e-14
    ok, _ = biquad.check_m_eigenpair(a, 2.5, [1, 0], [0, 1], tol=1e-10)
    assert not ok
    assert biquad.classify_eigenpair(a, 3.0, [1, 0], [0, 1]) == "M0"


@check("largest eigenvalue solve")
def _(biquad):
    a = reference_tensor(biquad)
    out = biquad.solve_lambda_max(a, seed=1)
    assert abs(out["lambda"] - LAMBDA_MAX) < 1e-8, out["lambda"]
    assert out["converged"]
    assert out["class"] == "M++"
    assert min(out["x"] + out["y"]) > 0.3
    assert abs(out["lower_bound"] - out["lambda"]) < 1e-8


@check("exhaustive enumeration")
def _(biquad):
    a = reference_tensor(biquad)
    pairs = biquad.enumerate_m_eigenpairs(a)
    lambdas = [p["lambda"] for p in pairs]
    expected = [(3.0 - math.sqrt(10.0)) / 2.0, 0.0, 1.0, 2.0, 3.0, LAMBDA_MAX]
    assert len(lambdas) == len(expected), lambdas
    for got, want in zip(lambdas, expected):
        assert abs(got - want) < 1e-9
    classes = [p["class"] for p in pairs]
    assert classes == ["M", "M0", "M0", "M0", "M0", "M++"]
    assert sum(p["is_m_plus"] for p in pairs) == 5


@check("collatz bounds and max-min estimate")
def _(biquad):
    a = reference_tensor(biquad)
    v, u = biquad.collatz_bounds(a, [1, 0], [0, 1])
    assert v == u == 3.0
    rho = biquad.estimate_rho_star(a, samples=200, seed=3)
    assert abs(rho - LAMBDA_MAX) < 1e-8
    assert biquad.estimate_rho_lower(a, samples=200, seed=3) <= rho + 1e-12


@check("structure report")
def _(biquad):
    a = reference_tensor(biquad)
    r = biquad.structure_report(a)
    assert r["x_reducible"] and r["x_witness"] == {"fixed": 0, "block": [0]}
    assert r["y_reducible"]
    assert not r["x_quasi_reducible"] and not r["y_quasi_reducible"]
    assert r["quasi_irreducible"] and not r["irreducible"]


@check("graph constructions and separability")
def _(biquad):
    g = biquad.BipartiteTwoGraph(2, 2)
    g.add_edge(0, 1, 0, 1)
    assert not g.is_bi_separable()
    a = g.adjacency()
    assert a.is_symmetric() and a.get(0, 0, 1, 1) == 1.0
    report = g.separability_report()
    assert not report["bi_separable"]

    wide = biquad.BipartiteTwoGraph(3, 2)
    wide.add_edge(0, 1, 0, 1)
    report = wide.separability_report()
    assert report["t_separable"] and report["t_witness"]["block"] == [2]


@check("laplacians are PSD-consistent")
def _(biquad):
    g = biquad.BipartiteTwoGraph.from_edge_list("3 3\n1 2 1 2\n2 3 2 3 0.5\n1 3 1 3 2.0\n")
    for tensor in (g.laplacian(), g.signless_laplacian()):
        probe = biquad.min_m_eigenvalue_probe(tensor, restarts=8, seed=4)
        assert probe["value"] >= -1e-9, probe


@check("document round trip")
def _(biquad):
    a = reference_tensor(biquad)
    text = a.to_document(name="smoke")
    b = biquad.BiquadraticTensor.from_document(text)
    assert b.m == 2 and b.n == 2
    assert b.get(0, 1, 0, 1) == 3.0
    assert b.to_document(name="smoke") == text


def main():
    sys.path.insert(0, str(stage_module()))
    import biquad

    print(f"biquad {biquad.__version__} loaded")
    failures = 0
    for name, fn in CHECKS:
        try:
            fn(biquad)
            print(f"[PASS] {name}")
        except AssertionError as exc:
            failures += 1
            print(f"[FAIL] {name}: {exc}")
    if failures:
        sys.exit(f"{failures} smoke check(s) failed")
    print(f"all {len(CHECKS)} smoke checks passed")


if __name__ == "__main__":
    main()
