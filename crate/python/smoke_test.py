"""Smoke test for the pycostshare extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""
from fractions import Fraction
from pathlib import Path

import pycostshare as cs

INSTANCES = Path(__file__).resolve().parent.parent / "crates" / "cli" / "instances"


def main():
    tight = cs.Instance.read(str(INSTANCES / "prop_tight_n3_k6.inst"))
    report = cs.evaluate(tight, "sm")
    assert report["social_cost"] == Fraction(107, 10), report
    assert report["optimal_social_cost"] == 6
    assert report["bundles"] == [[], [], []]

    inst = cs.Instance.symmetric(
        [[2, 1], [Fraction(3, 2), 0]],
        [[0, 2, 2, 3], [0, 1, 1, "3/2"]],
    )
    out = cs.run(inst, "iacsm")
    assert all(isinstance(p, Fraction) for p in out["payments"])
    assert out["trace"]["order"] and len(out["trace"]["shares"]) == 2
    rep = cs.evaluate(inst, "iacsm")
    assert rep["budget_ratio"] == 1 and rep["p1"] and rep["final_set"], rep
    assert rep["social_cost"] <= cs.harmonic(2) * rep["optimal_social_cost"]

    cost, optimum = cs.optimal_social_cost(inst)
    assert cost == rep["optimal_social_cost"] and len(optimum) == 2

    alphas = cs.alphas(cs.Instance.generate("vertex-cover:star=4"))
    assert alphas[0]["max_bounded"] == 4, alphas

    assert cs.wgsp_search(inst, "iacsm", 1) is None
    again = cs.Instance.parse(inst.to_text())
    assert again.to_text() == inst.to_text() and again.n == 2 and again.m == 2

    try:
        cs.run(inst, "vcg")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown mechanism accepted")
    print("pycostshare smoke test passed")


if __name__ == "__main__":
    main()
