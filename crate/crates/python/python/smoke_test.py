import json
import math

import xmon_fsim_py as xf


def test_bessel():
    assert abs(xf.bessel_j1(1.0) - 0.4400505857449335) < 1e-12


def test_fsim_entries():
    m = xf.fsim(math.pi / 2, 1.0)
    assert abs(m[3][3] - complex(math.cos(1.0), math.sin(1.0))) < 1e-12
    assert abs(m[1][2] + 1j) < 1e-12


def test_synthesize_and_fidelity():
    plan = xf.synthesize("nngqc")
    assert json.loads(plan)["scheme"] == "parallel-fSim-NNGQC"
    mean, se = xf.average_fidelity(plan, "grid:30")
    assert 0.999 < mean <= 1.0
    assert se is None
    _, se_mc = xf.average_fidelity(plan, "mc:200", seed=3)
    assert se_mc > 0.0
    rows = xf.population_trace(plan, "10+11", 11)
    assert len(rows) == 11


def test_bad_scheme_raises():
    try:
        xf.synthesize("bogus")
    except ValueError:
        return
    raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
    print("smoke ok")
