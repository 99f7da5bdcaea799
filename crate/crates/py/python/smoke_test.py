"""Smoke test for the exgamble extension module.

Build the module first, e.g. with `maturin develop` in crates/py, or
`cargo build -p exgamble-py --release --features extension-module` and copy
the shared library next to this file as exgamble.so.
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import exgamble as eg  # noqa: E402

RHO_BOS = [[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]]
RHO_FERM = [[0, 0, 0, 0], [0, 0.5, -0.5, 0], [0, -0.5, 0.5, 0], [0, 0, 0, 0]]


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    sym = eg.symmetrizer(2, 2, "sym")
    assert close(sym, [[1, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 1]])
    swap = eg.permutation_operator([1, 0], 2)
    assert close(swap, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])

    bos = eg.DensityMatrix(2, 2, RHO_BOS)
    ferm = eg.DensityMatrix(2, 2, RHO_FERM)
    assert eg.is_exchangeable_density(bos, "sym", 1e-10)
    assert not eg.is_exchangeable_density(bos, "anti", 1e-10)
    assert eg.is_exchangeable_density(ferm, "anti", 1e-10)

    g = eg.Gamble(2, 2, RHO_BOS)
    assert abs(g.evaluate([[1, 0], [1, 0]]) - 0.5) < 1e-15
    assert abs(bos.expectation(g) - 1.0) < 1e-15
    assert g.exchange_projection("sym").is_physical_observable("sym", 1e-12)

    # One qubit: accepting σ_z - 0.5 and -σ_z - 0.5 is a sure loss.
    up = eg.Gamble(2, 1, [[0.5, 0], [0, -1.5]])
    down = eg.Gamble(2, 1, [[-1.5, 0], [0, 0.5]])
    assert eg.credal_feasible(eg.AssessmentSet(2, 1, [up]))["status"] == "feasible"
    res = eg.credal_feasible(eg.AssessmentSet(2, 1, [up, down]))
    assert res["status"] == "infeasible" and res["multipliers"] is not None
    assert eg.in_natural_extension(eg.Gamble(2, 1, [[1, 0], [0, -0.2]]), eg.AssessmentSet(2, 1, [up])) == "yes"

    meas = eg.Measurement.binary(2, 2, 1, [[1, 0], [0, 0]])
    assert abs(eg.outcome_probability(ferm, meas, 0) - 0.5) < 1e-15
    post = eg.condition_density(ferm, meas, 0)
    assert close(post.matrix, [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    excluded = eg.DensityMatrix(2, 2, [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
    try:
        eg.condition_density(excluded, meas, 0)
    except RuntimeError:
        pass
    else:
        raise AssertionError("conditioning on an impossible outcome succeeded")

    assert abs(eg.ppt_min_eigenvalue(bos) + 0.5) < 1e-10
    assert eg.separability_ppt(ferm) == "entangled"

    dec = eg.projected_mixture_decomposition(ferm, "anti", 50, 7)
    assert dec is not None and dec["residual"] < 1e-8
    assert math.isclose(sum(w for w, _ in dec["atoms"]), 1.0)
    wit = eg.dutch_book_witness_search(bos, None)
    assert wit is not None and wit["estimated_max"] < -0.05 and wit["trace_value"] >= 0.35
    assert eg.dutch_book_witness_search(bos, "sym") is None

    try:
        eg.DensityMatrix(2, 2, [[1.5, 0, 0, 0], [0, -0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    except ValueError:
        pass
    else:
        raise AssertionError("indefinite density accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
