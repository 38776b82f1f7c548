import pytest

from vbass.errors import NotFiniteLengthError
from vbass.exactalg import GradedRing
from vbass.gmod import (
    GradedModule,
    annihilator,
    cyclic_module,
    degree_range,
    direct_sum,
    free_module,
    hilbert_window,
    is_finite_length,
    length,
    matlis_dual_finite_length,
    module_shift,
    prune,
    residue_field,
    torsion_submodule,
)


def dims(M, lo, hi):
    return hilbert_window(M, lo, hi).as_list() if M.rank else [0] * (hi - lo + 1)


def test_homogeneity_enforced(R):
    with pytest.raises(ValueError):
        GradedModule(R, [0], [["x + y^2"]])
    with pytest.raises(ValueError):
        GradedModule(R, [0, 0], [["x", "y^2"]])
    M = GradedModule(R, [0, 1], [["x^2", "y"]])
    assert M.source_twists == (2,)


@pytest.mark.parametrize("gens,expected", [
    (["x^2", "x*y", "y^2"], [1, 2, 0, 0]),
    (["x^2", "y"], [1, 1, 0, 0]),
    (["x*y"], [1, 2, 2, 2]),
    ([], [1, 2, 3, 4]),
])
def test_hilbert_windows(R, gens, expected):
    assert dims(cyclic_module(R, gens), 0, 3) == expected


def test_shift_and_sum(R):
    M = direct_sum(free_module(R, [1]), free_module(R, [0]))
    assert dims(M, 0, 3) == [1, 3, 5, 7]
    assert dims(module_shift(residue_field(R), 2), 0, 3) == [0, 0, 1, 0]


def test_json_round_trip(R):
    M = GradedModule(R, [0, 1], [["x^2", "y"], ["x*y", "x"]])
    N = GradedModule.from_json(M.to_json(), R)
    assert N.to_json() == M.to_json()


def test_finite_length(R):
    assert is_finite_length(cyclic_module(R, ["x^2", "y^3"]))
    assert not is_finite_length(cyclic_module(R, ["x^2"]))
    assert length(cyclic_module(R, ["x^2", "x*y", "y^3"])) == 4
    assert degree_range(cyclic_module(R, ["x^2", "x*y", "y^3"])) == (0, 2)
    with pytest.raises(NotFiniteLengthError):
        degree_range(free_module(R, [0]))


def test_prune_removes_units(R):
    M = GradedModule(R, [0, 1], [["x", "-1"]])
    P, alive = prune(M)
    assert P.rank == 1 and not P.cols and alive == [0]


def test_matlis_dual_and_biduality(R):
    M = cyclic_module(R, ["x^2", "x*y", "y^2"])
    D = matlis_dual_finite_length(M)
    assert dims(D, -2, 1) == [0, 2, 1, 0]
    DD = matlis_dual_finite_length(D)
    assert dims(DD, -1, 2) == dims(M, -1, 2)
    ann = sorted(str(f).lstrip("-") for f in annihilator(DD))
    assert ann == ["x*y", "x^2", "y^2"]


def test_torsion(R):
    G, Q = torsion_submodule(direct_sum(free_module(R, [0]), residue_field(R)), with_quotient=True)
    assert dims(G, 0, 3) == [1, 0, 0, 0]
    assert dims(Q, 0, 3) == [1, 2, 3, 4]
    assert torsion_submodule(free_module(R, [0])).rank == 0
    G = torsion_submodule(cyclic_module(R, ["x^2", "x*y"]))
    assert dims(G, 0, 3) == [0, 1, 0, 0]


def test_quotient_ring_modules():
    Q = GradedRing(["a", "b", "c"], [2, 2, 2], ["b^2 - a*c"])
    k = residue_field(Q)
    assert dims(k, 0, 2) == [1, 0, 0]
    assert dims(free_module(Q, [0]), 0, 6) == [1, 0, 3, 0, 5, 0, 7]
