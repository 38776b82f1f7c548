import random

import pytest

from vbass.bass import PrimeSpec
from vbass.errors import HypothesisError, PresentationUnavailableError
from vbass.exactalg import GradedRing
from vbass.gmod import (
    cyclic_module, direct_sum, free_module, hilbert_window, is_finite_length, length,
)
from vbass.veronese import contract_prime, veronese_hilbert_check, veronese_module, veronese_ring


def dims(M, lo, hi):
    return hilbert_window(M, lo, hi).as_list() if M.rank else [0] * (hi - lo + 1)


def test_veronese_ring_n2(R, V2):
    P = V2.presentation
    assert P.variables == ("a1", "a2", "a3") or list(P.variables) == ["a1", "a2", "a3"]
    assert {v: str(V2.lift_map[v]) for v in P.variables} == {"a1": "x^2", "a2": "x*y", "a3": "y^2"}
    assert [str(r).lstrip("-") for r in P.relations] in (["a2^2 - a1*a3"], ["a1*a3 - a2^2"])
    assert dims(free_module(P, [0]), 0, 8) == [1, 0, 3, 0, 5, 0, 7, 0, 9]


def test_veronese_ring_n3(R, V3):
    P = V3.presentation
    assert P.nvars == 4 and len(P.relations) == 3
    assert all(r.homogeneous_degree == 6 for r in P.relations)
    src = dims(free_module(R, [0]), 0, 12)
    assert dims(free_module(P, [0]), 0, 12) == [v if d % 3 == 0 else 0 for d, v in enumerate(src)]


def test_identity_and_hypotheses(R):
    V1 = veronese_ring(R, 1)
    assert V1.presentation is R
    assert veronese_module(free_module(R, [0]), V1).value.ring is R
    with pytest.raises(HypothesisError):
        veronese_ring(GradedRing(["x", "y"], [1, 2]), 2)
    with pytest.raises(PresentationUnavailableError):
        veronese_ring(GradedRing(["x", "y"], [1, 2]), 3)


def test_veronese_module_examples(R, V2):
    P = V2.presentation
    VR = veronese_module(free_module(R, [0]), V2)
    assert VR.value.rank == 1 and not VR.value.cols
    V1 = veronese_module(free_module(R, [1]), V2)
    assert V1.value.rank == 2 and V1.value.twists == (2, 2) or list(V1.value.twists) == [2, 2]
    assert dims(V1.value, 0, 8) == [0, 0, 2, 0, 4, 0, 6, 0, 8]
    M = cyclic_module(R, ["x^3", "x^2*y", "x*y^2", "y^3"])
    VM = veronese_module(M, V2).value
    assert is_finite_length(VM)
    assert dims(VM, 0, 4) == [1, 0, 3, 0, 0]


def test_hilbert_check_examples(R, V2):
    M = direct_sum(free_module(R, [0]), free_module(R, [1]))
    assert veronese_hilbert_check(M, V2, (0, 6), [free_module(R, [0]), free_module(R, [1])])["pass"]
    assert veronese_hilbert_check(free_module(R, []), V2, (0, 6))["pass"]
    rep = veronese_hilbert_check(cyclic_module(R, ["x^2"]), V2, (0, 8))
    assert rep["pass"]
    assert [r["veronese"] for r in rep["dims"] if r["degree"] % 2 == 0] == [1, 2, 2, 2, 2]


def test_contract_prime(R, V2):
    q = contract_prime(PrimeSpec(R, ["x"]), V2)
    assert sorted(str(g) for g in q.generators) == ["a1", "a2"]
    assert contract_prime(PrimeSpec(R, []), V2).generators == []
    q = contract_prime(PrimeSpec(R, ["x", "y"]), V2)
    assert sorted(str(g) for g in q.generators) == ["a1", "a2", "a3"]
    for g in contract_prime(PrimeSpec(R, ["x - y"]), V2).generators:
        assert g.is_homogeneous()


def _random_monomial_ideal(rng):
    gens = set()
    for _ in range(rng.randint(1, 3)):
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        if a + b:
            gens.add((a, b))
    return sorted(gens)


def _mono(e):
    return "*".join(f"{v}^{k}" for v, k in zip("xy", e) if k) or "1"


def test_ses_exactness_random(R):
    """0 → R/(I:f)(−deg f) →f R/I → R/(I+(f)) → 0 stays exact after (−)^(n)."""
    rng = random.Random(2024)
    Vs = {2: veronese_ring(R, 2), 3: veronese_ring(R, 3)}
    for _ in range(20):
        I = _random_monomial_ideal(rng)
        f = (rng.randint(0, 2), rng.randint(1, 2))
        colon = sorted({tuple(max(a - b, 0) for a, b in zip(m, f)) for m in I})
        A = cyclic_module(R, [_mono(m) for m in colon], sum(f))
        B = cyclic_module(R, [_mono(m) for m in I])
        C = cyclic_module(R, [_mono(m) for m in I] + [_mono(f)])
        lo, hi = 0, 10
        assert [a + c for a, c in zip(dims(A, lo, hi), dims(C, lo, hi))] == dims(B, lo, hi)
        n = rng.choice([2, 3])
        VA, VB, VC = (veronese_module(X, Vs[n]).value for X in (A, B, C))
        da, db, dc = dims(VA, lo, hi), dims(VB, lo, hi), dims(VC, lo, hi)
        for d in range(lo, hi + 1):
            if d % n:
                assert da[d] == db[d] == dc[d] == 0
            else:
                assert da[d] + dc[d] == db[d]
                assert db[d] == dims(B, lo, hi)[d]


@pytest.mark.parametrize("gens", [
    ["x^2", "y^2"], ["x^3", "x*y", "y^2"], ["x^2", "x*y", "y^3"], ["x", "y^4"],
])
@pytest.mark.parametrize("n", [2, 3])
def test_finite_length_veronese_length(R, gens, n):
    M = cyclic_module(R, gens)
    V = veronese_ring(R, n)
    VM = veronese_module(M, V).value
    src = dims(M, 0, 8)
    assert is_finite_length(VM)
    assert length(VM) == sum(v for d, v in enumerate(src) if d % n == 0)
