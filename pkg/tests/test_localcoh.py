import pytest

from vbass.errors import Limits, ResourceLimitError
from vbass.localcoh import (
    SemigroupRing,
    cech_window,
    contract_monomial_ideal,
    verify_veronese_localcoh,
)

N2 = SemigroupRing(2)


def test_h2_of_plane():
    w = cech_window(N2, [(1, 0), (0, 1)], 2, 4)
    assert w.dims[(-1, -1)] == 1
    assert w.coarse[-2] == 1 and w.coarse[-3] == 2
    assert all(a < 0 and b < 0 for (a, b) in w.dims)
    assert w.euler_ok


def test_h0_vanishes_on_domain():
    assert not cech_window(N2, [(1, 0), (0, 1)], 0, 3).dims
    assert not cech_window(SemigroupRing(2, n=2), [(2, 0), (1, 1)], 0, 3).dims


def test_h1_principal():
    w = cech_window(N2, [(1, 0)], 1, 4)
    assert w.dims[(-1, 3)] == 1
    assert all(a < 0 <= b for (a, b) in w.dims)
    assert w.boundary_flag  # support is unbounded, so it touches the box


def test_contract_monomial_ideal():
    assert contract_monomial_ideal([(1, 0)], 2) == [(2, 0), (1, 1)]
    assert contract_monomial_ideal([(2, 0), (1, 1)], 2) == [(2, 0), (1, 1)]
    # spec lists x³y, x²y², xy³ (degree 4, not ≡ 0 mod 3); minimal complements give:
    out = contract_monomial_ideal([(1, 1)], 3)
    assert out == [(2, 1), (1, 2)]
    assert all(sum(m) % 3 == 0 for m in out)


def test_acceptance_example():
    rep = verify_veronese_localcoh([(1, 0), (0, 1)], 2, 2, 6, total_window=(-6, 6))
    assert rep["pass"]
    assert [rep["coarse"][str(d)] for d in (-2, -4, -6)] == [[1, 1], [3, 3], [5, 5]]
    assert rep["boundaryFlags"] == {"R": False, "Rn": False}


def test_i0_and_principal_cases():
    assert verify_veronese_localcoh([(1, 0), (0, 1)], 2, 0, 4)["pass"]
    rep = verify_veronese_localcoh([(1, 0)], 2, 1, 4)
    assert rep["pass"]
    assert any(v[0] for v in rep["coarse"].values())


CORPUS = [
    [(1, 0), (0, 1)],
    [(1, 0)],
    [(1, 1)],
    [(2, 0), (1, 1)],
    [(2, 1), (0, 2)],
]


@pytest.mark.parametrize("gens", CORPUS)
def test_radical_invariance(gens):
    sq = [tuple(2 * x for x in g) for g in gens]
    for S in (N2, SemigroupRing(2, n=2)):
        g1 = gens if S.n == 1 else contract_monomial_ideal(gens, 2)
        g2 = sq if S.n == 1 else contract_monomial_ideal(sq, 2)
        for i in range(3):
            a = cech_window(S, g1, i, 4)
            b = cech_window(S, g2, i, 4)
            assert a.dims == b.dims


@pytest.mark.parametrize("gens", CORPUS)
def test_top_vanishing_and_euler(gens):
    w = cech_window(N2, gens, 3, 3)
    assert not w.dims and w.euler_ok


@pytest.mark.parametrize("gens", CORPUS)
@pytest.mark.parametrize("n", [2, 3])
def test_prop_6_2_corpus(gens, n):
    for i in range(3):
        rep = verify_veronese_localcoh(gens, n, i, 5, total_window=(-5, 5))
        assert rep["pass"], rep["mismatches"]


def test_three_variables():
    S = SemigroupRing(3)
    w = cech_window(S, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3, 3, total_window=(-5, -3))
    assert w.coarse == {-5: 6, -4: 3, -3: 1}


def test_box_limit():
    with pytest.raises(ResourceLimitError):
        cech_window(SemigroupRing(3), [(1, 0, 0)], 1, 10, limits=Limits(max_terms=100))
