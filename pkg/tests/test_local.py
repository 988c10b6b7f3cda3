import pytest

from detpsi import local as lc
from detpsi import modules as md
from detpsi import ring_core as rc


@pytest.fixture
def L():
    return rc.make_ring((3, 2, []))


@pytest.fixture
def R():
    return rc.make_ring((3, 2, [3]))


def I(ring, *texts):
    return [ring.parse(s) for s in texts]


def Q(ring, text):
    return lc.MonomialPrime.parse(ring, text)


def test_prime_parsing(L):
    assert Q(L, "x,y").indices == (0, 1)
    assert Q(L, "(y)").indices == (1,)
    assert Q(L, "0").height == 0
    with pytest.raises(md.ModuleError):
        Q(L, "t")
    assert [q.height for q in lc.monomial_primes(L, 2)] == [0, 1, 1, 2]


def test_local_vanishes(L):
    M = md.cyclic(L, I(L, "x"))
    assert lc.local_vanishes(M, Q(L, "y"))
    assert not lc.local_vanishes(M, Q(L, "x"))
    assert lc.local_vanishes(md.cyclic(L, I(L, "x", "y")), Q(L, "x"))


def test_local_ideal_equal(L):
    a, b = I(L, "x^2", "x*y"), I(L, "x")
    assert lc.local_ideal_equal(L, a, b, Q(L, "x"))
    assert not lc.local_ideal_equal(L, a, b, Q(L, "x,y"))
    for q in lc.monomial_primes(L, 2):
        assert lc.local_ideal_equal(L, a, a, q)


def test_pd_probe(L, R):
    assert lc.local_pd_probe(md.cyclic(L, I(L, "x", "y")), Q(L, "x,y")) == 2
    p = lc.local_pd_probe(md.cyclic(R, I(R, "t - 1")), Q(R, "x,y"), bound=4)
    assert p.value is None and str(p) == ">=4"
    assert lc.local_pd_probe(md.free(L, 2), Q(L, "x")) == 0


def test_length_at(L):
    assert lc.length_at(md.cyclic(L, I(L, "x", "y")), Q(L, "x,y")) == 1
    assert lc.length_at(md.cyclic(L, I(L, "x^2", "y")), Q(L, "x,y")) == 2
    with pytest.raises(md.ModuleError):
        lc.length_at(md.cyclic(L, I(L, "x")), Q(L, "x,y"))


def test_length_counts_only_the_local_part(L):
    # V(x^2, y(x+1)) is {(0,0), (-1,0)}; only the origin lies in (x,y)
    assert lc.local_length(md.cyclic(L, I(L, "x^2", "y*(x + 1)")), Q(L, "x,y")) == 2


def test_length_in_group_ring(R):
    assert lc.local_length(md.cyclic(R, I(R, "x", "y")), Q(R, "x,y")) == 3
    assert lc.local_length(md.cyclic(R, I(R, "x", "y", "t - 1")), Q(R, "x,y")) == 1


def test_finite_length_at(L):
    q = Q(L, "x,y")
    assert not lc.finite_length_at(md.cyclic(L, I(L, "x")), q)
    assert lc.finite_length_at(md.cyclic(L, I(L, "x*(y + 1)", "y")), q)
    assert lc.finite_length_at(md.cyclic(L, I(L, "y + 1")), q)
