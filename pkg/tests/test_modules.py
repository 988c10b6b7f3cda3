import pytest

from detpsi import groebner as gb
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


def iso_to_cyclic(M, ideal):
    """M is cyclic with annihilator equal to the given ideal."""
    R = M.ring
    if md.cyclic_generator(M) is None:
        return False
    return md.ideal_equal(R, md.annihilator(M), ideal)


def test_cokernel_and_kernel_of_scalar(L):
    F = md.free(L, 1)
    h = md.ModuleHom(F, F, [gb.vec(L, I(L, "x"))])
    C, _ = md.cokernel(h)
    assert iso_to_cyclic(C, I(L, "x"))
    K, _ = md.kernel(h)
    assert K.is_zero()


def test_kernel_of_row_is_koszul(L):
    h = md.ModuleHom(md.free(L, 2), md.free(L, 1), [gb.vec(L, I(L, "x")), gb.vec(L, I(L, "y"))])
    K, inc = md.kernel(h)
    K2, _, _ = md.prune(K)
    assert K2.ngens == 1 and not K2.rels
    assert gb.same_module(L, inc.images, [gb.vec(L, I(L, "y", "-x"))], 2)


def test_duals(L):
    D, _ = md.dual(md.cyclic(L, I(L, "x")))
    assert D.is_zero()
    D, phis = md.dual(md.free(L, 2))
    D2, _, _ = md.prune(D)
    assert D2.ngens == 2 and not D2.rels


def test_hom_cyclic(L):
    M = md.cyclic(L, I(L, "x"))
    H, _ = md.hom(M, M)
    assert iso_to_cyclic(H, I(L, "x"))


def test_ext(L):
    assert iso_to_cyclic(md.ext(md.cyclic(L, I(L, "x")), 1), I(L, "x"))
    assert iso_to_cyclic(md.ext(md.cyclic(L, I(L, "x", "y")), 2), I(L, "x", "y"))
    assert md.ext(md.cyclic(L, I(L, "x", "y")), 1).is_zero()
    with pytest.raises(md.ModuleError):
        md.ext(md.free(L, 1), -1)


def test_exterior_powers(L):
    W = md.exterior_power(md.free(L, 2), 2)
    W2, _, _ = md.prune(W)
    assert W2.ngens == 1 and not W2.rels
    M = md.from_matrix(L, [[L.parse("x"), L.parse("y")]])
    W1 = md.exterior_power(M, 1)
    assert W1.ngens == M.ngens and gb.same_module(L, W1.rels, M.rels, 1)
    S, _, _ = md.direct_sum(md.cyclic(L, I(L, "x")), md.cyclic(L, I(L, "y")))
    assert iso_to_cyclic(md.exterior_power(S, 2), I(L, "x", "y"))
    assert md.exterior_power(md.free(L, 2), 3).is_zero()


def test_bidual_map(L):
    assert md.is_iso(md.bidual_map(md.free(L, 2), 1))
    assert md.bidual_map(md.cyclic(L, I(L, "x")), 1).is_zero()
    M = md.from_matrix(L, [[L.parse("x")], [L.parse("y")]])
    a = md.bidual_map(M, 1)
    assert md.is_injective(a)
    C, _ = md.cokernel(a)
    assert md.is_pseudo_null(C) and not C.is_zero()


def test_torsion(L, R):
    S, _, _ = md.direct_sum(md.cyclic(L, I(L, "x")), md.free(L, 1))
    T, _ = md.torsion_submodule(S)
    assert iso_to_cyclic(T, I(L, "x"))
    T, _ = md.torsion_submodule(md.cyclic(R, I(R, "t - 1")))
    assert T.is_zero()


def test_finite_part(L):
    S, _, _ = md.direct_sum(md.cyclic(L, I(L, "x")), md.cyclic(L, I(L, "x", "y")))
    F, _ = md.finite_part(S)
    assert iso_to_cyclic(F, I(L, "x", "y"))
    F, _ = md.finite_part(md.cyclic(L, I(L, "x^2", "x*y")))
    assert iso_to_cyclic(F, I(L, "x", "y"))


def test_pseudo_null(L, R):
    assert md.is_pseudo_null(md.cyclic(L, I(L, "x", "y")))
    assert not md.is_pseudo_null(md.cyclic(L, I(L, "x")))
    assert md.is_pseudo_null(md.cyclic(R, I(R, "t - 1", "x", "y")))


def test_pseudo_null_part(L):
    S, _, _ = md.direct_sum(md.cyclic(L, I(L, "x")), md.cyclic(L, I(L, "x", "y")))
    P, _ = md.pseudo_null_part(S)
    assert iso_to_cyclic(P, I(L, "x", "y"))


def test_fitting_ideals(L):
    assert md.ideal_equal(L, md.fitting_ideal(md.cyclic(L, I(L, "x")), 0), I(L, "x"))
    D = md.from_matrix(L, [[L.parse("x"), L.zero()], [L.zero(), L.parse("y")]])
    assert md.ideal_equal(L, md.fitting_ideal(D, 0), I(L, "x*y"))
    assert md.ideal_equal(L, md.fitting_ideal(D, 1), I(L, "x", "y"))
    assert md.fitting_ideal(md.free(L, 1), 0) == []


def test_annihilator_and_rank(L, R):
    assert md.ideal_equal(L, md.annihilator(md.cyclic(L, I(L, "x"))), I(L, "x"))
    assert md.generic_rank(md.free(R, 1)) == 1
    assert md.generic_rank(md.from_matrix(L, [[L.parse("x")], [L.parse("y")]])) == 1


@pytest.mark.parametrize("rels,gen", [(["x*y"], "x*y"), (["x^2", "x*y"], "x"), (["x", "y"], "1")])
def test_char_ideal(L, rels, gen):
    assert md.char_ideal(md.cyclic(L, I(L, *rels))) == L.parse(gen)


def test_char_ideal_needs_torsion(L):
    with pytest.raises(md.ModuleError):
        md.char_ideal(md.free(L, 1))


def test_cyclic_generator_crt(L):
    P = L.parse
    M = md.PresentedModule(L, 2, [gb.vec(L, [P("x"), {}]), gb.vec(L, [P("y"), {}]),
                                  gb.vec(L, [{}, P("x")]), gb.vec(L, [{}, P("y + 1")])])
    v = md.cyclic_generator(M)
    assert v is not None and md.generates(M, v)
    S, _, _ = md.direct_sum(md.cyclic(L, I(L, "x", "y")), md.cyclic(L, I(L, "x", "y")))
    assert md.cyclic_generator(S) is None


def test_module_json_roundtrip(R):
    M = md.from_matrix(R, [[R.parse("x*t"), R.parse("y")], [R.zero(), R.parse("t - 1")]])
    N = md.PresentedModule.from_json(R, M.to_json())
    assert N.ngens == M.ngens and gb.same_module(R, N.rels, M.rels, 2)
