import json

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from detpsi import complexes as cx
from detpsi import groebner as gb
from detpsi import modules as md
from detpsi import ring_core as rc

R = rc.make_ring((3, 2, [3]))
L = rc.make_ring((3, 2, []))
R7 = rc.make_ring((7, 1, [3]))
FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
SLOW = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def polys(draw, ring=R, maxdeg=2, maxterms=3):
    f = {}
    for _ in range(draw(st.integers(0, maxterms))):
        a = draw(st.integers(0, maxdeg))
        b = draw(st.integers(0, maxdeg - a))
        g = [draw(st.integers(0, n - 1)) for n in ring.orders]
        c = draw(st.integers(1, ring.p - 1))
        f = ring.add(f, ring.scale({ring.key([a, b] + g): 1}, c))
    return f


def nonzero(ring=R, maxdeg=2):
    return polys(ring, maxdeg).filter(bool)


@given(polys(), polys(), polys())
@FAST
def test_ring_axioms(a, b, c):
    assert R.mul(a, b) == R.mul(b, a)
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == {}
    assert R.mul(a, R.one()) == a


@given(polys(), polys())
@FAST
def test_norm_is_multiplicative(a, b):
    B = R.base()
    assert R.norm(R.mul(a, b)) == B.mul(R.norm(a), R.norm(b))
    if R.is_nzd(a) and b:
        assert R.mul(a, b)


@given(polys())
@FAST
def test_parse_fmt_and_json_roundtrip(a):
    assert R.parse(R.fmt(a)) == a
    assert rc.elem_from_json(R, json.loads(json.dumps(rc.elem_to_json(R, a)))) == a


@st.composite
def polys7(draw):
    f = {}
    for _ in range(draw(st.integers(0, 3))):
        e = [draw(st.integers(0, 2)), draw(st.integers(0, 2))]
        f = R7.add(f, R7.scale({R7.key(e): 1}, draw(st.integers(1, 6))))
    return f


@given(st.sampled_from([1, 2, 4]), st.sampled_from([1, 2]), polys7(), polys7())
@FAST
def test_automorphisms(c, m, a, b):
    sigma = rc.Automorphism(R7, [(c, [m])])
    iota = rc.Automorphism.iota(R7)
    for s in (sigma, iota):
        assert s.apply(R7.mul(a, b)) == R7.mul(s.apply(a), s.apply(b))
        assert s.apply(R7.add(a, b)) == R7.add(s.apply(a), s.apply(b))
    assert iota.is_involution()
    assert iota.apply(iota.apply(a)) == a
    assert sigma.compose(iota).apply(a) == sigma.apply(iota.apply(a))


@given(st.lists(nonzero(), min_size=1, max_size=3), polys(maxdeg=3))
@FAST
def test_reduction_is_idempotent_and_sound(gens, f):
    vs = [gb.vec(R, [g]) for g in gens]
    v = gb.vec(R, [f])
    r = gb.reduce(R, v, vs, 1)
    assert gb.reduce(R, r, vs, 1) == r
    assert gb.lift(R, vs, 1, [R.sub(v, r)])[0] is not None


@given(st.lists(st.tuples(polys(), polys()), min_size=1, max_size=3))
@SLOW
def test_syzygies_are_relations(cols):
    gens = [gb.vec(R, list(c)) for c in cols]
    for z in gb.syzygies(R, gens, 2):
        assert gb.vec_comb(R, gb.entries(R, z, len(gens)), gens) == {}


@given(st.lists(st.lists(polys(L, 1), min_size=2, max_size=2), min_size=2, max_size=2),
       polys(L, 1), polys(L, 1))
@SLOW
def test_fitting_ideal_presentation_independent(rows, a, b):
    M = md.from_matrix(L, rows)
    # add a redundant relation and perform a column operation
    extra = [L.add(L.mul(a, r[0]), L.mul(b, r[1])) for r in rows]
    swapped = [[r[0], L.add(r[1], L.mul(a, r[0])), x] for r, x in zip(rows, extra)]
    N = md.from_matrix(L, swapped)
    for i in range(2):
        assert md.ideal_equal(L, md.fitting_ideal(M, i), md.fitting_ideal(N, i))


@given(st.lists(st.lists(polys(L, 1), min_size=2, max_size=2), min_size=2, max_size=2))
@SLOW
def test_fitting_chain_and_annihilator(rows):
    M = md.from_matrix(L, rows)
    F0, F1 = md.fitting_ideal(M, 0), md.fitting_ideal(M, 1)
    assert md.ideal_contains(L, F1, F0)
    assert md.ideal_contains(L, md.annihilator(M), F0)


@given(nonzero(L, 1), nonzero(L, 1), st.integers(-2, 2))
@SLOW
def test_euler_char_of_cone_and_shift(a, b, k):
    C = cx.FreeComplex.from_matrices(L, 0, [[[a]]])
    D = cx.FreeComplex.from_matrices(L, 0, [[[b]]])
    f = cx.ChainMap(C, D, {})
    assert cx.euler_char(cx.cone(f)) == cx.euler_char(D) - cx.euler_char(C)
    assert cx.euler_char(C.shift(k)) == (-1) ** k * cx.euler_char(C)
