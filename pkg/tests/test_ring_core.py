import pytest

from detpsi import ring_core as rc


@pytest.fixture
def R3():
    return rc.make_ring((3, 2, [3]))


def test_make_ring_rank_over_base(R3):
    assert len(R3.group_basis) == 3
    assert R3.d == 2 and R3.p == 3


def test_make_ring_without_group():
    R = rc.make_ring((5, 1, []))
    assert R.names == ["x"]
    assert not R.has_group


@pytest.mark.parametrize("q", [6, 1, 0, 9])
def test_make_ring_rejects_bad_field(q):
    with pytest.raises(rc.RingError):
        rc.make_ring((q, 1, []))


def test_make_ring_rejects_bad_dims():
    with pytest.raises(rc.RingError):
        rc.make_ring((3, 0, []))
    with pytest.raises(rc.RingError):
        rc.make_ring((3, 1, [0]))


def test_normal_form_group_relations(R3):
    t = R3.gvar(0)
    assert rc.normal_form(R3, R3.power(t, 3)) == R3.one()
    assert R3.power(R3.sub(t, R3.one()), 3) == {}
    x, y = R3.var(0), R3.var(1)
    assert R3.add(x, R3.mul(R3.zero(), y)) == x


def test_parse_and_format_roundtrip(R3):
    f = R3.parse("2*x^2*y*t + x + 1")
    assert R3.parse(R3.fmt(f)) == f
    assert R3.parse("t^4") == R3.gvar(0)


def test_norm(R3):
    B = R3.base()
    assert R3.norm(R3.var(0)) == B.power(B.var(0), 3)
    assert R3.norm(R3.gvar(0)) == B.one()
    assert R3.norm(R3.parse("t - 1")) == {}


def test_is_nzd(R3):
    assert R3.is_nzd(R3.var(0))
    assert not R3.is_nzd(R3.parse("t - 1"))
    assert not R3.is_nzd(R3.zero())


def test_iota(R3):
    iota = rc.Automorphism.iota(R3)
    assert iota.apply(R3.gvar(0)) == R3.parse("t^2")
    assert iota.apply(R3.parse("x*t + 1")) == R3.parse("x*t^2 + 1")
    assert iota.is_involution()


def test_character_twist():
    R = rc.make_ring((7, 1, [3]))
    kappa = rc.Automorphism.character(R, [2])
    assert kappa.apply(R.gvar(0)) == R.parse("2*t")
    assert kappa.apply(R.parse("t^2")) == R.parse("4*t^2")


def test_character_must_respect_group_order():
    R = rc.make_ring((7, 1, [3]))
    with pytest.raises(rc.RingError):
        rc.Automorphism.character(R, [3])


def test_ring_elem_arithmetic(R3):
    x = R3.elem(R3.var(0))
    t = R3.elem(R3.gvar(0))
    assert (t ** 3) == 1
    assert (x + 1) * (x - 1) == x * x - 1
    assert (t - 1).norm() == 0


def test_det_matches_cofactor(R3):
    P = R3.parse
    m = [[P("x"), P("y")], [P("t"), P("x + 1")]]
    assert rc.det(R3, m) == R3.sub(R3.mul(P("x"), P("x + 1")), R3.mul(P("y"), P("t")))


def test_elem_json_roundtrip(R3):
    f = R3.parse("x*y*t^2 + 2")
    assert rc.elem_from_json(R3, rc.elem_to_json(R3, f)) == f
