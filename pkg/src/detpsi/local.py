"""Localization at monomial primes (x_i : i in V) of the polynomial subring."""
import itertools
import math

from . import groebner as gb
from . import modules as md


class MonomialPrime:
    __slots__ = ("indices",)

    def __init__(self, indices):
        self.indices = tuple(sorted(set(indices)))

    @property
    def height(self):
        return len(self.indices)

    def contains_poly(self, B, f):
        """Is the base-ring polynomial f inside the prime?"""
        for k in f:
            e = B.exps(k)
            if not any(e[i] for i in self.indices):
                return False
        return True

    def to_json(self):
        return list(self.indices)

    @classmethod
    def from_json(cls, obj):
        return cls(obj)

    @classmethod
    def parse(cls, ring, text):
        """'x,y', '(x)', '0' or '' for the zero prime."""
        text = str(text).strip().strip("()").strip()
        if text in ("", "0"):
            return cls(())
        idx = []
        for name in text.split(","):
            name = name.strip()
            if name not in ring.names[:ring.d]:
                raise md.ModuleError(f"{name!r} is not a polynomial variable")
            idx.append(ring.names.index(name))
        return cls(idx)

    def fmt(self, ring):
        return "(" + ",".join(ring.names[i] for i in self.indices) + ")" if self.indices else "(0)"

    def __eq__(self, other):
        return isinstance(other, MonomialPrime) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"MonomialPrime{self.indices}"


def monomial_primes(ring, max_height):
    out = []
    for h in range(0, min(max_height, ring.d) + 1):
        for c in itertools.combinations(range(ring.d), h):
            out.append(MonomialPrime(c))
    return out


def base_ideal_avoids(R, I_base, q):
    """True if some element of the base-ring ideal lies outside q."""
    B = R.base()
    return any(g and not q.contains_poly(B, g) for g in I_base)


def ideal_local_unit(R, I, q):
    """I_q = R_q for an ideal I of R."""
    return base_ideal_avoids(R, gb.contract_to_base(R, [g for g in I if g]), q)


def ideal_local_zero(R, I, q):
    """I_q = 0 for an ideal I of R."""
    I = [g for g in I if g]
    if not I:
        return True
    return ideal_local_unit(R, md.ideal_annihilator(R, I), q)


def local_vanishes(M, q):
    if M.ngens == 0 or M.is_zero():
        return True
    return base_ideal_avoids(M.ring, md.annihilator_base(M), q)


def local_ideal_equal(R, I, J, q):
    I = [g for g in I if g]
    J = [g for g in J if g]
    if not I or not J:
        if not I and not J:
            return True
        return ideal_local_zero(R, I or J, q)
    return ideal_local_unit(R, gb.ideal_colon(R, I, J), q) and \
        ideal_local_unit(R, gb.ideal_colon(R, J, I), q)


def locally_projective(M, q):
    """Constant-rank Fitting test: Fitt_r(M)_q = R_q and Fitt_{r-1}(M)_q = 0."""
    R = M.ring
    M2, _, _ = md.prune(M)
    prev = []
    for r in range(M2.ngens + 1):
        F = md.fitting_ideal(M2, r)
        if F and ideal_local_unit(R, F, q):
            return ideal_local_zero(R, prev, q)
        prev = F
    return False


class PdProbe:
    __slots__ = ("value", "bound")

    def __init__(self, value, bound):
        self.value = value
        self.bound = bound

    def at_most(self, k):
        return self.value is not None and self.value <= k

    def __eq__(self, other):
        if isinstance(other, PdProbe):
            return (self.value, self.bound) == (other.value, other.bound)
        if isinstance(other, str):
            return str(self) == other
        return self.value is not None and self.value == other

    def __str__(self):
        if self.value is None:
            return f">={self.bound}"
        if self.value == -math.inf:
            return "-inf"
        return str(self.value)

    __repr__ = __str__

    def to_json(self):
        return str(self)


def local_pd_probe(M, q, bound=6):
    if local_vanishes(M, q):
        return PdProbe(-math.inf, bound)
    N, _, _ = md.prune(M)
    for k in range(bound + 1):
        if locally_projective(N, q):
            return PdProbe(k, bound)
        if not N.rels:
            return PdProbe(k, bound)
        N, _ = md.submodule(md.free(N.ring, N.ngens), N.rels)
    return PdProbe(None, bound)


def local_torsion(M, q):
    """(Gamma, inclusion): elements of M killed by a power of q."""
    R = M.ring
    ideal = [R.var(i) for i in q.indices]
    if not ideal:
        return md.submodule(M, [])
    vecs = md.local_torsion_vectors(M, ideal)
    return md.submodule(M, vecs)


def _support_base(M):
    """Base-ring ideal with the same support as M (contracted Fitting ideal)."""
    R = M.ring
    if M.ngens == 0 or M.is_zero():
        return [R.base().one()]
    return gb.contract_to_base(R, md.fitting_ideal(M, 0))


def finite_length_at(M, q):
    """Is the support of M near q contained in V(q)?  For maximal q: does M_q have finite length?"""
    B = M.ring.base()
    A = [a for a in _support_base(M) if a]
    if not A:
        return False
    qgens = [B.var(i) for i in q.indices]
    if not qgens or gb.krull_dim_base(B, A) <= 0:
        return True
    if B.d == 2 and q.height == 2:
        # one-dimensional components of V(A) are the curves of the factors of gcd(A)
        h = A[0]
        for a in A[1:]:
            h = gb.poly_gcd(B, h, a)
        return bool(h.get(B.ONE))
    sat = gb.saturate(B, [gb.vec(B, [a]) for a in A], qgens, 1)
    return any(g and not q.contains_poly(B, g) for g in sat)


def _power_gens(R, q, N, n):
    mons = []
    for c in itertools.combinations_with_replacement(q.indices, N):
        e = [0] * R.nv
        for i in c:
            e[i] += 1
        mons.append(R.key(e))
    return [{R.key(R.exps(m), i): 1} for m in mons for i in range(n)]


def local_length(M, q):
    """Length of M_q for a maximal monomial prime q, measured as F_q-dimension of M / q^N M
    for N large (the value stabilizes once q^N M_q = 0)."""
    R = M.ring
    if q.height != R.d:
        raise md.ModuleError("lengths are computed at maximal monomial primes only")
    if not finite_length_at(M, q):
        raise md.ModuleError("module does not have finite length at q")
    M, _, _ = md.prune(M)
    if M.ngens == 0:
        return 0
    prev = None
    for N in itertools.count(1):
        G = gb.groebner(R, list(M.rels) + _power_gens(R, q, N, M.ngens), M.ngens)
        n = gb.vdim(R, G.elems, M.ngens)
        if n is None:
            raise md.ModuleError("local part is not finite dimensional")
        if n == prev:
            return n
        prev = n


def length_at(M, q):
    if md.codim(M) < q.height:
        raise md.ModuleError("codimension of the module is smaller than the height of q")
    return local_length(M, q)
