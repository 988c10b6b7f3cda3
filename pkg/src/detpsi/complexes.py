"""Bounded cochain complexes of finite free R-modules and the determinant maps built on them."""
import itertools

from . import groebner as gb
from . import modules as md
from . import local as lc
from .ring_core import det, elem_to_json, elem_from_json

ModuleError = md.ModuleError


class FreeComplex:
    """Degrees lo..lo+len(ranks)-1; diffs[k] lists the images of the basis of degree lo+k
    as vectors in R^ranks[k+1]."""
    __slots__ = ("ring", "lo", "ranks", "diffs")

    def __init__(self, ring, lo, ranks, diffs, check=True):
        if len(diffs) != max(len(ranks) - 1, 0):
            raise ModuleError("need one differential between consecutive terms")
        for k, cols in enumerate(diffs):
            if len(cols) != ranks[k]:
                raise ModuleError(f"differential from degree {lo + k} has the wrong number of columns")
            for c in cols:
                if c and gb.max_pos(ring, c) >= ranks[k + 1]:
                    raise ModuleError(f"differential from degree {lo + k} leaves its target")
        self.ring = ring
        self.lo = lo
        self.ranks = list(ranks)
        self.diffs = [[ring_reduce(ring, c) for c in cols] for cols in diffs]
        if check:
            self.check()

    @classmethod
    def from_matrices(cls, ring, lo, mats, ranks=None):
        """mats[k] is a row list for the differential out of degree lo+k."""
        if ranks is None:
            ranks = [len(mats[0][0]) if mats and mats[0] else 0] + [len(m) for m in mats]
        diffs = []
        for k, m in enumerate(mats):
            diffs.append([gb.vec(ring, [m[i][j] for i in range(ranks[k + 1])]) for j in range(ranks[k])])
        return cls(ring, lo, ranks, diffs)

    @property
    def hi(self):
        return self.lo + len(self.ranks) - 1

    def rank(self, i):
        k = i - self.lo
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def diff(self, i):
        k = i - self.lo
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return [{} for _ in range(self.rank(i))]

    def matrix(self, i):
        R = self.ring
        cols = [gb.entries(R, c, self.rank(i + 1)) for c in self.diff(i)]
        return [[c[r] for c in cols] for r in range(self.rank(i + 1))]

    def apply_diff(self, i, v):
        return gb.vec_comb(self.ring, gb.entries(self.ring, v, self.rank(i)), self.diff(i))

    def check(self):
        for i in range(self.lo, self.hi - 1):
            for c in self.diff(i):
                if self.apply_diff(i + 1, c):
                    raise ModuleError(f"d o d is nonzero at degree {i}")

    def shift(self, k):
        """C[k]: degree i holds C^(i+k), differential multiplied by (-1)^k."""
        R = self.ring
        diffs = self.diffs if k % 2 == 0 else [[R.neg(c) for c in cols] for cols in self.diffs]
        return FreeComplex(R, self.lo - k, self.ranks, diffs, check=False)

    def twist(self, sigma):
        return FreeComplex(self.ring, self.lo, self.ranks,
                           [[sigma.apply(c) for c in cols] for cols in self.diffs], check=False)

    def __repr__(self):
        return f"FreeComplex(lo={self.lo}, ranks={self.ranks})"

    def to_json(self):
        R = self.ring
        return {"lowest_degree": self.lo, "ranks": self.ranks,
                "differentials": [[[elem_to_json(R, e) for e in row] for row in self.matrix(i)]
                             for i in range(self.lo, self.hi)]}

    @classmethod
    def from_json(cls, ring, obj):
        mats = [[[elem_from_json(ring, e) for e in row] for row in m] for m in obj["differentials"]]
        return cls.from_matrices(ring, obj["lowest_degree"], mats, obj["ranks"])


def ring_reduce(R, v):
    return {k: c for k, c in v.items() if c}


class ChainMap:
    """comps[i] lists images of the basis of src^i as vectors in tgt^i."""
    __slots__ = ("src", "tgt", "comps")

    def __init__(self, src, tgt, comps, check=True):
        self.src = src
        self.tgt = tgt
        self.comps = {i: list(v) for i, v in comps.items()}
        for i in range(src.lo, src.hi + 1):
            got = self.comps.setdefault(i, [{} for _ in range(src.rank(i))])
            if len(got) != src.rank(i):
                raise ModuleError(f"chain map component in degree {i} has the wrong size")
        if check:
            self.check()

    def component(self, i):
        return self.comps.get(i, [{} for _ in range(self.src.rank(i))])

    def apply(self, i, v):
        R = self.src.ring
        return gb.vec_comb(R, gb.entries(R, v, self.src.rank(i)), self.component(i))

    def check(self):
        s, t = self.src, self.tgt
        R = s.ring
        for i in range(min(s.lo, t.lo) - 1, max(s.hi, t.hi) + 1):
            for j in range(s.rank(i)):
                e = gb.vec(R, [R.one()], offset=j)
                a = t.apply_diff(i, self.apply(i, e))
                b = self.apply(i + 1, s.apply_diff(i, e))
                if _vsub(R, a, b):
                    raise ModuleError(f"chain map does not commute with differentials at degree {i}")


def _vsub(R, a, b):
    out = dict(a)
    for k, c in b.items():
        v = (out.get(k, 0) - c) % R.p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _block(R, v, off):
    return gb.shift(R, v, off) if v else {}


def cone(f):
    """cone(f)^i = src^(i+1) + tgt^i with d(a, b) = (-d a, f a + d b)."""
    A, B = f.src, f.tgt
    R = A.ring
    lo = min(A.lo - 1, B.lo)
    hi = max(A.hi - 1, B.hi)
    ranks = [A.rank(i + 1) + B.rank(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        off = A.rank(i + 2)
        cols = []
        for j in range(A.rank(i + 1)):
            e = gb.vec(R, [R.one()], offset=j)
            da = A.apply_diff(i + 1, e)
            neg = {k: (-c) % R.p for k, c in da.items()}
            cols.append(gb.vec_add(R, neg, _block(R, f.apply(i + 1, e), off)))
        for j in range(B.rank(i)):
            e = gb.vec(R, [R.one()], offset=j)
            cols.append(_block(R, B.apply_diff(i, e), off))
        diffs.append(cols)
    return FreeComplex(R, lo, ranks, diffs)


def cone_maps(f, C=None):
    """(tgt -> cone, cone -> src[1]) for the triangle src -> tgt -> cone -> src[1]."""
    A, B = f.src, f.tgt
    R = A.ring
    if C is None:
        C = cone(f)
    into, out = {}, {}
    for i in range(B.lo, B.hi + 1):
        off = A.rank(i + 1)
        into[i] = [gb.vec(R, [R.one()], offset=off + j) for j in range(B.rank(i))]
    for i in range(C.lo, C.hi + 1):
        na = A.rank(i + 1)
        out[i] = [gb.vec(R, [R.one()], offset=j) if j < na else {} for j in range(C.rank(i))]
    return ChainMap(B, C, into), ChainMap(C, A.shift(1), out)


class Cohomology:
    """H^i as a presented module whose generators are represented by cycles."""
    __slots__ = ("module", "reps", "bounds", "n", "_lifter")

    def __init__(self, module, reps, bounds, n):
        self.module = module
        self.reps = reps
        self.bounds = bounds
        self.n = n
        self._lifter = None

    def coords(self, z):
        """Coordinates of the class of a cycle z in the generators of the module."""
        R = self.module.ring
        if self._lifter is None:
            self._lifter = gb.Lifter(R, list(self.reps) + list(self.bounds), self.n)
        if not z:
            return {}
        c = self._lifter.lift(z)
        if c is None:
            raise ModuleError("vector is not a cycle")
        return self.module.reduce(gb.vec(R, c[:len(self.reps)]))


def cohomology(C, i):
    R = C.ring
    n = C.rank(i)
    if n == 0:
        return Cohomology(md.PresentedModule(R, 0, []), [], [], 0)
    out = [c for c in C.diff(i)]
    nout = C.rank(i + 1)
    if nout and any(out):
        Z = gb.syzygies(R, out, nout)
    else:
        Z = [gb.vec(R, [R.one()], offset=j) for j in range(n)]
    Z = md._dedupe(R, Z)
    B = [c for c in C.diff(i - 1) if c]
    H, inc = md.submodule(md.PresentedModule(R, n, B), Z)
    return Cohomology(H, list(inc.images), B, n)


def induced_map(f, i, Hs=None, Ht=None):
    """H^i(f) as a ModuleHom between the cohomology modules."""
    Hs = Hs or cohomology(f.src, i)
    Ht = Ht or cohomology(f.tgt, i)
    imgs = [Ht.coords(f.apply(i, z)) for z in Hs.reps]
    return md.ModuleHom(Hs.module, Ht.module, imgs)


def euler_char(C):
    return sum((C.rank(i) if (i - 1) % 2 == 0 else -C.rank(i)) for i in range(C.lo, C.hi + 1))


def dual_complex(C, twist=None):
    """Hom(C, R) with degree i placed at -i and transposed differentials, optionally twisted."""
    R = C.ring
    ranks = list(reversed(C.ranks))
    diffs = []
    for i in range(C.hi - 1, C.lo - 1, -1):
        diffs.append(md.transpose_cols(R, C.diff(i), C.rank(i + 1)) if C.rank(i) else
                     [{} for _ in range(C.rank(i + 1))])
    D = FreeComplex(R, -C.hi, ranks, diffs, check=False)
    return D.twist(twist) if twist is not None else D


# ---- helpers ---------------------------------------------------------------

def divide(R, a, b):
    """c with a = b c, or None."""
    if not a:
        return R.zero()
    c = gb.Lifter(R, [gb.vec(R, [b])], 1).lift(gb.vec(R, [a]))
    return None if c is None else c[0]


def _two_term(C):
    nz = [i for i in range(C.lo, C.hi + 1) if C.rank(i)]
    if not nz:
        return C.lo, 0, 0, []
    a = nz[0]
    if nz[-1] - a > 1:
        raise ModuleError("complex has more than two nonzero terms")
    return a, C.rank(a), C.rank(a + 1), C.diff(a)


def _is_injective_cols(R, cols, n):
    cols = list(cols)
    if not cols:
        return True
    if any(not c for c in cols):
        return False
    return not gb.syzygies(R, cols, n)


# ---- the determinant pairing ------------------------------------------------

class PsiResult:
    __slots__ = ("ring", "l", "mode", "hom", "values", "ideal", "kernel", "torsion",
                 "kernel_is_torsion", "cokernel", "h_module", "h_reps")

    def image_ideal(self):
        return self.ideal

    def to_json(self):
        R = self.ring
        return {"l": self.l, "mode": self.mode,
                "values": [R.fmt(v) for v in self.values],
                "image_ideal": [R.fmt(g) for g in self.ideal],
                "kernel_is_torsion": self.kernel_is_torsion,
                "kernel_zero": self.kernel[0].is_zero()}


def psi_map(C, l, mode="strict"):
    """Determinant pairing on the l-th exterior power of the cohomology of a two-term complex.

    strict: C = [C^a --alpha--> C^(a+1)] with alpha injective, H = coker alpha and
            e_S maps to det[alpha | e_S].
    kernel: C = [R^r --K--> R^s] with pseudo-null cokernel, H = ker K and y_1^..^y_l
            maps to det[y | W] where K W = 1 over the total quotient ring.
    """
    R = C.ring
    a, r0, r1, cols = _two_term(C)
    res = PsiResult()
    res.ring, res.l, res.mode = R, l, mode
    if mode == "strict":
        if any(C.rank(i) for i in range(C.lo, C.hi + 1) if i not in (0, 1)):
            raise ModuleError("strict mode needs a complex concentrated in degrees 0 and 1")
        r0, r1, cols = C.rank(0), C.rank(1), C.diff(0)
        if euler_char(C) != l:
            raise ModuleError(f"Euler characteristic {euler_char(C)} does not match l = {l}")
        if not _is_injective_cols(R, cols, r1):
            raise ModuleError("H^0 is nonzero")
        H = md.PresentedModule(R, r1, cols)
        reps = [gb.vec(R, [R.one()], offset=i) for i in range(r1)]
        src = md.exterior_power(H, l)
        ents = [gb.entries(R, c, r1) for c in cols]
        values = []
        for S in itertools.combinations(range(r1), l):
            mat = [[ents[j][i] for j in range(r0)] + [R.one() if i == s else R.zero() for s in S]
                   for i in range(r1)]
            values.append(det(R, mat))
    elif mode == "kernel":
        if r0 - r1 != l:
            raise ModuleError(f"kernel mode needs l = rank difference {r0 - r1}")
        top = md.PresentedModule(R, r1, cols)
        if r1 and not md.is_pseudo_null(top):
            raise ModuleError("top cohomology is not pseudo-null")
        Z = gb.syzygies(R, cols, r1) if r1 and any(cols) else \
            [gb.vec(R, [R.one()], offset=j) for j in range(r0)]
        H, inc = md.submodule(md.free(R, r0), md._dedupe(R, Z))
        reps = list(inc.images)
        Y = [gb.entries(R, v, r0) for v in reps]
        src = md.exterior_power(H, l)
        K = [gb.entries(R, c, r1) for c in cols]  # K[j][i] = entry (i, j)
        T, dK = _nzd_column_minor(R, K, r0, r1)
        values = []
        for S in itertools.combinations(range(H.ngens), l):
            mat = [[Y[s][i] for s in S] + [R.one() if i == t else R.zero() for t in T]
                   for i in range(r0)]
            num = det(R, mat)
            c = divide(R, num, dK)
            if c is None:
                raise ModuleError("determinant pairing does not land in R")
            values.append(c)
    else:
        raise ModuleError(f"unknown mode {mode!r}")
    tgt = md.free(R, 1)
    h = md.ModuleHom(src, tgt, [gb.vec(R, [v]) for v in values])
    res.hom = h
    res.values = values
    res.h_module = H
    res.h_reps = reps
    res.ideal = md.simplify_ideal(R, values)
    res.kernel = md.kernel(h, do_prune=False)
    res.torsion = md.torsion_submodule(src)
    Kv = [v for v in res.kernel[1].images if v]
    Tv = [v for v in res.torsion[1].images if v]
    res.kernel_is_torsion = gb.same_module(R, Kv + list(src.rels), Tv + list(src.rels), src.ngens)
    res.cokernel = md.cyclic(R, res.ideal)
    return res


def _nzd_column_minor(R, K, r0, r1):
    """Columns T (|T| = r1) of the r1 x r0 matrix with a non-zero-divisor maximal minor."""
    if r1 == 0:
        return (), R.one()
    for T in itertools.combinations(range(r0), r1):
        m = det(R, [[K[j][i] for j in T] for i in range(r1)])
        if m and R.is_nzd(m):
            return T, m
    raise ModuleError("no maximal minor is a non-zero-divisor")


def psi_local_checks(C, l, q, res=None):
    """Three localized checks at the monomial prime q for a strict two-term complex."""
    R = C.ring
    res = res or psi_map(C, l)
    H = res.h_module
    out = {}
    out["kernel_is_torsion"] = {"verdict": "pass" if res.kernel_is_torsion else "fail"}
    E = md.ext(H, 1)
    F = md.fitting_ideal(E, 0) if E.ngens else [R.one()]
    ok = lc.local_ideal_equal(R, res.ideal, F, q)
    out["cokernel_fitting"] = {"verdict": "pass" if ok else "fail",
                               "ideals": {"image": [R.fmt(g) for g in res.ideal],
                                          "fitting": [R.fmt(g) for g in F]}}
    if not lc.locally_projective(H, q):
        out["bijective_if_projective"] = {"verdict": "hypothesis-not-met"}
    else:
        K = res.kernel[0]
        ok = lc.local_vanishes(K, q) and lc.local_vanishes(res.cokernel, q)
        out["bijective_if_projective"] = {"verdict": "pass" if ok else "fail"}
    return out


def reflexive_hull_detect(C, l):
    """Does Psi exhibit the reflexive hull?  Cross-checked against torsion of H^1."""
    res = psi_map(C, l)
    by_coker = md.is_pseudo_null(res.cokernel)
    T, _ = md.torsion_submodule(res.h_module)
    by_torsion = T.is_zero() or md.is_pseudo_null(T)
    if by_coker != by_torsion:
        raise ModuleError("reflexive hull criteria disagree")
    return by_coker


def bidual_det_compare(C, l):
    """Build theta on the l-th exterior bidual of H^1 with Psi = theta o alpha^l and certify it is an iso.

    Returns (theta, report).
    """
    R = C.ring
    a, r0, r1, cols = _two_term(C)
    res = psi_map(C, l)
    H = res.h_module
    T, _ = md.torsion_submodule(H)
    if not (T.is_zero() or md.is_pseudo_null(T)):
        raise ModuleError("torsion of H^1 has codimension 1")
    alpha = md.bidual_map(H, l)
    phis, W, psis, subsT = md.double_dual_functionals(H, l)
    n = r1
    Phi = [gb.entries(R, p, n) for p in phis]
    A = [gb.entries(R, c, n) for c in cols]  # A[j][i]
    choice = None
    for I in itertools.combinations(range(n), r0):
        for ti, T in enumerate(subsT):
            rows = [[R.one() if k == i else R.zero() for k in range(n)] for i in I] + [Phi[t] for t in T]
            dN = det(R, rows)
            if dN and R.is_nzd(dN):
                dBa = det(R, [[A[j][i] for j in range(r0)] for i in I])
                choice = (I, ti, dN, dBa)
                break
        if choice:
            break
    if choice is None:
        raise ModuleError("no admissible normalization for theta")
    I, ti, dN, dBa = choice
    vals = []
    for p in psis:
        num = R.mul(dBa, gb.entries(R, p, len(subsT))[ti]) if subsT else dBa
        v = divide(R, num, dN)
        if v is None:
            raise ModuleError("theta does not land in R")
        vals.append(v)
    tgt = md.free(R, 1)
    theta = md.ModuleHom(alpha.tgt, tgt, [gb.vec(R, [v]) for v in vals])
    comp = theta.compose(alpha)
    agrees = all(not _vsub(R, comp.images[k], gb.vec(R, [res.values[k]]))
                 for k in range(len(res.values)))
    K, _ = md.kernel(theta)
    unit = md.ideal_is_unit(R, vals)
    return theta, {"agrees_with_psi": agrees, "kernel_zero": K.is_zero(), "image_unit": unit}


# ---- determinant functor ---------------------------------------------------

def det_trivialization(C):
    """Fractional ideal generated by the torsion of C (cohomology must be torsion)."""
    R = C.ring
    n = len(C.ranks)
    if n == 0:
        return md.FractionalIdeal(R, [R.one()])
    rho = []
    prev = 0
    for k in range(n):
        rho.append(C.ranks[k] - prev)
        prev = rho[-1]
        if prev < 0:
            raise ModuleError("cohomology is not torsion")
    if rho[-1] != 0:
        raise ModuleError("cohomology is not torsion")
    mats = [C.matrix(C.lo + k) for k in range(n - 1)]
    found = _search_minors(R, C, mats, rho)
    if found is None:
        raise ModuleError("cohomology is not torsion")
    num, den = R.one(), R.one()
    for k, m in enumerate(found):
        if (C.lo + k + 1) % 2 == 0:
            num = R.mul(num, m)
        else:
            den = R.mul(den, m)
    q = divide(R, num, den)
    if q is not None:
        return md.FractionalIdeal(R, [q])
    return md.FractionalIdeal(R, [num], den)


def _search_minors(R, C, mats, rho):
    n = len(C.ranks)

    def rec(k, Jk, acc):
        if k == n - 1:
            return acc
        r_next = C.ranks[k + 1]
        for Jn in itertools.combinations(range(r_next), rho[k + 1]):
            rows = [i for i in range(r_next) if i not in Jn]
            if len(rows) != len(Jk):
                continue
            m = det(R, [[mats[k][i][j] for j in Jk] for i in rows])
            if m and R.is_nzd(m):
                got = rec(k + 1, Jn, acc + [m])
                if got is not None:
                    return got
        return None

    return rec(0, tuple(range(C.ranks[0])), [])


def l_alg(C):
    """Monic generator of the integral principal ideal given by the determinant of C."""
    R = C.ring
    FI = det_trivialization(C)
    g = divide(R, FI.num[0], FI.den)
    if g is None:
        raise ModuleError("determinant ideal is not integral")
    g = R.monic(g)
    nz = [i for i in range(C.lo, C.hi + 1) if C.rank(i)]
    if nz and nz[-1] - nz[0] <= 1:
        top = cohomology(C, nz[-1]).module
        F = md.fitting_ideal(top, 0) if top.ngens else [R.one()]
        if not md.ideal_equal(R, [g], F):
            raise ModuleError("determinant and Fitting ideal disagree")
    return g
