"""Finitely presented R-modules R^n / span(relations) and certified homomorphisms."""
import itertools
import random

from . import groebner as gb
from .ring_core import RingError, det

__all__ = [
    "PresentedModule", "ModuleHom", "FractionalIdeal", "ModuleError", "free", "cyclic",
    "direct_sum", "kernel", "image", "cokernel", "submodule", "quotient", "prune", "dual",
    "hom", "ext", "resolution", "exterior_power", "bidual_map", "torsion_submodule",
    "pseudo_null_part", "finite_part", "is_pseudo_null", "fitting_ideal", "annihilator",
    "annihilator_base", "generic_rank", "char_ideal", "codim", "is_torsion", "all_minors",
]


class ModuleError(ValueError):
    pass


class PresentedModule:
    __slots__ = ("ring", "ngens", "rels", "_gb")

    def __init__(self, ring, ngens, rels):
        self.ring = ring
        self.ngens = ngens
        self.rels = [r for r in rels if r]
        self._gb = None

    def gb(self):
        if self._gb is None:
            self._gb = gb.groebner(self.ring, self.rels, self.ngens)
        return self._gb

    def reduce(self, v):
        return self.gb().reduce(v) if v else {}

    def is_zero_elem(self, v):
        return not self.reduce(v)

    def gen(self, i):
        return {self.ring.ONE - (i << self.ring.PS): 1}

    def is_zero(self):
        return all(self.is_zero_elem(self.gen(i)) for i in range(self.ngens))

    def matrix(self):
        """Relation matrix as a list of rows."""
        cols = [gb.entries(self.ring, r, self.ngens) for r in self.rels]
        return [[c[i] for c in cols] for i in range(self.ngens)]

    def twist(self, sigma):
        return PresentedModule(self.ring, self.ngens, [sigma.apply(r) for r in self.rels])

    def __repr__(self):
        return f"PresentedModule(gens={self.ngens}, rels={len(self.rels)})"

    def to_json(self):
        from .ring_core import elem_to_json
        R = self.ring
        return {"generators": self.ngens,
                "relations": [[elem_to_json(R, e) for e in gb.entries(R, r, self.ngens)] for r in self.rels]}

    @classmethod
    def from_json(cls, ring, obj):
        from .ring_core import elem_from_json
        n = obj["generators"]
        rels = [gb.vec(ring, [elem_from_json(ring, e) for e in col]) for col in obj["relations"]]
        return cls(ring, n, rels)


class ModuleHom:
    """images[i] is the image of generator i of src, a vector in tgt's ambient free module."""
    __slots__ = ("src", "tgt", "images")

    def __init__(self, src, tgt, images, check=True):
        if len(images) != src.ngens:
            raise ModuleError("one image per source generator is required")
        self.src = src
        self.tgt = tgt
        self.images = [tgt.reduce(v) for v in images]
        if check and not self.is_well_defined():
            raise ModuleError("homomorphism does not respect the source relations")

    def is_well_defined(self):
        return all(self.tgt.is_zero_elem(self.apply(r)) for r in self.src.rels)

    def apply(self, v):
        R = self.src.ring
        cs = gb.entries(R, v, self.src.ngens)
        return gb.vec_comb(R, cs, self.images)

    def compose(self, other):
        """self after other."""
        return ModuleHom(other.src, self.tgt, [self.apply(v) for v in other.images], check=False)

    def is_zero(self):
        return all(not v for v in self.images)

    def matrix(self):
        R = self.src.ring
        cols = [gb.entries(R, v, self.tgt.ngens) for v in self.images]
        return [[c[i] for c in cols] for i in range(self.tgt.ngens)]


class FractionalIdeal:
    """numerator ideal divided by a single non-zero-divisor denominator."""
    __slots__ = ("ring", "num", "den")

    def __init__(self, ring, num, den=None):
        self.ring = ring
        self.num = [g for g in num if g]
        self.den = den if den is not None else ring.one()

    def __mul__(self, other):
        R = self.ring
        num = [R.mul(a, b) for a in self.num for b in other.num]
        return FractionalIdeal(R, simplify_ideal(R, num), R.mul(self.den, other.den))

    def __eq__(self, other):
        R = self.ring
        a = [R.mul(g, other.den) for g in self.num]
        b = [R.mul(g, self.den) for g in other.num]
        return ideal_equal(R, a, b)

    def __hash__(self):
        return 0

    def is_integral(self):
        return ideal_contains(self.ring, [self.den], self.num)

    def __repr__(self):
        R = self.ring
        n = "(" + ", ".join(R.fmt(g) for g in self.num) + ")"
        if R.is_constant(self.den):
            return n
        return n + " / (" + R.fmt(self.den) + ")"


# ---- ideals -------------------------------------------------------------------

def simplify_ideal(R, gens):
    gens = [g for g in gens if g]
    if not gens:
        return []
    return gb.groebner(R, gens, 1).generators()


def ideal_contains(R, I, J):
    G = gb.groebner(R, I, 1)
    return G.contains_all([g for g in J if g])


def ideal_equal(R, I, J):
    return ideal_contains(R, I, J) and ideal_contains(R, J, I)


def ideal_is_unit(R, I):
    return ideal_contains(R, I, [R.one()])


def ideal_annihilator(R, I):
    """(0 : I) in R."""
    cur = None
    for f in I:
        if not f:
            continue
        syz = gb.syzygies(R, [f], 1)
        cur = syz if cur is None else gb.intersect(R, cur, syz, 1)
        if not cur:
            return []
    return cur if cur is not None else [R.one()]


def ideal_has_nzd(R, I):
    return not ideal_annihilator(R, [g for g in I if g]) if any(I) else False


# ---- basic constructions ----------------------------------------------------

def free(R, n):
    return PresentedModule(R, n, [])


def cyclic(R, ideal):
    return PresentedModule(R, 1, [gb.vec(R, [f]) for f in ideal if f])


def from_matrix(R, rows):
    """Cokernel of a matrix given by rows (target rank = number of rows)."""
    n = len(rows)
    k = len(rows[0]) if rows else 0
    return PresentedModule(R, n, [gb.vec(R, [rows[i][j] for i in range(n)]) for j in range(k)])


def identity(M):
    return ModuleHom(M, M, [M.gen(i) for i in range(M.ngens)], check=False)


def direct_sum(*mods):
    """(M, injections, projections)."""
    R = mods[0].ring
    n = sum(m.ngens for m in mods)
    rels, inj, proj, off = [], [], [], 0
    S = None
    for m in mods:
        rels += [gb.shift(R, r, off) for r in m.rels]
        off += m.ngens
    S = PresentedModule(R, n, rels)
    off = 0
    for m in mods:
        inj.append(ModuleHom(m, S, [S.gen(off + i) for i in range(m.ngens)], check=False))
        imgs = [m.gen(i - off) if off <= i < off + m.ngens else {} for i in range(n)]
        proj.append(ModuleHom(S, m, imgs, check=False))
        off += m.ngens
    return S, inj, proj


def submodule(M, vecs, do_prune=True):
    """The submodule of M generated by vecs: (N, inclusion N -> M)."""
    R = M.ring
    vecs = [v for v in vecs]
    s = len(vecs)
    if s == 0:
        N = PresentedModule(R, 0, [])
        return N, ModuleHom(N, M, [], check=False)
    syz = gb.syzygies(R, vecs + list(M.rels), M.ngens)
    rels = []
    for c in syz:
        v = {k: x for k, x in c.items() if R.pos(k) < s}
        if v:
            rels.append(v)
    N = PresentedModule(R, s, rels)
    inc = ModuleHom(N, M, vecs, check=False)
    if do_prune:
        N2, to_N, _ = prune(N)
        return N2, inc.compose(to_N)
    return N, inc


def subquotient(R, n, Z, B, do_prune=True):
    """span(Z) / span(B) inside R^n, with B contained in span(Z); generators are Z."""
    return submodule(PresentedModule(R, n, list(B)), list(Z), do_prune)[0]


def quotient(M, vecs):
    Q = PresentedModule(M.ring, M.ngens, list(M.rels) + [v for v in vecs if v])
    return Q, ModuleHom(M, Q, [Q.gen(i) for i in range(M.ngens)], check=False)


def kernel(h, do_prune=True):
    """(K, inclusion K -> src)."""
    M, N = h.src, h.tgt
    R = M.ring
    a = M.ngens
    if a == 0:
        return submodule(M, [], False)
    syz = gb.syzygies(R, list(h.images) + list(N.rels), N.ngens) if N.ngens else \
        [gb.vec(R, [R.one()], offset=i) for i in range(a)]
    vecs = []
    for c in syz:
        v = M.reduce({k: x for k, x in c.items() if R.pos(k) < a})
        if v:
            vecs.append(v)
    vecs = _dedupe(R, vecs)
    return submodule(M, vecs, do_prune)


def image(h, do_prune=True):
    return submodule(h.tgt, [v for v in h.images if v], do_prune)


def cokernel(h):
    return quotient(h.tgt, h.images)


def _dedupe(R, vecs):
    seen, out = set(), []
    for v in vecs:
        key = frozenset(v.items())
        if v and key not in seen:
            seen.add(key)
            out.append(v)
    return out


def _irredundant(M, vecs):
    """Drop vectors lying in the span of the others plus the relations of M."""
    R = M.ring
    out = _dedupe(R, vecs)
    i = len(out) - 1
    while i >= 0 and len(out) > 1:
        rest = out[:i] + out[i + 1:]
        if gb.groebner(R, rest + list(M.rels), M.ngens).contains(out[i]):
            out = rest
        i -= 1
    return out


def is_injective(h):
    K, _ = kernel(h)
    return K.is_zero()


def is_surjective(h):
    C, _ = cokernel(h)
    return C.is_zero()


def is_iso(h):
    return is_injective(h) and is_surjective(h)


def contains(M, vecs, target):
    """Is target in span(vecs) + relations of M?"""
    G = gb.groebner(M.ring, list(vecs) + list(M.rels), M.ngens)
    return G.contains(target)


def exact_at(f, g):
    """Homology at the middle of X --f--> Y --g--> Z: (True, None) or (False, witness)."""
    Y = f.tgt
    for v in f.images:
        w = g.apply(v)
        if not g.tgt.is_zero_elem(w):
            return False, {"kind": "composite-nonzero", "vector": v}
    K, inc = kernel(g, do_prune=False)
    G = gb.groebner(Y.ring, [v for v in f.images if v] + list(Y.rels), Y.ngens)
    for v in inc.images:
        if not G.contains(v):
            return False, {"kind": "kernel-not-in-image", "vector": G.reduce(v)}
    return True, None


# ---- pruning ---------------------------------------------------------------

def prune(M):
    """Eliminate generators killed by relations with a unit entry.

    Returns (M2, to_M: M2 -> M, from_M: M -> M2), mutually inverse isomorphisms.
    """
    R = M.ring
    n = M.ngens
    rels = [gb.entries(R, r, n) for r in M.rels]
    rels = [r for r in rels if any(r)]
    # expr[i]: old generator i in terms of current generators (None = itself)
    keep = list(range(n))
    subst = {}
    changed = True
    while changed:
        changed = False
        best = None
        for ri, r in enumerate(rels):
            for j in keep:
                e = r[j]
                if e and R.is_constant(e):
                    cost = sum(1 for x in r if x)
                    if best is None or cost < best[0]:
                        best = (cost, ri, j)
        if best is None:
            break
        _, ri, j = best
        r = rels.pop(ri)
        c = r[j][R.ONE]
        f = R.neg(R.const(R.inv(c)))
        w = [R.mul(f, x) if i != j else {} for i, x in enumerate(r)]
        subst[j] = w
        keep.remove(j)
        new = []
        for s in rels:
            if s[j]:
                coef = s[j]
                s = [R.add(x, R.mul(coef, wi)) if i != j else {} for i, (x, wi) in enumerate(zip(s, w))]
            if any(s):
                new.append(s)
        rels = new
        changed = True
    # express eliminated generators purely in kept ones (resolve chains)
    resolved = {}

    def resolve(j):
        if j in resolved:
            return resolved[j]
        out = [{} for _ in range(n)]
        for i, x in enumerate(subst[j]):
            if not x:
                continue
            if i in subst:
                sub = resolve(i)
                for t in range(n):
                    if sub[t]:
                        out[t] = R.add(out[t], R.mul(x, sub[t]))
            else:
                out[i] = R.add(out[i], x)
        resolved[j] = out
        return out

    newidx = {g: i for i, g in enumerate(keep)}
    m = len(keep)
    rels2 = []
    seen = set()
    for r in rels:
        v = gb.vec(R, [r[g] for g in keep])
        key = frozenset(v.items())
        if v and key not in seen:
            seen.add(key)
            rels2.append(v)
    M2 = PresentedModule(R, m, rels2)
    to_M = ModuleHom(M2, M, [M.gen(g) for g in keep], check=False)
    imgs = []
    for i in range(n):
        if i in newidx:
            imgs.append(M2.gen(newidx[i]))
        else:
            out = resolve(i)
            imgs.append(gb.vec(R, [out[g] for g in keep]))
    from_M = ModuleHom(M, M2, imgs, check=False)
    return M2, to_M, from_M


# ---- duals, Hom, Ext -------------------------------------------------------

def transpose_cols(R, cols, nrows):
    """Columns of the transpose of the matrix whose columns are `cols` (each in R^nrows)."""
    ents = [gb.entries(R, c, nrows) for c in cols]
    return [gb.vec(R, [ents[j][i] for j in range(len(cols))]) for i in range(nrows)]


def dual(M):
    """(M*, functionals): functionals are vectors phi in R^ngens with phi(e_i) = phi_i."""
    R = M.ring
    b = M.ngens
    if b == 0:
        return PresentedModule(R, 0, []), []
    if not M.rels:
        phis = [M.gen(i) for i in range(b)]
    else:
        cols = transpose_cols(R, M.rels, b)  # R^b -> R^k, columns indexed by generators
        phis = gb.syzygies(R, cols, len(M.rels))
    phis = _dedupe(R, phis)
    D, inc = submodule(free(R, b), phis)
    return D, [inc.images[i] for i in range(D.ngens)]


def evaluate(R, phi, v, n):
    a = gb.entries(R, phi, n)
    b = gb.entries(R, v, n)
    out = {}
    for x, y in zip(a, b):
        if x and y:
            out = R.add(out, R.mul(x, y))
    return out


def hom(M, N):
    """Hom(M, N) as a presented module; each element is a vector in R^(M.ngens * N.ngens)
    whose i-th block is the image of generator i."""
    R = M.ring
    a, b = M.ngens, N.ngens
    blocks = PresentedModule(R, a * b, [gb.shift(R, r, i * b) for i in range(a) for r in N.rels])
    k = len(M.rels)
    tgt = PresentedModule(R, k * b, [gb.shift(R, r, j * b) for j in range(k) for r in N.rels])
    rel_ents = [gb.entries(R, r, a) for r in M.rels]
    imgs = []
    for i in range(a):
        for beta in range(b):
            v = {}
            for j in range(k):
                c = rel_ents[j][i]
                if c:
                    v = R.add(v, R.mul(c, tgt.gen(j * b + beta)))
            imgs.append(v)
    h = ModuleHom(blocks, tgt, imgs, check=False)
    K, inc = kernel(h)
    return K, inc


def hom_elem_to_map(M, N, v):
    R = M.ring
    b = N.ngens
    ents = gb.entries(R, v, M.ngens * b)
    imgs = [gb.vec(R, ents[i * b:(i + 1) * b]) for i in range(M.ngens)]
    return ModuleHom(M, N, imgs)


def resolution(M, length):
    """Free resolution differentials [d1, d2, ...]; d_i is a list of columns in R^{n_{i-1}}."""
    R = M.ring
    ranks = [M.ngens]
    diffs = []
    cur = list(M.rels)
    for i in range(length):
        cur = _dedupe(R, [c for c in cur if c])
        diffs.append(cur)
        ranks.append(len(cur))
        if not cur:
            for _ in range(i + 1, length):
                diffs.append([])
                ranks.append(0)
            break
        cur = gb.syzygies(R, cur, ranks[-2])
    return ranks, diffs


def homology(R, n, incoming, outgoing, nout):
    """ker(outgoing: R^n -> R^nout) / span(incoming) as a presented module."""
    if n == 0:
        return PresentedModule(R, 0, [])
    if outgoing:
        Z = gb.syzygies(R, outgoing, nout) if nout else [gb.vec(R, [R.one()], offset=i) for i in range(n)]
    else:
        Z = [gb.vec(R, [R.one()], offset=i) for i in range(n)]
    Z = _dedupe(R, Z)
    return subquotient(R, n, Z, [c for c in incoming if c])


def ext(M, i):
    """Ext^i_R(M, R)."""
    R = M.ring
    if i < 0:
        raise ModuleError("negative Ext index")
    M2, _, _ = prune(M)
    ranks, diffs = resolution(M2, i + 1)
    # dual complex: F_i^* --(d_{i+1})^T--> F_{i+1}^*
    n = ranks[i]
    out_cols = transpose_cols(R, diffs[i], ranks[i]) if ranks[i + 1] else []
    if i == 0:
        inc = []
    else:
        inc = transpose_cols(R, diffs[i - 1], ranks[i - 1]) if ranks[i] else []
    if n == 0:
        return PresentedModule(R, 0, [])
    outgoing = out_cols if ranks[i + 1] else []
    # out_cols are indexed by the basis of F_i (length n), each a vector in R^{n_{i+1}}
    return homology(R, n, inc, outgoing, ranks[i + 1])


# ---- exterior powers ---------------------------------------------------------

def _subset_index(n, l):
    subs = list(itertools.combinations(range(n), l))
    return subs, {s: i for i, s in enumerate(subs)}


def wedge_insert(i, T):
    """(sign, sorted subset) for e_i ^ e_T, or (0, None)."""
    if i in T:
        return 0, None
    pos = sum(1 for t in T if t < i)
    S = tuple(sorted(T + (i,)))
    return (-1) ** pos, S


def exterior_power(M, l):
    R = M.ring
    n = M.ngens
    if l < 0:
        raise ModuleError("negative exterior power")
    if l == 0:
        return free(R, 1)
    if l > n:
        return PresentedModule(R, 0, [])
    subs, idx = _subset_index(n, l)
    rels = []
    lower = list(itertools.combinations(range(n), l - 1))
    for r in M.rels:
        ents = gb.entries(R, r, n)
        for T in lower:
            v = {}
            for i, e in enumerate(ents):
                if not e:
                    continue
                sg, S = wedge_insert(i, T)
                if not sg:
                    continue
                term = e if sg > 0 else R.neg(e)
                v = R.add(v, gb.vec(R, [term], offset=idx[S]))
            if v:
                rels.append(v)
    return PresentedModule(R, len(subs), _dedupe(R, rels))


def wedge_vectors(R, vecs, n):
    """Coordinates of v_1 ^ ... ^ v_l in the subset basis of wedge^l R^n."""
    l = len(vecs)
    subs, _ = _subset_index(n, l)
    ents = [gb.entries(R, v, n) for v in vecs]
    out = {}
    for k, S in enumerate(subs):
        mat = [[ents[j][S[i]] for j in range(l)] for i in range(l)]
        m = det(R, mat)
        if m:
            out = R.add(out, gb.vec(R, [m], offset=k))
    return out


def double_dual_functionals(M, l):
    """Data for the l-th exterior bidual: (phis, W = wedge^l M*, psi generators, subsets)."""
    R = M.ring
    D, phis = dual(M)
    s = len(phis)
    W = exterior_power(D, l)
    if l == 0:
        return phis, W, [gb.vec(R, [R.one()])], [()]
    Wd, psis = dual(W) if W.ngens else (PresentedModule(R, 0, []), [])
    return phis, W, psis, list(itertools.combinations(range(s), l))


def alpha_vectors(M, l, phis=None):
    """alpha^l(e_S) as vectors in R^{C(s,l)}: entries det(phi_{T_i}(e_{S_j}))."""
    R = M.ring
    if phis is None:
        _, phis = dual(M)
    n = M.ngens
    s = len(phis)
    Phi = [gb.entries(R, ph, n) for ph in phis]  # Phi[j][i] = phi_j(e_i)
    subsS = list(itertools.combinations(range(n), l))
    subsT = list(itertools.combinations(range(s), l))
    out = []
    for S in subsS:
        v = {}
        for k, T in enumerate(subsT):
            mat = [[Phi[T[a]][S[b]] for b in range(l)] for a in range(l)]
            m = det(R, mat)
            if m:
                v = R.add(v, gb.vec(R, [m], offset=k))
        out.append(v)
    return out, subsT


def bidual_map(M, l):
    """alpha^l: wedge^l M -> (wedge^l M*)* as a certified ModuleHom."""
    R = M.ring
    src = exterior_power(M, l)
    phis, W, psis, subsT = double_dual_functionals(M, l)
    if l == 0:
        tgt = free(R, 1)
        return ModuleHom(src, tgt, [tgt.gen(0)])
    tgt, inc = submodule(free(R, len(subsT)), psis, do_prune=False)
    alphas, _ = alpha_vectors(M, l, phis)
    L = gb.Lifter(R, psis, len(subsT))
    imgs = []
    for a in alphas:
        c = L.lift(a)
        if c is None:
            raise ModuleError("alpha image not in the bidual (internal error)")
        imgs.append(gb.vec(R, c))
    return ModuleHom(src, tgt, imgs)


def torsion_submodule(M):
    """Kernel of M -> M**: (T, inclusion)."""
    R = M.ring
    n = M.ngens
    _, phis = dual(M)
    if not phis:
        return submodule(M, [M.gen(i) for i in range(n)])
    s = len(phis)
    tgt = free(R, s)
    Phi = [gb.entries(R, ph, n) for ph in phis]
    imgs = [gb.vec(R, [Phi[j][i] for j in range(s)]) for i in range(n)]
    h = ModuleHom(M, tgt, imgs, check=False)
    return kernel(h)


# ---- annihilators and dimension ------------------------------------------

def annihilator(M):
    """Ann_R(M) as ideal generators."""
    R = M.ring
    if M.ngens == 0 or M.is_zero():
        return [R.one()]
    M = prune(M)[0]
    cur = None
    for i in range(M.ngens):
        g = M.gen(i)
        if M.is_zero_elem(g):
            continue
        syz = gb.syzygies(R, [g] + list(M.rels), M.ngens)
        I = []
        for c in syz:
            v = {k: x for k, x in c.items() if R.pos(k) == 0}
            if v:
                I.append(v)
        cur = I if cur is None else gb.intersect(R, cur, I, 1)
        if not cur:
            return []
    return simplify_ideal(R, cur) if cur is not None else [R.one()]


def annihilator_base(M):
    """Ann_Lambda(M) as base-ring polynomials."""
    R = M.ring
    return gb.contract_to_base(R, annihilator(M))


def dim_base(M):
    R = M.ring
    A = annihilator_base(M)
    return gb.krull_dim_base(R.base(), A)


def codim(M):
    """d - dim(Lambda/Ann_Lambda(M)); d + 1 for the zero module."""
    return M.ring.d - dim_base(M)


def is_pseudo_null(M):
    return dim_base(M) <= M.ring.d - 2


def is_torsion(M):
    return bool(annihilator_base(M))


# ---- Fitting ideals --------------------------------------------------------

def all_minors(R, rows, size, row_sets=None):
    """All size x size minors of a matrix given by rows."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    if size == 0:
        return [R.one()]
    if size > nr or size > nc:
        return []
    out = []
    for rs in (row_sets if row_sets is not None else itertools.combinations(range(nr), size)):
        minors = {(): R.one()}
        for depth, r in enumerate(rs):
            row = rows[r]
            nxt = {}
            for cols, val in minors.items():
                if not val:
                    continue
                for j in range(nc):
                    if j in cols or not row[j]:
                        continue
                    # Laplace along the last row: sign from position of j among cols
                    after = sum(1 for c in cols if c > j)
                    term = R.mul(row[j], val)
                    if after & 1:
                        term = R.neg(term)
                    key = tuple(sorted(cols + (j,)))
                    nxt[key] = R.add(nxt.get(key, {}), term)
            minors = nxt
        out.extend(v for v in minors.values() if v)
    return out


def fitting_ideal(M, i=0):
    """Fitt_i(M) as ideal generators (reduced Groebner basis, group relations dropped)."""
    R = M.ring
    M2, _, _ = prune(M)
    n = M2.ngens
    size = n - i
    if size <= 0:
        return [R.one()]
    rows = M2.matrix()
    if size > len(M2.rels):
        return []
    minors = all_minors(R, rows, size)
    return simplify_ideal(R, minors)


def generic_rank(M):
    R = M.ring
    M2, _, _ = prune(M)
    for r in range(M2.ngens + 1):
        F = fitting_ideal(M2, r)
        if F and ideal_has_nzd(R, F):
            return r
    raise ModuleError("no Fitting ideal contains a non-zero-divisor")


def generates(M, v):
    return PresentedModule(M.ring, M.ngens, list(M.rels) + [v]).is_zero()


def cyclic_generator(M, tries=60):
    """A vector generating M, or None when M is not cyclic.

    M is locally cyclic iff Fitt_1(M) is the unit ideal; a global generator is then
    searched among the generators, their sum and random combinations.
    """
    R = M.ring
    M, to_M, _ = prune(M)
    if M.ngens == 0:
        return {}
    if M.ngens == 1:
        return to_M.apply(M.gen(0))
    if not ideal_is_unit(R, fitting_ideal(M, 1)):
        return None
    gens = [M.gen(i) for i in range(M.ngens)]
    cands = gens + [gb.vec_comb(R, [R.one()] * len(gens), gens)]
    rng = random.Random(M.ngens)
    small = [R.const(c) for c in range(1, R.p)] + [R.var(i) for i in range(R.d)]
    for _ in range(tries):
        cands.append(gb.vec_comb(R, [R.add(rng.choice(small), R.const(rng.randrange(R.p)))
                                     for _ in gens], gens))
    for v in cands:
        if v and generates(M, v):
            return to_M.apply(v)
    raise ModuleError("locally cyclic module: no generator found among the candidates")


# ---- pseudo-null and finite parts -----------------------------------------

def _compose_sub(inner_inc, outer_inc):
    return outer_inc.compose(inner_inc)


def pseudo_null_part(M):
    """Largest pseudo-null submodule: (P, inclusion P -> M).

    For torsion T killed by a nonzero f in Lambda, it is the kernel of
    T -> Hom(Hom(T, R/f), R/f).
    """
    R = M.ring
    T, incT = torsion_submodule(M)
    if T.is_zero():
        return submodule(M, [])
    if is_pseudo_null(T):
        return T, incT
    A = annihilator_base(T)
    f = min((a for a in A if a), key=lambda g: (len(g), max(g)))
    f = R.from_base(f)
    Rf = cyclic(R, [f])
    H, incH = hom(T, Rf)
    maps = [hom_elem_to_map(T, Rf, incH.images[j]) for j in range(H.ngens)]
    s = len(maps)
    tgt = PresentedModule(R, s, [gb.vec(R, [f], offset=j) for j in range(s)])
    imgs = []
    for i in range(T.ngens):
        v = {}
        for j, mp in enumerate(maps):
            e = gb.entries(R, mp.images[i], 1)[0]
            if e:
                v = R.add(v, gb.vec(R, [e], offset=j))
        imgs.append(v)
    ev = ModuleHom(T, tgt, imgs, check=False)
    K, incK = kernel(ev)
    return K, incT.compose(incK)


def local_torsion_vectors(M, ideal):
    """Vectors generating (0 :_M I^infinity) modulo the relations of M."""
    R = M.ring
    sat = gb.saturate(R, list(M.rels), ideal, M.ngens)
    return [v for v in sat if not M.is_zero_elem(v)]


def finite_part(M):
    """(0 :_M (x_1..x_d)^infinity), the largest submodule of finite F_q-dimension."""
    R = M.ring
    P, to_M, _ = prune(M)
    S = local_torsion_vectors(P, [R.var(i) for i in range(R.d)])
    return submodule(M, [to_M.apply(v) for v in _irredundant(P, S)])


# ---- characteristic ideal ------------------------------------------------

def char_ideal(M, cross_check=True):
    """Characteristic ideal of a torsion module over Lambda with d = 2, as a monic generator."""
    R = M.ring
    if R.has_group or R.d != 2:
        raise ModuleError("char_ideal needs the polynomial ring in two variables")
    F = fitting_ideal(M, 0)
    if not F:
        raise ModuleError("module is not torsion")
    g = divisorial_generator(R, F)
    if cross_check:
        P, incP = pseudo_null_part(M)
        Q, _ = quotient(M, incP.images)
        F2 = fitting_ideal(Q, 0)
        if not ideal_equal(R, [g], F2):
            raise ModuleError("characteristic ideal routes disagree")
    return g


def divisorial_generator(R, I):
    """Generator of (f) : ((f) : I), the principal hull of a nonzero ideal of a UFD."""
    I = [g for g in I if g]
    f = min(I, key=lambda g: (R.total_degree(g), len(g), max(g)))
    inner = gb.ideal_colon(R, [f], I)
    hull = gb.ideal_colon(R, [f], inner)
    G = simplify_ideal(R, hull)
    if len(G) != 1:
        raise ModuleError("divisorial hull is not principal")
    return R.monic(G[0])
