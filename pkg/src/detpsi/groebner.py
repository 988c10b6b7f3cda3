"""Buchberger's algorithm for submodules of R^n, R = F_p[x][G], position-over-term.

A vector is a dict {key: coeff}; the position is encoded in the key, lower index ranks higher.
The group relations t_j^{n_j} - 1 are appended at every position, so all results are
statements about R-modules.
"""
import heapq
import itertools

from .ring_core import RingError

MAX_BASIS = 20000


class SizeLimitExceeded(RuntimeError):
    pass


# ---- vector helpers ----------------------------------------------------------

def vec(ring, entries, offset=0):
    """Column vector from a list of ring elements."""
    out = {}
    PS = ring.PS
    for i, f in enumerate(entries):
        s = (i + offset) << PS
        for k, c in f.items():
            out[k - s] = c
    return out


def entries(ring, v, n, offset=0):
    out = [{} for _ in range(n)]
    PS = ring.PS
    for k, c in v.items():
        i = ring.pos(k) - offset
        if 0 <= i < n:
            out[i][k + ((i + offset) << PS)] = c
    return out


def shift(ring, v, s):
    """Move every entry s positions down."""
    d = s << ring.PS
    return {k - d: c for k, c in v.items()}


def vec_mul(ring, f, v):
    return ring.mul(f, v)


def vec_add(ring, u, v):
    return ring.add(u, v)


def vec_comb(ring, coeffs, vecs):
    out = {}
    for c, v in zip(coeffs, vecs):
        if c and v:
            out = ring.add(out, ring.mul(c, v))
    return out


def max_pos(ring, v):
    return max((ring.pos(k) for k in v), default=-1)


# ---- reduction ---------------------------------------------------------------

class _Reducer:
    __slots__ = ("ring", "bypos")

    def __init__(self, ring):
        self.ring = ring
        self.bypos = {}

    def add(self, g):
        lk = max(g)
        self.bypos.setdefault(self.ring.pos(lk), []).append((lk ^ self.ring.KEYMASK, g))

    def find(self, k):
        lst = self.bypos.get(self.ring.pos(k))
        if not lst:
            return None, 0
        b = k ^ self.ring.KEYMASK
        guard = self.ring.GUARD
        for a, g in lst:
            diff = b - a
            if diff >= 0 and not diff & guard:
                return g, diff
        return None, 0

    def reduce(self, f, full=True):
        ring = self.ring
        p = ring.p
        DEG, EXP = ring.DEGMASK, ring.EXPMASK
        f = dict(f)
        heap = [-k for k in f]
        heapq.heapify(heap)
        rem = {}
        while heap:
            k = -heapq.heappop(heap)
            c = f.get(k)
            if not c:
                continue
            g, m = self.find(k)
            if g is None:
                if not full:
                    return f
                rem[k] = c
                del f[k]
                continue
            dl = (m & DEG) - (m & EXP)
            for kg, cg in g.items():
                kk = kg + dl
                old = f.get(kk)
                v = ((old or 0) - c * cg) % p
                if v:
                    if old is None:
                        heapq.heappush(heap, -kk)
                    f[kk] = v
                elif old is not None:
                    del f[kk]
        return rem


def _monic(ring, f):
    lc = f[max(f)]
    if lc == 1:
        return f
    inv = ring.inv(lc)
    p = ring.p
    return {k: c * inv % p for k, c in f.items()}


def buchberger(ring, gens, rank, relations=True, trace=None, limit=MAX_BASIS, tails=True, record=None):
    """Reduced Groebner basis (list of monic vectors, sorted by leading key descending).

    With tails=False the basis is only minimal, which is enough for syzygies and lifting.
    With a list `record`, entries at positions >= rank are carried along as cofactors:
    only positions < rank take part in leading terms, and every reduction whose
    positions < rank vanish appends its cofactor part to `record`.
    """
    p = ring.p
    KM, PS = ring.KEYMASK, ring.PS
    G = []
    leads = []
    alive = []
    is_rel = []
    red = _Reducer(ring)
    pairs = []

    def lcm_of(ka, kb):
        return ring.lcm_word(ka, kb)

    def add_elem(h, rel=False):
        n = len(G)
        lk = max(h)
        G.append(h)
        leads.append(lk)
        alive.append(True)
        is_rel.append(rel)
        if len(G) > limit:
            raise SizeLimitExceeded(f"Groebner basis exceeded {limit} elements")
        hpos = ring.pos(lk)
        hw = lk ^ KM
        # Gebauer-Moeller: drop old pairs made redundant by h
        if pairs:
            keep = []
            for item in pairs:
                _, _, lw, i, j = item
                if lw >> PS == hpos:
                    diff = lw - hw
                    if diff >= 0 and not diff & ring.GUARD:
                        if lcm_of(leads[i], lk) != lw and lcm_of(leads[j], lk) != lw:
                            continue
                keep.append(item)
            if len(keep) != len(pairs):
                heapq.heapify(keep)
                pairs[:] = keep
        new = []
        for i in range(n):
            if not alive[i] or ring.pos(leads[i]) != hpos:
                continue
            lw = lcm_of(leads[i], lk)
            coprime = (ring.deg(lw ^ KM) == ring.deg(leads[i]) + ring.deg(lk))
            new.append((lw, i, coprime))
        # chain criterion among the new pairs
        new.sort(key=lambda t: ((t[0] >> ring.DS) & 0xFFFF, t[0] ^ KM))
        chosen = []
        for lw, i, coprime in new:
            redundant = False
            for lw2, _, _ in chosen:
                diff = lw - lw2
                if diff >= 0 and not diff & ring.GUARD:
                    redundant = True
                    break
            if redundant:
                continue
            chosen.append((lw, i, coprime))
        for lw, i, coprime in chosen:
            if coprime and record is None and (rank == 1 or rel or is_rel[i]):
                continue
            heapq.heappush(pairs, ((lw >> ring.DS) & 0xFFFF, lw ^ KM, lw, i, n))
        # older elements whose lead h divides are no longer needed for new pairs
        for i in range(n):
            if alive[i] and ring.pos(leads[i]) == hpos:
                diff = (leads[i] ^ KM) - hw
                if diff > 0 and not diff & ring.GUARD:
                    alive[i] = False
        red.add(h)

    if relations and ring.orders:
        for pos in range(rank):
            for r in ring.relation_vectors(pos):
                add_elem(r, rel=True)
    def take(h):
        if not h:
            return
        if record is not None:
            h = ring.reduce_group(h)
            if not h:
                return
            if ring.pos(max(h)) >= rank:
                record.append(h)
                return
        add_elem(_monic(ring, h))

    for g in gens:
        if g:
            take(red.reduce(g, full=False))
    while pairs:
        _, _, lw, i, j = heapq.heappop(pairs)
        gi, gj = G[i], G[j]
        mi = lw - (leads[i] ^ KM)
        mj = lw - (leads[j] ^ KM)
        di = (mi & ring.DEGMASK) - (mi & ring.EXPMASK)
        dj = (mj & ring.DEGMASK) - (mj & ring.EXPMASK)
        s = {k + di: c for k, c in gi.items()}
        for k, c in gj.items():
            kk = k + dj
            v = (s.get(kk, 0) - c) % p
            if v:
                s[kk] = v
            else:
                s.pop(kk, None)
        h = red.reduce(s, full=False) if s else s
        if trace is not None:
            trace(f"pair {i} {j} deg {(lw >> ring.DS) & 0xFFFF} -> {'zero' if not h else 'new ' + str(len(G))}")
        take(h)
    return _interreduce(ring, [g for g, a in zip(G, alive) if a], tails)


def _interreduce(ring, G, tails=True):
    # minimal basis: drop elements whose lead is divisible by another lead
    G = sorted(G, key=max)
    minimal = []
    for g in G:
        lk = max(g)
        ok = True
        for h in minimal:
            if ring.divides(max(h), lk) >= 0:
                ok = False
                break
        if ok:
            minimal.append(g)
    if not tails:
        return sorted((_monic(ring, g) for g in minimal), key=max, reverse=True)
    out = []
    for idx, g in enumerate(minimal):
        red = _Reducer(ring)
        for j, h in enumerate(minimal):
            if j != idx:
                red.add(h)
        lk = max(g)
        tail = dict(g)
        del tail[lk]
        tail = red.reduce(tail)
        tail[lk] = g[lk]
        out.append(_monic(ring, tail))
    out.sort(key=max, reverse=True)
    return out


class Basis:
    """A reduced Groebner basis of a submodule of R^rank (group relations included)."""
    __slots__ = ("ring", "rank", "elems", "_red")

    def __init__(self, ring, rank, elems):
        self.ring = ring
        self.rank = rank
        self.elems = elems
        self._red = _Reducer(ring)
        for g in elems:
            self._red.add(g)

    def reduce(self, v):
        if not v:
            return {}
        return self._red.reduce(v)

    def contains(self, v):
        return not self.reduce(v)

    def contains_all(self, vs):
        return all(self.contains(v) for v in vs)

    def generators(self):
        """Elements that are not pure group relations."""
        rels = set()
        if self.ring.orders:
            for pos in range(self.rank):
                for r in self.ring.relation_vectors(pos):
                    rels.add(frozenset(r.items()))
        return [g for g in self.elems if frozenset(g.items()) not in rels]

    def is_unit_ideal(self):
        return self.rank == 1 and any(self.ring.ONE in g and len(g) == 1 for g in self.elems)

    def leads(self):
        return [max(g) for g in self.elems]

    def dump(self):
        return "\n".join(self.ring.fmt(g) if self.rank == 1 else _fmt_vec(self.ring, g, self.rank)
                         for g in self.elems)


def _fmt_vec(ring, v, n):
    return "(" + ", ".join(ring.fmt(e) for e in entries(ring, v, n)) + ")"


def groebner(ring, gens, rank, trace=None):
    return Basis(ring, rank, buchberger(ring, gens, rank, trace=trace))


def reduce(ring, v, gens, rank):
    return groebner(ring, gens, rank).reduce(v)


# ---- syzygies and lifting ----------------------------------------------------

def _augmented(ring, gens, rank, record=None):
    """Groebner basis of the (gens_i, e_i) with cofactors carried at positions rank.. (Schreyer style)."""
    aug = []
    PS = ring.PS
    for i, g in enumerate(gens):
        v = dict(g)
        v[ring.ONE - ((rank + i) << PS)] = 1
        aug.append(v)
    return buchberger(ring, aug, rank, tails=False, record=record)


def syzygies(ring, gens, rank):
    """Generators of {c in R^s : sum c_i gens_i = 0}, not necessarily a Groebner basis.

    They are the cofactors of the reductions to zero met while computing a Groebner
    basis of the gens, which generate all syzygies by Schreyer's theorem.
    """
    if not gens:
        return []
    rec = []
    _augmented(ring, gens, rank, rec)
    out = []
    seen = set()
    for g in rec:
        v = shift(ring, g, -rank)
        fz = frozenset(v.items())
        if v and fz not in seen:
            seen.add(fz)
            out.append(v)
    if len(out) > 1:
        # a minimal basis keeps iterated syzygies small; give up on it if it grows
        try:
            G = buchberger(ring, out, len(gens), tails=False, limit=4 * len(out) + 20)
            out = [v for v in (ring.reduce_group(g) for g in G) if v]
        except SizeLimitExceeded:
            pass
    return out


class Lifter:
    """Expresses vectors as R-combinations of fixed generators."""
    __slots__ = ("ring", "rank", "s", "red")

    def __init__(self, ring, gens, rank):
        self.ring = ring
        self.rank = rank
        self.s = len(gens)
        self.red = _Reducer(ring)
        for g in (_augmented(ring, gens, rank) if gens else []):
            self.red.add(g)

    def lift(self, v):
        """Coefficient list c with v = sum c_i gens_i, or None if v is not in the span."""
        if not v:
            return [{} for _ in range(self.s)]
        r = self.red.reduce(v)
        if any(self.ring.pos(k) < self.rank for k in r):
            return None
        c = entries(self.ring, self.ring.reduce_group(r), self.s, offset=self.rank)
        return [self.ring.neg(x) for x in c]


def lift(ring, gens, rank, targets):
    L = Lifter(ring, gens, rank)
    return [L.lift(t) for t in targets]


# ---- module operations -----------------------------------------------------

def intersect(ring, U, V, rank):
    """Generators of span(U) ∩ span(V) inside R^rank."""
    if not U or not V:
        return []
    syz = syzygies(ring, list(U) + list(V), rank)
    out = []
    for c in syz:
        cs = entries(ring, c, len(U))
        w = vec_comb(ring, cs, U)
        if w:
            out.append(w)
    return out


def colon_elem(ring, U, f, rank):
    """(U : f) = {v : f v in span U}."""
    basis = [vec(ring, [f], offset=i) for i in range(rank)]
    syz = syzygies(ring, basis + list(U), rank)
    out = []
    for c in syz:
        v = {k: x for k, x in c.items() if ring.pos(k) < rank}
        if v:
            out.append(v)
    return out


def colon(ring, U, ideal, rank):
    """(U : I) for an ideal I given by generators."""
    gens = [g for g in ideal if g]
    if not gens:
        return [vec(ring, [ring.one()], offset=i) for i in range(rank)]
    cur = None
    for f in gens:
        C = colon_elem(ring, U, f, rank)
        cur = C if cur is None else intersect(ring, cur, C, rank)
    return cur


def saturate_elem(ring, U, f, rank, max_steps=16):
    """(U : f^infinity) by colons with f^(2^k) until two consecutive ones agree."""
    g = f
    cur = colon_elem(ring, U, g, rank)
    G = groebner(ring, cur, rank)
    for _ in range(max_steps):
        g = ring.mul(g, g)
        nxt = colon_elem(ring, U, g, rank)
        if G.contains_all(nxt):
            return G.generators() or []
        cur = nxt
        G = groebner(ring, cur, rank)
    raise RuntimeError("saturation did not stabilize")


def saturate(ring, U, ideal, rank):
    """(U : I^infinity) as the intersection of the saturations by each generator of I."""
    gens = [g for g in ideal if g]
    if not gens:
        return [vec(ring, [ring.one()], offset=i) for i in range(rank)]
    cur = None
    for f in gens:
        C = saturate_elem(ring, U, f, rank)
        cur = C if cur is None else intersect(ring, cur, C, rank)
    return cur


def ideal_colon(ring, I, J):
    return colon(ring, I, J, 1)


def poly_gcd(B, f, g):
    """Monic gcd in a polynomial ring without group variables.

    The syzygies of (f, g) are generated by (g/h, -f/h) with h = gcd(f, g).
    """
    if not f or not g:
        h = f or g
        return _monic(B, h) if h else h
    syz = groebner(B, syzygies(B, [vec(B, [f]), vec(B, [g])], 1), 2).elems
    a = min((entries(B, z, 2)[0] for z in syz if entries(B, z, 2)[0]), key=lambda e: (max(e), len(e)))
    h = Lifter(B, [vec(B, [a])], 1).lift(vec(B, [g]))[0]
    return _monic(B, h)


def same_module(ring, U, V, rank):
    GU, GV = groebner(ring, U, rank), groebner(ring, V, rank)
    return GU.contains_all(V) and GV.contains_all(U)


def contract_to_base(ring, I):
    """I ∩ Lambda for an ideal I of R, returned as base-ring polynomials."""
    B = ring.base()
    gens = [g for g in I if g]
    if B is ring:
        return [g for g in groebner(ring, gens, 1).elems]
    basis = ring.group_basis
    N = len(basis)
    # group monomial 1 sits in the last position so elimination keeps it last
    order = {g: N - 1 - i for i, g in enumerate(basis)}
    vecs = []
    for f in gens:
        for g in basis:
            tg = ring.from_terms([((0,) * ring.d + g, 1)])
            prod = ring.mul(tg, f)
            parts = ring.split_group(prod)
            v = {}
            for h, lam in parts.items():
                s = order[h] << B.PS
                for k, c in lam.items():
                    v[k - s] = c
            if v:
                vecs.append(v)
    G = buchberger(B, vecs, N)
    out = []
    for g in G:
        if B.pos(max(g)) == N - 1:
            out.append(shift(B, g, -(N - 1)))
    return out


def krull_dim(ring, ideal):
    """Krull dimension of Lambda/I for an ideal of Lambda; -1 for the unit ideal."""
    B = ring.base()
    gens = []
    for g in ideal:
        if not g:
            continue
        if not ring.in_base(g):
            raise RingError("krull_dim expects an ideal of the polynomial subring")
        gens.append(ring.to_base(g) if B is not ring else g)
    return krull_dim_base(B, gens)


def krull_dim_base(B, gens):
    G = buchberger(B, gens, 1)
    if any(B.ONE in g and max(g) == B.ONE for g in G):
        return -1
    supports = []
    for g in G:
        e = B.exps(max(g))
        supports.append(frozenset(i for i in range(B.nv) if e[i]))
    best = 0
    for size in range(B.nv, 0, -1):
        for U in itertools.combinations(range(B.nv), size):
            Us = set(U)
            if all(not s <= Us for s in supports):
                return size
    return best


def vdim(ring, G, rank):
    """F_p-dimension of R^rank / span(G) for a Groebner basis G (None if infinite)."""
    by = {}
    for g in G:
        k = max(g)
        by.setdefault(ring.pos(k), []).append(ring.exps(k))
    total = 0
    nv = ring.nv
    for pos in range(rank):
        leads = by.get(pos, [])
        if any(not any(e) for e in leads):
            continue
        # finite iff each variable has a pure power among the leads
        bounds = []
        for i in range(nv):
            pures = [e[i] for e in leads if all(e[j] == 0 for j in range(nv) if j != i) and e[i] > 0]
            if not pures:
                return None
            bounds.append(min(pures))
        for mono in itertools.product(*[range(b) for b in bounds]):
            if not any(all(mono[i] >= e[i] for i in range(nv)) for e in leads):
                total += 1
    return total
