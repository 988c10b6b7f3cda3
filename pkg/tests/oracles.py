"""Brute-force F_p linear algebra on degree-truncated pieces of R^n.

Nothing here touches Groebner bases: membership is decided by Gaussian
elimination on Macaulay matrices (all monomial multiples of the generators
up to a degree bound).
"""
import itertools


def monomials(R, D):
    """Keys of x-monomials of total degree <= D times every group element."""
    out = []
    for deg in range(D + 1):
        for c in itertools.combinations_with_replacement(range(R.d), deg):
            e = [0] * R.nv
            for i in c:
                e[i] += 1
            for g in R.group_basis:
                f = list(e)
                for j, a in enumerate(g):
                    f[R.d + j] = a
                out.append(tuple(f))
    return out


def poly_deg(R, f):
    return max((sum(R.exps(k)[:R.d]) for k in f), default=-1)


def _mul_vec(R, e, v):
    out = {}
    by = {}
    for k, c in v.items():
        by.setdefault(R.pos(k), {})[R.key(R.exps(k))] = c
    for pos, f in by.items():
        g = R.mul({R.key(e): 1}, f)
        for k, c in g.items():
            out[R.key(R.exps(k), pos)] = c
    return out


def macaulay(R, gens, D):
    """All monomial multiples of the generators with degree <= D."""
    rows = []
    for g in gens:
        if not g:
            continue
        dg = poly_deg(R, g)
        for e in monomials(R, D - dg) if D >= dg else []:
            rows.append(_mul_vec(R, e, g))
    return rows


class Echelon:
    """Incremental row echelon form over F_p on dict vectors."""
    __slots__ = ("p", "rows")

    def __init__(self, p):
        self.p = p
        self.rows = {}  # pivot key -> row with that pivot coefficient 1

    def reduce(self, v):
        v = dict(v)
        p = self.p
        while v:
            changed = False
            for k in sorted(v, reverse=True):
                r = self.rows.get(k)
                if r is None:
                    continue
                c = v[k]
                for kk, cc in r.items():
                    x = (v.get(kk, 0) - c * cc) % p
                    if x:
                        v[kk] = x
                    else:
                        v.pop(kk, None)
                changed = True
                break
            if not changed:
                return v
        return v

    def add(self, v):
        v = self.reduce(v)
        if not v:
            return False
        k = max(v)
        inv = pow(v[k], self.p - 2, self.p)
        self.rows[k] = {kk: c * inv % self.p for kk, c in v.items()}
        return True

    def rank(self):
        return len(self.rows)


def span(R, vecs):
    E = Echelon(R.p)
    for v in vecs:
        E.add(v)
    return E


def in_module(R, gens, target, D):
    """target in the R-span of gens, certified with multiples of degree <= D."""
    if not target:
        return True
    return not span(R, macaulay(R, gens, D)).reduce(target)


def modules_equal(R, U, V, D):
    return all(in_module(R, V, u, D) for u in U if u) and all(in_module(R, U, v, D) for v in V if v)


def det(R, mat):
    """Leibniz expansion."""
    n = len(mat)
    total = {}
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = R.one()
        for i in range(n):
            term = R.mul(term, mat[i][perm[i]])
            if not term:
                break
        if term:
            total = R.add(total, term if inv % 2 == 0 else R.neg(term))
    return total


def fitting_ideal(R, rows, i=0):
    """Ideal of (n-i)-minors of the n x k presentation matrix given by rows."""
    n = len(rows)
    k = len(rows[0]) if rows else 0
    size = n - i
    if size <= 0:
        return [R.one()]
    if size > k:
        return []
    out = []
    for rs in itertools.combinations(range(n), size):
        for cs in itertools.combinations(range(k), size):
            m = det(R, [[rows[a][b] for b in cs] for a in rs])
            if m:
                out.append(m)
    return out


def syzygy_space(R, gens, D):
    """Basis of {(c_i) : deg c_i <= D, sum c_i gens_i = 0} by nullspace computation."""
    s = len(gens)
    cols = []  # (i, e) -> image vector
    for i in range(s):
        for e in monomials(R, D):
            cols.append((i, e, _mul_vec(R, e, gens[i]) if gens[i] else {}))
    # nullspace via echelon on augmented rows [image | tag]
    p = R.p
    E = Echelon(p)
    null = []
    for idx, (i, e, img) in enumerate(cols):
        v = dict(img)
        v[-(idx + 1)] = 1  # tags sort below every key
        v = E.reduce(v)
        if v and max(v) < 0:
            null.append(v)
        elif v:
            k = max(v)
            inv = pow(v[k], p - 2, p)
            E.rows[k] = {kk: c * inv % p for kk, c in v.items()}
    out = []
    for v in null:
        vec = {}
        for kk, c in v.items():
            i, e, _ = cols[-kk - 1]
            key = R.key(e, i)
            vec[key] = (vec.get(key, 0) + c) % p
        out.append({k: c for k, c in vec.items() if c})
    return out


def combine(R, coeffs, gens):
    """sum c_i g_i for polynomials c_i and vectors g_i."""
    out = {}
    for c, g in zip(coeffs, gens):
        if c and g:
            out = _add(R, out, _scale_vec(R, c, g))
    return out


def _scale_vec(R, c, v):
    out = {}
    for ck, cc in c.items():
        for k, x in _mul_vec(R, R.exps(ck), v).items():
            y = (out.get(k, 0) + cc * x) % R.p
            if y:
                out[k] = y
            else:
                out.pop(k, None)
    return out


def _add(R, u, v):
    out = dict(u)
    for k, x in v.items():
        y = (out.get(k, 0) + x) % R.p
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def quotient_dim(R, rels, n, k, D):
    """dim of the image of R^n_{<=k} in R^n modulo rels (multiples up to degree D)."""
    E = span(R, macaulay(R, rels, D))
    base = E.rank()
    for pos in range(n):
        for e in monomials(R, k):
            E.add({R.key(e, pos): 1})
    return E.rank() - base


def annihilated_by(R, rels, v, D, sdeg):
    """Nonzero multipliers s (deg <= sdeg) with s v in span(rels), as a basis of that space."""
    Mac = span(R, macaulay(R, rels, D))
    mons = monomials(R, sdeg)
    p = R.p
    E = Echelon(p)
    null = []
    for idx, e in enumerate(mons):
        w = Mac.reduce(_mul_vec(R, e, v))
        w[-(idx + 1)] = 1
        w = E.reduce(w)
        if w and max(w) < 0:
            null.append(w)
        elif w:
            kk = max(w)
            inv = pow(w[kk], p - 2, p)
            E.rows[kk] = {a: c * inv % p for a, c in w.items()}
    out = []
    for w in null:
        s = {}
        for kk, c in w.items():
            key = R.key(mons[-kk - 1])
            s[key] = (s.get(key, 0) + c) % p
        s = {a: c for a, c in s.items() if c}
        if s:
            out.append(s)
    return out
