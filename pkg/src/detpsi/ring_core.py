"""Exact arithmetic in F_p[x_1..x_d] and its group algebras F_p[x][G], G finite abelian.

Monomials are packed into a single integer "key" whose natural integer order is the
term order (grevlex, group variables lowest, position-over-term for vectors).
Polynomials and module vectors are plain dicts {key: coefficient}.
"""
import itertools
import re

W = 16
FIELD = (1 << W) - 1
TOPBIT = 1 << (W - 1)


class RingError(ValueError):
    pass


def prime_power(q):
    """Return (p, k) with q = p**k, or None."""
    if not isinstance(q, int) or q < 2:
        return None
    p = next(i for i in range(2, q + 1) if q % i == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


class RingSpec:
    __slots__ = ("q", "d", "group_orders", "term_order")

    def __init__(self, q, d, group_orders=(), term_order="grevlex"):
        self.q = q
        self.d = d
        self.group_orders = tuple(group_orders)
        self.term_order = term_order

    def to_json(self):
        return {"q": self.q, "d": self.d, "group_orders": list(self.group_orders),
                "term_order": self.term_order}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["q"], obj["d"], obj.get("group_orders", []), obj.get("term_order", "grevlex"))


_RINGS = {}


def make_ring(spec):
    if not isinstance(spec, RingSpec):
        spec = RingSpec(*spec)
    pp = prime_power(spec.q)
    if pp is None:
        raise RingError(f"{spec.q} is not a prime power")
    if pp[1] != 1:
        raise RingError(f"q={spec.q}: only prime fields are supported")
    if not isinstance(spec.d, int) or spec.d < 1:
        raise RingError("d must be a positive integer")
    if any((not isinstance(n, int)) or n < 1 for n in spec.group_orders):
        raise RingError("group orders must be positive integers")
    if spec.term_order != "grevlex":
        raise RingError(f"unsupported term order {spec.term_order!r}")
    orders = tuple(n for n in spec.group_orders if n > 1)
    key = (spec.q, spec.d, orders)
    if key not in _RINGS:
        _RINGS[key] = Ring(spec.q, spec.d, orders)
    return _RINGS[key]


def _names(d, k):
    xs = ["x", "y", "z", "w"][:d] if d <= 4 else [f"x{i + 1}" for i in range(d)]
    ts = ["t"] if k == 1 else [f"t{j + 1}" for j in range(k)]
    return xs + ts[:k]


class Ring:
    """F_p[x_1..x_d][t_1..t_k]/(t_j^{n_j} - 1) with packed monomial keys."""
    __slots__ = ("p", "d", "orders", "nv", "names", "DS", "PS", "EXPMASK", "DEGMASK",
                 "KEYMASK", "GUARD", "ONE", "rank", "group_basis", "_base", "_inv",
                 "_relcache", "__weakref__")

    def __init__(self, p, d, orders):
        self.p = p
        self.d = d
        self.orders = tuple(orders)
        self.nv = d + len(self.orders)
        self.names = _names(d, len(self.orders))
        self.DS = W * self.nv
        self.PS = self.DS + W
        self.EXPMASK = (1 << self.DS) - 1
        self.DEGMASK = FIELD << self.DS
        self.KEYMASK = (FIELD << self.PS) | self.EXPMASK
        self.GUARD = sum(TOPBIT << (W * i) for i in range(self.nv + 1))
        self.ONE = self.KEYMASK
        self.rank = 1
        for n in self.orders:
            self.rank *= n
        self.group_basis = [tuple(g) for g in itertools.product(*[range(n) for n in self.orders])]
        self._base = None
        self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        self._relcache = {}

    # ---- identity -------------------------------------------------------
    def __repr__(self):
        g = "" if not self.orders else "[" + ",".join(map(str, self.orders)) + "]"
        return f"Ring(F_{self.p}[{','.join(self.names[:self.d])}]{g})"

    def spec(self):
        return RingSpec(self.p, self.d, self.orders)

    @property
    def has_group(self):
        return bool(self.orders)

    def base(self):
        """The polynomial subring Lambda as its own Ring."""
        if not self.orders:
            return self
        if self._base is None:
            self._base = make_ring(RingSpec(self.p, self.d, ()))
        return self._base

    def inv(self, a):
        return self._inv[a % self.p]

    # ---- monomial keys ----------------------------------------------------
    def key(self, exps, pos=0):
        pm = (pos << self.PS) | (sum(exps) << self.DS)
        for i, e in enumerate(exps):
            pm |= e << (W * i)
        return pm ^ self.KEYMASK

    def exps(self, k):
        pm = k ^ self.KEYMASK
        return tuple((pm >> (W * i)) & FIELD for i in range(self.nv))

    def pos(self, k):
        return FIELD - (k >> self.PS)

    def deg(self, k):
        return (k >> self.DS) & FIELD

    def divides(self, ka, kb):
        """Monomial quotient kb/ka as a packed exponent word, or -1."""
        diff = (kb ^ self.KEYMASK) - (ka ^ self.KEYMASK)
        if diff < 0 or diff >> self.PS or diff & self.GUARD:
            return -1
        return diff

    def delta(self, m):
        """Key offset that multiplies a key by the packed exponent word m."""
        return (m & self.DEGMASK) - (m & self.EXPMASK)

    def lcm_word(self, ka, kb):
        a, b = ka ^ self.KEYMASK, kb ^ self.KEYMASK
        m, deg = 0, 0
        for i in range(self.nv):
            e = max((a >> (W * i)) & FIELD, (b >> (W * i)) & FIELD)
            m |= e << (W * i)
            deg += e
        return m | (deg << self.DS) | (a & (FIELD << self.PS))

    # ---- polynomials ----------------------------------------------------
    def zero(self):
        return {}

    def one(self):
        return {self.ONE: 1}

    def const(self, c):
        c %= self.p
        return {self.ONE: c} if c else {}

    def var(self, i):
        e = [0] * self.nv
        e[i] = 1
        return {self.key(e): 1}

    def gvar(self, j):
        return self.var(self.d + j)

    def from_terms(self, terms):
        out = {}
        for exps, c in terms:
            exps = list(exps)
            if len(exps) != self.nv:
                raise RingError(f"exponent vector {exps} has wrong length for {self}")
            for j, n in enumerate(self.orders):
                exps[self.d + j] %= n
            k = self.key(exps)
            v = (out.get(k, 0) + c) % self.p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def terms(self, f):
        return [(self.exps(k), c) for k, c in sorted(f.items(), reverse=True)]

    def reduce_group(self, f):
        """Normal form: group exponents reduced modulo the orders (any position)."""
        if not self.orders:
            return f
        out = {}
        p = self.p
        for k, c in f.items():
            for j, n in enumerate(self.orders):
                sh = W * (self.d + j)
                e = FIELD - ((k >> sh) & FIELD)
                if e >= n:
                    r = e - (e % n)
                    k += (r << sh) - (r << self.DS)
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                del out[k]
        return out

    def add(self, f, g):
        p = self.p
        out = dict(f)
        for k, c in g.items():
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def sub(self, f, g):
        p = self.p
        out = dict(f)
        for k, c in g.items():
            v = (out.get(k, 0) - c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def neg(self, f):
        p = self.p
        return {k: p - c for k, c in f.items()}

    def scale(self, f, c):
        c %= self.p
        if not c:
            return {}
        p = self.p
        return {k: v * c % p for k, v in f.items()}

    def mul(self, f, g):
        """Product in R (group exponents reduced). g may sit at any position, f at position 0."""
        if len(f) > len(g):
            f, g = g, f
        p, one = self.p, self.ONE
        out = {}
        for ka, ca in f.items():
            off = ka - one
            for kb, cb in g.items():
                k = kb + off
                out[k] = (out.get(k, 0) + ca * cb) % p
        out = {k: c for k, c in out.items() if c}
        return self.reduce_group(out) if self.orders else out

    def power(self, f, e):
        out = self.one()
        base = f
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def is_constant(self, f):
        return len(f) == 1 and self.ONE in f

    def lead(self, f):
        return max(f) if f else None

    def monic(self, f):
        if not f:
            return f
        return self.scale(f, self.inv(f[max(f)]))

    def total_degree(self, f):
        return max((self.deg(k) for k in f), default=-1)

    def in_base(self, f):
        """True if f involves no group variable."""
        mask = 0
        for j in range(len(self.orders)):
            mask |= FIELD << (W * (self.d + j))
        return all(((k ^ self.KEYMASK) & mask) == 0 for k in f)

    # ---- conversions between R and Lambda --------------------------------
    def to_base(self, f):
        B = self.base()
        if B is self:
            return dict(f)
        out = {}
        for k, c in f.items():
            e = self.exps(k)
            if any(e[self.d:]):
                raise RingError("element is not in the polynomial subring")
            out[B.key(e[:self.d])] = c
        return out

    def from_base(self, f):
        B = self.base()
        if B is self:
            return dict(f)
        pad = (0,) * len(self.orders)
        return {self.key(B.exps(k) + pad): c for k, c in f.items()}

    def split_group(self, f):
        """Decompose f = sum_g lam_g * t^g with lam_g in Lambda (base-ring dicts)."""
        B = self.base()
        parts = {}
        for k, c in f.items():
            e = self.exps(k)
            parts.setdefault(e[self.d:], {})[B.key(e[:self.d])] = c
        return parts

    # ---- relations --------------------------------------------------------
    def relation_vectors(self, pos):
        """t_j^{n_j} - 1 placed at a given position."""
        rels = self._relcache.get(pos)
        if rels is None:
            rels = []
            one = self.ONE - (pos << self.PS)
            for j, n in enumerate(self.orders):
                e = [0] * self.nv
                e[self.d + j] = n
                rels.append({self.key(e, pos): 1, one: self.p - 1})
            self._relcache[pos] = rels
        return rels

    # ---- norm / zero divisors ---------------------------------------------
    def multiplication_matrix(self, f):
        """Matrix of multiplication by f on R over Lambda in the group-monomial basis."""
        B = self.base()
        parts = self.split_group(f)
        basis = self.group_basis
        idx = {g: i for i, g in enumerate(basis)}
        n = len(basis)
        mat = [[{} for _ in range(n)] for _ in range(n)]
        for g in basis:
            for h, lam in parts.items():
                tgt = tuple((a + b) % m for a, b, m in zip(g, h, self.orders))
                row, col = idx[tgt], idx[g]
                mat[row][col] = B.add(mat[row][col], lam)
        return mat

    def norm(self, f):
        """Determinant of multiplication by f, as an element of Lambda (base-ring dict)."""
        if not self.orders:
            return dict(f)
        return det(self.base(), self.multiplication_matrix(f))

    def is_nzd(self, f):
        return bool(self.norm(f))

    # ---- parsing / printing ----------------------------------------------
    def fmt(self, f):
        if not f:
            return "0"
        out = []
        for k in sorted(f, reverse=True):
            c = f[k]
            e = self.exps(k)
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(self.names, e) if a)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            else:
                s = f"{c}*{mono}"
            out.append(s)
        return " + ".join(out)

    def parse(self, text):
        return _Parser(self, text).parse()

    def elem(self, f):
        return RingElem(self, f)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    __slots__ = ("ring", "toks", "i")

    def __init__(self, ring, text):
        self.ring = ring
        self.toks = []
        for num, name, op in _TOKEN.findall(str(text)):
            if num:
                self.toks.append(("n", int(num)))
            elif name:
                self.toks.append(("v", name))
            elif op.strip():
                self.toks.append(("o", "^" if op == "**" else op))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        f = self.expr()
        if self.i != len(self.toks):
            raise RingError(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self):
        R = self.ring
        sign = 1
        if self.peek() in (("o", "-"), ("o", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = R.neg(f)
        while self.peek() in (("o", "+"), ("o", "-")):
            op = self.take()[1]
            g = self.term()
            f = R.add(f, g) if op == "+" else R.sub(f, g)
        return f

    def term(self):
        f = self.factor()
        while True:
            t = self.peek()
            if t == ("o", "*"):
                self.take()
                if self.peek() == ("o", "*"):
                    raise RingError("use ^ for powers")
                f = self.ring.mul(f, self.factor())
            elif t[0] in ("n", "v") or t == ("o", "("):
                f = self.ring.mul(f, self.factor())
            else:
                return f

    def factor(self):
        R = self.ring
        kind, val = self.take()
        if kind == "n":
            f = R.const(val)
        elif kind == "v":
            if val not in R.names:
                raise RingError(f"unknown variable {val!r}")
            f = R.var(R.names.index(val))
        elif (kind, val) == ("o", "("):
            f = self.expr()
            if self.take() != ("o", ")"):
                raise RingError("missing )")
        elif (kind, val) == ("o", "-"):
            return R.neg(self.factor())
        else:
            raise RingError(f"unexpected token {val!r}")
        if self.peek() == ("o", "^"):
            self.take()
            kind, e = self.take()
            if kind != "n":
                raise RingError("exponent must be a non-negative integer")
            f = R.power(f, e)
        return f


def det(ring, mat):
    """Determinant of a square matrix of ring elements by row expansion over column subsets."""
    n = len(mat)
    if n == 0:
        return ring.one()
    if any(len(r) != n for r in mat):
        raise RingError("determinant of a non-square matrix")
    minors = {0: ring.one()}
    for i in range(n):
        row = mat[i]
        nxt = {}
        for mask, val in minors.items():
            if not val:
                continue
            sign_count = 0
            for j in range(n):
                if mask >> j & 1:
                    sign_count += 1
                    continue
                if not row[j]:
                    continue
                term = ring.mul(row[j], val)
                # sign of placing column j after the columns already used that exceed j
                above = bin(mask >> j).count("1")
                if above & 1:
                    term = ring.neg(term)
                m2 = mask | (1 << j)
                nxt[m2] = ring.add(nxt.get(m2, {}), term)
        minors = nxt
    return minors.get((1 << n) - 1, {})


class RingElem:
    __slots__ = ("ring", "c")

    def __init__(self, ring, c):
        self.ring = ring
        self.c = c

    def _lift(self, other):
        if isinstance(other, RingElem):
            return other.c
        if isinstance(other, int):
            return self.ring.const(other)
        if isinstance(other, str):
            return self.ring.parse(other)
        return NotImplemented

    def __add__(self, o):
        o = self._lift(o)
        return RingElem(self.ring, self.ring.add(self.c, o))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return RingElem(self.ring, self.ring.sub(self.c, o))

    def __rsub__(self, o):
        o = self._lift(o)
        return RingElem(self.ring, self.ring.sub(o, self.c))

    def __mul__(self, o):
        o = self._lift(o)
        return RingElem(self.ring, self.ring.mul(self.c, o))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.c))

    def __pow__(self, e):
        return RingElem(self.ring, self.ring.power(self.c, e))

    def __eq__(self, o):
        o = self._lift(o)
        return o is not NotImplemented and self.c == o

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        return self.ring.fmt(self.c)

    def norm(self):
        return RingElem(self.ring.base(), self.ring.norm(self.c))

    def is_nzd(self):
        return self.ring.is_nzd(self.c)

    def to_json(self):
        return elem_to_json(self.ring, self.c)


def normal_form(ring, f):
    return ring.reduce_group(dict(f))


def elem_to_json(ring, f):
    return [[list(e), c] for e, c in ring.terms(f)]


def elem_from_json(ring, obj):
    return ring.from_terms((e, c) for e, c in obj)


class Automorphism:
    """t_j -> c_j * t^{m_j}; identity on the polynomial variables."""
    __slots__ = ("ring", "images")

    def __init__(self, ring, images):
        self.ring = ring
        self.images = tuple((c % ring.p, tuple(m)) for c, m in images)
        self._validate()

    def _validate(self):
        R = self.ring
        k = len(R.orders)
        if len(self.images) != k:
            raise RingError("automorphism needs one image per group generator")
        for (c, m), n in zip(self.images, R.orders):
            if len(m) != k or not c:
                raise RingError("malformed automorphism image")
            if pow(c, n, R.p) != 1:
                raise RingError(f"scalar {c} has order not dividing {n}")
            if any((n * e) % o for e, o in zip(m, R.orders)):
                raise RingError("image of a generator has order not dividing its group order")
        seen = {self._on_group(g)[1] for g in R.group_basis}
        if len(seen) != len(R.group_basis):
            raise RingError("automorphism is not bijective on the group")

    def _on_group(self, g):
        R = self.ring
        c, out = 1, [0] * len(R.orders)
        for gj, (cj, m) in zip(g, self.images):
            c = c * pow(cj, gj, R.p) % R.p
            for i, e in enumerate(m):
                out[i] += gj * e
        return c, tuple(e % n for e, n in zip(out, R.orders))

    @classmethod
    def identity(cls, ring):
        k = len(ring.orders)
        return cls(ring, [(1, [int(i == j) for i in range(k)]) for j in range(k)])

    @classmethod
    def iota(cls, ring):
        k = len(ring.orders)
        return cls(ring, [(1, [(-int(i == j)) % ring.orders[i] for i in range(k)]) for j in range(k)])

    @classmethod
    def character(cls, ring, scalars):
        k = len(ring.orders)
        return cls(ring, [(c, [int(i == j) for i in range(k)]) for j, c in enumerate(scalars)])

    def compose(self, other):
        """self after other."""
        R = self.ring
        imgs = []
        for c, m in other.images:
            c2, m2 = self._on_group(m)
            imgs.append((c * c2 % R.p, m2))
        return Automorphism(R, imgs)

    def is_involution(self):
        return all(self.compose(self).images[j] == Automorphism.identity(self.ring).images[j]
                   for j in range(len(self.images)))

    def apply(self, f):
        R = self.ring
        if not R.orders:
            return dict(f)
        out = {}
        for k, c in f.items():
            e = R.exps(k)
            s, g = self._on_group(e[R.d:])
            # keep the position of k
            kk = R.key(e[:R.d] + g, R.pos(k))
            v = (out.get(kk, 0) + c * s) % R.p
            if v:
                out[kk] = v
            else:
                out.pop(kk, None)
        return out

    def __call__(self, a):
        if isinstance(a, RingElem):
            return RingElem(self.ring, self.apply(a.c))
        return self.apply(a)

    def to_json(self):
        return [[c, list(m)] for c, m in self.images]

    @classmethod
    def from_json(cls, ring, obj):
        return cls(ring, [(c, m) for c, m in obj])
