"""Synthetic scenarios and verification suites that emit JSON-ready reports."""
import itertools
import random
import time

from . import complexes as cx
from . import groebner as gb
from . import local as lc
from . import modules as md
from .ring_core import (Automorphism, RingError, RingSpec, det, elem_from_json,
                        elem_to_json, make_ring)

SCHEMA = "detpsi-report/1"
MAX_RESAMPLE = 200
PASS, FAIL, NOT_MET, INVALID = "pass", "fail", "hypothesis-not-met", "invalid-input"


class ScenarioError(ValueError):
    pass


# ---- reports -----------------------------------------------------------------

class Report:
    __slots__ = ("suite", "config", "checks", "timings")

    def __init__(self, suite, config):
        self.suite = suite
        self.config = dict(config)
        self.checks = []
        self.timings = {}

    def add(self, check, verdict, **extra):
        entry = {"check": check, "verdict": verdict}
        entry.update({k: v for k, v in extra.items() if v is not None})
        self.checks.append(entry)
        return entry

    def extend(self, entries):
        self.checks.extend(entries)

    def summary(self):
        out = {PASS: 0, FAIL: 0, NOT_MET: 0, INVALID: 0}
        for c in self.checks:
            out[c["verdict"]] = out.get(c["verdict"], 0) + 1
        return out

    def ok(self):
        return all(c["verdict"] in (PASS, NOT_MET) for c in self.checks)

    def to_json(self):
        return {"schema": SCHEMA, "suite": self.suite, "config": self.config,
                "checks": self.checks, "summary": self.summary(), "timings": self.timings}


def verdict(ok):
    return PASS if ok else FAIL


def _fmt_ideal(R, I):
    return [R.fmt(g) for g in I]


def _fmt_vec(R, v, n):
    return [R.fmt(e) for e in gb.entries(R, v, n)]


# ---- random sampling -----------------------------------------------------------

def random_elem(R, rng, terms=3, maxdeg=2, group=True, constant=True):
    out = {}
    for _ in range(rng.randint(1, terms)):
        deg = rng.randint(0 if constant else 1, maxdeg)
        e = [0] * R.nv
        for _ in range(deg):
            e[rng.randrange(R.d)] += 1
        if group:
            for j, n in enumerate(R.orders):
                e[R.d + j] = rng.randrange(n)
        out = R.add(out, {R.key(e): rng.randrange(1, R.p)})
    return out


def random_matrix(R, rng, rows, cols, density=0.75, **kw):
    return [[random_elem(R, rng, **kw) if rng.random() < density else R.zero()
             for _ in range(cols)] for _ in range(rows)]


def _mat_json(R, rows):
    return [[elem_to_json(R, e) for e in row] for row in rows]


def _mat_from_json(R, obj):
    return [[elem_from_json(R, e) for e in row] for row in obj]


def _cols(R, rows, nrows):
    ncols = len(rows[0]) if rows else 0
    return [gb.vec(R, [rows[i][j] for i in range(nrows)]) for j in range(ncols)]


def _sub_rng(*parts):
    return random.Random(":".join(str(p) for p in parts))


# ---- the psi suite -------------------------------------------------------------

def psi_sample(R, rng, budget=MAX_RESAMPLE):
    """Random strict-mode complex [R^a --alpha--> R^(a+l)] in degrees 0, 1."""
    for _ in range(budget):
        a = rng.choice([1, 1, 2])
        l = rng.choice([0, 1, 1, 2])
        rows = random_matrix(R, rng, a + l, a)
        C = cx.FreeComplex.from_matrices(R, 0, [rows], [a, a + l])
        if cx._is_injective_cols(R, C.diff(0), a + l):
            return C, l
    raise ScenarioError("no injective sample within the resample budget")


def verify_psi_complex(C, l, tag, primes=None):
    """All Psi checks for one strict-mode complex; returns a list of check entries."""
    R = C.ring
    out = []

    def add(name, ok, **kw):
        e = {"check": f"{tag}.{name}", "verdict": ok if isinstance(ok, str) else verdict(ok)}
        e.update({k: v for k, v in kw.items() if v is not None})
        out.append(e)

    try:
        res = cx.psi_map(C, l)
    except md.ModuleError as exc:
        add("psi", INVALID, info=str(exc))
        return out
    H = res.h_module
    add("kernel-is-torsion", res.kernel_is_torsion)
    a = C.rank(0)
    minors = md.simplify_ideal(R, md.all_minors(R, C.matrix(0), a))
    E = md.ext(H, 1)
    F = md.fitting_ideal(E, 0) if E.ngens else [R.one()]
    cok = res.cokernel
    same_fitt = md.ideal_equal(R, md.fitting_ideal(cok, 0), md.fitting_ideal(md.cyclic(R, F), 0))
    same_ann = md.ideal_equal(R, md.annihilator(cok), md.annihilator(md.cyclic(R, F)))
    add("cokernel-fitting", same_fitt and same_ann and md.ideal_equal(R, res.ideal, minors),
        ideals={"image": _fmt_ideal(R, res.ideal), "fitting_E1": _fmt_ideal(R, F)})
    if primes is None:
        primes = lc.monomial_primes(R, 2)
    for q in primes:
        rep = cx.psi_local_checks(C, l, q, res)
        for k in sorted(rep):
            add(f"local{list(q.indices)}.{k}", rep[k]["verdict"], ideals=rep[k].get("ideals"))
    T, _ = md.torsion_submodule(H)
    tor_pn = T.is_zero() or md.is_pseudo_null(T)
    hull = md.is_pseudo_null(cok)
    add("reflexive-hull", hull == tor_pn, info={"coker_pseudo_null": hull, "torsion_pseudo_null": tor_pn})
    if tor_pn:
        try:
            _, rep = cx.bidual_det_compare(C, l)
            add("bidual-det", rep["agrees_with_psi"] and rep["kernel_zero"] and rep["image_unit"], info=rep)
        except md.ModuleError as exc:
            add("bidual-det", FAIL, info=str(exc))
    else:
        add("bidual-det", NOT_MET, info="torsion of H^1 is not pseudo-null")
    return out


def verify_psi_matrices(R, mats, l, tag="psi[input]", lo=0, ranks=None):
    """Build the complex from differential matrices first; a malformed one is invalid input."""
    try:
        C = cx.FreeComplex.from_matrices(R, lo, mats, ranks)
    except md.ModuleError as exc:
        return [{"check": f"{tag}.construct", "verdict": INVALID, "info": str(exc)}]
    return verify_psi_complex(C, l, tag)


def _psi_task(args):
    spec, seed, k = args
    R = make_ring(RingSpec.from_json(spec))
    rng = _sub_rng("psi", seed, k)
    C, l = psi_sample(R, rng)
    t = time.perf_counter()
    checks = verify_psi_complex(C, l, f"psi[{k}]")
    return checks, time.perf_counter() - t


def verify_psi_suite(seed, count, q=3, d=2, group_orders=(), jobs=1):
    spec = RingSpec(q, d, group_orders).to_json()
    rep = Report("psi-suite", {"seed": seed, "count": count, "ring": spec})
    tasks = [(spec, seed, k) for k in range(count)]
    for k, (checks, secs) in enumerate(_run(_psi_task, tasks, jobs)):
        rep.extend(checks)
        rep.timings[f"psi[{k}]"] = round(secs, 4)
    return rep


def _run(fn, tasks, jobs):
    if jobs and jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


# ---- appendix suite --------------------------------------------------------------

def _nzd_square(R, rng, n, budget=MAX_RESAMPLE):
    for _ in range(budget):
        H = random_matrix(R, rng, n, n)
        dt = det(R, H)
        if dt and R.is_nzd(dt):
            return H, dt
    raise ScenarioError("no square matrix with non-zero-divisor determinant")


def _transpose(rows):
    return [list(r) for r in zip(*rows)] if rows else []


def check_a1(R, H):
    """P = coker H (square, nzd determinant): Fitt(E^1 P) = Fitt P and E^1 E^1 P -> P is an iso."""
    n = len(H)
    P = md.from_matrix(R, H)
    E1 = md.from_matrix(R, _transpose(H))  # dual of the resolution 0 -> R^n -> R^n -> P
    injective = cx._is_injective_cols(R, _cols(R, _transpose(H), n), n)
    E1gen = md.ext(P, 1)
    FP, FE, FG = md.fitting_ideal(P), md.fitting_ideal(E1), md.fitting_ideal(E1gen)
    E1E1 = md.from_matrix(R, _transpose(_transpose(H)))
    iso = md.is_iso(md.ModuleHom(E1E1, P, [P.gen(i) for i in range(n)]))
    ok = injective and md.ideal_equal(R, FP, FE) and md.ideal_equal(R, FP, FG) and iso
    return ok, {"fitting": _fmt_ideal(R, FP), "fitting_E1": _fmt_ideal(R, FE), "double_dual_iso": iso}


def _p2_sample(R, rng, budget=MAX_RESAMPLE):
    """Resolution 0 -> R^n --d2--> R^(n+1) --d1--> R of a pseudo-null cyclic module."""
    for _ in range(budget):
        n = rng.choice([1, 1, 2])
        d2 = random_matrix(R, rng, n + 1, n)
        d1 = []
        for i in range(n + 1):
            rows = [d2[k] for k in range(n + 1) if k != i]
            m = det(R, rows) if n else R.one()
            d1.append(m if i % 2 == 0 else R.neg(m))
        d1 = [d1]
        if not any(d1[0]):
            continue
        M = md.PresentedModule(R, 1, [gb.vec(R, [e]) for e in d1[0] if e])
        if M.is_zero() or not md.is_pseudo_null(M):
            continue
        C = cx.FreeComplex.from_matrices(R, 0, [d2, d1], [n, n + 1, 1])
        return C, M
    raise ScenarioError("no pseudo-null sample within the resample budget")


def check_a2(R, C):
    """C = [R^n -> R^(n+1) -> R] resolving M = coker(d1): E^2 identity and E^2 E^2 M -> M iso."""
    n = C.rank(0)
    d1, d2 = C.matrix(1), C.matrix(0)
    M = md.from_matrix(R, d1)
    resolves = all(cx.cohomology(C, i).module.is_zero() for i in (0, 1))
    D = cx.dual_complex(C)
    dual_exact = all(cx.cohomology(D, i).module.is_zero() for i in (-2, -1))
    E2 = md.from_matrix(R, _transpose(d2))
    FM, FE = md.fitting_ideal(M), md.fitting_ideal(E2)
    FG = md.fitting_ideal(md.ext(M, 2))
    E2E2 = md.from_matrix(R, _transpose(_transpose(d1)))
    iso = md.is_iso(md.ModuleHom(E2E2, M, [M.gen(0)]))
    ok = resolves and dual_exact and md.ideal_equal(R, FM, FE) and md.ideal_equal(R, FM, FG) and iso
    return ok, {"fitting": _fmt_ideal(R, FM), "fitting_E2": _fmt_ideal(R, FE), "double_dual_iso": iso,
                "resolution_exact": resolves, "dual_exact": dual_exact}


def all_minors_nzd(R, rows, size):
    for rs in itertools.combinations(range(len(rows)), size):
        for cs in itertools.combinations(range(len(rows[0])), size):
            m = det(R, [[rows[i][j] for j in cs] for i in rs])
            if not (m and R.is_nzd(m)):
                return False
    return True


def repair_presentation(R, H, f, rng, budget=MAX_RESAMPLE):
    """Stack f*I_n on H + f*X so that every n x n minor is a non-zero-divisor.

    H lists relations as rows over n generators and f kills the module.  Each
    round draws X0 and tries the scalings x^k * X0.  Returns (rows, rounds) or (None, rounds).
    """
    n = len(H[0])
    fI = [[f if i == j else R.zero() for j in range(n)] for i in range(n)]
    rounds = 0
    x = R.var(0)
    while rounds < budget:
        X0 = random_matrix(R, rng, len(H), n, density=0.9, maxdeg=1, group=False)
        lam = R.one()
        for _ in range(4):
            rounds += 1
            HX = [[R.add(H[i][j], R.mul(R.mul(f, lam), X0[i][j])) for j in range(n)] for i in range(len(H))]
            rows = fI + HX
            if all_minors_nzd(R, rows, n):
                return rows, rounds
            lam = R.mul(lam, x)
            if rounds >= budget:
                break
    return None, rounds


def check_a3(R, H, f, rng):
    n = len(H[0])
    M = md.PresentedModule(R, n, [gb.vec(R, row) for row in H])
    degenerate = not all_minors_nzd(R, H, n)
    rows, rounds = repair_presentation(R, H, f, rng)
    if rows is None:
        return False, {"rounds": rounds, "degenerate_input": degenerate, "info": "resample budget exceeded"}
    M2 = md.PresentedModule(R, n, [gb.vec(R, row) for row in rows])
    same = gb.same_module(R, M.rels + [gb.vec(R, [f], offset=i) for i in range(n)], M2.rels, n)
    ok = same and all_minors_nzd(R, rows, n)
    nminors = len(list(itertools.combinations(range(len(rows)), n)))
    return ok, {"rounds": rounds, "degenerate_input": degenerate, "minors_checked": nminors}


def _a3_sample(R, rng):
    n = rng.choice([1, 2])
    H, dt = _nzd_square(R, rng, n)
    rows = [list(r) for r in H]
    rows.append([R.zero()] * n)
    rows.append(list(rows[0]))
    rng.shuffle(rows)
    return rows, dt


def _a4_sample(R, rng, budget=MAX_RESAMPLE):
    for _ in range(budget):
        kind = rng.randrange(3)
        if kind == 0:
            g = random_elem(R, rng, constant=False)
            h1, h2 = random_elem(R, rng), random_elem(R, rng)
            M = md.cyclic(R, [R.mul(g, h1), R.mul(g, h2)])
        elif kind == 1:
            g = random_elem(R, rng, constant=False)
            M = md.from_matrix(R, [[g, random_elem(R, rng)], [R.zero(), random_elem(R, rng, constant=False)]])
        else:
            M = md.from_matrix(R, random_matrix(R, rng, 2, 3))
        F = md.fitting_ideal(M, 0)
        if F and not md.ideal_is_unit(R, F):
            return M
    raise ScenarioError("no torsion sample within the resample budget")


def check_a4(R, M):
    F = md.fitting_ideal(M, 0)
    c = md.char_ideal(M)
    E2 = md.ext(M, 2)
    FE = md.fitting_ideal(E2, 0) if E2.ngens else [R.one()]
    prod = [R.mul(c, g) for g in FE]
    ok = md.ideal_equal(R, prod, F)
    P, incP = md.pseudo_null_part(M)
    Q, _ = md.quotient(M, incP.images)
    FP = md.fitting_ideal(P, 0) if P.ngens else [R.one()]
    FQ = md.fitting_ideal(Q, 0) if Q.ngens else [R.one()]
    mult = md.ideal_equal(R, [R.mul(a, b) for a in FP for b in FQ], F)
    return ok, mult, {"fitting": _fmt_ideal(R, F), "char": R.fmt(c), "fitting_E2": _fmt_ideal(R, FE)}


def _appendix_task(args):
    spec, seed, k = args
    R = make_ring(RingSpec.from_json(spec))
    out = []
    t = time.perf_counter()
    rng = _sub_rng("A1", seed, k)
    H, _ = _nzd_square(R, rng, rng.choice([1, 2]))
    ok, info = check_a1(R, H)
    out.append({"check": f"A.1[{k}]", "verdict": verdict(ok), "ideals": info})
    rng = _sub_rng("A2", seed, k)
    C, _ = _p2_sample(R, rng)
    ok, info = check_a2(R, C)
    out.append({"check": f"A.2[{k}]", "verdict": verdict(ok), "ideals": info})
    rng = _sub_rng("A3", seed, k)
    R3 = make_ring(RingSpec(R.p, 1 if k % 2 == 0 else 2, ()))
    H3, f = _a3_sample(R3, rng)
    ok, info = check_a3(R3, H3, f, rng)
    out.append({"check": f"A.3[{k}]", "verdict": verdict(ok), "info": dict(info, d=R3.d)})
    rng = _sub_rng("A4", seed, k)
    R4 = make_ring(RingSpec(R.p, 2, ()))
    M = _a4_sample(R4, rng)
    ok, mult, info = check_a4(R4, M)
    out.append({"check": f"A.4[{k}]", "verdict": verdict(ok), "ideals": info})
    out.append({"check": f"A.4[{k}].fitting-multiplicativity", "verdict": verdict(mult)})
    return out, time.perf_counter() - t


def appendix_fixed(q=3):
    """The hand-checked instances."""
    out = []
    R2 = make_ring(RingSpec(q, 2, ()))
    P = R2.parse
    ok, info = check_a1(R2, [[P("x"), P("y")], [P("0"), P("x")]])
    out.append({"check": "A.1[fixed]", "verdict": verdict(ok), "ideals": info})
    R1 = make_ring(RingSpec(q, 1, ()))
    x = R1.var(0)
    H = [[x, R1.zero()], [R1.zero(), x], [R1.zero(), R1.zero()]]
    ok, info = check_a3(R1, H, x, _sub_rng("A3", "fixed"))
    out.append({"check": "A.3[fixed]", "verdict": verdict(ok), "info": info})
    M = md.cyclic(R2, [P("x^2"), P("x*y")])
    ok, mult, info = check_a4(R2, M)
    exact = info["char"] == "x" and md.ideal_equal(R2, md.fitting_ideal(md.ext(M, 2)), [P("x"), P("y")])
    out.append({"check": "A.4[fixed]", "verdict": verdict(ok and exact), "ideals": info})
    out.append({"check": "A.4[fixed].fitting-multiplicativity", "verdict": verdict(mult)})
    return out


def appendix_suite(seed, count, q=3, d=2, group_orders=(), jobs=1):
    spec = RingSpec(q, d, group_orders).to_json()
    rep = Report("appendix", {"seed": seed, "count": count, "ring": spec})
    rep.extend(appendix_fixed(q))
    tasks = [(spec, seed, k) for k in range(count)]
    for k, (checks, secs) in enumerate(_run(_appendix_task, tasks, jobs)):
        rep.extend(checks)
        rep.timings[f"appendix[{k}]"] = round(secs, 4)
    return rep


# ---- scenarios -------------------------------------------------------------------

class Scenario:
    """Local data for primes, types T_i (sets of primes), the global complex C_U,
    connecting maps u_i and the twist kappa."""
    __slots__ = ("ring", "params", "seed", "primes", "types", "m", "A", "U", "kappa", "resamples")

    @property
    def l(self):
        return sum(self.params["degs"]) - self.params["d"]

    def local_ideal(self, p):
        return self.primes[p][1]

    def local_complex(self, i):
        """L_i = direct sum over p in T_i of [R^(r_p) --row of J_p--> R] in degrees 1, 2."""
        R = self.ring
        T = self.types[i]
        r = sum(len(self.primes[p][1]) for p in T)
        s = len(T)
        rows = [[R.zero()] * r for _ in range(s)]
        off = 0
        for k, p in enumerate(T):
            for j, g in enumerate(self.primes[p][1]):
                rows[k][off + j] = g
            off += len(self.primes[p][1])
        return cx.FreeComplex.from_matrices(R, 1, [rows], [r, s])

    def global_complex(self):
        return cx.FreeComplex.from_matrices(self.ring, 1, [self.A], [self.m, self.m + self.l])

    def chain_map(self, i):
        """u_i: L_i[-1] -> C_U, given by U_i in degree 2."""
        R = self.ring
        L = self.local_complex(i).shift(-1)
        CU = self.global_complex()
        comps = {2: _cols(R, self.U[i], self.m + self.l)}
        return cx.ChainMap(L, CU, comps)

    def mid_complex(self, i):
        return cx.cone(self.chain_map(i))

    def to_json(self):
        R = self.ring
        return {"schema": "detpsi-scenario/1", "ring": R.spec().to_json(), "params": self.params,
                "seed": self.seed,
                "primes": [{"deg": deg, "generators": [elem_to_json(R, g) for g in J]}
                           for deg, J in self.primes],
                "types": [list(T) for T in self.types], "m": self.m, "A": _mat_json(R, self.A),
                "U": [_mat_json(R, u) for u in self.U], "kappa": self.kappa.to_json(),
                "resamples": self.resamples}

    @classmethod
    def from_json(cls, obj):
        S = cls()
        R = make_ring(RingSpec.from_json(obj["ring"]))
        S.ring = R
        S.params = obj["params"]
        S.seed = obj["seed"]
        S.primes = [(p["deg"], [elem_from_json(R, g) for g in p["generators"]]) for p in obj["primes"]]
        S.types = [tuple(T) for T in obj["types"]]
        S.m = obj["m"]
        S.A = _mat_from_json(R, obj["A"])
        S.U = [_mat_from_json(R, u) for u in obj["U"]]
        S.kappa = Automorphism.from_json(R, obj["kappa"])
        S.resamples = obj.get("resamples", {})
        return S


def _local_generators(R, rng, deg):
    r = deg + 1
    if R.d == 1:
        a = rng.randrange(R.p)
        x = R.var(0)
        return [R.add(x, R.const((k - a) % R.p)) for k in range(r)]
    base = [R.add(R.var(j), R.const(-rng.randrange(R.p))) for j in range(R.d)]
    gens = base[:r]
    while len(gens) < r:
        if R.orders and not any(R.sub(g, R.sub(R.gvar(0), R.one())) == {} for g in gens) and rng.random() < 0.5:
            gens.append(R.sub(R.gvar(0), R.one()))
        else:
            g = {}
            for b in base:
                g = R.add(g, R.mul(b, random_elem(R, rng, terms=2, maxdeg=1, group=False)))
            if g:
                gens.append(g)
    return gens


def _types(degs, l, n):
    subsets = []
    for size in range(len(degs) + 1):
        for c in itertools.combinations(range(len(degs)), size):
            if sum(degs[j] for j in c) == l:
                subsets.append(c)
    if not subsets:
        raise ScenarioError(f"no set of primes has total degree l = {l}")
    return [subsets[i % len(subsets)] for i in range(n)]


def _random_kappa(R, rng):
    imgs = []
    k = len(R.orders)
    for j, n in enumerate(R.orders):
        roots = [c for c in range(1, R.p) if pow(c, n, R.p) == 1]
        c = rng.choice(roots)
        imgs.append((c, [(-int(i == j)) % R.orders[i] for i in range(k)]))
    return Automorphism(R, imgs)


def generate_scenario(seed, q=3, d=1, group_orders=(), n=2, degs=(1, 1), max_resample=MAX_RESAMPLE):
    degs = list(degs)
    if n < 2:
        raise ScenarioError("need at least two types (n >= 2)")
    if not degs or any(g < 1 for g in degs):
        raise ScenarioError("degrees must be a nonempty list of positive integers")
    if sum(degs) < d:
        raise ScenarioError("sum of degrees must be at least d")
    R = make_ring(RingSpec(q, d, group_orders))
    params = {"q": q, "d": d, "group_orders": list(group_orders), "n": n, "degs": degs,
              "max_resample": max_resample}
    rng = _sub_rng("scenario", seed, q, d, list(group_orders), n, degs)
    S = Scenario()
    S.ring, S.params, S.seed = R, params, seed
    S.primes = [(deg, _local_generators(R, rng, deg)) for deg in degs]
    l = S.l
    S.types = _types(degs, l, n)
    S.kappa = _random_kappa(R, rng)
    S.m = rng.choice([1, 2])
    stats = {"global": 0, "mid": []}
    for attempt in range(max_resample + 1):
        A = random_matrix(R, rng, S.m + l, S.m)
        if cx._is_injective_cols(R, _cols(R, A, S.m + l), S.m + l):
            break
        stats["global"] += 1
    else:
        raise ScenarioError(f"global complex: injectivity failed {max_resample} times")
    S.A = A
    S.U = []
    for i, T in enumerate(S.types):
        r = sum(len(S.primes[p][1]) for p in T)
        fails = 0
        while True:
            U = random_matrix(R, rng, S.m + l, r)
            S.U.append(U)
            M = S.mid_complex(i).matrix(1)
            dt = det(R, M)
            if dt and R.is_nzd(dt):
                break
            S.U.pop()
            fails += 1
            if fails > max_resample:
                raise ScenarioError(f"middle complex {i}: torsion condition failed {fails} times")
        stats["mid"].append(fails)
    S.resamples = stats
    return S


def scenario_invariants(S):
    """Re-verify generator postconditions from scratch; returns (ok, info)."""
    R = S.ring
    info = {}
    CU = S.global_complex()
    info["euler_char"] = cx.euler_char(CU) == -S.l
    info["global_H1_zero"] = cx.cohomology(CU, 1).module.is_zero()
    pn = []
    for deg, J in S.primes:
        pn.append(md.is_pseudo_null(md.cyclic(R, J)) and len(J) == deg + 1)
    info["local_pseudo_null"] = all(pn)
    tf = True
    for i in range(len(S.types)):
        H1 = cx.cohomology(S.local_complex(i), 1).module
        T, _ = md.torsion_submodule(H1)
        tf = tf and T.is_zero()
    info["local_H1_torsion_free"] = tf
    mid = True
    for i in range(len(S.types)):
        C = S.mid_complex(i)
        if not cx.cohomology(C, 1).module.is_zero():
            mid = False
        H2 = cx.cohomology(C, 2).module
        if H2.ngens and not md.fitting_ideal(H2, 0):
            mid = False
    info["middle_H1_zero_H2_torsion"] = mid
    return all(info.values()), info


# ---- main sequence ---------------------------------------------------------------

class _Diagram:
    """Global objects of the diagram built from Psi maps of the local sums and of C_U[1]."""
    __slots__ = ("S", "low", "ups", "f2", "lalg", "f1_images", "V", "Cf1", "Cf2", "Cf3", "g1", "g2",
                 "K3", "boundary", "commutes", "I_low", "I_ups", "sum_l")


def build_diagram(S):
    R = S.ring
    l = S.l
    m = S.m
    D = _Diagram()
    D.S = S
    CU = S.global_complex()
    D.low = cx.psi_map(CU.shift(1), l)
    D.I_low = D.low.ideal
    D.ups, D.f2, D.lalg, D.f1_images, D.I_ups = [], [], [], [], []
    commutes = True
    for i in range(len(S.types)):
        L = S.local_complex(i)
        up = cx.psi_map(L, l, mode="kernel")
        C = S.mid_complex(i)
        s = L.rank(2)
        dm = det(R, C.matrix(1))
        sign = (-1) ** (m + l * (s + m))
        f2 = dm if sign > 0 else R.neg(dm)
        D.ups.append(up)
        D.f2.append(f2)
        D.lalg.append(cx.l_alg(C))
        D.I_ups.append(up.ideal)
        reps = up.h_reps
        Uc = _cols(R, S.U[i], m + l)
        imgs = []
        for k, Sset in enumerate(itertools.combinations(range(len(reps)), l)):
            ys = [gb.vec_comb(R, gb.entries(R, reps[j], L.rank(1)), Uc) for j in Sset]
            w = md.wedge_vectors(R, ys, m + l)
            imgs.append(w)
            lhs = gb.entries(R, D.low.hom.apply(w), 1)[0]
            rhs = R.mul(f2, up.values[k])
            if lhs != rhs:
                commutes = False
        D.f1_images.append(imgs)
    D.commutes = commutes
    src = D.low.hom.src
    kv = [v for v in D.low.kernel[1].images if v]
    D.V, _ = md.quotient(src, kv)
    D.Cf1, _ = md.quotient(D.V, [w for imgs in D.f1_images for w in imgs])
    D.sum_l = [f for f in D.f2 if f]
    D.Cf2 = md.cyclic(R, D.sum_l)
    top = md.simplify_ideal(R, list(D.I_low) + D.sum_l)
    D.Cf3 = md.cyclic(R, top)
    D.g1 = md.ModuleHom(D.Cf1, D.Cf2, list(D.low.hom.images))
    D.g2 = md.ModuleHom(D.Cf2, D.Cf3, [D.Cf3.gen(0)])
    # kernel of f3 on the direct sum of the cokernels of the local Psi maps
    mods = [md.cyclic(R, I) for I in D.I_ups]
    TR, _, _ = md.direct_sum(*mods) if mods else (md.free(R, 0), [], [])
    low_cyc = md.cyclic(R, D.I_low)
    f3 = md.ModuleHom(TR, low_cyc, [gb.vec(R, [f]) for f in D.f2])
    K3, inc3 = md.kernel(f3)
    D.K3 = K3
    lifter = gb.Lifter(R, [gb.vec(R, [v]) for v in D.low.values], 1)
    imgs = []
    for z in inc3.images:
        cs = gb.entries(R, z, TR.ngens)
        s = {}
        for c, f in zip(cs, D.f2):
            s = R.add(s, R.mul(c, f))
        if not s:
            imgs.append({})
            continue
        b = lifter.lift(gb.vec(R, [s]))
        if b is None:
            raise md.ModuleError("connecting map: element does not lift through Psi")
        imgs.append(gb.vec(R, b))
    D.boundary = md.ModuleHom(K3, D.Cf1, imgs)
    return D


def _hypotheses_at(S, q):
    """Returns None when the local hypotheses hold at q, else a reason string."""
    R = S.ring
    used = sorted({p for T in S.types for p in T})
    for p in used:
        J = S.local_ideal(p)
        Mp = md.cyclic(R, J)
        if not lc.local_vanishes(Mp.twist(S.kappa), q):
            return f"twisted local module of prime {p} does not vanish at q"
        if not lc.local_pd_probe(Mp, q).at_most(2):
            return f"local module of prime {p} has pd > 2 at q"
    return None


def dual_side(S):
    """(B, F_dual): top cohomology of the twisted dual of C_U and the Fitting ideal of B twisted back."""
    CU = S.global_complex()
    Cd = cx.dual_complex(CU, S.kappa)
    B = cx.cohomology(Cd, Cd.hi).module
    F = md.fitting_ideal(B.twist(S.kappa), 0) if B.ngens else [S.ring.one()]
    return B, F


def verify_main_sequence(S, primes, check_chern=False):
    R = S.ring
    tag = f"scenario[{S.seed}]"
    rep = Report("main-seq", {"scenario_seed": S.seed, "params": S.params,
                              "primes": [list(q.indices) for q in primes]})
    t0 = time.perf_counter()
    ok, info = scenario_invariants(S)
    rep.add(f"{tag}.invariants", verdict(ok), info=info)
    if not ok:
        return rep
    try:
        D = build_diagram(S)
    except md.ModuleError as exc:
        rep.add(f"{tag}.diagram", FAIL, info=str(exc))
        return rep
    rep.add(f"{tag}.commutativity", verdict(D.commutes))
    same = md.ideal_equal(R, D.sum_l, D.lalg)
    fitt = md.ideal_equal(R, md.fitting_ideal(D.Cf2, 0), md.fitting_ideal(md.cyclic(R, D.lalg), 0))
    rep.add(f"{tag}.coker-f2", verdict(same and fitt),
            ideals={"L_alg": [R.fmt(g) for g in D.lalg], "f2": [R.fmt(g) for g in D.f2]})
    e1, w1 = md.exact_at(D.boundary, D.g1)
    e2, w2 = md.exact_at(D.g1, D.g2)
    e3 = md.is_surjective(D.g2)
    wit = w1 or w2
    rep.add(f"{tag}.snake-exact", verdict(e1 and e2 and e3),
            witness=_witness(R, wit), info={"at_coker_f1": e1, "at_coker_f2": e2, "onto_coker_f3": e3,
                                            "ker_f3_zero": D.K3.is_zero()})
    B, F_dual = dual_side(S)
    rep.add(f"{tag}.dual-side", verdict(md.ideal_equal(R, F_dual, D.I_low)),
            ideals={"fitting_dual": _fmt_ideal(R, F_dual), "minors": _fmt_ideal(R, D.I_low)})
    Fsum = md.simplify_ideal(R, list(F_dual) + D.sum_l)
    target = md.cyclic(R, Fsum)
    h2 = md.ModuleHom(D.Cf2, target, [target.gen(0)])
    K1, _ = md.kernel(D.g1)
    Kh, inch = md.kernel(h2, do_prune=False)
    Hmid, _ = md.quotient(Kh, _lift_images(D.Cf2, inch, D.g1))
    ann_k1, ann_mid = md.annihilator_base(K1), md.annihilator_base(Hmid)
    for q in primes:
        name = f"{tag}.local-exact{list(q.indices)}"
        why = _hypotheses_at(S, q)
        if why:
            rep.add(name, NOT_MET, info=why)
        else:
            ok = lc.local_ideal_equal(R, Fsum, F_dual, q) and lc.base_ideal_avoids(R, ann_k1, q) \
                and lc.base_ideal_avoids(R, ann_mid, q)
            rep.add(name, verdict(ok), ideals={"sum_L": [R.fmt(g) for g in D.sum_l]})
        if check_chern:
            _chern(rep, S, D, q, why, F_dual, tag)
    rep.timings[tag] = round(time.perf_counter() - t0, 4)
    return rep


def _lift_images(Y, inc, g):
    """Images of g expressed in the generators of the submodule given by inc (into Y)."""
    R = Y.ring
    L = gb.Lifter(R, list(inc.images) + list(Y.rels), Y.ngens)
    out = []
    for v in g.images:
        if not v:
            continue
        c = L.lift(v)
        if c is None:
            raise md.ModuleError("image is not inside the kernel")
        out.append(gb.vec(R, c[:len(inc.images)]))
    return out


def verify_chern(S, primes):
    """Length additivity across the localized sequence at each maximal monomial prime."""
    tag = f"scenario[{S.seed}]"
    rep = Report("chern", {"scenario_seed": S.seed, "params": S.params,
                           "primes": [list(q.indices) for q in primes]})
    t0 = time.perf_counter()
    ok, info = scenario_invariants(S)
    if not ok:
        rep.add(f"{tag}.invariants", FAIL, info=info)
        return rep
    if S.ring.d != 2:
        rep.add(f"{tag}.chern", NOT_MET, info="length additivity is checked for d = 2 only")
        return rep
    try:
        D = build_diagram(S)
    except md.ModuleError as exc:
        rep.add(f"{tag}.diagram", FAIL, info=str(exc))
        return rep
    _, F_dual = dual_side(S)
    for q in primes:
        _chern(rep, S, D, q, _hypotheses_at(S, q), F_dual, tag)
    rep.timings[tag] = round(time.perf_counter() - t0, 4)
    return rep


def _chern(rep, S, D, q, why, F_dual, tag):
    R = S.ring
    name = f"{tag}.chern{list(q.indices)}"
    if R.d != 2 or q.height != 2:
        return
    if why:
        rep.add(name, NOT_MET, info=why)
        return
    mods = [D.Cf1, D.Cf2, md.cyclic(R, F_dual)]
    if not all(lc.finite_length_at(M, q) for M in mods):
        rep.add(name, NOT_MET, info="a term of the sequence is not of finite length at q")
        return
    lens = [lc.local_length(M, q) for M in mods]
    rep.add(name, verdict(lens[0] - lens[1] + lens[2] == 0), info={"lengths": lens})


def _witness(R, w):
    if not w:
        return None
    v = w.get("vector", {})
    n = max((R.pos(k) for k in v), default=-1) + 1
    return {"kind": w.get("kind"), "vector": _fmt_vec(R, v, n)}


# ---- the l = 1 sequence -----------------------------------------------------------

def verify_l1_sequence(S):
    R = S.ring
    tag = f"scenario[{S.seed}]"
    if S.l != 1:
        raise ScenarioError(f"the l = 1 sequence needs l = 1, got l = {S.l}")
    rep = Report("l1-seq", {"scenario_seed": S.seed, "params": S.params})
    t0 = time.perf_counter()
    ok, info = scenario_invariants(S)
    rep.add(f"{tag}.invariants", verdict(ok), info=info)
    if not ok:
        return rep
    CU = S.global_complex()
    MU = cx.cohomology(CU, 2).module
    B, F_dual = dual_side(S)
    B_pn = B.ngens == 0 or md.is_pseudo_null(B)
    T, _ = md.torsion_submodule(MU)
    rep.add(f"{tag}.torsion-free-iff-dual-pseudo-null", verdict(B_pn == T.is_zero()),
            info={"dual_pseudo_null": B_pn, "H2_torsion_free": T.is_zero()})
    if not B_pn:
        support = md.annihilator_base(B)
        Bfmt = [R.base().fmt(g) for g in support]
        rep.add(f"{tag}.l1-sequence", NOT_MET, info={"codim1_support_annihilator": Bfmt})
        return rep
    try:
        theta, brep = cx.bidual_det_compare(CU.shift(1), 1)
        rep.add(f"{tag}.bidual-is-det", verdict(all(brep.values())), info=brep)
    except md.ModuleError as exc:
        rep.add(f"{tag}.bidual-is-det", FAIL, info=str(exc))
        return rep
    D = build_diagram(S)
    E2 = md.ext(B, 2).twist(S.kappa)
    E2p, _, _ = md.prune(E2)
    gen = md.cyclic_generator(E2p)
    cyclic_ok = gen is not None
    same = md.ideal_equal(R, md.fitting_ideal(E2p, 0), D.I_low)
    rep.add(f"{tag}.bottom-row", verdict(cyclic_ok and same),
            ideals={"fitting_E2": _fmt_ideal(R, md.fitting_ideal(E2p, 0)), "minors": _fmt_ideal(R, D.I_low)})
    if not (cyclic_ok and same):
        return rep
    to_e2 = md.ModuleHom(D.Cf2, E2p, [gen])
    inj = md.is_injective(D.g1)
    mid, wit = md.exact_at(D.g1, to_e2)
    onto = md.is_surjective(to_e2)
    rep.add(f"{tag}.l1-sequence", verdict(inj and mid and onto), witness=_witness(R, wit),
            info={"injective": inj, "middle": mid, "surjective": onto},
            ideals={"L_alg": [R.fmt(g) for g in D.lalg]})
    img, _ = md.image(D.boundary)
    corner_finite = img.ngens == 0 or md.dim_base(img) <= 0
    rep.add(f"{tag}.corner-finite", verdict(corner_finite))
    Af, _ = md.finite_part(D.Cf1)
    rep.add(f"{tag}.finite-part-cyclic", verdict(md.cyclic_generator(Af) is not None),
            info={"finite_part_generators": md.prune(Af)[0].ngens})
    rep.timings[tag] = round(time.perf_counter() - t0, 4)
    return rep


def parse_primes(R, specs):
    out = []
    for s in specs:
        out.append(lc.MonomialPrime.parse(R, s))
    return out


__all__ = ["Report", "Scenario", "ScenarioError", "generate_scenario", "verify_psi_suite",
           "verify_main_sequence", "verify_chern", "verify_l1_sequence", "appendix_suite",
           "scenario_invariants", "RingError"]
