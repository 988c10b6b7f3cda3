"""Command-line driver for the verification suites."""
import argparse
import json
import os
import sys
import tempfile

from . import local as lc
from . import scenarios as sc
from .ring_core import RingError


def _ints(text):
    text = str(text).strip().strip("[]")
    return [int(x) for x in text.split(",") if x.strip()]


def _jobs(args):
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("DETPSI_JOBS")
    return int(env) if env and env.isdigit() else 1


def write_json(path, obj):
    """Atomic write: temp file in the target directory, then rename."""
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".detpsi-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out", "jobs")}
    return cfg


def _primes(R, specs):
    if not specs:
        return lc.monomial_primes(R, 2)
    return [lc.MonomialPrime.parse(R, s) for s in specs]


def _scenarios(args):
    """Scenarios from --scenario files or generated from the ring flags; yields (seed, Scenario | error)."""
    if args.scenario:
        for path in args.scenario:
            with open(path) as fh:
                yield None, sc.Scenario.from_json(json.load(fh))
        return
    for k in range(args.count):
        seed = args.seed + k
        try:
            yield seed, sc.generate_scenario(seed, args.q, args.d, tuple(args.group), args.n, args.degs,
                                             args.max_resample)
        except sc.ScenarioError as exc:
            yield seed, exc


def _scenario_task(payload):
    kind, obj, primes = payload
    S = sc.Scenario.from_json(obj)
    P = _primes(S.ring, primes)
    if kind == "main-seq":
        return sc.verify_main_sequence(S, P).to_json()
    if kind == "chern":
        return sc.verify_chern(S, P).to_json()
    if S.l != 1:
        rep = sc.Report(kind, {"scenario_seed": S.seed})
        rep.add(f"scenario[{S.seed}].l1-sequence", sc.INVALID, info=f"needs l = 1, got l = {S.l}")
        return rep.to_json()
    return sc.verify_l1_sequence(S).to_json()


def run_scenarios(args, kind):
    rep = sc.Report(kind, _config(args))
    tasks = []
    for seed, S in _scenarios(args):
        if isinstance(S, Exception):
            rep.add(f"scenario[{seed}].generate", sc.FAIL, info=str(S))
            continue
        tasks.append((kind, S.to_json(), args.prime))
    for sub in sc._run(_scenario_task, tasks, _jobs(args)):
        rep.extend(sub["checks"])
        rep.timings.update(sub["timings"])
    return rep


def cmd_psi(args):
    return sc.verify_psi_suite(args.seed, args.count, args.q, args.d, tuple(args.group), _jobs(args))


def cmd_appendix(args):
    return sc.appendix_suite(args.seed, args.count, args.q, args.d, tuple(args.group), _jobs(args))


def cmd_gen(args):
    S = sc.generate_scenario(args.seed, args.q, args.d, tuple(args.group), args.n, args.degs,
                             args.max_resample)
    write_json(args.out, S.to_json())
    return None


def cmd_show(args):
    with open(args.report) as fh:
        obj = json.load(fh)
    if obj.get("schema") != sc.SCHEMA:
        raise ValueError("not a report file")
    print(f"# {obj['suite']}")
    for c in obj["checks"]:
        print(f"{c['check']}\t{c['verdict']}")
    s = obj["summary"]
    print("# " + " ".join(f"{k}={s[k]}" for k in sorted(s)))
    bad = s.get(sc.FAIL, 0) or s.get(sc.INVALID, 0)
    return 1 if bad else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="detpsi", description="Verify determinant-pairing identities "
                                 "over group rings of polynomial rings.")
    sub = ap.add_subparsers(dest="command", required=True)

    def ring_flags(p, d=2):
        p.add_argument("--q", type=int, default=3, help="prime field size")
        p.add_argument("--d", type=int, default=d, help="number of polynomial variables")
        p.add_argument("--group", type=_ints, default=[], help="cyclic group orders, e.g. 3 or 3,3")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (env DETPSI_JOBS)")

    def scen_flags(p):
        ring_flags(p, d=1)
        p.add_argument("--count", type=int, default=1, help="number of generated scenarios")
        p.add_argument("--n", type=int, default=2, help="number of types")
        p.add_argument("--degs", type=_ints, default=[1, 1], help="prime degrees, e.g. 1,1")
        p.add_argument("--max-resample", type=int, default=sc.MAX_RESAMPLE)
        p.add_argument("--scenario", action="append", default=[], help="scenario JSON file (repeatable)")
        p.add_argument("--prime", action="append", default=[],
                       help="monomial prime as comma-separated variables, e.g. x or x,y (repeatable)")

    p = sub.add_parser("psi-suite", help="random strict-mode complexes")
    ring_flags(p)
    p.add_argument("--count", type=int, default=25)
    p.set_defaults(func=cmd_psi)
    p = sub.add_parser("appendix", help="Fitting-ideal duality identities and presentation repair")
    ring_flags(p)
    p.add_argument("--count", type=int, default=25)
    p.set_defaults(func=cmd_appendix)
    for name in ("main-seq", "l1-seq", "chern"):
        p = sub.add_parser(name, help=f"{name} verification on scenarios")
        scen_flags(p)
        p.set_defaults(func=lambda a, k=name: run_scenarios(a, k))
    p = sub.add_parser("gen-scenario", help="write a generated scenario as JSON")
    scen_flags(p)
    p.set_defaults(func=cmd_gen)
    p = sub.add_parser("show", help="print the verdicts of a report")
    p.add_argument("report")
    p.set_defaults(func=cmd_show)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out = args.func(args)
    except (OSError, ValueError, RingError, KeyError) as exc:
        print(f"detpsi: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, int):
        return out
    if out is None:
        return 0
    write_json(args.out, out.to_json())
    return 0 if out.ok() else 1


if __name__ == "__main__":
    sys.exit(main())
