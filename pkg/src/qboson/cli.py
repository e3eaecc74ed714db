"""Command-line driver and verification harness.

Subcommands operate on a Cartan datum chosen by --preset or --config
(a JSON file {"cartan": [[...]], "symmetrizers": [...]}).  Verification
reports are JSON with a schema_version field and deterministic layout;
exit codes: 0 pass, 1 verification failure, 2 usage or config error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from qboson.algebra import AlgebraError, QBosonAlgebra, ResourceBudgetError
from qboson.cartan import CartanError, datum_from_config, preset, word_of_seq
from qboson.forms import hform, pair
from qboson.parser import ParseError, element_to_str, parse
from qboson.pbw import (ConsistencyError, CuspidalSet, coords_to_json,
                        tensor_check, twist)
from qboson.roots import kostant_count
from qboson.scalar import Scalar, scalar_to_str
from qboson.symmetry import apply_braid, t_i, t_i_star

SCHEMA_VERSION = 1

DEFAULT_SEQS = {"A1": (1,), "A2": (1, 2, 1), "B2": (1, 2, 1, 2), "G2": (1, 2, 1, 2, 1, 2)}


def _datum_from_args(args):
    if getattr(args, "config", None):
        with open(args.config) as fh:
            return datum_from_config(json.load(fh))
    name = getattr(args, "preset", None) or "A2"
    return preset(name)


def _algebra(args):
    return QBosonAlgebra(_datum_from_args(args), max_height=getattr(args, "max_height", None))


def _parse_word(text):
    letters = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        k = int(part)
        if k == 0:
            raise CartanError("braid letters are nonzero 1-based node indices")
        letters.append((abs(k) - 1, 1 if k > 0 else -1))
    return tuple(letters)


def _parse_seq(text):
    return tuple(int(p) - 1 for p in text.split(",") if p.strip())


def _parse_u(text):
    return tuple(int(p) for p in text.split(",") if p.strip())


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _check(name, passed, detail=""):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _suite_braid(alg, budget, seed):
    datum = alg.datum
    lo, hi = (0, 0) if datum == preset("G2") else (-1, 1)
    tasks = []
    for i in range(datum.n):
        for j in range(i + 1, datum.n):
            m = datum.m_ij(i, j)
            if m == float("inf"):
                raise CartanError("braid-relation verification refuses infinite m_ij")
            for k in range(datum.n):
                for lev in range(lo, hi + 1):
                    tasks.append((i, j, int(m), k, lev))

    def run(task):
        i, j, m, k, lev = task
        x = alg.gen(k, lev)
        a, b = x, x
        for step in range(m):
            a = t_i(i if step % 2 == 0 else j, a)
            b = t_i(j if step % 2 == 0 else i, b)
        name = "braid:m%d:pair%d%d:f[%d,%d]" % (m, i + 1, j + 1, k + 1, lev)
        return _check(name, a == b)

    return tasks, run


def _suite_inverse(alg, budget, seed):
    tasks = [(i, k, m) for i in range(alg.datum.n)
             for k in range(alg.datum.n) for m in range(-2, 3)]

    def run(task):
        i, k, m = task
        x = alg.gen(k, m)
        ok = t_i_star(i, t_i(i, x)) == x and t_i(i, t_i_star(i, x)) == x
        return _check("inverse:t%d:f[%d,%d]" % (i + 1, k + 1, m), ok)

    return tasks, run


def _suite_forms(alg, budget, seed):
    n_max = budget or 5
    tasks = [(i, n) for i in range(alg.datum.n) for n in range(1, n_max + 1)]

    def run(task):
        i, n = task
        d = alg.datum.d(i)
        x = alg.normal_form([(((i, 0),) * n, Scalar.one())])
        expected = Scalar.one()
        for k in range(1, n + 1):
            expected = expected * (Scalar.one() - Scalar.q_power(2 * d * k))
        ok1 = hform(x, x) == expected
        ok2 = pair(x, x) == Scalar.q_power(-d * n * n) * expected
        return _check("forms:f[%d]^%d" % (i + 1, n), ok1 and ok2,
                      "hform %s pair %s" % (ok1, ok2))

    return tasks, run


def _default_seq(alg, args):
    if getattr(args, "seq", None):
        return _parse_seq(args.seq)
    for name, seq in DEFAULT_SEQS.items():
        if alg.datum == preset(name):
            return tuple(i - 1 for i in seq)
    raise CartanError("no default sequence for this datum; pass --seq")


def _indices_up_to(r, total):
    out = []

    def rec(k, acc, left):
        if k == r:
            out.append(tuple(acc))
            return
        for v in range(left + 1):
            acc.append(v)
            rec(k + 1, acc, left - v)
            acc.pop()

    rec(0, [], total)
    return out


def _suite_orth(alg, budget, seed, seq):
    cus = CuspidalSet(alg, seq)
    us = _indices_up_to(cus.r, budget or 3)
    tasks = [(u, v) for u in us for v in us]

    def run(task):
        u, v = task
        got = pair(cus.pbw_element(u), cus.pbw_element(v))
        want = cus.pbw_norm_formula(u) if u == v else Scalar.zero()
        return _check("orth:u=%s:v=%s" % (",".join(map(str, u)), ",".join(map(str, v))),
                      got == want)

    return tasks, run


def _suite_ls(alg, budget, seed, seq):
    cus = CuspidalSet(alg, seq)
    tasks = [(k, t) for k in range(1, cus.r + 1) for t in range(k + 1, cus.r + 1)]

    def run(task):
        k, t = task
        coords = cus.ls_commutator(k, t)
        interior = all(all(u[s] == 0 for s in range(len(u)) if s <= k - 1 or s >= t - 1)
                       for u in coords)
        laurent = all(c.is_in_Zq_laurent() for c in coords.values())
        return _check("ls:k=%d:t=%d" % (k, t), interior and laurent,
                      "interior %s laurent %s" % (interior, laurent))

    return tasks, run


def _random_element(alg, rng, lo, hi, max_len=3):
    terms = []
    for _ in range(rng.randint(1, 3)):
        length = rng.randint(0, max_len)
        word = tuple((rng.randrange(alg.datum.n), rng.randint(lo, hi))
                     for _ in range(length))
        coeff = Scalar.q_power(rng.randint(-2, 2), rng.randint(-3, 3))
        terms.append((word, coeff))
    return alg.normal_form(terms)


def _suite_twist(alg, budget, seed, seq):
    cus = CuspidalSet(alg, seq)
    rev = tuple(reversed(seq))
    cus_rev = CuspidalSet(alg, rev)
    word_rev = word_of_seq(rev)
    word = word_of_seq(seq)
    us = _indices_up_to(cus.r, budget or 2)
    tasks = [("pbw", u) for u in us]
    tasks += [("cuspidal", k) for k in range(1, cus.r + 1)]
    tasks += [("involution", n) for n in range(50)]

    def run(task):
        kind, arg = task
        if kind == "pbw":
            got = twist(word_rev, cus.pbw_element(arg))
            want = cus_rev.pbw_element(tuple(reversed(arg)))
            return _check("twist:pbw:u=%s" % ",".join(map(str, arg)), got == want)
        if kind == "cuspidal":
            # the k-th cuspidal element maps to the (r-k+1)-th one of the
            # reversed sequence
            got = twist(word_rev, cus.cuspidal(arg))
            want = cus_rev.cuspidal(cus.r - arg + 1)
            return _check("twist:cuspidal:k=%d" % arg, got == want)
        rng = random.Random((seed, arg))
        x = _random_element(alg, rng, 0, 2)
        got = twist(word_rev, twist(word, x))
        return _check("twist:involution:%d" % arg, got == x)

    return tasks, run


def _suite_tensor(alg, budget, seed):
    height = budget or 3
    second = (0, 1) if alg.datum.n > 1 else (0, 0)
    tasks = [((0,), min(height, 2)), (second, height)]

    def run(task):
        seq, ht = task
        report = tensor_check(alg, seq, 2, ht)
        detail = "rank %d/%d" % (report["rank"], report["products"])
        return _check("tensor:seq=%s" % ",".join(str(i + 1) for i in seq),
                      report["passed"], detail)

    return tasks, run


def _suite_serre_dims(alg, budget, seed):
    height = budget or 4
    from qboson.pbw import _multidegrees_of_height
    tasks = []
    for ht in range(1, height + 1):
        tasks.extend(_multidegrees_of_height(alg.datum.n, ht))

    def run(mu):
        got = len(alg.canonical_words(mu))
        want = kostant_count(alg.datum, mu)
        return _check("serre-dims:mu=%s" % ",".join(map(str, mu)), got == want,
                      "canonical %d kostant %d" % (got, want))

    return tasks, run


SUITES = ("braid", "inverse", "forms", "orth", "ls", "twist", "tensor", "serre-dims")


def run_suite(suite, alg, args):
    budget = getattr(args, "budget", None)
    seed = getattr(args, "seed", 0)
    if suite in ("orth", "ls", "twist"):
        seq = _default_seq(alg, args)
        tasks, run = {"orth": _suite_orth, "ls": _suite_ls, "twist": _suite_twist}[suite](
            alg, budget, seed, seq)
    elif suite == "braid":
        tasks, run = _suite_braid(alg, budget, seed)
    elif suite == "inverse":
        tasks, run = _suite_inverse(alg, budget, seed)
    elif suite == "forms":
        tasks, run = _suite_forms(alg, budget, seed)
    elif suite == "tensor":
        tasks, run = _suite_tensor(alg, budget, seed)
    elif suite == "serre-dims":
        tasks, run = _suite_serre_dims(alg, budget, seed)
    else:
        raise CartanError("unknown suite %r" % suite)
    threads = max(1, getattr(args, "threads", 1))
    if threads == 1:
        checks = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            checks = list(pool.map(run, tasks))
    checks.sort(key=lambda c: c["name"])
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "preset": getattr(args, "preset", None),
        "budget": budget,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_reduce(args):
    alg = _algebra(args)
    print(element_to_str(parse(args.expr, alg)))
    return 0


def _cmd_act(args):
    alg = _algebra(args)
    x = parse(args.expr, alg)
    print(element_to_str(apply_braid(_parse_word(args.word), x)))
    return 0


def _cmd_pairing(args):
    alg = _algebra(args)
    x = parse(args.left, alg)
    y = parse(args.right, alg)
    print("hform = %s" % scalar_to_str(hform(x, y)))
    print("pair = %s" % scalar_to_str(pair(x, y)))
    return 0


def _cmd_pbw(args):
    alg = _algebra(args)
    cus = CuspidalSet(alg, _parse_seq(args.seq))
    if args.u is None and args.expand is None:
        raise CartanError("pbw needs --u or --expand")
    if args.u is not None:
        print(element_to_str(cus.pbw_element(_parse_u(args.u))))
        return 0
    coords, residual = cus.pbw_expand(parse(args.expand, alg))
    print(json.dumps({
        "schema_version": SCHEMA_VERSION,
        "coords": coords_to_json(coords),
        "residual": element_to_str(residual),
    }, sort_keys=True, indent=2))
    return 0


def _cmd_global(args):
    alg = _algebra(args)
    cus = CuspidalSet(alg, _parse_seq(args.seq))
    element, coords = cus.kl_basis(_parse_u(args.u))
    print(json.dumps({
        "schema_version": SCHEMA_VERSION,
        "coords": coords_to_json(coords),
        "element": element_to_str(element),
    }, sort_keys=True, indent=2))
    return 0


def _cmd_verify(args):
    alg = _algebra(args)
    report = run_suite(args.suite, alg, args)
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report["passed"] else 1


def _cmd_cache(args):
    alg = _algebra(args)
    if args.action == "export":
        from qboson.pbw import _multidegrees_of_height
        for ht in range(1, (args.height or 3) + 1):
            for mu in _multidegrees_of_height(alg.datum.n, ht):
                alg.serre_table(mu)
        with open(args.path, "w") as fh:
            json.dump(alg.export_serre_tables(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        print("exported %d tables" % len(alg._serre))
        return 0
    with open(args.path) as fh:
        data = json.load(fh)
    alg.import_serre_tables(data)
    fresh = QBosonAlgebra(alg.datum)
    for entry in data["entries"]:
        fresh.serre_table(tuple(entry["mu"]))
    identical = fresh.export_serre_tables() == alg.export_serre_tables()
    print("imported %d tables; recomputation identical: %s" % (len(data["entries"]), identical))
    return 0 if identical else 1


def _add_datum_opts(p):
    p.add_argument("--preset", choices=("A1", "A2", "B2", "G2", "A3"), default=None)
    p.add_argument("--config", default=None, help="JSON file with cartan/symmetrizers")
    p.add_argument("--max-height", type=int, default=None,
                   help="abort when a word exceeds this letter count")


def build_parser():
    ap = argparse.ArgumentParser(prog="qboson", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="print the normal form of an expression")
    _add_datum_opts(p)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("act", help="apply a signed braid word to an expression")
    _add_datum_opts(p)
    p.add_argument("--word", required=True, help="comma list, e.g. 1,2,-1 (-i means inverse)")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_act)

    p = sub.add_parser("pairing", help="print both bilinear forms of two expressions")
    _add_datum_opts(p)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=_cmd_pairing)

    p = sub.add_parser("pbw", help="PBW elements and coordinate expansion")
    _add_datum_opts(p)
    p.add_argument("--seq", required=True, help="node sequence, e.g. 1,2,1")
    p.add_argument("--u", default=None, help="exponent vector, e.g. 0,0,1")
    p.add_argument("--expand", default=None, help="expression to expand")
    p.set_defaults(func=_cmd_pbw)

    p = sub.add_parser("global", help="the c-invariant basis element for an exponent vector")
    _add_datum_opts(p)
    p.add_argument("--seq", required=True)
    p.add_argument("--u", required=True)
    p.set_defaults(func=_cmd_global)

    p = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    p.add_argument("suite", choices=SUITES)
    _add_datum_opts(p)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seq", default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cache", help="export or import the Serre echelon cache")
    p.add_argument("action", choices=("export", "import"))
    p.add_argument("path")
    _add_datum_opts(p)
    p.add_argument("--height", type=int, default=None)
    p.set_defaults(func=_cmd_cache)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return args.func(args)
    except ResourceBudgetError as exc:
        print("resource budget exceeded: %s" % exc, file=sys.stderr)
        return 3
    except (CartanError, ParseError, FileNotFoundError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print("consistency failure: %s" % exc, file=sys.stderr)
        return 1
    except AlgebraError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
