"""Command-line interface: ``qrs <command> ...``.  Exit status 0 iff every check passed."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional

from ._parallel import default_threads
from .insertion import (
    LetterOutOfRangeError,
    mc_chain_shapes,
    phi_distribution,
    q_insert_outcomes,
    rs_correspondence,
    seeded_rng,
)
from .permutations import F_sigma, Permutation, sample_shape, theta
from .qarith import WeightMode
from .qtasep import compare_mc_vs_formula, exact_context, simulate_ct, verify_coupling
from .shapes import enumerate_partitions
from .tableaux import MalformedTableauError, Tableau
from .whittaker import (
    WhittakerContext,
    cauchy_check,
    corollary3_check,
    eigen_check,
    eq3_check,
    f_lambda_q,
    k_lambda_mu,
    nu,
    proposition1_check,
    psi,
    stochastic_check,
    verify_hat_intertwining,
    verify_intertwining,
    verify_theorem2,
)
from .whittaker.verify import compositions

SCHEMA = 1


class UsageError(Exception):
    pass


# -- argument helpers ----------------------------------------------------------------------

def _ints(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    if "," in text:
        return [int(x) for x in text.split(",") if x.strip()]
    return [int(c) for c in text]


def _int_list(text: str) -> list:
    return [int(x) for x in text.split(",") if x.strip()]


def _fractions(text: str) -> list:
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def _mode(args) -> WeightMode:
    try:
        return WeightMode.parse(args.weight_mode)
    except ValueError as e:
        raise UsageError(str(e))


def _a_vector(args, l: int) -> list:
    if getattr(args, "a", None):
        a = _fractions(args.a)
        if len(a) != l:
            raise UsageError(f"--a has {len(a)} entries but l = {l}")
        return a
    return [Fraction(1, l)] * l


def _threads(args) -> int:
    return args.threads if args.threads else default_threads()


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj: dict):
    _emit(args, json.dumps({"schema": SCHEMA, **obj}, indent=2) + "\n")


def _load_tableau(args) -> Tableau:
    if args.tableau:
        with open(args.tableau) as fh:
            obj = json.load(fh)
    elif args.rows:
        obj = {"rows": json.loads(args.rows)}
    else:
        raise UsageError("give --tableau FILE or --rows JSON")
    if args.l is not None:
        obj.setdefault("l", args.l)
    return Tableau.from_json(obj, args.l)


def _tab_json(P: Tableau) -> dict:
    return {"rows": P.to_rows(), **P.to_json()}


# -- commands ------------------------------------------------------------------------------

def cmd_insert(args) -> int:
    P = _load_tableau(args)
    mode = _mode(args)
    outs = q_insert_outcomes(P, args.letter, mode)
    _emit_json(args, {
        "input": _tab_json(P),
        "letter": args.letter,
        "weight_mode": str(mode),
        "outcomes": [
            {"tableau": _tab_json(o.tableau), "weight": o.weight.to_json(), "path": o.path.to_json()}
            for o in outs
        ],
    })
    return 0


def cmd_phi(args) -> int:
    word = _ints(args.word)
    l = args.l or max(word, default=1)
    mode = _mode(args)
    dist = phi_distribution(word, l, mode)
    pairs = [
        {"P": _tab_json(P), "Q": {"rows": Q.to_rows(), **Q.to_json()}, "weight": w.to_json()}
        for (P, Q), w in sorted(dist.items(), key=lambda kv: (kv[0][0].key(), kv[0][1].key()))
    ]
    _emit_json(args, {"word": word, "l": l, "weight_mode": str(mode), "total": dist.total().to_json(),
                      "pairs": pairs})
    return 0


def cmd_rs(args) -> int:
    word = _ints(args.word)
    P, Q = rs_correspondence(word, args.l)
    _emit_json(args, {"word": word, "P": _tab_json(P), "Q": {"rows": Q.to_rows(), **Q.to_json()}})
    return 0


def _verify_reports(args) -> list:
    suite = args.suite
    nc = args.negative_control
    if suite == "prop1":
        lam = _int_list(args.lam) if args.lam else [2, 1]
        ls = _int_list(args.ls) if args.ls else [3, 6, 12, 24]
        q = Fraction(args.q) if args.q else Fraction(1, 2)
        return [proposition1_check(lam, q, ls, negative_control=nc)]
    mode = _mode(args)
    if suite == "eq3":
        return [eq3_check(args.n or 5, args.l or 6, mode, negative_control=nc)]
    if suite == "stochastic":
        return [stochastic_check(args.l or 4, args.max_size if args.max_size is not None else 6, mode,
                                 negative_control=nc)]
    l = args.l or 2
    ctx = WhittakerContext(_a_vector(args, l), mode)
    if suite == "theorem2":
        return [verify_theorem2(ctx, args.n or 3, negative_control=nc)]
    if suite == "intertwining":
        bound = args.bound if args.bound is not None else 5
        reports = [verify_intertwining(ctx, bound, negative_control=nc)]
        if l >= 2:
            reports.append(verify_hat_intertwining(ctx, bound, negative_control=nc))
        return reports
    if suite == "eigen":
        return [eigen_check(ctx, args.bound if args.bound is not None else 5, negative_control=nc)]
    if suite == "cauchy":
        return [cauchy_check(ctx, args.n or 6, negative_control=nc)]
    if suite == "corollary3":
        return [corollary3_check(ctx, args.n or 3, negative_control=nc)]
    if suite == "coupling":
        return [verify_coupling(ctx, args.n or 4, negative_control=nc)]
    raise UsageError(f"unknown suite {suite}")


def cmd_verify(args) -> int:
    reports = _verify_reports(args)
    ok = all(r.passed for r in reports)
    for r in reports:
        print(r.line(), file=sys.stderr)
    _emit_json(args, {"suite": args.suite, "negative_control": args.negative_control, "passed": ok,
                      "reports": [r.to_json() for r in reports]})
    return 0 if ok else 1


def _float_q(args) -> float:
    q = float(Fraction(args.q)) if args.q else 0.5
    if not 0 <= q < 1:
        raise UsageError("simulation needs 0 <= q < 1")
    return q


def cmd_simulate(args) -> int:
    q = _float_q(args)
    l = args.l or (len(args.a.split(",")) if args.a else 2)
    a = _a_vector(args, l)
    if sum(a) != 1 or any(x < 0 for x in a):
        raise UsageError("--a must be a probability vector")
    threads = _threads(args)
    if args.what == "tasep":
        ctx = exact_context(a, Fraction(args.q) if args.q else Fraction(1, 2))
        cmp = compare_mc_vs_formula(ctx, args.t, args.runs, seed=args.seed, eps=args.eps,
                                    threshold=args.threshold, threads=threads)
        if args.trajectory_out:
            traj = simulate_ct(a, q, args.t, seeded_rng(args.seed, 0))
            with open(args.trajectory_out, "w") as fh:
                for time, x in traj:
                    fh.write(json.dumps({"time": time, "positions": list(x)}) + "\n")
        _emit(args, cmp.to_csv())
        return 0 if cmp.passed else 1
    # chain: law of sh P(n) against nu
    n = args.n or 4
    ctx = exact_context(a, Fraction(args.q) if args.q else Fraction(1, 2))
    counts = mc_chain_shapes(a, q, n, args.runs, args.seed, threads)
    lines = ["shape,nu,empirical,stderr,pass"]
    ok = True
    for lam in enumerate_partitions(n, l):
        p = float(nu(lam, ctx))
        emp = counts.get(lam, 0) / args.runs
        se = math.sqrt(p * (1 - p) / args.runs)
        good = abs(emp - p) <= 4 * se
        ok &= good
        lines.append(f"{_part_str(lam)},{p:.12g},{emp:.12g},{se:.6g},{'pass' if good else 'fail'}")
    _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


def _part_str(lam) -> str:
    return "(" + " ".join(map(str, lam)) + ")"


def _sizes(text: Optional[str], default: str) -> list:
    return _int_list(text or default)


def cmd_tables(args) -> int:
    mode = _mode(args)
    lines = []
    if args.what == "fsigma":
        lines.append("sigma,F")
        for n in _sizes(args.n, "3"):
            for s in Permutation.all(n):
                lines.append(f"{s},{F_sigma(s, mode)}")
    elif args.what == "theta":
        lines.append("lambda,theta")
        for n in _sizes(args.n, "3"):
            for lam in enumerate_partitions(n, n):
                lines.append(f"{_part_str(lam)},{theta(lam, mode)}")
    elif args.what == "flambda":
        lines.append("lambda,f")
        for n in _sizes(args.n, "3"):
            for lam in enumerate_partitions(n, n):
                lines.append(f"{_part_str(lam)},{f_lambda_q(lam, mode)}")
    elif args.what == "kostka":
        l = args.l or 3
        lines.append("lambda,mu,k")
        for n in _sizes(args.n, "3"):
            for lam in enumerate_partitions(n, l):
                for mu in compositions(n, l):
                    lines.append(f"{_part_str(lam)},{_part_str(mu)},{k_lambda_mu(lam, mu, l, mode)}")
    elif args.what == "psi":
        l = args.l or 2
        ctx = WhittakerContext(_a_vector(args, l), mode)
        lines.append("lambda,psi")
        for n in _sizes(args.n, "3"):
            for lam in enumerate_partitions(n, l):
                lines.append(f"{_part_str(lam)},{psi(lam, ctx)}")
    # polynomial strings never contain commas and shapes are space separated
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_sample(args) -> int:
    q = Fraction(args.q) if args.q else Fraction(1, 2)
    if not 0 <= q < 1:
        raise UsageError("mu_q needs 0 <= q < 1")
    shapes = sample_shape(args.n, q, seeded_rng(args.seed, 0), args.size)
    _emit_json(args, {"n": args.n, "q": str(q), "seed": args.seed, "shapes": [list(s) for s in shapes]})
    return 0


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes for Monte Carlo (default: $QRS_THREADS or 1)")
    common.add_argument("--weight-mode", default="symbolic",
                        help="symbolic | exact:q=P/R | float:q=X (default symbolic)")

    p = argparse.ArgumentParser(prog="qrs", description="q-weighted column insertion toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("insert", parents=[common], help="q-insert a letter into a tableau")
    s.add_argument("--tableau", help="JSON file with shape_chain or rows")
    s.add_argument("--rows", help="rows as inline JSON, e.g. [[1,1,2,2],[2]]")
    s.add_argument("--l", type=int)
    s.add_argument("--letter", type=int, required=True)
    s.set_defaults(func=cmd_insert)

    s = sub.add_parser("phi", parents=[common], help="pair distribution of a word")
    s.add_argument("--word", required=True, help="digits (1143232) or comma separated")
    s.add_argument("--l", type=int)
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("rs", parents=[common], help="classic column-insertion RS pair")
    s.add_argument("--word", required=True)
    s.add_argument("--l", type=int)
    s.set_defaults(func=cmd_rs)

    s = sub.add_parser("verify", parents=[common], help="run an identity check")
    s.add_argument("suite", choices=["theorem2", "intertwining", "eigen", "cauchy", "prop1",
                                      "corollary3", "eq3", "stochastic", "coupling"])
    s.add_argument("--l", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--bound", type=int)
    s.add_argument("--max-size", type=int)
    s.add_argument("--a", help="comma separated rationals, default uniform")
    s.add_argument("--q", help="exact q for prop1 (default 1/2)")
    s.add_argument("--lam", help="partition for prop1, e.g. 2,1")
    s.add_argument("--ls", help="alphabet sizes for prop1, e.g. 3,6,12,24")
    s.add_argument("--negative-control", action="store_true",
                   help="run against a mutated ingredient; the check is expected to fail")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo against exact laws")
    s.add_argument("what", choices=["chain", "tasep"])
    s.add_argument("--l", type=int)
    s.add_argument("--a")
    s.add_argument("--q", default="0.5")
    s.add_argument("--n", type=int, help="steps of the tableau chain")
    s.add_argument("--t", type=float, default=2.0)
    s.add_argument("--runs", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--eps", type=float, default=1e-8)
    s.add_argument("--threshold", type=float, help="judge m with formula mass above this (default 10*eps)")
    s.add_argument("--trajectory-out", help="JSON lines of run 0's trajectory")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("tables", parents=[common], help="CSV tables of polynomials")
    s.add_argument("what", choices=["psi", "flambda", "kostka", "fsigma", "theta"])
    s.add_argument("--n", help="size or comma separated sizes")
    s.add_argument("--l", type=int)
    s.add_argument("--a")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("sample", parents=[common], help="sample from mu_q")
    s.add_argument("what", choices=["shape"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", default="0.5")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--size", type=int, default=1)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LetterOutOfRangeError, MalformedTableauError, ValueError) as e:
        print(f"qrs: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
