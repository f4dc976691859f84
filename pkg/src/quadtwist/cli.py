"""Command-line interface.

Exit codes: 0 success, 1 verification failure(s), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import is_prime
from .profile_scan import HAVE_COMPILED, scan_profiles
from .curves import SingularModelError, minimal_model, model, quadratic_twist
from .harness import (
    CorpusError,
    default_corpus_path,
    ingest_corpus,
    report_to_json,
    run_sweep,
)
from .localred import tate_local
from .twistlaws import (
    SetupError,
    find_auxiliary_discriminant,
    measured_u,
    u_of_discriminant,
    validate_setup,
)

USAGE_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default already exits 2
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _curve_arg(text: str):
    parts = text.split(",")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError("expected a1,a2,a3,a4,a6")
    try:
        return model(*(int(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="quadtwist", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_curve(p):
        p.add_argument("--curve", type=_curve_arg, required=True, metavar="a1,a2,a3,a4,a6")

    p = sub.add_parser("tate", help="local reduction data at a prime")
    add_curve(p)
    p.add_argument("--prime", type=int, required=True)

    p = sub.add_parser("twist", help="quadratic twist and its minimal model")
    add_curve(p)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("minimal", help="global minimal model")
    add_curve(p)

    p = sub.add_parser("u-of-d", help="period scale u of the twist by a fundamental discriminant")
    add_curve(p)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("verify", help="run the batch verification sweep")
    p.add_argument("--corpus", default=None, metavar="PATH")
    p.add_argument("--dmax", type=int, default=500)
    p.add_argument("--mode", choices=("thm13", "thm31", "lemmas", "all"), default="all")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("enumerate-case3", help="mod-32 residue enumeration profiles")
    p.add_argument("--backend", choices=("auto", "compiled", "pure"), default="auto")

    p = sub.add_parser("find-aux", help="smallest auxiliary discriminant flipping one prime")
    add_curve(p)
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, default=None)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--nplus", type=int, default=None)
    p.add_argument("--nminus", type=int, default=None)
    p.add_argument("--bound", type=int, default=10**6)
    return top


def _cmd_tate(args) -> int:
    if not is_prime(args.prime):
        print(f"error: {args.prime} is not prime", file=sys.stderr)
        return USAGE_ERROR
    loc = tate_local(args.curve, args.prime)
    line = f"{loc.kodaira} c={loc.tamagawa} v={loc.disc_valuation}"
    if loc.split is not None:
        line += " split" if loc.split else " nonsplit"
    else:
        line += f" {loc.kind}"
    print(line)
    return 0


def _cmd_twist(args) -> int:
    T = quadratic_twist(args.curve, args.d)
    mm = minimal_model(T)
    print("twist:", ",".join(map(str, T)))
    print("minimal:", ",".join(map(str, mm.minimal)), f"u={mm.u_value}")
    return 0


def _cmd_minimal(args) -> int:
    mm = minimal_model(args.curve)
    print(",".join(map(str, mm.minimal)), f"u={mm.u_value}")
    return 0


def _cmd_u_of_d(args) -> int:
    E = minimal_model(args.curve).minimal
    u = u_of_discriminant(E, args.d)
    print(f"u={u} (measured {measured_u(E, args.d)})")
    return 0


def _cmd_verify(args) -> int:
    path = args.corpus or default_corpus_path()
    corpus = ingest_corpus(path)
    report = run_sweep(corpus, args.dmax, args.mode, jobs=max(1, args.jobs), corpus_name=path)
    text = report_to_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    summary = report["summary"]
    print(
        f"{summary['instances']} instances, {summary['checks_run']} checks, "
        f"{summary['failures']} failures"
    )
    for fail in report["failures"]:
        print("FAIL:", json.dumps(fail, sort_keys=True))
    return 0 if summary["failures"] == 0 else 1


def _cmd_enumerate(args) -> int:
    res = scan_profiles(args.backend)
    print(f"backend: {res.backend} (compiled available: {HAVE_COMPILED})")
    print("key range:", sorted(res.key_range))
    print("tamagawa-2 profile:", sorted(res.tamagawa2_profile))
    print("tamagawa-4 profile:", sorted(res.tamagawa4_profile))
    ok = res.matches_expected()
    print("matches expected sets:", ok)
    return 0 if ok else 1


def _cmd_find_aux(args) -> int:
    setup = validate_setup(
        minimal_model(args.curve).minimal,
        args.d1,
        args.d2,
        n_plus=args.nplus,
        n_minus=args.nminus,
    )
    f = find_auxiliary_discriminant(setup, args.prime, bound=args.bound)
    print(f.value)
    return 0


_COMMANDS = {
    "tate": _cmd_tate,
    "twist": _cmd_twist,
    "minimal": _cmd_minimal,
    "u-of-d": _cmd_u_of_d,
    "verify": _cmd_verify,
    "enumerate-case3": _cmd_enumerate,
    "find-aux": _cmd_find_aux,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except (SetupError, CorpusError, SingularModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
