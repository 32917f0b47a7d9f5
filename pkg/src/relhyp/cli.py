"""Command-line interface: ``relhyp <area> <action> [options]``.

Every failure prints one line ``error: <code>: <detail>`` to stderr and
exits with status 2. Files are written atomically. Constants found by a
bounded search are always reported as empirical, with their bounds.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import automata as au
from .errors import PreconditionError, RelHypError
from .metric import FactorBalls, Metric, build_ball, cached_ball, read_ball_header
from .spec_io import dumps, load_alphabet, write_atomic

AUTO_L_MAX = 8
AUTO_K_MAX = 8


# -- shared plumbing -------------------------------------------------------------------

def _alphabet(args):
    return load_alphabet(args.group, args.alphabet)


def _ball(X, R, args):
    if getattr(args, "cache", None):
        return cached_ball(X, R, args.cache)
    return build_ball(X, R)


def _metric(X, R, args) -> Metric:
    fb = FactorBalls(X, max(R, 2)) if X.is_parabolic else None
    return Metric(X, _ball(X, R, args), fb)


def _emit(text: str, out: Optional[str]):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _resolve_C(X, args):
    """``(C, note)`` from ``--fftp-C`` (an integer or ``auto``)."""
    from .fellow import fftp_report

    if args.fftp_C == "auto":
        ball = _ball(X, AUTO_L_MAX, args)
        rep = fftp_report(X, ball, AUTO_L_MAX, AUTO_K_MAX)
        if rep.constant is None:
            raise PreconditionError(f"no FFTP constant <= {AUTO_K_MAX} up to length {AUTO_L_MAX}")
        return rep.constant, rep.summary()
    try:
        C = int(args.fftp_C)
    except ValueError:
        raise PreconditionError(f"--fftp-C takes an integer or 'auto', not {args.fftp_C!r}") from None
    return C, f"fftp K={C} (user supplied)"


def _geo(X, args):
    from .langmach import ns_automaton

    C, note = _resolve_C(X, args)
    R = max(2 * C + 1, getattr(args, "radius", 0) or 0)
    return ns_automaton(X, C, _ball(X, R, args)), C, note


def _dfa_text(A, fmt, X):
    return au.to_dot(A, X.symbols) if fmt == "dot" else au.to_text(A)


# -- ball --------------------------------------------------------------------------------

def cmd_ball_build(args):
    X = _alphabet(args)
    ball = _ball(X, args.radius, args)
    print(f"radius {ball.radius}; {len(ball)} elements; spheres {ball.sphere_sizes()}")


def cmd_ball_info(args):
    X = _alphabet(args)
    if args.cache:
        path = Path(args.cache) / f"{X.digest().hex()[:16]}.gwb"
        if not path.exists():
            from .errors import CacheError

            raise CacheError(f"no cached ball for this alphabet in {args.cache}")
        head = read_ball_header(path)
        match = "matches" if head["digest"] == X.digest() else "does not match"
        print(f"{path}: GWB1 v{head['version']}, radius {head['radius']}, {head['count']} elements; "
              f"alphabet hash {match}")
        return
    ball = build_ball(X, args.radius)
    print(f"alphabet {' '.join(X.symbols)}; parabolic: {X.is_parabolic}; "
          f"spheres to radius {ball.radius}: {ball.sphere_sizes()}")


# -- genset ------------------------------------------------------------------------------

def cmd_genset_ball(args):
    from .genset import ball_enlarge

    X = _alphabet(args)
    Z = ball_enlarge(X, args.m, _ball(X, args.m, args))
    _emit(dumps({args.name or f"ball{args.m}": Z}), args.out)


def cmd_genset_parabolic(args):
    from .genset import parabolic_enlarge

    Y = _alphabet(args)
    X = parabolic_enlarge(Y, args.k)
    _emit(dumps({args.name or f"parabolic{args.k}": X}), args.out)


# -- lang --------------------------------------------------------------------------------

def cmd_lang_geo(args):
    from .series import growth_series

    X = _alphabet(args)
    A, C, note = _geo(X, args)
    if args.out:
        write_atomic(args.out, _dfa_text(A, args.format, X))
    else:
        print(_dfa_text(A, args.format, X), end="")
    print(f"# geodesic acceptor: C={C}, {A.n_states} states; {note}", file=sys.stderr)
    print(f"series: {growth_series(A).to_text(args.terms)}", file=sys.stderr)


def _factor_languages(X, kind):
    from .langmach import factor_languages

    return factor_languages(X, FactorBalls(X, 8), kind)


def cmd_lang_rel(args):
    from .langmach import rel_language

    from .langmach import factor_languages

    X = _alphabet(args)
    fb = FactorBalls(X, 8)
    R = rel_language(X, factor_languages(X, fb, args.factor_lang), fb)
    if args.out:
        write_atomic(args.out, _dfa_text(R, args.format, X))
    else:
        print(_dfa_text(R, args.format, X), end="")
    print(f"# Rel with {args.factor_lang} factor languages: {R.n_states} states", file=sys.stderr)


def cmd_lang_growth(args):
    from .langmach import geo_rel_automaton
    from .series import growth_series

    X = _alphabet(args)
    A, C, note = _geo(X, args)
    what = "Geo"
    if args.factor_lang != "none":
        A = geo_rel_automaton(X, A, FactorBalls(X, 8), args.factor_lang)
        what = f"Geo ∩ Rel({args.factor_lang})"
    s = growth_series(A)
    if args.out:
        write_atomic(args.out, _dfa_text(A, args.format, X))
    print(f"language: {what}; C={C}; {A.n_states} states; {note}")
    print(s.to_text(args.terms))


# -- check -------------------------------------------------------------------------------

def cmd_check(args):
    X = _alphabet(args)
    n, K = args.max_len, args.max_const
    prop = args.property
    csv_text = None
    if prop == "fftp":
        from .fellow import fftp_report

        rep = fftp_report(X, _ball(X, n, args), n, K)
        line, csv_text = rep.summary(), rep.to_csv(X)
    elif prop in ("bcd", "nsc"):
        from .conjugacy import bcd_report, nsc_report

        m = _metric(X, n, args)
        rep = (bcd_report if prop == "bcd" else nsc_report)(X, m, n, K)
        line = rep.summary()
        csv_text = "word,witness,constant\n" + "".join(",".join(map(str, r)) + "\n" for r in rep.rows)
    elif prop == "l1":
        from .fellow import check_L1

        fb = FactorBalls(X, n)
        langs = _factor_languages(X, args.factor_lang)
        reps = [check_L1(langs[w], w, X, fb, n) for w in fb.factors()]
        line = "; ".join(f"factor {w}: {r.summary()}" for w, r in zip(fb.factors(), reps))
        ok = all(r.ok for r in reps)
        print(line)
        return 0 if ok else 1
    else:
        from .fellow import biautomatic_fellow_check, check_Lexists, check_Lforall

        m = _metric(X, n + 2, args)
        L, reps_of = _check_language(X, m, args.language)
        fn = {"lforall": check_Lforall, "lexists": check_Lexists}.get(prop)
        if fn is not None:
            rep = fn(L, m, n, K, representatives=reps_of)
        else:
            rep = biautomatic_fellow_check(L, m, n, representatives=reps_of)
        line, csv_text = rep.summary(), rep.to_csv()
    print(line)
    if args.csv and csv_text is not None:
        write_atomic(args.csv, csv_text)
    return 0


def _check_language(X, m, kind):
    """``(membership, representatives)`` for the languages the checkers accept."""
    from .langmach import geo_rel_decider, is_shortlex, rel_normal_form

    if kind == "geo":
        return m.is_geodesic, None
    if kind == "shortlex":
        return (lambda W: is_shortlex(W, m)), (lambda g: [m.geodesic_word(g)])
    if kind == "geo-rel":
        fb = m.factor_balls or FactorBalls(X, 8)
        reps = rel_normal_form(X, fb) if X.is_parabolic else None
        return geo_rel_decider(m, fb), reps
    raise PreconditionError(f"unknown language {kind!r}")


# -- conj ---------------------------------------------------------------------------------

def _solver(X, args):
    from .conjugacy import ConjugacySolver, bcd_report, build_phi

    m = _metric(X, max(args.phi_len, args.radius), args)
    B = args.bound
    note = "user supplied"
    if B is None:
        B = bcd_report(X, m, args.phi_len, args.phi_len).constant
        if B is None:
            raise PreconditionError("no BCD constant found; pass --bound")
        note = f"from check bcd, empirical up to L_max={args.phi_len}"
    phi = build_phi(X, m, args.phi_len)
    return ConjugacySolver(X, m, phi, B), note


def cmd_conj_decide(args):
    X = _alphabet(args)
    solver, note = _solver(X, args)
    U, V = X.parse_word(args.w1), X.parse_word(args.w2)
    verdict = solver.decide(U, V, prefilter=not args.direct, verify=args.verify)
    print(verdict.summary(X))
    print(f"constants: B={solver.B} ({note}); |Φ|={len(solver.phi)} complete to length {solver.phi.bound}")


def cmd_conj_bench(args):
    from .conjugacy import bench

    X = _alphabet(args)
    solver, note = _solver(X, args)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    res = bench(solver, sizes, trials=args.trials, seed=args.seed, verify=not args.no_verify)
    for n, s in zip(res.sizes, res.seconds):
        print(f"n={n}: median {s * 1000:.2f} ms")
    print(f"log-log exponent {res.exponent:.3f}; B={solver.B} ({note})")
    if args.csv:
        write_atomic(args.csv, res.to_csv())


# -- verify -------------------------------------------------------------------------------

def cmd_verify_all(args):
    from .acceptance import run_all

    results = run_all(max_len=args.max_len)
    return 0 if all(r.passed for r in results) else 1


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relhyp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="area", required=True)

    def group_opts(q, radius=6):
        q.add_argument("--group", required=True, help="group JSON document, or a bundled name (Z, Z2, F2, Z2*Z, F2+t)")
        q.add_argument("--alphabet", help="alphabet name inside the document (default: the only one)")
        q.add_argument("--radius", type=int, default=radius, help="ball radius (default %(default)s)")
        q.add_argument("--cache", help="directory for GWB1 ball caches")

    ball = sub.add_parser("ball", help="build or inspect cached balls").add_subparsers(dest="action", required=True)
    q = ball.add_parser("build", help="breadth-first ball, optionally cached")
    group_opts(q)
    q.set_defaults(func=cmd_ball_build)
    q = ball.add_parser("info", help="describe a cached ball, or the spheres of a fresh one")
    group_opts(q)
    q.set_defaults(func=cmd_ball_info)

    gen = sub.add_parser("genset", help="generating-set enlargements").add_subparsers(dest="action", required=True)
    q = gen.add_parser("enlarge-ball", help="all nontrivial elements of length <= m")
    group_opts(q)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--name", help="alphabet name in the emitted JSON")
    q.add_argument("--out")
    q.set_defaults(func=cmd_genset_ball)
    q = gen.add_parser("enlarge-parabolic", help="add factor elements of factor length <= k")
    group_opts(q)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--name")
    q.add_argument("--out")
    q.set_defaults(func=cmd_genset_parabolic)

    lang = sub.add_parser("lang", help="automata and growth series").add_subparsers(dest="action", required=True)
    for action, func in (("geo", cmd_lang_geo), ("rel", cmd_lang_rel), ("growth", cmd_lang_growth)):
        q = lang.add_parser(action)
        group_opts(q, radius=0)
        if action != "rel":
            q.add_argument("--fftp-C", dest="fftp_C", default="auto",
                           help=f"fellow-travel constant, or 'auto' (search with L_max={AUTO_L_MAX}, K_max={AUTO_K_MAX})")
        if action != "geo":
            choices = ["shortlex", "geo"] + (["none"] if action == "growth" else [])
            q.add_argument("--factor-lang", default="shortlex" if action == "rel" else "none", choices=choices)
        q.add_argument("--format", choices=["text", "dot"], default="text")
        q.add_argument("--terms", type=int, default=20, help="series coefficients to print")
        q.add_argument("--out", help="write the DFA here")
        q.set_defaults(func=func)

    check = sub.add_parser("check", help="empirical property constants")
    check.add_argument("property", choices=["fftp", "nsc", "bcd", "l1", "lforall", "lexists", "biauto"])
    group_opts(check, radius=0)
    check.add_argument("--max-len", type=int,
                       help="length bound (default 8 for fftp, bcd, nsc; 4 for the language checks)")
    check.add_argument("--max-const", type=int, default=8)
    check.add_argument("--language", choices=["geo", "shortlex", "geo-rel"], default="geo-rel",
                       help="language for lforall / lexists / biauto")
    check.add_argument("--factor-lang", choices=["shortlex", "geo"], default="shortlex", help="for l1")
    check.add_argument("--csv", help="write the per-word report here")
    check.set_defaults(func=cmd_check)

    conj = sub.add_parser("conj", help="conjugacy").add_subparsers(dest="action", required=True)
    for action, func in (("decide", cmd_conj_decide), ("bench", cmd_conj_bench)):
        q = conj.add_parser(action)
        group_opts(q, radius=8)
        if action == "decide":
            q.add_argument("w1")
            q.add_argument("w2")
            q.add_argument("--verify", action="store_true", help="cross-check with the exact oracle")
            q.add_argument("--direct", action="store_true", help="disable the element prefilter")
        else:
            q.add_argument("--sizes", default="50,100,200,400")
            q.add_argument("--trials", type=int, default=3)
            q.add_argument("--seed", type=int, default=0)
            q.add_argument("--no-verify", action="store_true")
            q.add_argument("--csv")
        q.add_argument("--bound", type=int, help="conjugator bound B (default: check bcd)")
        q.add_argument("--phi-len", type=int, default=6, help="Φ completeness length")
        q.set_defaults(func=func)

    ver = sub.add_parser("verify", help="acceptance suite").add_subparsers(dest="action", required=True)
    q = ver.add_parser("all")
    q.add_argument("--max-len", type=int, help="override exhaustive lengths (criteria 3, 4, 7)")
    q.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.area == "check" and args.max_len is None:
        args.max_len = 8 if args.property in ("fftp", "bcd", "nsc") else 4
    if args.area == "check" and args.radius == 0:
        args.radius = args.max_len
    try:
        rc = args.func(args)
    except RelHypError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 2
    except KeyError as e:
        print(f"error: usage: {e.args[0] if e.args else e}", file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
