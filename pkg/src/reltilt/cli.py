"""Command-line front end.

Exit codes: 0 success, 1 invariant violation or golden mismatch, 2 usage or descriptor error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import fixtures as fx
from .exactlin import Field
from .quiverrep.algebra import Algebra, AlgebraError, algebra_from_descriptor
from .quiverrep.ar import RepresentationInfiniteError, ar_quiver_dot, indecomposables
from .relclust import CTContext, InvariantViolation, RelClustError, make_context
from .tautilt import TauPair, TauTiltError, TauTilting
from .tricat import TriCatError, make_backend, objects
from .tricat.base import hom_space_dim, obj


class UsageError(Exception):
    pass


def _write(path: str, text: str):
    """Atomic write: temp file in the same directory, then rename."""
    p = Path(path)
    fd, tmp = tempfile.mkstemp(dir=p.parent or ".", prefix=p.name + ".")
    with os.fdopen(fd, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp, p)


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def load_algebra(source: str, args) -> Algebra:
    """A fixture algebra name (A2, A3, SELF, LAM', NAK7) or a JSON descriptor path."""
    F = Field(args.field_prime)
    if source in fx.ALGEBRAS:
        return fx.ALGEBRAS[source](F)
    desc = _read_json(source)
    try:
        return algebra_from_descriptor(desc, F if "field" not in desc else None, args.length_cap)
    except AlgebraError as e:
        raise UsageError(f"{source}: {e}") from None


def load_backend(source: str, args):
    """A backend fixture name (ST, CC2, CC3, RC2, 3CC3) or a JSON descriptor path.

    The descriptor is ``{"kind": ..., "algebra"/"quiver": <algebra descriptor or fixture name>, ...}``
    with an optional ``"T"`` list used by the relclust commands.
    """
    if source in fx.BACKENDS:
        return fx.backend(source, args.field_prime), list(fx.BACKENDS[source][1]), source
    desc = dict(_read_json(source))
    for key in ("algebra", "quiver"):
        if isinstance(desc.get(key), str):
            if desc[key] not in fx.ALGEBRAS:
                raise UsageError(f"{source}: field '{key}': unknown algebra {desc[key]!r}")
            desc[key] = fx.ALGEBRAS[desc[key]](Field(args.field_prime))
    try:
        B = make_backend(desc, Field(args.field_prime), args.length_cap, args.knit_cap)
    except (TriCatError, AlgebraError) as e:
        raise UsageError(f"{source}: {e}") from None
    return B, desc.get("T"), None


def load_context(args) -> CTContext:
    B, T, fixture = load_backend(args.backend, args)
    if args.T:
        T = _split(args.T)
    if not T:
        raise UsageError("no cluster-tilting object: pass --T or put \"T\" in the descriptor")
    if fixture and not args.T and args.field_prime == 101:
        return fx.context(fixture)
    try:
        return make_context(B, T)
    except RelClustError as e:
        raise UsageError(str(e)) from None


def _split(text: str) -> list:
    return [s.strip() for s in text.replace("⊕", "+").split("+") if s.strip() and s.strip() != "0"]


def parse_pair(tt: TauTilting, text: str) -> TauPair:
    M, P = [], []
    for s in _split(text):
        if s.startswith("P(") and s.endswith(")"):
            P.append(s[2:-1])
        else:
            M.append(_module_id(tt, s))
    return TauPair.of(M, P)


def _module_id(tt: TauTilting, name: str) -> int:
    try:
        return tt.cat.id_of(name)
    except (KeyError, ValueError):
        raise UsageError(f"unknown module {name!r}; known: {', '.join(tt.cat.names())}") from None


def parse_at(tt: TauTilting, text: str):
    s = text.strip()
    if s.startswith("P(") and s.endswith(")"):
        return ("P", s[2:-1])
    return ("M", _module_id(tt, s))


# commands

def cmd_algebra_info(args) -> int:
    A = load_algebra(args.algebra, args)
    meta = A.metadata()
    meta["name"] = A.name
    print(json.dumps(meta, indent=2, ensure_ascii=False))
    return 0


def cmd_algebra_indecs(args) -> int:
    A = load_algebra(args.algebra, args)
    cat = indecomposables(A, args.knit_cap)
    for i in range(len(cat)):
        tags = [t for t, f in (("P", cat.is_projective), ("I", cat.is_injective)) if f(i)]
        print(f"{i}\t{cat.name(i)}\t{list(cat.dimvec(i))}\t{' '.join(tags)}".rstrip())
    if args.dot:
        _write(args.dot, ar_quiver_dot(cat))
    return 0


def cmd_stautilt_enumerate(args) -> int:
    tt = TauTilting(load_algebra(args.algebra, args), args.knit_cap)
    P = tt.enumerate()
    if args.json:
        _write(args.json, P.dumps() + "\n")
    if args.hasse:
        _write(args.hasse, P.to_dot())
    if not (args.json or args.hasse):
        print(P.dumps())
    else:
        print(f"{len(P)} support tau-tilting pairs, {len(P.edges)} Hasse edges")
    return 0


def cmd_stautilt_mutate(args) -> int:
    tt = TauTilting(load_algebra(args.algebra, args), args.knit_cap)
    pair = parse_pair(tt, args.pair)
    at = parse_at(tt, args.at)
    new = tt.mutate_pair(pair, at)
    out = {
        "from": tt.label(pair),
        "at": args.at,
        "to": tt.label(new),
        "direction": "down" if tt.mutation_is_down(pair, at) else "up",
    }
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return 0


def cmd_tricat_objects(args) -> int:
    B, _, _ = load_backend(args.backend, args)
    for label in objects(B):
        print(label)
    return 0


def cmd_tricat_hom(args) -> int:
    B, _, _ = load_backend(args.backend, args)
    try:
        X, Y = obj(B, _split(args.X)), obj(B, _split(args.Y))
    except TriCatError as e:
        raise UsageError(str(e)) from None
    print(hom_space_dim(B, X, Y))
    return 0


def cmd_relclust_enumerate(args) -> int:
    ctx = load_context(args)
    P = ctx.rel_poset()
    if args.backend in fx.GOLDEN_OF and ctx is fx.context(args.backend):
        P.point_labels = fx.point_labels(ctx, P.objects, fx.golden(fx.GOLDEN_OF[args.backend]))
    data = P.to_json()
    if args.ct_only:
        # edges and order index the full row list
        data = {"rows": [r for r in data["rows"] if r["cluster_tilting"]]}
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.json:
        _write(args.json, text)
        ct = sum(P.cluster_tilting)
        print(f"{len(P)} T[1]-cluster tilting objects, {ct} cluster-tilting")
    else:
        sys.stdout.write(text)
    if args.hasse:
        _write(args.hasse, P.to_dot())
    return 0


def cmd_relclust_mutate(args) -> int:
    ctx = load_context(args)
    try:
        M = obj(ctx.B, _split(args.object))
        x = ctx.B.index(args.at.strip())
    except TriCatError as e:
        raise UsageError(str(e)) from None
    m = ctx.mutate_t1(M, x)
    B = ctx.B
    tri = m.triangle
    out = {
        "from": ctx.object_labels(M),
        "at": B.name(x),
        "to": ctx.object_labels(m.N),
        "complement": B.name(m.y),
        "direction": m.direction,
        "triangle": [ctx.object_labels(tri.X), ctx.object_labels(tri.Y), ctx.object_labels(tri.Z)],
        "stau_from": ctx.tt.label(ctx.tilde(M)),
        "stau_to": ctx.tt.label(ctx.tilde(m.N)),
    }
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return 0


def _run_verify(name: str) -> tuple:
    from .verify import verify

    rep = verify(name)
    return rep.passed, rep.lines()


def cmd_verify(args) -> int:
    names = list(fx.FIXTURES) if args.fixture == ["all"] else args.fixture
    for n in names:
        if n not in fx.FIXTURES:
            raise UsageError(f"unknown fixture {n!r}; choose from {', '.join(fx.FIXTURES)} or 'all'")
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run_verify, names))
    else:
        results = [_run_verify(n) for n in names]
    ok = True
    for passed, lines in results:
        print("\n".join(lines))
        ok &= passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    # shared options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--field-prime", type=int, help="characteristic of the base field (default 101)")
    common.add_argument("--length-cap", type=int, help="longest path considered when building algebras (default 30)")
    common.add_argument("--knit-cap", type=int, help="maximum number of indecomposables to knit (default 10000)")
    common.add_argument("--jobs", type=int, help="worker processes for verify over several fixtures (default 1)")
    ap = argparse.ArgumentParser(
        prog="reltilt", description="tau-tilting and relative cluster tilting computations", parents=[common]
    )
    ap.set_defaults(field_prime=101, length_cap=30, knit_cap=10000, jobs=1)
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("algebra", parents=[common]).add_subparsers(dest="cmd", required=True)
    p = g.add_parser("info", parents=[common], help="basis and quiver of an algebra")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_algebra_info)
    p = g.add_parser("indecs", parents=[common], help="indecomposable modules")
    p.add_argument("algebra")
    p.add_argument("--dot", help="write the AR quiver as DOT")
    p.set_defaults(func=cmd_algebra_indecs)

    g = sub.add_parser("stautilt", parents=[common]).add_subparsers(dest="cmd", required=True)
    p = g.add_parser("enumerate", parents=[common], help="all support tau-tilting pairs with their order")
    p.add_argument("algebra")
    p.add_argument("--hasse", metavar="DOT")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_stautilt_enumerate)
    p = g.add_parser("mutate", parents=[common], help="mutate a support tau-tilting pair")
    p.add_argument("algebra")
    p.add_argument("--pair", required=True, help="e.g. 'a/b + b' or 'b + P(a)'")
    p.add_argument("--at", required=True, help="summand to exchange, e.g. 'b' or 'P(a)'")
    p.set_defaults(func=cmd_stautilt_mutate)

    g = sub.add_parser("tricat", parents=[common]).add_subparsers(dest="cmd", required=True)
    p = g.add_parser("objects", parents=[common], help="indecomposable objects of a backend")
    p.add_argument("backend")
    p.set_defaults(func=cmd_tricat_objects)
    p = g.add_parser("hom", parents=[common], help="dimension of Hom(X, Y)")
    p.add_argument("backend")
    p.add_argument("X")
    p.add_argument("Y")
    p.set_defaults(func=cmd_tricat_hom)

    g = sub.add_parser("relclust", parents=[common]).add_subparsers(dest="cmd", required=True)
    p = g.add_parser("enumerate", parents=[common], help="all T[1]-cluster tilting objects")
    p.add_argument("backend")
    p.add_argument("--T", help="cluster-tilting object, e.g. '1 + 2[1] + 1/2[2] + 1[2]'")
    p.add_argument("--ct-only", action="store_true", help="keep only cluster-tilting rows")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--hasse", metavar="DOT")
    p.set_defaults(func=cmd_relclust_enumerate)
    p = g.add_parser("mutate", parents=[common], help="mutate a T[1]-cluster tilting object")
    p.add_argument("backend")
    p.add_argument("--T")
    p.add_argument("--object", required=True)
    p.add_argument("--at", required=True)
    p.set_defaults(func=cmd_relclust_mutate)

    p = sub.add_parser("verify", parents=[common], help="check a fixture against its golden tables")
    p.add_argument("fixture", nargs="+", help=f"one of {', '.join(fx.FIXTURES)}, or 'all'")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TauTiltError, RelClustError, RepresentationInfiniteError) as e:
        print(f"reltilt: error: {e}", file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"reltilt: invariant violation: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
