"""Command-line interface: ``expand``, ``verify``, ``zeros`` and ``cache``.

Exit codes: 0 on success, 1 when a mathematical check fails, 2 on usage errors.
JSON output encodes every number as a decimal string (rationals as ``a/b``).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .cache import Cache, CacheKey
from .characters import parse_character
from .errors import ParityMismatch, UsageError, WhmfError
from .levels import as_level, delta_N
from .series import QSeries, format_rational

SCHEMA = "whmf/1"
DEFAULT_PRECISION = 200


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="number of q-expansion terms (default 200)")
    common.add_argument("--out", help="write the document to this file instead of standard output")

    p = _Parser(prog="whmf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"whmf {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("expand", parents=[common], help="q-expansion of a primary object")
    e.add_argument("--object", required=True, choices=("delta", "eisenstein", "j", "f"))
    e.add_argument("--level", type=int, required=True)
    e.add_argument("--weight", type=int)
    e.add_argument("--char", default="1", help="1, psi, psi^r, psi^k1, optionally *xi7 or *xi15")
    e.add_argument("--m", type=int, help="index m of f_{k,m}")
    e.add_argument("--terms", type=int, help="overrides --precision")
    e.add_argument("--no-cache", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="run theorem and identity checks")
    v.add_argument("--suite", required=True,
                   choices=("genfun", "duality", "divisibility", "integrality", "dimensions",
                            "products", "hauptmodul", "factorization", "all"))
    v.add_argument("--level", type=int, required=True)
    v.add_argument("--char")
    v.add_argument("--weight", type=int)

    z = sub.add_parser("zeros", parents=[common], help="zeros of E_k^(chi) for N = 2, 3, 5")
    z.add_argument("--level", type=int, required=True, choices=(2, 3, 5))
    z.add_argument("--weight", type=int, required=True)
    z.add_argument("--char", default="1")
    z.add_argument("--grid", type=int, default=200, help="points per arc piece")
    z.add_argument("--emit-csv", action="store_true", help="CSV of (theta, Re h, Im h) along the arcs")

    c = sub.add_parser("cache", parents=[common], help="inspect or clear the expansion cache")
    c.add_argument("action", choices=("info", "verify", "clear"))
    return p


# documents ---------------------------------------------------------------------------

def _series_doc(s: QSeries) -> dict:
    return {"valuation": str(s.valuation), "precision": str(s.precision),
            "coefficients": [format_rational(c) for c in s.coefficient_list(s.valuation, s.precision)]}


def _expand_payload(args, P: int) -> dict:
    from .basis import f_basis
    from .hauptmodul import hauptmodul
    from .plus import plus_eisenstein

    N = as_level(args.level).N
    if args.object == "delta":
        return _series_doc(delta_N(N, P))
    if args.object == "j":
        h = hauptmodul(N, P)
        doc = _series_doc(h.series)
        doc["c"] = [str(c) for c in h.coefficients(P)]
        return doc
    if args.weight is None:
        raise UsageError(f"--weight is required for --object {args.object}")
    chi = parse_character(N, args.char)
    if args.object == "eisenstein":
        return _series_doc(plus_eisenstein(N, args.weight, chi, P))
    if args.m is None:
        raise UsageError("--m is required for --object f")
    elem = f_basis(N, chi, args.weight, args.m, P)
    doc = _series_doc(elem.series)
    doc.update(faber=[str(c) for c in elem.faber], k_prime=str(elem.k_prime), ell=str(elem.ell))
    return doc


def cmd_expand(args) -> tuple[int, dict]:
    P = args.terms if args.terms is not None else args.precision
    if P < 1:
        raise UsageError("the number of terms must be positive")
    N = as_level(args.level).N
    chi_name = None
    if args.object in ("eisenstein", "f"):
        chi_name = parse_character(N, args.char).name
    key = CacheKey(args.object, N, args.weight if args.object in ("eisenstein", "f") else None,
                   chi_name, args.m if args.object == "f" else None, P)
    if args.no_cache:
        payload = _expand_payload(args, P)
    else:
        payload = Cache().fetch(key, lambda: _expand_payload(args, P))
    doc = {"schema": SCHEMA, "version": __version__, "object": args.object, "level": str(N)}
    if key.weight is not None:
        doc["weight"] = str(key.weight)
    if chi_name is not None:
        doc["character"] = chi_name
    if key.m is not None:
        doc["m"] = str(key.m)
    doc.update(payload)
    return 0, doc


def cmd_verify(args) -> tuple[int, dict]:
    from .theorems import SUITES, run_suite

    N = as_level(args.level).N
    chi = parse_character(N, args.char) if args.char else None
    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for s in suites:
        reports += run_suite(s, N, chi, args.weight, args.precision)
    passed = all(r.passed for r in reports)
    doc = {"schema": SCHEMA, "version": __version__, "command": "verify", "level": str(N),
           "passed": passed, "reports": [r.to_json() for r in reports]}
    return (0 if passed else 1), doc


def cmd_zeros(args) -> tuple[int, dict]:
    from .zeros import arc_csv, certify_no_offarc_zeros, parse_zero_target, reality_on_arc

    chi = parse_character(args.level, args.char)
    form = parse_zero_target(args.level, args.weight, chi, args.precision)
    real = reality_on_arc(form, grid_points=args.grid, raise_on_failure=False)
    wind = certify_no_offarc_zeros(form)
    passed = real.passed and wind.passed
    doc = {"schema": SCHEMA, "version": __version__, "command": "zeros", "form": form.label,
           "passed": passed,
           "arc": {"points": str(real.points), "max_abs_imag": f"{real.worst_imag:.3e}",
                   "sign_changes": str(real.sign_changes), "endpoint_zeros": str(real.endpoint_zeros),
                   "passed": real.passed},
           "cells": {"inside": str(wind.cells), "arc_adjacent": str(wind.arc_cells),
                     "nonzero_windings": [[repr(c), str(w)] for c, w in wind.nonzero],
                     "ambiguous": [repr(c) for c in wind.ambiguous],
                     "subdivided": str(wind.subdivided), "above_top_certified": wind.tail_ok,
                     "passed": wind.passed},
           "notes": wind.notes}
    if args.emit_csv:
        doc["csv"] = arc_csv(real)
    return (0 if passed else 1), doc


def cmd_cache(args) -> tuple[int, dict]:
    cache = Cache()
    doc = {"schema": SCHEMA, "version": __version__, "command": "cache", "directory": str(cache.root)}
    if args.action == "info":
        files = cache.entries()
        doc.update(entries=str(len(files)), bytes=str(sum(p.stat().st_size for p in files)))
        return 0, doc
    if args.action == "verify":
        n, bad = cache.verify()
        doc.update(entries=str(n), corrupt=bad)
        return (0 if not bad else 1), doc
    doc.update(removed=str(cache.clear()))
    return 0, doc


# rendering -----------------------------------------------------------------------------

def _text(doc: dict) -> str:
    if doc.get("command") == "verify":
        lines = []
        for r in doc["reports"]:
            params = " ".join(f"{k}={v}" for k, v in r["parameters"].items())
            status = "PASS" if r["passed"] else "FAIL"
            tail = "" if r["passed"] else f"  witness: {r['witness']}"
            lines.append(f"{status} {r['suite']:<13} {params} (checked {r['checked']}){tail}")
        lines.append(f"{'PASS' if doc['passed'] else 'FAIL'} level {doc['level']}")
        return "\n".join(lines)
    if doc.get("command") == "zeros":
        a, c = doc["arc"], doc["cells"]
        return "\n".join([
            doc["form"],
            f"arc: max |Im h| = {a['max_abs_imag']}, sign changes {a['sign_changes']}, "
            f"endpoint zeros {a['endpoint_zeros']}",
            f"cells: {c['inside']} checked, {c['arc_adjacent']} arc-adjacent, "
            f"{len(c['nonzero_windings'])} nonzero, {len(c['ambiguous'])} ambiguous",
            "PASS" if doc["passed"] else "FAIL"])
    if "coefficients" in doc:
        v = int(doc["valuation"])
        terms = [f"{c} q^{v + i}" for i, c in enumerate(doc["coefficients"]) if c != "0"]
        head = f"{doc['object']} level {doc['level']}"
        if "faber" in doc:
            head += f", Faber polynomial {doc['faber']}"
        return head + "\n" + " + ".join(terms) + f" + O(q^{doc['precision']})"
    return "\n".join(f"{k}: {v}" for k, v in doc.items() if k not in ("schema",))


def _csv(doc: dict) -> str:
    if "csv" in doc:
        return doc["csv"].rstrip("\n")
    if "coefficients" in doc:
        v = int(doc["valuation"])
        return "\n".join(["n,coefficient"] + [f"{v + i},{c}" for i, c in enumerate(doc["coefficients"])])
    if doc.get("command") == "verify":
        rows = ["suite,parameters,passed,checked"]
        for r in doc["reports"]:
            params = ";".join(f"{k}={v}" for k, v in r["parameters"].items())
            rows.append(f"{r['suite']},{params},{r['passed']},{r['checked']}")
        return "\n".join(rows)
    raise UsageError("csv output is available for expansions, verify reports and zeros --emit-csv")


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=1)
    if fmt == "csv" or "csv" in doc:
        return _csv(doc)
    return _text(doc)


COMMANDS = {"expand": cmd_expand, "verify": cmd_verify, "zeros": cmd_zeros, "cache": cmd_cache}


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, doc = COMMANDS[args.command](args)
        text = render(doc, args.format)
    except (UsageError, ParityMismatch) as exc:
        print(f"whmf: {exc}", file=sys.stderr)
        return 2
    except WhmfError as exc:
        print(f"whmf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
