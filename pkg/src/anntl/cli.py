"""Command line interface: ``anntl <command> ...``.

Exit codes: 0 on success, 1 on a domain error (invalid tangle, bad word,
failed relation), 2 on a usage error (unknown flag, unreadable file).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from collections import Counter
from fractions import Fraction
from typing import Sequence

from .errors import AnnularError
from .functors import verify_relations
from .homology import KINDS, TLModule, homology_table
from .presentation import parse_word, standard_form, words_equal
from .tangle_analysis import decompose
from .tangle_core import BoundaryObject, compose, morphism_from_json

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

_RATIONAL = re.compile(r"^-?\d+(?:/\d+)?$")


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    if not _RATIONAL.match(text.strip()):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer or p/q rational")
    value = Fraction(text.strip())
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("bound must be positive")
    return value


def _object(text: str) -> BoundaryObject:
    try:
        return BoundaryObject.parse(text)
    except (ValueError, AnnularError):
        raise argparse.ArgumentTypeError(f"{text!r} is not an object (use n >= 1, 0+ or 0-)") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="anntl", description="Annular Temperley-Lieb tangles, words and homology.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a tangle JSON file and print its canonical form")
    s.add_argument("file")

    s = sub.add_parser("compose", parents=[common], help="compose two tangle files: A after B")
    s.add_argument("outer")
    s.add_argument("inner")

    s = sub.add_parser("normalize", parents=[common], help="standard form of a word")
    s.add_argument("--at", required=True, type=_object)
    s.add_argument("word")

    s = sub.add_parser("equal", parents=[common], help="decide whether two words are equal")
    s.add_argument("--at", required=True, type=_object)
    s.add_argument("first")
    s.add_argument("second")

    s = sub.add_parser("decompose", parents=[common], help="Type III, II, I factorization of a tangle file")
    s.add_argument("file")

    s = sub.add_parser("verify-relations", parents=[common], help="check every relation instance up to an object bound")
    s.add_argument("--max-n", required=True, type=_positive)

    s = sub.add_parser("homology", parents=[common], help="Hochschild or cyclic homology of an annular module")
    s.add_argument("--module", choices=("tl",), default="tl")
    s.add_argument("--ring", choices=("Z", "Q"), default="Z")
    s.add_argument("--delta-plus", type=_rational, default=Fraction(0))
    s.add_argument("--delta-minus", type=_rational, default=Fraction(0))
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--max-degree", required=True, type=_positive)
    return p


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
        return morphism_from_json(data)
    except json.JSONDecodeError as exc:
        raise AnnularError(f"{path}: invalid JSON ({exc.msg})", exc.pos) from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, AnnularError):
            raise
        raise AnnularError(f"{path}: malformed tangle data ({exc})") from None


def _cmd_validate(args) -> tuple[object, list[str], int]:
    m = _load(args.file)
    return m.to_json(), [str(m)], EXIT_OK


def _cmd_compose(args) -> tuple[object, list[str], int]:
    m = compose(_load(args.outer), _load(args.inner))
    return m.to_json(), [str(m)], EXIT_OK


def _cmd_normalize(args) -> tuple[object, list[str], int]:
    form = standard_form(parse_word(args.word, args.at))
    data = form.to_json()
    lines = [str(form), f"c+ = {form.c_plus}, c- = {form.c_minus}"]
    lines += [f"{key} = {data[key] or 'id'}" for key in ("w3", "w2", "w1")]
    return data, lines, EXIT_OK


def _cmd_equal(args) -> tuple[object, list[str], int]:
    result = words_equal(parse_word(args.first, args.at), parse_word(args.second, args.at))
    return result, ["true" if result else "false"], EXIT_OK


def _cmd_decompose(args) -> tuple[object, list[str], int]:
    d = decompose(_load(args.file))
    lines = [f"type3 = {d.type3}", f"type2 = {d.type2}", f"type1 = {d.type1}"]
    if d.c_plus or d.c_minus:
        lines.append(f"c+ = {d.c_plus}, c- = {d.c_minus}")
    return d.to_json(), lines, EXIT_OK


def _cmd_verify(args) -> tuple[object, list[str], int]:
    results = verify_relations(args.max_n)
    total, failed = Counter(), Counter()
    for r in results:
        total[r.relation] += 1
        if r.status != "pass":
            failed[r.relation] += 1
    lines = [f"{name}: {total[name] - failed[name]}/{total[name]} pass" for name in sorted(total)]
    for r in results:
        if r.status != "pass":
            lines.append(f"FAIL {r.relation}: {r.instance}")
    bad = sum(failed.values())
    lines.append(f"{len(results) - bad}/{len(results)} instances pass")
    return [r.to_json() for r in results], lines, EXIT_OK if bad == 0 else EXIT_DOMAIN


def _cmd_homology(args) -> tuple[object, list[str], int]:
    try:
        module = TLModule(args.ring, args.delta_plus, args.delta_minus)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = homology_table(module, args.kind, args.max_degree)
    return table.to_json(), table.lines(), EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "compose": _cmd_compose,
    "normalize": _cmd_normalize,
    "equal": _cmd_equal,
    "decompose": _cmd_decompose,
    "verify-relations": _cmd_verify,
    "homology": _cmd_homology,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        data, lines, code = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"anntl: error: {exc}", file=err)
        return EXIT_USAGE
    except AnnularError as exc:
        if args.format == "json":
            print(json.dumps({"error": exc.code, "message": exc.message, "position": exc.position}), file=out)
        print(f"anntl: {exc}", file=err)
        return EXIT_DOMAIN
    if args.format == "json":
        print(json.dumps(data, ensure_ascii=False), file=out)
    else:
        for line in lines:
            print(line, file=out)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
