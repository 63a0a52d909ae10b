"""Command-line front end.

Exit codes: 0 success or Reachable, 2 Obstructed, 3 UnreachableExhaustive,
64 bad arguments or input data, 65 undecodable JSON, 70 search limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from plumbfill import codec
from plumbfill.arrangements import classify_arrangement, make_snm
from plumbfill.caps import build_cap
from plumbfill.configs import classify_type, enumerate_fillings, type_tag
from plumbfill.errors import DecodeError, DomainError, PlumbfillError, SearchLimitExceeded, SynthesisRefused
from plumbfill.rbd import ReachabilityCertificate, check_reachable, wn_filling
from plumbfill.seifert_core import cf_expand, parse_seifert, plumbing_graph

EXIT_OK = 0
EXIT_OBSTRUCTED = 2
EXIT_UNREACHABLE = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_LIMIT = 70

VERDICT_EXIT = {"Reachable": EXIT_OK, "Obstructed": EXIT_OBSTRUCTED, "UnreachableExhaustive": EXIT_UNREACHABLE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit with status 2, which the verdict codes already use
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "")
        if message:
            sys.stderr.write(message)
        raise _Done()


class _Done(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="plumbfill", description="Fillings and rational blowdowns of Seifert fibered spaces.")
    sub = p.add_subparsers(dest="verb", metavar="verb", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("cf", help="Hirzebruch-Jung continued fraction of alpha/beta")
    s.add_argument("alpha", type=int)
    s.add_argument("beta", type=int)

    for verb, text in (("graph", "star-shaped plumbing graph"), ("cap", "concave cap")):
        s = sub.add_parser(verb, help=text)
        s.add_argument("seifert", help='Seifert data such as "Y(-5; 2/1, 2/1, 2/1)"')
        s.add_argument("--format", choices=("json", "dot"), default="json")

    s = sub.add_parser("arrangement", help="build S_{n,m} or classify an arrangement document")
    s.add_argument("file", nargs="?", help="LineArrangement or FillingDescriptor JSON ('-' for stdin)")
    s.add_argument("--lines", type=int, help="number of lines n for S_{n,m}")
    s.add_argument("--multi", type=int, default=0, help="lines through the multi-point (0 for generic)")

    s = sub.add_parser("enumerate", help="minimal symplectic fillings as a JSON array")
    s.add_argument("seifert")
    s.add_argument("--max-extra", type=int, default=4)
    s.add_argument("--dot", action="store_true", help="emit one configuration drawing per filling")

    s = sub.add_parser("classify", help="type and arrangement class of a filling")
    s.add_argument("file")

    for verb in ("rbd-synth", "rbd-check"):
        s = sub.add_parser(verb, help="rational blowdown " + verb[4:])
        s.add_argument("file")
        if verb == "rbd-check":
            s.add_argument("--depth", type=int, default=3)
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--seed", type=int)

    s = sub.add_parser("counterexample", help="reachability certificate for the filling W_n of Y_n")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int)
    return p


def _normalize(argv: list[str]) -> list[str]:
    # "rbd synth F" and "rbd counterexample" are aliases of the dashed verbs
    if len(argv) >= 2 and argv[0] == "rbd":
        if argv[1] in ("synth", "check"):
            return ["rbd-" + argv[1], *argv[2:]]
        if argv[1] == "counterexample":
            return argv[1:]
    return argv


def _read(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return codec.loads(text)


def _read_filling(path: str):
    doc = _read(path)
    if isinstance(doc, list) and len(doc) == 1:
        doc = doc[0]
    if type(doc).__name__ != "FillingDescriptor":
        raise UsageError(f"{path}: expected a FillingDescriptor document")
    return doc


def _certificate(cert: ReachabilityCertificate, seed) -> ReachabilityCertificate:
    if seed is None:
        return cert
    # the search is deterministic; the seed is only echoed for bookkeeping
    return ReachabilityCertificate(cert.verdict, cert.steps, cert.n_s, cert.explored, cert.depth, cert.bounded,
                                   cert.notes + (f"seed {seed}",))


def _run(args, out) -> int:
    verb = args.verb
    if verb == "cf":
        out.write(json.dumps(cf_expand(args.alpha, args.beta)) + "\n")
        return EXIT_OK
    if verb in ("graph", "cap"):
        data = parse_seifert(args.seifert)
        obj = plumbing_graph(data) if verb == "graph" else build_cap(data)
        out.write(codec.export_dot(obj) if args.format == "dot" else codec.dumps(obj))
        return EXIT_OK
    if verb == "arrangement":
        if args.file is not None:
            doc = _read(args.file)
            arrangement = getattr(doc, "arrangement", doc)
            out.write(codec.dumps(classify_arrangement(arrangement)))
        elif args.lines is not None:
            out.write(codec.dumps(make_snm(args.lines, args.multi)))
        else:
            raise UsageError("arrangement: give a file or --lines")
        return EXIT_OK
    if verb == "enumerate":
        fillings = enumerate_fillings(parse_seifert(args.seifert), max_extra=args.max_extra)
        if args.dot:
            out.write("".join(codec.export_dot(f.config) for f in fillings))
        else:
            out.write(codec.dumps(list(fillings)))
        return EXIT_OK
    if verb == "classify":
        f = _read_filling(args.file)
        result = {
            "arrangement": codec.to_doc(classify_arrangement(f.arrangement)),
            "b2": f.b2,
            "config_type": classify_type(f.config),
            "type_tag": type_tag(f.seifert, f.config),
        }
        out.write(json.dumps(result, sort_keys=True, indent=2) + "\n")
        return EXIT_OK
    if verb == "rbd-synth":
        f = _read_filling(args.file)
        if f.seifert.b < f.seifert.n + 2:
            raise SynthesisRefused("b = n+1 carries no synthesis guarantee, use rbd-check")
        cert = _certificate(check_reachable(f, jobs=args.jobs), args.seed)
        out.write(codec.dumps(cert))
        return VERDICT_EXIT[cert.verdict]
    if verb == "rbd-check":
        f = _read_filling(args.file)
        cert = _certificate(check_reachable(f, args.depth, jobs=args.jobs), args.seed)
        out.write(codec.dumps(cert))
        return VERDICT_EXIT[cert.verdict]
    if verb == "counterexample":
        if args.n < 3:
            raise UsageError("counterexample: --n must be at least 3")
        cert = _certificate(check_reachable(wn_filling(args.n), args.depth, jobs=args.jobs), args.seed)
        out.write(codec.dumps(cert))
        return VERDICT_EXIT[cert.verdict]
    raise UsageError(f"unknown verb {verb!r}")


def run_cli(argv: list[str], out=None, err=None) -> int:
    """Run one command; documents go to ``out``, diagnostics to ``err``."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(_normalize(list(argv)))
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        return _run(args, out)
    except _Done:
        return EXIT_OK
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except DecodeError as exc:
        err.write(f"decode error: {exc}\n")
        return EXIT_DATA
    except SynthesisRefused as exc:
        err.write(f"synthesis refused: {exc}\n")
        return EXIT_USAGE
    except SearchLimitExceeded as exc:
        err.write(f"search limit reached after {exc.explored} nodes; raise RBD_MAX_NODES\n")
        return EXIT_LIMIT
    except (DomainError, PlumbfillError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
