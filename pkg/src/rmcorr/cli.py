"""Command-line front end.

Exit codes: 0 success (and oracle agreement when --verify is used);
1 elimination failure; 2 input/parse error; 3 verification disagreement.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formula as fm
from .corpus import BUNDLED, load_corpus
from .frames import BudgetError, correspondence_check
from .pipeline import correspondent
from .render import OutputFormat, render, render_report
from .syntax import ParseError, SyntaxMode, parse

EXIT_OK = 0
EXIT_ELIMINATION = 1
EXIT_INPUT = 2
EXIT_DISAGREE = 3

_MODES = {"relevance": SyntaxMode.RELEVANCE, "bi": SyntaxMode.BI,
          "ra": SyntaxMode.RELATION_ALGEBRA}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rmcorr",
        description="Compute first-order frame correspondents of relevance, "
                    "BI and relation-algebra formulas, with optional "
                    "brute-force verification on all small frames.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", "-i", metavar="FORMULA",
                     help="formula in the selected surface syntax")
    src.add_argument("--file", metavar="PATH",
                     help="read the formula from a file")
    src.add_argument("--corpus", metavar="NAME",
                     help=f"run a corpus; '{BUNDLED}' is shipped, otherwise "
                          "a path to a JSONL corpus file")
    ap.add_argument("--syntax", choices=sorted(_MODES), default="relevance")
    ap.add_argument("--format", choices=[f.value for f in OutputFormat],
                    default="tex")
    ap.add_argument("--verify", type=int, default=0, metavar="N",
                    help="check the correspondent against frame validity on "
                         "all frames with up to N worlds (0 = skip, max 3)")
    ap.add_argument("--trace", action="store_true",
                    help="include the rule-by-rule derivation")
    ap.add_argument("--expand-leq", action="store_true",
                    help="unfold the derived order into O and R in sentence "
                         "output")
    ap.add_argument("--out", metavar="PATH", help="write the report to a file")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def _verify(phi, fo, bound: int, syntax: str):
    bad = [a for a in fm.atoms(phi) if a.kind != fm.PROP]
    if bad:
        raise ValueError("verification needs a formula over propositional "
                         "variables only")
    return correspondence_check(phi, fo, bound, mode=syntax)


def _run_single(args) -> int:
    mode = _MODES[args.syntax]
    if args.input is not None:
        source = args.input
    else:
        try:
            source = Path(args.file).read_text("utf-8").strip()
        except OSError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_INPUT
    try:
        phi = parse(source, mode)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_INPUT
    result = correspondent(phi, mode)
    fmt = OutputFormat(args.format)
    report = render_report(result, fmt, expand=args.expand_leq,
                           name="input", trace=args.trace)
    if result.status != "success":
        _emit(report, args.out)
        return EXIT_ELIMINATION
    code = EXIT_OK
    if args.verify:
        try:
            rep = _verify(phi, result.fo, args.verify, args.syntax)
        except (BudgetError, ValueError) as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_INPUT
        if rep.agree:
            report += (f"Verified: agreement on all {rep.frames_checked} "
                       f"frames with up to {args.verify} worlds\n")
        else:
            report += ("Verification FAILED; counterexample frame: "
                       + str(rep.counterexample.to_json()) + "\n")
            code = EXIT_DISAGREE
    _emit(report, args.out)
    return code


def _run_corpus(args) -> int:
    mode = _MODES[args.syntax]
    fmt = OutputFormat(args.format)
    try:
        entries = load_corpus(args.corpus)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    lines = []
    any_parse_error = False
    any_failure = False
    any_disagree = False
    for entry in entries:
        try:
            phi = parse(entry.formula, mode)
        except ParseError as exc:
            lines.append(f"{entry.name}\tparse-error\t{exc}")
            any_parse_error = True
            continue
        result = correspondent(phi, mode)
        if result.status != "success":
            lines.append(f"{entry.name}\tfailed\t-\t-")
            any_failure = True
            continue
        order = ",".join(o for g in result.goals for o in g.order)
        rendered = render(result.fo, fmt, expand_leq=args.expand_leq,
                          name=entry.name)
        notes = []
        if entry.expected_fo is not None:
            tex = render(result.fo, OutputFormat.TEX)
            if tex != entry.expected_fo:
                notes.append("expected-mismatch")
                any_disagree = True
        if args.verify:
            try:
                rep = _verify(phi, result.fo, args.verify, args.syntax)
            except (BudgetError, ValueError) as exc:
                sys.stderr.write(f"error: {entry.name}: {exc}\n")
                return EXIT_INPUT
            if not rep.agree:
                notes.append("oracle-disagreement")
                any_disagree = True
        lines.append(f"{entry.name}\tok\t[{order}]\t{rendered}"
                     + ("\t" + ";".join(notes) if notes else ""))
    _emit("\n".join(lines) + "\n", args.out)
    if any_disagree:
        return EXIT_DISAGREE
    if any_parse_error:
        return EXIT_INPUT
    if any_failure:
        return EXIT_ELIMINATION
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verify and args.verify > 3:
        sys.stderr.write("error: --verify is capped at 3 worlds\n")
        return EXIT_INPUT
    if args.corpus is not None:
        return _run_corpus(args)
    return _run_single(args)


if __name__ == "__main__":
    sys.exit(main())
