"""Command-line entry point.

Exit codes: 0 success, 2 input error, 3 failed cross-check, 4 numerical
degeneracy. Output goes to ``--out`` (written atomically) or stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .classify import (
    THEOREM_STATEMENTS,
    ClassifyOptions,
    CorpusEntry,
    CorpusSpec,
    arc_family_demo,
    classify,
    default_corpus,
    noncompact_witness,
    verify_corpus,
)
from .errors import ConvwalkError, InputError, NumericalDegeneracy, TheoremViolation
from .fourier import (
    adapted_fs_check,
    builtin_irreps,
    fs_transform,
    load_representations,
    peter_weyl_check,
)
from .group import GroupSpec, build_group, parse_group_spec
from .measure import as_probability, parse_measure, parse_zmeasure, zmeasure_to_dict
from .operator import EIGEN_TOL, GAP_TOL, norm_sweep, sweep_csv

EXIT_OK, EXIT_INPUT, EXIT_THEOREM, EXIT_DEGENERATE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or v == float("inf"):
        raise argparse.ArgumentTypeError("tolerances must be positive and finite")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default=None)
    common.add_argument("--eigen-tol", type=_positive_float, default=EIGEN_TOL)
    common.add_argument("--gap-tol", type=_positive_float, default=GAP_TOL)
    common.add_argument("--tail-tol", type=_positive_float, default=1e-6)
    common.add_argument("--n-max", type=_positive_int, default=None)
    common.add_argument("--seed", type=int, default=0)

    measured = argparse.ArgumentParser(add_help=False)
    measured.add_argument("--group", required=True, help="e.g. cyclic:4, dihedral:5, cyclic:2*symmetric:3")
    src = measured.add_mutually_exclusive_group(required=True)
    src.add_argument("--measure", help="atoms:1=0.5,3=0.5 | dirac:k | haar | uniform:0,2")
    src.add_argument("--measure-file", help="measure JSON file")

    p = _Parser(prog="convwalk", description="Ergodicity of random walks on finite groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analyze", parents=[common, measured], help="full ergodicity report")
    v = sub.add_parser("verify", parents=[common], help="run a corpus of instances")
    v.add_argument("--corpus", default="default", help="'default' or a corpus JSON file")
    v.add_argument("--jobs", type=_positive_int, default=1)
    sub.add_parser("sweep", parents=[common, measured], help="norm curves as CSV")
    f = sub.add_parser("fourier", parents=[common, measured], help="Fourier-Stieltjes blocks")
    f.add_argument("--reps-file", help="representation JSON (required for Cayley tables)")
    a = sub.add_parser("arc-demo", parents=[common], help="norm 1 with spectral radius below 1")
    a.add_argument("--n", type=_positive_int, required=True)
    a.add_argument("--fraction", type=float, default=0.25)
    z = sub.add_parser("z-witness", parents=[common], help="lower bound 1 on Z^d")
    zsrc = z.add_mutually_exclusive_group(required=True)
    zsrc.add_argument("--measure", help="atoms:0=0.5,1=0.5 or atoms:0/0=0.5,1/0=0.5")
    zsrc.add_argument("--measure-file")
    z.add_argument("--shift", help="explicit shift for n = 1, e.g. 3/3")
    return p


def _options(args) -> ClassifyOptions:
    return ClassifyOptions(eigen_tol=args.eigen_tol, gap_tol=args.gap_tol,
                           tail_tol=args.tail_tol, n_max=args.n_max)


def _load_measure(args):
    G = build_group(parse_group_spec(args.group))
    text = args.measure if args.measure is not None else args.measure_file
    if args.measure_file is not None and not text.endswith(".json"):
        raise InputError("--measure-file must name a .json file")
    mu = as_probability(parse_measure(text, G, probability=True))
    provenance = {"group": args.group, "measure": text}
    return G, mu, provenance


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _pretty_report(d: dict) -> str:
    v = d["verdicts"]
    lines = [
        f"group {d['input']['group']}",
        f"adapted               {d['adapted']}",
        f"strictly aperiodic    {d['strictly_aperiodic']}",
        f"uniformly ergodic     {v['uniformly_ergodic']}",
        f"completely mixing     {v['uniformly_completely_mixing']}",
        f"sum-zero norm         {d['zero_norm']:.12g}",
        f"sum-zero radius       {d['zero_spectral_radius']:.12g}",
        "",
        f"{'check':<40} {'ok':<5} statement",
    ]
    for c in d["cross_checks"]:
        ok = "pass" if c["passed"] else "FAIL"
        lines.append(f"{c['theorem']:<40} {ok:<5} {THEOREM_STATEMENTS[c['theorem']]}")
        lines.append(f"{'':<46} {c['detail']}")
    return "\n".join(lines) + "\n"


def _checks_csv(d: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem", "passed", "detail"])
    for c in d["cross_checks"]:
        w.writerow([c["theorem"], c["passed"], c["detail"]])
    return buf.getvalue()


def _cmd_analyze(args):
    _, mu, prov = _load_measure(args)
    report = classify(mu, _options(args)).to_dict()
    report["input"]["spec"] = prov
    fmt = args.format or "json"
    if fmt == "pretty":
        report["input"]["group"] = prov["group"]
        return _pretty_report(report)
    if fmt == "csv":
        return _checks_csv(report)
    return _dumps(report)


def _load_corpus(text: str) -> CorpusSpec:
    if text == "default":
        return default_corpus()
    try:
        d = json.loads(Path(text).read_text())
        entries = tuple(CorpusEntry(GroupSpec.from_dict(e["group"]), dict(e["generator"]))
                        for e in d["entries"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read corpus {text!r}: {exc}") from None
    return CorpusSpec(entries)


def _cmd_verify(args):
    summary = verify_corpus(_load_corpus(args.corpus), _options(args), seed=args.seed,
                            jobs=args.jobs)
    d = summary.to_dict()
    d["corpus"] = args.corpus
    if args.format == "pretty":
        text = (f"instances {d['instances']}  passes {d['passes']}  "
                f"failures {len(d['failures'])}  degenerate {len(d['degenerate'])}  "
                f"seed {d['seed']}\n")
    else:
        text = _dumps(d)
    code = EXIT_OK
    if summary.failures:
        code = EXIT_THEOREM
    elif summary.degenerate:
        code = EXIT_DEGENERATE
    return text, code


def _cmd_sweep(args):
    _, mu, prov = _load_measure(args)
    rows = norm_sweep(mu, args.n_max or 100)
    if (args.format or "csv") == "csv":
        return sweep_csv(rows)
    return _dumps({"input": prov, "rows": [r.__dict__ for r in rows]})


def _cmd_fourier(args):
    G, mu, prov = _load_measure(args)
    if args.reps_file:
        try:
            obj = json.loads(Path(args.reps_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read representations: {exc}") from None
        reps = load_representations(obj, G)
    else:
        reps = builtin_irreps(G)
    blocks = []
    for rep in reps:
        fs = fs_transform(mu, rep)
        blocks.append({
            "label": rep.label,
            "dim": rep.dim,
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in fs.matrix],
            "eigenvalues": [[float(z.real), float(z.imag)] for z in np.sort_complex(fs.eigenvalues())],
        })
    pw = peter_weyl_check(G, reps, mu)
    ad = adapted_fs_check(mu, reps, args.eigen_tol)
    return _dumps({
        "input": prov,
        "blocks": blocks,
        "peter_weyl": {"max_distance": pw.max_distance, "passed": bool(pw.passed)},
        "adapted_check": {"skipped": ad.skipped, "passed": ad.passed, "witnesses": ad.witnesses,
                          "min_distance_nontrivial": float(ad.min_distance_nontrivial)},
    })


def _cmd_arc(args):
    r = arc_family_demo(args.n, args.fraction)
    if args.format == "pretty":
        return (f"Z_{r.n}: arc of {r.support_size} points, sum-zero norm {r.zero_norm:.12g}, "
                f"spectral radius {r.zero_spectral_radius:.12g}\n")
    return _dumps(r.to_dict())


def _cmd_zwitness(args):
    text = args.measure if args.measure is not None else args.measure_file
    mu = parse_zmeasure(text)
    shift = None
    if args.shift:
        try:
            shift = [int(c) for c in args.shift.split("/")]
        except ValueError:
            raise InputError(f"bad shift {args.shift!r}") from None
    r = noncompact_witness(mu, args.n_max or 50, shift)
    d = r.to_dict()
    d["input"] = {"measure": text, "parsed": zmeasure_to_dict(mu)}
    return _dumps(d)


COMMANDS = {
    "analyze": _cmd_analyze,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "fourier": _cmd_fourier,
    "arc-demo": _cmd_arc,
    "z-witness": _cmd_zwitness,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
        text, code = result if isinstance(result, tuple) else (result, EXIT_OK)
        _write(text, args.out)
        return code
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        report = getattr(exc, "report", None)
        if report is not None:
            _write(_dumps(report.to_dict()), args.out)
        return EXIT_THEOREM
    except NumericalDegeneracy as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
