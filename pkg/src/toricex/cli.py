"""Command-line front end.

Exit status: 0 every verdict passed, 1 a mathematical check failed,
2 usage or input error, 3 enumeration limit reached.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .cohomology import (
    EngineLimitError,
    acyclicity_witness,
    cohomology_dims,
    forbidden_subsets,
    h0,
    homology_patterns,
    is_acyclic_oracle,
)
from .collection import check_strongly_exceptional, the_collection, verify_all
from .config import EnumerationLimits
from .divisors import class_matrix
from .fan import Fan, FamilyParams, build_family_fan
from .fanfile import FanFileError, dump_fan, load_fan
from .frobenius import bondal_set, pushforward_split
from .report import Check, Report

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
COMMANDS = ("verify", "split", "cohomology", "forbidden", "collection")
FAMILY_ONLY = {"verify", "collection"}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: Optional[FamilyParams] = None
    fan_path: Optional[str] = None
    p: Optional[int] = None
    cls: Optional[tuple[int, ...]] = None
    output_format: str = "text"
    radius_limit: Optional[int] = None
    emit_fan: Optional[str] = None
    timing: bool = False
    backend: Optional[str] = None

    def echo(self) -> dict:
        d = {"command": self.command}
        if self.params is not None:
            d.update(n=self.params.n, b=self.params.b)
        if self.fan_path is not None:
            d["fan"] = self.fan_path
        if self.p is not None:
            d["p"] = self.p
        if self.cls is not None:
            d["class"] = list(self.cls)
        if self.radius_limit is not None:
            d["radius_limit"] = self.radius_limit
        return d


def _class_triple(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed class {text!r}: expected comma-separated integers") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty class")
    return vals


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toricex", description="Exceptional collections on the toric family X(n, b).")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(COMMANDS) + "}", parser_class=_Parser)
    sub.required = True
    helps = {
        "verify": "run every check for X(n, b)",
        "split": "Frobenius pushforward splitting of the structure sheaf",
        "cohomology": "cohomology dimensions and acyclicity of one class",
        "forbidden": "forbidden subsets with Betti numbers",
        "collection": "the ordered collection and its Ext grid",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--n", type=int, help="dimension of the family variety")
        p.add_argument("--b", type=int, help="twist parameter")
        if name not in FAMILY_ONLY:
            p.add_argument("--fan", dest="fan_path", help="JSON fan document instead of --n/--b")
        p.add_argument("--format", dest="output_format", choices=("text", "structured"), default="text")
        p.add_argument("--radius-limit", type=int, help="initial enumeration radius (default n+b+4)")
        p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
        p.add_argument("--backend", choices=("numba", "numpy"), help="kernel backend")
        if name == "split":
            p.add_argument("--p", type=int, required=True, help="Frobenius power, >= 2")
        if name == "cohomology":
            p.add_argument("--class", dest="cls", type=_class_triple, required=True, help="class as e,f,g")
        if name == "verify":
            p.add_argument("--emit-fan", help="write the family fan document to this path")
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    fan_path = getattr(ns, "fan_path", None)
    has_params = ns.n is not None or ns.b is not None
    if fan_path and has_params:
        raise UsageError("give either --n/--b or --fan, not both")
    if not fan_path:
        if ns.n is None or ns.b is None:
            raise UsageError("both --n and --b are required (or --fan)")
        try:
            params = FamilyParams(ns.n, ns.b)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        params = None
    p = getattr(ns, "p", None)
    if p is not None and p < 2:
        raise UsageError("--p must be >= 2")
    if ns.radius_limit is not None and ns.radius_limit < 1:
        raise UsageError("--radius-limit must be >= 1")
    return RunConfig(
        command=ns.command,
        params=params,
        fan_path=fan_path,
        p=p,
        cls=getattr(ns, "cls", None),
        output_format=ns.output_format,
        radius_limit=ns.radius_limit,
        emit_fan=getattr(ns, "emit_fan", None),
        timing=ns.timing,
        backend=ns.backend,
    )


def _fan(config: RunConfig) -> Fan:
    if config.fan_path:
        return load_fan(config.fan_path)
    return build_family_fan(config.params)


def run(config: RunConfig) -> Report:
    start = time.perf_counter()
    limits = EnumerationLimits(initial_radius=config.radius_limit)
    fan = _fan(config)
    family = fan.family
    kw = {"limits": limits, "backend": config.backend}
    report = Report(command=config.command, config=config.echo())

    if config.command == "verify":
        if config.emit_fan:
            dump_fan(fan, config.emit_fan)
        res = verify_all(family, **kw)
        report.checks = res.checks
        report.certificates = res.certificates
        report.data = {"fano": family.fano, "collection": [list(c) for c in the_collection(family).items]}

    elif config.command == "split":
        split = pushforward_split(fan, config.p, backend=config.backend)
        expected = config.p ** fan.dimension
        report.checks.append(Check("cardinality", split.total == expected, {"total": split.total, "expected": expected}))
        report.data = {
            "summands": [[list(c), k] for c, k in split.summands],
            "total": split.total,
            "distinct": len(split.classes),
        }
        if family is not None:
            target = bondal_set(family)
            report.checks.append(Check("within_B1_B2_B3", split.classes <= target, {}))
            report.data["B1_B2_B3"] = {
                "size": len(target),
                "equal": split.classes == target,
                "missing": sorted(list(c) for c in target - split.classes),
            }

    elif config.command == "cohomology":
        cls = config.cls
        rank = len(class_matrix(fan))
        if len(cls) != rank:
            raise UsageError(f"class must have {rank} coordinates for this fan")
        dims = cohomology_dims(fan, cls, **kw)
        oracle = is_acyclic_oracle(fan, cls, **kw)
        report.data = {"dims": list(dims), "acyclic_oracle": oracle}
        report.checks.append(Check("h0_consistent", dims[0] == h0(fan, cls, **kw), {"h0": dims[0]}))
        report.checks.append(Check("oracle_matches_dims", oracle == (sum(dims[1:]) == 0), {}))
        if family is not None:
            wit = acyclicity_witness(family, cls)
            report.data["acyclic_closed_form"] = wit is None
            if wit is not None:
                report.data["witness"] = {"negative": sorted(wit[0]), "alpha": list(wit[1])}
            report.checks.append(Check("closed_form_matches_oracle", (wit is None) == oracle, {}))

    elif config.command == "forbidden":
        pats = forbidden_subsets(fan)
        betti = homology_patterns(fan)
        report.data = {
            "count": len(pats),
            "patterns": [
                {"indices": [i + 1 for i in sorted(I)], "rays": [fan.label(i) for i in sorted(I)],
                 "betti": {str(d): v for d, v in betti[I].nonzero().items()}}
                for I in pats
            ],
        }
        if family is not None:
            prims = family.primitive_collections()
            full = frozenset(range(fan.num_rays))
            expected = set(prims) | {full - p for p in prims} | {frozenset()}
            report.checks.append(Check("primitive_and_complements", set(pats) == expected, {"expected": len(expected)}))

    elif config.command == "collection":
        c = the_collection(family)
        ext = check_strongly_exceptional(c, **kw)
        report.data = {"collection": [list(x) for x in c.items], "hom_dims": ext.hom_dims,
                       "acyclic": ext.acyclic}
        report.checks.append(Check("strongly_exceptional", ext.passed, {"failures": [list(f) for f in ext.failures]}))

    if config.timing:
        report.timing = round(time.perf_counter() - start, 3)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
        report = run(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FanFileError as exc:
        print(f"fan file error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EngineLimitError as exc:
        print(f"engine limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    out = report.to_json() if config.output_format == "structured" else report.to_text()
    sys.stdout.write(out)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
