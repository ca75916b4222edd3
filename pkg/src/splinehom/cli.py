"""Command line front end: ``splinehom <command> <input> [options]``.

Every command builds a report (tables plus scalar values) once; the markdown
and JSON renderings are both produced from it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

from . import chain, hilbert, lattice
from .chain import Kind
from .complex import GeometryError, boundary_subfan, validate, vertex_star_fan
from .io import (
    ComplexSpec,
    Model,
    ParseError,
    ValidationError,
    corpus_names,
    load_corpus,
    parse_input,
    random_triangulation,
)

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_UNSTABLE = 3

COMMANDS = ("dim", "euler", "homology", "lattice", "certify-primes", "hilbert-poly",
            "vertex-obstructions", "generic-c1", "rigidity", "validate")


class UsageError(Exception):
    pass


@dataclass
class Table:
    title: str
    columns: list[str]
    rows: list[list[Any]]

    def to_json(self) -> dict:
        return {"title": self.title, "columns": self.columns, "rows": self.rows}


@dataclass
class Report:
    command: str
    source: str
    params: dict
    values: dict = field(default_factory=dict)
    tables: list[Table] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"command": self.command, "input": self.source, "params": self.params,
                "values": self.values, "tables": [t.to_json() for t in self.tables],
                "warnings": self.warnings}

    def markdown(self) -> str:
        out = [f"# splinehom {self.command}: {self.source}", ""]
        p = ", ".join(f"{k}={v}" for k, v in self.params.items())
        if p:
            out += [p, ""]
        for k, v in self.values.items():
            out.append(f"- {k}: {_cell(v)}")
        if self.values:
            out.append("")
        for t in self.tables:
            out += [f"## {t.title}", "", "| " + " | ".join(t.columns) + " |",
                    "|" + "|".join("---" for _ in t.columns) + "|"]
            out += ["| " + " | ".join(_cell(c) for c in row) + " |" for row in t.rows]
            out.append("")
        for w in self.warnings:
            out.append(f"warning: {w}")
        return "\n".join(out).rstrip() + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


# ------------------------------------------------------------ arguments


def parse_degrees(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty degree range {text!r}")
    return lo, hi


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="splinehom", description="Exact spline dimensions, Hilbert polynomials "
                 "and associated-flat certificates for polyhedral fans.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", help="JSON file, a bundled example name, or 'random'")
    ap.add_argument("--degrees", type=parse_degrees, default=None, metavar="a..b")
    ap.add_argument("--r", type=int, default=None, help="uniform interior smoothness")
    ap.add_argument("--s", type=int, default=None, help="boundary smoothness (-1 = free)")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of markdown")
    ap.add_argument("--cap", type=int, default=None, help="degree cap for obstruction sums")
    ap.add_argument("--seed", type=int, default=0, help="seed for 'random' input")
    ap.add_argument("--modular", action="store_true", help="ranks modulo a prime (not certified)")
    return ap


def resolve_input(text: str, seed: int) -> ComplexSpec:
    if text == "random":
        return random_triangulation(seed)
    p = Path(text)
    if p.exists():
        spec = parse_input(p)
        return spec if spec.name else replace(spec, name=p.stem)
    if text in corpus_names():
        return load_corpus(text)
    raise ParseError(f"{text}: no such file or bundled example (bundled: {', '.join(corpus_names())})")


def apply_threads() -> int:
    raw = os.environ.get("SPLINEHOM_THREADS", "")
    if not raw:
        return 1
    try:
        n = max(1, int(raw))
    except ValueError:
        raise UsageError(f"SPLINEHOM_THREADS must be an integer, got {raw!r}") from None
    try:
        import flint
        flint.ctx.threads = n
    except ImportError:
        pass
    return n


# ------------------------------------------------------------ commands


def _names(n: int) -> list[str]:
    return ["w", "x", "y", "z"] if n == 4 else (["w", "x", "y"] if n == 3 else [f"x{i}" for i in range(n)])


def _degrees(args, default: tuple[int, int]) -> range:
    lo, hi = args.degrees or default
    return range(lo, hi + 1)


def cmd_dim(m: Model, args, rep: Report):
    rows = [[d, chain.spline_dim(m.fan, m.alpha, d, modular=args.modular)] for d in _degrees(args, (0, 5))]
    rep.tables.append(Table("spline dimensions", ["d", "dim"], rows))


def cmd_euler(m: Model, args, rep: Report):
    cx = chain.build_complex_family(m.fan, m.alpha, kind=Kind.QUOTIENT, modular=args.modular)
    rows = []
    for d in _degrees(args, (0, 5)):
        chi = chain.euler_characteristic(m.fan, m.alpha, d)
        h = cx.euler_from_homology(d)
        rows.append([d, chi, h, chi == h])
    rep.tables.append(Table("Euler characteristic of R/J", ["d", "chi", "sum (-1)^i H", "equal"], rows))


def cmd_homology(m: Model, args, rep: Report):
    cx = chain.build_complex_family(m.fan, m.alpha, kind=Kind.QUOTIENT, modular=args.modular)
    top = cx.top
    rows = [[d] + [cx.homology_dim(i, d) for i in range(top, -1, -1)] for d in _degrees(args, (0, 5))]
    rep.tables.append(Table("homology of R/J", ["d"] + [f"H_{i}" for i in range(top, -1, -1)], rows))


def cmd_lattice(m: Model, args, rep: Report):
    L = lattice.intersection_lattice(m.fan, m.alpha)
    names = _names(m.fan.ambient_dim)
    rep.values["hyperplanes"] = len(L.hyperplanes)
    rep.values["flats"] = len(L)
    rows = [[i, F.dim, F.describe(names), len(L.hyperplanes_containing(i))] for i, F in enumerate(L.flats)]
    rep.tables.append(Table("intersection lattice", ["id", "dim", "ideal", "hyperplanes"], rows))


def cmd_certify(m: Model, args, rep: Report):
    names = _names(m.fan.ambient_dim)
    res = lattice.certify_associated_flats(m.fan, m.alpha)
    rows = [[v.flat.describe(names), v.flat.dim, f"H_{v.homology_index}", len(v.facets), v.verdict.value,
             v.method, list(v.bm_ranks)] for v in res]
    rep.values["certified"] = sorted({r[0] for r, v in zip(rows, res)
                                      if v.verdict is lattice.Verdict.CERTIFIED_ASSOCIATED})
    rep.tables.append(Table("flat verdicts", ["flat", "dim", "module", "facets", "verdict", "method",
                                              "relative ranks"], rows))


def _hp_report(rep: Report, r: hilbert.HPReport):
    rep.values["method"] = r.method
    rep.values["hilbert_polynomial"] = str(r.total)
    rep.values["coefficients"] = [str(c) for c in r.total.coeffs]
    for k, v in r.extra.items():
        rep.values[k] = str(v) if isinstance(v, hilbert.HilbertPoly) else v
    rep.warnings.extend(r.flags)
    rep.tables.append(Table("terms", ["source", "contribution"],
                            [[t.source, str(t.contribution)] for t in r.terms]))


def cmd_hilbert(m: Model, args, rep: Report):
    cx = m.complex
    simplicial3 = (cx is not None and cx.ambient_dim == 3
                   and all(len(c) == k + 1 for c, k in cx.cell_dim.items()))
    if simplicial3 and args.degrees is None:
        _hp_report(rep, hilbert.hp_simplicial_3complex(cx, m.alpha, args.cap))
    elif m.fan.ambient_dim == 3 and args.degrees is None:
        _hp_report(rep, hilbert.hp_3d_fan(m.fan, m.alpha))
    else:
        lo = hilbert.default_cap(m.alpha) if args.degrees is None else args.degrees[0]
        hi = lo + m.fan.dim + 1 if args.degrees is None else args.degrees[1]
        if hi - lo < m.fan.dim + 1:
            raise UsageError(f"--degrees needs at least {m.fan.dim + 2} degrees for a fit")
        p = hilbert.hp_fit(m.fan, m.alpha, (lo, hi))
        rep.values["method"] = f"fit on [{lo},{hi}]"
        rep.values["hilbert_polynomial"] = str(p)
        rep.values["coefficients"] = [str(c) for c in p.coeffs]


def cmd_obstructions(m: Model, args, rep: Report):
    if m.complex is None:
        raise ValidationError("vertex-obstructions needs a polytopal complex, not a bare fan")
    rows = []
    for v in range(len(m.complex.vertices)):
        ob = hilbert.vertex_obstruction(m.complex, m.alpha, v, args.cap)
        rows.append([v, ob.total, ob.nonzero, ob.stabilized])
    rep.values["cap"] = args.cap if args.cap is not None else hilbert.default_cap(m.alpha)
    rep.tables.append(Table("vertex obstructions", ["vertex", "total", "nonzero (deg, dim)", "stabilized"], rows))
    if any(not r[3] for r in rows):
        raise hilbert.NotStabilized("some vertex obstruction did not vanish below the cap")


def cmd_generic(m: Model, args, rep: Report):
    if m.complex is None:
        raise ValidationError("generic-c1 needs a polytopal complex")
    rows = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", hilbert.GenericityWarning)
        for i, d in enumerate(_degrees(args, (0, 5))):
            rows.append([d, hilbert.generic_c1_dim(m.complex, d, check=(i == 0))])
    rep.warnings.extend(str(w.message) for w in caught)
    rep.tables.append(Table("generic C^1 dimension", ["d", "dim"], rows))


def _rigidity_row(label, fan) -> list:
    R = hilbert.c1_rigidity_matrix(fan)
    return [label, f"{R.shape[0]}x{R.shape[1]}", R.rank, R.full_rank]


def cmd_rigidity(m: Model, args, rep: Report):
    rows = []
    if m.complex is not None and m.complex.ambient_dim == 3:
        bd = boundary_subfan(m.fan).members
        for v in range(len(m.complex.vertices)):
            star, _, _ = vertex_star_fan(m.complex, v)
            where = "boundary" if m.fan.face_id((v,)) in bd else "interior"
            rows.append(_rigidity_row(f"vertex {v} ({where})", star))
    elif m.fan.ambient_dim == 3:
        rows.append(_rigidity_row("fan", m.fan))
    else:
        raise ValidationError("rigidity needs a fan in R^3 or a complex in R^3")
    rep.tables.append(Table("C^1 rigidity matrices", ["star", "shape", "rank", "full rank"], rows))


def cmd_validate(m: Model, args, rep: Report):
    rep.values["name"] = m.spec.name
    rep.values["mode"] = m.spec.mode
    rep.values["ambient_dim"] = m.spec.ambient_dim
    rep.values["f_vector"] = m.fan.f_vector()
    if m.complex is not None:
        rep.values["complex_f_vector"] = m.complex.f_vector()
    rep.values.update(validate(m.fan))
    rep.values["walls_free"] = sum(1 for _, a in m.alpha.items() if a == -1)


HANDLERS: dict[str, Callable] = {
    "dim": cmd_dim, "euler": cmd_euler, "homology": cmd_homology, "lattice": cmd_lattice,
    "certify-primes": cmd_certify, "hilbert-poly": cmd_hilbert,
    "vertex-obstructions": cmd_obstructions, "generic-c1": cmd_generic,
    "rigidity": cmd_rigidity, "validate": cmd_validate,
}


def run(command: str, spec: ComplexSpec, args) -> Report:
    m = spec.build()
    params = {"r": spec.uniform_r, "s": spec.boundary_s}
    if args.degrees:
        params["degrees"] = f"{args.degrees[0]}..{args.degrees[1]}"
    if args.modular:
        params["modular"] = True
    rep = Report(command, spec.name or "<input>", params)
    try:
        HANDLERS[command](m, args, rep)
    except hilbert.NotStabilized as exc:
        rep.warnings.append(f"not stabilized: {exc}")
        exc.report = rep
        raise
    return rep


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    rep = None
    try:
        args = ap.parse_args(argv)
        apply_threads()
        spec = resolve_input(args.input, args.seed)
        if args.r is not None or args.s is not None:
            spec = spec.with_smoothness(args.r, args.s)
        rep = run(args.command, spec, args)
    except UsageError as exc:
        print(f"splinehom: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, GeometryError) as exc:
        print(f"splinehom: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except hilbert.NotStabilized as exc:
        print(f"splinehom: not stabilized: {exc}", file=sys.stderr)
        rep = getattr(exc, "report", None)
        code = EXIT_UNSTABLE
    else:
        code = 0
    if rep is not None:
        sys.stdout.write(json.dumps(rep.to_json(), indent=1) + "\n" if args.json else rep.markdown())
    return code


if __name__ == "__main__":
    sys.exit(main())
