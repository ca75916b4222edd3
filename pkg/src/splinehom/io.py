"""JSON input format, the bundled corpus and the seeded random triangulations."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from math import lcm
from pathlib import Path
from typing import Any

from .complex import (
    Fan,
    GeometryError,
    PolytopalComplex,
    SmoothnessMap,
    build_complex,
    homogenize,
)

__all__ = [
    "ParseError",
    "ValidationError",
    "ComplexSpec",
    "Model",
    "parse_input",
    "parse_spec",
    "load_corpus",
    "corpus_names",
    "random_triangulation",
]

MODES = ("complex", "fan")


class ParseError(ValueError):
    """Malformed input; the message names the offending field."""


class ValidationError(ValueError):
    """Well-formed input describing an invalid object."""


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{where}: booleans are not numbers")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: bad rational {x!r} ({exc})") from None
    raise ParseError(f"{where}: expected an integer or a rational string, got {type(x).__name__}")


def _fmt(q: Fraction) -> str | int:
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer")
    return x


@dataclass(frozen=True)
class ComplexSpec:
    ambient_dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[tuple[int, ...], ...]
    mode: str = "complex"
    faces: tuple[tuple[tuple[int, ...], ...], ...] | None = None
    uniform_r: int = 1
    boundary_s: int = -1
    walls: tuple[tuple[tuple[int, ...], int], ...] = ()
    name: str = ""

    def to_json(self) -> dict:
        out: dict[str, Any] = {}
        if self.name:
            out["name"] = self.name
        out["mode"] = self.mode
        out["ambient_dim"] = self.ambient_dim
        out["vertices"] = [[_fmt(x) for x in v] for v in self.vertices]
        out["facets"] = [list(f) for f in self.facets]
        if self.faces is not None:
            out["faces"] = [[list(c) for c in cs] for cs in self.faces]
        sm: dict[str, Any] = {"uniform_r": self.uniform_r, "boundary_s": self.boundary_s}
        if self.walls:
            sm["walls"] = [{"vertices": list(k), "alpha": a} for k, a in self.walls]
        out["smoothness"] = sm
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def with_smoothness(self, r: int | None = None, s: int | None = None) -> "ComplexSpec":
        return replace(self, uniform_r=self.uniform_r if r is None else r,
                       boundary_s=self.boundary_s if s is None else s)

    def build(self) -> "Model":
        try:
            if self.mode == "complex":
                explicit = [[frozenset(c) for c in cs] for cs in self.faces] if self.faces else None
                cx = build_complex(self.ambient_dim, self.vertices, self.facets, explicit)
                fan = homogenize(cx)
            else:
                cx = None
                rays = [_scaled(v) for v in self.vertices]
                if self.faces:
                    fan = Fan(self.ambient_dim, rays, [c for cs in self.faces for c in cs])
                else:
                    fan = Fan.from_cones(self.ambient_dim, rays, self.facets)
            alpha = self.smoothness(fan)
        except GeometryError as exc:
            raise ValidationError(f"{type(exc).__name__}: {exc}") from None
        return Model(self, fan, alpha, cx)

    def smoothness(self, fan: Fan) -> SmoothnessMap:
        vals = {w: (self.uniform_r if len(fan.parents[w]) == 2 else self.boundary_s) for w in fan.walls}
        for key, a in self.walls:
            k = tuple(sorted(key))
            if k not in fan.key_to_id or fan.key_to_id[k] not in vals:
                raise ValidationError(f"smoothness.walls: {list(key)} is not a codimension-one face")
            vals[fan.key_to_id[k]] = a
        return SmoothnessMap(fan, vals)


def _scaled(v) -> list[int]:
    den = lcm(*(x.denominator for x in v))
    return [int(x * den) for x in v]


@dataclass
class Model:
    spec: ComplexSpec
    fan: Fan
    alpha: SmoothnessMap
    complex: PolytopalComplex | None = field(default=None)


def parse_spec(data: Any, source: str = "<input>") -> ComplexSpec:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    mode = data.get("mode", "complex")
    if mode not in MODES:
        raise ParseError(f"mode: expected one of {MODES}, got {mode!r}")
    if "ambient_dim" not in data:
        raise ParseError("ambient_dim: missing")
    n = _int(data["ambient_dim"], "ambient_dim")
    if n < 1:
        raise ValidationError("ambient_dim must be positive")
    raw_v = data.get("vertices")
    if not isinstance(raw_v, list) or not raw_v:
        raise ParseError("vertices: expected a nonempty list")
    verts = []
    for i, v in enumerate(raw_v):
        if not isinstance(v, list):
            raise ParseError(f"vertices[{i}]: expected a list")
        if len(v) != n:
            raise ValidationError(f"vertices[{i}] has {len(v)} coordinates, ambient_dim is {n}")
        verts.append(tuple(_rational(x, f"vertices[{i}][{j}]") for j, x in enumerate(v)))
    if mode == "fan" and any(all(x == 0 for x in v) for v in verts):
        raise ValidationError("fan mode: a ray generator is zero")
    raw_f = data.get("facets")
    if not isinstance(raw_f, list) or not raw_f:
        raise ParseError("facets: expected a nonempty list")
    facets = []
    for i, f in enumerate(raw_f):
        if not isinstance(f, list) or not f:
            raise ParseError(f"facets[{i}]: expected a nonempty list of vertex indices")
        idx = tuple(_int(x, f"facets[{i}]") for x in f)
        for x in idx:
            if not 0 <= x < len(verts):
                raise ValidationError(f"facets[{i}]: vertex index {x} out of range")
        if len(set(idx)) != len(idx):
            raise ValidationError(f"facets[{i}]: repeated vertex")
        facets.append(idx)
    faces = None
    if "faces" in data and data["faces"] is not None:
        if not isinstance(data["faces"], list):
            raise ParseError("faces: expected a list of lists per dimension")
        faces = tuple(tuple(tuple(_int(x, f"faces[{k}]") for x in c) for c in cs)
                      for k, cs in enumerate(data["faces"]))
    sm = data.get("smoothness", {})
    if not isinstance(sm, dict):
        raise ParseError("smoothness: expected an object")
    r = _int(sm.get("uniform_r", 1), "smoothness.uniform_r")
    s = _int(sm.get("boundary_s", -1), "smoothness.boundary_s")
    if r < 0:
        raise ValidationError("smoothness.uniform_r must be >= 0 on interior walls")
    if s < -1:
        raise ValidationError("smoothness.boundary_s must be >= -1")
    walls = []
    seen = set()
    for i, w in enumerate(sm.get("walls", []) or []):
        if not isinstance(w, dict) or "vertices" not in w or "alpha" not in w:
            raise ParseError(f"smoothness.walls[{i}]: expected {{vertices, alpha}}")
        key = tuple(sorted(_int(x, f"smoothness.walls[{i}].vertices") for x in w["vertices"]))
        if key in seen:
            raise ValidationError(f"smoothness.walls[{i}]: wall {list(key)} given twice")
        seen.add(key)
        a = _int(w["alpha"], f"smoothness.walls[{i}].alpha")
        if a < -1:
            raise ValidationError(f"smoothness.walls[{i}]: alpha {a} < -1")
        walls.append((key, a))
    return ComplexSpec(n, tuple(verts), tuple(facets), mode, faces, r, s, tuple(walls),
                       str(data.get("name", "")))


def parse_input(path: str | Path) -> ComplexSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_spec(data, str(path))


# ------------------------------------------------------------------ corpus


def corpus_names() -> list[str]:
    root = resources.files("splinehom") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus(name: str) -> ComplexSpec:
    root = resources.files("splinehom") / "corpus"
    f = root / f"{name}.json"
    if not f.is_file():
        raise ParseError(f"no bundled example named {name!r}; have {corpus_names()}")
    return parse_spec(json.loads(f.read_text(encoding="utf-8")), name)


def random_triangulation(seed: int, ntets: int = 13, r: int = 1) -> ComplexSpec:
    """Seeded triangulation of a tetrahedron by repeated 1-to-4 stellar splits.

    Corners are perturbed by random sevenths; each new vertex is a random
    interior point with positive integer barycentric weights.
    """
    if ntets < 1 or ntets % 3 != 1:
        raise ValidationError("ntets must be 1 mod 3 (each split adds three tetrahedra)")
    rng = random.Random(seed)
    corners = [(0, 0, 0), (12, 0, 0), (0, 12, 0), (0, 0, 12)]
    verts = [tuple(Fraction(x) + Fraction(rng.randint(-6, 6), 7) for x in c) for c in corners]
    tets = [(0, 1, 2, 3)]
    while len(tets) < ntets:
        t = tets.pop(rng.randrange(len(tets)))
        w = [rng.randint(2, 9) for _ in range(4)]
        tot = sum(w)
        p = tuple(sum(Fraction(w[k], tot) * verts[t[k]][i] for k in range(4)) for i in range(3))
        verts.append(p)
        new = len(verts) - 1
        for k in range(4):
            tets.append(tuple(sorted(t[:k] + t[k + 1:] + (new,))))
    return ComplexSpec(3, tuple(verts), tuple(tets), "complex", None, r, -1, (),
                       f"random_seed{seed}_{ntets}")
