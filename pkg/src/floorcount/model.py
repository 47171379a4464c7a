"""Degree specifications, stretched point configurations, point allocation
and sign vectors.

Everything here is order-based. Numeric coordinates are only attached when a
curve or surface has to be built explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb


class Ambient(str, Enum):
    P2 = "p2"
    P1P1 = "p1p1"
    P3 = "p3"
    P1XP2 = "p1xp2"
    P1P1P1 = "p1p1p1"

    @property
    def is_curve(self) -> bool:
        return self in (Ambient.P2, Ambient.P1P1)

    @property
    def arity(self) -> int:
        """Number of degree parameters."""
        return {"p2": 1, "p3": 1, "p1p1": 2, "p1xp2": 2, "p1p1p1": 3}[self.value]


@dataclass(frozen=True)
class DegreeSpec:
    ambient: Ambient
    params: tuple[int, ...]

    def __post_init__(self):
        amb = Ambient(self.ambient)
        object.__setattr__(self, "ambient", amb)
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))
        if len(self.params) != amb.arity:
            raise ValueError(f"{amb.value} takes {amb.arity} degree parameter(s), got {self.params}")
        if any(p < 1 for p in self.params):
            raise ValueError(f"degree parameters must be >= 1, got {self.params}")

    @classmethod
    def p2(cls, d):
        return cls(Ambient.P2, (d,))

    @classmethod
    def p1p1(cls, d, e):
        return cls(Ambient.P1P1, (d, e))

    @classmethod
    def p3(cls, d):
        return cls(Ambient.P3, (d,))

    @classmethod
    def p1xp2(cls, d, e):
        return cls(Ambient.P1XP2, (d, e))

    @classmethod
    def p1p1p1(cls, d, e, f):
        return cls(Ambient.P1P1P1, (d, e, f))

    @property
    def d(self) -> int:
        return self.params[0]

    @property
    def e(self) -> int:
        return self.params[1]

    @property
    def f(self) -> int:
        return self.params[2]

    @property
    def is_curve(self) -> bool:
        return self.ambient.is_curve

    def lattice_point_count(self) -> int:
        a, p = self.ambient, self.params
        if a is Ambient.P2:
            return comb(p[0] + 2, 2)
        if a is Ambient.P1P1:
            return (p[0] + 1) * (p[1] + 1)
        if a is Ambient.P3:
            return comb(p[0] + 3, 3)
        if a is Ambient.P1XP2:
            return (p[0] + 1) * comb(p[1] + 2, 2)
        return (p[0] + 1) * (p[1] + 1) * (p[2] + 1)

    def point_count(self, delta: int = 1) -> int:
        """Points fixing a 1-nodal curve, or a delta-nodal surface."""
        if self.is_curve:
            return self.lattice_point_count() - 2
        return self.lattice_point_count() - 1 - delta

    def smooth_point_count(self) -> int:
        return self.lattice_point_count() - 1

    def label(self) -> str:
        names = {"p2": "P2", "p1p1": "P1xP1", "p3": "P3", "p1xp2": "P1xP2", "p1p1p1": "P1xP1xP1"}
        return f"{names[self.ambient.value]}({','.join(map(str, self.params))})"

    def to_json(self) -> dict:
        return {"ambient": self.ambient.value, "params": list(self.params)}

    @classmethod
    def from_json(cls, obj) -> "DegreeSpec":
        return cls(Ambient(obj["ambient"]), tuple(obj["params"]))


# ---------------------------------------------------------------------------
# point configurations

BASE = 4
ETA = Fraction(1, 64)  # smallest-size default; larger configurations shrink it


def stretch_eta(n: int, base: int = BASE) -> Fraction:
    """Slope parameter small enough that any slope times any height stays below
    the smallest horizontal gap of an n-point configuration."""
    return min(ETA, Fraction(1, base ** (n + 3)))


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class PointConfig:
    """Ordered points Q_1..Q_n, optionally with exact coordinates.

    ``coords[k-1]`` holds the coordinates of Q_k.
    """

    n: int
    coords: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        if self.coords is None:
            return
        if len(self.coords) != self.n:
            raise ValueError("coordinate count does not match n")
        for axis in range(len(self.coords[0]) if self.coords else 0):
            vals = [c[axis] for c in self.coords]
            gaps = [b - a for a, b in zip(vals, vals[1:])]
            if any(g <= 0 for g in gaps) or any(h <= g for g, h in zip(gaps, gaps[1:])):
                raise ValueError("coordinates must increase with strictly increasing gaps")

    @classmethod
    def stretched(cls, n: int, dim: int, base: int = BASE, eta: Fraction | None = None) -> "PointConfig":
        """Q_k = (base^k, eta*base^k, eta^2*base^k) truncated to ``dim`` coordinates.

        The default eta shrinks with n so that floors never overtake each other.
        """
        if eta is None:
            eta = stretch_eta(n, base)
        coords = tuple(
            tuple(Fraction(base) ** k * eta ** t for t in range(dim)) for k in range(1, n + 1)
        )
        return cls(n, coords)

    def __getitem__(self, k: int):
        """Coordinates of Q_k (1-based)."""
        if self.coords is None:
            raise ValueError("configuration has no coordinates")
        return self.coords[k - 1]

    def to_json(self) -> dict:
        out = {"n": self.n, "indices": list(range(1, self.n + 1))}
        if self.coords is not None:
            out["coords"] = [[frac_str(c) for c in q] for q in self.coords]
        return out

    @classmethod
    def from_json(cls, obj) -> "PointConfig":
        coords = obj.get("coords")
        if coords is not None:
            coords = tuple(tuple(parse_frac(c) for c in q) for q in coords)
        return cls(obj["n"], coords)


# ---------------------------------------------------------------------------
# allocation


@dataclass(frozen=True)
class Layout:
    """Which Q-indices sit on which divisor (or curve) and which fix floors.

    ``blocks`` maps a divisor or curve label i to an inclusive index range
    (start, stop); an empty block has stop = start - 1.  ``floor_points`` maps
    the label of the block a floor follows to the index fixing that floor.
    """

    blocks: dict[int, tuple[int, int]]
    floor_points: dict[int, int] = field(default_factory=dict)

    def indices(self, label: int) -> list[int]:
        a, b = self.blocks[label]
        return list(range(a, b + 1))

    def used(self) -> list[int]:
        out = [k for lab in self.blocks for k in self.indices(lab)]
        return sorted(out + list(self.floor_points.values()))


def _check_curve_index(spec: DegreeSpec, j: int):
    lo = 1 if spec.ambient is Ambient.P2 else 0
    if not lo <= j <= spec.d:
        raise ValueError(f"index j={j} outside {lo}..{spec.d} for {spec.label()}")


def allocate_curve_points(spec: DegreeSpec, j: int) -> dict[int, tuple[int, int]]:
    """Index range of every divisor D_i of a 1-nodal curve floor plan with index j."""
    if not spec.is_curve:
        raise ValueError("curve allocation needs a curve spec")
    _check_curve_index(spec, j)
    d = spec.d
    out = {}
    if spec.ambient is Ambient.P2:
        big = comb(d + 2, 2)
        for i in range(d, 0, -1):
            if i > j:
                out[i] = (big - comb(i + 2, 2) + 1, big - comb(i + 1, 2) - 1)
            elif i == j:
                out[i] = (big - comb(i + 2, 2) + 1, big - comb(i + 1, 2) - 2)
            else:
                out[i] = (big - comb(i + 2, 2), big - comb(i + 1, 2) - 2)
    else:
        e = spec.e
        for i in range(d, -1, -1):
            s = (d - i) * (e + 1)
            if i > j:
                out[i] = (s + 1, s + e)
            elif i == j:
                out[i] = (s + 1, s + e - 1)
            else:
                out[i] = (s, s + e - 1)
    return out


def _floor_gaps(blocks: dict[int, tuple[int, int]], n: int, labels) -> dict[int, int]:
    """Floor points are the indices left between consecutive blocks."""
    used = set()
    for a, b in blocks.values():
        used.update(range(a, b + 1))
    free = [k for k in range(1, n + 1) if k not in used]
    if len(free) != len(labels):
        raise AssertionError(f"expected {len(labels)} floor points, found {len(free)}")
    out = {}
    for lab, k in zip(labels, free):
        a, b = blocks[lab]
        if b >= a and k != b + 1:
            raise AssertionError("floor point does not follow its block")
        out[lab] = k
    return out


def curve_layout(spec: DegreeSpec, j: int) -> Layout:
    """Divisor blocks plus the floor point following each divisor."""
    blocks = allocate_curve_points(spec, j)
    labels = list(range(spec.d, 0, -1))  # floor after D_i for i = d..1 (both ambients)
    return Layout(blocks, _floor_gaps(blocks, spec.point_count(), labels))


def smooth_curve_layout(spec: DegreeSpec) -> Layout:
    """Layout of the smooth curve through all C(...)-1 points."""
    d = spec.d
    blocks, k = {}, 1
    if spec.ambient is Ambient.P2:
        sizes = {i: i for i in range(d, 0, -1)}
    else:
        sizes = {i: spec.e for i in range(d, -1, -1)}
    floors = {}
    for i in sorted(sizes, reverse=True):
        blocks[i] = (k, k + sizes[i] - 1)
        k += sizes[i]
        if i >= 1:
            floors[i] = k
            k += 1
    if k - 1 != spec.smooth_point_count():
        raise AssertionError("smooth layout does not use every point")
    return Layout(blocks, floors)


def surface_curve_labels(spec: DegreeSpec) -> list[int]:
    """Labels of the floor curves, in point order."""
    lo = 1 if spec.ambient is Ambient.P3 else 0
    return list(range(spec.d, lo - 1, -1))


def index_range(spec: DegreeSpec) -> tuple[int, int]:
    return (1 if spec.ambient is Ambient.P3 else 0, spec.d)


def check_indices(spec: DegreeSpec, indices) -> None:
    lo, hi = index_range(spec)
    idx = list(indices)
    for i in idx:
        if not lo <= i <= hi:
            raise ValueError(f"germ index {i} outside {lo}..{hi}")
    for a, b in zip(idx, idx[1:]):
        if b <= a + 1:
            raise ValueError(f"germ indices must be separated by at least 2, got {idx}")


def slice_size(spec: DegreeSpec) -> int | None:
    """Lattice points of one floor curve's polygon (None when it depends on i)."""
    if spec.ambient is Ambient.P1XP2:
        return comb(spec.e + 2, 2)
    if spec.ambient is Ambient.P1P1P1:
        return (spec.e + 1) * (spec.f + 1)
    return None


def allocate_surface_points(spec: DegreeSpec, delta: int, indices) -> dict[int, tuple[int, int]]:
    """Index range of every floor curve C_i of a delta-nodal surface floor plan."""
    if spec.is_curve:
        raise ValueError("surface allocation needs a surface spec")
    idx = sorted(indices)
    if len(idx) != delta:
        raise ValueError("need exactly delta germ indices")
    check_indices(spec, idx)
    d = spec.d
    bottom = 0 if spec.ambient is Ambient.P3 else -1
    bounds = [bottom] + idx + [d + 1]
    out = {}
    for i in surface_curve_labels(spec):
        # nu is fixed by i_{nu-1} < i <= i_nu
        nu = next(v for v in range(1, delta + 2) if bounds[v - 1] < i <= bounds[v])
        if spec.ambient is Ambient.P3:
            before = sum(comb(k + 2, 2) for k in range(i + 1, d + 1))
            upto = before + comb(i + 2, 2)
        else:
            size = slice_size(spec)
            before, upto = (d - i) * size, (d + 1 - i) * size
        start, stop = before - delta + nu, upto - 2 - delta + nu
        if i == bounds[nu] and i in idx:
            start += 1
        out[i] = (start, stop)
    return out


def surface_layout(spec: DegreeSpec, delta: int, indices) -> Layout:
    blocks = allocate_surface_points(spec, delta, indices)
    labels = [i for i in surface_curve_labels(spec) if i >= 1]
    return Layout(blocks, _floor_gaps(blocks, spec.point_count(delta), labels))


# ---------------------------------------------------------------------------
# sign vectors

PLUS, MINUS = 0, 1


@dataclass(frozen=True)
class SignVector:
    """Per-point signs as tuples over Z_2 (0 is +, 1 is -)."""

    signs: tuple[tuple[int, ...], ...]
    kind: str = "all_plus"
    theta: int | None = None

    def __len__(self):
        return len(self.signs)

    def __getitem__(self, k: int):
        """Sign of Q_k (1-based)."""
        return self.signs[k - 1]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "signs": ["".join("+-"[s] for s in t) for t in self.signs]}
        if self.theta is not None:
            out["theta"] = self.theta
        return out

    @classmethod
    def from_json(cls, obj) -> "SignVector":
        signs = tuple(tuple("+-".index(ch) for ch in t) for t in obj["signs"])
        return cls(signs, obj.get("kind", "all_plus"), obj.get("theta"))


def add_signs(a, b):
    return tuple((x + y) % 2 for x, y in zip(a, b))


def _block(size: int, eps, eps_prime):
    """One sign block: eps, eps, then alternating, last sign repeated."""
    out = []
    for p in range(1, size + 1):
        if p == 1:
            out.append(eps)
        elif p < size:
            out.append(eps if p % 2 == 0 else eps_prime)
        else:
            out.append(out[-1])
    return out


def special_theta(e: int, f: int) -> int:
    """The theta in {0,1} with ef + e + f + floor((e-1)/2) - theta even."""
    return (e * f + e + f + (e - 1) // 2) % 2


def special_negative_positions(d: int, e: int, f: int) -> list[int]:
    theta = special_theta(e, f)
    out = []
    for lam in range(0, (e - 1) // 2 - theta + 1):
        for mu in range(1, d - 1):
            out.append(f + 2 + 2 * lam * f + mu * (e + 1) * (f + 1))
    return sorted(out)


def build_sign_vector(spec: DegreeSpec, delta: int = 1, kind: str = "all_plus",
                      eps=(PLUS, PLUS), free=None) -> SignVector:
    """Deterministic sign vector of the requested kind.

    ``free`` optionally supplies the signs of the unconstrained positions of
    the curve block vector (the default repeats ``eps``).
    """
    kind = kind.replace("-", "_")
    if kind == "bertrand":
        kind = "bertrand_curve_blocks"
    if kind == "special":
        kind = "p1p1p1_special"
    width = 2 if spec.is_curve else 3
    n = spec.point_count(delta)
    if kind == "all_plus":
        return SignVector(tuple((PLUS,) * width for _ in range(n)), "all_plus")
    if kind == "bertrand_curve_blocks":
        if not spec.is_curve:
            raise ValueError("block sign vectors are defined for curves only")
        eps = tuple(eps)
        eps_prime = add_signs(eps, (1, 0))
        d = spec.d
        if spec.ambient is Ambient.P2:
            head, sizes, tail = d, list(range(d, 1, -1)), 0
        else:
            e = spec.e
            head, sizes, tail = e, [e + 1] * (d - 1), e
        free = list(free) if free is not None else [eps] * (head + tail)
        if len(free) != head + tail:
            raise ValueError(f"need {head + tail} free signs")
        signs = list(free[:head])
        for s in sizes:
            signs += _block(s, eps, eps_prime)
        signs += free[head:]
        if len(signs) != n:
            raise AssertionError("block vector has wrong length")
        return SignVector(tuple(tuple(s) for s in signs), "bertrand_curve_blocks")
    if kind == "p1p1p1_special":
        if spec.ambient is not Ambient.P1P1P1:
            raise ValueError("the special sign vector is defined for P1xP1xP1 only")
        d, e, f = spec.params
        neg = set(special_negative_positions(d, e, f))
        signs = tuple((PLUS, PLUS, MINUS if r in neg else PLUS) for r in range(1, n + 1))
        return SignVector(signs, "p1p1p1_special", special_theta(e, f))
    raise ValueError(f"unknown sign vector kind {kind!r}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
