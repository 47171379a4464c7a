"""Fast counting over separated germ indices.

A delta-nodal count is the sum, over index tuples i_1 < ... < i_delta with gaps
of at least two, of the product of per-index germ weights W(i).  Weights come
either from the explicit germ lists or from closed forms of the same sums
(checked against each other in the tests); the sum itself is a prefix-sum DP.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .model import Ambient, DegreeSpec, SignVector, special_theta
from .surface_floorplans import (RealPreconditionError, check_real_preconditions, germ_mult_complex,
                                 germ_mult_real, germs_at)

TYPE_OF_KIND = {
    "parallelogram_a": 1, "parallelogram_b": 1, "weight2_midpoint": 1,
    "weight2_end": 2, "left_string": 3, "right_string": 3,
}


@dataclass
class WeightTable:
    ambient: Ambient
    field: str
    params: tuple[int, ...]
    lo: int
    hi: int
    parts: dict[int, tuple[int, int, int]] = field(default_factory=dict)
    method: str = "fast"

    def row(self, i: int) -> int:
        return sum(self.parts[i])

    def rows(self) -> dict[int, int]:
        return {i: self.row(i) for i in range(self.lo, self.hi + 1)}

    def to_json(self) -> dict:
        return {"ambient": self.ambient.value, "field": self.field, "params": list(self.params),
                "lo": self.lo, "hi": self.hi, "method": self.method,
                "rows": {str(i): list(self.parts[i]) for i in range(self.lo, self.hi + 1)}}

    @classmethod
    def from_json(cls, obj) -> "WeightTable":
        parts = {int(i): tuple(v) for i, v in obj["rows"].items()}
        return cls(Ambient(obj["ambient"]), obj["field"], tuple(obj["params"]), obj["lo"],
                   obj["hi"], parts, obj.get("method", "fast"))


# ---------------------------------------------------------------------------
# closed forms of the per-index germ sums


def _count_parity(lo: int, hi: int, parity: int) -> int:
    """Integers n in [lo, hi] with n % 2 == parity."""
    if hi < lo:
        return 0
    first = lo if lo % 2 == parity else lo + 1
    return 0 if first > hi else (hi - first) // 2 + 1


def _horizontal_targets(m: int, parity: int) -> int:
    """Horizontal bounded edges (k, l) of a smooth degree-m curve with k % 2 == parity."""
    # column k has m - k such edges, k = 1..m-1
    return sum(m - k for k in range(1, m) if k % 2 == parity)


@lru_cache(maxsize=None)
def _p3_real_parallelograms(i: int) -> int:
    """Alignment placements of a degree-i host with real multiplicity 2."""
    if i < 2:
        return 0
    c = i - 1
    total = 0
    if i % 2:
        good = (c // 2) % 2 == 1
        if not good:
            return 0
        # every placement counts
        return sum(j + 1 for j in range(1, i)) + sum(j - 1 for j in range(2, i + 1))
    base_a = (3 * i + 2) // 2
    for j in range(1, i):  # A(k, l): k = i - j, l = 0..j
        k = i - j
        total += _count_parity(0, j, (1 - base_a - k) % 2)
    base_b = (i + 2) // 2
    for j in range(2, i + 1):  # B(k, l): l = 0..j-2
        total += _count_parity(0, j - 2, (1 - base_b) % 2)
    return total


def fast_parts(spec: DegreeSpec, i: int, field: str = "complex",
               signs: SignVector | None = None) -> tuple[int, int, int]:
    """(type 1, type 2, type 3) germ sums at index i, in closed form."""
    amb = spec.ambient
    d = spec.d
    if amb is Ambient.P3:
        lo = 1
        bottom, top = i == lo, i == d
        if field == "complex":
            w1 = 0 if top else 6 * (i - 1) ** 2
            w2 = (0 if top else 2 * (i - 1) * (i + 1)) + 2 * (i - 1) ** 2
            w3 = (0 if top else i * (i + 1))
            if i >= 2:
                w3 += 2 * (i - 2) + (i - 2) * (i - 3)
            return w1, w2, w3
        w1 = 0 if top else 2 * _p3_real_parallelograms(i)
        w2 = 2 * (i - 1) ** 2
        w3 = 0 if top else 2 * _horizontal_targets(i + 1, i % 2)
        if i >= 2:
            w3 += (i - 2) * (i - 3)
        return w1, w2, w3
    if amb is Ambient.P1XP2:
        e = spec.e
        bottom, top = i == 0, i == d
        interior = not bottom and not top
        align = 3 * (e - 1) ** 2 - 2 * (e - 1) * (e - 2)  # alignment plans of the host
        if field == "complex":
            w1 = 6 * (e - 1) ** 2 if interior else 0
            w2 = (0 if top else 2 * e * (e - 1)) + (0 if bottom else 2 * e * (e - 1))
            w3 = (0 if top else e * (e - 1)) + (0 if bottom else 2 * (e - 1) + (e - 1) * (e - 2))
            return w1, w2, w3
        w1 = 2 * align if interior else 0
        w2 = 0 if bottom else 2 * e * (e - 1)
        w3 = (0 if top else 2 * _horizontal_targets(e, i % 2)) + \
            (0 if bottom else (e - 1) * (e - 2))
        return w1, w2, w3
    if amb is Ambient.P1P1P1:
        e, f = spec.e, spec.f
        bottom, top = i == 0, i == d
        interior = not bottom and not top
        sides = (0 if top else 1) + (0 if bottom else 1)
        if field == "complex":
            w1 = 2 * (6 * e * f - 4 * e - 4 * f + 4) if interior else 0
            w2 = sides * (2 * e * (f - 1) + 2 * f * (e - 1))
            w3 = sides * 2 * e * f
            return w1, w2, w3
        theta = signs.theta if signs is not None and signs.theta is not None else special_theta(e, f)
        bound = 2 * ((e - 1) // 2) - 2 * theta + 1
        w1 = 4 * e * f if interior else 0
        w2 = sides * 2 * f * max(0, min(e - 1, bound))
        even_cols = _count_parity(1, e - 1, f % 2)  # horizontal edge columns with f + k even
        left = 2 * f * (even_cols + (1 if (f + e) % 2 == 0 else 0))
        right = 2 * f * (even_cols + (1 if f % 2 == 0 else 0))
        w3 = (0 if top else left) + (0 if bottom else right)
        return w1, w2, w3
    raise ValueError("surface spec expected")


def enumerated_parts(spec: DegreeSpec, i: int, field: str = "complex",
                     signs: SignVector | None = None) -> tuple[int, int, int]:
    """(type 1, type 2, type 3) germ sums at index i from the explicit germ list."""
    parts = [0, 0, 0]
    for g in germs_at(spec, i):
        m = germ_mult_complex(spec, g) if field == "complex" else germ_mult_real(spec, g, signs)
        parts[TYPE_OF_KIND[g.kind] - 1] += m
    return tuple(parts)


def build_weight_table(spec: DegreeSpec, field: str = "complex", signs: SignVector | None = None,
                       method: str = "fast") -> WeightTable:
    """Per-index germ sums for every index of the spec."""
    if field not in ("complex", "real"):
        raise ValueError("field must be complex or real")
    if field == "real":
        check_real_preconditions(spec, signs)
    lo = 1 if spec.ambient is Ambient.P3 else 0
    fn = fast_parts if method == "fast" else enumerated_parts
    if method not in ("fast", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    parts = {i: fn(spec, i, field, signs) for i in range(lo, spec.d + 1)}
    return WeightTable(spec.ambient, field, spec.params, lo, spec.d, parts, method)


# ---------------------------------------------------------------------------
# the DP


def dp_count(table: WeightTable, delta: int, rows=None) -> int:
    """Sum over index tuples with gaps >= 2 of the product of row weights.

    ``rows`` optionally gives one weight function per position (used for the
    per-type decomposition); by default every position uses W.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    lo, hi = table.lo, table.hi
    if delta == 0:
        return 1
    if rows is None:
        w = table.rows()
        rows = [w] * delta
    # cur[i] = sum over tuples of the first t positions ending exactly at i
    cur = {i: rows[0][i] for i in range(lo, hi + 1)}
    for t in range(1, delta):
        nxt = {}
        prefix = 0
        for i in range(lo, hi + 1):
            if i - 2 >= lo:
                prefix += cur[i - 2]
            nxt[i] = prefix * rows[t][i]
        cur = nxt
    return sum(cur.values())


def dp_count_by_types(table: WeightTable, delta: int) -> dict[tuple[int, int, int], int]:
    """Split the count by how many germs of each type a plan carries."""
    typed = [{i: table.parts[i][t] for i in range(table.lo, table.hi + 1)} for t in range(3)]
    out: dict[tuple[int, int, int], int] = {}
    for seq in itertools.product(range(3), repeat=delta):
        key = tuple(seq.count(t) for t in range(3))
        out[key] = out.get(key, 0) + dp_count(table, delta, [typed[t] for t in seq])
    return out


# ---------------------------------------------------------------------------
# leading terms


LEADING = {
    (Ambient.P3, "complex"): Fraction(4),
    (Ambient.P3, "real"): Fraction(3, 2),
    (Ambient.P1XP2, "complex"): Fraction(12),
    (Ambient.P1XP2, "real"): Fraction(11, 2),
    (Ambient.P1P1P1, "complex"): Fraction(24),
    (Ambient.P1P1P1, "real"): Fraction(10),
}

# leading coefficients of the per-index type-1/2/3 sums, and the scale picked up
# when summing over indices (a power sum of i^2 in P3, a plain count otherwise)
TYPE_FACTORS = {
    (Ambient.P3, "complex"): ((6, 4, 2), Fraction(1, 3)),
    (Ambient.P3, "real"): ((1, 2, Fraction(3, 2)), Fraction(1, 3)),
    (Ambient.P1XP2, "complex"): ((6, 4, 2), Fraction(1)),
    (Ambient.P1XP2, "real"): ((2, 2, Fraction(3, 2)), Fraction(1)),
    (Ambient.P1P1P1, "complex"): ((12, 8, 4), Fraction(1)),
    (Ambient.P1P1P1, "real"): ((4, 4, 2), Fraction(1)),
}


def _key(ambient, field):
    amb = Ambient(ambient)
    if (amb, field) not in LEADING:
        raise ValueError(f"no asymptotic statement for {amb.value}/{field}")
    return amb, field


def leading_term(ambient, field: str, delta: int, params=None):
    """(coefficient, monomial exponents) of the leading term; with ``params``
    also the exact value of the leading term."""
    amb, field = _key(ambient, field)
    coeff = LEADING[(amb, field)] ** delta / factorial(delta)
    expo = {Ambient.P3: {"d": 3 * delta}, Ambient.P1XP2: {"d": delta, "e": 2 * delta},
            Ambient.P1P1P1: {"d": delta, "e": delta, "f": delta}}[amb]
    if params is None:
        return coeff, expo
    return coeff, expo, coeff * monomial(amb, params) ** delta


def monomial(ambient: Ambient, params) -> int:
    if ambient is Ambient.P3:
        return params[0] ** 3
    if ambient is Ambient.P1XP2:
        return params[0] * params[1] ** 2
    return params[0] * params[1] * params[2]


def faulhaber(d: int, p: int) -> int:
    """Exact power sum 1^p + ... + d^p via Bernoulli numbers."""
    if d < 0 or p < 0:
        raise ValueError("d and p must be nonnegative")
    if d == 0:
        return 0
    bern = _bernoulli(p)
    from math import comb

    s = sum(comb(p + 1, j) * bern[j] * Fraction(d) ** (p + 1 - j) for j in range(p + 1))
    # the B_1 = +1/2 convention gives the sum up to d directly
    out = s / (p + 1)
    if out.denominator != 1:
        raise AssertionError("power sum is not an integer")
    return int(out)


@lru_cache(maxsize=None)
def _bernoulli(p: int):
    from math import comb

    b = [Fraction(1)]
    for m in range(1, p + 1):
        b.append(-sum(comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    if p >= 1:
        b[1] = Fraction(1, 2)
    return b


def partition_identity(ambient, field: str, delta: int) -> Fraction:
    """Sum over ordered partitions (d1, d2, d3) of delta of
    prod_t (scale * c_t)^{d_t} / d_t!, with the per-type leading factors c_t."""
    amb, field = _key(ambient, field)
    factors, scale = TYPE_FACTORS[(amb, field)]
    total = Fraction(0)
    for d1 in range(delta + 1):
        for d2 in range(delta - d1 + 1):
            d3 = delta - d1 - d2
            term = Fraction(1)
            for c, k in zip(factors, (d1, d2, d3)):
                term *= (scale * c) ** k / factorial(k)
            total += term
    return total


# ---------------------------------------------------------------------------
# convergence


def scaled_spec(ambient, n: int) -> DegreeSpec:
    """The spec with every degree parameter equal to n."""
    amb = Ambient(ambient)
    return DegreeSpec(amb, (n,) * amb.arity)


def signs_for(spec: DegreeSpec, field: str) -> SignVector | None:
    """The sign vector a real count of this ambient uses (only its kind and theta matter)."""
    if field != "real":
        return None
    if spec.ambient is Ambient.P1P1P1:
        return SignVector((), "p1p1p1_special", special_theta(spec.e, spec.f))
    return SignVector((), "all_plus")


@dataclass
class ConvergenceRow:
    params: tuple[int, ...]
    count: int
    leading: Fraction
    ratio: Fraction

    @property
    def deviation(self) -> float:
        return abs(float(self.ratio) - 1.0)


@dataclass
class ConvergenceReport:
    ambient: Ambient
    field: str
    delta: int
    rows: list[ConvergenceRow]

    @property
    def monotone(self) -> bool:
        devs = [abs(r.ratio - 1) for r in self.rows]
        return all(b < a for a, b in zip(devs, devs[1:]))

    @property
    def final_deviation(self) -> float:
        return self.rows[-1].deviation if self.rows else float("nan")

    def to_csv_rows(self):
        for r in self.rows:
            yield [self.ambient.value, self.field, self.delta, *r.params, r.count,
                   str(r.leading), f"{float(r.ratio):.12f}"]


def convergence_report(ambient, field: str, delta: int, grid, params_fn=None,
                       table_fn=None) -> ConvergenceReport:
    """Ratios N / leading term along a grid of sizes.

    By default every degree parameter equals the grid value; ``params_fn``
    maps a grid value to an explicit parameter tuple.  ``table_fn(spec, field)``
    may supply weight tables (e.g. from a cache).
    """
    amb, field = _key(ambient, field)
    rows = []
    for n in grid:
        params = params_fn(n) if params_fn else (n,) * amb.arity
        spec = DegreeSpec(amb, tuple(params))
        if table_fn is not None:
            table = table_fn(spec, field)
        else:
            table = build_weight_table(spec, field, signs_for(spec, field))
        count = dp_count(table, delta)
        _, _, lead = leading_term(amb, field, delta, spec.params)
        rows.append(ConvergenceRow(spec.params, count, lead, Fraction(count) / lead))
    return ConvergenceReport(amb, field, delta, rows)


__all__ = [
    "WeightTable", "build_weight_table", "dp_count", "dp_count_by_types", "fast_parts",
    "enumerated_parts", "leading_term", "faulhaber", "partition_identity", "convergence_report",
    "ConvergenceReport", "RealPreconditionError", "TYPE_FACTORS", "LEADING",
]
