"""Deterministic box-stream generators and the dichotomy harness.

`dichotomy_run` streams growing prefixes of a generated family and records,
per checkpoint, the greedy scattered size, the exact piercing number while
the prefix is within the exact-solver cap, the greedy transversal size and
the heaviness flag.  Either the transversal columns stay bounded as the
prefix grows or the scattered column grows with it; the report rows make the
trade visible and weak duality (scattered <= tau) is asserted on every row,
not merely observed.

Reports serialize to CSV and JSON with rationals as "p/q" strings; repeated
runs with the same spec are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import Box, Family, Interval, check_k, rat
from .counterexample import counterexample_box
from .scattered import greedy_scattered
from .transversal import exact_cap, greedy_transversal, is_t_heavy, min_transversal

GENERATOR_KINDS = ("staircase", "bounded_tau", "accumulation", "counterexample_union", "custom")


@dataclass(frozen=True, slots=True)
class GeneratorSpec:
    """Deterministic stream description.

    kind:
      staircase            - [2i, 2i+1]^d, pairwise non-co-stabbable at any k
      bounded_tau          - every box stabbed by one of `tau_star` fixed
                             level-k flats (seeded jitter elsewhere)
      accumulation         - on `accum_axes` the sides [c - 2^-i, c - 2^-i-1]
                             shrink toward `accum_point`; other axes drift
                             as [i, i+1]
      counterexample_union - members (n, m), n <= n_max, m <= m_max, in
                             (n, m) order
      custom               - a caller-supplied family, streamed in order
    """

    kind: str
    d: int
    k: int = 0
    seed: int = 0
    tau_star: Optional[int] = None
    accum_point: Fraction = Fraction(1)
    accum_axes: tuple[int, ...] = (1,)
    n_max: Optional[int] = None
    m_max: Optional[int] = None
    boxes: Optional[tuple[Box, ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; choose from {GENERATOR_KINDS}")
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "accum_point", rat(self.accum_point))
        object.__setattr__(self, "accum_axes", tuple(self.accum_axes))


def generate(spec: GeneratorSpec, count: int) -> list[Box]:
    """First `count` boxes of the stream; deterministic given the spec."""
    if count < 0:
        raise ValueError("count must be >= 0")
    d = spec.d
    if spec.kind == "staircase":
        return [
            Box(tuple(Interval(2 * i, 2 * i + 1) for _ in range(d)))
            for i in range(1, count + 1)
        ]

    if spec.kind == "bounded_tau":
        if not spec.tau_star or spec.tau_star < 1:
            raise ValueError("bounded_tau needs tau_star >= 1")
        check_k(spec.k, d)
        fixed_axes = tuple(range(1, d - spec.k + 1))
        rng = random.Random(spec.seed)
        out = []
        for i in range(count):
            anchor = 10 * ((i % spec.tau_star) + 1)
            sides = []
            for axis in range(1, d + 1):
                if axis in fixed_axes:
                    left = Fraction(rng.randrange(1, 5), rng.randrange(1, 5))
                    right = Fraction(rng.randrange(1, 5), rng.randrange(1, 5))
                    sides.append(Interval(anchor - left, anchor + right))
                else:
                    lo = Fraction(rng.randrange(-20, 20), rng.randrange(1, 4))
                    sides.append(Interval(lo, lo + Fraction(rng.randrange(1, 6), 2)))
            out.append(Box(tuple(sides)))
        return out

    if spec.kind == "accumulation":
        for a in spec.accum_axes:
            if not 1 <= a <= d:
                raise ValueError(f"accumulation axis {a} out of range 1..{d}")
        c = spec.accum_point
        out = []
        for i in range(1, count + 1):
            sides = []
            for axis in range(1, d + 1):
                if axis in spec.accum_axes:
                    sides.append(Interval(c - Fraction(1, 2 ** i), c - Fraction(1, 2 ** (i + 1))))
                else:
                    sides.append(Interval(i, i + 1))
            out.append(Box(tuple(sides)))
        return out

    if spec.kind == "counterexample_union":
        if not spec.n_max or not spec.m_max:
            raise ValueError("counterexample_union needs n_max and m_max")
        stream = [
            counterexample_box(n, m, d)
            for n in range(1, spec.n_max + 1)
            for m in range(1, spec.m_max + 1)
        ]
        return stream[:count]

    if spec.boxes is None:
        raise ValueError("custom generator needs boxes")
    return list(spec.boxes[:count])


@dataclass(frozen=True, slots=True)
class DichotomyRow:
    prefix: int
    scattered_greedy: int
    tau_exact: Optional[int]
    tau_greedy: int
    heavy: Optional[bool]


@dataclass(frozen=True, slots=True)
class DichotomyReport:
    spec: GeneratorSpec
    k: int
    t: int
    steps: int
    exact_cap: int
    rows: tuple[DichotomyRow, ...] = field(default_factory=tuple)


def checkpoints(steps: int) -> list[int]:
    """Every prefix up to 50, then doubling, always ending at `steps`."""
    points = list(range(1, min(steps, 50) + 1))
    nxt = 64
    while nxt < steps:
        points.append(nxt)
        nxt *= 2
    if steps > 50:
        points.append(steps)
    return points


def dichotomy_run(
    spec: GeneratorSpec,
    k: int,
    steps: int,
    t: int,
    cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> DichotomyReport:
    """One row per checkpoint prefix.  Exact columns are computed only while
    the prefix is within the solver cap and are left unknown (None) past it
    or when the node budget gives out; nothing is fabricated."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    check_k(k, spec.d)
    stream = generate(spec, steps)
    cap = exact_cap(k, spec.d) if cap is None else cap
    rows = []
    for prefix in checkpoints(steps):
        boxes = stream[:prefix]
        family = Family(spec.d, tuple(boxes))
        scattered_size = len(greedy_scattered(boxes, k).indices)
        tau_greedy = len(greedy_transversal(family, k).flats)
        tau_exact: Optional[int] = None
        heavy: Optional[bool] = None
        if prefix <= cap:
            kwargs = {} if budget is None else {"budget": budget}
            cert = min_transversal(family, k, cap=cap, **kwargs)
            if cert.optimal:
                tau_exact = len(cert.flats)
            report = is_t_heavy(family, k, t, **kwargs)
            heavy = report.heavy
        if tau_exact is not None:
            assert scattered_size <= tau_exact, "weak duality violated"
        assert scattered_size <= tau_greedy, "weak duality violated against greedy cover"
        rows.append(DichotomyRow(prefix, scattered_size, tau_exact, tau_greedy, heavy))
    return DichotomyReport(spec, k, t, steps, cap, tuple(rows))


CSV_COLUMNS = ("prefix", "scattered_greedy", "tau_exact", "tau_greedy", "heavy")


def _cell(value) -> str:
    if value is None:
        return "unknown"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def report_to_csv(report: DichotomyReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow([
            _cell(row.prefix),
            _cell(row.scattered_greedy),
            _cell(row.tau_exact),
            _cell(row.tau_greedy),
            _cell(row.heavy),
        ])
    return out.getvalue()


def _spec_to_json(spec: GeneratorSpec) -> dict:
    doc = {"kind": spec.kind, "d": spec.d, "k": spec.k, "seed": spec.seed}
    if spec.tau_star is not None:
        doc["tau_star"] = spec.tau_star
    if spec.kind == "accumulation":
        doc["accum_point"] = f"{spec.accum_point.numerator}/{spec.accum_point.denominator}"
        doc["accum_axes"] = list(spec.accum_axes)
    if spec.n_max is not None:
        doc["n_max"] = spec.n_max
    if spec.m_max is not None:
        doc["m_max"] = spec.m_max
    return doc


def report_to_json(report: DichotomyReport) -> str:
    doc = {
        "type": "dichotomy_report",
        "spec": _spec_to_json(report.spec),
        "k": report.k,
        "t": report.t,
        "steps": report.steps,
        "exact_cap": report.exact_cap,
        "rows": [
            {
                "prefix": r.prefix,
                "scattered_greedy": r.scattered_greedy,
                "tau_exact": r.tau_exact,
                "tau_greedy": r.tau_greedy,
                "heavy": r.heavy,
            }
            for r in report.rows
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
