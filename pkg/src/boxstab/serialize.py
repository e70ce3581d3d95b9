"""Exact JSON serialization for families, sequences and certificates.

Rationals travel as strings: "p" or "p/q", and decimal literals are accepted
on input and converted exactly ("0.1" becomes 1/10, never a binary float).
JSON number literals are intercepted before float conversion for the same
reason.  Emitted documents are canonical (sorted keys, fixed indentation) so
byte-identical runs produce byte-identical files, and `parse(emit(x)) == x`
for every document and certificate type.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Optional, Union

from .core import AxisFlat, Box, Family, FamilySequence, Interval, Strip
from .counterexample import NestingWitness
from .scattered import RainbowCert, ScatteredCert, StripRefinement
from .transversal import TransversalCert

Certificate = Union[TransversalCert, ScatteredCert, RainbowCert, NestingWitness, StripRefinement]


class DocumentError(ValueError):
    """Malformed input document; `where` points at the offending field."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def rational_to_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_from_json(value: Any, where: str = "value") -> Fraction:
    """Exact rational from a JSON scalar: int, "p/q", or decimal string."""
    if isinstance(value, bool):
        raise DocumentError("expected a rational, got a boolean", where)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"not a rational literal: {value!r} ({exc})", where) from None
    if isinstance(value, float):
        raise DocumentError("binary float is not exact; use a string literal", where)
    raise DocumentError(f"expected a rational, got {type(value).__name__}", where)


def _loads(text: str) -> Any:
    def reject_constant(name: str):
        raise DocumentError(f"non-finite number {name} is not allowed")

    try:
        return json.loads(text, parse_float=Fraction, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _expect(doc: Any, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise DocumentError(f"expected an object, got {type(doc).__name__}", where)
    if key not in doc:
        raise DocumentError(f"missing field {key!r}", where)
    return doc[key]


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def _box_from_doc(doc: Any, d: int, where: str) -> Box:
    mins = _expect(doc, "min", where)
    maxs = _expect(doc, "max", where)
    if not isinstance(mins, list) or not isinstance(maxs, list):
        raise DocumentError("min and max must be arrays", where)
    if len(mins) != d or len(maxs) != d:
        raise DocumentError(f"expected {d} coordinates, got {len(mins)} and {len(maxs)}", where)
    sides = []
    for axis, (lo, hi) in enumerate(zip(mins, maxs), start=1):
        lo_q = rational_from_json(lo, f"{where}.min[{axis}]")
        hi_q = rational_from_json(hi, f"{where}.max[{axis}]")
        if lo_q > hi_q:
            raise DocumentError(f"min {lo_q} exceeds max {hi_q}", f"{where}, axis {axis}")
        sides.append(Interval(lo_q, hi_q))
    return Box(tuple(sides))


def _box_to_doc(b: Box) -> dict:
    return {
        "min": [rational_to_str(s.lo) for s in b.sides],
        "max": [rational_to_str(s.hi) for s in b.sides],
    }


def _family_from_doc(doc: Any, where: str) -> Family:
    d = _expect(doc, "d", where)
    if not isinstance(d, int) or d < 1:
        raise DocumentError("d must be a positive integer", where)
    boxes_doc = _expect(doc, "boxes", where)
    if not isinstance(boxes_doc, list):
        raise DocumentError("boxes must be an array", where)
    boxes = tuple(
        _box_from_doc(bd, d, f"{where}.boxes[{i}]") for i, bd in enumerate(boxes_doc, start=1)
    )
    labels = None
    if "labels" in doc and doc["labels"] is not None:
        raw = doc["labels"]
        if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
            raise DocumentError("labels must be an array of strings", where)
        if len(raw) != len(boxes):
            raise DocumentError(f"{len(raw)} labels for {len(boxes)} boxes", where)
        labels = tuple(raw)
    return Family(d, boxes, labels)


def parse_family(text: str) -> Family:
    return _family_from_doc(_loads(text), "family")


def family_to_doc(family: Family) -> dict:
    doc: dict[str, Any] = {
        "d": family.dim,
        "boxes": [_box_to_doc(b) for b in family.boxes],
    }
    if family.labels is not None:
        doc["labels"] = list(family.labels)
    return doc


def emit_family(family: Family, approx_decimals: Optional[int] = None) -> str:
    doc = family_to_doc(family)
    if approx_decimals is not None:
        doc = _with_approximations(doc, approx_decimals)
    return _dumps(doc)


def parse_sequence(text: str) -> FamilySequence:
    doc = _loads(text)
    d = _expect(doc, "d", "sequence")
    fams_doc = _expect(doc, "families", "sequence")
    if not isinstance(fams_doc, list) or not fams_doc:
        raise DocumentError("families must be a nonempty array", "sequence")
    families = []
    for i, fd in enumerate(fams_doc, start=1):
        if isinstance(fd, dict) and "d" not in fd:
            fd = dict(fd, d=d)
        families.append(_family_from_doc(fd, f"sequence.families[{i}]"))
    return FamilySequence(tuple(families))


def emit_sequence(seq: FamilySequence) -> str:
    doc = {
        "d": seq.dim,
        "families": [
            {k: v for k, v in family_to_doc(f).items() if k != "d"} for f in seq.families
        ],
    }
    return _dumps(doc)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def _flat_to_doc(f: AxisFlat) -> dict:
    return {"fixed": {str(a): rational_to_str(v) for a, v in f.fixed}}


def _flat_from_doc(doc: Any, dim: int, where: str) -> AxisFlat:
    fixed_doc = _expect(doc, "fixed", where)
    if not isinstance(fixed_doc, dict):
        raise DocumentError("fixed must be an object", where)
    fixed = []
    for axis_str, value in fixed_doc.items():
        try:
            axis = int(axis_str)
        except ValueError:
            raise DocumentError(f"axis key {axis_str!r} is not an integer", where) from None
        fixed.append((axis, rational_from_json(value, f"{where}.fixed[{axis_str}]")))
    return AxisFlat(dim, tuple(fixed))


def _strip_to_doc(s: Strip) -> dict:
    if s.sides is None:
        return {"dim": s.dim, "sides": None}
    return {
        "dim": s.dim,
        "sides": [
            None if side is None else [rational_to_str(side.lo), rational_to_str(side.hi)]
            for side in s.sides
        ],
    }


def _strip_from_doc(doc: Any, where: str) -> Strip:
    dim = _expect(doc, "dim", where)
    sides_doc = _expect(doc, "sides", where)
    if sides_doc is None:
        return Strip.empty(dim)
    sides = []
    for i, sd in enumerate(sides_doc, start=1):
        if sd is None:
            sides.append(None)
        else:
            sides.append(Interval(
                rational_from_json(sd[0], f"{where}.sides[{i}][0]"),
                rational_from_json(sd[1], f"{where}.sides[{i}][1]"),
            ))
    return Strip(dim, tuple(sides))


def certificate_to_doc(cert: Certificate) -> dict:
    if isinstance(cert, TransversalCert):
        dim = cert.flats[0].dim if cert.flats else 0
        return {
            "type": "transversal_cert",
            "d": dim,
            "k": cert.k,
            "flats": [_flat_to_doc(f) for f in cert.flats],
            "assignment": {str(b): f for b, f in sorted(cert.assignment.items())},
            "optimal": cert.optimal,
            "budget_exhausted": cert.budget_exhausted,
        }
    if isinstance(cert, ScatteredCert):
        evidence = None
        if cert.evidence is not None:
            evidence = {f"{i},{j}": c for (i, j), c in sorted(cert.evidence.items())}
        return {
            "type": "scattered_cert",
            "k": cert.k,
            "indices": list(cert.indices),
            "evidence": evidence,
            "optimal": cert.optimal,
            "budget_exhausted": cert.budget_exhausted,
        }
    if isinstance(cert, RainbowCert):
        return {
            "type": "rainbow_cert",
            "k": cert.k,
            "picks": [[n, i] for n, i in cert.picks],
        }
    if isinstance(cert, NestingWitness):
        return {
            "type": "nesting_witness",
            "input_box": _box_to_doc(cert.input_box),
            "epsilon": rational_to_str(cert.epsilon),
            "n_prime": cert.n_prime,
            "r": cert.r,
            "point": [rational_to_str(q) for q in cert.point],
            "bounding": _box_to_doc(cert.bounding),
        }
    if isinstance(cert, StripRefinement):
        return {
            "type": "strip_refinement",
            "trace": [
                {"strip": _strip_to_doc(s), "heavy_size": size} for s, size in cert.trace
            ],
            "bounded_axes": sorted(cert.bounded_axes),
            "estimates": {str(a): rational_to_str(v) for a, v in sorted(cert.estimates.items())},
            "depth": cert.depth,
            "budget_exhausted": cert.budget_exhausted,
        }
    raise TypeError(f"cannot serialize {type(cert).__name__}")


def emit_certificate(cert: Certificate, approx_decimals: Optional[int] = None) -> str:
    """Canonical JSON for a certificate.  `approx_decimals` adds display-only
    decimal companions next to rational fields; they are never read back."""
    doc = certificate_to_doc(cert)
    if approx_decimals is not None:
        doc = _with_approximations(doc, approx_decimals)
    return _dumps(doc)


def parse_certificate(text: str) -> Certificate:
    doc = _loads(text)
    kind = _expect(doc, "type", "certificate")
    where = f"certificate({kind})"
    if kind == "transversal_cert":
        dim = _expect(doc, "d", where)
        flats = tuple(
            _flat_from_doc(fd, dim, f"{where}.flats[{i}]")
            for i, fd in enumerate(_expect(doc, "flats", where), start=1)
        )
        assignment = {
            int(b): int(f) for b, f in _expect(doc, "assignment", where).items()
        }
        return TransversalCert(
            _expect(doc, "k", where), flats, assignment,
            optimal=bool(doc.get("optimal", False)),
            budget_exhausted=bool(doc.get("budget_exhausted", False)),
        )
    if kind == "scattered_cert":
        evidence_doc = doc.get("evidence")
        evidence = None
        if evidence_doc is not None:
            evidence = {}
            for key, count in evidence_doc.items():
                i, j = key.split(",")
                evidence[(int(i), int(j))] = int(count)
        return ScatteredCert(
            _expect(doc, "k", where),
            tuple(int(i) for i in _expect(doc, "indices", where)),
            evidence,
            optimal=bool(doc.get("optimal", False)),
            budget_exhausted=bool(doc.get("budget_exhausted", False)),
        )
    if kind == "rainbow_cert":
        return RainbowCert(
            _expect(doc, "k", where),
            tuple((int(n), int(i)) for n, i in _expect(doc, "picks", where)),
        )
    if kind == "nesting_witness":
        input_box = _box_from_doc(_expect(doc, "input_box", where),
                                  len(_expect(doc, "point", where)), f"{where}.input_box")
        return NestingWitness(
            input_box,
            rational_from_json(_expect(doc, "epsilon", where), f"{where}.epsilon"),
            int(_expect(doc, "n_prime", where)),
            int(_expect(doc, "r", where)),
            tuple(
                rational_from_json(q, f"{where}.point[{i}]")
                for i, q in enumerate(doc["point"], start=1)
            ),
            _box_from_doc(_expect(doc, "bounding", where), input_box.dim, f"{where}.bounding"),
        )
    if kind == "strip_refinement":
        trace = tuple(
            (_strip_from_doc(td["strip"], f"{where}.trace[{i}]"), int(td["heavy_size"]))
            for i, td in enumerate(_expect(doc, "trace", where), start=1)
        )
        return StripRefinement(
            trace,
            frozenset(int(a) for a in _expect(doc, "bounded_axes", where)),
            {
                int(a): rational_from_json(v, f"{where}.estimates[{a}]")
                for a, v in _expect(doc, "estimates", where).items()
            },
            int(_expect(doc, "depth", where)),
            budget_exhausted=bool(doc.get("budget_exhausted", False)),
        )
    raise DocumentError(f"unknown certificate type {kind!r}")


def _dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _is_rational_str(value: Any) -> bool:
    return isinstance(value, str) and bool(_RATIONAL_RE.match(value))


def _with_approximations(node: Any, nd: int) -> Any:
    if isinstance(node, dict):
        out = {}
        for key, value in node.items():
            out[key] = _with_approximations(value, nd)
            if _is_rational_str(value):
                out[f"{key}_approx"] = round(float(Fraction(value)), nd)
            elif isinstance(value, list) and value and all(_is_rational_str(v) for v in value):
                out[f"{key}_approx"] = [round(float(Fraction(v)), nd) for v in value]
        return out
    if isinstance(node, list):
        return [_with_approximations(v, nd) for v in node]
    return node
