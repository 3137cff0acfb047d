"""
Symbol files: a JSON document

    {"dim": d, "role": "symbol" | "field" | "conjugation-K",
     "terms": [{"n": int, "re": array, "im": array}, ...]}

``re``/``im`` are ``d x d`` nested lists (``symbol``, ``conjugation-K``) or
length-``d`` lists (``field``).  ``role`` defaults to ``symbol``.  A
``conjugation-K`` file holds one term at ``n = 0``.  Indices may not repeat.
Serialization sorts terms by index and writes floats with ``repr``
precision, so ``parse(serialize(x))`` reproduces ``x`` exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..antilinear import PointConjugation
from ..circfield import CircleField, OperatorSymbol

ROLES = ("symbol", "field", "conjugation-K")


class SymbolFileError(ValueError):
    """Malformed symbol file; ``position`` is ``line:col`` or a JSON path."""

    def __init__(self, message: str, position: str):
        super().__init__(f"{position}: {message}")
        self.position = position


@dataclass(frozen=True, eq=False)
class SymbolSpecFile:
    dim: int
    terms: dict
    role: str = "symbol"

    def to_symbol(self) -> OperatorSymbol:
        if self.role == "field":
            raise TypeError("file holds a field, not a symbol")
        return OperatorSymbol.from_terms(self.dim, self.terms)

    def to_field(self) -> CircleField:
        if self.role != "field":
            raise TypeError(f"file holds a {self.role}, not a field")
        return CircleField.from_terms(self.dim, self.terms)

    def to_point(self) -> PointConjugation:
        if self.role != "conjugation-K":
            raise TypeError(f"file holds a {self.role}, not a point conjugation")
        return PointConjugation(self.terms.get(0, np.zeros((self.dim, self.dim))))


def _real_array(value, shape: tuple[int, ...], where: str) -> np.ndarray:
    def check(v, depth, path):
        if depth == len(shape):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SymbolFileError(f"expected a number, got {type(v).__name__}", path)
            return
        if not isinstance(v, list) or len(v) != shape[depth]:
            n = len(v) if isinstance(v, list) else type(v).__name__
            raise SymbolFileError(f"expected a list of length {shape[depth]}, got {n}", path)
        for i, item in enumerate(v):
            check(item, depth + 1, f"{path}[{i}]")

    check(value, 0, where)
    return np.array(value, dtype=float)


def parse_symbol_file(source) -> SymbolSpecFile:
    """Parse from a path or from the text itself (anything starting with ``{``)."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SymbolFileError(str(exc), str(path)) from exc
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymbolFileError(exc.msg, f"{exc.lineno}:{exc.colno}") from exc
    if not isinstance(doc, dict):
        raise SymbolFileError("top level must be an object", "$")
    unknown = set(doc) - {"dim", "terms", "role"}
    if unknown:
        raise SymbolFileError(f"unknown keys {sorted(unknown)}", "$")
    d = doc.get("dim")
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise SymbolFileError("dim must be a positive integer", "$.dim")
    role = doc.get("role", "symbol")
    if role not in ROLES:
        raise SymbolFileError(f"role must be one of {ROLES}", "$.role")
    raw = doc.get("terms")
    if not isinstance(raw, list):
        raise SymbolFileError("terms must be a list", "$.terms")
    shape = (d,) if role == "field" else (d, d)
    terms: dict[int, np.ndarray] = {}
    for i, t in enumerate(raw):
        where = f"$.terms[{i}]"
        if not isinstance(t, dict) or set(t) != {"n", "re", "im"}:
            raise SymbolFileError('each term needs exactly the keys "n", "re", "im"', where)
        n = t["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise SymbolFileError("n must be an integer", f"{where}.n")
        if n in terms:
            raise SymbolFileError(f"duplicate index n={n}", f"{where}.n")
        terms[n] = _real_array(t["re"], shape, f"{where}.re") + 1j * _real_array(t["im"], shape, f"{where}.im")
    if role == "conjugation-K" and set(terms) - {0}:
        raise SymbolFileError("a conjugation-K file holds a single term at n=0", "$.terms")
    return SymbolSpecFile(d, terms, role)


def to_document(obj, role: str | None = None) -> dict:
    """JSON-ready dict for a symbol, field, point conjugation or :class:`SymbolSpecFile`."""
    if isinstance(obj, SymbolSpecFile):
        d, terms, role = obj.dim, obj.terms, obj.role
    elif isinstance(obj, PointConjugation):
        d, terms, role = obj.dim, {0: obj.K}, "conjugation-K"
    elif isinstance(obj, CircleField):
        d, terms, role = obj.dim, obj.terms(), "field"
    elif isinstance(obj, OperatorSymbol):
        d, terms, role = obj.dim, obj.terms(), role or "symbol"
    else:
        arr = np.asarray(obj, dtype=complex)
        d, terms, role = arr.shape[0], {0: arr}, role or "symbol"
    return {
        "dim": int(d),
        "role": role,
        "terms": [
            {"n": int(n), "re": np.real(terms[n]).tolist(), "im": np.imag(terms[n]).tolist()} for n in sorted(terms)
        ],
    }


def serialize(obj, role: str | None = None) -> str:
    return json.dumps(to_document(obj, role), sort_keys=True)
