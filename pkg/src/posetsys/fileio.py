"""Reading and writing system files and signal files.

A system file is a UTF-8 JSON document::

    {"poset": {"p": 4, "edges": [[1, 2], [3, 2], [2, 4]]},
     "partitions": {"n": [...], "m": [...], "r": [...]},
     "A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]],
     "x0": [...]}                       # optional

An edge [j, i] asserts that node j is above node i. Matrix entries may be
integers, decimal strings, or "a/b" rational strings; everything is parsed
exactly. Signal files are whitespace-separated columns: time followed by the
input components, one grid point per line.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from . import _linalg as la
from .errors import ParseError
from .poset import build_poset
from .sim import InputSignal, Trajectory
from .system import PosetCausalSystem

__all__ = [
    "parse_rational",
    "format_rational",
    "system_from_dict",
    "system_to_dict",
    "load_system",
    "save_system",
    "read_signal",
    "write_trajectory",
]


def parse_rational(value) -> Fraction:
    """Exact parse of an int, decimal string, or 'a/b' string."""
    try:
        if isinstance(value, bool):
            raise TypeError("booleans are not numbers")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, float):
            raise TypeError("floats are not exact; write a decimal string instead")
        raise TypeError(f"unsupported entry type {type(value).__name__}")
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"bad rational entry {value!r}: {exc}") from exc


def format_rational(value: Fraction):
    value = Fraction(value)
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def _parse_matrix(rows, what: str) -> np.ndarray:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{what} must be a 2-D array")
    try:
        return la.fmat([[parse_rational(x) for x in row] for row in rows])
    except ParseError as exc:
        raise ParseError(f"{what}: {exc}") from exc


def system_from_dict(doc: dict) -> PosetCausalSystem:
    try:
        poset_doc = doc["poset"]
        parts = doc["partitions"]
        p = int(poset_doc["p"])
        edges = [(int(j), int(i)) for j, i in poset_doc["edges"]]
        n = [int(v) for v in parts["n"]]
        m = [int(v) for v in parts["m"]]
        r = [int(v) for v in parts["r"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed system document: {exc}") from exc
    poset = build_poset(p, edges)
    mats = {}
    for name, shape in (("A", (sum(n), sum(n))), ("B", (sum(n), sum(m))),
                        ("C", (sum(r), sum(n))), ("D", (sum(r), sum(m)))):
        if name not in doc:
            raise ParseError(f"missing matrix {name}")
        mat = _parse_matrix(doc[name], name)
        if mat.shape != shape and not (0 in shape and mat.size == 0):
            raise ParseError(f"{name} has shape {mat.shape}, expected {shape}")
        if mat.shape != shape:
            mat = la.zeros(*shape)
        mats[name] = mat
    x0 = None
    if doc.get("x0") is not None:
        x0 = [parse_rational(v) for v in doc["x0"]]
        if len(x0) != sum(n):
            raise ParseError(f"x0 has {len(x0)} entries, expected {sum(n)}")
    return PosetCausalSystem(poset=poset, n=n, m=m, r=r, x0=x0, **mats)


def _matrix_doc(entries: np.ndarray) -> list:
    return [[format_rational(x) for x in row] for row in entries]


def system_to_dict(sys: PosetCausalSystem) -> dict:
    from .poset import hasse_edges

    doc = {
        "poset": {"p": sys.poset.p, "edges": [list(e) for e in sorted(hasse_edges(sys.poset))]},
        "partitions": {"n": list(sys.n.sizes), "m": list(sys.m.sizes), "r": list(sys.r.sizes)},
        "A": _matrix_doc(sys.A.entries),
        "B": _matrix_doc(sys.B.entries),
        "C": _matrix_doc(sys.C.entries),
        "D": _matrix_doc(sys.D.entries),
    }
    if sys.x0 is not None:
        doc["x0"] = [format_rational(x) for x in sys.x0.flat]
    return doc


def load_system(path) -> PosetCausalSystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    return system_from_dict(doc)


def save_system(sys: PosetCausalSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_dict(sys), fh, indent=2)
        fh.write("\n")


def read_signal(path, step: float | None = None) -> InputSignal:
    """Columnar signal file: time column followed by input components."""
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                try:
                    rows.append([float(tok) for tok in line.replace(",", " ").split()])
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: signal file is empty")
    width = len(rows[0])
    if width < 2 or any(len(r) != width for r in rows):
        raise ParseError(f"{path}: expected uniform columns (time plus components)")
    times = np.array([r[0] for r in rows])
    values = np.array([r[1:] for r in rows])
    if step is None:
        if len(times) < 2:
            raise ParseError(f"{path}: need at least two rows to infer the step size")
        diffs = np.diff(times)
        step = float(diffs[0])
        if step <= 0 or not np.allclose(diffs, step, rtol=1e-9, atol=1e-12):
            raise ParseError(f"{path}: time column is not a uniform increasing grid")
    return InputSignal(step=float(step), values=values)


def write_trajectory(traj: Trajectory, fh) -> None:
    """Columns: time, state components, output components."""
    for k, t in enumerate(traj.times):
        cells = [f"{t:.12g}"]
        cells += [f"{v:.12g}" for v in traj.states[k]]
        cells += [f"{v:.12g}" for v in traj.outputs[k]]
        fh.write(" ".join(cells) + "\n")
