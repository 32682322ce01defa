"""Chain (de)serialization and deterministic report formatting.

Chain JSON is either the explicit form {"n", "p", "q", "r"} or the
reversible-weights form {"conductances": {"edges": [...], "loops": [...]}}.
Probabilities may be doubles or decimal strings; NaN and infinities are
rejected.  All emitted numbers carry 17 significant digits so that
round-trips and reruns are byte-identical.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .chain import ChainSpec, ChainValidationError, from_conductances, new_chain
from .config import MAX_STATES

FORMAT_VERSION = "1"


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _parse_numbers(values, field: str) -> np.ndarray:
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise ChainValidationError(f"{field}[{i}] must be a number or decimal string")
        try:
            x = float(v)
        except ValueError:
            raise ChainValidationError(f"{field}[{i}] is not a decimal number: {v!r}")
        if not math.isfinite(x):
            raise ChainValidationError(f"{field}[{i}] is not finite: {v!r}")
        out.append(x)
    return np.array(out, dtype=float)


def chain_from_dict(data: dict, max_states: int = MAX_STATES) -> ChainSpec:
    if not isinstance(data, dict):
        raise ChainValidationError("chain JSON must be an object")
    if "conductances" in data:
        cond = data["conductances"]
        if not isinstance(cond, dict) or "edges" not in cond or "loops" not in cond:
            raise ChainValidationError(
                'conductances must be an object with "edges" and "loops"'
            )
        edges = _parse_numbers(cond["edges"], "edges")
        loops = _parse_numbers(cond["loops"], "loops")
        if len(loops) > max_states:
            raise ChainValidationError(
                f"{len(loops)} states exceeds the cap of {max_states}"
            )
        convention = data.get("loop_convention", "once")
        return from_conductances(edges, loops, loop_convention=convention)
    for key in ("n", "p", "q", "r"):
        if key not in data:
            raise ChainValidationError(f'chain JSON missing field "{key}"')
    n = data["n"]
    if not isinstance(n, int) or n < 0:
        raise ChainValidationError('"n" must be a non-negative integer')
    if n + 1 > max_states:
        raise ChainValidationError(f"{n + 1} states exceeds the cap of {max_states}")
    p = _parse_numbers(data["p"], "p")
    q = _parse_numbers(data["q"], "q")
    r = _parse_numbers(data["r"], "r")
    if not len(p) == len(q) == len(r) == n + 1:
        raise ChainValidationError(
            f'"p", "q", "r" must each have length n+1 = {n + 1}'
        )
    return new_chain(p, q, r)


def chain_to_dict(chain: ChainSpec) -> dict:
    return {
        "n": chain.n,
        "p": [format_float(x) for x in chain.p],
        "q": [format_float(x) for x in chain.q],
        "r": [format_float(x) for x in chain.r],
    }


def load_chain(path: str, max_states: int = MAX_STATES) -> ChainSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChainValidationError(
                f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
                f"{exc.msg}"
            )
    return chain_from_dict(data, max_states)


def dump_chain(chain: ChainSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(chain_to_dict(chain)))


def dumps_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline.
    Floats are pre-rendered with format_float before reaching here."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return format_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def csv_lines(header_fields, rows) -> str:
    """Versioned CSV: a comment line with the format version, a header
    line, then one line per row with floats at 17 significant digits."""
    lines = [f"# bdchains-csv-v{FORMAT_VERSION}", ",".join(header_fields)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append(format_float(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
