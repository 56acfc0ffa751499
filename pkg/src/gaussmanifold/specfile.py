"""TOML branch-specification files.

A branch table is either parametric (``x0, p0, r, theta`` for one mode, or a
``modes`` list of such tables) or raw (``d`` and ``V``; ``V`` nested or flat
row-major). Complex numbers are written as a real number or ``[re, im]``.

Example::

    kappa = 1.0
    p = 0.1

    [[branch]]
    x0 = 1.414
    r = 0.2

    [[branch]]
    d = [-1.414, 0.0]
    V = [[0.335, 0.0], [0.0, 0.746]]

    [mixture]
    coefficients = [[1, 1], [1, -1]]
    weights = [0.9, 0.1]

    [bell]
    phi = 0.0
    p = 0.2
    a = [{x0 = 1.0}, {x0 = -1.0}]
    b = [{x0 = 1.0}, {x0 = -1.0}]
"""

from __future__ import annotations

import sys

import numpy as np

from .errors import GaussManifoldError
from .gaussian_core import GaussianPure, make_displaced_squeezed

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PARAM_KEYS = ("x0", "p0", "r", "theta")
RAW_KEYS = ("d", "V")


class SpecParseError(GaussManifoldError):
    """Malformed specification file (syntax or schema)."""


def load(path) -> dict:
    """Read a TOML file; syntax errors carry line and column."""
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise SpecParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc


def loads(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecParseError(str(exc)) from exc


def _number(value, where) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_complex(value, where) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise SpecParseError(f"{where}: complex numbers are [re, im] pairs")
        return complex(_number(value[0], where), _number(value[1], where))
    return complex(_number(value, where))


def _mode_params(table, where):
    unknown = set(table) - set(PARAM_KEYS)
    if unknown:
        raise SpecParseError(f"{where}: unknown keys {sorted(unknown)}")
    return tuple(_number(table.get(k, 0.0), f"{where}.{k}") for k in PARAM_KEYS)


def parse_branch(table, where="branch") -> GaussianPure:
    """Build a :class:`GaussianPure` from one branch table."""
    if not isinstance(table, dict):
        raise SpecParseError(f"{where}: expected a table")
    has_raw = any(k in table for k in RAW_KEYS)
    has_param = "modes" in table or any(k in table for k in PARAM_KEYS)
    if has_raw and has_param:
        raise SpecParseError(f"{where}: give either parametric keys or raw d/V, not both")
    if has_raw:
        if not all(k in table for k in RAW_KEYS):
            raise SpecParseError(f"{where}: raw form needs both d and V")
        extra = set(table) - set(RAW_KEYS)
        if extra:
            raise SpecParseError(f"{where}: unknown keys {sorted(extra)}")
        d = np.array([_number(x, f"{where}.d") for x in table["d"]])
        flat = np.array(table["V"], dtype=object).reshape(-1)
        V = np.array([_number(x, f"{where}.V") for x in flat])
        if V.size != d.size**2:
            raise SpecParseError(f"{where}.V: expected {d.size ** 2} entries, got {V.size}")
        return GaussianPure(d, V.reshape(d.size, d.size))
    if "modes" in table:
        if set(table) != {"modes"}:
            raise SpecParseError(f"{where}: 'modes' cannot be combined with other keys")
        modes = table["modes"]
        if not isinstance(modes, list) or not modes:
            raise SpecParseError(f"{where}.modes: expected a non-empty list of tables")
        params = [_mode_params(m, f"{where}.modes[{i}]") for i, m in enumerate(modes)]
        return make_displaced_squeezed(len(params), params)
    return make_displaced_squeezed(1, [_mode_params(table, where)])


def parse_branches(doc, key="branch") -> list:
    tables = doc.get(key)
    if not isinstance(tables, list) or not tables:
        raise SpecParseError(f"missing [[{key}]] tables")
    return [parse_branch(t, f"{key}[{i}]") for i, t in enumerate(tables)]


def parse_mixture(doc, dim):
    """``(coefficients, weights)`` from the ``[mixture]`` table (default: equal superposition)."""
    table = doc.get("mixture")
    if table is None:
        return [np.ones(dim, dtype=complex)], [1.0]
    coeffs = table.get("coefficients")
    if not isinstance(coeffs, list) or not coeffs:
        raise SpecParseError("mixture.coefficients: expected a list of vectors")
    vectors = []
    for i, vec in enumerate(coeffs):
        if not isinstance(vec, list) or len(vec) != dim:
            raise SpecParseError(f"mixture.coefficients[{i}]: expected {dim} entries")
        vectors.append(np.array([parse_complex(x, f"mixture.coefficients[{i}]") for x in vec]))
    weights = table.get("weights", [1.0 / len(vectors)] * len(vectors))
    return vectors, [_number(w, "mixture.weights") for w in weights]


def scalar(doc, key, default=None, table=None):
    src = doc if table is None else doc.get(table, {})
    if key not in src:
        if default is None:
            where = key if table is None else f"{table}.{key}"
            raise SpecParseError(f"missing required key '{where}'")
        return default
    return _number(src[key], key)


def parse_bell(doc):
    """Party-A and party-B branch pairs, ``phi`` and ``p`` from ``[bell]``."""
    bell = doc.get("bell")
    if not isinstance(bell, dict):
        raise SpecParseError("missing [bell] table")
    parties = []
    for side in ("a", "b"):
        tables = bell.get(side)
        if not isinstance(tables, list) or len(tables) != 2:
            raise SpecParseError(f"bell.{side}: expected exactly two branch tables")
        parties.append([parse_branch(t, f"bell.{side}[{i}]") for i, t in enumerate(tables)])
    return parties[0], parties[1], scalar(bell, "phi", 0.0), scalar(bell, "p", 0.0)
