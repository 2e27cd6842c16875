"""JSON encoding of algebra values.

Wire forms:

    supernumber   [{"index": [1, 3], "coeff": -2.5}, ...]   increasing indices
    matrix        {"shape": {"m": 1, "n": 2}, "parity": "even",
                   "entries": [supernumber, ...]}           flat, row-major
    gamma         {"eta": [1, -1, ...], "n": 2}             entries may also be
                                                            supernumber lists
    group element {"g_body": [[...], ...], "n_part": matrix}

Rational coefficients are written as exact fraction strings ("3/5"); parsing
accepts numbers, fraction strings, and (in rational mode) decimal literals
read back digit-for-digit.  Dumps are deterministic: sorted keys, fixed
separators, no environment-dependent content.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import AlgebraConfig, Supernumber
from .errors import LengthMismatch, ShapeMismatch, ValidationError
from .isometry import GammaForm
from .matrices import BlockShape, SuperMatrix


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "),
                      indent=2) + "\n"


# -- scalars ---------------------------------------------------------------------

def scalar_to_json(value, config: AlgebraConfig):
    if config.rational:
        return str(Fraction(value))
    return float(value)


def scalar_from_json(value, config: AlgebraConfig):
    if isinstance(value, str):
        try:
            f = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"unparseable coefficient {value!r}")
        return f if config.rational else float(f)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"coefficient must be a number, got {value!r}")
    if config.rational:
        # route through the decimal text so "0.1" means 1/10
        return Fraction(str(value))
    return float(value)


# -- supernumbers -----------------------------------------------------------------

def supernumber_to_json(z: Supernumber) -> list:
    return [{"index": list(indices),
             "coeff": scalar_to_json(coeff, z.config)}
            for indices, coeff in z.items()]


def supernumber_from_json(data, config: AlgebraConfig) -> Supernumber:
    if isinstance(data, (int, float, str)) and not isinstance(data, bool):
        return config.scalar(scalar_from_json(data, config))
    if not isinstance(data, list):
        raise ValidationError("supernumber must be a list of terms")
    pairs = []
    for item in data:
        if not isinstance(item, dict) or set(item) != {"index", "coeff"}:
            raise ValidationError(
                "each term needs exactly the keys 'index' and 'coeff'")
        index = item["index"]
        if not isinstance(index, list) or any(
                not isinstance(i, int) or isinstance(i, bool) for i in index):
            raise ValidationError("'index' must be a list of integers")
        if any(i < 1 or i > config.generator_count for i in index):
            raise ValidationError(
                f"generator indices must lie in 1..{config.generator_count}")
        if any(b <= a for a, b in zip(index, index[1:])):
            raise ValidationError("'index' must be strictly increasing")
        key = 0
        for i in index:
            key |= 1 << (i - 1)
        pairs.append((key, scalar_from_json(item["coeff"], config)))
    if len({k for k, _ in pairs}) != len(pairs):
        raise ValidationError("duplicate multi-index in supernumber")
    return config.from_terms(dict(pairs))


# -- matrices --------------------------------------------------------------------

def matrix_to_json(M: SuperMatrix) -> dict:
    return {
        "shape": {"m": M.shape.m, "n": M.shape.n},
        "parity": M.parity_class,
        "entries": [supernumber_to_json(e) for row in M.rows for e in row],
    }


def matrix_from_json(data, config: AlgebraConfig) -> SuperMatrix:
    if not isinstance(data, dict):
        raise ValidationError("matrix must be a JSON object")
    try:
        shape = data["shape"]
        m, n = int(shape["m"]), int(shape["n"])
        parity = data["parity"]
        entries = data["entries"]
    except (KeyError, TypeError, ValueError):
        raise ValidationError(
            "matrix needs 'shape' {m, n}, 'parity' and 'entries'")
    if m < 0 or n < 0:
        raise ShapeMismatch("block sizes must be non-negative")
    k = m + n
    if not isinstance(entries, list) or len(entries) != k * k:
        raise LengthMismatch(
            f"expected {k * k} row-major entries, got "
            f"{len(entries) if isinstance(entries, list) else 'non-list'}")
    flat = [supernumber_from_json(e, config) for e in entries]
    rows = [flat[i * k:(i + 1) * k] for i in range(k)]
    return SuperMatrix(config, BlockShape(m, n), rows, parity)


# -- canonical forms ---------------------------------------------------------------

def gamma_to_json(gamma: GammaForm) -> dict:
    eta = []
    for e in gamma.eta:
        if e.soul().is_zero():
            eta.append(scalar_to_json(e.body(), gamma.config))
        else:
            eta.append(supernumber_to_json(e))
    return {"eta": eta, "n": gamma.n}


def gamma_from_json(data, config: AlgebraConfig) -> GammaForm:
    if not isinstance(data, dict) or "eta" not in data or "n" not in data:
        raise ValidationError("gamma needs 'eta' and 'n'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValidationError("'n' must be a non-negative integer")
    eta = [supernumber_from_json(e, config) for e in data["eta"]]
    return GammaForm(config, tuple(eta), n)


# -- group elements ----------------------------------------------------------------

def group_element_to_json(h) -> dict:
    cfg = h.gamma.config
    return {
        "g_body": [[scalar_to_json(v, cfg) for v in row]
                   for row in h.g_body],
        "n_part": matrix_to_json(h.n_part.X),
    }


def group_element_from_json(data, gamma: GammaForm):
    from .group import GroupElement, NilElement

    if not isinstance(data, dict) or "g_body" not in data \
            or "n_part" not in data:
        raise ValidationError("group element needs 'g_body' and 'n_part'")
    body = data["g_body"]
    if not isinstance(body, list) or any(not isinstance(r, list)
                                         for r in body):
        raise ValidationError("'g_body' must be a matrix of numbers")
    cfg = gamma.config
    rows = [[scalar_from_json(v, cfg) for v in r] for r in body]
    X = matrix_from_json(data["n_part"], cfg)
    return GroupElement(tuple(map(tuple, rows)), NilElement(X, gamma))
