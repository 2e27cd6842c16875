"""Arithmetic in a finitely generated Grassmann algebra with the l1 norm.

A supernumber is a finite real linear combination of products of
anticommuting generators z(1), ..., z(L).  Each square-free product is
identified by the set of generator indices that appear in it, stored as an
L-bit mask; the empty set labels the constant term.  With the l1 norm
(sum of absolute coefficients) the algebra is a Banach algebra, and every
element with no constant term (a "soul") is nilpotent, so all the series
used here (Neumann inversion, binomial inverse square root) terminate
exactly at finite L.

Two coefficient modes are supported:

* ``float64`` for speed, with relative pruning of cancellation dust;
* ``rational`` (exact ``Fraction`` coefficients), the oracle mode in which
  every identity is checked exactly.

Values are immutable; all operations are pure functions that iterate terms
in ascending bitmask order, so float64 results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BodyNotInvertible,
    ConfigMismatch,
    ConvergenceViolation,
    LengthMismatch,
    ParityMismatch,
)

FLOAT64 = "float64"
RATIONAL = "rational"
_MODE_ALIASES = {"float64": FLOAT64, "rational": RATIONAL, "exact-rational": RATIONAL}

GENERATOR_CAP = 24
_DEFAULT_FLOAT_TOLERANCE = 1e-14


@dataclass(frozen=True)
class AlgebraConfig:
    """Shared context for all supernumbers: generator count, coefficient mode,
    and the relative pruning tolerance (float64 mode only)."""

    generator_count: int = 6
    coefficient_mode: str = FLOAT64
    zero_tolerance: float = None  # type: ignore[assignment]  # resolved below

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.coefficient_mode)
        if mode is None:
            raise ConfigMismatch(
                f"unknown coefficient mode {self.coefficient_mode!r}")
        object.__setattr__(self, "coefficient_mode", mode)
        if not (1 <= self.generator_count <= GENERATOR_CAP):
            raise ConfigMismatch(
                f"generator count must lie in [1, {GENERATOR_CAP}], "
                f"got {self.generator_count}")
        if self.zero_tolerance is None:
            tol = 0.0 if mode == RATIONAL else _DEFAULT_FLOAT_TOLERANCE
            object.__setattr__(self, "zero_tolerance", tol)
        elif mode == RATIONAL and self.zero_tolerance != 0:
            raise ConfigMismatch("rational mode requires zero_tolerance = 0")
        elif self.zero_tolerance < 0:
            raise ConfigMismatch("zero_tolerance must be non-negative")

    @property
    def rational(self) -> bool:
        return self.coefficient_mode == RATIONAL

    def coerce(self, value):
        """Bring a scalar into this config's coefficient domain."""
        if self.rational:
            return value if isinstance(value, Fraction) else Fraction(value)
        return float(value)

    # -- constructors ----------------------------------------------------

    def zero(self) -> "Supernumber":
        return Supernumber(self, {})

    def scalar(self, value) -> "Supernumber":
        c = self.coerce(value)
        return Supernumber(self, {} if c == 0 else {0: c})

    def one(self) -> "Supernumber":
        return self.scalar(1)

    def generator(self, i: int) -> "Supernumber":
        """The generator z(i), 1-based."""
        if not (1 <= i <= self.generator_count):
            raise ConfigMismatch(
                f"generator index {i} outside 1..{self.generator_count}")
        return Supernumber(self, {1 << (i - 1): self.coerce(1)})

    def term(self, indices, coeff=1) -> "Supernumber":
        """coeff * z(i1)...z(ik) for strictly increasing indices."""
        bits = 0
        prev = 0
        for i in indices:
            if not (prev < i <= self.generator_count):
                raise ConfigMismatch(
                    f"indices must be strictly increasing in "
                    f"1..{self.generator_count}, got {list(indices)}")
            bits |= 1 << (i - 1)
            prev = i
        c = self.coerce(coeff)
        return Supernumber(self, {} if c == 0 else {bits: c})

    def from_terms(self, mapping) -> "Supernumber":
        """Build from {indices-tuple-or-bitmask: coeff}; zero coefficients drop."""
        acc = {}
        for key, coeff in mapping.items():
            bits = key if isinstance(key, int) else _indices_to_bits(self, key)
            c = self.coerce(coeff)
            if c != 0:
                acc[bits] = acc.get(bits, self.coerce(0)) + c
        return Supernumber(self, {b: c for b, c in acc.items() if c != 0})


def _indices_to_bits(cfg, indices):
    bits = 0
    prev = 0
    for i in indices:
        if not (prev < i <= cfg.generator_count):
            raise ConfigMismatch(f"bad index tuple {tuple(indices)}")
        bits |= 1 << (i - 1)
        prev = i
    return bits


def _bits_to_indices(bits):
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def _merge_inversions(a: int, b: int) -> int:
    """Number of generator transpositions needed to sort the concatenation
    of the increasing strings a and b (as bitmasks), i.e. pairs (i in a,
    j in b) with i > j."""
    count = 0
    while b:
        low = b & -b
        count += (a >> low.bit_length()).bit_count()
        b ^= low
    return count


class Supernumber:
    """Immutable sparse element of the Grassmann algebra.

    ``terms`` maps bitmask -> nonzero coefficient and is kept in ascending
    bitmask order.  Do not mutate; construct through AlgebraConfig or the
    arithmetic operators.
    """

    __slots__ = ("config", "terms")

    def __init__(self, config: AlgebraConfig, terms: dict):
        self.config = config
        self.terms = dict(sorted(terms.items()))

    # -- inspection ------------------------------------------------------

    def items(self):
        """Term list as (indices tuple, coefficient), ascending bitmask."""
        return [(_bits_to_indices(b), c) for b, c in self.terms.items()]

    def body(self):
        return self.terms.get(0, self.config.coerce(0))

    def soul(self) -> "Supernumber":
        return Supernumber(self.config,
                           {b: c for b, c in self.terms.items() if b})

    def norm(self):
        """l1 norm; a Fraction in rational mode, float otherwise."""
        total = self.config.coerce(0)
        for c in self.terms.values():
            total += abs(c)
        return total

    def parity(self) -> str:
        if not self.terms:
            return "zero"
        kinds = {b.bit_count() & 1 for b in self.terms}
        if kinds == {0}:
            return "even"
        if kinds == {1}:
            return "odd"
        return "mixed"

    def is_zero(self) -> bool:
        return not self.terms

    def is_soul(self) -> bool:
        return 0 not in self.terms

    def min_grade(self) -> int:
        """Smallest word length among stored terms (0 for the zero element)."""
        if not self.terms:
            return 0
        return min(b.bit_count() for b in self.terms)

    # -- arithmetic ------------------------------------------------------

    def _check_mate(self, other):
        if self.config != other.config:
            raise ConfigMismatch("operands use different algebra configs")

    def __add__(self, other):
        if not isinstance(other, Supernumber):
            other = self.config.scalar(other)
        self._check_mate(other)
        acc = dict(self.terms)
        running = _running_max(self.terms.values())
        for b, c in other.terms.items():
            acc[b] = acc.get(b, self.config.coerce(0)) + c
            running = max(running, abs(c))
        return Supernumber(self.config, _prune(self.config, acc, running))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Supernumber(self.config, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Supernumber):
            other = self.config.scalar(other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(self.config.scalar(other))

    def __mul__(self, other):
        if not isinstance(other, Supernumber):
            return self.scale(other)
        self._check_mate(other)
        cfg = self.config
        acc = {}
        running = 0
        zero = cfg.coerce(0)
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                if b1 & b2:
                    continue
                c = c1 * c2
                if _merge_inversions(b1, b2) & 1:
                    c = -c
                key = b1 | b2
                acc[key] = acc.get(key, zero) + c
                a = abs(c)
                if a > running:
                    running = a
        return Supernumber(cfg, _prune(cfg, acc, running))

    def __rmul__(self, other):
        # scalars commute with everything, so left scaling is right scaling
        return self.scale(other)

    def scale(self, scalar):
        c0 = self.config.coerce(scalar)
        if c0 == 0:
            return self.config.zero()
        return Supernumber(self.config,
                           {b: c * c0 for b, c in self.terms.items()
                            if c * c0 != 0})

    def __truediv__(self, scalar):
        c0 = self.config.coerce(scalar)
        if c0 == 0:
            raise ZeroDivisionError("division of a supernumber by zero")
        if self.config.rational:
            return self.scale(Fraction(1) / c0)
        return self.scale(1.0 / c0)

    def __eq__(self, other):
        if isinstance(other, Supernumber):
            return self.config == other.config and self.terms == other.terms
        if isinstance(other, (int, float, Fraction)):
            return self.terms == ({} if other == 0
                                  else {0: self.config.coerce(other)})
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Supernumber(0)"
        parts = []
        for b, c in self.terms.items():
            if b == 0:
                parts.append(f"{c}")
            else:
                idx = ",".join(str(i) for i in _bits_to_indices(b))
                parts.append(f"{c}*z({idx})")
        return "Supernumber(" + " + ".join(parts) + ")"


def _running_max(values):
    running = 0
    for c in values:
        a = abs(c)
        if a > running:
            running = a
    return running


def _prune(cfg: AlgebraConfig, acc: dict, running_max) -> dict:
    if cfg.rational or cfg.zero_tolerance == 0:
        return {b: c for b, c in acc.items() if c != 0}
    cut = cfg.zero_tolerance * float(running_max)
    return {b: c for b, c in acc.items() if abs(c) > cut}


# -- module-level operation surface -------------------------------------------

def multiply(x: Supernumber, y: Supernumber) -> Supernumber:
    """Bilinear product; z(I)z(J) vanishes on overlap, otherwise picks up the
    sign of the merge permutation."""
    return x * y


def linear_combine(coeffs, terms) -> Supernumber:
    """sum_i coeffs[i] * terms[i] with zero pruning."""
    if len(coeffs) != len(terms):
        raise LengthMismatch(
            f"{len(coeffs)} coefficients vs {len(terms)} terms")
    if not terms:
        raise LengthMismatch("linear_combine needs at least one term")
    cfg = terms[0].config
    acc = {}
    running = 0
    zero = cfg.coerce(0)
    for c0, z in zip(coeffs, terms):
        if z.config != cfg:
            raise ConfigMismatch("operands use different algebra configs")
        c0 = cfg.coerce(c0)
        for b, c in z.terms.items():
            v = c0 * c
            acc[b] = acc.get(b, zero) + v
            a = abs(v)
            if a > running:
                running = a
    return Supernumber(cfg, _prune(cfg, acc, running))


def ell1_norm(z: Supernumber):
    return z.norm()


def body_soul(z: Supernumber):
    return z.body(), z.soul()


def parity(z: Supernumber) -> str:
    return z.parity()


def invert(z: Supernumber) -> Supernumber:
    """Multiplicative inverse via the terminating Neumann series.

    z = b(1 + s/b) with b the body; the series for (1 + s/b)^{-1} ends
    because souls are nilpotent at finite L.
    """
    cfg = z.config
    b = z.body()
    if b == 0 or (not cfg.rational and abs(b) <= cfg.zero_tolerance):
        raise BodyNotInvertible("supernumber has zero body")
    u = z.soul() / b
    one = cfg.one()
    acc = one
    term = one
    for _ in range(cfg.generator_count + 1):
        term = term * (-u)
        if term.is_zero():
            break
        acc = acc + term
    return acc / b


def _rational_sqrt(value: Fraction):
    """Exact square root of a non-negative Fraction, or None."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _binomial_soul_series(sigma: Supernumber) -> Supernumber:
    """(1 + sigma)^{-1/2} for a pure-soul even sigma; terminates exactly."""
    cfg = sigma.config
    acc = cfg.one()
    power = cfg.one()
    coeff = cfg.coerce(1)
    for k in range(1, cfg.generator_count + 1):
        power = power * sigma
        if power.is_zero():
            break
        # running binomial(-1/2, k) via the ratio -(2k-1)/(2k)
        step = (Fraction(-(2 * k - 1), 2 * k) if cfg.rational
                else -(2 * k - 1) / (2 * k))
        coeff = coeff * step
        acc = acc + power.scale(coeff)
    return acc


def binomial_inverse_sqrt(mu: Supernumber, strict: bool = False) -> Supernumber:
    """w = (1 + mu)^{-1/2} with w*w*(1 + mu) = 1.

    mu must be even.  For pure-soul mu the series terminates exactly.  With a
    nonzero body the scalar factor (1 + beta)^{-1/2} is split off; strict mode
    additionally enforces the norm gate ||mu|| < 1, and rational mode demands
    that 1 + beta be a perfect rational square (otherwise no exact result
    exists).
    """
    cfg = mu.config
    if mu.parity() not in ("even", "zero"):
        raise ParityMismatch("binomial inverse sqrt needs an even argument")
    b = mu.body()
    if b == 0:
        return _binomial_soul_series(mu)
    if strict and mu.norm() >= 1:
        raise ConvergenceViolation(
            "norm gate ||mu|| < 1 failed for nonzero-body argument")
    base = 1 + b
    if base <= 0:
        raise BodyNotInvertible("1 + body(mu) must be positive")
    if cfg.rational:
        root = _rational_sqrt(Fraction(1) / base)
        if root is None:
            raise ConvergenceViolation(
                "1 + body(mu) is not a perfect rational square; "
                "no exact inverse square root exists in rational mode")
        scale = root
    else:
        scale = 1.0 / math.sqrt(base)
    return _binomial_soul_series(mu.soul() / base).scale(scale)
