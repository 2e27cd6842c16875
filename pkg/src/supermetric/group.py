"""The zero-body group under exact BCH and its semi-direct extension.

Zero-body even matrices satisfying the membership conditions form a group
under X <> Y = log(exp X exp Y): both series are finite here, so the
operation is exact, and the operator spectrum of every bracket map is {0},
which is what makes the composition globally defined.

An independent truncated-series route evaluates the same composition from
commutator word tables.  The per-word coefficients are generated
programmatically: a word w of length N receives

    c_w = (1/N) * sum over splittings of w into blocks X^r Y^s
          of (-1)^(n-1) / (n * prod r_i! s_i!)

and the word is applied as the right-nested bracket
[w_1, [w_2, ... [w_{N-1}, w_N]]].  Orders 1 and 2 reproduce X + Y and
X + Y + [X,Y]/2; all table entries are cross-validated against the exact
route in the tests.

The full covering group is the semi-direct product of body-level isometries
with the zero-body group: (g1, n1) o (g2, n2) = (g1 g2, n1 <> alpha(g1) n2)
where alpha is conjugation, realized concretely because conjugating an
exponential is exponentiating a conjugate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import (
    ConfigMismatch,
    NonZeroBody,
    NormBoundViolation,
    NotBodyIsometry,
    NotInG0,
    NotLieElement,
    ShapeMismatch,
)
from .isometry import GammaForm, lie_membership
from .matrices import (
    SuperMatrix,
    exact_inverse,
    exp_zero_body,
    log_unipotent,
)

_TOL = 1e-10
MAX_SERIES_ORDER = 6


@dataclass(frozen=True)
class BCHOrderConfig:
    max_order: int = 4

    def __post_init__(self):
        if not (1 <= self.max_order <= MAX_SERIES_ORDER):
            raise ConfigMismatch(
                f"series order must lie in 1..{MAX_SERIES_ORDER}")


# -- word tables -----------------------------------------------------------------

def _block_splittings(word):
    """All ways to cut the word into consecutive nonempty blocks of the form
    X^r Y^s; yields tuples of (r, s) per block."""
    n = len(word)

    def block_shapes(i, j):
        # the slice word[i:j] as X^r Y^s, or None
        r = 0
        k = i
        while k < j and word[k] == "X":
            r += 1
            k += 1
        s = j - k
        if any(ch != "Y" for ch in word[k:j]):
            return None
        return (r, s)

    def rec(i):
        if i == n:
            yield ()
            return
        for j in range(i + 1, n + 1):
            shape = block_shapes(i, j)
            if shape is None:
                continue
            for rest in rec(j):
                yield (shape,) + rest

    yield from rec(0)


@lru_cache(maxsize=None)
def _word_table(order: int):
    """[(coefficient, word string)] for homogeneous degree = order."""
    out = []
    for mask in range(1 << order):
        word = "".join("Y" if (mask >> i) & 1 else "X" for i in range(order))
        c = Fraction(0)
        for blocks in _block_splittings(word):
            nb = len(blocks)
            denom = nb
            for r, s in blocks:
                denom *= math.factorial(r) * math.factorial(s)
            c += Fraction((-1) ** (nb - 1), denom)
        c /= order
        if c != 0:
            out.append((c, word))
    return tuple(out)


def _nested_bracket(mats, word):
    acc = mats[word[-1]]
    for ch in reversed(word[:-1]):
        x = mats[ch]
        acc = x @ acc - acc @ x
    return acc


def bch_series(X: SuperMatrix, Y: SuperMatrix,
               cfg: BCHOrderConfig = BCHOrderConfig()) -> SuperMatrix:
    """Truncated composition series sum of the word tables up to max_order.

    Zero-body inputs need no gate.  Otherwise the norm bound
    ||X|| + ||Y|| <= log 2 (induced norms) is enforced.
    """
    if not (X.has_zero_body() and Y.has_zero_body()):
        total = float(X.induced_norm()) + float(Y.induced_norm())
        if total > math.log(2):
            raise NormBoundViolation(
                f"||X|| + ||Y|| = {total:.6g} exceeds log 2")
    acfg = X.config
    mats = {"X": X, "Y": Y}
    acc = SuperMatrix.zeros(acfg, X.shape, "general")
    for order in range(1, cfg.max_order + 1):
        for coeff, word in _word_table(order):
            term = _nested_bracket(mats, word)
            if term.is_zero():
                continue
            acc = acc + term.scale(coeff if acfg.rational else float(coeff))
    return acc


# -- the zero-body group -----------------------------------------------------------

@dataclass(frozen=True)
class NilElement:
    """Even zero-body matrix satisfying the membership conditions."""
    X: SuperMatrix
    gamma: GammaForm

    def __post_init__(self):
        if self.X.shape != self.gamma.shape:
            raise ShapeMismatch(f"{self.X.shape} vs {self.gamma.shape}")
        if not self.X.has_zero_body():
            raise NonZeroBody("group-algebra elements must have zero body")
        report = lie_membership(self.X, self.gamma)
        if not report["member"]:
            raise NotLieElement(
                f"membership conditions violated: {report['violated']}")

    def __neg__(self):
        return NilElement(-self.X, self.gamma)


def diamond(X: NilElement, Y: NilElement) -> NilElement:
    """Exact group law log(exp X exp Y) on zero-body elements."""
    if X.gamma != Y.gamma:
        raise ShapeMismatch("operands live over different canonical forms")
    Z = log_unipotent(exp_zero_body(X.X) @ exp_zero_body(Y.X))
    return NilElement(Z, X.gamma)


# -- body group and the semi-direct product ----------------------------------------

def _real_block_diag_ok(M, m, n, tol):
    k = m + n
    for i in range(k):
        for j in range(k):
            if (i < m) != (j < m) and abs(float(M[i][j])) > tol:
                return False
    return True


def _check_g0(X0, gamma: GammaForm):
    """Real matrix conditions for the linearized body group: block diagonal,
    skew against eta, symplectic-symmetric against J."""
    m, n = gamma.m, gamma.n
    X0 = [[x for x in row] for row in X0]
    if len(X0) != m + n or any(len(r) != m + n for r in X0):
        raise ShapeMismatch("wrong real matrix size")
    scale = max((abs(float(v)) for r in X0 for v in r), default=0.0)
    tol = _TOL * (1.0 + scale)
    if not _real_block_diag_ok(X0, m, n, tol):
        raise NotInG0("off-diagonal blocks must vanish for a real element")
    eta = [1.0 if e.body() > 0 else -1.0 for e in gamma.eta]
    for i in range(m):
        for j in range(m):
            if abs(float(X0[j][i]) * eta[j] + eta[i] * float(X0[i][j])) > tol:
                raise NotInG0("even block fails a^T eta + eta a = 0")
    Jb = np.zeros((n, n))
    for k in range(0, n, 2):
        Jb[k, k + 1] = 1.0
        Jb[k + 1, k] = -1.0
    b = np.array([[float(X0[m + a][m + g]) for g in range(n)]
                  for a in range(n)], dtype=float)
    if n and np.max(np.abs(b.T @ Jb + Jb @ b)) > tol:
        raise NotInG0("odd block fails b^T J + J b = 0")


def _to_real_rows(mat):
    if isinstance(mat, np.ndarray):
        return [[v for v in row] for row in mat.tolist()]
    return [[v for v in row] for row in mat]


def _real_mat_mul(a, b):
    k = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(k)]
            for i in range(k)]


def _real_inverse(rows, rational):
    if rational:
        inv = exact_inverse(rows)
        if inv is None:
            raise NotBodyIsometry("body matrix is singular")
        return inv
    return np.linalg.inv(np.array(rows, dtype=float)).tolist()


@dataclass(frozen=True)
class GroupElement:
    """Pair of a body-level isometry matrix and a zero-body element."""
    g_body: tuple
    n_part: NilElement

    def __post_init__(self):
        gamma = self.n_part.gamma
        rows = _to_real_rows(self.g_body)
        k = gamma.m + gamma.n
        if len(rows) != k or any(len(r) != k for r in rows):
            raise ShapeMismatch("body matrix has the wrong size")
        if gamma.config.rational:
            rows = [[Fraction(v) for v in row] for row in rows]
        else:
            rows = [[float(v) for v in row] for row in rows]
        object.__setattr__(self, "g_body", tuple(tuple(r) for r in rows))
        scale = max((abs(float(v)) for r in rows for v in r), default=0.0)
        if not _real_block_diag_ok(rows, gamma.m, gamma.n,
                                   _TOL * (1.0 + scale)):
            raise NotBodyIsometry("body matrix must be block diagonal")
        gb = np.array([[float(v) for v in row] for row in rows])
        Gb = gamma.body_float()
        if np.max(np.abs(gb.T @ Gb @ gb - Gb)) > _TOL * (1.0 + scale ** 2):
            raise NotBodyIsometry(
                "body matrix does not preserve the body of the form")

    @property
    def gamma(self):
        return self.n_part.gamma

    @classmethod
    def identity(cls, gamma: GammaForm):
        k = gamma.m + gamma.n
        eye = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        X = SuperMatrix.zeros(gamma.config, gamma.shape, "even")
        return cls(tuple(map(tuple, eye)), NilElement(X, gamma))


def conjugate_action(g_rows, Y: NilElement) -> NilElement:
    """alpha(g): Y -> g Y g^{-1}, preserving zero body and membership."""
    gamma = Y.gamma
    cfg = gamma.config
    rows = _to_real_rows(g_rows)
    inv = _real_inverse(rows, cfg.rational)
    G = SuperMatrix.from_real(cfg, rows, gamma.shape, "even")
    Gi = SuperMatrix.from_real(cfg, inv, gamma.shape, "even")
    return NilElement(G @ Y.X @ Gi, gamma)


def action_alpha(X0, Y: NilElement) -> NilElement:
    """The action of exp(X0) for a real linearized element X0, computed as
    conjugation by the matrix exponential."""
    gamma = Y.gamma
    _check_g0(X0, gamma)
    g = expm(np.array([[float(v) for v in row] for row in X0], dtype=float))
    if gamma.config.rational:
        # exact dyadic lift; the conjugation itself is then exact
        g = [[Fraction(float(v)) for v in row] for row in g.tolist()]
    return conjugate_action(g, Y)


def body_exponential(X0, gamma: GammaForm):
    """Matrix exponential of a checked real linearized element; the body
    coordinate of a group element."""
    _check_g0(X0, gamma)
    g = expm(np.array([[float(v) for v in row] for row in X0], dtype=float))
    rows = g.tolist()
    if gamma.config.rational:
        rows = [[Fraction(float(v)) for v in row] for row in rows]
    return tuple(tuple(r) for r in rows)


def semidirect_multiply(h1: GroupElement, h2: GroupElement) -> GroupElement:
    if h1.gamma != h2.gamma:
        raise ShapeMismatch("operands live over different canonical forms")
    g = _real_mat_mul(_to_real_rows(h1.g_body), _to_real_rows(h2.g_body))
    n = diamond(h1.n_part, conjugate_action(h1.g_body, h2.n_part))
    return GroupElement(tuple(map(tuple, g)), n)


def semidirect_inverse(h: GroupElement) -> GroupElement:
    cfg = h.gamma.config
    ginv = _real_inverse(_to_real_rows(h.g_body), cfg.rational)
    n = conjugate_action(ginv, -h.n_part)
    return GroupElement(tuple(map(tuple, ginv)), n)


def embed_isometry(h: GroupElement, gamma: GammaForm = None) -> SuperMatrix:
    """Concrete isometry exp(n) * g realizing the pair; products of pairs
    map to products of matrices."""
    if gamma is None:
        gamma = h.gamma
    elif gamma != h.gamma:
        raise ShapeMismatch("element does not belong to this canonical form")
    cfg = gamma.config
    G = SuperMatrix.from_real(cfg, _to_real_rows(h.g_body), gamma.shape,
                              "even")
    return exp_zero_body(h.n_part.X) @ G
