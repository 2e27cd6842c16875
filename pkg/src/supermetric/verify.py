"""Self-checking verification suite behind the `verify` CLI verb.

Every section draws from one seeded generator in a fixed order, so a given
(mode, seed, shape, L) tuple fixes the exact case list and, in rational
mode, the report bytes.  Sections mirror the acceptance areas at desk
scale: ring axioms, inversion and the binomial criterion, canonicalization
and body reduction, membership and exponentials, ad spectra, the two BCH
routes, and the semi-direct product.  The report carries per-section case
counts and failure strings; no timestamps or environment data.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    AlgebraConfig,
    binomial_inverse_sqrt,
    invert,
    multiply,
)
from .canonical import SuperMetric, body_reduce, canonical_form, congruence
from .group import (
    BCHOrderConfig,
    GroupElement,
    NilElement,
    bch_series,
    conjugate_action,
    diamond,
    embed_isometry,
    semidirect_inverse,
    semidirect_multiply,
)
from .isometry import _scale_by_supernumber, is_isometry, lie_basis, \
    lie_membership
from .matrices import SuperMatrix, ad_operator, exp_zero_body, spectrum_gate
from .sampling import (
    make_rng,
    rand_coeff,
    rand_homogeneous,
    rand_pure,
    random_body_isometry,
    random_group_element,
    random_member,
    random_metric,
    random_nil,
    standard_gamma,
)

_FLOAT_TOL = 1e-10


def _near_zero(M: SuperMatrix, scale=1) -> bool:
    if M.config.rational:
        return M.is_zero()
    return float(M.entry_norm_max()) <= _FLOAT_TOL * (1.0 + float(scale))


def _scalar_near(x, y, rational) -> bool:
    if rational:
        return x == y
    return abs(float(x) - float(y)) <= _FLOAT_TOL * (1.0 + abs(float(y)))


# -- sections ---------------------------------------------------------------------

def _sn_near(x, y, rtol=1e-12):
    if x.config.rational:
        return x == y
    scale = float(x.norm()) + float(y.norm())
    return float((x - y).norm()) <= rtol * (1.0 + scale)


def _section_ring(rng, cfg, cases):
    failures = []
    one = cfg.one()
    for t in range(cases):
        x = rand_homogeneous(rng, cfg, "even", terms=2)
        y = rand_homogeneous(rng, cfg, "odd", terms=2)
        z = rand_homogeneous(rng, cfg, "even", terms=2) + rand_pure(
            rng, cfg, 1)
        if not _sn_near((x * y) * z, x * (y * z)):
            failures.append(f"case {t}: associativity")
        if not _sn_near(x * (y + z), x * y + x * z):
            failures.append(f"case {t}: distributivity")
        if not _sn_near(multiply(x, one), x):
            failures.append(f"case {t}: unit")
        nxy = float((x * y).norm())
        bound = float(x.norm()) * float(y.norm())
        if nxy > bound * (1 + 1e-12):
            failures.append(f"case {t}: submultiplicativity")
    L = cfg.generator_count
    for i in range(1, L + 1):
        gi = cfg.generator(i)
        if not (gi * gi).is_zero():
            failures.append(f"generator {i}: square")
        for j in range(i + 1, L + 1):
            gj = cfg.generator(j)
            if gi * gj != -(gj * gi):
                failures.append(f"generators {i},{j}: anticommutation")
    return failures


def _section_inversion(rng, cfg, cases):
    failures = []
    one = cfg.one()
    half = Fraction(1, 2) if cfg.rational else 0.5
    for t in range(cases):
        z = rand_homogeneous(rng, cfg, "even", terms=2, body_nonzero=True)
        prod = z * invert(z)
        if cfg.rational:
            ok = prod == one
        else:
            ok = float((prod - one).norm()) <= _FLOAT_TOL
        if not ok:
            failures.append(f"case {t}: inversion round-trip")

        mu = rand_homogeneous(rng, cfg, "even", terms=2,
                              include_body=False).scale(
                                  rand_coeff(rng, cfg, Fraction(1, 4)
                                             if cfg.rational else 0.25))
        w = binomial_inverse_sqrt(mu)
        lhs = w * w * (one + mu)
        if cfg.rational:
            ok = lhs == one
        else:
            ok = float((lhs - one).norm()) <= _FLOAT_TOL
        if not ok:
            failures.append(f"case {t}: binomial identity")

        # the normalized criterion: with ||d|| = 1, the reduction condition
        # ||s|| / |beta| < 1 is the same statement as ||s|| < 1/2
        d = rand_homogeneous(rng, cfg, "even", terms=2, body_nonzero=True)
        nd = d.norm()
        if nd == 0:
            continue
        dn = d / nd
        s = dn.soul().norm()
        beta = abs(dn.body())
        if beta == 0:
            continue
        if (s / beta < 1) != (s < half):
            failures.append(f"case {t}: normalized criterion")
    return failures


def _section_canonical(rng, cfg, m, n, cases):
    failures = []
    results = []
    for t in range(cases):
        G = random_metric(rng, cfg, m, n)
        res = canonical_form(SuperMetric(G))
        results.append((G, res))
        resid = congruence(res.P, G) - res.Gamma
        scale = float(G.induced_norm())
        if not _near_zero(resid, scale * scale):
            failures.append(f"case {t}: congruence residual")
        if any(d.body() == 0 for d in res.d):
            failures.append(f"case {t}: degenerate eta body")
    return failures, results


def _section_body_reduce(results):
    failures = []
    for t, (G, res) in enumerate(results):
        red = body_reduce(res)
        cfg = red.P.config
        signs = [e.body() for e in red.d]
        if any(abs(s) != 1 for s in signs):
            failures.append(f"case {t}: eta not +-1")
        if any(sa < sb for sa, sb in zip(signs, signs[1:])):
            failures.append(f"case {t}: ordering")
        resid = congruence(red.P, G) - red.Gamma
        if cfg.rational and all(r["scale_exact"] for r in red.reducibility):
            ok = resid.is_zero()
        else:
            # a dyadic square-root approximation bounds the residual by
            # float precision, not zero
            ok = float(resid.entry_norm_max()) <= 1e-9 * (
                1.0 + float(G.induced_norm()))
        if not ok:
            failures.append(f"case {t}: reduced congruence residual")
        if cfg.rational:
            for rec in red.reducibility:
                if not rec["scale_exact"]:
                    continue
                lam = rec["lambda"]
                want = cfg.scalar(rec["sign"])
                if lam * lam * res.d[rec["index"]] != want:
                    failures.append(
                        f"case {t}: lambda^2 d at index {rec['index']}")
    return failures


def _section_isometry(rng, cfg, m, n, cases):
    failures = []
    gamma = standard_gamma(cfg, (m + 1) // 2, m // 2, n)
    basis = lie_basis(gamma)
    dim0 = len(basis.g0)
    want0 = m * (m - 1) // 2 + n * (n + 1) // 2
    if dim0 != want0 or len(basis.g1) != m * n:
        failures.append("basis dimensions")
    for t in range(cases):
        ell = random_member(rng, basis, terms=3)
        rep = lie_membership(ell, gamma)
        if not rep["member"]:
            failures.append(f"case {t}: member rejected")
        if not rep["agree"]:
            failures.append(f"case {t}: formulations disagree (member)")
        # corrupt one diagonal entry; eta-skewness forces a zero diagonal,
        # so a body bump on it must break membership
        bump = SuperMatrix.zeros(cfg, gamma.shape, "even")
        rows = [list(r) for r in bump.rows]
        rows[0][0] = cfg.one()
        bad = ell + SuperMatrix(cfg, gamma.shape, rows, "even")
        rep = lie_membership(bad, gamma)
        if rep["member"]:
            failures.append(f"case {t}: corrupted member accepted")
        if not rep["agree"]:
            failures.append(f"case {t}: formulations disagree (reject)")
    for t in range(max(1, cases // 3)):
        soul = random_member(rng, basis, terms=2, soul_only=True)
        if not is_isometry(exp_zero_body(soul), gamma):
            failures.append(f"case {t}: exponential not an isometry")
    return failures


def _section_ad(rng, cfg, m, n, cases):
    failures = []
    gamma = standard_gamma(cfg, (m + 1) // 2, m // 2, n)
    basis = lie_basis(gamma)
    real_basis = basis.elements()
    for t in range(cases):
        X = random_nil(rng, basis, terms=2)
        ad = ad_operator(X.X, real_basis, basis_tag="g0+g1")
        if not ad.has_zero_body():
            failures.append(f"case {t}: ad body nonzero")
        if spectrum_gate(ad, 0) != "singular":
            failures.append(f"case {t}: gate at zero")
        for _ in range(3):
            xi = rand_coeff(rng, cfg, nonzero=True)
            if spectrum_gate(ad, xi) != "invertible":
                failures.append(f"case {t}: gate at xi={xi}")
    # one flat run over the index-tagged family
    X = random_nil(rng, basis, terms=2)
    ad = ad_operator(X.X, basis.hJ_matrices(), basis_tag="hJ")
    if not ad.has_zero_body():
        failures.append("flat ad body nonzero")
    if spectrum_gate(ad, 0) != "singular":
        failures.append("flat gate at zero")
    return failures


def _grade_one_nil(rng, basis, terms=2):
    """Nil element whose factors are single generators; any product of more
    than L of them vanishes, so the order-L series is exact."""
    cfg = basis.gamma.config
    gamma = basis.gamma
    acc = SuperMatrix.zeros(cfg, gamma.shape, "even")
    g1 = basis.g1
    for _ in range(terms):
        pos = int(rng.integers(0, len(g1)))
        acc = acc + _scale_by_supernumber(
            g1[pos], rand_pure(rng, cfg, 1, Fraction(1, 2)
                               if cfg.rational else 0.5))
    return NilElement(acc, gamma)


def _section_bch(rng, cfg, m, n, cases):
    failures = []
    gamma = standard_gamma(cfg, (m + 1) // 2, m // 2, n)
    basis = lie_basis(gamma)
    zero = SuperMatrix.zeros(cfg, gamma.shape, "even")
    identity = NilElement(zero, gamma)
    for t in range(cases):
        X = random_nil(rng, basis, terms=2)
        Y = random_nil(rng, basis, terms=2)
        Z = random_nil(rng, basis, terms=2)
        if not _near_zero(diamond(X, identity).X - X.X,
                          X.X.induced_norm()):
            failures.append(f"case {t}: right identity")
        if not _near_zero(diamond(X, -X).X):
            failures.append(f"case {t}: inverse")
        lhs = diamond(diamond(X, Y), Z).X
        rhs = diamond(X, diamond(Y, Z)).X
        if not _near_zero(lhs - rhs, lhs.induced_norm()):
            failures.append(f"case {t}: associativity")

        # order 2 equals X + Y + [X,Y]/2 by construction of the tables
        ser = bch_series(X.X, Y.X, BCHOrderConfig(max_order=2))
        br = X.X @ Y.X - Y.X @ X.X
        expand = X.X + Y.X + br.scale(
            Fraction(1, 2) if cfg.rational else 0.5)
        if not _near_zero(ser - expand, expand.induced_norm()):
            failures.append(f"case {t}: order-2 expansion")
    # series vs exact law, exact at grade-1 souls once the order reaches L
    order = min(cfg.generator_count, 6)
    X = _grade_one_nil(rng, basis)
    Y = _grade_one_nil(rng, basis)
    ser = bch_series(X.X, Y.X, BCHOrderConfig(max_order=order))
    exact = diamond(X, Y).X
    if cfg.rational:
        ok = ser == exact
    else:
        ok = _near_zero(ser - exact, exact.induced_norm())
    if not ok:
        failures.append(f"series at order {order} differs from exact law")
    return failures


def _ge_equal(h1: GroupElement, h2: GroupElement) -> bool:
    cfg = h1.gamma.config
    k = h1.gamma.m + h1.gamma.n
    for i in range(k):
        for j in range(k):
            if not _scalar_near(h1.g_body[i][j], h2.g_body[i][j],
                                cfg.rational):
                return False
    diff = h1.n_part.X - h2.n_part.X
    return _near_zero(diff, h1.n_part.X.induced_norm())


def _section_semidirect(rng, cfg, m, n, cases):
    failures = []
    gamma = standard_gamma(cfg, (m + 1) // 2, m // 2, n)
    basis = lie_basis(gamma)
    ident = GroupElement.identity(gamma)
    for t in range(cases):
        h1 = random_group_element(rng, basis)
        h2 = random_group_element(rng, basis)
        h3 = random_group_element(rng, basis)
        if not _ge_equal(semidirect_multiply(h1, ident), h1):
            failures.append(f"case {t}: right identity")
        if not _ge_equal(semidirect_multiply(ident, h1), h1):
            failures.append(f"case {t}: left identity")
        if not _ge_equal(semidirect_multiply(h1, semidirect_inverse(h1)),
                         ident):
            failures.append(f"case {t}: inverse")
        lhs = semidirect_multiply(semidirect_multiply(h1, h2), h3)
        rhs = semidirect_multiply(h1, semidirect_multiply(h2, h3))
        if not _ge_equal(lhs, rhs):
            failures.append(f"case {t}: associativity")

        # alpha is a homomorphism of the body group
        g1 = random_body_isometry(rng, gamma)
        g2 = random_body_isometry(rng, gamma)
        Y = random_nil(rng, basis, terms=2)
        k = gamma.m + gamma.n
        g12 = [[sum(g1[i][s] * g2[s][j] for s in range(k))
                for j in range(k)] for i in range(k)]
        lhs_n = conjugate_action(g12, Y)
        rhs_n = conjugate_action(g1, conjugate_action(g2, Y))
        if not _near_zero(lhs_n.X - rhs_n.X, lhs_n.X.induced_norm()):
            failures.append(f"case {t}: alpha homomorphism")

        # embedding respects products and lands in the isometry group
        image = embed_isometry(semidirect_multiply(h1, h2))
        prod = embed_isometry(h1) @ embed_isometry(h2)
        if not _near_zero(image - prod, prod.induced_norm()):
            failures.append(f"case {t}: embedding homomorphism")
        if not is_isometry(image, gamma):
            failures.append(f"case {t}: image not an isometry")
    return failures


_PLAN = (
    ("grassmann_ring", 40),
    ("inversion_binomial", 30),
    ("canonicalization", 6),
    ("body_reduction", 6),
    ("isometry_lie", 8),
    ("ad_spectrum", 6),
    ("bch", 4),
    ("semidirect", 3),
)


def run_verify(config: AlgebraConfig, seed: int, m: int = 2, n: int = 2,
               strict: bool = False) -> dict:
    """Run all sections; returns the report dict (no I/O here)."""
    rng = make_rng(seed)
    plan = dict(_PLAN)
    sections = []
    canon_results = []

    def record(name, cases, failures):
        sections.append({
            "name": name,
            "cases": cases,
            "status": "pass" if not failures else "fail",
            "failures": failures[:8],
        })

    record("grassmann_ring", plan["grassmann_ring"],
           _section_ring(rng, config, plan["grassmann_ring"]))
    record("inversion_binomial", plan["inversion_binomial"],
           _section_inversion(rng, config, plan["inversion_binomial"]))
    fails, canon_results = _section_canonical(
        rng, config, m, n, plan["canonicalization"])
    record("canonicalization", plan["canonicalization"], fails)
    record("body_reduction", len(canon_results),
           _section_body_reduce(canon_results))
    record("isometry_lie", plan["isometry_lie"],
           _section_isometry(rng, config, m, n, plan["isometry_lie"]))
    record("ad_spectrum", plan["ad_spectrum"],
           _section_ad(rng, config, m, n, plan["ad_spectrum"]))
    record("bch", plan["bch"],
           _section_bch(rng, config, m, n, plan["bch"]))
    record("semidirect", plan["semidirect"],
           _section_semidirect(rng, config, m, n, plan["semidirect"]))

    status = "pass" if all(s["status"] == "pass" for s in sections) else \
        "fail"
    return {
        "command": "verify",
        "mode": "rational" if config.rational else "float64",
        "seed": int(seed),
        "generator_count": config.generator_count,
        "shape": {"m": m, "n": n},
        "strict": bool(strict),
        "sections": sections,
        "status": status,
    }
