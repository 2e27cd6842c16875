"""Block matrices: graded transpose, inversion, exp/log, adjoint operators."""

from fractions import Fraction

import pytest

from supermetric.algebra import AlgebraConfig
from supermetric.errors import (
    BasisDegenerate,
    BodyNotInvertible,
    ConfigMismatch,
    NonZeroBody,
    NonZeroBodyOperator,
    NotUnipotent,
    ParityMismatch,
    ShapeMismatch,
)
from supermetric.matrices import (
    BlockShape,
    SuperMatrix,
    ad_operator,
    exp_zero_body,
    graded_bracket,
    invert_matrix,
    log_unipotent,
    spectrum_gate,
)
from supermetric.sampling import basis_for, make_rng, random_member, \
    random_nil

RAT = AlgebraConfig(generator_count=4, coefficient_mode="rational")
FLT = AlgebraConfig(generator_count=4, coefficient_mode="float64")


def _sample_even(cfg):
    """Invertible even-class (1|2) matrix with souls in every block."""
    z = cfg.zero()
    A = [[cfg.scalar(2) + cfg.term([1, 2], Fraction(1, 3))]]
    B = [[z, cfg.one() + cfg.term([3, 4], 1)],
         [-(cfg.one() + cfg.term([3, 4], 1)), z]]
    C = [[cfg.generator(1), cfg.term([2], -2)]]
    D = [[cfg.term([1, 2, 3], 1)], [cfg.generator(4)]]
    return SuperMatrix.from_blocks(cfg, A, C, D, B, "even")


def test_shape_and_parity_checks():
    M = _sample_even(RAT)
    assert M.shape == BlockShape(1, 2)
    assert M.check_parity_class()
    with pytest.raises(ParityMismatch):
        SuperMatrix.zeros(RAT, (1, 1), "strange")
    N = SuperMatrix.zeros(RAT, (2, 0), "even")
    with pytest.raises(ShapeMismatch):
        M @ N
    with pytest.raises(ConfigMismatch):
        M @ _sample_even(FLT)


def test_wrongly_placed_entries_fail_parity_check():
    z = RAT.zero()
    rows = [[RAT.generator(1), z], [z, z]]
    M = SuperMatrix(RAT, BlockShape(1, 1), rows, "even")
    assert not M.check_parity_class()


def test_supertranspose_blocks_and_antihomomorphism():
    M = _sample_even(RAT)
    N = _sample_even(RAT) @ _sample_even(RAT)
    st = M.supertranspose()
    # [[A^T, -D^T], [C^T, B^T]]
    assert st.block_a()[0][0] == M.block_a()[0][0]
    assert st.block_c()[0][0] == -M.block_d()[0][0]
    assert st.block_d()[0][0] == M.block_c()[0][0]
    assert (M @ N).supertranspose() == N.supertranspose() @ M.supertranspose()
    with pytest.raises(ParityMismatch):
        SuperMatrix.zeros(RAT, (1, 1), "odd").supertranspose()


def test_supertranspose_involution_sign():
    # on the even class the double supertranspose flips the sign of the
    # off-diagonal blocks
    M = _sample_even(RAT)
    twice = M.supertranspose().supertranspose()
    assert twice.block_a() == M.block_a()
    assert twice.block_b() == M.block_b()
    assert twice.block_c()[0][0] == -M.block_c()[0][0]
    assert twice.block_d()[0][0] == -M.block_d()[0][0]


def test_body_of_odd_class_vanishes():
    z = RAT.zero()
    rows = [[z, RAT.generator(1)], [RAT.generator(2), z]]
    M = SuperMatrix(RAT, BlockShape(1, 1), rows, "odd")
    assert M.has_zero_body()
    assert all(v == 0 for r in M.body() for v in r)


def test_invert_matrix_round_trip():
    for cfg in (RAT, FLT):
        M = _sample_even(cfg)
        inv = invert_matrix(M)
        I = SuperMatrix.identity(cfg, M.shape)
        resid = (M @ inv - I).entry_norm_max()
        if cfg.rational:
            assert resid == 0
            assert (inv @ M - I).entry_norm_max() == 0
        else:
            assert float(resid) < 1e-12
        assert inv.parity_class == "even"


def test_invert_matrix_gates_on_body():
    z = RAT.zero()
    rows = [[RAT.generator(1), z], [z, RAT.one()]]
    M = SuperMatrix(RAT, BlockShape(2, 0), rows, "even")
    with pytest.raises(BodyNotInvertible):
        invert_matrix(M)


def test_exp_log_round_trip():
    for cfg in (RAT, FLT):
        basis = basis_for(cfg, 1, 1, 2)
        rng = make_rng(5)
        X = random_member(rng, basis, terms=3, soul_only=True)
        U = exp_zero_body(X)
        back = log_unipotent(U)
        resid = (back - X).entry_norm_max()
        inv_resid = (U @ exp_zero_body(-X) -
                     SuperMatrix.identity(cfg, X.shape)).entry_norm_max()
        if cfg.rational:
            assert resid == 0
            assert inv_resid == 0
        else:
            assert float(resid) < 1e-12
            assert float(inv_resid) < 1e-12


def test_exp_rejects_nonzero_body():
    M = _sample_even(RAT)
    with pytest.raises(NonZeroBody):
        exp_zero_body(M)


def test_log_rejects_non_unipotent():
    M = _sample_even(RAT)
    with pytest.raises(NotUnipotent):
        log_unipotent(M)
    # identity plus a body perturbation is still rejected
    I = SuperMatrix.identity(RAT, (1, 2))
    with pytest.raises(NotUnipotent):
        log_unipotent(I.scale(2))


def test_graded_bracket_kinds():
    cfg = RAT
    basis = basis_for(cfg, 1, 1, 2)
    even_el = basis.g0[0]
    odd_el = basis.g1[0]
    # even with anything: plain commutator
    assert graded_bracket(even_el, odd_el) == \
        even_el @ odd_el - odd_el @ even_el
    # both odd-kind: anticommutator
    assert graded_bracket(odd_el, basis.g1[1]) == \
        odd_el @ basis.g1[1] + basis.g1[1] @ odd_el


def test_ad_structure_constants_route():
    for cfg in (RAT, FLT):
        basis = basis_for(cfg, 1, 1, 2)
        rng = make_rng(9)
        X = random_nil(rng, basis, terms=2)
        ad = ad_operator(X.X, basis.elements(), basis_tag="real")
        assert ad.coordinate_field == "grassmann"
        r = len(basis.elements())
        assert ad.matrix.shape == BlockShape(r, 0)
        assert ad.has_zero_body()


def test_ad_composition_matches_operator_product():
    # for even-class arguments the coordinate matrices compose: the operator
    # of ad X followed by ad Y acts as the matrix product
    cfg = RAT
    basis = basis_for(cfg, 1, 1, 2)
    rng = make_rng(13)
    X = random_nil(rng, basis, terms=2)
    Y = random_nil(rng, basis, terms=2)
    flat = basis.elements()
    adX = ad_operator(X.X, flat, basis_tag="real")
    adY = ad_operator(Y.X, flat, basis_tag="real")
    prod = adX.matrix @ adY.matrix

    # apply the composite to each basis element directly and compare with
    # the column of the matrix product
    for j, bj in enumerate(flat):
        inner = Y.X @ bj - bj @ Y.X
        outer = X.X @ inner - inner @ X.X
        col = [prod.rows[k][j] for k in range(len(flat))]
        recomposed = SuperMatrix.zeros(cfg, X.X.shape, "even")
        for k, c in enumerate(col):
            if not c.is_zero():
                rows = [[c * e for e in r] for r in flat[k].rows]
                recomposed = recomposed + SuperMatrix(
                    cfg, X.X.shape, rows, "general")
        assert (recomposed - outer).entry_norm_max() == 0


def test_ad_flat_route_levels_and_nilpotence():
    for cfg in (RAT, FLT):
        basis = basis_for(cfg, 1, 1, 2)
        rng = make_rng(17)
        X = random_nil(rng, basis, terms=2)
        family = basis.hJ_matrices()
        ad = ad_operator(X.X, family, basis_tag="hJ")
        assert ad.coordinate_field == "real"
        assert len(ad.levels) == len(family)
        assert ad.has_zero_body()
        # soul source strictly raises the index level, so some power of the
        # flat matrix vanishes
        power = ad.matrix
        for _ in range(cfg.generator_count):
            power = power @ ad.matrix
        assert power.is_zero() or float(power.entry_norm_max()) < 1e-30


def test_ad_rejects_bad_bases():
    cfg = RAT
    basis = basis_for(cfg, 1, 1, 2)
    rng = make_rng(21)
    X = random_nil(rng, basis, terms=2)
    with pytest.raises(BasisDegenerate):
        ad_operator(X.X, [], basis_tag="empty")
    with pytest.raises(BasisDegenerate):
        ad_operator(X.X, [SuperMatrix.zeros(cfg, X.X.shape, "even")],
                    basis_tag="zero")
    dup = [basis.g0[0], basis.g0[0]]
    with pytest.raises(BasisDegenerate):
        ad_operator(X.X, dup, basis_tag="dup")
    other = basis_for(FLT, 1, 1, 2)
    with pytest.raises(ConfigMismatch):
        ad_operator(X.X, other.elements(), basis_tag="other-config")


def test_spectrum_gate():
    cfg = RAT
    basis = basis_for(cfg, 1, 1, 2)
    rng = make_rng(25)
    X = random_nil(rng, basis, terms=2)
    ad = ad_operator(X.X, basis.elements(), basis_tag="real")
    assert spectrum_gate(ad, 0) == "singular"
    assert spectrum_gate(ad, Fraction(1, 7)) == "invertible"
    assert spectrum_gate(ad, -3) == "invertible"
    member = random_member(rng, basis, terms=2)  # nonzero body allowed
    ad_bad = ad_operator(member, basis.elements(), basis_tag="real")
    if not ad_bad.has_zero_body():
        with pytest.raises(NonZeroBodyOperator):
            spectrum_gate(ad_bad, 1)
