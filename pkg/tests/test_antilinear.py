import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardyconj.antilinear import (
    Block2Conjugation,
    ConjugationError,
    Kind,
    Mode,
    PointConjugation,
    antilinear_sharp,
    block2_check,
    check_Mz_relation,
    compose_points,
    extract_symbol,
    make_canonical,
    make_structured,
    preserves_H2,
    random_structured,
    rebase,
    symmetry_residual,
    verify_axioms,
)
from hardyconj.circfield import CircleField, OperatorSymbol, inner_product, project_plus, random_field

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)
kinds = st.sampled_from(list(Kind))


def test_point_conjugation_validation():
    with pytest.raises(ConjugationError):
        PointConjugation(np.array([[1, 1j], [0, 1]]))
    with pytest.raises(ValueError):
        PointConjugation(np.ones(3))
    J = PointConjugation.swap(3)
    np.testing.assert_array_equal(J([1, 2j, 3]), [3, -2j, 1])


@given(dims, seeds)
def test_random_point_conjugation_is_involutive_isometry(d, seed):
    J = PointConjugation.random(d, seed)
    x = np.random.default_rng(seed).standard_normal(d) + 1j
    assert np.allclose(J(J(x)), x, atol=1e-12)
    assert abs(np.linalg.norm(J(x)) - np.linalg.norm(x)) < 1e-12


def test_canonical_actions_on_monomials():
    J = PointConjugation.standard(1)
    f = CircleField.monomial(2, [1j])
    star = make_canonical(J, Kind.STAR)(f)
    tilde = make_canonical(J, Kind.TILDE)(f)
    assert star.n_min == 2 and star.coeff(2)[0] == -1j
    assert tilde.n_min == -2 and tilde.coeff(-2)[0] == -1j


def test_symmetry_residual_reports_index():
    J = PointConjugation.standard(1)
    # every unimodular scalar is TILDE-symmetric for K = 1
    assert symmetry_residual(OperatorSymbol.scalar({1: 1j}), J, Kind.TILDE) == (0.0, None)
    # a constant is symmetric iff its matrix is; the rotation is antisymmetric
    rot = OperatorSymbol.constant([[0, 1], [-1, 0]])
    res, idx = symmetry_residual(rot, PointConjugation.standard(2), Kind.STAR)
    assert res == pytest.approx(2 * np.sqrt(2)) and idx == 0


def test_make_structured_rejects():
    J = PointConjugation.standard(2)
    with pytest.raises(ConjugationError, match="unitary"):
        make_structured(OperatorSymbol.constant(2 * np.eye(2)), J, Kind.STAR)
    with pytest.raises(ConjugationError, match="symmetry"):
        make_structured(OperatorSymbol.constant([[0, 1], [-1, 0]]), J, Kind.STAR)


@given(dims, kinds, seeds)
def test_random_structured_satisfies_axioms(d, kind, seed):
    J = PointConjugation.random(d, seed)
    C = random_structured(d, kind, J, seed)
    assert verify_axioms(C, trials=5, seed=seed, tol=1e-11)
    rel = "commute" if kind is Kind.STAR else "intertwine"
    assert check_Mz_relation(C, rel, tol=1e-11, band=(-3, 3))


@given(dims, kinds, seeds)
def test_antilinear_sharp_of_conjugation_is_itself(d, kind, seed):
    J = PointConjugation.random(d, seed)
    C = random_structured(d, kind, J, seed)
    f, g = random_field(d, (-3, 3), seed), random_field(d, (-2, 4), seed + 1)
    S = antilinear_sharp(C)
    assert abs(inner_product(C(f), g) - np.conj(inner_product(f, S(g)))) < 1e-11 * f.norm() * g.norm()
    assert S.U.distance(C.U) < 1e-11


@given(dims, kinds, seeds)
def test_extract_and_rebase(d, kind, seed):
    J = PointConjugation.random(d, seed)
    Jp = PointConjugation.random(d, seed + 1)
    C = random_structured(d, kind, J, seed)
    assert extract_symbol(C, kind, J).distance(C.U) < 1e-12
    R = rebase(C, Jp)
    assert R.U.distance(C.U @ OperatorSymbol.constant(compose_points(J, Jp))) == 0.0
    f = random_field(d, (-2, 2), seed)
    assert (R(f) - C(f)).norm() < 1e-12 * f.norm()


def test_extract_rejects_non_covariant_action():
    J = PointConjugation.standard(2)
    C = make_canonical(J, Kind.STAR)
    with pytest.raises(ConjugationError, match="not a multiplication"):
        extract_symbol(lambda f: C(project_plus(f)), Kind.STAR, J)


def test_block_check_modes():
    cos, sin = {-1: 0.5, 1: 0.5}, {-1: 0.5j, 1: -0.5j}
    assert block2_check(cos, sin, cos, Mode.COMMUTING)
    assert not block2_check(cos, sin, cos, Mode.INTERTWINING)
    blk = Block2Conjugation(OperatorSymbol.scalar(cos), OperatorSymbol.scalar(sin), OperatorSymbol.scalar(cos), Mode.COMMUTING)
    f = random_field(2, (-2, 2), 0)
    assert (blk(f) - blk.to_space()(f)).norm() < 1e-13
    assert (blk(blk(f)) - f).norm() < 1e-12


def test_preserves_H2_constant_and_witness():
    J = PointConjugation.standard(2)
    C = make_structured(OperatorSymbol.constant([[0, 1], [1, 0]]), J, Kind.STAR)
    rep = preserves_H2(C)
    assert rep and rep.symmetry_residual == 0.0 and rep.constancy_residual == 0.0
    bad = preserves_H2(make_canonical(J, Kind.TILDE))
    assert not bad and bad.witness is not None and bad.witness.n_min >= 0


def test_unknown_relation_raises():
    with pytest.raises(ValueError):
        check_Mz_relation(make_canonical(PointConjugation.standard(1), Kind.STAR), "anticommute")
