"""Acceptance criteria 1-12, one test each, at the stated tolerances."""

import json
import subprocess
import sys

import numpy as np

from hardyconj import (
    Block2Conjugation,
    CircleField,
    Kind,
    Mode,
    ModelContext,
    OperatorSymbol,
    PointConjugation,
    block2_check,
    check_Mz_relation,
    extract_symbol,
    make_C_Theta_J,
    make_canonical,
    make_structured,
    preserves_H2,
    random_structured,
    rebase,
    verify_axioms,
)
from hardyconj.antilinear import compose_points
from hardyconj.circfield import random_field, random_symbol
from hardyconj.innerfun import divides, quotient, random_j_symmetric_inner, two_sided_divisibility_check
from hardyconj.modelspace import (
    compressed_matrix,
    decompose_on_KTheta,
    invariance_residual,
    jstar_model_identities,
    kernel,
    make_pair_conjugation,
    model_operator_adjoint_apply,
    model_operator_apply,
    shift_invariant_analyze,
)
from hardyconj.verify_cli.registry import model_corpus

import oracles

SEED = 7
J1 = PointConjugation.standard(2)
J2 = PointConjugation.swap(2)


def diag_z(*powers):
    return OperatorSymbol.diagonal(*(OperatorSymbol.scalar({p: 1.0}) for p in powers))


def scalar(terms):
    return OperatorSymbol.scalar(terms)


def test_criterion_01_canonical_conjugations(acceptance):
    worst_ax, worst_rel = 0.0, 0.0
    for J in (J1, J2, PointConjugation.random(3, SEED)):
        for kind, rel in ((Kind.TILDE, "intertwine"), (Kind.STAR, "commute")):
            C = make_canonical(J, kind)
            ax = verify_axioms(C, trials=100, seed=SEED, tol=1e-12)
            worst_ax = max(worst_ax, *ax.residuals.values())
            worst_rel = max(worst_rel, check_Mz_relation(C, rel, tol=0.0).residual)
    ok = worst_ax <= 1e-12 and worst_rel == 0.0
    acceptance(1, ok, f"canonical J~/J* axioms {worst_ax:.1e} <= 1e-12, M_z relations exact ({worst_rel:.1e})")
    assert ok


def test_criterion_02_block_examples(acceptance):
    cos = {-1: 0.5, 1: 0.5}
    sin = {-1: 0.5j, 1: -0.5j}
    neg_sin = {-1: -0.5j, 1: 0.5j}
    cases = [
        (Mode.COMMUTING, cos, sin, cos, "commute"),
        (Mode.INTERTWINING, sin, cos, neg_sin, "intertwine"),
    ]
    worst_cond = worst_ax = worst_rel = 0.0
    for mode, p1, p2, p4, rel in cases:
        rep = block2_check(scalar(p1), scalar(p2), scalar(p4), mode, tol=1e-13)
        worst_cond = max(worst_cond, *rep.residuals.values())
        blk = Block2Conjugation(scalar(p1), scalar(p2), scalar(p4), mode)
        C = make_structured(blk.symbol(), J1, blk.kind)
        worst_ax = max(worst_ax, *verify_axioms(C, trials=100, seed=SEED).residuals.values())
        worst_rel = max(worst_rel, check_Mz_relation(C, rel).residual)
    ok = worst_cond <= 1e-13 and worst_ax <= 1e-10 and worst_rel <= 1e-10
    acceptance(2, ok, f"cos/sin blocks: conditions {worst_cond:.1e} <= 1e-13, axioms {worst_ax:.1e}, relation {worst_rel:.1e}")
    assert ok


def test_criterion_03_normal_form_round_trip(acceptance):
    worst_rec = worst_rebase = 0.0
    for kind in Kind:
        for k in range(50):
            d = 1 + k % 3
            J = PointConjugation.random(d, [SEED, k])
            Jp = PointConjugation.random(d, [SEED, 100 + k])
            C = random_structured(d, kind, J, [SEED, 200 + k])
            U = extract_symbol(lambda f: C(f), kind, J)
            worst_rec = max(worst_rec, float(np.max(np.abs(U.window(-20, 20) - C.U.window(-20, 20)))))
            Up = extract_symbol(lambda f: C(f), kind, Jp)
            expected = C.U @ OperatorSymbol.constant(compose_points(J, Jp))
            worst_rebase = max(worst_rebase, Up.distance(expected), rebase(C, Jp).U.distance(expected))
    ok = worst_rec <= 1e-11 and worst_rebase <= 1e-12
    acceptance(3, ok, f"100 random (U,J): recovery {worst_rec:.1e} <= 1e-11, rebase {worst_rebase:.1e} <= 1e-12")
    assert ok


def test_criterion_04_preserving_H2(acceptance):
    worst_sym = 0.0
    const_ok = nonconst_ok = tilde_ok = True
    for k in range(30):
        d = 1 + k % 3
        J = PointConjugation.random(d, [SEED, 300 + k])
        C = random_structured(d, Kind.STAR, J, [SEED, 400 + k], n_factors=0)
        rep = preserves_H2(C)
        const_ok &= rep.ok and np.allclose(rep.U0.conj().T @ rep.U0, np.eye(d), atol=1e-12)
        if rep.ok:
            worst_sym = max(worst_sym, rep.symmetry_residual)
        # scalar STAR symbols built this way can collapse to constants
        Jn = PointConjugation.random(2 + k % 2, [SEED, 300 + k])
        N = random_structured(Jn.dim, Kind.STAR, Jn, [SEED, 500 + k], n_factors=2)
        assert (N.U - OperatorSymbol.constant(N.U.coeff(0))).norm() > 1e-6
        bad = preserves_H2(N)
        nonconst_ok &= (not bad.ok) and bad.witness is not None and bad.witness_residual > 1e-10
    for k in range(50):
        d = 1 + k % 3
        J = PointConjugation.random(d, [SEED, 600 + k])
        T = random_structured(d, Kind.TILDE, J, [SEED, 700 + k], n_factors=k % 3)
        rep = preserves_H2(T)
        tilde_ok &= (not rep.ok) and rep.witness is not None
    ok = const_ok and worst_sym <= 1e-11 and nonconst_ok and tilde_ok
    acceptance(
        4, ok, f"constant U0 kept with symmetry {worst_sym:.1e} <= 1e-11; non-constant STAR and 50 TILDE all witnessed"
    )
    assert ok


def test_criterion_05_example_diag_z_z2(acceptance):
    ctx = ModelContext(diag_z(1, 2), J1)
    expected = [CircleField.monomial(0, [1, 0]), CircleField.monomial(0, [0, 1]), CircleField.monomial(1, [0, 1])]
    basis_ok = len(ctx.basis) == 3 and all(b.distance(e) <= 1e-13 for b, e in zip(ctx.basis, expected))
    inv = invariance_residual(make_C_Theta_J(ctx), ctx)[0]
    worst_v0 = 0.0
    rng = np.random.default_rng(SEED)
    for _ in range(8):
        l1, l4 = np.exp(2j * np.pi * rng.random(2))
        U = OperatorSymbol.from_blocks([[scalar({0: l1}), None], [None, scalar({1: l4})]])
        rep = decompose_on_KTheta(make_structured(U, J1, Kind.TILDE), ctx)
        assert rep.ok
        worst_v0 = max(worst_v0, float(np.linalg.norm(rep.artifacts["V0"] - np.diag([l1, l4]))))
    ok = basis_ok and inv <= 1e-12 and worst_v0 <= 1e-12
    acceptance(5, ok, f"dim K_Theta = {len(ctx.basis)} with monomial basis; invariance {inv:.1e}; V0 error {worst_v0:.1e}")
    assert ok


def test_criterion_06_kernels(acceptance):
    K0 = PointConjugation.random(2, SEED).K
    thetas = [(diag_z(1, 2), J1), (OperatorSymbol.constant(K0) @ diag_z(1, 2), PointConjugation(K0))]
    worst_excess = worst_zero = 0.0
    for theta, J in thetas:
        ctx = ModelContext(theta, J)
        C = make_C_Theta_J(ctx)
        for lam in (0, 0.3 + 0.2j, -0.5):
            for x in np.eye(2):
                k = kernel(ctx, "k", lam, x)
                gap = (C(k.base) - kernel(ctx, "ktilde", lam, J(x)).base).norm()
                if lam == 0:
                    worst_zero = max(worst_zero, gap)
                else:
                    worst_excess = max(worst_excess, gap - k.error_bound)
    ok = worst_excess <= 1e-10 and worst_zero <= 1e-13
    acceptance(6, ok, f"C k_lambda x vs k~_lambda Jx: excess over bound {worst_excess:.1e}, exact at 0 {worst_zero:.1e}")
    assert ok


def test_criterion_07_model_operator_symmetry(acceptance):
    worst = 0.0
    corpus = model_corpus()
    for _, theta, J in corpus:
        ctx = ModelContext(theta, J)
        assert ctx.pure
        C = make_C_Theta_J(ctx)
        A = compressed_matrix(ctx, lambda f: C(model_operator_apply(ctx, C(f))))
        B = compressed_matrix(ctx, lambda f: model_operator_adjoint_apply(ctx, f))
        worst = max(worst, float(np.linalg.norm(A - B)))
    ok = worst <= 1e-10
    acceptance(7, ok, f"C S_Theta C = S_Theta^* on {len(corpus)} pure J-symmetric Theta: {worst:.1e} <= 1e-10")
    assert ok


def test_criterion_08_divisibility(acceptance):
    # hand verdicts: diag(z^a, z^b) <= diag(z^c, z^d) iff a <= c and b <= d
    pairs = [((1, 1), (2, 2)), ((1, 2), (1, 2)), ((1, 2), (2, 2)), ((0, 0), (1, 2)), ((2, 1), (1, 2)), ((1, 2), (1, 1)), ((3, 0), (2, 1))]
    hand = [True, True, True, True, False, False, False]
    verdicts_ok = True
    for (a, b), expected in zip(pairs, hand):
        lam, theta = diag_z(*a), diag_z(*b)
        got = divides(lam, theta)
        verdicts_ok &= got == expected
        if got:
            verdicts_ok &= (lam @ quotient(lam, theta)).distance(theta) <= 1e-13
        verdicts_ok &= two_sided_divisibility_check(theta, lam, J1).agree
    for k in range(4):
        J = PointConjugation.random(2, [SEED, 800 + k])
        lam = random_j_symmetric_inner(J, 1, [SEED, 900 + k])
        verdicts_ok &= two_sided_divisibility_check(lam @ lam, lam, J).agree
        verdicts_ok &= two_sided_divisibility_check(lam, lam @ lam, J).agree
    worst = 0.0
    sharp_kinds = set()
    for _, theta, J in model_corpus():
        rep = jstar_model_identities(ModelContext(theta, J), trials=5)
        verdicts_ok &= rep.ok
        worst = max(worst, *rep.residuals.values())
        sharp_kinds.add(theta.distance(OperatorSymbol(theta.offset, np.conj(np.swapaxes(theta.coeffs, 1, 2)))) <= 1e-12)
    ok = verdicts_ok and sharp_kinds == {True, False}
    acceptance(8, ok, f"7 diagonal pairs match hand verdicts; two-sided checks agree; J* identities {worst:.1e}")
    assert ok


def test_criterion_09_example_non_constant(acceptance):
    theta = diag_z(0, 1)
    U0 = OperatorSymbol.constant([[0, 1], [1, 0]])
    C = make_pair_conjugation(theta, theta @ U0, J1).artifacts["C"]
    rep = shift_invariant_analyze(C, ModelContext(theta), ModelContext(theta))
    W = theta @ U0 @ theta.H
    expected = OperatorSymbol.from_terms(2, {-1: [[0, 1], [0, 0]], 1: [[0, 0], [1, 0]]})
    gap = W.distance(expected)
    ok = rep.ok and gap == 0.0 and rep.artifacts["Gamma"].distance(theta @ U0) <= 1e-13
    acceptance(9, ok, f"analysis passes, Theta U0 Theta^* = [[0, z-bar], [z, 0]] (gap {gap:.1e})")
    assert ok


def test_criterion_10_pair_involution(acceptance):
    I1 = PointConjugation.standard(1)
    z = scalar({1: 1.0})
    pairs = [
        (diag_z(1, 2), diag_z(1, 2), J1),
        (diag_z(0, 1), diag_z(0, 1) @ OperatorSymbol.constant([[0, 1], [1, 0]]), J1),
        (diag_z(1, 2), diag_z(2, 1), J1),
        (z, scalar({1: -1.0}), I1),
        (z, scalar({1: 1j}), I1),
        (z, scalar({2: 1.0}), I1),
    ]
    verdicts = []
    agree = True
    for lam, theta, J in pairs:
        rep = make_pair_conjugation(lam, theta, J)
        C = rep.artifacts["C"]
        rng = np.random.default_rng(SEED)
        worst = 0.0
        for _ in range(50):
            f = random_field(lam.dim, (-4, 4), rng)
            worst = max(worst, (C(C(f)) - f).norm() / f.norm())
        agree &= rep.ok == (worst <= 1e-10)
        verdicts.append(rep.ok)
    ok = agree and any(verdicts) and not all(verdicts)
    acceptance(10, ok, f"pair-conjugation verdicts {verdicts} match direct C^2 = I on 50 fields each")
    assert ok


def test_criterion_11_fft_oracle(acceptance):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for i in range(200):
        d = int(rng.integers(1, 4))
        lo1, lo2 = (int(v) for v in rng.integers(-8, 5, 2))
        F = random_symbol(d, (lo1, lo1 + int(rng.integers(0, 9))), rng)
        if i % 2:
            G = random_symbol(d, (lo2, lo2 + int(rng.integers(0, 9))), rng)
            off, c = oracles.product(F, G)
            worst = max(worst, oracles.relative_gap(off, c, F @ G))
        else:
            f = random_field(d, (lo2, lo2 + int(rng.integers(0, 9))), rng)
            off, c = oracles.apply(F, f)
            worst = max(worst, oracles.relative_gap(off, c, F @ f))
    ok = worst <= 1e-12
    acceptance(11, ok, f"200 products/applications vs FFT-grid oracle: {worst:.1e} <= 1e-12 relative")
    assert ok


def test_criterion_12_cli_registry_and_mutation(acceptance, tmp_path):
    run = lambda *a: subprocess.run([sys.executable, "-m", "hardyconj", *a], capture_output=True, text=True)  # noqa: E731
    full = run("all")
    lines = [l for l in full.stdout.splitlines() if l.startswith("CASE ")]
    overrides = tmp_path / "tamper.json"
    overrides.write_text(json.dumps({"ex-2.4": {"psi2": {"1": [0.0, 0.5]}}}))
    tampered = run("--data", str(overrides), "case", "ex-2.4")
    ok = full.returncode == 0 and len(lines) > 0 and tampered.returncode == 1 and " FAIL " in tampered.stdout
    acceptance(12, ok, f"'all' exit {full.returncode} over {len(lines)} cases; sign flip in psi2 gives exit {tampered.returncode}")
    assert ok
