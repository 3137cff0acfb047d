"""
Named scenarios, each a deterministic check with declared tolerances.

A case records named residuals (each with its own tolerance), boolean
checks, and artifacts.  It passes when every residual is within its
tolerance and every check holds.  Example data lives in :data:`DATA`; pass a
modified copy to :func:`run_case` to confirm that a tampered datum is caught.

Characterizations quantify over all conjugations, which no finite run can
do.  Their converse directions are covered by extraction on black-box
actions plus sampled corroboration on random valid and invalid instances.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from ..antilinear import (
    Block2Conjugation,
    ConjugationError,
    Kind,
    Mode,
    PointConjugation,
    SpaceConjugation,
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
from ..circfield import (
    CircleField,
    OperatorSymbol,
    basis_fields,
    is_analytic,
    project_plus,
    random_field,
    random_symbol,
    random_unitary,
    symbol_transform,
)
from ..innerfun import (
    divides,
    is_J_symmetric,
    quotient,
    random_inner,
    random_j_symmetric_inner,
    theta_sharp,
    two_sided_divisibility_check,
)
from ..modelspace import (
    KTheta_residual,
    ModelContext,
    between_model_spaces_commuting,
    between_model_spaces_intertwining,
    check_V_compatibility,
    compressed_matrix,
    decompose_on_KTheta,
    invariance_residual,
    jstar_model_identities,
    kernel,
    make_C_Theta_J,
    make_pair_conjugation,
    model_operator_adjoint_apply,
    model_operator_apply,
    reproducing_residual,
    shift_invariant_analyze,
    symbol_in_disk,
    theta_H2_residual,
)
from .symfile import to_document

DEFAULT_SEED = 20240917
EXACT_TOL = 1e-13  # identities between exact Laurent polynomials
FINE_TOL = 1e-12
RECOVERY_TOL = 1e-11

_S = 1 / np.sqrt(2)

# Scalar Laurent polynomials are {index: coefficient}.
DATA: dict = {
    "ex-2.3": {
        "J1": {"psi1": {0: 1.0}, "psi2": {}, "psi4": {0: 1.0}},
        "J2": {"psi1": {}, "psi2": {0: 1.0}, "psi4": {}},
        "C": {"psi1": {0: _S}, "psi2": {0: _S}, "psi4": {0: -_S}},
    },
    # cos t, sin t, cos t
    "ex-2.4": {"psi1": {-1: 0.5, 1: 0.5}, "psi2": {-1: 0.5j, 1: -0.5j}, "psi4": {-1: 0.5, 1: 0.5}},
    "ex-2.6": {
        "J1": {"psi1": {0: 1.0}, "psi2": {}, "psi4": {0: 1.0}},
        "J2": {"psi1": {}, "psi2": {0: 1.0}, "psi4": {}},
        "C": {"psi1": {0: _S}, "psi2": {0: _S}, "psi4": {0: -_S}},
    },
    # sin t, cos t, -sin t
    "ex-2.7": {"psi1": {-1: 0.5j, 1: -0.5j}, "psi2": {-1: 0.5, 1: 0.5}, "psi4": {-1: -0.5j, 1: 0.5j}},
    # (a, alpha, beta): lambda1 = cos a e^{i alpha}, lambda2 = sin a e^{i beta},
    # lambda4 = -cos a e^{i(2 beta - alpha)}
    "ex-5.3": {"samples": [[0.0, 0.0, 0.0], [0.4, 0.3, 1.2], [1.1, -2.0, 0.5], [np.pi / 2, 0.7, -0.9]]},
    # Theta = diag(z^p, z^q); classified conjugations diag(l1, l4 z) J~ with unimodular l_i
    "ex-6.9": {"powers": [1, 2], "phases": [[0.0, 0.0], [0.3, 1.1], [2.0, -0.7], [-1.4, 3.0]]},
    # Theta = diag(z^p, z^q), U0 = swap
    "ex-8.8": {"powers": [0, 1], "U0": [[0, 1], [1, 0]], "expected": {-1: [[0, 1], [0, 0]], 1: [[0, 0], [1, 0]]}},
    # scalar conditions when one block vanishes: (psi1, psi2, psi4, mode, expected verdict)
    "rem-2.2": [
        [{0: np.exp(0.3j)}, {}, {0: np.exp(-1.1j)}, "commuting", True],
        [{}, {1: 1.0}, {}, "commuting", True],
        [{1: 1.0}, {}, {2: 1.0}, "intertwining", True],
        [{}, {-1: 1.0}, {}, "intertwining", True],
        [{0: 1.0}, {}, {}, "intertwining", False],
    ],
    # diagonal divisibility corpus: (exponents of Lambda, exponents of Theta, Lambda <= Theta)
    "lem-7.2": [
        [[1, 1], [2, 2], True],
        [[1, 2], [1, 2], True],
        [[1, 2], [2, 2], True],
        [[0, 0], [1, 2], True],
        [[2, 1], [1, 2], False],
        [[1, 2], [1, 1], False],
        [[3, 0], [2, 1], False],
    ],
    # scalar pairs (alpha, theta) for the pair conjugation with J = complex conjugation
    "rem-8.4": [
        [{1: 1.0}, {1: 1.0}],
        [{1: 1.0}, {1: -1.0}],
        [{1: 1.0}, {1: 1j}],
        [{1: 1.0}, {2: 1.0}],
        [{2: 1.0}, {1: 1.0, 0: 0.0}],
    ],
}


# --------------------------------------------------------------------------
# plumbing


@dataclass(frozen=True)
class RunOptions:
    tol: float = 1e-10
    seed: int = DEFAULT_SEED
    trials: int = 100
    band: tuple[int, int] = (-16, 16)

    def rng_seed(self, *keys: int) -> list[int]:
        return [self.seed, *keys]


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    verdict: str  # "pass", "fail" or "error"
    residuals: Mapping[str, float] = field(default_factory=dict)
    tolerances: Mapping[str, float] = field(default_factory=dict)
    checks: Mapping[str, bool] = field(default_factory=dict)
    artifacts: Mapping[str, object] = field(default_factory=dict)
    message: str = ""

    @property
    def failed(self) -> list[str]:
        bad = [k for k, v in self.residuals.items() if not v <= self.tolerances[k]]
        return bad + [k for k, v in self.checks.items() if not v]

    def worst(self) -> tuple[str | None, float]:
        """Residual with the largest ratio to its tolerance."""
        best, name = -1.0, None
        for k, v in self.residuals.items():
            t = self.tolerances[k]
            ratio = np.inf if not np.isfinite(v) else v / t if t > 0 else (0.0 if v == 0 else np.inf)
            if ratio > best:
                best, name = ratio, k
        return name, (self.residuals[name] if name is not None else 0.0)

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "verdict": self.verdict,
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
            "tolerances": {k: float(v) for k, v in sorted(self.tolerances.items())},
            "checks": {k: bool(v) for k, v in sorted(self.checks.items())},
            "artifacts": {k: _artifact(v) for k, v in sorted(self.artifacts.items())},
            "message": self.message,
        }


def _artifact(v):
    if isinstance(v, (OperatorSymbol, CircleField, PointConjugation)):
        return to_document(v)
    if isinstance(v, np.ndarray) and v.ndim == 2:
        return to_document(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return str(v)


class _Recorder:
    def __init__(self):
        self.residuals: dict[str, float] = {}
        self.tolerances: dict[str, float] = {}
        self.checks: dict[str, bool] = {}
        self.artifacts: dict[str, object] = {}

    def res(self, name: str, value: float, tol: float) -> None:
        """Record a residual; repeated names keep the worst value."""
        value = float(value)
        if name in self.residuals:
            value = max(value, self.residuals[name])
        self.residuals[name] = value
        self.tolerances[name] = float(tol)

    def check(self, name: str, flag: bool) -> None:
        self.checks[name] = bool(flag) and self.checks.get(name, True)

    def art(self, name: str, obj) -> None:
        self.artifacts[name] = obj


@dataclass(frozen=True)
class Case:
    case_id: str
    summary: str
    fn: Callable


REGISTRY: dict[str, Case] = {}


def _case(case_id: str, summary: str):
    def wrap(fn):
        REGISTRY[case_id] = Case(case_id, summary, fn)
        return fn

    return wrap


def case_ids() -> list[str]:
    return list(REGISTRY)


def run_case(case_id: str, options: RunOptions | None = None, data: Mapping | None = None) -> CaseResult:
    """Run one registered scenario; ``data`` replaces :data:`DATA` (for tampering tests)."""
    if case_id not in REGISTRY:
        raise KeyError(f"unknown case {case_id!r}")
    opts = options or RunOptions()
    rec = _Recorder()
    try:
        REGISTRY[case_id].fn(rec, opts, copy.deepcopy(dict(data if data is not None else DATA)))
    except Exception as exc:  # a crashing scenario is reported, not raised
        return CaseResult(
            case_id, "error", rec.residuals, rec.tolerances, rec.checks, rec.artifacts, f"{type(exc).__name__}: {exc}"
        )
    result = CaseResult(case_id, "pass", rec.residuals, rec.tolerances, rec.checks, rec.artifacts)
    if result.failed:
        result = CaseResult(
            case_id, "fail", rec.residuals, rec.tolerances, rec.checks, rec.artifacts, "failed: " + ",".join(result.failed)
        )
    return result


def merge_overrides(data: Mapping, overrides: Mapping) -> dict:
    """
    Deep-merge JSON overrides into a copy of ``data``.  String keys that
    parse as integers address polynomial indices; ``[re, im]`` pairs become
    complex numbers.
    """
    out = copy.deepcopy(dict(data))

    def conv(v):
        if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            return complex(v[0], v[1])
        if isinstance(v, dict):
            return {_key(k): conv(x) for k, x in v.items()}
        return v

    def merge(dst, src):
        for k, v in src.items():
            k = _key(k)
            if isinstance(v, dict) and isinstance(dst.get(k), dict):
                merge(dst[k], v)
            else:
                dst[k] = conv(v)

    merge(out, overrides)
    return out


def _key(k):
    try:
        return int(k)
    except (TypeError, ValueError):
        return k


# --------------------------------------------------------------------------
# shared builders


J1 = PointConjugation.standard(2)
J2 = PointConjugation.swap(2)


def _poly(terms: Mapping) -> OperatorSymbol:
    return OperatorSymbol.scalar({int(n): complex(c) for n, c in terms.items()})


def _block(entry: Mapping, mode) -> Block2Conjugation:
    return Block2Conjugation(_poly(entry["psi1"]), _poly(entry["psi2"]), _poly(entry["psi4"]), Mode(mode))


def _diag_z(*powers: int) -> OperatorSymbol:
    return OperatorSymbol.diagonal(*(OperatorSymbol.scalar({int(p): 1.0}) for p in powers))


def _const(M) -> OperatorSymbol:
    return OperatorSymbol.constant(np.asarray(M, dtype=complex))


def _few(opts: RunOptions) -> int:
    """Trial count for loops over many instances."""
    return max(1, opts.trials // 20)


def _relation(kind: Kind) -> str:
    return "commute" if kind is Kind.STAR else "intertwine"


def _action_gap(A, B, d: int, seed, trials: int = 10, band=(-4, 4)) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_field(d, band, rng)
        worst = max(worst, (A(f) - B(f)).norm() / f.norm())
    return worst


def _is_structured(U, J, kind) -> bool:
    try:
        make_structured(U, J, kind)
        return True
    except ConjugationError:
        return False


def _block_suite(r: _Recorder, name: str, blk: Block2Conjugation, opts: RunOptions) -> None:
    rep = block2_check(blk.psi1, blk.psi2, blk.psi4, blk.mode, EXACT_TOL)
    for k, v in rep.residuals.items():
        r.res(f"{name}.{k}", v, EXACT_TOL)
    ax = verify_axioms(blk, opts.trials, opts.rng_seed(1), opts.tol, dim=2)
    r.res(f"{name}.axioms", max(ax.residuals.values()), opts.tol)
    r.res(f"{name}.relation", check_Mz_relation(blk, _relation(blk.kind), opts.tol, dim=2).residual, EXACT_TOL)
    r.check(f"{name}.structured", _is_structured(blk.symbol(), J1, blk.kind))
    r.res(f"{name}.block_vs_symbol", _action_gap(blk, blk.to_space(), 2, opts.rng_seed(2)), EXACT_TOL)


def model_corpus(seed: int = DEFAULT_SEED) -> list[tuple[str, OperatorSymbol, PointConjugation]]:
    """J-symmetric inner functions used across the model space cases (all pure)."""
    K0 = PointConjugation.random(2, [seed, 606]).K
    J0 = PointConjugation(K0)
    Jr = PointConjugation.random(2, [seed, 607])
    Jr3 = PointConjugation.random(3, [seed, 608])
    return [
        ("diag_z_z2", _diag_z(1, 2), J1),
        ("U0_diag_z_z2", _const(K0) @ _diag_z(1, 2), J0),
        ("zS_randomJ_d2", random_j_symmetric_inner(Jr, 1, [seed, 609]).shifted(1), Jr),
        ("zS_randomJ_d3", random_j_symmetric_inner(Jr3, 1, [seed, 610]).shifted(1), Jr3),
    ]


# --------------------------------------------------------------------------
# block conjugations on L^2 + L^2


@_case("ex-2.3", "three commuting block conjugations built from J*: identity, swap and the normalized Hadamard pattern")
def _ex_2_3(r, opts, data):
    for name, entry in data["ex-2.3"].items():
        _block_suite(r, name, _block(entry, Mode.COMMUTING), opts)


@_case("ex-2.4", "commuting block conjugation with cos t, sin t, cos t entries")
def _ex_2_4(r, opts, data):
    _block_suite(r, "block", _block(data["ex-2.4"], Mode.COMMUTING), opts)


@_case("ex-2.6", "three intertwining block conjugations built from J~: identity, swap and the normalized Hadamard pattern")
def _ex_2_6(r, opts, data):
    for name, entry in data["ex-2.6"].items():
        _block_suite(r, name, _block(entry, Mode.INTERTWINING), opts)


@_case("ex-2.7", "intertwining block conjugation with sin t, cos t, -sin t entries")
def _ex_2_7(r, opts, data):
    _block_suite(r, "block", _block(data["ex-2.7"], Mode.INTERTWINING), opts)


def _block_theorem(r, opts, kind: Kind):
    """Random valid d=2 conjugations read as blocks, and perturbed ones rejected by both tests."""
    mode = Mode.COMMUTING if kind is Kind.STAR else Mode.INTERTWINING
    agree = True
    for k in range(20):
        C = random_structured(2, kind, J1, opts.rng_seed(21, k))
        U = C.U
        blk = Block2Conjugation(U.entry(0, 0), U.entry(0, 1), U.entry(1, 1), mode)
        r.res("third_entry", U.entry(1, 0).distance(blk.psi3), RECOVERY_TOL)
        rep = block2_check(blk.psi1, blk.psi2, blk.psi4, mode, RECOVERY_TOL)
        r.res("conditions", max(rep.residuals.values()), RECOVERY_TOL)
        r.res("block_vs_symbol", _action_gap(blk, C, 2, opts.rng_seed(22, k), 3), RECOVERY_TOL)
        bad = Block2Conjugation(blk.psi1, 1.1 * blk.psi2 if not blk.psi2.is_zero else _poly({0: 0.3}), blk.psi4, mode)
        bad_rep = block2_check(bad.psi1, bad.psi2, bad.psi4, mode, opts.tol)
        agree &= bad_rep.ok == _is_structured(bad.symbol(), J1, kind) == False  # noqa: E712
        noise = random_symbol(1, (-1, 1), opts.rng_seed(23, k))
        rnd = Block2Conjugation(noise, noise.shifted(1), noise.H, mode)
        agree &= block2_check(rnd.psi1, rnd.psi2, rnd.psi4, mode, opts.tol).ok == _is_structured(rnd.symbol(), J1, kind)
    r.check("verdicts_agree", agree)


@_case("thm-2.1", "every commuting conjugation of L^2 + L^2 has the block form with scalar conditions, sampled both ways")
def _thm_2_1(r, opts, data):
    _block_theorem(r, opts, Kind.STAR)


@_case("thm-2.5", "every M_z-conjugation of L^2 + L^2 has the block form with scalar conditions, sampled both ways")
def _thm_2_5(r, opts, data):
    _block_theorem(r, opts, Kind.TILDE)


@_case("rem-2.2", "a vanishing off-diagonal (or diagonal) entry forces unimodular remaining entries")
def _rem_2_2(r, opts, data):
    one = OperatorSymbol.identity(1)
    for i, (p1, p2, p4, mode, expected) in enumerate(data["rem-2.2"]):
        blk = Block2Conjugation(_poly(p1), _poly(p2), _poly(p4), Mode(mode))
        ok = block2_check(blk.psi1, blk.psi2, blk.psi4, blk.mode, EXACT_TOL).ok
        r.check(f"sample{i}.verdict", ok == expected)
        if not ok:
            continue
        if blk.psi2.is_zero:
            r.res(f"sample{i}.unimodular", max((blk.psi1 @ blk.psi1.H).distance(one), (blk.psi4 @ blk.psi4.H).distance(one)), EXACT_TOL)
        if blk.psi1.is_zero:
            r.check(f"sample{i}.psi4_zero", blk.psi4.is_zero)
            r.res(f"sample{i}.unimodular", (blk.psi2 @ blk.psi2.H).distance(one), EXACT_TOL)


# --------------------------------------------------------------------------
# conjugations on L^2(H)


def _points(opts) -> list[tuple[str, PointConjugation]]:
    return [("J1", J1), ("J2", J2), ("Jrand3", PointConjugation.random(3, opts.rng_seed(41)))]


@_case("prop-4.1", "J~ and J* are conjugations; J~ reverses M_z, J* commutes with it, and J~J* reflects the circle")
def _prop_4_1(r, opts, data):
    for name, J in _points(opts):
        for kind in Kind:
            C = make_canonical(J, kind)
            ax = verify_axioms(C, opts.trials, opts.rng_seed(42), opts.tol)
            r.res(f"{name}.{kind.value}.axioms", max(ax.residuals.values()), FINE_TOL)
            r.res(f"{name}.{kind.value}.relation", check_Mz_relation(C, _relation(kind), opts.tol).residual, EXACT_TOL)
        Jt, Js = make_canonical(J, Kind.TILDE), make_canonical(J, Kind.STAR)
        worst = 0.0
        for b in basis_fields(J.dim, (-4, 4)):
            worst = max(worst, (Jt(Js(b)) - CircleField(-b.n_max, b.coeffs[::-1])).norm())
        r.res(f"{name}.reflection", worst, EXACT_TOL)


@_case("prop-4.2", "M_F is J~-symmetric iff F(z) is J-symmetric, and J*-symmetric iff J F(z-bar) J = F(z)^*")
def _prop_4_2(r, opts, data):
    J = PointConjugation.random(2, opts.rng_seed(43))
    for kind, mode in ((Kind.TILDE, "conjJ"), (Kind.STAR, "flipJ")):
        C = make_canonical(J, kind)
        F = random_symbol(2, (-2, 2), opts.rng_seed(44))
        F_sym = F + symbol_transform(F, mode, J).H
        for label, G in (("symmetric", F_sym), ("generic", F)):
            op = _action_gap(lambda f: C(G @ C(f)), lambda f: G.H @ f, 2, opts.rng_seed(45), 5)
            coeff = symbol_transform(G, mode, J).distance(G.H)
            if label == "symmetric":
                r.res(f"{kind.value}.operator", op, opts.tol)
                r.res(f"{kind.value}.coefficients", coeff, opts.tol)
            else:
                r.check(f"{kind.value}.generic_rejected_by_both", op > opts.tol and coeff > opts.tol)


@_case("scalar-commuting", "for d=1 and complex conjugation, M_U J* is a conjugation iff U(z) = U(z-bar)")
def _scalar_commuting(r, opts, data):
    J = PointConjugation.standard(1)
    agree = True
    for k in range(10):
        A = random_structured(1, Kind.STAR, J, opts.rng_seed(46, k))
        even = A.U.distance(OperatorSymbol(-A.U.n_max, A.U.coeffs[::-1]))
        r.res("valid_is_even", even, opts.tol)
        V = A.U @ OperatorSymbol.monomial(1, [[1.0]])  # unimodular, not even
        agree &= not _is_structured(V, J, Kind.STAR)
    r.check("odd_rejected", agree)


@_case("phi-commutation", "C M_Phi = M_{Phi^#} C iff U(z) J Phi(z-bar) = Phi^#(z) U(z) J, sampled for J-symmetric Phi")
def _phi_commutation(r, opts, data):
    J = PointConjugation.random(2, opts.rng_seed(47))
    C = make_structured(_const(np.eye(2)), J, Kind.STAR)
    Phi = random_symbol(2, (-1, 1), opts.rng_seed(48))
    Phi = Phi + symbol_transform(Phi, "conjJ", J).H  # pointwise J-symmetric
    for label, G in (("symmetric", Phi), ("generic", random_symbol(2, (-1, 1), opts.rng_seed(49)))):
        sharp = symbol_transform(G, "sharp")
        op = _action_gap(lambda f: C(G @ f), lambda f: sharp @ C(f), 2, opts.rng_seed(50), 5)
        pointwise = (C.U @ symbol_transform(G, "flipJ", J)).distance(sharp @ C.U)
        if label == "symmetric":
            r.res("operator", op, opts.tol)
            r.res("pointwise", pointwise, opts.tol)
        else:
            r.check("generic_rejected_by_both", op > opts.tol and pointwise > opts.tol)


def _normal_form(r, opts, kind: Kind):
    """Valid conjugations pass the axioms; their symbols are recovered from the action alone."""
    rejected = True
    for k in range(50):
        d = 1 + k % 3
        J = PointConjugation.random(d, opts.rng_seed(60, k))
        C = random_structured(d, kind, J, opts.rng_seed(61, k))
        ax = verify_axioms(C, _few(opts), opts.rng_seed(62, k), opts.tol)
        r.res("axioms", max(ax.residuals.values()), opts.tol)
        r.res("relation", check_Mz_relation(C, _relation(kind), opts.tol, band=(-4, 4)).residual, opts.tol)
        U = extract_symbol(lambda f: C(f), kind, J, opts.band, opts.tol)
        r.res("recovery", U.distance(C.U), RECOVERY_TOL)
        r.res("symmetry", symmetry_residual(U, J, kind)[0], opts.tol)
        try:
            extract_symbol(lambda f: C(project_plus(f)), kind, J, opts.band, opts.tol)
            rejected = False
        except ConjugationError:
            pass
    r.check("non_covariant_rejected", rejected)


@_case("thm-4.3", "M_z-commuting conjugations are exactly M_U J* with U unitary and J*-symmetric (50 random instances)")
def _thm_4_3(r, opts, data):
    _normal_form(r, opts, Kind.STAR)


@_case("thm-4.8", "M_z-conjugations are exactly M_U J~ with U unitary and J-symmetric pointwise (50 random instances)")
def _thm_4_8(r, opts, data):
    _normal_form(r, opts, Kind.TILDE)


def _rebase_case(r, opts, kind: Kind):
    for k in range(50):
        d = 1 + k % 3
        J = PointConjugation.random(d, opts.rng_seed(70, k))
        Jp = PointConjugation.random(d, opts.rng_seed(71, k))
        C = random_structured(d, kind, J, opts.rng_seed(72, k))
        expected = C.U @ _const(compose_points(J, Jp))
        U2 = extract_symbol(lambda f: C(f), kind, Jp, opts.band, opts.tol)
        r.res("rebase", U2.distance(expected), FINE_TOL)
        r.res("rebase_api", rebase(C, Jp).U.distance(expected), FINE_TOL)
        r.check("rebased_valid", _is_structured(expected, Jp, kind))


@_case("rem-4.4", "changing J to J' in M_U J* multiplies U on the right by J J'")
def _rem_4_4(r, opts, data):
    _rebase_case(r, opts, Kind.STAR)


@_case("rem-4.9", "changing J to J' in M_U J~ multiplies U on the right by J J'")
def _rem_4_9(r, opts, data):
    _rebase_case(r, opts, Kind.TILDE)


def _two_forms(r, opts, blk: Block2Conjugation, expected_J2: OperatorSymbol):
    kind = blk.kind
    U = blk.symbol()
    r.check("J1.structured", _is_structured(U, J1, kind))
    r.res("J1.recovery", extract_symbol(blk, kind, J1, opts.band, opts.tol).distance(U), EXACT_TOL)
    r.check("J2.structured", _is_structured(expected_J2, J2, kind))
    r.res("J2.recovery", extract_symbol(blk, kind, J2, opts.band, opts.tol).distance(expected_J2), EXACT_TOL)
    r.res("J2.rebase", rebase(SpaceConjugation(U, J1, kind), J2).U.distance(expected_J2), EXACT_TOL)
    ax = verify_axioms(SpaceConjugation(expected_J2, J2, kind), opts.trials, opts.rng_seed(80), opts.tol)
    r.res("J2.axioms", max(ax.residuals.values()), opts.tol)
    r.art("U_J1", U)
    r.art("U_J2", expected_J2)


@_case("ex-4.6", "the cos/sin commuting block conjugation written against J1 and against the coordinate swap J2")
def _ex_4_6(r, opts, data):
    blk = _block(data["ex-2.4"], Mode.COMMUTING)
    U2 = OperatorSymbol.from_blocks([[blk.psi2, blk.psi1], [blk.psi4, blk.psi3]])
    _two_forms(r, opts, blk, U2)


@_case("ex-4.10", "the sin/cos intertwining block conjugation written against J1 and against the coordinate swap J2")
def _ex_4_10(r, opts, data):
    blk = _block(data["ex-2.7"], Mode.INTERTWINING)
    U2 = OperatorSymbol.from_blocks([[blk.psi2, blk.psi1], [blk.psi4, blk.psi2]])
    _two_forms(r, opts, blk, U2)


# --------------------------------------------------------------------------
# preserving H^2


@_case("thm-5.1", "a commuting conjugation preserves H^2 iff its symbol is a constant J-symmetric unitary")
def _thm_5_1(r, opts, data):
    witnessed = True
    for k in range(20):
        d = 1 + k % 3
        J = PointConjugation.random(d, opts.rng_seed(90, k))
        C = random_structured(d, Kind.STAR, J, opts.rng_seed(91, k), n_factors=0)
        rep = preserves_H2(C, opts.tol, opts.band)
        r.check("constant_preserves", rep.ok)
        if rep.ok:
            r.res("u0_symmetry", rep.symmetry_residual, RECOVERY_TOL)
            r.res("u0_recovered", float(np.linalg.norm(rep.U0 - C.U.coeff(0))), RECOVERY_TOL)
            r.res("u0_unitary", float(np.linalg.norm(rep.U0.conj().T @ rep.U0 - np.eye(d))), RECOVERY_TOL)
            Jp = PointConjugation.random(d, opts.rng_seed(92, k))
            rep2 = preserves_H2(rebase(C, Jp), opts.tol, opts.band)
            r.res("u0_rebase", float(np.linalg.norm(rep2.U0 - rep.U0 @ compose_points(J, Jp))), FINE_TOL)
        N = random_structured(d, Kind.STAR, J, opts.rng_seed(93, k), n_factors=2)
        if (N.U - _const(N.U.coeff(0))).norm() < 1e-6:
            continue
        bad = preserves_H2(N, opts.tol, opts.band)
        witnessed &= (not bad.ok) and bad.witness is not None and bad.witness_residual > opts.tol
    r.check("nonconstant_witnessed", witnessed)


@_case("scalar-h2", "for d=1 a commuting conjugation preserving H^2 is a unimodular constant times J*")
def _scalar_h2(r, opts, data):
    J = PointConjugation.standard(1)
    for k in range(10):
        C = random_structured(1, Kind.STAR, J, opts.rng_seed(94, k), n_factors=0)
        rep = preserves_H2(C, opts.tol)
        r.check("preserves", rep.ok)
        r.res("unimodular", abs(abs(rep.U0[0, 0]) - 1), FINE_TOL)


@_case("ex-5.3", "constant commuting block conjugations lambda_i J* preserving H^2, from angle parameters")
def _ex_5_3(r, opts, data):
    for i, (a, al, be) in enumerate(data["ex-5.3"]["samples"]):
        l1 = np.cos(a) * np.exp(1j * al)
        l2 = np.sin(a) * np.exp(1j * be)
        l4 = -np.cos(a) * np.exp(1j * (2 * be - al))
        blk = Block2Conjugation(_poly({0: l1}), _poly({0: l2}), _poly({0: l4}), Mode.COMMUTING)
        rep = block2_check(blk.psi1, blk.psi2, blk.psi4, blk.mode, EXACT_TOL)
        for k, v in rep.residuals.items():
            r.res(f"sample{i}.{k}", v, EXACT_TOL)
        h2 = preserves_H2(blk.to_space(), opts.tol, opts.band)
        r.check(f"sample{i}.preserves", h2.ok)
        if h2.ok:
            r.res(f"sample{i}.u0", float(np.linalg.norm(h2.U0 - blk.symbol().coeff(0))), EXACT_TOL)
            r.res(f"sample{i}.u0_symmetry", h2.symmetry_residual, EXACT_TOL)


@_case("prop-5.5", "no M_z-conjugation preserves H^2: 50 random instances, each with a witness")
def _prop_5_5(r, opts, data):
    found = 0
    for k in range(50):
        d = 1 + k % 3
        J = PointConjugation.random(d, opts.rng_seed(100, k))
        C = random_structured(d, Kind.TILDE, J, opts.rng_seed(101, k), n_factors=k % 3)
        rep = preserves_H2(C, opts.tol, opts.band)
        found += (not rep.ok) and rep.witness is not None and rep.witness_residual > opts.tol
    r.res("missing_witnesses", 50 - found, 0.0)
    r.art("witnesses", found)


# --------------------------------------------------------------------------
# model spaces


@_case("lem-6.1", "J1 F(z) J2 is analytic iff F^* is analytic")
def _lem_6_1(r, opts, data):
    Ja = PointConjugation.random(2, opts.rng_seed(110))
    Jb = PointConjugation.random(2, opts.rng_seed(111))
    agree = True
    for k in range(10):
        F = random_symbol(2, (-3, 0) if k % 2 else (-2, 2), opts.rng_seed(112, k))
        # pointwise J_a F(z) J_b: coefficient -n carries K_a conj(F_n) conj(K_b)
        Ft = OperatorSymbol(-F.n_max, (Ja.K @ np.conj(F.coeffs) @ np.conj(Jb.K))[::-1])
        agree &= bool(is_analytic(Ft, opts.tol)) == bool(is_analytic(F.H, opts.tol))
    r.check("verdicts_agree", agree)


@_case("lem-6.2", "if M_F maps H^2 into Theta H^2 then F = Theta Psi with Psi analytic")
def _lem_6_2(r, opts, data):
    for k in range(6):
        d = 1 + k % 3
        theta = random_inner(d, 2, opts.rng_seed(120, k))
        psi = random_inner(d, 1, opts.rng_seed(121, k))
        F = theta @ psi
        inc = max(theta_H2_residual(theta, F @ b) for b in basis_fields(d, (0, 4)))
        r.res("inclusion", inc, opts.tol)
        r.res("factor", quotient(theta, F).distance(psi), opts.tol)
        G = random_inner(d, 1, opts.rng_seed(122, k))  # too few factors to be a multiple of Theta
        inc_bad = max(theta_H2_residual(theta, G @ b) for b in basis_fields(d, (0, 4)))
        r.check("non_multiple_detected", inc_bad > opts.tol and not divides(theta, G))


@_case("lem-6.3", "an analytic F is J-symmetric on the circle iff F(lambda) is J-symmetric on the disk")
def _lem_6_3(r, opts, data):
    lams = [0.0, 0.3 + 0.2j, -0.5, 0.7j]
    agree = True
    for k in range(6):
        J = PointConjugation.random(2, opts.rng_seed(130, k))
        for label, F in (
            ("symmetric", random_j_symmetric_inner(J, 2, opts.rng_seed(131, k))),
            ("generic", random_inner(2, 2, opts.rng_seed(132, k))),
        ):
            circle = is_J_symmetric(F, J, opts.tol)
            disk = max(float(np.linalg.norm(J.sandwich(symbol_in_disk(F, l)) - symbol_in_disk(F, l).conj().T)) for l in lams)
            if label == "symmetric":
                r.res("disk_symmetry", disk, opts.tol)
                agree &= circle
            else:
                agree &= (not circle) and disk > opts.tol
    r.check("verdicts_agree", agree)


@_case("prop-6.4", "M_V C_{Theta,J} is a conjugation iff Theta J V Theta J = V^*; constant V then leaves K_Theta invariant")
def _prop_6_4(r, opts, data):
    ctx = ModelContext(_diag_z(1, 2), J1)
    CT = make_C_Theta_J(ctx)
    cands = [
        ("identity", _const(np.eye(2)), True, True),
        ("diag_phases", _const(np.diag(np.exp([0.4j, -1.3j]))), True, True),
        ("diag_z_1", _diag_z(1, 0), True, False),
        ("swap", _const([[0, 1], [1, 0]]), False, False),
    ]
    for name, V, compatible, constant in cands:
        rep = check_V_compatibility(V, ctx, opts.tol)
        C = SpaceConjugation(V @ CT.U, J1, Kind.TILDE)
        inv = verify_axioms(C, _few(opts), opts.rng_seed(140), opts.tol).involution
        r.check(f"{name}.verdict", rep.ok == compatible and (inv <= opts.tol) == compatible)
        if compatible:
            r.res(f"{name}.vzero", rep.residuals["vzero"], opts.tol)
        if constant:
            r.res(f"{name}.invariance", invariance_residual(C, ctx)[0], opts.tol)


@_case("lem-6.6", "C_{Theta,J} maps the reproducing kernel k_lambda x to the conjugate kernel at J x")
def _lem_6_6(r, opts, data):
    corpus = model_corpus(opts.seed)[:2]
    for name, theta, J in corpus:
        ctx = ModelContext(theta, J)
        C = make_C_Theta_J(ctx)
        for lam in (0, 0.3 + 0.2j, -0.5):
            for x in np.eye(2):
                k = kernel(ctx, "k", lam, x)
                kt = kernel(ctx, "ktilde", lam, J(x))
                gap = (C(k.base) - kt.base).norm()
                if lam == 0:
                    r.res(f"{name}.exact_at_0", gap, EXACT_TOL)
                else:
                    r.res(f"{name}.excess", max(gap - k.error_bound, 0.0), opts.tol)
                r.res(f"{name}.reproducing", reproducing_residual(ctx, k, x), opts.tol + k.error_bound)


@_case("thm-6.7", "an M_z-conjugation leaves K_Theta invariant iff it is V_0 C_{Theta,J} with constant V_0")
def _thm_6_7(r, opts, data):
    for name, theta, J in model_corpus(opts.seed):
        ctx = ModelContext(theta, J)
        CT = make_C_Theta_J(ctx)
        d = ctx.dim
        phase = np.exp(0.9j)
        for label, V0 in (("identity", np.eye(d)), ("phase", phase * np.eye(d))):
            C = make_structured(_const(V0) @ CT.U, J, Kind.TILDE)
            rep = decompose_on_KTheta(C, ctx, opts.tol)
            r.check(f"{name}.{label}.decomposed", rep.ok)
            if rep.ok:
                r.res(f"{name}.{label}.v0", float(np.linalg.norm(rep.artifacts["V0"] - V0)), opts.tol)
        for label, C in (
            ("canonical", make_canonical(J, Kind.TILDE)),
            ("random", random_structured(d, Kind.TILDE, J, opts.rng_seed(150))),
        ):
            rep = decompose_on_KTheta(C, ctx, opts.tol)
            r.check(f"{name}.{label}.witness", (not rep.ok) and rep.witness is not None)
    # another J for which diag(z, z^2) is symmetric: V_0' = V_0 J J'
    ctx = ModelContext(_diag_z(1, 2), J1)
    V0 = np.diag(np.exp([0.2j, 1.7j]))
    C = make_structured(_const(V0) @ make_C_Theta_J(ctx).U, J1, Kind.TILDE)
    Jp = PointConjugation(np.diag(np.exp([0.7j, -1.3j])))
    rep = decompose_on_KTheta(C, ModelContext(_diag_z(1, 2), Jp), opts.tol)
    r.check("rebase.decomposed", rep.ok)
    r.res("rebase.v0", float(np.linalg.norm(rep.artifacts.get("V0", np.inf) - V0 @ compose_points(J1, Jp))), opts.tol)


@_case("ex-6.9", "Theta = diag(z, z^2): K_Theta basis, C_{Theta,J1} and the classified conjugations diag(l1, l4 z) J~")
def _ex_6_9(r, opts, data):
    p, q = data["ex-6.9"]["powers"]
    ctx = ModelContext(_diag_z(p, q), J1)
    expected = [CircleField.monomial(0, [1, 0]), CircleField.monomial(0, [0, 1]), CircleField.monomial(1, [0, 1])]
    B = ctx.basis
    r.check("dimension_3", len(B) == 3)
    r.res("basis", max((b.distance(e) for b, e in zip(B, expected)), default=np.inf) if len(B) == 3 else np.inf, EXACT_TOL)
    CT = make_C_Theta_J(ctx)
    r.res("C_symbol", CT.U.distance(_diag_z(0, 1)), EXACT_TOL)
    r.res("C_invariance", invariance_residual(CT, ctx)[0], FINE_TOL)
    for i, (a, b) in enumerate(data["ex-6.9"]["phases"]):
        l1, l4 = np.exp(1j * a), np.exp(1j * b)
        blk = Block2Conjugation(_poly({0: l1}), _poly({}), _poly({1: l4}), Mode.INTERTWINING)
        rep2 = block2_check(blk.psi1, blk.psi2, blk.psi4, blk.mode, EXACT_TOL)
        r.res(f"sample{i}.conditions", max(rep2.residuals.values()), EXACT_TOL)
        rep = decompose_on_KTheta(make_structured(blk.symbol(), J1, Kind.TILDE), ctx, opts.tol)
        r.check(f"sample{i}.decomposed", rep.ok)
        if rep.ok:
            r.res(f"sample{i}.v0", float(np.linalg.norm(rep.artifacts["V0"] - np.diag([l1, l4]))), FINE_TOL)
            r.art(f"V0_sample{i}", rep.artifacts["V0"])
    r.art("Theta", ctx.symbol)


@_case("model-operator", "the compressed shift S_Theta is C_{Theta,J}-symmetric on every pure J-symmetric Theta of the corpus")
def _model_operator(r, opts, data):
    for name, theta, J in model_corpus(opts.seed):
        ctx = ModelContext(theta, J)
        C = make_C_Theta_J(ctx)
        A = compressed_matrix(ctx, lambda f: C(model_operator_apply(ctx, C(f))))
        Bm = compressed_matrix(ctx, lambda f: model_operator_adjoint_apply(ctx, f))
        r.res(f"{name}", float(np.linalg.norm(A - Bm)), opts.tol)


# --------------------------------------------------------------------------
# between model spaces


def _membership_suite(lam: OperatorSymbol, theta: OperatorSymbol, tol: float) -> tuple[bool, bool]:
    lctx, tctx = ModelContext(lam), ModelContext(theta)
    deg = max(lctx.degree, tctx.degree, 1)
    ranges = max(theta_H2_residual(lam, theta @ b) for b in basis_fields(lam.dim, (0, deg))) <= tol
    spaces = max((KTheta_residual(tctx, b) for b in lctx.basis), default=0.0) <= tol
    return ranges, spaces


@_case("lem-7.2", "Lambda <= Theta iff Theta H^2 is inside Lambda H^2 iff K_Lambda is inside K_Theta (diagonal corpus)")
def _lem_7_2(r, opts, data):
    for i, (lp, tp, expected) in enumerate(data["lem-7.2"]):
        lam, theta = _diag_z(*lp), _diag_z(*tp)
        div = divides(lam, theta)
        ranges, spaces = _membership_suite(lam, theta, opts.tol)
        r.check(f"pair{i}.verdict", div == expected and ranges == expected and spaces == expected)
        if div:
            psi = quotient(lam, theta)
            r.res(f"pair{i}.quotient", (lam @ psi).distance(theta), EXACT_TOL)
    # a non-diagonal pair: Theta = Lambda Psi with random inner factors
    lam = random_inner(2, 2, opts.rng_seed(160))
    theta = lam @ random_inner(2, 1, opts.rng_seed(161))
    ranges, spaces = _membership_suite(lam, theta, opts.tol)
    r.check("random.verdict", divides(lam, theta) and ranges and spaces)
    ranges, spaces = _membership_suite(theta, lam, opts.tol)
    r.check("random.reverse_verdict", not divides(theta, lam) and not ranges and not spaces)


@_case("prop-7.3", "for J-symmetric inner Lambda, Theta: Lambda^* Theta is analytic iff Theta Lambda^* is")
def _prop_7_3(r, opts, data):
    for i, (lp, tp, _) in enumerate(data["lem-7.2"]):
        rep = two_sided_divisibility_check(_diag_z(*tp), _diag_z(*lp), J1)
        r.check(f"diag{i}.agree", rep.agree)
    for k in range(4):
        J = PointConjugation.random(2, opts.rng_seed(170, k))
        lam = random_j_symmetric_inner(J, 1, opts.rng_seed(171, k))
        for label, (a, b) in (("square", (lam, lam @ lam)), ("reverse", (lam @ lam, lam))):
            rep = two_sided_divisibility_check(b, a, J)
            r.check(f"random{k}.{label}.agree", rep.agree and rep.left == (label == "square"))


def _gamma_case(r, name, C, lam, theta, J, expect_ok, expected_gamma=None, tol=1e-10):
    rep = between_model_spaces_intertwining(C, ModelContext(lam, J), ModelContext(theta, J), tol)
    r.check(f"{name}.verdict", rep.ok == expect_ok and (rep.ok or rep.witness is not None))
    if rep.ok:
        for k, v in rep.residuals.items():
            r.res(f"{name}.{k}", v, tol)
        if expected_gamma is not None:
            r.res(f"{name}.gamma", rep.artifacts["Gamma"].distance(expected_gamma), tol)
        r.art(f"Gamma_{name}", rep.artifacts["Gamma"])
    return rep


@_case("thm-7.6", "an M_z-conjugation maps K_Lambda into K_Theta iff it is C_{Gamma,J} with J-symmetric Lambda <= Gamma <= Theta")
def _thm_7_6(r, opts, data):
    D = _diag_z
    _gamma_case(r, "self", make_C_Theta_J(ModelContext(D(1, 2), J1)), D(1, 2), D(1, 2), J1, True, D(1, 2), opts.tol)
    _gamma_case(r, "between", make_C_Theta_J(ModelContext(D(1, 2), J1)), D(1, 1), D(2, 3), J1, True, D(1, 2), opts.tol)
    for label, C in (
        ("too_big.C_Lambda", make_C_Theta_J(ModelContext(D(2, 2), J1))),
        ("too_big.C_Theta", make_C_Theta_J(ModelContext(D(1, 1), J1))),
        ("too_big.random", random_structured(2, Kind.TILDE, J1, opts.rng_seed(180))),
    ):
        _gamma_case(r, label, C, D(2, 2), D(1, 1), J1, False)
    J = PointConjugation.random(2, opts.rng_seed(181))
    lam = random_j_symmetric_inner(J, 1, opts.rng_seed(182))
    gamma = lam @ lam
    C = make_C_Theta_J(ModelContext(gamma, J))
    _gamma_case(r, "random_J", C, lam, gamma @ lam, J, True, gamma, opts.tol)


@_case("gamma-rebase", "C_{Gamma,J} = C_{Gamma',J'} with Gamma' = Gamma J J', and Gamma' is J'-symmetric")
def _gamma_rebase(r, opts, data):
    J = PointConjugation.random(2, opts.rng_seed(185))
    Jp = PointConjugation.random(2, opts.rng_seed(186))
    gamma = random_j_symmetric_inner(J, 2, opts.rng_seed(187))
    gp = gamma @ _const(compose_points(J, Jp))
    r.check("symmetric_for_new_J", is_J_symmetric(gp, Jp, opts.tol))
    C = make_C_Theta_J(ModelContext(gamma, J))
    Cp = make_C_Theta_J(ModelContext(gp, Jp))
    r.res("same_action", _action_gap(C, Cp, 2, opts.rng_seed(188)), opts.tol)
    r.check("same_divisibility", divides(gamma, gp) and divides(gp, gamma))


@_case("self-model-space", "with Lambda = Theta the symbol Gamma Theta^* is a constant satisfying the compatibility identity")
def _self_model_space(r, opts, data):
    for name, theta, J in model_corpus(opts.seed)[:3]:
        ctx = ModelContext(theta, J)
        V0 = np.exp(-0.6j) * np.eye(2)
        C = make_structured(_const(V0) @ make_C_Theta_J(ctx).U, J, Kind.TILDE)
        rep = between_model_spaces_intertwining(C, ctx, ctx, opts.tol)
        r.check(f"{name}.ok", rep.ok)
        if rep.ok:
            V = rep.artifacts["Gamma"] @ theta.H
            r.res(f"{name}.constant", (V - _const(V.coeff(0))).norm(), opts.tol)
            r.res(f"{name}.value", float(np.linalg.norm(V.coeff(0) - V0)), opts.tol)
            r.res(f"{name}.vzero", check_V_compatibility(_const(V.coeff(0)), ctx, opts.tol).residuals["vzero"], opts.tol)


@_case("prop-7.9", "J* intertwines M_Theta with M_{Theta^#} and maps Theta H^2, K_Theta and k_0 to their sharp counterparts")
def _prop_7_9(r, opts, data):
    kinds = set()
    for name, theta, J in model_corpus(opts.seed):
        rep = jstar_model_identities(ModelContext(theta, J), opts.tol, _few(opts), opts.rng_seed(190))
        for k, v in rep.residuals.items():
            r.res(f"{name}.{k}", v, opts.tol)
        r.check(f"{name}.dimensions", rep.artifacts["dim_K"] == rep.artifacts["dim_K_sharp"])
        kinds.add(bool(theta_sharp(theta).distance(theta) <= opts.tol))
    r.check("self_sharp_and_not", kinds == {True, False})


@_case("thm-7.10", "a commuting conjugation maps K_Lambda into K_Theta iff it is U_0 J* with constant J-symmetric U_0 and U_0 Lambda^# <= Theta")
def _thm_7_10(r, opts, data):
    D = _diag_z
    swap = _const([[0, 1], [1, 0]])
    scenarios = [
        ("identity", make_canonical(J1, Kind.STAR), D(1, 2), D(1, 2), True),
        ("swap_fits", make_structured(swap, J1, Kind.STAR), D(1, 2), D(2, 2), True),
        ("swap_too_small", make_structured(swap, J1, Kind.STAR), D(1, 2), D(1, 2), False),
        ("too_small", make_canonical(J1, Kind.STAR), D(1, 2), D(1, 1), False),
        ("nonconstant", random_structured(2, Kind.STAR, J1, opts.rng_seed(200)), D(1, 2), D(1, 2), False),
    ]
    for name, C, lam, theta, expected in scenarios:
        rep = between_model_spaces_commuting(C, ModelContext(lam, J1), ModelContext(theta, J1), opts.tol)
        r.check(f"{name}.verdict", rep.ok == expected)
        if rep.ok:
            r.res(f"{name}.u0_symmetry", rep.residuals["u0_j_symmetry"], opts.tol)
            r.res(f"{name}.u0", float(np.linalg.norm(rep.artifacts["U0"] - C.U.coeff(0))), opts.tol)
            r.art(f"U0_{name}", rep.artifacts["U0"])
        elif C.U.is_constant:
            # the divisibility criterion must reject too
            prod = _const(C.U.coeff(0)) @ theta_sharp(lam)
            r.check(f"{name}.criterion_rejects", not divides(prod, theta))


@_case("sharp-model-space", "a constant J-symmetric U_0 J* maps K_Theta into K_{Theta^#} when U_0 commutes with Theta^#")
def _sharp_model_space(r, opts, data):
    theta = _diag_z(1, 2)
    ts = theta_sharp(theta)
    for label, U0 in (("identity", np.eye(2)), ("phases", np.diag(np.exp([0.5j, -2.0j])))):
        C = make_structured(_const(U0), J1, Kind.STAR)
        rep = between_model_spaces_commuting(C, ModelContext(theta, J1), ModelContext(ts, J1), opts.tol)
        r.check(f"{label}.ok", rep.ok)


# --------------------------------------------------------------------------
# shift invariant subspaces


def _pairs(opts):
    D = _diag_z
    K = random_unitary(1, np.random.default_rng(opts.rng_seed(210)))
    return [
        ("equal", D(1, 2), D(1, 2), PointConjugation.standard(2)),
        ("swap_twist", D(0, 1), D(0, 1) @ _const([[0, 1], [1, 0]]), PointConjugation.standard(2)),
        ("crossed", D(1, 2), D(2, 1), PointConjugation.standard(2)),
        ("random", random_inner(2, 1, opts.rng_seed(211)), random_inner(2, 2, opts.rng_seed(212)), PointConjugation.standard(2)),
        ("scalar_same", OperatorSymbol.scalar({1: 1.0}), OperatorSymbol.scalar({1: -1.0}), PointConjugation.standard(1)),
        ("scalar_rotated", OperatorSymbol.scalar({1: 1.0}), OperatorSymbol.scalar({1: K[0, 0]}), PointConjugation.standard(1)),
        ("scalar_degrees", OperatorSymbol.scalar({1: 1.0}), OperatorSymbol.scalar({2: 1.0}), PointConjugation.standard(1)),
    ]


@_case("prop-8.1", "M_Theta J* M_{Lambda^*} is an involution iff Theta J Lambda^# = Lambda J Theta^#")
def _prop_8_1(r, opts, data):
    n_pass = n_fail = 0
    for name, lam, theta, J in _pairs(opts):
        rep = make_pair_conjugation(lam, theta, J, opts.tol)
        C = rep.artifacts["C"]
        direct = _action_gap(lambda f: C(C(f)), lambda f: f, lam.dim, opts.rng_seed(213), 50)
        r.check(f"{name}.agree", rep.ok == (direct <= opts.tol))
        r.res(f"{name}.into", rep.residuals["into"], opts.tol)
        r.res(f"{name}.onto", rep.residuals["onto"], opts.tol)
        if rep.ok:
            r.res(f"{name}.flipped", rep.residuals["flipped"], opts.tol)
        n_pass += rep.ok
        n_fail += not rep.ok
    r.check("both_verdicts_seen", n_pass >= 1 and n_fail >= 1)


@_case("lem-8.2", "algebra of F_J: involutive, multiplicative, and compatible with adjoint and sharp")
def _lem_8_2(r, opts, data):
    for k in range(5):
        d = 1 + k % 3
        J = PointConjugation.random(d, opts.rng_seed(220, k))
        F = random_symbol(d, (-2, 2), opts.rng_seed(221, k))
        G = random_symbol(d, (-1, 3), opts.rng_seed(222, k))
        fj = lambda S: symbol_transform(S, "flipJ", J)  # noqa: E731
        pw = lambda S: symbol_transform(S, "conjJ", J)  # noqa: E731
        sharp = lambda S: symbol_transform(S, "sharp")  # noqa: E731
        r.res("involutive", fj(fj(F)).distance(F), opts.tol)
        r.res("multiplicative", fj(F @ G).distance(fj(F) @ fj(G)), opts.tol)
        r.res("adjoint", max(fj(F).H.distance(pw(sharp(F))), fj(F).H.distance(fj(F.H))), opts.tol)
        r.res("sharp", max(sharp(fj(F)).distance(pw(F.H)), sharp(fj(F)).distance(fj(sharp(F)))), opts.tol)


@_case("lem-8.3", "J* M_F J* = M_{F_J}")
def _lem_8_3(r, opts, data):
    for k in range(5):
        d = 1 + k % 3
        J = PointConjugation.random(d, opts.rng_seed(230, k))
        F = random_symbol(d, (-2, 2), opts.rng_seed(231, k))
        Js = make_canonical(J, Kind.STAR)
        FJ = symbol_transform(F, "flipJ", J)
        r.res("identity", _action_gap(lambda f: Js(F @ Js(f)), lambda f: FJ @ f, d, opts.rng_seed(232, k), 5), opts.tol)


@_case("rem-8.4", "for scalar inner functions the involution condition reads theta alpha^# = alpha theta^#")
def _rem_8_4(r, opts, data):
    J = PointConjugation.standard(1)
    sharp = lambda S: symbol_transform(S, "sharp")  # noqa: E731
    for i, (a, t) in enumerate(data["rem-8.4"]):
        alpha, theta = _poly(a), _poly(t)
        r.res(f"pair{i}.phi_J_is_sharp", symbol_transform(alpha, "flipJ", J).distance(sharp(alpha)), EXACT_TOL)
        rep = make_pair_conjugation(alpha, theta, J, opts.tol)
        scalar = (theta @ sharp(theta)).distance(alpha @ sharp(alpha)) <= opts.tol
        r.check(f"pair{i}.agree", rep.ok == scalar)


def _analyze_case(r, name, C, lam, theta, tol, expect_ok=True, seed=0):
    rep = shift_invariant_analyze(C, ModelContext(lam), ModelContext(theta), tol, seed=seed)
    r.check(f"{name}.verdict", rep.ok == expect_ok and (rep.ok or rep.witness is not None or "Psi" in rep.artifacts))
    if rep.ok:
        for k, v in rep.residuals.items():
            if k != "psi_negative_part":
                r.res(f"{name}.{k}", v, tol)
    return rep


@_case("thm-8.5", "commuting conjugations mapping Lambda H^2 into Theta H^2 are C_J^{Lambda,Gamma} with Theta <= Gamma")
def _thm_8_5(r, opts, data):
    I2 = OperatorSymbol.identity(2)
    Js = make_canonical(J1, Kind.STAR)
    zI = I2.shifted(1)
    rep = _analyze_case(r, "J*_on_zH2", Js, zI, zI, opts.tol)
    if rep.ok:
        r.res("J*_on_zH2.psi_identity", rep.artifacts["Psi"].distance(I2), opts.tol)
    _analyze_case(r, "J*_H2_into_zH2", Js, I2, zI, opts.tol, expect_ok=False)
    for k in range(4):
        J = PointConjugation.random(2, opts.rng_seed(240, k))
        U0 = random_structured(2, Kind.STAR, J, opts.rng_seed(241, k), n_factors=0).U
        theta = random_inner(2, 1, opts.rng_seed(242, k))
        lam = theta @ random_inner(2, 1, opts.rng_seed(243, k))
        gamma = lam @ U0
        pre = make_pair_conjugation(lam, gamma, J, opts.tol)
        r.check(f"random{k}.built", pre.ok)
        rep = _analyze_case(r, f"random{k}", pre.artifacts["C"], lam, theta, opts.tol, seed=opts.rng_seed(244, k))
        if rep.ok:
            r.art(f"Psi_random{k}", rep.artifacts["Psi"])


@_case("rem-8.6", "with Lambda = Theta the factor Psi is a constant J-symmetric unitary U_0 and Gamma = Theta U_0")
def _rem_8_6(r, opts, data):
    for k in range(4):
        J = PointConjugation.random(2, opts.rng_seed(250, k))
        U0 = random_structured(2, Kind.STAR, J, opts.rng_seed(251, k), n_factors=0).U
        theta = random_inner(2, 2, opts.rng_seed(252, k))
        pre = make_pair_conjugation(theta, theta @ U0, J, opts.tol)
        rep = _analyze_case(r, f"random{k}", pre.artifacts["C"], theta, theta, opts.tol)
        if rep.ok:
            psi = rep.artifacts["Psi"]
            r.res(f"random{k}.psi_constant", (psi - _const(psi.coeff(0))).norm(), opts.tol)
            r.res(f"random{k}.psi_symmetry", float(np.linalg.norm(J.sandwich(psi.coeff(0)) - psi.coeff(0).conj().T)), opts.tol)
            r.res(f"random{k}.gamma", rep.artifacts["Gamma"].distance(theta @ U0), opts.tol)


@_case("ex-8.8", "Theta = diag(1, z), U_0 = swap: both J-symmetric yet Theta U_0 Theta^* is not constant")
def _ex_8_8(r, opts, data):
    e = data["ex-8.8"]
    theta = _diag_z(*e["powers"])
    U0 = _const(e["U0"])
    r.check("theta_symmetric", is_J_symmetric(theta, J1, opts.tol))
    r.res("u0_symmetry", float(np.linalg.norm(J1.sandwich(U0.coeff(0)) - U0.coeff(0).conj().T)), EXACT_TOL)
    pre = make_pair_conjugation(theta, theta @ U0, J1, opts.tol)
    r.check("conjugation", pre.ok)
    rep = _analyze_case(r, "analysis", pre.artifacts["C"], theta, theta, opts.tol)
    if rep.ok:
        r.res("gamma", rep.artifacts["Gamma"].distance(theta @ U0), EXACT_TOL)
    W = theta @ U0 @ theta.H
    expected = OperatorSymbol.from_terms(2, {int(n): M for n, M in e["expected"].items()})
    r.res("theta_u0_theta_star", W.distance(expected), EXACT_TOL)
    r.check("not_constant", not W.is_constant)
    r.art("Theta_U0_Theta_star", W)
    r.art("U0", U0.coeff(0))
