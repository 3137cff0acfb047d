"""
Model spaces ``K_Theta = H^2 (-) Theta H^2`` for polynomial inner ``Theta``.

For an inner polynomial of degree ``M`` every element of ``K_Theta`` is a
polynomial of degree below ``M`` (``z^M H^2`` already lies in ``Theta H^2``),
so projecting the monomials ``e_n b_j`` with ``0 <= n < M`` spans the space.
The basis is built by Gram-Schmidt in that order, which reproduces the
obvious monomial basis whenever one exists.

The analysis routines take a conjugation, test an inclusion on basis images
and, when it holds, rebuild the structured objects (``V_0``, ``Gamma``,
``U_0``, ``Psi``) that the characterizations promise, checking each stated
property on the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .antilinear import (
    Kind,
    PointConjugation,
    SpaceConjugation,
    make_canonical,
    make_structured,
    preserves_H2,
    rebase,
)
from .circfield import (
    CircleField,
    OperatorSymbol,
    basis_fields,
    inner_product,
    is_unitary_valued,
    project_plus,
    random_field,
    shift,
    symbol_transform,
)
from .innerfun import (
    INNER_TOL,
    InnerCertificate,
    certify_inner,
    divides,
    is_J_symmetric,
    theta_sharp,
)

RANK_TOL = 1e-10
MEMBER_TOL = 1e-10
CONSTANCY_TOL = 1e-9
KERNEL_CAP = 0.95
KERNEL_ACCURACY = 1e-10


class PreconditionError(ValueError):
    pass


# --------------------------------------------------------------------------
# context


@dataclass(frozen=True, eq=False)
class ModelContext:
    """An inner ``Theta`` (certified on construction) with an optional point conjugation."""

    theta: OperatorSymbol | InnerCertificate
    J: PointConjugation | None = None
    tol: float = INNER_TOL

    def __post_init__(self):
        cert = self.theta if isinstance(self.theta, InnerCertificate) else certify_inner(self.theta, self.tol, self.J)
        if not cert.inner:
            raise PreconditionError(f"Theta is not inner (residuals {dict(cert.residuals)})")
        object.__setattr__(self, "theta", cert)

    @property
    def symbol(self) -> OperatorSymbol:
        return self.theta.symbol

    @property
    def dim(self) -> int:
        return self.symbol.dim

    @property
    def degree(self) -> int:
        return max(self.symbol.n_max, 0)

    @property
    def pure(self) -> bool:
        return self.theta.pure

    def require_J(self) -> PointConjugation:
        if self.J is None:
            raise PreconditionError("this operation needs a point conjugation J")
        if not is_J_symmetric(self.symbol, self.J, self.tol):
            raise PreconditionError("Theta is not J-symmetric")
        return self.J

    @cached_property
    def basis(self) -> tuple[CircleField, ...]:
        """Orthonormal basis of ``K_Theta`` (Gram-Schmidt on projected monomials)."""
        M, d = self.degree, self.dim
        out: list[CircleField] = []
        for b in basis_fields(d, (0, M - 1)) if M > 0 else []:
            v = project_KTheta(self, b)
            for _ in range(2):  # second pass restores orthogonality lost to rounding
                for q in out:
                    v = v - inner_product(v, q) * q
            nv = v.norm()
            if nv > RANK_TOL:
                out.append((1 / nv) * v)
        return tuple(out)

    def coords(self, f: CircleField) -> np.ndarray:
        return np.array([inner_product(f, q) for q in self.basis])

    def from_coords(self, c) -> CircleField:
        out = CircleField.zero(self.dim)
        for a, q in zip(c, self.basis):
            out = out + complex(a) * q
        return out

    def random_element(self, seed) -> CircleField:
        rng = np.random.default_rng(seed)
        n = len(self.basis)
        return self.from_coords(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _ctx(obj, J=None) -> ModelContext:
    return obj if isinstance(obj, ModelContext) else ModelContext(obj, J)


# --------------------------------------------------------------------------
# projections and membership


def project_theta_H2(theta: OperatorSymbol, f: CircleField) -> CircleField:
    """Orthogonal projection of ``L^2`` onto ``Theta H^2``: ``Theta P_+ (Theta^* f)``."""
    return theta @ project_plus(theta.H @ f)


def project_KTheta(ctx, f: CircleField) -> CircleField:
    """``P_Theta f = P_+ f - Theta P_+(Theta^* f)``."""
    theta = _ctx(ctx).symbol
    return project_plus(f) - project_theta_H2(theta, f)


def KTheta_residual(ctx, f: CircleField) -> float:
    return (f - project_KTheta(ctx, f)).norm()


def theta_H2_residual(theta: OperatorSymbol, f: CircleField) -> float:
    """Distance from ``f`` to ``Theta H^2``."""
    return (f - project_theta_H2(theta, f)).norm()


def model_operator_apply(ctx, f: CircleField, tol: float = MEMBER_TOL) -> CircleField:
    """``S_Theta f = P_Theta(z f)`` for ``f`` in ``K_Theta``."""
    ctx = _ctx(ctx)
    r = KTheta_residual(ctx, f)
    if r > tol:
        raise PreconditionError(f"input is not in K_Theta (distance {r:.2e})")
    return project_KTheta(ctx, shift(f, "forward"))


def model_operator_adjoint_apply(ctx, f: CircleField, tol: float = MEMBER_TOL) -> CircleField:
    """``S_Theta^* f = P_Theta(z-bar f)`` for ``f`` in ``K_Theta``."""
    ctx = _ctx(ctx)
    r = KTheta_residual(ctx, f)
    if r > tol:
        raise PreconditionError(f"input is not in K_Theta (distance {r:.2e})")
    return project_KTheta(ctx, shift(f, "backward"))


def compressed_matrix(ctx, op) -> np.ndarray:
    """Matrix ``[<op b_j, b_i>]`` of a linear map on the ``K_Theta`` basis."""
    B = _ctx(ctx).basis
    images = [op(b) for b in B]
    return np.array([[inner_product(images[j], B[i]) for j in range(len(B))] for i in range(len(B))])


def evaluate_in_disk(f: CircleField, lam: complex) -> np.ndarray:
    """``f(lambda) = sum x_n lambda^n`` for ``f`` in ``H^2`` and ``|lambda| < 1``."""
    if not f.is_zero and f.n_min < 0:
        raise ValueError("disk evaluation needs an analytic field")
    if abs(lam) >= 1:
        raise ValueError("lambda must lie in the open unit disk")
    if f.is_zero:
        return np.zeros(f.dim, dtype=complex)
    return np.tensordot(lam ** np.arange(f.n_min, f.n_max + 1), f.coeffs, axes=(0, 0))


def symbol_in_disk(F: OperatorSymbol, lam: complex) -> np.ndarray:
    if F.is_zero:
        return np.zeros((F.dim, F.dim), dtype=complex)
    if F.n_min < 0:
        raise ValueError("disk evaluation needs an analytic symbol")
    return np.tensordot(lam ** np.arange(F.n_min, F.n_max + 1), F.coeffs, axes=(0, 0))


# --------------------------------------------------------------------------
# reproducing kernels


@dataclass(frozen=True, eq=False)
class KernelField:
    """A kernel series with its truncation data (``error_bound`` bounds the L^2 tail)."""

    base: CircleField
    lam: complex
    truncation_degree: int
    error_bound: float


def kernel(
    ctx,
    which: str,
    lam: complex,
    x,
    degree: int | None = None,
    cap: float = KERNEL_CAP,
    accuracy: float = KERNEL_ACCURACY,
) -> KernelField:
    """
    ``k_lambda x = (1 - Theta Theta(lambda)^*) x / (1 - conj(lambda) z)`` (``which="k"``)
    or ``k~_lambda x = (Theta(z) - Theta(lambda)) x / (z - lambda)`` (``which="ktilde"``).

    The geometric series of ``k`` is cut after ``degree`` terms; the dropped
    tail has norm at most ``||g|| |lambda|^(degree+1) / (1 - |lambda|)`` with
    ``g = (1 - Theta Theta(lambda)^*) x``.  Without ``degree`` the smallest
    cut meeting ``accuracy`` is chosen.  ``k~`` is an exact polynomial.
    """
    ctx = _ctx(ctx)
    lam = complex(lam)
    if abs(lam) > cap:
        raise ValueError(f"|lambda| = {abs(lam):.3f} exceeds the cap {cap}")
    x = np.asarray(x, dtype=complex)
    theta = ctx.symbol
    d = ctx.dim
    T_lam = symbol_in_disk(theta, lam)
    if which == "k":
        g = CircleField.monomial(0, x) - theta @ CircleField.monomial(0, T_lam.conj().T @ x)
        r = abs(lam)
        if r == 0 or g.is_zero:
            need = 0
        else:
            need = max(0, int(np.ceil(np.log(accuracy * (1 - r) / g.norm()) / np.log(r))) - 1)
        if degree is None:
            degree = need
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        bound = 0.0 if r == 0 or g.is_zero else g.norm() * r ** (degree + 1) / (1 - r)
        if bound > accuracy:
            raise ValueError(f"degree {degree} leaves a tail bound {bound:.2e} above accuracy {accuracy:.0e}")
        geo = OperatorSymbol(0, np.conj(lam) ** np.arange(degree + 1)[:, None, None] * np.eye(d))
        return KernelField(geo @ g, lam, degree, bound)
    if which == "ktilde":
        M = ctx.degree
        c = np.zeros((max(M, 1), d), dtype=complex)
        for j in range(M):
            for k in range(j + 1, M + 1):
                c[j] += lam ** (k - 1 - j) * (theta.coeff(k) @ x)
        out = CircleField(0, c)
        lhs = OperatorSymbol.from_terms(d, {0: -lam * np.eye(d), 1: np.eye(d)}) @ out
        rhs = theta @ CircleField.monomial(0, x) - CircleField.monomial(0, T_lam @ x)
        err = lhs.distance(rhs)
        if err > 1e-12 * (1 + rhs.norm()):
            raise ArithmeticError(f"kernel division check failed ({err:.2e})")
        return KernelField(out, lam, M - 1, 0.0)
    raise ValueError(f"unknown kernel {which!r}")


def reproducing_residual(ctx, kf: KernelField, x) -> float:
    """``max_b |<b, k x> - <b(lambda), x>|`` over the ``K_Theta`` basis."""
    ctx = _ctx(ctx)
    x = np.asarray(x, dtype=complex)
    worst = 0.0
    for b in ctx.basis:
        worst = max(worst, abs(inner_product(b, kf.base) - np.vdot(x, evaluate_in_disk(b, kf.lam))))
    return worst


# --------------------------------------------------------------------------
# C_{Theta,J}


def make_C_Theta_J(ctx) -> SpaceConjugation:
    """``C_{Theta,J} f = Theta z-bar J f``, i.e. ``M_{z-bar Theta} J~``."""
    ctx = _ctx(ctx)
    J = ctx.require_J()
    return make_structured(ctx.symbol.shifted(-1), J, Kind.TILDE)


def invariance_residual(C, source, target=None) -> tuple[float, CircleField | None]:
    """``max ||(I - P_target) C b||`` over the basis of the source model space."""
    source = _ctx(source)
    target = source if target is None else _ctx(target)
    worst, witness = 0.0, None
    for b in source.basis:
        r = KTheta_residual(target, C(b))
        if r > worst:
            worst, witness = r, b
    return worst, witness


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    residuals: Mapping[str, float] = field(default_factory=dict)
    witness: CircleField | None = None
    artifacts: Mapping[str, object] = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def vzero_residual(V: OperatorSymbol, ctx) -> float:
    """``Theta J V Theta J = V^*`` as a coefficient identity."""
    ctx = _ctx(ctx)
    J = ctx.require_J()
    lhs = ctx.symbol @ symbol_transform(V @ ctx.symbol, "conjJ", J)
    return lhs.distance(V.H)


def check_V_compatibility(V: OperatorSymbol, ctx, tol: float = MEMBER_TOL) -> CheckReport:
    """Is ``M_V C_{Theta,J}`` a conjugation (``M_V`` being ``C_{Theta,J}``-symmetric)?"""
    ctx = _ctx(ctx)
    uni = is_unitary_valued(V, tol)
    r = vzero_residual(V, ctx)
    return CheckReport(bool(uni) and r <= tol, {"vzero": r, "unitarity": max(uni.grid_residual, uni.moment_residual)})


def decompose_on_KTheta(C: SpaceConjugation, ctx, tol: float = MEMBER_TOL) -> CheckReport:
    """
    For an ``M_z``-conjugation leaving ``K_Theta`` invariant, recover the
    constant ``V_0`` with ``C = V_0 C_{Theta,J}``; otherwise return a basis
    element whose image leaves ``K_Theta``.
    """
    ctx = _ctx(ctx)
    if not ctx.pure:
        raise PreconditionError("Theta must be pure")
    J = ctx.require_J()
    if C.kind is not Kind.TILDE:
        raise PreconditionError("expected an M_z-conjugation (kind TILDE)")
    Cj = rebase(C, J)
    inv, witness = invariance_residual(Cj, ctx)
    if inv > tol:
        return CheckReport(False, {"invariance": inv}, witness)
    V = Cj.U.shifted(1) @ ctx.symbol.H
    V0 = V.coeff(0)
    constancy = max((float(np.linalg.norm(V.coeff(n))) for n in V.indices() if n != 0), default=0.0)
    unit = float(np.linalg.norm(V0.conj().T @ V0 - np.eye(ctx.dim)))
    vz = vzero_residual(OperatorSymbol.constant(V0), ctx)
    res = {"invariance": inv, "constancy": constancy, "unitarity": unit, "vzero": vz}
    ok = constancy <= CONSTANCY_TOL and unit <= tol and vz <= tol
    return CheckReport(ok, res, artifacts={"V0": V0})


# --------------------------------------------------------------------------
# between model spaces


def _containment(C, lam_ctx, theta_ctx):
    return invariance_residual(C, lam_ctx, theta_ctx)


def between_model_spaces_intertwining(
    C: SpaceConjugation, lam_ctx, theta_ctx, tol: float = MEMBER_TOL, seed=0
) -> CheckReport:
    """
    ``C(K_Lambda) in K_Theta`` for an ``M_z``-conjugation forces
    ``C = C_{Gamma,J_Lambda}`` with ``Gamma = z U_Lambda`` inner,
    ``J_Lambda``-symmetric and ``Lambda <= Gamma <= Theta``.
    """
    lam_ctx, theta_ctx = _ctx(lam_ctx), _ctx(theta_ctx)
    if C.kind is not Kind.TILDE:
        raise PreconditionError("expected an M_z-conjugation (kind TILDE)")
    JL = lam_ctx.require_J()
    theta_ctx.require_J()
    Cl = rebase(C, JL)
    cont, witness = _containment(Cl, lam_ctx, theta_ctx)
    if cont > tol:
        return CheckReport(False, {"containment": cont}, witness)
    gamma = Cl.U.shifted(1)
    cert = certify_inner(gamma, INNER_TOL, JL)
    res = {
        "containment": cont,
        "gamma_negative_part": cert.residuals["negative_part"],
        "gamma_unitarity": max(cert.residuals["unitarity_grid"], cert.residuals["unitarity_moments"]),
        "gamma_j_symmetry": cert.residuals.get("j_symmetry", float("inf")),
    }
    ok = cert.inner and cert.j_symmetric_for is not None
    lam_div = divides(lam_ctx.symbol, gamma) if cert.inner else False
    theta_div = divides(gamma, theta_ctx.symbol) if cert.inner else False
    action = 0.0
    if cert.inner:
        CG = make_C_Theta_J(ModelContext(cert, JL))
        rng = np.random.default_rng(seed)
        for _ in range(10):
            f = random_field(C.dim, (-4, 4), rng)
            action = max(action, (CG(f) - C(f)).norm() / f.norm())
    res["action"] = action
    ok = ok and lam_div and theta_div and action <= tol
    return CheckReport(
        ok, res, artifacts={"Gamma": gamma, "J": JL, "lambda_divides_gamma": lam_div, "gamma_divides_theta": theta_div}
    )


def between_model_spaces_commuting(C: SpaceConjugation, lam_ctx, theta_ctx, tol: float = MEMBER_TOL) -> CheckReport:
    """
    ``C(K_Lambda) in K_Theta`` for an ``M_z``-commuting conjugation forces
    ``C = U_0 J_Lambda*`` with ``U_0`` constant, unitary, ``J_Lambda``-symmetric
    and ``U_0 Lambda^# <= Theta``.
    """
    lam_ctx, theta_ctx = _ctx(lam_ctx), _ctx(theta_ctx)
    if C.kind is not Kind.STAR:
        raise PreconditionError("expected an M_z-commuting conjugation (kind STAR)")
    JL = lam_ctx.require_J()
    Cl = rebase(C, JL)
    cont, witness = _containment(Cl, lam_ctx, theta_ctx)
    if cont > tol:
        return CheckReport(False, {"containment": cont}, witness)
    h2 = preserves_H2(Cl, tol)
    if not h2.ok:
        return CheckReport(False, {"containment": cont, "h2": h2.witness_residual}, h2.witness)
    U0 = h2.U0
    prod = OperatorSymbol.constant(U0) @ theta_sharp(lam_ctx.symbol)
    div = divides(prod, theta_ctx.symbol)
    res = {"containment": cont, "constancy": h2.constancy_residual, "u0_j_symmetry": h2.symmetry_residual}
    ok = h2.constancy_residual <= CONSTANCY_TOL and h2.symmetry_residual <= tol and div
    return CheckReport(ok, res, artifacts={"U0": U0, "J": JL, "u0_lambda_sharp_divides_theta": div})


def jstar_model_identities(ctx, tol: float = MEMBER_TOL, trials: int = 10, seed=0) -> CheckReport:
    """
    For J-symmetric inner ``Theta``: ``J* M_Theta = M_{Theta^#} J*``,
    ``J*(Theta H^2) = Theta^# H^2``, ``J*(K_Theta) = K_{Theta^#}`` and
    ``J*(k_0 x) = k_0^{Theta^#} J x``.
    """
    ctx = _ctx(ctx)
    J = ctx.require_J()
    theta = ctx.symbol
    ts = theta_sharp(theta)
    sctx = ModelContext(ts, J)
    Js = make_canonical(J, Kind.STAR)
    rng = np.random.default_rng(seed)
    r1 = 0.0
    for _ in range(trials):
        f = random_field(ctx.dim, (-4, 4), rng)
        r1 = max(r1, (Js(theta @ f) - ts @ Js(f)).norm() / f.norm())
    band = (0, max(ctx.degree, 1))
    r2 = 0.0
    for b in basis_fields(ctx.dim, band):
        r2 = max(r2, theta_H2_residual(ts, Js(theta @ b)), theta_H2_residual(theta, Js(ts @ b)))
    r3 = max((KTheta_residual(sctx, Js(b)) for b in ctx.basis), default=0.0)
    r3 = max(r3, max((KTheta_residual(ctx, Js(b)) for b in sctx.basis), default=0.0))
    dims_match = len(ctx.basis) == len(sctx.basis)
    r4 = 0.0
    for x in np.eye(ctx.dim):
        k = kernel(ctx, "k", 0, x).base
        ks = kernel(sctx, "k", 0, J(x)).base
        r4 = max(r4, (Js(k) - ks).norm())
    res = {"intertwining": r1, "range": r2, "model_space": r3, "kernel": r4}
    ok = all(v <= tol for v in res.values()) and dims_match
    return CheckReport(ok, res, artifacts={"dim_K": len(ctx.basis), "dim_K_sharp": len(sctx.basis)})


# --------------------------------------------------------------------------
# conjugations between shift invariant subspaces


def pair_symbol(lam: OperatorSymbol, theta: OperatorSymbol, J: PointConjugation) -> OperatorSymbol:
    """Symbol ``U`` of ``M_Theta J* M_{Lambda^*} = M_U J*``, namely ``Theta (Lambda_J)^*``."""
    return theta @ symbol_transform(lam, "flipJ", J).H


def involution_residuals(lam: OperatorSymbol, theta: OperatorSymbol, J: PointConjugation) -> dict[str, float]:
    """
    The involution condition in both forms: ``Theta J Lambda^# J = Lambda J Theta^# J``
    (pointwise, right-multiplied by ``J``) and ``Theta Lambda_J^* = Lambda Theta_J^*``.
    """
    pointwise = lambda S: symbol_transform(symbol_transform(S, "sharp"), "conjJ", J)  # noqa: E731
    flip_adj = lambda S: symbol_transform(S, "flipJ", J).H  # noqa: E731
    return {
        "pointwise": (theta @ pointwise(lam)).distance(lam @ pointwise(theta)),
        "flipped": (theta @ flip_adj(lam)).distance(lam @ flip_adj(theta)),
    }


def make_pair_conjugation(lam_ctx, theta_ctx, J: PointConjugation, tol: float = MEMBER_TOL) -> CheckReport:
    """
    Build ``C = M_Theta J* M_{Lambda^*}`` and decide whether it is an involution.

    The action is returned under ``artifacts["C"]`` whatever the verdict.  It
    always maps ``Lambda H^2`` onto ``Theta H^2``; the residual ``onto`` checks
    ``Theta^* C(Lambda e_n b) = e_n J b``.
    """
    lam_ctx, theta_ctx = _ctx(lam_ctx), _ctx(theta_ctx)
    lam, theta = lam_ctx.symbol, theta_ctx.symbol
    res = involution_residuals(lam, theta, J)
    ok = max(res.values()) <= tol
    C = SpaceConjugation(pair_symbol(lam, theta, J), J, Kind.STAR, valid=ok)
    into = onto = 0.0
    for b in basis_fields(lam_ctx.dim, (0, max(lam_ctx.degree, theta_ctx.degree, 1))):
        img = C(lam @ b)
        into = max(into, theta_H2_residual(theta, img))
        onto = max(onto, (theta.H @ img - CircleField(b.offset, J(b.coeffs))).norm())
    res.update({"into": into, "onto": onto})
    return CheckReport(ok, res, artifacts={"C": C})


def shift_invariant_analyze(
    C: SpaceConjugation, lam_ctx, theta_ctx, tol: float = MEMBER_TOL, band: int = 8, seed=0
) -> CheckReport:
    """
    For an ``M_z``-commuting conjugation with ``C(Lambda H^2) in Theta H^2``,
    recover ``Psi`` from ``U^* Lambda = Theta_J Psi``, put ``Gamma = Theta Psi_J``
    and confirm ``Theta <= Gamma``, ``Gamma Lambda_J^* = Lambda Gamma_J^*``,
    ``(Psi Lambda^* Theta)_J = (Psi Lambda^* Theta)^*`` and ``C = C_J^{Lambda,Gamma}``.
    """
    lam_ctx, theta_ctx = _ctx(lam_ctx), _ctx(theta_ctx)
    if C.kind is not Kind.STAR:
        raise PreconditionError("expected an M_z-commuting conjugation (kind STAR)")
    J = C.J
    lam, theta = lam_ctx.symbol, theta_ctx.symbol
    hi = max(band, C.U.n_max + lam.n_max + 1)
    cont, witness = 0.0, None
    for b in basis_fields(C.dim, (0, hi)):
        r = theta_H2_residual(theta, C(lam @ b))
        if r > cont:
            cont, witness = r, b
    if cont > tol:
        return CheckReport(False, {"containment": cont}, witness)
    theta_J = symbol_transform(theta, "flipJ", J)
    psi_full = theta_J.H @ C.U.H @ lam
    psi_cert = certify_inner(psi_full, INNER_TOL)
    res = {"containment": cont, "psi_negative_part": psi_cert.residuals["negative_part"]}
    if not psi_cert.inner:
        return CheckReport(False, res, artifacts={"Psi": psi_full})
    psi = psi_full.truncated(0, None)
    gamma = theta @ symbol_transform(psi, "flipJ", J)
    gamma_alt = symbol_transform(C.U, "flipJ", J).H @ symbol_transform(lam, "flipJ", J)
    q = psi @ lam.H @ theta
    res.update(
        {
            "gamma_forms": gamma.distance(gamma_alt),
            "gamma_pair": involution_residuals(lam, gamma, J)["flipped"],
            "q_symmetry": symbol_transform(q, "flipJ", J).distance(q.H),
        }
    )
    theta_div = divides(theta, gamma)
    pair = pair_symbol(lam, gamma, J)
    res["symbol_match"] = pair.distance(C.U)
    rng = np.random.default_rng(seed)
    action = 0.0
    Cp = SpaceConjugation(pair, J, Kind.STAR)
    for _ in range(10):
        f = random_field(C.dim, (-4, 4), rng)
        action = max(action, (Cp(f) - C(f)).norm() / f.norm())
    res["action"] = action
    ok = theta_div and all(v <= tol for k, v in res.items() if k != "psi_negative_part")
    return CheckReport(ok, res, artifacts={"Psi": psi, "Gamma": gamma, "theta_divides_gamma": theta_div})


__all__ = [
    "CheckReport",
    "KernelField",
    "ModelContext",
    "PreconditionError",
    "between_model_spaces_commuting",
    "between_model_spaces_intertwining",
    "check_V_compatibility",
    "compressed_matrix",
    "decompose_on_KTheta",
    "evaluate_in_disk",
    "invariance_residual",
    "jstar_model_identities",
    "kernel",
    "KTheta_residual",
    "make_C_Theta_J",
    "make_pair_conjugation",
    "model_operator_adjoint_apply",
    "model_operator_apply",
    "pair_symbol",
    "project_KTheta",
    "project_theta_H2",
    "reproducing_residual",
    "shift_invariant_analyze",
    "symbol_in_disk",
    "theta_H2_residual",
    "vzero_residual",
    "involution_residuals",
]
