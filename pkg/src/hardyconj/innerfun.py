"""
Operator-valued inner functions given as matrix polynomials.

An inner function is an analytic symbol whose values on the circle are
unitary.  Purity means ``||Theta(0)|| < 1``.  Divisibility ``Lambda <= Theta``
means ``Lambda^* Theta`` is analytic, in which case the quotient
``Psi = Lambda^* Theta`` is again inner and ``Theta = Lambda Psi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .antilinear import PointConjugation
from .circfield import (
    OperatorSymbol,
    is_analytic,
    is_unitary_valued,
    random_unitary,
    symbol_transform,
)

INNER_TOL = 1e-9
PURITY_MARGIN = 1e-9
RECONSTRUCTION_TOL = 1e-12


class NotInnerError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class InnerCertificate:
    """Verified flags for a symbol together with the residuals behind them."""

    symbol: OperatorSymbol
    analytic: bool
    unitary_valued: bool
    pure: bool
    j_symmetric_for: PointConjugation | None = None
    tolerances: Mapping[str, float] = field(default_factory=dict)
    residuals: Mapping[str, float] = field(default_factory=dict)

    @property
    def inner(self) -> bool:
        return self.analytic and self.unitary_valued

    @property
    def dim(self) -> int:
        return self.symbol.dim

    def __bool__(self):
        return self.inner


def _value_at_zero_norm(F: OperatorSymbol) -> float:
    return float(np.linalg.norm(F.coeff(0), ord=2))


def certify_inner(F: OperatorSymbol, tol: float = INNER_TOL, J: PointConjugation | None = None) -> InnerCertificate:
    """Run the analyticity, unitarity and purity checks (and J-symmetry if ``J`` is given)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    ana = is_analytic(F, tol)
    uni = is_unitary_valued(F, tol)
    theta0 = _value_at_zero_norm(F)
    pure = bool(ana) and theta0 < 1 - PURITY_MARGIN
    residuals = {
        "negative_part": ana.worst,
        "unitarity_grid": uni.grid_residual,
        "unitarity_moments": uni.moment_residual,
        "norm_at_zero": theta0,
    }
    sym_for = None
    if J is not None and ana:
        r = j_symmetry_residual(F, J)
        residuals["j_symmetry"] = r
        if r <= tol:
            sym_for = J
    return InnerCertificate(
        F, bool(ana), bool(uni), pure, sym_for, {"tol": tol, "purity_margin": PURITY_MARGIN}, residuals
    )


def _symbol_of(theta) -> OperatorSymbol:
    return theta.symbol if isinstance(theta, InnerCertificate) else theta


def _require_inner(*thetas, tol: float = INNER_TOL) -> list[OperatorSymbol]:
    out = []
    for t in thetas:
        cert = t if isinstance(t, InnerCertificate) else certify_inner(t, tol)
        if not cert.inner:
            raise NotInnerError(f"symbol is not inner (residuals {dict(cert.residuals)})")
        out.append(cert.symbol)
    return out


def theta_sharp(theta) -> OperatorSymbol:
    """``Theta^#(z) = Theta(z-bar)^*``."""
    return symbol_transform(_symbol_of(theta), "sharp")


def j_symmetry_residual(F: OperatorSymbol, J: PointConjugation) -> float:
    """Largest ``||J F_n J - F_n^*||`` over the coefficients."""
    if F.is_zero:
        return 0.0
    diff = J.sandwich(F.coeffs) - np.conj(np.swapaxes(F.coeffs, 1, 2))
    return float(np.max(np.linalg.norm(diff, axis=(1, 2))))


def is_J_symmetric(theta, J: PointConjugation, tol: float = INNER_TOL) -> bool:
    """Coefficientwise J-symmetry of an analytic symbol."""
    F = _symbol_of(theta)
    if not is_analytic(F, tol):
        raise ValueError("J-symmetry via coefficients is only defined here for analytic symbols")
    return j_symmetry_residual(F, J) <= tol * (1 + F.norm())


def divides(lam, theta, tol: float = INNER_TOL) -> bool:
    """``Lambda <= Theta``: is ``Lambda^* Theta`` analytic?"""
    L, T = _require_inner(lam, theta, tol=tol)
    return bool(is_analytic(L.H @ T, tol))


def quotient(lam, theta, tol: float = INNER_TOL) -> OperatorSymbol:
    """``Psi`` with ``Theta = Lambda Psi``; requires ``Lambda <= Theta``."""
    L, T = _require_inner(lam, theta, tol=tol)
    prod = L.H @ T
    if not is_analytic(prod, tol):
        raise ValueError("divisor does not divide: Lambda^* Theta has a non-analytic part")
    psi = prod.truncated(0, None)
    err = (L @ psi).distance(T)
    if err > RECONSTRUCTION_TOL * (1 + T.norm()):
        raise ArithmeticError(f"quotient reconstruction residual {err:.2e}")
    return psi


@dataclass(frozen=True)
class TwoSidedReport:
    left: bool  # Lambda^* Theta analytic
    right: bool  # Theta Lambda^* analytic
    left_residual: float
    right_residual: float

    @property
    def agree(self) -> bool:
        return self.left == self.right

    def __bool__(self):
        return self.agree


def two_sided_divisibility_check(theta, lam, J: PointConjugation, tol: float = INNER_TOL) -> TwoSidedReport:
    """For a common symmetrizing ``J``, ``Lambda^* Theta`` and ``Theta Lambda^*`` are analytic together."""
    L, T = _require_inner(lam, theta, tol=tol)
    for name, S in (("Lambda", L), ("Theta", T)):
        if not is_J_symmetric(S, J, tol):
            raise ValueError(f"{name} is not J-symmetric for the given J")
    a = is_analytic(L.H @ T, tol)
    b = is_analytic(T @ L.H, tol)
    return TwoSidedReport(bool(a), bool(b), a.worst, b.worst)


# --------------------------------------------------------------------------
# generators


def blaschke_factor_matrix(v: np.ndarray) -> OperatorSymbol:
    """``(I - P) + z P`` for the projection onto ``v``; an analytic inner factor."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    P = np.outer(v, v.conj())
    return OperatorSymbol.from_terms(len(v), {0: np.eye(len(v)) - P, 1: P})


def random_inner(d: int, n_factors: int, seed) -> OperatorSymbol:
    """``W_0 B_1 W_1 ... B_k W_k`` with Haar unitaries and analytic rank-one factors."""
    rng = np.random.default_rng(seed)
    out = OperatorSymbol.constant(random_unitary(d, rng))
    for _ in range(n_factors):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        out = out @ blaschke_factor_matrix(v) @ OperatorSymbol.constant(random_unitary(d, rng))
    return out


def random_j_symmetric_inner(J: PointConjugation, n_factors: int, seed) -> OperatorSymbol:
    """
    ``B (K B^T conj(K))`` for a random analytic inner ``B``.

    ``B K B^T`` is symmetric coefficientwise in the sense ``(X K)^T = X K``,
    which is exactly J-symmetry of ``X = B K B^T conj(K)``.
    """
    B = random_inner(J.dim, n_factors, seed)
    Bt = OperatorSymbol(B.offset, np.swapaxes(B.coeffs, 1, 2))
    return B @ OperatorSymbol.constant(J.K) @ Bt @ OperatorSymbol.constant(np.conj(J.K))
