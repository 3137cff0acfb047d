"""
Antilinear operators on L^2(C^d) built from a point conjugation.

A point conjugation is ``J x = K conj(x)`` with ``K`` unitary and symmetric.
Every conjugation that commutes with ``M_z`` is ``M_U J*`` and every one that
intertwines ``M_z`` with ``M_{z-bar}`` is ``M_U J~``, where

* ``(J* f)(z) = J f(z-bar)``, i.e. coefficient ``x_n -> J x_n`` at index ``n``;
* ``(J~ f)(z) = J f(z)``, i.e. coefficient ``x_n -> J x_n`` at index ``-n``.

:class:`SpaceConjugation` stores the triple ``(U, J, kind)`` and applies it
exactly on coefficients.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .circfield import (
    CircleField,
    OperatorSymbol,
    _check_dims,
    basis_fields,
    inner_product,
    is_unitary_valued,
    random_field,
    random_unitary,
    symbol_transform,
)

POINT_TOL = 1e-12
DEFAULT_TOL = 1e-10


class ConjugationError(ValueError):
    """A symbol or black-box action failed a structural requirement."""

    def __init__(self, message: str, residual: float = float("nan"), index: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.index = index


class Kind(str, enum.Enum):
    STAR = "star"  # M_U J*, commutes with M_z
    TILDE = "tilde"  # M_U J~, intertwines M_z and M_{z-bar}


class Mode(str, enum.Enum):
    COMMUTING = "commuting"
    INTERTWINING = "intertwining"


# --------------------------------------------------------------------------
# point conjugations


@dataclass(frozen=True, eq=False)
class PointConjugation:
    """``x -> K conj(x)`` on C^d."""

    K: np.ndarray

    def __post_init__(self):
        K = np.array(self.K, dtype=complex)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ValueError(f"K must be square, got shape {K.shape}")
        d = K.shape[0]
        unit = np.linalg.norm(K.conj().T @ K - np.eye(d))
        sym = np.linalg.norm(K - K.T)
        if unit > POINT_TOL or sym > POINT_TOL:
            raise ConjugationError(
                f"K does not define a conjugation (unitarity residual {unit:.2e}, symmetry residual {sym:.2e})",
                max(unit, sym),
            )
        K.setflags(write=False)
        object.__setattr__(self, "K", K)

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    @classmethod
    def standard(cls, d: int) -> "PointConjugation":
        """Entrywise conjugation (``K = I``)."""
        return cls(np.eye(d))

    @classmethod
    def swap(cls, d: int = 2) -> "PointConjugation":
        """Conjugate and reverse the coordinates."""
        return cls(np.eye(d)[::-1])

    @classmethod
    def random(cls, d: int, seed) -> "PointConjugation":
        W = random_unitary(d, np.random.default_rng(seed))
        K = W @ W.T
        return cls((K + K.T) / 2)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        _check_dims(x.shape[-1], self.dim)
        return np.conj(x) @ self.K.T

    def sandwich(self, A) -> np.ndarray:
        """Matrix of the linear map ``J A J`` (works on stacked matrices too)."""
        return self.K @ np.conj(A) @ np.conj(self.K)


def point_apply(J: PointConjugation, x) -> np.ndarray:
    return J(x)


def compose_points(J: PointConjugation, Jp: PointConjugation) -> np.ndarray:
    """Unitary matrix of the linear map ``J J'``, namely ``K conj(K')``."""
    _check_dims(J.dim, Jp.dim)
    return J.K @ np.conj(Jp.K)


# --------------------------------------------------------------------------
# structured antilinear operators on L^2


def _point_on_field(J: PointConjugation, f: CircleField, reflect: bool) -> CircleField:
    _check_dims(J.dim, f.dim)
    if f.is_zero:
        return f
    c = np.conj(f.coeffs) @ J.K.T
    if reflect:
        return CircleField(-f.n_max, c[::-1])
    return CircleField(f.offset, c)


@dataclass(frozen=True, eq=False)
class SpaceConjugation:
    """
    ``M_U J*`` (kind STAR) or ``M_U J~`` (kind TILDE).

    ``valid`` is only set by constructors that verified the kind-specific
    symmetry condition together with unitarity of ``U``.
    """

    U: OperatorSymbol
    J: PointConjugation
    kind: Kind
    valid: bool = field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        _check_dims(self.U.dim, self.J.dim)

    @property
    def dim(self) -> int:
        return self.U.dim

    def __call__(self, f: CircleField) -> CircleField:
        return self.U @ _point_on_field(self.J, f, reflect=self.kind is Kind.TILDE)

    def __repr__(self):
        return f"SpaceConjugation(kind={self.kind.value}, U={self.U!r}, valid={self.valid})"


def make_canonical(J: PointConjugation, kind: Kind | str) -> SpaceConjugation:
    """``J*`` or ``J~`` itself."""
    return SpaceConjugation(OperatorSymbol.identity(J.dim), J, Kind(kind), valid=True)


def symmetry_residual(U: OperatorSymbol, J: PointConjugation, kind: Kind | str) -> tuple[float, int | None]:
    """
    Residual of the condition making ``M_U J*`` / ``M_U J~`` an involution.

    STAR needs ``J U(z-bar) J = U(z)^*``, i.e. ``U_J = U^*`` as symbols.
    TILDE needs ``J U(z) J = U(z)^*`` pointwise, i.e. ``J U_n J = U_n^*``
    for every coefficient.  Returns the worst residual and its index.
    """
    kind = Kind(kind)
    lhs = symbol_transform(U, "flipJ" if kind is Kind.STAR else "conjJ", J)
    diff = lhs - U.H
    if diff.is_zero:
        return 0.0, None
    norms = np.linalg.norm(diff.coeffs.reshape(diff.coeffs.shape[0], -1), axis=1)
    k = int(np.argmax(norms))
    return float(norms[k]), diff.offset + k


def make_structured(
    U: OperatorSymbol, J: PointConjugation, kind: Kind | str, tol: float = DEFAULT_TOL
) -> SpaceConjugation:
    """Validate ``(U, J, kind)`` and return the conjugation; raises on failure."""
    kind = Kind(kind)
    _check_dims(U.dim, J.dim)
    unit = is_unitary_valued(U, tol)
    if not unit:
        raise ConjugationError(
            f"U is not unitary-valued (grid {unit.grid_residual:.2e}, moments {unit.moment_residual:.2e})",
            max(unit.grid_residual, unit.moment_residual),
        )
    res, idx = symmetry_residual(U, J, kind)
    if res > tol:
        raise ConjugationError(f"{kind.value} symmetry condition fails, worst at index {idx} (residual {res:.2e})", res, idx)
    return SpaceConjugation(U, J, kind, valid=True)


def antilinear_sharp(C: SpaceConjugation) -> SpaceConjugation:
    """
    Antilinear adjoint: ``<C f, g> = conj(<f, C# g>)``.

    ``(M_U J*)# = J* M_{U^*} = M_{(U^*)_J} J*`` and
    ``(M_U J~)# = J~ M_{U^*} = M_{J U^* J} J~``.
    """
    mode = "flipJ" if C.kind is Kind.STAR else "conjJ"
    return SpaceConjugation(symbol_transform(C.U.H, mode, C.J), C.J, C.kind, C.valid)


def rebase(C: SpaceConjugation, Jp: PointConjugation) -> SpaceConjugation:
    """Same operator written against ``J'``: ``U' = U (J J')``."""
    _check_dims(C.dim, Jp.dim)
    return SpaceConjugation(C.U @ OperatorSymbol.constant(compose_points(C.J, Jp)), Jp, C.kind, C.valid)


# --------------------------------------------------------------------------
# 2 x 2 block form over scalar L^2


def _scalar(psi) -> OperatorSymbol:
    if isinstance(psi, OperatorSymbol):
        if psi.dim != 1:
            raise ValueError("block entries must be scalar symbols")
        return psi
    return OperatorSymbol.scalar(dict(psi))


def _reverse_scalar(psi: OperatorSymbol) -> OperatorSymbol:
    """``conj(psi^#)``: coefficient ``n`` becomes ``psi_{-n}``."""
    return symbol_transform(symbol_transform(psi, "sharp"), "adjoint")


def component(f: CircleField, i: int) -> CircleField:
    return CircleField(f.offset, f.coeffs[:, i : i + 1])


def stack(parts: list[CircleField]) -> CircleField:
    lo = min((p.n_min for p in parts if not p.is_zero), default=0)
    hi = max((p.n_max for p in parts if not p.is_zero), default=-1)
    if hi < lo:
        return CircleField.zero(len(parts))
    return CircleField(lo, np.concatenate([p.window(lo, hi) for p in parts], axis=1))


@dataclass(frozen=True, eq=False)
class Block2Conjugation:
    """
    ``[[D1, D2], [D3, D4]]`` with ``D_i = M_{psi_i} J*`` (COMMUTING, and
    ``psi_3 = conj(psi_2^#)``) or ``D_i = M_{psi_i} J~`` (INTERTWINING, and
    ``psi_3 = psi_2``), acting on pairs of scalar fields.
    """

    psi1: OperatorSymbol
    psi2: OperatorSymbol
    psi4: OperatorSymbol
    mode: Mode

    def __post_init__(self):
        for name in ("psi1", "psi2", "psi4"):
            object.__setattr__(self, name, _scalar(getattr(self, name)))
        object.__setattr__(self, "mode", Mode(self.mode))

    dim = 2

    @property
    def psi3(self) -> OperatorSymbol:
        return _reverse_scalar(self.psi2) if self.mode is Mode.COMMUTING else self.psi2

    @property
    def kind(self) -> Kind:
        return Kind.STAR if self.mode is Mode.COMMUTING else Kind.TILDE

    def symbol(self) -> OperatorSymbol:
        return OperatorSymbol.from_blocks([[self.psi1, self.psi2], [self.psi3, self.psi4]])

    def to_space(self) -> SpaceConjugation:
        """Unvalidated ``M_U J_1*`` / ``M_U J_1~`` with ``U`` the block symbol."""
        return SpaceConjugation(self.symbol(), PointConjugation.standard(2), self.kind)

    def __call__(self, f: CircleField) -> CircleField:
        _check_dims(f.dim, 2)
        J = PointConjugation.standard(1)
        reflect = self.mode is Mode.INTERTWINING
        g1 = _point_on_field(J, component(f, 0), reflect)
        g2 = _point_on_field(J, component(f, 1), reflect)
        return stack([self.psi1 @ g1 + self.psi2 @ g2, self.psi3 @ g1 + self.psi4 @ g2])


def apply_conjugation(C, f: CircleField) -> CircleField:
    _check_dims(C.dim, f.dim)
    return C(f)


@dataclass(frozen=True)
class Block2Report:
    ok: bool
    residuals: Mapping[str, float]
    tol: float

    def __bool__(self):
        return self.ok


def block2_check(psi1, psi2, psi4, mode: Mode | str, tol: float = 1e-13) -> Block2Report:
    """
    Scalar conditions for the 2 x 2 block operator to be a conjugation of the
    given type, each evaluated as an exact Laurent-polynomial identity.

    COMMUTING: ``psi_i^# = conj(psi_i)`` (i = 1, 4); ``|psi_1|^2 = |psi_4|^2 =
    1 - |psi_2|^2``; ``psi_1^# psi_2 + psi_2^# psi_4 = 0``.
    INTERTWINING: the same modulus identities and
    ``conj(psi_1) psi_2 + conj(psi_2) psi_4 = 0``.
    """
    p1, p2, p4 = (_scalar(p) for p in (psi1, psi2, psi4))
    mode = Mode(mode)
    one = OperatorSymbol.identity(1)
    sq = lambda p: p @ p.H  # noqa: E731
    res = {
        "modulus_psi1": (sq(p1) + sq(p2)).distance(one),
        "modulus_psi4": (sq(p4) + sq(p2)).distance(one),
    }
    if mode is Mode.COMMUTING:
        sharp = lambda p: symbol_transform(p, "sharp")  # noqa: E731
        res["psi1_symmetric"] = sharp(p1).distance(p1.H)
        res["psi4_symmetric"] = sharp(p4).distance(p4.H)
        res["cross"] = (sharp(p1) @ p2 + sharp(p2) @ p4).norm()
    else:
        res["cross"] = (p1.H @ p2 + p2.H @ p4).norm()
    return Block2Report(all(v <= tol for v in res.values()), res, tol)


# --------------------------------------------------------------------------
# verifiers


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    involution: float
    isometry: float
    antilinearity: float
    trials: int
    tol: float

    def __bool__(self):
        return self.ok

    @property
    def residuals(self) -> dict[str, float]:
        return {"involution": self.involution, "isometry": self.isometry, "antilinearity": self.antilinearity}


def verify_axioms(
    C: Callable[[CircleField], CircleField],
    trials: int = 100,
    seed=0,
    tol: float = DEFAULT_TOL,
    band: tuple[int, int] = (-4, 4),
    dim: int | None = None,
) -> AxiomReport:
    """
    Sample random fields and measure, relative to the input norms,
    ``||C C f - f||``, ``|<Cf, Cg> - <g, f>|`` and
    ``||C(a f + g) - conj(a) C f - C g||``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    d = dim if dim is not None else C.dim
    rng = np.random.default_rng(seed)
    inv = iso = anti = 0.0
    for _ in range(trials):
        f = random_field(d, band, rng)
        g = random_field(d, band, rng)
        a = complex(rng.standard_normal(), rng.standard_normal())
        Cf, Cg = C(f), C(g)
        nf, ng = f.norm(), g.norm()
        inv = max(inv, (C(Cf) - f).norm() / nf)
        iso = max(iso, abs(inner_product(Cf, Cg) - inner_product(g, f)) / (nf * ng))
        lhs = C(a * f + g)
        anti = max(anti, (lhs - (np.conj(a) * Cf + Cg)).norm() / (abs(a) * nf + ng))
    return AxiomReport(max(inv, iso, anti) <= tol, inv, iso, anti, trials, tol)


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def check_Mz_relation(
    C: Callable[[CircleField], CircleField],
    mode: str,
    tol: float = DEFAULT_TOL,
    band: tuple[int, int] = (-8, 8),
    dim: int | None = None,
) -> RelationReport:
    """``C M_z = M_z C`` (``commute``) or ``C M_z = M_{z-bar} C`` (``intertwine``) on monomials."""
    step = {"commute": 1, "intertwine": -1}.get(mode)
    if step is None:
        raise ValueError(f"unknown relation {mode!r}")
    d = dim if dim is not None else C.dim
    worst = 0.0
    for b in basis_fields(d, band):
        worst = max(worst, (C(b.shifted(1)) - C(b).shifted(step)).norm())
    return RelationReport(worst <= tol, worst)


def extract_symbol(
    C: Callable[[CircleField], CircleField],
    kind: Kind | str,
    J: PointConjugation,
    band: tuple[int, int] = (-16, 16),
    tol: float = DEFAULT_TOL,
) -> OperatorSymbol:
    """
    Recover ``U`` from a black-box action assumed to equal ``M_U J*`` or
    ``M_U J~``: ``C`` composed with the canonical conjugation is ``M_U``.

    Raises :class:`ConjugationError` when the composite is not translation
    covariant or ``U`` leaves ``band``.
    """
    canon = make_canonical(J, kind)
    d = J.dim
    eye = np.eye(d)
    cols = [C(canon(CircleField.monomial(0, eye[j]))) for j in range(d)]
    worst = 0.0
    for j, col in enumerate(cols):
        for s in (1, -1):
            moved = C(canon(CircleField.monomial(s, eye[j])))
            worst = max(worst, (moved - col.shifted(s)).norm())
    if worst > tol:
        raise ConjugationError(f"action is not a multiplication composed with {Kind(kind).value} (residual {worst:.2e})", worst)
    U = OperatorSymbol.from_terms(d, {}) if all(c.is_zero for c in cols) else _columns_to_symbol(cols)
    if not U.is_zero and (U.n_min < band[0] or U.n_max > band[1]):
        raise ConjugationError(f"recovered symbol support [{U.n_min}, {U.n_max}] exceeds band {band}")
    return U


def _columns_to_symbol(cols: list[CircleField]) -> OperatorSymbol:
    lo = min(c.n_min for c in cols if not c.is_zero)
    hi = max(c.n_max for c in cols if not c.is_zero)
    return OperatorSymbol(lo, np.stack([c.window(lo, hi) for c in cols], axis=2))


@dataclass(frozen=True)
class H2Report:
    ok: bool
    U0: np.ndarray | None = None
    constancy_residual: float = float("nan")
    symmetry_residual: float = float("nan")
    witness: CircleField | None = None
    witness_residual: float = 0.0
    witness_via_sharp: bool = False

    def __bool__(self):
        return self.ok


def preserves_H2(C: SpaceConjugation, tol: float = DEFAULT_TOL, band: tuple[int, int] = (-16, 16)) -> H2Report:
    """
    Does ``C`` (and its antilinear adjoint, which equals ``C`` for a
    conjugation) map ``H^2`` into itself?

    Scans ``C(z^n b)`` for ``n >= 0``.  On success for kind STAR the single
    surviving coefficient ``U_0`` is returned with its J-symmetry residual;
    on failure a witness ``f`` in ``H^2`` with largest ``||(I - P_+) C f||``.
    """
    hi = max(band[1], C.U.n_max + 1, 0)
    worst, witness, via_sharp = 0.0, None, False
    for op, is_sharp in ((C, False), (antilinear_sharp(C), True)):
        for b in basis_fields(C.dim, (0, hi)):
            out = op(b)
            r = out.truncated(None, -1).norm() if not out.is_zero and out.n_min < 0 else 0.0
            if r > worst:
                worst, witness, via_sharp = r, b, is_sharp
    if worst > tol:
        return H2Report(False, witness=witness, witness_residual=worst, witness_via_sharp=via_sharp)
    if C.kind is not Kind.STAR:
        return H2Report(True, witness_residual=worst)
    U0 = C.U.coeff(0)
    constancy = (C.U - OperatorSymbol.constant(U0)).norm()
    sym = float(np.linalg.norm(C.J.sandwich(U0) - U0.conj().T))
    return H2Report(True, U0=U0, constancy_residual=constancy, symmetry_residual=sym, witness_residual=worst)


# --------------------------------------------------------------------------
# random valid conjugations


def random_structured(d: int, kind: Kind | str, J: PointConjugation, seed, n_factors: int = 2) -> SpaceConjugation:
    """
    A random valid conjugation of the given kind: ``M_A C0 M_A^*`` with
    ``C0`` canonical and ``A`` a random unitary-valued Laurent polynomial.
    """
    from .circfield import random_unitary_symbol

    kind = Kind(kind)
    A = random_unitary_symbol(d, n_factors, seed)
    if kind is Kind.STAR:
        U = A @ symbol_transform(A, "flipJ", J).H
    else:
        U = A @ symbol_transform(A.H, "conjJ", J)
    return make_structured(U, J, kind)
