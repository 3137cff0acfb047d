"""
Vector fields and operator symbols on the unit circle.

Both objects are finitely supported two-sided Fourier series: a field is
``f = sum_n x_n z^n`` with ``x_n`` in C^d, a symbol is ``F = sum_n F_n z^n``
with ``F_n`` a d x d complex matrix.  They are stored densely as a
coefficient block plus the index of its first row, so every product,
transform and projection below is an exact finite computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy.stats import unitary_group

UNIT_CIRCLE_TOL = 1e-12


def _as_matrix(K) -> np.ndarray:
    """Accept either a point conjugation or its raw unitary matrix."""
    return np.asarray(getattr(K, "K", K), dtype=complex)


def _trim(offset: int, coeffs: np.ndarray) -> tuple[int, np.ndarray]:
    # drop exactly-zero rows at both ends
    if coeffs.shape[0] == 0:
        return 0, coeffs.copy()
    flat = coeffs.reshape(coeffs.shape[0], -1)
    nz = np.flatnonzero(np.any(flat != 0, axis=1))
    if nz.size == 0:
        return 0, coeffs[:0].copy()
    lo, hi = nz[0], nz[-1] + 1
    return offset + int(lo), coeffs[lo:hi].copy()


class _Series:
    """Shared bookkeeping for fields and symbols (coefficient block + offset)."""

    offset: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != self._ndim:
            raise ValueError(f"{type(self).__name__} coefficients must have {self._ndim} axes, got shape {c.shape}")
        if self._ndim == 3 and c.shape[1] != c.shape[2]:
            raise ValueError(f"matrix coefficients must be square, got {c.shape[1:]}")
        offset, c = _trim(int(self.offset), c)
        c.setflags(write=False)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n_min(self) -> int:
        return self.offset

    @property
    def n_max(self) -> int:
        """Largest index carried (``n_min - 1`` for the zero series)."""
        return self.offset + self.coeffs.shape[0] - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    def indices(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def coeff(self, n: int) -> np.ndarray:
        k = n - self.offset
        if 0 <= k < self.coeffs.shape[0]:
            return self.coeffs[k]
        return np.zeros(self.coeffs.shape[1:], dtype=complex)

    def terms(self) -> dict[int, np.ndarray]:
        """Nonzero coefficients keyed by index, in increasing order."""
        return {n: self.coeff(n) for n in self.indices() if np.any(self.coeff(n) != 0)}

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for indices ``lo..hi`` inclusive, zero-padded."""
        out = np.zeros((hi - lo + 1,) + self.coeffs.shape[1:], dtype=complex)
        a, b = max(lo, self.n_min), min(hi, self.n_max)
        if a <= b:
            out[a - lo : b - lo + 1] = self.coeffs[a - self.offset : b - self.offset + 1]
        return out

    def _aligned(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_dims(self.dim, other.dim)
        if self.is_zero and other.is_zero:
            return 0, self.coeffs, other.coeffs
        lo = min(s.n_min for s in (self, other) if not s.is_zero)
        hi = max(s.n_max for s in (self, other) if not s.is_zero)
        return lo, self.window(lo, hi), other.window(lo, hi)

    def __add__(self, other):
        al = self._aligned(other)
        if al is NotImplemented:
            return al
        lo, a, b = al
        return type(self)(lo, a + b)

    def __sub__(self, other):
        al = self._aligned(other)
        if al is NotImplemented:
            return al
        lo, a, b = al
        return type(self)(lo, a - b)

    def __neg__(self):
        return type(self)(self.offset, -self.coeffs)

    def __mul__(self, alpha):
        if np.isscalar(alpha):
            return type(self)(self.offset, complex(alpha) * self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def shifted(self, k: int):
        """Multiply by ``z^k`` (index relabelling)."""
        return type(self)(self.offset + k, self.coeffs)

    def truncated(self, lo: int | None = None, hi: int | None = None):
        """Keep indices in ``[lo, hi]``."""
        if self.is_zero:
            return self
        lo = self.n_min if lo is None else lo
        hi = self.n_max if hi is None else hi
        if lo > hi:
            return type(self)(0, self.coeffs[:0])
        return type(self)(lo, self.window(lo, hi))

    def cleaned(self, tol: float):
        """Zero out coefficients whose norm is at most ``tol`` (rounding debris)."""
        c = self.coeffs.copy()
        norms = np.linalg.norm(c.reshape(c.shape[0], -1), axis=1)
        c[norms <= tol] = 0
        return type(self)(self.offset, c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def distance(self, other) -> float:
        """Largest coefficientwise difference (Euclidean / Frobenius norm)."""
        _, a, b = self._aligned(other)
        if a.shape[0] == 0:
            return 0.0
        return float(np.max(np.linalg.norm((a - b).reshape(a.shape[0], -1), axis=1)))

    def _grid_eval(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        powers = z[..., None] ** np.arange(self.n_min, self.n_max + 1)
        return np.tensordot(powers, self.coeffs, axes=([-1], [0]))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, support=[{self.n_min}, {self.n_max}])"


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} != {b}")


@dataclass(frozen=True, eq=False, repr=False)
class CircleField(_Series):
    """Element of L^2(C^d): ``coeffs[k]`` is the Fourier coefficient at index ``offset + k``."""

    offset: int
    coeffs: np.ndarray = field()
    _ndim = 2

    @classmethod
    def zero(cls, d: int) -> "CircleField":
        return cls(0, np.zeros((0, d), dtype=complex))

    @classmethod
    def monomial(cls, n: int, x) -> "CircleField":
        """The field ``x * z^n``."""
        return cls(n, np.asarray(x, dtype=complex)[None, :])

    @classmethod
    def from_terms(cls, d: int, terms: Mapping[int, Iterable[complex]]) -> "CircleField":
        if not terms:
            return cls.zero(d)
        lo, hi = min(terms), max(terms)
        c = np.zeros((hi - lo + 1, d), dtype=complex)
        for n, x in terms.items():
            x = np.asarray(x, dtype=complex)
            if x.shape != (d,):
                raise ValueError(f"fiber vector at index {n} has shape {x.shape}, expected ({d},)")
            c[n - lo] = x
        return cls(lo, c)

    def __call__(self, z):
        return evaluate_field(self, z)


@dataclass(frozen=True, eq=False, repr=False)
class OperatorSymbol(_Series):
    """Matrix Laurent polynomial ``F(z) = sum_n F_n z^n``; ``coeffs`` has shape (N, d, d)."""

    offset: int
    coeffs: np.ndarray = field()
    _ndim = 3

    @classmethod
    def zero(cls, d: int) -> "OperatorSymbol":
        return cls(0, np.zeros((0, d, d), dtype=complex))

    @classmethod
    def identity(cls, d: int) -> "OperatorSymbol":
        return cls(0, np.eye(d, dtype=complex)[None])

    @classmethod
    def constant(cls, M) -> "OperatorSymbol":
        return cls(0, np.asarray(M, dtype=complex)[None])

    @classmethod
    def monomial(cls, n: int, M) -> "OperatorSymbol":
        return cls(n, np.asarray(M, dtype=complex)[None])

    @classmethod
    def from_terms(cls, d: int, terms: Mapping[int, object]) -> "OperatorSymbol":
        if not terms:
            return cls.zero(d)
        lo, hi = min(terms), max(terms)
        c = np.zeros((hi - lo + 1, d, d), dtype=complex)
        for n, M in terms.items():
            M = np.asarray(M, dtype=complex)
            if M.shape != (d, d):
                raise ValueError(f"coefficient at index {n} has shape {M.shape}, expected ({d}, {d})")
            c[n - lo] = M
        return cls(lo, c)

    @classmethod
    def scalar(cls, terms: Mapping[int, complex]) -> "OperatorSymbol":
        """A d = 1 symbol from scalar Laurent coefficients."""
        return cls.from_terms(1, {n: [[c]] for n, c in terms.items()})

    @classmethod
    def diagonal(cls, *entries: "OperatorSymbol") -> "OperatorSymbol":
        """Diagonal symbol assembled from scalar (d = 1) symbols."""
        return cls.from_blocks([[entries[i] if i == j else None for j in range(len(entries))] for i in range(len(entries))])

    @classmethod
    def from_blocks(cls, blocks) -> "OperatorSymbol":
        """Matrix of scalar symbols; ``None`` entries are zero."""
        d = len(blocks)
        terms: dict[int, np.ndarray] = {}
        for i, row in enumerate(blocks):
            if len(row) != d:
                raise ValueError("block layout must be square")
            for j, s in enumerate(row):
                if s is None:
                    continue
                if s.dim != 1:
                    raise ValueError("block entries must be scalar symbols")
                for n, c in s.terms().items():
                    terms.setdefault(n, np.zeros((d, d), dtype=complex))[i, j] += c[0, 0]
        return cls.from_terms(d, terms)

    def entry(self, i: int, j: int) -> "OperatorSymbol":
        return OperatorSymbol(self.offset, self.coeffs[:, i : i + 1, j : j + 1])

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (self.n_min == 0 and self.n_max == 0)

    def __matmul__(self, other):
        if isinstance(other, OperatorSymbol):
            return symbol_multiply(self, other)
        if isinstance(other, CircleField):
            return apply_symbol(self, other)
        return NotImplemented

    def __call__(self, z):
        return self._grid_eval(z)

    @property
    def H(self) -> "OperatorSymbol":
        """Pointwise adjoint ``F^*``."""
        return symbol_transform(self, "adjoint")


# --------------------------------------------------------------------------
# operations


def inner_product(f: CircleField, g: CircleField) -> complex:
    """``<f, g> = sum_n <x_n, y_n>``, conjugate-linear in ``g``."""
    _check_dims(f.dim, g.dim)
    lo = max(f.n_min, g.n_min)
    hi = min(f.n_max, g.n_max)
    if lo > hi:
        return 0j
    return complex(np.vdot(g.window(lo, hi), f.window(lo, hi)))


def evaluate_field(f: CircleField, z) -> np.ndarray:
    """Sample ``sum_n x_n z^n`` at a point (or array of points) of the unit circle."""
    za = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(za) - 1.0) > UNIT_CIRCLE_TOL):
        raise ValueError("evaluation point is not on the unit circle")
    return f._grid_eval(za)


def shift(f: CircleField, direction: str = "forward") -> CircleField:
    """``M_z`` (forward) or ``M_{z-bar}`` (backward)."""
    if direction == "forward":
        return f.shifted(1)
    if direction == "backward":
        return f.shifted(-1)
    raise ValueError(f"unknown shift direction {direction!r}")


def project_plus(f: CircleField) -> CircleField:
    """Orthogonal projection onto H^2: drop negative indices."""
    if f.is_zero or f.n_min >= 0:
        return f
    return f.truncated(0, None)


def apply_symbol(F: OperatorSymbol, f: CircleField) -> CircleField:
    """``(F f)_m = sum_k F_{m-k} x_k``, computed exactly."""
    _check_dims(F.dim, f.dim)
    if F.is_zero or f.is_zero:
        return CircleField.zero(f.dim)
    nF, nf = F.coeffs.shape[0], f.coeffs.shape[0]
    out = np.zeros((nF + nf - 1, f.dim), dtype=complex)
    for i in range(nF):
        out[i : i + nf] += f.coeffs @ F.coeffs[i].T
    return CircleField(F.offset + f.offset, out)


def symbol_multiply(F: OperatorSymbol, G: OperatorSymbol) -> OperatorSymbol:
    """Pointwise product ``(FG)(z) = F(z) G(z)``."""
    _check_dims(F.dim, G.dim)
    if F.is_zero or G.is_zero:
        return OperatorSymbol.zero(F.dim)
    nF, nG = F.coeffs.shape[0], G.coeffs.shape[0]
    out = np.zeros((nF + nG - 1, F.dim, F.dim), dtype=complex)
    for i in range(nF):
        out[i : i + nG] += np.matmul(F.coeffs[i], G.coeffs)
    return OperatorSymbol(F.offset + G.offset, out)


def symbol_transform(F: OperatorSymbol, mode: str, J=None) -> OperatorSymbol:
    """
    Coefficient-level transforms of a symbol.

    ``adjoint``
        ``F^*(z) = F(z)^*``; index ``n`` carries ``(F_{-n})^*``.
    ``sharp``
        ``F^#(z) = F(z-bar)^*``; index ``n`` carries ``(F_n)^*``.
    ``flipJ``
        ``F_J(z) = J F(z-bar) J``; index ``n`` carries ``K conj(F_n) conj(K)``.
    ``conjJ``
        ``z -> J F(z) J`` (pointwise conjugation); index ``n`` carries
        ``K conj(F_{-n}) conj(K)``.

    For a point conjugation ``J x = K conj(x)`` the linear map ``J A J`` has
    matrix ``K conj(A) conj(K)``, which is what the last two modes use.
    """
    c = F.coeffs
    if mode == "adjoint":
        return OperatorSymbol(-F.n_max if not F.is_zero else 0, np.conj(np.swapaxes(c, 1, 2))[::-1])
    if mode == "sharp":
        return OperatorSymbol(F.offset, np.conj(np.swapaxes(c, 1, 2)))
    if mode in ("flipJ", "conjJ"):
        if J is None:
            raise ValueError(f"mode {mode!r} needs a point conjugation")
        K = _as_matrix(J)
        _check_dims(K.shape[0], F.dim)
        flipped = K @ np.conj(c) @ np.conj(K)
        if mode == "flipJ":
            return OperatorSymbol(F.offset, flipped)
        return OperatorSymbol(-F.n_max if not F.is_zero else 0, flipped[::-1])
    raise ValueError(f"unknown transform mode {mode!r}")


@dataclass(frozen=True)
class AnalyticityReport:
    ok: bool
    worst: float
    threshold: float
    offending: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


def is_analytic(F: OperatorSymbol, tol: float = 1e-9) -> AnalyticityReport:
    """True iff every negative-index coefficient is below ``tol * (1 + ||F||)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    threshold = tol * (1.0 + F.norm())
    offending, worst = [], 0.0
    for n in range(F.n_min, min(F.n_max, -1) + 1):
        r = float(np.linalg.norm(F.coeff(n)))
        worst = max(worst, r)
        if r > threshold:
            offending.append(n)
    return AnalyticityReport(not offending, worst, threshold, tuple(offending))


@dataclass(frozen=True)
class UnitarityReport:
    ok: bool
    grid_residual: float
    moment_residual: float
    grid_size: int

    def __bool__(self):
        return self.ok


def roots_of_unity(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def is_unitary_valued(F: OperatorSymbol, tol: float = 1e-9, grid_size: int | None = None) -> UnitarityReport:
    """
    Check ``F(z)^* F(z) = I`` on the circle, twice.

    The grid test samples at ``grid_size`` roots of unity; the moment test
    checks ``sum_k F_k^* F_{k+n} = delta_{n0} I`` exactly.  ``ok`` requires both.
    """
    span = 0 if F.is_zero else F.n_max - F.n_min
    need = 2 * span + 1
    if grid_size is None:
        grid_size = max(need, 8)
    if grid_size < need:
        raise ValueError(f"grid of {grid_size} points is too small for degree span {span} (need {need})")
    eye = np.eye(F.dim)
    vals = F(roots_of_unity(grid_size))
    gram = np.conj(np.swapaxes(vals, 1, 2)) @ vals
    grid_res = float(np.max(np.linalg.norm(gram - eye, ord=2, axis=(1, 2))))
    moment_res = symbol_multiply(F.H, F).distance(OperatorSymbol.identity(F.dim))
    return UnitarityReport(grid_res <= tol and moment_res <= tol, grid_res, moment_res, grid_size)


def random_field(d: int, band: tuple[int, int], seed) -> CircleField:
    """I.i.d. standard complex Gaussian coefficients on ``band`` (inclusive)."""
    lo, hi = band
    if hi < lo:
        raise ValueError(f"empty band [{lo}, {hi}]")
    if d < 1:
        raise ValueError("d must be at least 1")
    rng = np.random.default_rng(seed)
    shape = (hi - lo + 1, d)
    c = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return CircleField(lo, c)


def random_symbol(d: int, band: tuple[int, int], seed) -> OperatorSymbol:
    lo, hi = band
    if hi < lo:
        raise ValueError(f"empty band [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    shape = (hi - lo + 1, d, d)
    return OperatorSymbol(lo, (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2))


def basis_fields(d: int, band: tuple[int, int]) -> list[CircleField]:
    """Monomial fields ``e_n * b_j`` for ``n`` in ``band`` and standard basis ``b_j``."""
    eye = np.eye(d)
    return [CircleField.monomial(n, eye[j]) for n in range(band[0], band[1] + 1) for j in range(d)]


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-distributed d x d unitary."""
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))


def elementary_factor(P: np.ndarray, power: int = 1) -> OperatorSymbol:
    """``(I - P) + z^power P`` for an orthogonal projection ``P``; unitary on the circle."""
    d = P.shape[0]
    return OperatorSymbol.from_terms(d, {0: np.eye(d) - P, power: P}) if power else OperatorSymbol.identity(d)


def random_unitary_symbol(d: int, n_factors: int, seed, analytic: bool = False) -> OperatorSymbol:
    """
    Product ``W_0 E_1 W_1 ... E_k W_k`` of Haar unitaries and rank-one
    elementary factors with powers ``+1`` (and ``-1`` unless ``analytic``).
    """
    rng = np.random.default_rng(seed)
    out = OperatorSymbol.constant(random_unitary(d, rng))
    for _ in range(n_factors):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        power = 1 if analytic or rng.random() < 0.5 else -1
        out = out @ elementary_factor(np.outer(v, v.conj()), power)
        out = out @ OperatorSymbol.constant(random_unitary(d, rng))
    return out
