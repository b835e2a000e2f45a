"""Finite-dimensional generators: resolvents, Yosida approximations, semigroups.

A desk-scale stand-in for an unbounded generator is a family of matrices of
growing stiffness; the discrete Dirichlet Laplacian on (0, L) is the model
case.  Symmetric operators carry exact spectral data, which makes matrix
functions (semigroup, Mittag-Leffler families) diagonal in the eigenbasis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "SpectralData",
    "Operator",
    "OperatorSpec",
    "build_operator",
    "resolvent_op",
    "yosida",
    "semigroup",
    "adjoint",
    "DEFAULT_DIM_MAX",
]

DEFAULT_DIM_MAX = 2000

_SPECTRAL_RESID_TOL = 1e-10   # on ||A V - V diag(lam)|| / max(1, ||A||)
_ORTHO_TOL = 1e-12            # on ||V^T V - I||


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray   # (dim,)
    eigenvectors: np.ndarray  # (dim, dim), orthonormal columns


@dataclass(frozen=True)
class Operator:
    """Matrix realization of the generator A with optional spectral data.

    ``spectral_bound`` dominates the real parts of the spectrum; it is the
    omega of the exponential bound ||e^{tA}|| <= M e^{omega t}.
    """

    matrix: np.ndarray
    spectral: Optional[SpectralData]
    spectral_bound: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator matrix must have finite entries")
        if self.spectral is not None:
            lam, v = self.spectral.eigenvalues, self.spectral.eigenvectors
            scale = max(1.0, float(np.linalg.norm(m, 2)))
            resid = np.linalg.norm(m @ v - v * lam[None, :], 2)
            if resid > _SPECTRAL_RESID_TOL * scale:
                raise ValueError(
                    f"spectral data inconsistent: ||AV - V diag|| = {resid:.3e}"
                )
            ortho = np.linalg.norm(v.T @ v - np.eye(len(lam)), 2)
            if ortho > _ORTHO_TOL * max(1.0, len(lam)):
                raise ValueError(f"eigenvectors not orthonormal: {ortho:.3e}")
            if self.spectral_bound < np.max(lam) - 1e-12 * scale:
                raise ValueError("spectral_bound below the largest eigenvalue")


@dataclass(frozen=True)
class OperatorSpec:
    """Construction recipe; use the classmethods."""

    kind: str
    matrix: Optional[tuple] = None
    eigenvalues: Optional[tuple] = None
    n: Optional[int] = None
    length: Optional[float] = None

    @classmethod
    def dense(cls, matrix) -> "OperatorSpec":
        m = np.asarray(matrix, dtype=float)
        return cls(kind="dense", matrix=tuple(map(tuple, m.tolist())))

    @classmethod
    def diagonal(cls, eigenvalues: Sequence[float]) -> "OperatorSpec":
        return cls(kind="diagonal", eigenvalues=tuple(float(v) for v in eigenvalues))

    @classmethod
    def laplacian_1d(cls, n: int, length: float) -> "OperatorSpec":
        """Dirichlet Laplacian on (0, length), n interior points."""
        if n < 1 or length <= 0:
            raise ValueError("laplacian_1d needs n >= 1 and length > 0")
        return cls(kind="laplacian_1d", n=int(n), length=float(length))

    @classmethod
    def scalar(cls, value: float) -> "OperatorSpec":
        return cls.diagonal([value])


def build_operator(spec: OperatorSpec, dim_max: int = DEFAULT_DIM_MAX) -> Operator:
    """Realize the spec; symmetric matrices get spectral data (eigh hard-fails).

    The Laplacian uses the closed-form eigensystem
    lambda_k = -(4/h^2) sin^2(k pi / (2(n+1))),  v_k(j) ~ sin(j k pi/(n+1)).
    """
    if spec.kind == "dense":
        m = np.asarray(spec.matrix, dtype=float)
        _check_dim(m.shape[0], dim_max)
        if not np.all(np.isfinite(m)):
            raise ValueError("dense operator entries must be finite")
        if np.allclose(m, m.T, rtol=0, atol=1e-12 * max(1.0, np.abs(m).max())):
            lam, v = np.linalg.eigh(m)
            return Operator(matrix=m, spectral=SpectralData(lam, v), spectral_bound=float(lam[-1]))
        ev = np.linalg.eigvals(m)
        return Operator(matrix=m, spectral=None, spectral_bound=float(np.max(ev.real)))
    if spec.kind == "diagonal":
        lam = np.asarray(spec.eigenvalues, dtype=float)
        _check_dim(len(lam), dim_max)
        return Operator(
            matrix=np.diag(lam),
            spectral=SpectralData(lam.copy(), np.eye(len(lam))),
            spectral_bound=float(np.max(lam)),
        )
    if spec.kind == "laplacian_1d":
        n, length = spec.n, spec.length
        _check_dim(n, dim_max)
        h = length / (n + 1)
        m = (np.diag(-2.0 * np.ones(n)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)) / h**2
        k = np.arange(1, n + 1)
        lam = -(4.0 / h**2) * np.sin(k * math.pi / (2.0 * (n + 1))) ** 2
        jj = np.arange(1, n + 1)
        v = math.sqrt(2.0 / (n + 1)) * np.sin(np.outer(jj, k) * math.pi / (n + 1))
        order = np.argsort(lam)
        return Operator(
            matrix=m,
            spectral=SpectralData(lam[order], v[:, order]),
            spectral_bound=float(np.max(lam)),
        )
    raise ValueError(f"unknown operator kind {spec.kind}")


def _check_dim(dim: int, dim_max: int) -> None:
    if dim > dim_max:
        raise ValueError(f"dimension {dim} exceeds the configured maximum {dim_max}")


def resolvent_op(A: Operator, lam: float) -> np.ndarray:
    """(lam I - A)^{-1}, residual-checked: ||(lam I - A) R - I|| <= 1e-10 cond."""
    m = lam * np.eye(A.dim) - A.matrix
    try:
        r = np.linalg.solve(m, np.eye(A.dim))
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"lam={lam} is (numerically) in the spectrum") from exc
    resid = np.linalg.norm(m @ r - np.eye(A.dim), 2)
    cond = np.linalg.norm(m, 1) * np.linalg.norm(r, 1)
    if resid > 1e-10 * max(1.0, cond):
        raise np.linalg.LinAlgError(
            f"resolvent residual {resid:.3e} exceeds 1e-10 * cond ({cond:.3e})"
        )
    return r


def yosida(A: Operator, n: float) -> Operator:
    """Yosida approximation A_n = n^2 R(n, A) - n I = n A R(n, A), for n > omega.

    Bounded, commutes with A, and shares A's eigenbasis when available
    (eigenvalues map to n lam/(n - lam))."""
    if not n > A.spectral_bound:
        raise ValueError(
            f"need n > spectral bound ({A.spectral_bound:.6g}), got n = {n}"
        )
    if A.spectral is not None:
        lam = A.spectral.eigenvalues
        lam_n = n * lam / (n - lam)
        v = A.spectral.eigenvectors
        m = (v * lam_n[None, :]) @ v.T
        m = 0.5 * (m + m.T)  # symmetric source stays symmetric
        return Operator(
            matrix=m, spectral=SpectralData(lam_n, v), spectral_bound=float(np.max(lam_n))
        )
    r = resolvent_op(A, n)
    m = n * n * r - n * np.eye(A.dim)
    ev = np.linalg.eigvals(m)
    return Operator(matrix=m, spectral=None, spectral_bound=float(np.max(ev.real)))


def semigroup(A: Operator, t: float) -> np.ndarray:
    """e^{tA}: spectral path when available, else Pade scaling-and-squaring.

    t = 0 returns the identity exactly; t * spectral_bound > 700 is reported
    as overflow instead of silently returning inf."""
    if t < 0:
        raise ValueError("semigroup requires t >= 0")
    if t == 0.0:
        return np.eye(A.dim)
    if t * A.spectral_bound > 700.0:
        raise OverflowError(
            f"exp({t} * A) overflows: t * spectral_bound = {t * A.spectral_bound:.3g} > 700"
        )
    if A.spectral is not None:
        lam, v = A.spectral.eigenvalues, A.spectral.eigenvectors
        return (v * np.exp(t * lam)[None, :]) @ v.T
    return scipy.linalg.expm(t * A.matrix)


def adjoint(A: Operator) -> Operator:
    """Matrix transpose; symmetric spectral data carries over unchanged."""
    return Operator(
        matrix=A.matrix.T.copy(),
        spectral=A.spectral,
        spectral_bound=A.spectral_bound,
    )
